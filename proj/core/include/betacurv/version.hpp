#pragma once

namespace betacurv {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace betacurv
