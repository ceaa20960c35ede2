#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace betacurv {

// Neumaier-compensated accumulator. Used for every mass / moment / integral
// accumulation so results do not depend on how the compiler associates a
// plain loop, and so mixed-magnitude weight sets do not lose mass.
class KahanSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Streaming pairwise reduction with a fixed tree shape: level i holds the sum
// of a complete block of 2^i inputs, carries propagate like a binary counter.
// Deterministic for a fixed input order and O(log n) state, which is what the
// exact curvature enumeration needs (it cannot buffer 1e8 terms).
class PairwiseSum {
 public:
  void add(double x) {
    std::uint64_t mask = 1;
    for (std::size_t i = 0; i < levels_.size() && (count_ & mask); ++i, mask <<= 1) {
      x += levels_[i];
      levels_[i] = 0.0;
    }
    const std::size_t slot = lowest_zero_bit(count_);
    if (slot >= levels_.size()) levels_.resize(slot + 1, 0.0);
    levels_[slot] = x;
    ++count_;
  }

  double value() const {
    double total = 0.0;
    for (double level : levels_) total += level;
    return total;
  }

  std::uint64_t count() const { return count_; }

 private:
  static std::size_t lowest_zero_bit(std::uint64_t v) {
    std::size_t i = 0;
    while (v & 1) {
      v >>= 1;
      ++i;
    }
    return i;
  }

  std::vector<double> levels_;
  std::uint64_t count_ = 0;
};

// Volume of the m-dimensional unit ball. Small integer cases are pinned so
// the common normalizations (2, pi) are exact.
inline double unit_ball_volume(int m) {
  switch (m) {
    case 0: return 1.0;
    case 1: return 2.0;
    case 2: return 3.14159265358979323846;
    case 3: return 4.0 * 3.14159265358979323846 / 3.0;
    default:
      return std::pow(3.14159265358979323846, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
  }
}

}  // namespace betacurv
