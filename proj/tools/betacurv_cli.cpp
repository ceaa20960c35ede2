#include <algorithm>
#include <cstdint>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "betacurv/beta.hpp"
#include "betacurv/csv.hpp"
#include "betacurv/curvature.hpp"
#include "betacurv/errors.hpp"
#include "betacurv/measure.hpp"
#include "betacurv/report_json.hpp"
#include "betacurv/rng.hpp"
#include "betacurv/suite.hpp"
#include "betacurv/synth.hpp"
#include "betacurv/verify.hpp"
#include "betacurv/version.hpp"

namespace {

using namespace betacurv;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw InputError("cannot parse " + what + " value '" + text + "'");
  }
}

Eigen::VectorXd parse_point(const std::string& text) {
  const std::vector<std::string> parts = split(text, ',');
  if (parts.empty()) throw InputError("empty point '" + text + "'");
  Eigen::VectorXd point(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i)
    point[static_cast<Eigen::Index>(i)] = parse_double(parts[i], "coordinate");
  return point;
}

std::vector<std::int64_t> parse_corner(const std::string& text) {
  std::vector<std::int64_t> corner;
  for (const std::string& part : split(text, ',')) {
    try {
      std::size_t used = 0;
      corner.push_back(std::stoll(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw InputError("cannot parse cube corner component '" + part + "'");
    }
  }
  if (corner.empty()) throw InputError("empty cube corner");
  return corner;
}

// Generator specs look like "segment:count=20,length=2,noise=0.01". Keys not
// consumed by the named generator are rejected so typos fail loudly.
struct GenArgs {
  std::map<std::string, double> kv;

  double take(const std::string& key, double fallback) {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    const double value = it->second;
    kv.erase(it);
    return value;
  }
  int take_int(const std::string& key, int fallback) {
    return static_cast<int>(take(key, fallback));
  }
};

PointCloudMeasure build_generator(const std::string& name, GenArgs& args, std::uint64_t seed) {
  if (name == "triangle") return make_triangle();
  if (name == "segment") {
    SegmentSpec spec;
    spec.length = args.take("length", spec.length);
    spec.count = args.take_int("count", spec.count);
    spec.ambient_dim = args.take_int("dim", spec.ambient_dim);
    return synthesize_segment(spec);
  }
  if (name == "circle") {
    CircleSpec spec;
    spec.radius = args.take("radius", spec.radius);
    spec.count = args.take_int("count", spec.count);
    return synthesize_circle(spec);
  }
  if (name == "grid") {
    PlaneGridSpec spec;
    spec.side = args.take("side", spec.side);
    spec.per_side = args.take_int("per_side", spec.per_side);
    spec.ambient_dim = args.take_int("dim", spec.ambient_dim);
    return synthesize_plane_grid(spec);
  }
  if (name == "sphere") {
    SphereSpec spec;
    spec.radius = args.take("radius", spec.radius);
    spec.count = args.take_int("count", spec.count);
    return synthesize_sphere(spec);
  }
  if (name == "random") {
    RandomCloudSpec spec;
    spec.ambient_dim = args.take_int("dim", spec.ambient_dim);
    spec.count = args.take_int("count", spec.count);
    spec.box_halfwidth = args.take("halfwidth", spec.box_halfwidth);
    spec.weight_lo = args.take("wlo", spec.weight_lo);
    spec.weight_hi = args.take("whi", spec.weight_hi);
    return synthesize_random_cloud(spec, seed);
  }
  throw InputError("unknown generator '" + name +
                   "' (expected triangle, segment, circle, grid, sphere or random)");
}

PointCloudMeasure parse_generator(const std::string& spec, std::uint64_t seed) {
  std::string name = spec;
  GenArgs args;
  if (const auto pos = spec.find(':'); pos != std::string::npos) {
    name = spec.substr(0, pos);
    for (const std::string& pair : split(spec.substr(pos + 1), ',')) {
      const auto eq = pair.find('=');
      if (eq == std::string::npos)
        throw InputError("generator argument '" + pair + "' is not key=value");
      args.kv[pair.substr(0, eq)] = parse_double(pair.substr(eq + 1), pair.substr(0, eq));
    }
  }
  SplitMix64 seeds(seed);
  const std::uint64_t gen_seed = seeds.next();
  const std::uint64_t noise_seed = seeds.next();
  const double noise = args.take("noise", 0.0);
  PointCloudMeasure mu = build_generator(name, args, gen_seed);
  if (!args.kv.empty())
    throw InputError("generator '" + name + "' does not accept key '" +
                     args.kv.begin()->first + "'");
  if (noise > 0.0) mu = add_isotropic_noise(mu, noise, noise_seed);
  return mu;
}

struct MeasureOpts {
  std::string input;
  std::string gen;
};

void add_measure_options(CLI::App* cmd, MeasureOpts& opts) {
  auto* input = cmd->add_option("--input", opts.input, "CSV atom list, header x0,..,x{n-1}[,w]");
  auto* gen = cmd->add_option(
      "--gen", opts.gen,
      "synthetic measure NAME[:key=val,...]; names: triangle, segment, circle, grid, "
      "sphere, random; all accept noise=AMPLITUDE");
  input->excludes(gen);
  gen->excludes(input);
}

PointCloudMeasure make_measure(const MeasureOpts& opts, std::uint64_t seed) {
  if (!opts.input.empty()) return load_csv_file(opts.input);
  if (!opts.gen.empty()) return parse_generator(opts.gen, seed);
  throw InputError("one of --input or --gen is required");
}

Eigen::VectorXd resolve_center(const PointCloudMeasure& mu, const std::string& center,
                               int atom) {
  if (!center.empty()) {
    Eigen::VectorXd point = parse_point(center);
    if (point.size() != mu.ambient_dim())
      throw InputError("--center has " + std::to_string(point.size()) +
                       " coordinates, the measure lives in dimension " +
                       std::to_string(mu.ambient_dim()));
    return point;
  }
  if (atom < 0 || atom >= mu.atom_count())
    throw InputError("--atom " + std::to_string(atom) + " is out of range (0.." +
                     std::to_string(mu.atom_count() - 1) + ")");
  return mu.positions().col(atom);
}

DyadicCube resolve_cube(const PointCloudMeasure& mu, int level, const std::string& corner,
                        const std::string& center, int atom) {
  if (!corner.empty()) {
    std::vector<std::int64_t> parsed = parse_corner(corner);
    if (static_cast<int>(parsed.size()) != mu.ambient_dim())
      throw InputError("--cube-corner has " + std::to_string(parsed.size()) +
                       " components, the measure lives in dimension " +
                       std::to_string(mu.ambient_dim()));
    return DyadicCube(level, std::move(parsed));
  }
  return DyadicCube::containing(resolve_center(mu, center, atom), level);
}

void emit(const std::string& content, const std::string& output) {
  if (output.empty())
    std::cout << content;
  else
    write_file_atomic(output, content);
}

int report_exit(const std::vector<VerificationReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const VerificationReport& r) { return r.pass; })
             ? 0
             : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"beta numbers, densities and discrete curvature of finite atomic measures"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  int exit_code = 0;

  // info
  auto* info = app.add_subcommand("info", "describe a measure");
  struct {
    MeasureOpts measure;
    std::uint64_t seed = 1;
    std::string output;
  } info_opts;
  add_measure_options(info, info_opts.measure);
  info->add_option("--seed", info_opts.seed, "seed for random generators");
  info->add_option("--output", info_opts.output, "write the report to this path");
  info->callback([&] {
    const PointCloudMeasure mu = make_measure(info_opts.measure, info_opts.seed);
    std::vector<std::pair<std::string, double>> values{
        {"ambient_dim", static_cast<double>(mu.ambient_dim())},
        {"atom_count", static_cast<double>(mu.atom_count())},
        {"total_mass", mu.total_mass()},
    };
    for (int i = 0; i < mu.ambient_dim(); ++i) {
      const auto axis = std::to_string(i);
      if (mu.atom_count() > 0) {
        values.emplace_back("bbox_lo_" + axis, mu.positions().row(i).minCoeff());
        values.emplace_back("bbox_hi_" + axis, mu.positions().row(i).maxCoeff());
      }
    }
    emit(scalar_document("info", values), info_opts.output);
  });

  // beta
  auto* beta = app.add_subcommand("beta", "optimal-plane beta number on a ball");
  struct {
    MeasureOpts measure;
    std::string center;
    int atom = 0;
    double r = 1.0;
    int m = 1;
    double p = 2.0;
    bool centred = false;
    std::uint64_t seed = 1;
    std::string output;
  } beta_opts;
  add_measure_options(beta, beta_opts.measure);
  beta->add_option("--center", beta_opts.center, "ball center as comma separated coordinates");
  beta->add_option("--atom", beta_opts.atom, "center on this atom when --center is absent");
  beta->add_option("--r", beta_opts.r, "ball radius")->required();
  beta->add_option("--m", beta_opts.m, "plane dimension");
  beta->add_option("--p", beta_opts.p, "moment exponent");
  beta->add_flag("--centred", beta_opts.centred, "planes constrained through the center");
  beta->add_option("--seed", beta_opts.seed, "seed for random generators");
  beta->add_option("--output", beta_opts.output, "write the report to this path");
  beta->callback([&] {
    const PointCloudMeasure mu = make_measure(beta_opts.measure, beta_opts.seed);
    const Eigen::VectorXd x = resolve_center(mu, beta_opts.center, beta_opts.atom);
    const BetaParams params{beta_opts.m, beta_opts.p, beta_opts.centred};
    const BetaValue value = beta_ball(mu, x, beta_opts.r, params);
    emit(scalar_document("beta",
                         {
                             {"beta", value.value},
                             {"centred", beta_opts.centred ? 1.0 : 0.0},
                             {"exact", value.exact ? 1.0 : 0.0},
                             {"m", static_cast<double>(beta_opts.m)},
                             {"p", beta_opts.p},
                             {"r", beta_opts.r},
                             {"theta", theta_ball(mu, x, beta_opts.r, beta_opts.m)},
                         }),
         beta_opts.output);
  });

  // profile
  auto* profile = app.add_subcommand("profile", "piecewise scale profile of beta and mass");
  struct {
    MeasureOpts measure;
    std::string center;
    int atom = 0;
    double rho = kInf;
    int m = 1;
    double p = 2.0;
    bool centred = false;
    std::string format = "json";
    std::uint64_t seed = 1;
    std::string output;
  } profile_opts;
  add_measure_options(profile, profile_opts.measure);
  profile->add_option("--center", profile_opts.center, "profile center");
  profile->add_option("--atom", profile_opts.atom, "center on this atom when --center is absent");
  profile->add_option("--rho", profile_opts.rho, "largest radius, may be inf");
  profile->add_option("--m", profile_opts.m, "plane dimension");
  profile->add_option("--p", profile_opts.p, "moment exponent");
  profile->add_flag("--centred", profile_opts.centred, "planes constrained through the center");
  profile->add_option("--format", profile_opts.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  profile->add_option("--seed", profile_opts.seed, "seed for random generators");
  profile->add_option("--output", profile_opts.output, "write the report to this path");
  profile->callback([&] {
    const PointCloudMeasure mu = make_measure(profile_opts.measure, profile_opts.seed);
    const Eigen::VectorXd x = resolve_center(mu, profile_opts.center, profile_opts.atom);
    const BetaParams params{profile_opts.m, profile_opts.p, profile_opts.centred};
    const ScaleProfile prof = scale_profile(mu, x, profile_opts.rho, params);
    emit(profile_opts.format == "csv" ? profile_csv(prof) : profile_document(prof),
         profile_opts.output);
  });

  // curvature
  auto* curvature = app.add_subcommand("curvature", "pointwise discrete curvature at a center");
  struct {
    MeasureOpts measure;
    std::string center;
    int atom = 0;
    double R = kInf;
    int m = 1;
    double p = 2.0;
    double alpha = 0.0;
    std::string mode = "exact";
    std::uint64_t samples = 100000;
    double budget = 1.0e8;
    std::uint64_t seed = 1;
    std::string output;
  } curv_opts;
  add_measure_options(curvature, curv_opts.measure);
  curvature->add_option("--center", curv_opts.center, "evaluation point");
  curvature->add_option("--atom", curv_opts.atom, "center on this atom when --center is absent");
  curvature->add_option("--R", curv_opts.R, "ball radius, may be inf");
  curvature->add_option("--m", curv_opts.m, "plane dimension");
  curvature->add_option("--p", curv_opts.p, "moment exponent");
  curvature->add_option("--alpha", curv_opts.alpha, "scale weight exponent");
  curvature->add_option("--mode", curv_opts.mode, "exact enumeration or mc sampling")
      ->check(CLI::IsMember({"exact", "mc"}));
  curvature->add_option("--samples", curv_opts.samples, "Monte Carlo sample count");
  curvature->add_option("--budget", curv_opts.budget, "largest tuple count exact mode accepts");
  curvature->add_option("--seed", curv_opts.seed, "seed for generators and sampling");
  curvature->add_option("--output", curv_opts.output, "write the report to this path");
  curvature->callback([&] {
    const PointCloudMeasure mu = make_measure(curv_opts.measure, curv_opts.seed);
    const Eigen::VectorXd x = resolve_center(mu, curv_opts.center, curv_opts.atom);
    const CurvatureParams params{curv_opts.m, curv_opts.p, curv_opts.alpha, curv_opts.R};
    const CurvatureEstimate est =
        curv_opts.mode == "mc"
            ? curvature_mc(mu, x, params, curv_opts.samples, curv_opts.seed)
            : curvature_exact(mu, x, params, curv_opts.budget);
    emit(scalar_document("curvature",
                         {
                             {"R", curv_opts.R},
                             {"alpha", curv_opts.alpha},
                             {"exact", est.exact ? 1.0 : 0.0},
                             {"m", static_cast<double>(curv_opts.m)},
                             {"p", curv_opts.p},
                             {"std_error", est.std_error},
                             {"terms", static_cast<double>(est.terms)},
                             {"value", est.value},
                         },
                         {{"mode", curv_opts.mode}}),
         curv_opts.output);
  });

  // mp
  auto* mp = app.add_subcommand("mp", "global Menger-type tuple energy");
  struct {
    MeasureOpts measure;
    int m = 1;
    double p = 2.0;
    double budget = 1.0e8;
    std::uint64_t seed = 1;
    std::string output;
  } mp_opts;
  add_measure_options(mp, mp_opts.measure);
  mp->add_option("--m", mp_opts.m, "plane dimension");
  mp->add_option("--p", mp_opts.p, "moment exponent");
  mp->add_option("--budget", mp_opts.budget, "largest tuple count accepted");
  mp->add_option("--seed", mp_opts.seed, "seed for random generators");
  mp->add_option("--output", mp_opts.output, "write the report to this path");
  mp->callback([&] {
    const PointCloudMeasure mu = make_measure(mp_opts.measure, mp_opts.seed);
    const double value = m_p_functional(mu, mp_opts.p, mp_opts.m, mp_opts.budget);
    emit(scalar_document("mp", {{"m", static_cast<double>(mp_opts.m)},
                                {"p", mp_opts.p},
                                {"value", value}}),
         mp_opts.output);
  });

  // verify-lemma1
  auto* vl1 = app.add_subcommand("verify-lemma1",
                                 "pointwise curvature against the multiscale beta bound");
  struct {
    MeasureOpts measure;
    std::string center;
    double R = kInf;
    int m = 1;
    double p = 2.0;
    double alpha = 0.0;
    double budget = 1.0e8;
    std::uint64_t seed = 1;
    std::string output;
  } vl1_opts;
  add_measure_options(vl1, vl1_opts.measure);
  vl1->add_option("--center", vl1_opts.center,
                  "verify at this point only; default is every atom");
  vl1->add_option("--R", vl1_opts.R, "ball radius, may be inf");
  vl1->add_option("--m", vl1_opts.m, "plane dimension");
  vl1->add_option("--p", vl1_opts.p, "moment exponent");
  vl1->add_option("--alpha", vl1_opts.alpha, "scale weight exponent");
  vl1->add_option("--budget", vl1_opts.budget, "largest tuple count accepted");
  vl1->add_option("--seed", vl1_opts.seed, "seed for random generators");
  vl1->add_option("--output", vl1_opts.output, "write the report to this path");
  vl1->callback([&] {
    const PointCloudMeasure mu = make_measure(vl1_opts.measure, vl1_opts.seed);
    std::vector<VerificationReport> reports;
    if (!vl1_opts.center.empty()) {
      reports.push_back(verify_lemma1(mu, resolve_center(mu, vl1_opts.center, 0), vl1_opts.R,
                                      vl1_opts.m, vl1_opts.p, vl1_opts.alpha,
                                      vl1_opts.budget));
    } else {
      for (int a = 0; a < mu.atom_count(); ++a)
        reports.push_back(verify_lemma1(mu, mu.positions().col(a), vl1_opts.R, vl1_opts.m,
                                        vl1_opts.p, vl1_opts.alpha, vl1_opts.budget));
    }
    emit(verification_document("verify-lemma1", vl1_opts.seed, reports), vl1_opts.output);
    exit_code = report_exit(reports);
  });

  // verify-lemma2
  auto* vl2 = app.add_subcommand(
      "verify-lemma2", "centred multiscale integral over a cube against the plain one over 3Q");
  struct {
    MeasureOpts measure;
    std::string center;
    int atom = 0;
    std::string corner;
    int level = 0;
    double rho = 0.0;
    int m = 1;
    double p = 2.0;
    double q = 2.0;
    double alpha = 0.0;
    double gamma = 0.0;
    std::uint64_t seed = 1;
    std::string output;
  } vl2_opts;
  add_measure_options(vl2, vl2_opts.measure);
  vl2->add_option("--cube-level", vl2_opts.level, "dyadic level, side 2^-level");
  vl2->add_option("--cube-corner", vl2_opts.corner,
                  "integer corner of the cube; default is the cube holding --center/--atom");
  vl2->add_option("--center", vl2_opts.center, "point selecting the cube");
  vl2->add_option("--atom", vl2_opts.atom, "atom selecting the cube when --center is absent");
  vl2->add_option("--rho", vl2_opts.rho, "upper integration limit")->required();
  vl2->add_option("--m", vl2_opts.m, "plane dimension");
  vl2->add_option("--p", vl2_opts.p, "beta moment exponent");
  vl2->add_option("--q", vl2_opts.q, "beta power in the integrand");
  vl2->add_option("--alpha", vl2_opts.alpha, "scale weight exponent");
  vl2->add_option("--gamma", vl2_opts.gamma, "density exponent");
  vl2->add_option("--seed", vl2_opts.seed, "seed for random generators");
  vl2->add_option("--output", vl2_opts.output, "write the report to this path");
  vl2->callback([&] {
    const PointCloudMeasure mu = make_measure(vl2_opts.measure, vl2_opts.seed);
    const DyadicCube cube =
        resolve_cube(mu, vl2_opts.level, vl2_opts.corner, vl2_opts.center, vl2_opts.atom);
    MultiscaleParams params;
    params.m = vl2_opts.m;
    params.p = vl2_opts.p;
    params.q = vl2_opts.q;
    params.alpha = vl2_opts.alpha;
    params.gamma = vl2_opts.gamma;
    const std::vector<VerificationReport> reports{
        verify_lemma2(mu, cube, vl2_opts.rho, params)};
    emit(verification_document("verify-lemma2", vl2_opts.seed, reports), vl2_opts.output);
    exit_code = report_exit(reports);
  });

  // verify-corollary
  auto* vc = app.add_subcommand(
      "verify-corollary", "cube-integrated curvature against plain multiscale integrals on 3Q");
  struct {
    MeasureOpts measure;
    std::string center;
    int atom = 0;
    std::string corner;
    int level = 0;
    double R = 0.0;
    int m = 1;
    double p = 2.0;
    double alpha = 0.0;
    double budget = 1.0e8;
    std::uint64_t seed = 1;
    std::string output;
  } vc_opts;
  add_measure_options(vc, vc_opts.measure);
  vc->add_option("--cube-level", vc_opts.level, "dyadic level, side 2^-level");
  vc->add_option("--cube-corner", vc_opts.corner,
                 "integer corner of the cube; default is the cube holding --center/--atom");
  vc->add_option("--center", vc_opts.center, "point selecting the cube");
  vc->add_option("--atom", vc_opts.atom, "atom selecting the cube when --center is absent");
  vc->add_option("--R", vc_opts.R, "curvature ball radius")->required();
  vc->add_option("--m", vc_opts.m, "plane dimension");
  vc->add_option("--p", vc_opts.p, "moment exponent");
  vc->add_option("--alpha", vc_opts.alpha, "scale weight exponent");
  vc->add_option("--budget", vc_opts.budget, "largest tuple count accepted");
  vc->add_option("--seed", vc_opts.seed, "seed for random generators");
  vc->add_option("--output", vc_opts.output, "write the report to this path");
  vc->callback([&] {
    const PointCloudMeasure mu = make_measure(vc_opts.measure, vc_opts.seed);
    const DyadicCube cube =
        resolve_cube(mu, vc_opts.level, vc_opts.corner, vc_opts.center, vc_opts.atom);
    const std::vector<VerificationReport> reports{verify_corollary_lw11(
        mu, cube, vc_opts.R, vc_opts.m, vc_opts.p, vc_opts.alpha, vc_opts.budget)};
    emit(verification_document("verify-corollary", vc_opts.seed, reports), vc_opts.output);
    exit_code = report_exit(reports);
  });

  // verify-bounds
  auto* vb = app.add_subcommand("verify-bounds",
                                "randomized elementary height, diameter and growth bounds");
  struct {
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    std::string output;
  } vb_opts;
  vb->add_option("--trials", vb_opts.trials, "random configurations to test");
  vb->add_option("--seed", vb_opts.seed, "seed for the trial stream");
  vb->add_option("--output", vb_opts.output, "write the report to this path");
  vb->callback([&] {
    const std::vector<VerificationReport> reports{
        verify_pointwise_bounds(vb_opts.trials, vb_opts.seed)};
    emit(verification_document("verify-bounds", vb_opts.seed, reports), vb_opts.output);
    exit_code = report_exit(reports);
  });

  // suite
  auto* suite = app.add_subcommand("suite", "run every acceptance battery");
  struct {
    std::uint64_t seed = 1;
    std::string size = "full";
    std::string output;
  } suite_opts;
  suite->add_option("--seed", suite_opts.seed, "root seed for all batteries");
  suite->add_option("--size", suite_opts.size, "smoke or full")
      ->check(CLI::IsMember({"smoke", "full"}));
  suite->add_option("--output", suite_opts.output, "write the report to this path");
  suite->callback([&] {
    const SuiteResult result =
        run_suite(suite_opts.seed, suite_opts.size == "smoke" ? SuiteSize::smoke
                                                              : SuiteSize::full);
    emit(suite_document(result), suite_opts.output);
    exit_code = result.pass ? 0 : 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
