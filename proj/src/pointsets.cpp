#include "mindiff/pointsets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <vector>

#include <json.hpp>

#include "mindiff/errors.hpp"

namespace mindiff {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SplitMix64::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

const char* to_string(Family f) {
  switch (f) {
    case Family::x1: return "x1";
    case Family::x2: return "x2";
    case Family::x3: return "x3";
    case Family::x4: return "x4";
    case Family::x5: return "x5";
    case Family::file: return "file";
  }
  return "unknown";
}

Family parse_family(const std::string& name) {
  for (Family f : {Family::x1, Family::x2, Family::x3, Family::x4, Family::x5, Family::file}) {
    if (name == to_string(f)) return f;
  }
  throw Error(ErrorKind::invalid_argument, "unknown point set family '" + name + "'");
}

namespace {

// Each family draws from its own stream so that adding draws to one family
// never shifts another.
constexpr std::uint64_t kStreamX1 = 0x5831000000000001ULL;
constexpr std::uint64_t kStreamX2 = 0x5832000000000002ULL;
constexpr std::uint64_t kStreamX3 = 0x5833000000000003ULL;
constexpr std::uint64_t kStreamX4 = 0x5834000000000004ULL;

using Points = std::vector<Eigen::Vector2d>;

Points uniform_square(std::uint64_t seed, std::uint64_t stream, int count) {
  SplitMix64 rng(seed ^ stream);
  Points out{Eigen::Vector2d::Zero()};
  for (int i = 0; i < count; ++i) {
    const double x = rng.uniform(-1.0, 1.0);
    const double y = rng.uniform(-1.0, 1.0);
    out.emplace_back(x, y);
  }
  return out;
}

void perturb(Points& pts, std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 rng(seed ^ stream);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    pts[i].x() += rng.uniform(-kCurvePerturbation, kCurvePerturbation);
    pts[i].y() += rng.uniform(-kCurvePerturbation, kCurvePerturbation);
  }
}

// Origin, 11 points on y = 0, 10 on the hyperbola xy = 1/4, 10 on the
// ellipse (x/0.9)^2 + (y/0.6)^2 = 1.
Points curves_x2(std::uint64_t seed) {
  Points pts{Eigen::Vector2d::Zero()};
  for (int i = 0; i <= 10; ++i) pts.emplace_back(-1.0 + 2.0 * i / 11.0, 0.0);
  for (int i = 0; i <= 9; ++i) {
    const double x = 0.25 * std::pow(4.0, i / 9.0);
    pts.emplace_back(x, 0.25 / x);
  }
  const double pi = std::acos(-1.0);
  for (int i = 0; i < 10; ++i) {
    const double t = 2.0 * pi * (i + 0.5) / 10.0;
    pts.emplace_back(0.9 * std::cos(t), 0.6 * std::sin(t));
  }
  perturb(pts, seed, kStreamX2);
  return pts;
}

// Lines y = -0.5 and y = 0.5 with 11 points each, middle line y = 0 with 10
// points including the origin.
Points lines_x3(std::uint64_t seed) {
  Points pts{Eigen::Vector2d::Zero()};
  for (double y : {-0.5, 0.5}) {
    for (int i = 0; i <= 10; ++i) pts.emplace_back(-1.0 + 0.2 * i, y);
  }
  for (int k = -4; k <= 5; ++k) {
    if (k != 0) pts.emplace_back(0.2 * k, 0.0);
  }
  perturb(pts, seed, kStreamX3);
  return pts;
}

Points replaced_core_x5(std::uint64_t seed) {
  const Points base = uniform_square(seed, kStreamX4, 149);
  std::vector<std::size_t> order(base.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return base[a].norm() < base[b].norm(); });
  std::vector<bool> removed(base.size(), false);
  for (std::size_t i = 0; i < 32; ++i) removed[order[i]] = true;

  Points pts = lines_x3(seed);
  const double scale = 1.0 / std::sqrt(2.0);
  for (auto& p : pts) p *= scale;
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (!removed[i]) pts.push_back(base[i]);
  }
  return pts;
}

}  // namespace

CenterSet generate(const GeneratorSpec& spec) {
  if (!(spec.h > 0.0) || !std::isfinite(spec.h)) throw Error(ErrorKind::invalid_argument, "scaling h must be positive");
  Eigen::MatrixXd M;
  if (spec.family == Family::file) {
    M = read_points_csv(spec.path);
  } else {
    Points pts;
    switch (spec.family) {
      case Family::x1: pts = uniform_square(spec.seed, kStreamX1, 31); break;
      case Family::x2: pts = curves_x2(spec.seed); break;
      case Family::x3: pts = lines_x3(spec.seed); break;
      case Family::x4: pts = uniform_square(spec.seed, kStreamX4, 149); break;
      default: pts = replaced_core_x5(spec.seed); break;
    }
    M.resize(static_cast<Eigen::Index>(pts.size()), 2);
    for (std::size_t i = 0; i < pts.size(); ++i) M.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
  }
  M *= spec.h;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(M.cols());
  return CenterSet(std::move(z), std::move(M));
}

std::string sidecar_json(const GeneratorSpec& spec, const CenterSet& S) {
  nlohmann::ordered_json j;
  j["family"] = to_string(spec.family);
  j["seed"] = spec.seed;
  j["h"] = spec.h;
  j["count"] = S.size();
  return j.dump(2) + "\n";
}

void write_point_set(const std::string& path, const GeneratorSpec& spec, const CenterSet& S) {
  write_points_csv(path, S.points());
  std::ofstream out(path + ".json");
  if (!out) throw Error(ErrorKind::invalid_argument, "cannot write " + path + ".json");
  out << sidecar_json(spec, S);
}

}  // namespace mindiff
