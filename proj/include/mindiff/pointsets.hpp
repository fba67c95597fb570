#pragma once

// Seeded generators for the benchmark center sets. All sets live in
// [-1, 1]^2, contain the origin as their first point and use z = 0.

#include <cstdint>
#include <string>

#include "mindiff/geometry.hpp"

namespace mindiff {

/// splitmix64 (Steele, Lea, Flood 2014). Doubles take the top 53 bits.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)

 private:
  std::uint64_t state_;
};

enum class Family { x1, x2, x3, x4, x5, file };
const char* to_string(Family f);
/// Throws Error(invalid_argument) for unknown names.
Family parse_family(const std::string& name);

struct GeneratorSpec {
  Family family = Family::x1;
  std::uint64_t seed = 1;
  double h = 1.0;
  std::string path;  // CSV source for Family::file
};

/// Largest coordinate perturbation applied to the curve-based families.
inline constexpr double kCurvePerturbation = 1e-6;

CenterSet generate(const GeneratorSpec& spec);

/// {"family": ..., "seed": ..., "h": ..., "count": ...}
std::string sidecar_json(const GeneratorSpec& spec, const CenterSet& S);

/// Writes the points as CSV to `path` and the sidecar to `path + ".json"`.
void write_point_set(const std::string& path, const GeneratorSpec& spec, const CenterSet& S);

}  // namespace mindiff
