#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mindiff/errors.hpp"
#include "mindiff/pointsets.hpp"

using namespace mindiff;

namespace {

GeneratorSpec spec(Family f, std::uint64_t seed = 1, double h = 1.0) { return {f, seed, h, {}}; }

int count_rows_in(const Eigen::MatrixXd& needles, const Eigen::MatrixXd& haystack) {
  int hits = 0;
  for (Eigen::Index i = 0; i < needles.rows(); ++i) {
    for (Eigen::Index j = 0; j < haystack.rows(); ++j) {
      if (needles.row(i) == haystack.row(j)) {
        ++hits;
        break;
      }
    }
  }
  return hits;
}

}  // namespace

TEST_CASE("splitmix64 reference stream") {
  SplitMix64 rng(1234567);
  CHECK(rng.next() == 6457827717110365317ULL);
  CHECK(rng.next() == 3203168211198807973ULL);
  CHECK(rng.next() == 9817491932198370423ULL);
  CHECK(rng.next() == 4593380528125082431ULL);
  CHECK(rng.next() == 16408922859458223821ULL);

  SplitMix64 u(1234567);
  CHECK(u.uniform() == static_cast<double>(6457827717110365317ULL >> 11) * 0x1.0p-53);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform(-1.0, 1.0);
    CHECK(v >= -1.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("family names") {
  CHECK(parse_family("x4") == Family::x4);
  CHECK(std::string(to_string(Family::x5)) == "x5");
  CHECK_THROWS_AS(parse_family("x9"), Error);
}

TEST_CASE("point counts and the origin") {
  const std::pair<Family, int> expected[] = {
      {Family::x1, 32}, {Family::x2, 32}, {Family::x3, 32}, {Family::x4, 150}, {Family::x5, 150}};
  for (auto [family, count] : expected) {
    CAPTURE(to_string(family));
    const CenterSet S = generate(spec(family, 3));
    CHECK(S.size() == count);
    CHECK(S.points().row(0).isZero(0.0));
    CHECK(S.z().isZero(0.0));
    CHECK(S.points().cwiseAbs().maxCoeff() <= 1.0 + kCurvePerturbation);
    CHECK(h_radius(S) <= std::sqrt(2.0) + 1e-6);
  }
}

TEST_CASE("uniform family") {
  const CenterSet S = generate(spec(Family::x1, 1));
  CHECK(S.size() == 32);
  CHECK(S.points().row(0).isZero(0.0));
  CHECK(S.points().cwiseAbs().maxCoeff() <= 1.0);
}

TEST_CASE("curve families stay within the perturbation") {
  const CenterSet lines = generate(spec(Family::x3, 11));
  for (int j = 0; j < lines.size(); ++j) {
    const double y = lines.points()(j, 1);
    const double off = std::min({std::abs(y + 0.5), std::abs(y), std::abs(y - 0.5)});
    CHECK(off <= kCurvePerturbation);
  }
  int on_middle = 0;
  for (int j = 0; j < lines.size(); ++j) on_middle += std::abs(lines.points()(j, 1)) <= kCurvePerturbation;
  CHECK(on_middle == 10);

  const CenterSet curves = generate(spec(Family::x2, 11));
  for (int j = 1; j < curves.size(); ++j) {
    const double x = curves.points()(j, 0), y = curves.points()(j, 1);
    const double line = std::abs(y);
    const double hyperbola = std::abs(x * y - 0.25);
    const double ellipse = std::abs((x / 0.9) * (x / 0.9) + (y / 0.6) * (y / 0.6) - 1);
    CHECK(std::min({line, hyperbola, ellipse}) <= 1e-5);
  }
}

TEST_CASE("scaled copies") {
  const double h = 1.0 / std::sqrt(2.0);
  const CenterSet base = generate(spec(Family::x3, 5));
  const CenterSet S = generate(spec(Family::x3, 5, h));
  CHECK(S.size() == 32);
  CHECK(S.points().cwiseAbs().maxCoeff() <= h + 1e-6);
  CHECK(S.points() == base.points() * h);
  CHECK(h_radius(generate(spec(Family::x1, 2, 0.25))) <= 0.25 * std::sqrt(2.0));
  CHECK_THROWS_AS(generate(spec(Family::x1, 1, 0.0)), Error);
}

TEST_CASE("the replaced-core family embeds the scaled lines") {
  for (std::uint64_t seed : {1, 2, 77}) {
    const CenterSet x5 = generate(spec(Family::x5, seed));
    const CenterSet core = generate(spec(Family::x3, seed, 1.0 / std::sqrt(2.0)));
    const CenterSet x4 = generate(spec(Family::x4, seed));
    CHECK(x5.size() == 150);
    CHECK(count_rows_in(core.points(), x5.points()) == 32);
    // The other 118 are the points of the random set farthest from the
    // origin, which itself belongs to both sets.
    CHECK(count_rows_in(x5.points(), x4.points()) == 119);
    double kept_min = INFINITY;
    for (int j = 0; j < x5.size(); ++j) {
      const bool from_random = count_rows_in(x5.points().row(j), x4.points()) == 1;
      const bool from_core = count_rows_in(x5.points().row(j), core.points()) == 1;
      if (from_random && !from_core) kept_min = std::min(kept_min, x5.distance(j));
    }
    int closer = 0;
    for (int j = 0; j < x4.size(); ++j) closer += x4.distance(j) < kept_min;
    CHECK(closer == 32);
  }
}

TEST_CASE("determinism") {
  for (Family f : {Family::x1, Family::x2, Family::x3, Family::x4, Family::x5}) {
    CHECK(generate(spec(f, 42)).points() == generate(spec(f, 42)).points());
  }
  CHECK(generate(spec(Family::x1, 1)).points() != generate(spec(Family::x1, 2)).points());
  CHECK(generate(spec(Family::x1, 1)).points() != generate(spec(Family::x4, 1)).points().topRows(32));
}

TEST_CASE("files and sidecars") {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "mindiff_pointsets_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "x2.csv").string();
  const GeneratorSpec s = spec(Family::x2, 9, 0.5);
  const CenterSet S = generate(s);
  write_point_set(path, s, S);

  const CenterSet back = generate({Family::file, 0, 1.0, path});
  CHECK(back.points() == S.points());
  CHECK(generate({Family::file, 0, 2.0, path}).points() == S.points() * 2.0);

  std::ifstream in(path + ".json");
  std::stringstream text;
  text << in.rdbuf();
  const auto j = nlohmann::json::parse(text.str());
  CHECK(j["family"] == "x2");
  CHECK(j["seed"] == 9);
  CHECK(j["h"] == 0.5);
  CHECK(j["count"] == 32);
  CHECK(text.str() == sidecar_json(s, S));

  CHECK_THROWS_AS(generate({Family::file, 0, 1.0, (dir / "missing.csv").string()}), Error);
  std::filesystem::remove_all(dir);
}
