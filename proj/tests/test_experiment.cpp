#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "mindiff/errors.hpp"
#include "mindiff/experiment.hpp"
#include "support.hpp"

using namespace mindiff;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.sets = {{Family::x1, 1, 1.0, {}}};
  cfg.q_values = {4, 5};
  cfg.mu_equals_q = true;
  cfg.h_exponents = {0, 1, 2};
  cfg.methods = {Method::l1, Method::ls};
  cfg.test_wce = false;
  return cfg;
}

std::string star_file() {
  const std::filesystem::path p = std::filesystem::temp_directory_path() / "mindiff_star.csv";
  write_points_csv(p.string(), testing::star().points());
  return p.string();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("slope fit") {
  std::vector<double> h, e2, e4;
  for (int n = 0; n < 6; ++n) {
    h.push_back(std::ldexp(1.0, -n));
    e2.push_back(h.back() * h.back());
    e4.push_back(7 * std::pow(h.back(), 4));
  }
  CHECK(slope_fit(h, e2) == doctest::Approx(2.0));
  CHECK(slope_fit(h, e4) == doctest::Approx(4.0));
  CHECK(slope_fit({1, 0.5, 0.25, 0.125, 0.0625}, {1, 0, 0.0625, -1, 0.00390625}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(slope_fit({1, 0.5, 0.25}, {1, 0, 0.0625}), Error);
  CHECK_THROWS_AS(slope_fit({1, 0.5}, {1, 0.25, 0.1}), Error);
}

TEST_CASE("star rows") {
  ExperimentConfig cfg;
  cfg.sets = {{Family::file, 0, 1.0, star_file()}};
  cfg.q_values = {3, 4};
  cfg.mu_values = {2.0};
  cfg.h_exponents = {0};
  cfg.methods = {Method::l1};
  const ExperimentResult res = run_experiment(cfg);
  REQUIRE(res.rows.size() == 2);
  for (const ExperimentRow& r : res.rows) {
    CHECK(r.status == "ok");
    CHECK(r.rho1 == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(r.w_1q == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(r.w_l1 == doctest::Approx(8.0).epsilon(1e-9));
    CHECK(r.support <= (r.q == 3 ? 6 : 10));
    CHECK(r.err_f2 <= r.bd_w1);
  }
}

TEST_CASE("grid shape, order and determinism") {
  ExperimentConfig cfg = small_config();
  cfg.sets.push_back({Family::x3, 2, 1.0, {}});
  cfg.mu_equals_q = false;
  cfg.mu_values = {0, 4};
  const ExperimentResult one = run_experiment(cfg);
  CHECK(one.rows.size() == 2 * 3 * 2 * 2 * 2);
  cfg.threads = 4;
  const ExperimentResult four = run_experiment(cfg);
  CHECK(format_csv(one) == format_csv(four));

  // Rows follow set, h, q, mu, method.
  CHECK(one.rows[0].set == "x1");
  CHECK(one.rows[1].method == Method::ls);
  CHECK(one.rows[2].mu == 4.0);
  CHECK(one.rows[4].q == 5);
  CHECK(one.rows[8].n == 1);
  CHECK(one.rows[24].set == "x3");
}

TEST_CASE("cells agree with the error bounds and each other") {
  ExperimentConfig cfg = small_config();
  cfg.h_exponents = {0, 1, 2, 3};
  const ExperimentResult res = run_experiment(cfg);
  CHECK(res.failures == 0);
  for (std::size_t i = 0; i < res.rows.size(); i += 2) {
    const ExperimentRow& l1 = res.rows[i];
    const ExperimentRow& ls = res.rows[i + 1];
    REQUIRE(l1.method == Method::l1);
    REQUIRE(ls.method == Method::ls);
    CHECK(l1.err_f2 <= l1.bd_w1);
    CHECK(ls.err_f2 <= ls.bd_w1);
    CHECK(l1.err_f2 <= l1.bd_gr1);
    CHECK(ls.err_f2 <= ls.bd_gr2);
    CHECK(std::abs(std::log10(l1.err_f2 / ls.err_f2)) <= 1.0);
    CHECK(l1.support <= (l1.q == 4 ? 10 : 15));
    CHECK(l1.rho2 == doctest::Approx(ls.rho2));
  }
}

TEST_CASE("errors of large-weight formulas keep their convergence rate") {
  // ||w||_1 ~ 1e6 at h = 1/64: a plain double evaluation stalls near 1e-10.
  ExperimentConfig cfg = small_config();
  cfg.q_values = {7};
  cfg.h_exponents = {4, 5, 6};
  cfg.test_f1 = false;
  const ExperimentResult res = run_experiment(cfg);
  REQUIRE(res.rows.size() == 6);
  for (const ExperimentRow& r : res.rows) CHECK(r.err_f2 <= r.bd_w1);
  for (std::size_t i = 0; i + 2 < res.rows.size(); ++i) {
    const double ratio = res.rows[i].err_f2 / res.rows[i + 2].err_f2;
    CHECK(ratio > 16.0);  // h^5 halving gives 32
  }
}

TEST_CASE("kernel precision guard") {
  ExperimentConfig cfg = small_config();
  cfg.q_values = {4};
  cfg.h_exponents = {0, 7};
  cfg.methods = {Method::l1, Method::kernel};
  cfg.test_wce = true;
  const ExperimentResult res = run_experiment(cfg);
  REQUIRE(res.rows.size() == 4);
  CHECK(res.rows[1].status == "ok");
  CHECK(res.rows[1].wce <= res.rows[0].wce);
  CHECK(std::isnan(res.rows[2].wce));
  CHECK(res.rows[3].status == "disabled");
  CHECK(res.failures == 0);
  REQUIRE(res.warnings.size() == 1);
  CHECK(res.warnings[0].find("n = 7") != std::string::npos);
}

TEST_CASE("failed cells are kept") {
  ExperimentConfig cfg;
  cfg.sets = {{Family::file, 0, 1.0, star_file()}};
  cfg.q_values = {3};
  cfg.mu_values = {2.0};
  cfg.h_exponents = {0};
  cfg.methods = {Method::l1, Method::ls};
  const ExperimentResult res = run_experiment(cfg);
  REQUIRE(res.rows.size() == 2);
  CHECK(res.rows[1].status == "not_unisolvent");
  CHECK(res.rows[1].failed());
  CHECK(res.failures == 1);
  const auto out = lines(format_csv(res));
  CHECK(out.size() == 3);
  CHECK(out[0] == csv_header());
  CHECK(out[2].find("not_unisolvent") != std::string::npos);
}

TEST_CASE("configuration files") {
  const ExperimentConfig cfg = parse_config_json(R"({
    "sets": [{"family": "x5", "seed": 3}, {"family": "file", "path": "pts.csv"}],
    "q": [7], "mu": [0, 7, 15], "h_exponents": 0,
    "methods": ["l1", "ls"], "tests": ["wce"], "kernel_rho": 8, "threads": 2,
    "csv": "out.csv", "manifest": "out.json"})");
  CHECK(cfg.sets.size() == 2);
  CHECK(cfg.sets[0].seed == 3);
  CHECK(cfg.sets[1].path == "pts.csv");
  CHECK(cfg.mu_values == std::vector<double>{0, 7, 15});
  CHECK(cfg.h_exponents == std::vector<int>{0});
  CHECK_FALSE(cfg.test_f1);
  CHECK(cfg.test_wce);
  CHECK(cfg.kernel_rho == 8.0);
  CHECK(cfg.csv_path == "out.csv");
  CHECK(parse_config_json(R"({"sets": [{"family": "x1"}], "q": 4, "mu": "q"})").mu_equals_q);

  CHECK_THROWS_AS(parse_config_json("{"), Error);
  CHECK_THROWS_AS(parse_config_json(R"({"sets": [{"family": "x9"}]})"), Error);
  CHECK_THROWS_AS(parse_config_json(R"({"sets": [{"family": "x1"}], "tests": ["f3"]})"), Error);
  CHECK_THROWS_AS(read_config_file("/nonexistent/config.json"), Error);
}

TEST_CASE("validation") {
  auto rejects = [](auto edit) {
    ExperimentConfig cfg = small_config();
    edit(cfg);
    CHECK_THROWS_AS(validate(cfg), Error);
  };
  CHECK_NOTHROW(validate(small_config()));
  rejects([](ExperimentConfig& c) { c.sets.clear(); });
  rejects([](ExperimentConfig& c) { c.q_values = {2}; });
  rejects([](ExperimentConfig& c) { c.q_values.clear(); });
  rejects([](ExperimentConfig& c) { c.mu_equals_q = false; });
  rejects([](ExperimentConfig& c) { c.h_exponents = {-1}; });
  rejects([](ExperimentConfig& c) { c.methods.clear(); });
  rejects([](ExperimentConfig& c) { c.op = "gradient"; });
  rejects([](ExperimentConfig& c) { c.kernel_rho = 7.3; });
  rejects([](ExperimentConfig& c) { c.threads = 0; });
}

TEST_CASE("manifest") {
  const ExperimentConfig cfg = small_config();
  const ExperimentResult res = run_experiment(cfg);
  const auto j = nlohmann::json::parse(manifest_json(cfg, res));
  CHECK(j["rows"] == res.rows.size());
  CHECK(j["mu"] == "q");
  CHECK(j["sets"][0]["seed"] == 1);
  CHECK(j["columns"] == csv_header());
}
