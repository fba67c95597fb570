#pragma once

// Sweep runner: one row per (set, h, q, mu, method) with errors on the test
// functions, the worst-case error and the error bounds for f2.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "mindiff/pointsets.hpp"

namespace mindiff {

enum class Method { l1, ls, kernel };
const char* to_string(Method m);
Method parse_method(const std::string& name);

/// Kernel comparisons are switched off beyond h = 2^-kMaxKernelExponent.
inline constexpr int kMaxKernelExponent = 6;

struct ExperimentConfig {
  std::vector<GeneratorSpec> sets;  // the h field is ignored, see h_exponents
  std::string op = "laplacian";
  std::vector<int> q_values;
  std::vector<double> mu_values;
  bool mu_equals_q = false;     // one mu per q, equal to q
  std::vector<int> h_exponents;  // h = 2^-n
  std::vector<Method> methods;
  bool test_f1 = true;
  bool test_f2 = true;
  bool test_wce = true;
  double kernel_rho = 7.0;
  int threads = 1;
  std::string csv_path;
  std::string manifest_path;
};

/// Throws Error(invalid_argument) on an unusable configuration.
void validate(const ExperimentConfig& cfg);
ExperimentConfig parse_config_json(const std::string& text);
ExperimentConfig read_config_file(const std::string& path);

struct ExperimentRow {
  std::string set;
  std::uint64_t seed = 0;
  int n = 0;
  double h = 1.0;
  int q = 0;
  double mu = 0.0;
  Method method = Method::l1;
  std::string status = "ok";
  std::string message;
  int points = 0;
  // NaN marks a column that does not apply to the row.
  double err_f1 = NAN;
  double err_f2 = NAN;
  double wce = NAN;
  double w_l1 = NAN;
  double w_1q = NAN;
  int support = -1;
  double bd_w1 = NAN;
  double bd_gr1 = NAN;
  double bd_gr2 = NAN;
  double rho1 = NAN;
  double rho2 = NAN;
  double residual = NAN;
  double wce_q = NAN;  // raw quadratic form, may be slightly negative

  bool failed() const;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  std::vector<std::string> warnings;
  int failures = 0;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

std::string csv_header();
std::string format_csv(const ExperimentResult& result);
std::string manifest_json(const ExperimentConfig& cfg, const ExperimentResult& result);

/// Least-squares slope of log(e) against log(h) over the pairs with e > 0.
/// Throws Error(invalid_argument) when fewer than 3 pairs remain.
double slope_fit(const std::vector<double>& h, const std::vector<double>& e);

}  // namespace mindiff
