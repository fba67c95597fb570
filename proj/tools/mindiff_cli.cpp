// mindiff: minimal numerical differentiation formulas on scattered centers.
//
// Exit codes: 0 success, 2 configuration error, 3 solver failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mindiff/bounds.hpp"
#include "mindiff/errors.hpp"
#include "mindiff/experiment.hpp"
#include "mindiff/format.hpp"
#include "mindiff/kernel.hpp"
#include "mindiff/l1_minimal.hpp"
#include "mindiff/ls_minimal.hpp"
#include "mindiff/pointsets.hpp"

namespace {

using namespace mindiff;

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SetOptions {
  std::string family = "x1";
  std::uint64_t seed = 1;
  double h = 1.0;
  std::string points;
  std::vector<double> z;

  void attach(CLI::App* app) {
    app->add_option("--family", family, "Point set family: x1..x5")->capture_default_str();
    app->add_option("--seed", seed, "Generator seed")->capture_default_str();
    app->add_option("--scale", h, "Scale factor h applied to the set")->capture_default_str();
    app->add_option("--points", points, "CSV file with one center per row (overrides --family)");
    app->add_option("--z", z, "Evaluation point for --points (default: origin)")->expected(-1);
  }

  CenterSet build() const {
    if (points.empty()) {
      GeneratorSpec spec;
      spec.family = parse_family(family);
      spec.seed = seed;
      spec.h = h;
      return generate(spec);
    }
    Eigen::MatrixXd X = read_points_csv(points);
    Eigen::VectorXd zz = Eigen::VectorXd::Zero(X.cols());
    if (!z.empty()) {
      if (static_cast<Eigen::Index>(z.size()) != X.cols()) throw ConfigError("--z has the wrong dimension");
      for (std::size_t i = 0; i < z.size(); ++i) zz(static_cast<Eigen::Index>(i)) = z[i];
    }
    CenterSet S(zz, std::move(X));
    return h == 1.0 ? S : S.scaled(h);
  }
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

DiffOperator laplacian_for(const CenterSet& S) { return DiffOperator::laplacian(S.dim()); }

void print_weights(const CenterSet& S, const Eigen::VectorXd& w) {
  std::cout << "index";
  for (int c = 0; c < S.dim(); ++c) std::cout << ",x" << c + 1;
  std::cout << ",weight\n";
  for (int j = 0; j < S.size(); ++j) {
    std::cout << j;
    for (int c = 0; c < S.dim(); ++c) std::cout << "," << format_double(S.points()(j, c));
    std::cout << "," << format_double(w(j)) << "\n";
  }
}

struct FormulaOptions {
  std::string method = "l1";
  int q = 4;
  double mu = 2.0;
  double rho = 7.0;

  void attach(CLI::App* app, bool with_kernel) {
    std::string methods = with_kernel ? "l1, ls, positive or kernel" : "l1, ls or positive";
    app->add_option("--method", method, "Formula: " + methods)->capture_default_str();
    app->add_option("--q", q, "Exactness order")->capture_default_str();
    app->add_option("--mu", mu, "Distance weight exponent")->capture_default_str();
    app->add_option("--rho", rho, "Matern kernel smoothness")->capture_default_str();
  }
};

WeightVector compute_weights(const CenterSet& S, const FormulaOptions& o) {
  const DiffOperator D = laplacian_for(S);
  if (o.method == "l1") return solve_l1(S, D, o.q, o.mu).w;
  if (o.method == "ls") return solve_ls(S, D, o.q, o.mu).w;
  if (o.method == "positive") {
    auto sol = solve_positive(S, D, o.q);
    if (!sol) throw Error(ErrorKind::no_formula, "no positive formula of exactness order " + std::to_string(o.q));
    return sol->w;
  }
  if (o.method == "kernel") return optimal_weights(S, D, MaternKernel(o.rho, S.dim()));
  throw ConfigError("unknown method '" + o.method + "'");
}

int run_weights(const SetOptions& so, const FormulaOptions& fo) {
  const CenterSet S = so.build();
  const WeightVector w = compute_weights(S, fo);
  std::cout << "# method=" << fo.method << " q=" << fo.q << " mu=" << format_double(fo.mu)
            << " support=" << w.support_size() << " w_l1=" << format_double(w.values.lpNorm<1>())
            << " w_1mu=" << format_double(seminorm_1mu(w.values, S, fo.mu)) << "\n";
  print_weights(S, w.values);
  return 0;
}

int run_growth(const SetOptions& so, int q, double mu, const std::string& route) {
  const CenterSet S = so.build();
  const DiffOperator D = laplacian_for(S);
  GrowthReport rep;
  if (route == "primal") {
    rep = growth_primal(S, D, q, mu);
  } else if (route == "dual") {
    const L1Solution sol = solve_l1(S, D, q, mu);
    rep.value = sol.objective;
    rep.family = GrowthFamily::one_mu;
    rep.route = GrowthRoute::dual_inf;
  } else if (route == "ls") {
    rep = growth_2mu(S, D, q, mu);
  } else {
    throw ConfigError("unknown route '" + route + "'");
  }
  std::cout << "family,route,q,mu,value\n"
            << to_string(rep.family) << "," << to_string(rep.route) << "," << q << "," << format_double(mu) << ","
            << format_double(rep.value) << "\n";
  return 0;
}

int run_bounds(const SetOptions& so, const FormulaOptions& fo) {
  const CenterSet S = so.build();
  const DiffOperator D = laplacian_for(S);
  const double semi = f2_seminorm(S, fo.q);
  const int r = fo.q - 1;
  BoundReport rep;
  rep.q = fo.q;
  rep.mu = fo.mu;
  rep.r = r;
  rep.gamma = 1.0;
  rep.seminorm = semi;
  if (fo.method == "l1") {
    const L1Solution sol = solve_l1(S, D, fo.q, fo.mu);
    rep.bd_w1 = bound_w1(S, sol.w.values, fo.q, semi, 1.0);
    rep.bd_gr1 = semi * bound_growth_l1(S, sol.objective, fo.mu, r, 1.0, sol.w.effective_support());
    rep.bd_gr2 = semi * bound_l1_via_rho2(S, solve_ls(S, D, fo.q, fo.mu).growth, fo.mu, r, 1.0);
  } else if (fo.method == "ls") {
    const LSSolution sol = solve_ls(S, D, fo.q, fo.mu);
    rep.bd_w1 = bound_w1(S, sol.w.values, fo.q, semi, 1.0);
    rep.bd_gr1 = NAN;
    rep.bd_gr2 = semi * bound_growth_l2(S, sol.growth, fo.mu, r, 1.0);
  } else {
    throw ConfigError("bounds need --method l1 or ls");
  }
  auto cell = [](double v) { return std::isnan(v) ? std::string() : format_double(v); };
  std::cout << "q,mu,r,gamma,seminorm_f2,bd_w1,bd_gr1,bd_gr2,stability_floor\n"
            << rep.q << "," << format_double(rep.mu) << "," << rep.r << "," << format_double(rep.gamma) << ","
            << format_double(rep.seminorm) << "," << cell(rep.bd_w1) << "," << cell(rep.bd_gr1) << ","
            << cell(rep.bd_gr2) << "," << format_double(stability_floor(D, S)) << "\n";
  return 0;
}

int run_wce(const SetOptions& so, const FormulaOptions& fo) {
  const CenterSet S = so.build();
  const WeightVector w = compute_weights(S, fo);
  const WceReport rep = q_form(S, laplacian_for(S), w.values, MaternKernel(fo.rho, S.dim()));
  std::cout << "method,Q,wce,diagonal,cross,gram,precision_ok\n"
            << fo.method << "," << format_double(rep.Q) << "," << format_double(rep.wce) << ","
            << format_double(rep.diagonal) << "," << format_double(rep.cross) << "," << format_double(rep.gram)
            << "," << (rep.precision_ok ? "true" : "false") << "\n";
  return rep.precision_ok ? 0 : kExitSolver;
}

int run_gen(const SetOptions& so, const std::string& out) {
  GeneratorSpec spec;
  spec.family = parse_family(so.family);
  spec.seed = so.seed;
  spec.h = so.h;
  const CenterSet S = generate(spec);
  if (out.empty()) {
    std::cout << format_points_csv(S.points());
  } else {
    write_point_set(out, spec, S);
  }
  return 0;
}

struct ExperimentFlags {
  std::string config;
  std::string sets = "x1:1";
  std::string q = "3,4,5,6,7";
  std::string mu = "q";
  std::string n = "0,1,2,3,4,5";
  std::string methods = "l1,ls,kernel";
  std::string tests = "f1,f2,wce";
  double rho = 7.0;
  int threads = 1;
  std::string csv;
  std::string manifest;
};

template <typename T>
std::vector<T> parse_numbers(const std::string& s, const char* what) {
  std::vector<T> out;
  for (const auto& item : split(s, ',')) {
    try {
      if constexpr (std::is_same_v<T, int>) {
        out.push_back(std::stoi(item));
      } else {
        out.push_back(std::stod(item));
      }
    } catch (const std::exception&) {
      throw ConfigError(std::string("cannot parse ") + what + " value '" + item + "'");
    }
  }
  return out;
}

ExperimentConfig config_from_flags(const ExperimentFlags& f) {
  ExperimentConfig cfg;
  for (const auto& item : split(f.sets, ',')) {
    const auto parts = split(item, ':');
    GeneratorSpec spec;
    spec.family = parse_family(parts.at(0));
    if (spec.family == Family::file) {
      if (parts.size() < 2) throw ConfigError("file sets are written file:PATH");
      spec.path = item.substr(5);
    } else if (parts.size() > 1) {
      try {
        spec.seed = std::stoull(parts[1]);
      } catch (const std::exception&) {
        throw ConfigError("cannot parse seed in '" + item + "'");
      }
    }
    cfg.sets.push_back(spec);
  }
  cfg.q_values = parse_numbers<int>(f.q, "q");
  if (f.mu == "q") {
    cfg.mu_equals_q = true;
  } else {
    cfg.mu_values = parse_numbers<double>(f.mu, "mu");
  }
  cfg.h_exponents = parse_numbers<int>(f.n, "n");
  for (const auto& m : split(f.methods, ',')) cfg.methods.push_back(parse_method(m));
  cfg.test_f1 = cfg.test_f2 = cfg.test_wce = false;
  for (const auto& t : split(f.tests, ',')) {
    if (t == "f1") cfg.test_f1 = true;
    else if (t == "f2") cfg.test_f2 = true;
    else if (t == "wce") cfg.test_wce = true;
    else throw ConfigError("unknown test '" + t + "'");
  }
  cfg.kernel_rho = f.rho;
  cfg.threads = f.threads;
  cfg.csv_path = f.csv;
  cfg.manifest_path = f.manifest;
  return cfg;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

int run_experiment_cmd(const ExperimentFlags& f, const std::vector<std::string>& given) {
  ExperimentConfig cfg;
  try {
    if (!f.config.empty()) {
      cfg = read_config_file(f.config);
      // Flags given explicitly on the command line override the file.
      ExperimentConfig flags = config_from_flags(f);
      auto given_flag = [&](const char* name) { return std::find(given.begin(), given.end(), name) != given.end(); };
      if (given_flag("--csv")) cfg.csv_path = flags.csv_path;
      if (given_flag("--manifest")) cfg.manifest_path = flags.manifest_path;
      if (given_flag("--threads")) cfg.threads = flags.threads;
    } else {
      cfg = config_from_flags(f);
    }
    validate(cfg);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  const ExperimentResult result = run_experiment(cfg);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  const std::string csv = format_csv(result);
  if (cfg.csv_path.empty()) {
    std::cout << csv;
  } else {
    write_text(cfg.csv_path, csv);
  }
  if (!cfg.manifest_path.empty()) write_text(cfg.manifest_path, manifest_json(cfg, result));
  if (result.failures > 0) {
    std::cerr << result.failures << " of " << result.rows.size() << " cells failed\n";
    return kExitSolver;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal numerical differentiation formulas on scattered centers"};
  app.require_subcommand(1);

  SetOptions set_opts;
  FormulaOptions formula_opts;

  auto* weights = app.add_subcommand("weights", "Compute one differentiation formula for the Laplacian");
  set_opts.attach(weights);
  formula_opts.attach(weights, true);

  int growth_q = 4;
  double growth_mu = 2.0;
  std::string route = "primal";
  auto* growth = app.add_subcommand("growth", "Evaluate the growth function");
  SetOptions growth_set;
  growth_set.attach(growth);
  growth->add_option("--q", growth_q, "Exactness order")->capture_default_str();
  growth->add_option("--mu", growth_mu, "Distance weight exponent")->capture_default_str();
  growth->add_option("--route", route, "primal (polynomial LP), dual (minimal l1 weights) or ls")->capture_default_str();

  auto* bounds = app.add_subcommand("bounds", "Error bounds for f2 = exp(x1 + x2)");
  SetOptions bounds_set;
  FormulaOptions bounds_formula;
  bounds_set.attach(bounds);
  bounds_formula.attach(bounds, false);

  auto* wce = app.add_subcommand("wce", "Worst-case error on the Matern native space");
  SetOptions wce_set;
  FormulaOptions wce_formula;
  wce_set.attach(wce);
  wce_formula.attach(wce, true);

  auto* gen = app.add_subcommand("gen", "Generate a point set");
  SetOptions gen_set;
  std::string gen_out;
  gen_set.attach(gen);
  gen->add_option("--out", gen_out, "CSV output path; a .json sidecar is written next to it");

  auto* experiment = app.add_subcommand("experiment", "Run a sweep and emit CSV rows");
  ExperimentFlags ef;
  experiment->add_option("--config", ef.config, "JSON configuration file");
  experiment->add_option("--sets", ef.sets, "Comma list of family:seed or file:PATH")->capture_default_str();
  experiment->add_option("--q", ef.q, "Comma list of exactness orders")->capture_default_str();
  experiment->add_option("--mu", ef.mu, "Comma list of exponents, or q for mu = q")->capture_default_str();
  experiment->add_option("--n", ef.n, "Comma list of h exponents, h = 2^-n")->capture_default_str();
  experiment->add_option("--methods", ef.methods, "Comma list from l1, ls, kernel")->capture_default_str();
  experiment->add_option("--tests", ef.tests, "Comma list from f1, f2, wce")->capture_default_str();
  experiment->add_option("--rho", ef.rho, "Matern kernel smoothness")->capture_default_str();
  experiment->add_option("--threads", ef.threads, "Worker threads")->capture_default_str();
  experiment->add_option("--csv", ef.csv, "CSV output path (default: stdout)");
  experiment->add_option("--manifest", ef.manifest, "JSON manifest output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*weights) return run_weights(set_opts, formula_opts);
    if (*growth) return run_growth(growth_set, growth_q, growth_mu, route);
    if (*bounds) return run_bounds(bounds_set, bounds_formula);
    if (*wce) return run_wce(wce_set, wce_formula);
    if (*gen) return run_gen(gen_set, gen_out);
    if (*experiment) {
      std::vector<std::string> given;
      for (const char* name : {"--csv", "--manifest", "--threads"}) {
        if (experiment->count(name) > 0) given.emplace_back(name);
      }
      return run_experiment_cmd(ef, given);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return e.kind() == ErrorKind::invalid_argument ? kExitConfig : kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
