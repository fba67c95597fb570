#include "mindiff/experiment.hpp"

#include <atomic>
#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mindiff/bounds.hpp"
#include "mindiff/errors.hpp"
#include "mindiff/exactness.hpp"
#include "mindiff/format.hpp"
#include "mindiff/kernel.hpp"
#include "mindiff/l1_minimal.hpp"
#include "mindiff/ls_minimal.hpp"

namespace mindiff {

namespace {

constexpr const char* kVersion = "0.1.0";

using json = nlohmann::ordered_json;

struct Cell {
  std::size_t set;
  int n;
  int q;
  double mu;
  Method method;
};

std::vector<double> mu_list(const ExperimentConfig& cfg, int q) {
  if (cfg.mu_equals_q) return {static_cast<double>(q)};
  return cfg.mu_values;
}

std::vector<Cell> grid(const ExperimentConfig& cfg) {
  std::vector<Cell> cells;
  for (std::size_t s = 0; s < cfg.sets.size(); ++s) {
    for (int n : cfg.h_exponents) {
      for (int q : cfg.q_values) {
        for (double mu : mu_list(cfg, q)) {
          for (Method m : cfg.methods) cells.push_back({s, n, q, mu, m});
        }
      }
    }
  }
  return cells;
}

bool kernel_allowed(int n) { return n <= kMaxKernelExponent; }

using VectorXld = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// An exact formula rounded to double misses exactness by about eps ||v||,
// which h^-k amplifies past the true error once h is small. Refine on the
// support with long double residuals; basic l1 solutions and minimum-norm LS
// solutions are both fixed points of this correction.
VectorXld polish(const CenterSet& S, const DiffOperator& D, int q, const WeightVector& w) {
  const ExactnessSystem sys = build_exactness_system(S, D, q);
  const long double scale = std::pow(static_cast<long double>(sys.frame.h), -sys.k);
  const std::vector<int> support = w.effective_support();
  const int m = static_cast<int>(sys.A.rows());
  const int s = static_cast<int>(support.size());
  Eigen::MatrixXd As(m, s);
  VectorXld v(s);
  for (int i = 0; i < s; ++i) {
    As.col(i) = sys.A.col(support[i]);
    v(i) = w.values(support[i]) / scale;
  }
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(As);
  const Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> As_ld = As.cast<long double>();
  for (int sweep = 0; sweep < 3; ++sweep) {
    const VectorXld r = sys.b.cast<long double>() - As_ld * v;
    v += cod.solve(r.cast<double>()).cast<long double>();
  }
  VectorXld out = VectorXld::Zero(w.size());
  for (int i = 0; i < s; ++i) out(support[i]) = v(i) * scale;
  return out;
}

// |Df(z) - sum_j w_j f(x_j)| in long double.
double formula_error(const CenterSet& S, const VectorXld& w, long double (*f)(long double, long double),
                     long double (*Df)(long double, long double)) {
  long double acc = -Df(S.z()(0), S.z()(1));
  for (int j = 0; j < S.size(); ++j) acc += w(j) * f(S.points()(j, 0), S.points()(j, 1));
  return static_cast<double>(std::abs(acc));
}

// Per (set, h) state shared by the cells of one group: the centers and the
// kernel data, which dominate the cost of a kernel-enabled sweep.
struct SetContext {
  const ExperimentConfig& cfg;
  CenterSet S;
  DiffOperator D;
  std::optional<KernelQuadraticForm> form;
  std::optional<WeightVector> kernel_weights;

  SetContext(const ExperimentConfig& c, CenterSet set)
      : cfg(c), S(std::move(set)), D(DiffOperator::laplacian(S.dim())) {}

  const KernelQuadraticForm& quadratic_form() {
    if (!form) form.emplace(S, D, MaternKernel(cfg.kernel_rho, S.dim()));
    return *form;
  }

  const WeightVector& optimal() {
    if (!kernel_weights) kernel_weights = quadratic_form().optimal_weights();
    return *kernel_weights;
  }
};

// Fills the columns shared by every method once the weights are known.
// Test-function errors use the polished weights when the formula is exact.
void evaluate_weights(SetContext& ctx, const WeightVector& w, int n, int q, bool exact, ExperimentRow& row) {
  const CenterSet& S = ctx.S;
  if (ctx.cfg.test_f1 || ctx.cfg.test_f2) {
    const VectorXld wx = exact ? polish(S, ctx.D, q, w) : VectorXld(w.values.cast<long double>());
    if (ctx.cfg.test_f1) row.err_f1 = formula_error(S, wx, test_f1_ld, laplacian_f1_ld);
    if (ctx.cfg.test_f2) row.err_f2 = formula_error(S, wx, test_f2_ld, laplacian_f2_ld);
  }
  if (ctx.cfg.test_wce && kernel_allowed(n)) {
    const WceReport rep = ctx.quadratic_form().evaluate(w.values);
    row.wce = rep.wce;
    row.wce_q = rep.Q;
    if (!rep.precision_ok) {
      row.status = "precision";
      row.message = "worst-case quadratic form is negative beyond rounding tolerance";
    }
  }
  row.w_l1 = w.values.lpNorm<1>();
  row.w_1q = seminorm_1mu(w.values, S, q);
  row.support = w.support_size();
}

void fill_bound_w1(const CenterSet& S, const WeightVector& w, int q, bool exact, ExperimentRow& row) {
  if (!exact) return;
  row.bd_w1 = bound_w1(S, w.values, q, f2_seminorm(S, q), 1.0);
}

ExperimentRow blank_row(const ExperimentConfig& cfg, const Cell& cell) {
  const GeneratorSpec& base = cfg.sets[cell.set];
  ExperimentRow row;
  row.set = to_string(base.family);
  row.seed = base.seed;
  row.n = cell.n;
  row.h = std::ldexp(1.0, -cell.n);
  row.q = cell.q;
  row.mu = cell.mu;
  row.method = cell.method;
  return row;
}

ExperimentRow run_cell(SetContext& ctx, const Cell& cell) {
  ExperimentRow row = blank_row(ctx.cfg, cell);
  const CenterSet& S = ctx.S;
  const DiffOperator& D = ctx.D;
  row.points = S.size();
  // Bounds below are for f2 with r + gamma = q (r = q - 1, gamma = 1).
  const int r = cell.q - 1;
  const double gamma = 1.0;
  try {
    switch (cell.method) {
      case Method::l1: {
        const L1Solution sol = solve_l1(S, D, cell.q, cell.mu);
        row.rho1 = sol.objective;
        row.residual = sol.residual;
        evaluate_weights(ctx, sol.w, cell.n, cell.q, sol.residual_ok, row);
        fill_bound_w1(S, sol.w, cell.q, sol.residual_ok, row);
        if (sol.residual_ok) {
          const double semi = f2_seminorm(S, cell.q);
          row.bd_gr1 = semi * bound_growth_l1(S, sol.objective, cell.mu, r, gamma, sol.w.effective_support());
          try {
            const LSSolution ls = solve_ls(S, D, cell.q, cell.mu);
            row.rho2 = ls.growth;
            row.bd_gr2 = semi * bound_l1_via_rho2(S, ls.growth, cell.mu, r, gamma);
          } catch (const Error&) {
            // rho2 is optional for an l1 row
          }
        } else if (row.status == "ok") {
          row.status = "inexact";
          row.message = "exactness residual " + format_double(sol.residual) + " above tolerance";
        }
        break;
      }
      case Method::ls: {
        const LSSolution sol = solve_ls(S, D, cell.q, cell.mu);
        row.rho2 = sol.growth;
        row.residual = sol.residual;
        evaluate_weights(ctx, sol.w, cell.n, cell.q, sol.residual_ok, row);
        fill_bound_w1(S, sol.w, cell.q, sol.residual_ok, row);
        if (sol.residual_ok) {
          row.bd_gr2 = f2_seminorm(S, cell.q) * bound_growth_l2(S, sol.growth, cell.mu, r, gamma);
        } else if (row.status == "ok") {
          row.status = "inexact";
          row.message = "exactness residual " + format_double(sol.residual) + " above tolerance";
        }
        break;
      }
      case Method::kernel: {
        if (!kernel_allowed(cell.n)) {
          row.status = "disabled";
          row.message = "kernel comparisons are off for h < 2^-" + std::to_string(kMaxKernelExponent);
          break;
        }
        evaluate_weights(ctx, ctx.optimal(), cell.n, cell.q, false, row);
        break;
      }
    }
  } catch (const Error& e) {
    row.status = to_string(e.kind());
    row.message = e.what();
  }
  return row;
}

struct Group {
  std::size_t set;
  int n;
  std::vector<std::size_t> cells;
};

void run_group(const ExperimentConfig& cfg, const std::vector<Cell>& cells, const Group& g,
               std::vector<ExperimentRow>& rows) {
  GeneratorSpec spec = cfg.sets[g.set];
  spec.h = std::ldexp(1.0, -g.n);
  std::optional<SetContext> ctx;
  try {
    ctx.emplace(cfg, generate(spec));
  } catch (const Error& e) {
    for (std::size_t i : g.cells) {
      rows[i] = blank_row(cfg, cells[i]);
      rows[i].status = to_string(e.kind());
      rows[i].message = e.what();
    }
    return;
  }
  for (std::size_t i : g.cells) rows[i] = run_cell(*ctx, cells[i]);
}

std::string cell_value(double v) { return std::isnan(v) ? std::string() : format_double(v); }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

template <typename T>
std::vector<T> read_list(const json& j, const char* key) {
  if (!j.contains(key)) return {};
  const json& v = j.at(key);
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::l1: return "l1";
    case Method::ls: return "ls";
    case Method::kernel: return "kernel";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::l1, Method::ls, Method::kernel}) {
    if (name == to_string(m)) return m;
  }
  throw Error(ErrorKind::invalid_argument, "unknown method '" + name + "'");
}

// Precision guards (kernel disabled or refused as ill-conditioned) and
// inexact formulas are reported but do not count as failures.
bool ExperimentRow::failed() const {
  return status != "ok" && status != "disabled" && status != "inexact" && status != "ill_conditioned";
}

void validate(const ExperimentConfig& cfg) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::invalid_argument, "config: " + msg); };
  if (cfg.sets.empty()) fail("no point sets");
  if (cfg.op != "laplacian") fail("operator must be 'laplacian'");
  if (cfg.q_values.empty()) fail("no exactness orders");
  for (int q : cfg.q_values) {
    if (q <= 2 || q > 16) fail("exactness order " + std::to_string(q) + " outside 3..16");
  }
  if (!cfg.mu_equals_q && cfg.mu_values.empty()) fail("no weight exponents");
  for (double mu : cfg.mu_values) {
    if (!(mu >= 0.0) || !std::isfinite(mu)) fail("weight exponents must be finite and >= 0");
  }
  if (cfg.h_exponents.empty()) fail("no h exponents");
  for (int n : cfg.h_exponents) {
    if (n < 0 || n > 40) fail("h exponent " + std::to_string(n) + " outside 0..40");
  }
  if (cfg.methods.empty()) fail("no methods");
  const double nu = cfg.kernel_rho - 1.0;
  if (!(nu > 2.0) || std::abs(2.0 * cfg.kernel_rho - std::round(2.0 * cfg.kernel_rho)) > 0.0) {
    fail("kernel smoothness must be an integer or half-integer above 3");
  }
  if (cfg.threads < 1) fail("threads must be >= 1");
  for (const auto& s : cfg.sets) {
    if (s.family == Family::file && s.path.empty()) fail("file point set without a path");
  }
}

ExperimentConfig parse_config_json(const std::string& text) {
  ExperimentConfig cfg;
  try {
    const json j = json::parse(text);
    for (const json& s : j.at("sets")) {
      GeneratorSpec spec;
      spec.family = parse_family(s.at("family").get<std::string>());
      spec.seed = s.value("seed", std::uint64_t{1});
      spec.path = s.value("path", std::string());
      cfg.sets.push_back(spec);
    }
    cfg.op = j.value("operator", std::string("laplacian"));
    cfg.q_values = read_list<int>(j, "q");
    if (j.contains("mu") && j.at("mu").is_string()) {
      if (j.at("mu").get<std::string>() != "q") throw Error(ErrorKind::invalid_argument, "config: mu must be numbers or \"q\"");
      cfg.mu_equals_q = true;
    } else {
      cfg.mu_values = read_list<double>(j, "mu");
    }
    cfg.h_exponents = read_list<int>(j, "h_exponents");
    for (const auto& m : read_list<std::string>(j, "methods")) cfg.methods.push_back(parse_method(m));
    if (j.contains("tests")) {
      cfg.test_f1 = cfg.test_f2 = cfg.test_wce = false;
      for (const auto& t : read_list<std::string>(j, "tests")) {
        if (t == "f1") cfg.test_f1 = true;
        else if (t == "f2") cfg.test_f2 = true;
        else if (t == "wce") cfg.test_wce = true;
        else throw Error(ErrorKind::invalid_argument, "config: unknown test '" + t + "'");
      }
    }
    cfg.kernel_rho = j.value("kernel_rho", 7.0);
    cfg.threads = j.value("threads", 1);
    cfg.csv_path = j.value("csv", std::string());
    cfg.manifest_path = j.value("manifest", std::string());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::invalid_argument, std::string("config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::invalid_argument, "config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_json(ss.str());
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  ExperimentResult result;
  const bool wants_kernel =
      cfg.test_wce || std::find(cfg.methods.begin(), cfg.methods.end(), Method::kernel) != cfg.methods.end();
  for (int n : cfg.h_exponents) {
    if (wants_kernel && !kernel_allowed(n)) {
      result.warnings.push_back("kernel comparisons disabled for n = " + std::to_string(n) + " (h = 2^-" +
                                std::to_string(n) + "): outside the precision-safe window");
    }
  }

  const std::vector<Cell> cells = grid(cfg);
  std::vector<Group> groups;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (groups.empty() || groups.back().set != cells[i].set || groups.back().n != cells[i].n) {
      groups.push_back({cells[i].set, cells[i].n, {}});
    }
    groups.back().cells.push_back(i);
  }
  result.rows.resize(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < groups.size(); i = next++) run_group(cfg, cells, groups[i], result.rows);
  };
  const int nthreads = std::min<int>(cfg.threads, static_cast<int>(std::max<std::size_t>(groups.size(), 1)));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& row : result.rows) {
    if (row.failed()) ++result.failures;
  }
  return result;
}

std::string csv_header() {
  return "set,seed,n,h,q,mu,method,status,points,err_f1,err_f2,wce,w_l1,w_1q,support,bd_w1,bd_gr1,bd_gr2,rho1,rho2,"
         "residual,message";
}

std::string format_csv(const ExperimentResult& result) {
  std::string out = csv_header() + "\n";
  for (const auto& r : result.rows) {
    out += r.set + "," + std::to_string(r.seed) + "," + std::to_string(r.n) + "," + format_double(r.h) + "," +
           std::to_string(r.q) + "," + format_double(r.mu) + "," + to_string(r.method) + "," + r.status + "," +
           std::to_string(r.points) + "," + cell_value(r.err_f1) + "," + cell_value(r.err_f2) + "," +
           cell_value(r.wce) + "," + cell_value(r.w_l1) + "," + cell_value(r.w_1q) + "," +
           (r.support >= 0 ? std::to_string(r.support) : std::string()) + "," + cell_value(r.bd_w1) + "," +
           cell_value(r.bd_gr1) + "," + cell_value(r.bd_gr2) + "," + cell_value(r.rho1) + "," +
           cell_value(r.rho2) + "," + cell_value(r.residual) + "," + csv_escape(r.message) + "\n";
  }
  return out;
}

std::string manifest_json(const ExperimentConfig& cfg, const ExperimentResult& result) {
  json j;
  j["tool"] = "mindiff";
  j["version"] = kVersion;
  json sets = json::array();
  for (const auto& s : cfg.sets) {
    json e;
    e["family"] = to_string(s.family);
    e["seed"] = s.seed;
    if (s.family == Family::file) e["path"] = s.path;
    sets.push_back(e);
  }
  j["sets"] = sets;
  j["operator"] = cfg.op;
  j["q"] = cfg.q_values;
  if (cfg.mu_equals_q) {
    j["mu"] = "q";
  } else {
    j["mu"] = cfg.mu_values;
  }
  j["h_exponents"] = cfg.h_exponents;
  std::vector<std::string> methods;
  for (Method m : cfg.methods) methods.emplace_back(to_string(m));
  j["methods"] = methods;
  std::vector<std::string> tests;
  if (cfg.test_f1) tests.emplace_back("f1");
  if (cfg.test_f2) tests.emplace_back("f2");
  if (cfg.test_wce) tests.emplace_back("wce");
  j["tests"] = tests;
  j["kernel_rho"] = cfg.kernel_rho;
  j["rows"] = result.rows.size();
  j["failures"] = result.failures;
  j["warnings"] = result.warnings;
  j["columns"] = csv_header();
  return j.dump(2) + "\n";
}

double slope_fit(const std::vector<double>& h, const std::vector<double>& e) {
  if (h.size() != e.size()) throw Error(ErrorKind::invalid_argument, "slope_fit: h and e differ in length");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (e[i] > 0.0 && h[i] > 0.0 && std::isfinite(e[i])) {
      lx.push_back(std::log(h[i]));
      ly.push_back(std::log(e[i]));
    }
  }
  if (lx.size() < 3) throw Error(ErrorKind::invalid_argument, "slope_fit: fewer than 3 positive errors");
  const double m = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= m;
  my /= m;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) throw Error(ErrorKind::invalid_argument, "slope_fit: all h values coincide");
  return sxy / sxx;
}

}  // namespace mindiff
