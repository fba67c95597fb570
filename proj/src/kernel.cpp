#include "mindiff/kernel.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include <quadmath.h>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "mindiff/errors.hpp"

namespace mindiff {

namespace {

using quad = __float128;

template <typename T>
struct Real;

template <>
struct Real<long double> {
  static long double exp(long double x) { return std::exp(x); }
  static long double log(long double x) { return std::log(x); }
  static long double sqrt(long double x) { return std::sqrt(x); }
  static long double pi() { return 3.1415926535897932384626433832795029L; }
  static long double euler() { return 0.5772156649015328606065120900824024L; }
  static long double tol() { return 1e-22L; }
};

template <>
struct Real<quad> {
  static quad exp(quad x) { return expq(x); }
  static quad log(quad x) { return logq(x); }
  static quad sqrt(quad x) { return sqrtq(x); }
  static quad pi() {
    static const quad v = 4 * atanq(quad(1));
    return v;
  }
  static quad euler() {
    static const quad v = strtoflt128("0.57721566490153286060651209008240243104216", nullptr);
    return v;
  }
  static quad tol() { return quad(1e-36L); }
};

// K0 and K1 by their power series around 0; used for x <= 2.
template <typename T>
void k01_series(T x, T& k0, T& k1) {
  using R = Real<T>;
  const T t = x * x / 4;
  const T lg = R::log(x / 2);
  const T gamma = R::euler();
  T term = 1, i0 = 0, s0 = 0, harmonic = 0;  // term = t^k / (k!)^2
  T term1 = 1, i1 = 0, s1 = 0;               // term1 = t^k / (k! (k+1)!)
  for (int k = 0; k < 400; ++k) {
    if (k > 0) {
      term *= t / (T(k) * k);
      term1 *= t / (T(k) * (k + 1));
      harmonic += T(1) / k;
    }
    i0 += term;
    s0 += harmonic * term;
    i1 += term1;
    // psi(k+1) + psi(k+2) = -2 gamma + 2 H_k + 1/(k+1)
    s1 += (2 * harmonic - 2 * gamma + T(1) / (k + 1)) * term1;
    if (term < R::tol() * i0 && term1 < R::tol() * i1) break;
  }
  k0 = -(lg + gamma) * i0 + s0;
  k1 = 1 / x + lg * (x / 2) * i1 - (x / 4) * s1;
}

// K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt, nu = 0, 1, by the
// trapezoidal rule: geometric convergence for this analytic, fast decaying
// integrand, unlike the asymptotic series near x = 2.
template <typename T>
void k01_integral(T x, T& k0, T& k1) {
  using R = Real<T>;
  const T step = T(1) / 16;
  const T grow = R::exp(step);
  T et = 1;
  T s0 = T(1) / 2, s1 = T(1) / 2;
  for (int i = 1; i < 4000; ++i) {
    et *= grow;
    const T ch = (et + 1 / et) / 2;
    const T f = R::exp(-x * (ch - 1));
    s0 += f;
    s1 += f * ch;
    if (f * ch < R::tol() * s0) break;
  }
  const T scale = step * R::exp(-x);
  k0 = s0 * scale;
  k1 = s1 * scale;
}

// K_{n+1/2}(x) = sqrt(pi/(2x)) e^-x sum_k (n+k)! / (k! (n-k)!) (2x)^-k
template <typename T>
T k_half(int n, T x) {
  using R = Real<T>;
  T coeff = 1, sum = 1, pw = 1;
  for (int k = 0; k < n; ++k) {
    coeff *= T(n + k + 1) * (n - k) / (k + 1);
    pw /= 2 * x;
    sum += coeff * pw;
  }
  return R::sqrt(R::pi() / (2 * x)) * R::exp(-x) * sum;
}

// K_{twice/2}(x) for x > 0.
template <typename T>
T bessel_k_twice(int twice, T x) {
  const int a = std::abs(twice);
  if (a % 2 == 1) return k_half((a - 1) / 2, x);
  const int n = a / 2;
  T k0, k1;
  if (x <= 2) {
    k01_series(x, k0, k1);
  } else {
    k01_integral(x, k0, k1);
  }
  if (n == 0) return k0;
  for (int m = 1; m < n; ++m) {
    const T k2 = k0 + (2 * T(m) / x) * k1;
    k0 = k1;
    k1 = k2;
  }
  return k1;
}

// 2^(twice/2 - 1) Gamma(twice/2) for twice >= 1.
template <typename T>
T g_limit(int twice) {
  using R = Real<T>;
  T g;
  int m;
  if (twice % 2 == 0) {
    g = 1;
    m = 2;
  } else {
    g = R::sqrt(R::pi());
    m = 1;
  }
  for (; m < twice; m += 2) g *= T(m) / 2;
  const int e = twice - 2;
  const T base = e >= 0 ? R::sqrt(T(2)) : 1 / R::sqrt(T(2));
  for (int i = 0; i < std::abs(e); ++i) g *= base;
  return g;
}

// r^(twice/2)
template <typename T>
T pow_twice(T r, int twice) {
  const int a = std::abs(twice);
  T p = 1;
  for (int i = 0; i < a / 2; ++i) p *= r;
  if (a % 2 == 1) p *= Real<T>::sqrt(r);
  return twice < 0 ? 1 / p : p;
}

template <typename T>
T g_twice(int twice, T r) {
  if (r == 0) {
    if (twice <= 0) return T(std::numeric_limits<long double>::infinity());
    return g_limit<T>(twice);
  }
  return pow_twice(r, twice) * bessel_k_twice(twice, r);
}

template <typename T>
T lowered_t(int twice_nu, T norm, T r, int j) {
  const T g = g_twice<T>(twice_nu - 2 * j, r);
  return (j % 2 == 0 ? g : -g) / norm;
}

// Delta F = d L F + r^2 L^2 F for radial F.
template <typename T>
T laplacian_t(int d, int twice_nu, T norm, T r) {
  if (r == 0) return d * lowered_t<T>(twice_nu, norm, r, 1);
  return d * lowered_t<T>(twice_nu, norm, r, 1) + r * r * lowered_t<T>(twice_nu, norm, r, 2);
}

// Delta^2 F = (d^2 + 2d) L^2 F + (2d + 4) r^2 L^3 F + r^4 L^4 F, at r = 0.
template <typename T>
T bilaplacian0_t(int d, int twice_nu, T norm) {
  return T(d) * (d + 2) * lowered_t<T>(twice_nu, norm, T(0), 2);
}

int twice_of(long double v, const char* what) {
  const long double t = 2.0L * v;
  const long double n = std::round(t);
  if (std::abs(t - n) > 1e-12L) {
    throw Error(ErrorKind::invalid_argument, std::string(what) + " must be an integer or half-integer");
  }
  return static_cast<int>(n);
}

}  // namespace

long double bessel_k_ld(long double nu, long double r) {
  if (!(r > 0.0L) || !std::isfinite(r)) throw Error(ErrorKind::invalid_argument, "bessel_k: r must be positive and finite");
  return bessel_k_twice<long double>(twice_of(nu, "bessel_k: order"), r);
}

double bessel_k(double nu, double r) { return static_cast<double>(bessel_k_ld(nu, r)); }

long double g_function(long double mu, long double r) {
  if (r < 0.0L) throw Error(ErrorKind::invalid_argument, "g_function: r must be >= 0");
  return g_twice<long double>(twice_of(mu, "g_function: order"), r);
}

MaternKernel::MaternKernel(double rho, int d) : rho_(rho), d_(d), nu_(rho - 0.5 * d) {
  if (d < 1) throw Error(ErrorKind::invalid_argument, "MaternKernel: dimension must be >= 1");
  if (!(nu_ > 0.0)) throw Error(ErrorKind::invalid_argument, "MaternKernel: smoothness must exceed d/2");
  twice_rho_ = twice_of(rho, "MaternKernel: smoothness");
  twice_nu_ = twice_rho_ - d;
  norm_ = g_limit<long double>(twice_rho_);
}

long double MaternKernel::lowered(long double r, int j) const { return lowered_t<long double>(twice_nu_, norm_, r, j); }

long double MaternKernel::value_ld(long double r) const {
  if (r < 0.0L) throw Error(ErrorKind::invalid_argument, "MaternKernel: r must be >= 0");
  return g_twice<long double>(twice_nu_, r) / norm_;
}

long double MaternKernel::radial_derivative_ld(long double r, int order) const {
  if (r < 0.0L) throw Error(ErrorKind::invalid_argument, "MaternKernel: r must be >= 0");
  if (order < 0 || order > 4) throw Error(ErrorKind::invalid_argument, "MaternKernel: derivative order must be 0..4");
  if (order > 0 && nu_ <= order / 2.0) {
    throw Error(ErrorKind::invalid_argument, "MaternKernel: kernel too rough for derivative order " + std::to_string(order));
  }
  if (r == 0.0L) {
    switch (order) {
      case 0: return value_ld(0.0L);
      case 2: return lowered(0.0L, 1);
      case 4: return 3.0L * lowered(0.0L, 2);
      default: return 0.0L;
    }
  }
  const long double r2 = r * r;
  switch (order) {
    case 0: return value_ld(r);
    case 1: return r * lowered(r, 1);
    case 2: return lowered(r, 1) + r2 * lowered(r, 2);
    case 3: return 3.0L * r * lowered(r, 2) + r2 * r * lowered(r, 3);
    default: return 3.0L * lowered(r, 2) + 6.0L * r2 * lowered(r, 3) + r2 * r2 * lowered(r, 4);
  }
}

long double MaternKernel::laplacian_ld(long double r) const {
  if (r < 0.0L) throw Error(ErrorKind::invalid_argument, "MaternKernel: r must be >= 0");
  if (nu_ <= 1.0) throw Error(ErrorKind::invalid_argument, "MaternKernel: Laplacian needs nu > 1");
  return laplacian_t<long double>(d_, twice_nu_, norm_, r);
}

long double MaternKernel::bilaplacian_at_zero_ld() const {
  if (nu_ <= 2.0) throw Error(ErrorKind::invalid_argument, "MaternKernel: bi-Laplacian needs nu > 2");
  return bilaplacian0_t<long double>(d_, twice_nu_, norm_);
}

namespace {

bool is_laplacian(const DiffOperator& D) {
  const DiffOperator lap = DiffOperator::laplacian(D.dim());
  if (D.terms().size() != lap.terms().size()) return false;
  for (std::size_t i = 0; i < lap.terms().size(); ++i) {
    if (!(D.terms()[i].first == lap.terms()[i].first) || D.terms()[i].second != 1.0) return false;
  }
  return true;
}

quad distance_q(const CenterSet& S, int i, int j) {
  quad acc = 0;
  for (int c = 0; c < S.dim(); ++c) {
    const quad diff = quad(S.points()(i, c)) - quad(S.points()(j, c));
    acc += diff * diff;
  }
  return sqrtq(acc);
}

quad distance_to_z_q(const CenterSet& S, int j) {
  quad acc = 0;
  for (int c = 0; c < S.dim(); ++c) {
    const quad diff = quad(S.points()(j, c)) - quad(S.z()(c));
    acc += diff * diff;
  }
  return sqrtq(acc);
}

}  // namespace

struct KernelQuadraticForm::Impl {
  int n = 0;
  std::vector<quad> gram;   // row-major n x n
  std::vector<quad> cross;  // D M(z - x_j)
  quad diag = 0;
};

KernelQuadraticForm::KernelQuadraticForm(const CenterSet& S, const DiffOperator& D, const MaternKernel& K)
    : impl_(std::make_unique<Impl>()) {
  if (!is_laplacian(D)) throw Error(ErrorKind::invalid_argument, "worst-case error is implemented for the Laplacian only");
  if (S.dim() != K.dim() || S.dim() != D.dim()) {
    throw Error(ErrorKind::invalid_argument, "kernel, operator and set differ in dimension");
  }
  if (K.nu() <= 2.0) throw Error(ErrorKind::invalid_argument, "worst-case error for the Laplacian needs nu > 2");
  const int n = S.size();
  const int d = S.dim();
  const int tn = K.twice_nu();
  const quad norm = g_limit<quad>(K.twice_rho());
  Impl& m = *impl_;
  m.n = n;
  m.gram.assign(static_cast<std::size_t>(n) * n, 0);
  m.cross.assign(n, 0);
  const quad m0 = g_twice<quad>(tn, quad(0)) / norm;
  for (int i = 0; i < n; ++i) {
    m.gram[static_cast<std::size_t>(i) * n + i] = m0;
    for (int j = i + 1; j < n; ++j) {
      const quad v = g_twice<quad>(tn, distance_q(S, i, j)) / norm;
      m.gram[static_cast<std::size_t>(i) * n + j] = v;
      m.gram[static_cast<std::size_t>(j) * n + i] = v;
    }
    m.cross[i] = laplacian_t<quad>(d, tn, norm, distance_to_z_q(S, i));
  }
  m.diag = bilaplacian0_t<quad>(d, tn, norm);
}

KernelQuadraticForm::~KernelQuadraticForm() = default;
KernelQuadraticForm::KernelQuadraticForm(KernelQuadraticForm&&) noexcept = default;
KernelQuadraticForm& KernelQuadraticForm::operator=(KernelQuadraticForm&&) noexcept = default;

int KernelQuadraticForm::size() const { return impl_->n; }

WceReport KernelQuadraticForm::evaluate(const Eigen::VectorXd& w) const {
  const Impl& m = *impl_;
  if (w.size() != m.n) throw Error(ErrorKind::invalid_argument, "weight length differs from the center count");
  quad cross = 0, gram = 0;
  for (int i = 0; i < m.n; ++i) {
    const quad wi = w(i);
    cross += wi * m.cross[i];
    quad row = 0;
    const quad* g = &m.gram[static_cast<std::size_t>(i) * m.n];
    for (int j = i + 1; j < m.n; ++j) row += quad(w(j)) * g[j];
    gram += wi * (wi * g[i] + 2 * row);
  }
  const quad q = m.diag - 2 * cross + gram;
  WceReport rep;
  rep.Q = static_cast<double>(q);
  rep.wce = std::sqrt(std::max(0.0, rep.Q));
  rep.diagonal = static_cast<double>(m.diag);
  rep.cross = static_cast<double>(cross);
  rep.gram = static_cast<double>(gram);
  rep.precision_ok = !(q < -quad(1e-9) * fabsq(m.diag));
  return rep;
}

WeightVector KernelQuadraticForm::optimal_weights() const {
  const Impl& m = *impl_;
  const int n = m.n;
  using MatLD = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using VecLD = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  MatLD G(n, n);
  VecLD rhs(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) G(i, j) = static_cast<long double>(m.gram[static_cast<std::size_t>(i) * n + j]);
    rhs(i) = static_cast<long double>(m.cross[i]);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G.cast<double>(), Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues()(0);
  const double lmax = eig.eigenvalues()(n - 1);
  if (!(lmin > 0.0) || lmax / lmin > kMaxGramCondition) {
    const std::string est = lmin > 0.0 ? std::to_string(lmax / lmin) : std::string("inf");
    throw Error(ErrorKind::ill_conditioned, "kernel Gram matrix condition estimate " + est + " exceeds the precision guard");
  }
  Eigen::LLT<MatLD> llt(G);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::ill_conditioned, "kernel Gram matrix is not numerically positive definite");
  }
  // Refinement with quad residuals recovers the digits the long double
  // factorization loses to the condition number.
  VecLD x = llt.solve(rhs);
  for (int sweep = 0; sweep < 3; ++sweep) {
    VecLD res(n);
    for (int i = 0; i < n; ++i) {
      quad acc = m.cross[i];
      for (int j = 0; j < n; ++j) acc -= m.gram[static_cast<std::size_t>(i) * n + j] * quad(x(j));
      res(i) = static_cast<long double>(acc);
    }
    x += llt.solve(res);
  }
  WeightVector out;
  out.values = x.cast<double>();
  out.provenance = Provenance::kernel;
  out.exactness_order = 0;
  return out;
}

WceReport q_form(const CenterSet& S, const DiffOperator& D, const Eigen::VectorXd& w, const MaternKernel& K) {
  return KernelQuadraticForm(S, D, K).evaluate(w);
}

WeightVector optimal_weights(const CenterSet& S, const DiffOperator& D, const MaternKernel& K) {
  return KernelQuadraticForm(S, D, K).optimal_weights();
}

namespace {

using Poly = std::vector<double>;  // ascending coefficients in r

Poly multiply(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Poly one_minus_r_pow(int n) {
  Poly out{1.0};
  for (int i = 0; i < n; ++i) out = multiply(out, Poly{1.0, -1.0});
  return out;
}

Poly derivative(const Poly& p) {
  Poly out(p.size() > 1 ? p.size() - 1 : 1, 0.0);
  for (std::size_t i = 1; i < p.size(); ++i) out[i - 1] = i * p[i];
  return out;
}

template <typename T>
T eval(const Poly& p, T r) {
  T acc = 0;
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * r + p[i];
  return acc;
}

// Radial profile on [0, 1) with value, phi'(r)/r and 2D Laplacian phi'' + phi'/r,
// all as exact polynomials (phi'(0) = 0 for both Wendland functions).
struct Radial {
  Poly value, slope_over_r, laplacian;

  explicit Radial(Poly p) : value(std::move(p)) {
    const Poly d1 = derivative(value);
    slope_over_r.assign(d1.begin() + 1, d1.end());
    const Poly d2 = derivative(d1);
    laplacian.assign(std::max(d2.size(), slope_over_r.size()), 0.0);
    for (std::size_t i = 0; i < d2.size(); ++i) laplacian[i] += d2[i];
    for (std::size_t i = 0; i < slope_over_r.size(); ++i) laplacian[i] += slope_over_r[i];
  }
};

const Radial& phi32() {
  static const Radial p(multiply(one_minus_r_pow(6), Poly{3.0, 18.0, 35.0}));
  return p;
}

const Radial& phi33() {
  static const Radial p(multiply(one_minus_r_pow(8), Poly{1.0, 8.0, 25.0, 32.0}));
  return p;
}

}  // namespace

long double test_f1_ld(long double x1, long double x2) {
  const long double r = std::hypot(x1, x2);
  if (r >= 1) return 0;
  return eval(phi32().value, r) * (x1 + x2) + eval(phi33().value, r);
}

long double laplacian_f1_ld(long double x1, long double x2) {
  const long double r = std::hypot(x1, x2);
  if (r >= 1) return 0;
  // Delta[phi(r) s] = s Delta phi + 2 (phi'/r) s for the linear s = x1 + x2.
  const long double s = x1 + x2;
  return s * (eval(phi32().laplacian, r) + 2 * eval(phi32().slope_over_r, r)) + eval(phi33().laplacian, r);
}

long double test_f2_ld(long double x1, long double x2) { return std::exp(x1 + x2); }

long double laplacian_f2_ld(long double x1, long double x2) { return 2 * std::exp(x1 + x2); }

double test_f1(double x1, double x2) { return static_cast<double>(test_f1_ld(x1, x2)); }
double laplacian_f1(double x1, double x2) { return static_cast<double>(laplacian_f1_ld(x1, x2)); }
double laplacian_f1_at_origin() { return laplacian_f1(0.0, 0.0); }
double test_f2(double x1, double x2) { return static_cast<double>(test_f2_ld(x1, x2)); }
double laplacian_f2(double x1, double x2) { return static_cast<double>(laplacian_f2_ld(x1, x2)); }

}  // namespace mindiff
