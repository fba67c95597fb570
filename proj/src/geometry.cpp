#include "mindiff/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "mindiff/errors.hpp"
#include "mindiff/format.hpp"

namespace mindiff {

CenterSet::CenterSet(Eigen::VectorXd z, Eigen::MatrixXd points) : z_(std::move(z)), points_(std::move(points)) {
  if (points_.rows() < 1) throw Error(ErrorKind::invalid_argument, "center set must contain at least one point");
  if (points_.cols() != z_.size()) throw Error(ErrorKind::invalid_argument, "center set: z and points differ in dimension");
  if (!z_.allFinite() || !points_.allFinite()) throw Error(ErrorKind::invalid_argument, "center set: non-finite coordinates");
  // Exact duplicates only; near-duplicates are legitimate inputs.
  for (Eigen::Index i = 0; i < points_.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < points_.rows(); ++j) {
      if (points_.row(i) == points_.row(j)) {
        throw Error(ErrorKind::invalid_argument,
                    "center set: duplicate points at rows " + std::to_string(i) + " and " + std::to_string(j));
      }
    }
  }
}

Eigen::VectorXd CenterSet::distances() const {
  Eigen::VectorXd d(size());
  for (int j = 0; j < size(); ++j) d(j) = distance(j);
  return d;
}

int CenterSet::index_of_z() const {
  for (int j = 0; j < size(); ++j) {
    if (points_.row(j).transpose() == z_) return j;
  }
  return -1;
}

CenterSet CenterSet::scaled(double h) const {
  if (!(h > 0.0)) throw Error(ErrorKind::invalid_argument, "scale factor must be positive");
  Eigen::MatrixXd p = points_;
  for (Eigen::Index j = 0; j < p.rows(); ++j) p.row(j) = z_.transpose() + h * (points_.row(j) - z_.transpose());
  return CenterSet(z_, std::move(p));
}

CenterSet CenterSet::subset(const std::vector<int>& indices) const {
  Eigen::MatrixXd p(static_cast<Eigen::Index>(indices.size()), dim());
  for (std::size_t i = 0; i < indices.size(); ++i) p.row(static_cast<Eigen::Index>(i)) = points_.row(indices[i]);
  return CenterSet(z_, std::move(p));
}

double h_radius(const CenterSet& S) { return S.distances().maxCoeff(); }

double s_radius(const CenterSet& S) {
  double s = std::numeric_limits<double>::infinity();
  for (int j = 0; j < S.size(); ++j) {
    const double d = S.distance(j);
    if (d > 0.0) s = std::min(s, d);
  }
  if (!std::isfinite(s)) throw Error(ErrorKind::invalid_argument, "s_radius: X contains no point other than z");
  return s;
}

NormalizedSet normalize(const CenterSet& S) {
  const double h = h_radius(S);
  if (!(h > 0.0)) throw Error(ErrorKind::invalid_argument, "cannot normalize a set with h(z,X) = 0");
  NormalizedSet out;
  out.h = h;
  out.Y = (S.points().rowwise() - S.z().transpose()) / h;
  return out;
}

double distance_power(double dist, double mu) {
  if (mu == 0.0) return 1.0;
  return std::pow(dist, mu);
}

Eigen::VectorXd delta_vector(const CenterSet& S, double mu) {
  if (mu < 0.0) throw Error(ErrorKind::invalid_argument, "delta_vector: mu must be >= 0");
  Eigen::VectorXd out(S.size());
  for (int j = 0; j < S.size(); ++j) out(j) = distance_power(S.distance(j), mu);
  return out;
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::l1min: return "l1";
    case Provenance::l2min: return "ls";
    case Provenance::kernel: return "kernel";
    case Provenance::external: return "external";
  }
  return "unknown";
}

std::vector<int> WeightVector::effective_support() const {
  std::vector<int> out;
  if (values.size() == 0) return out;
  const double cut = kZeroWeightThreshold * values.cwiseAbs().maxCoeff();
  for (int j = 0; j < size(); ++j) {
    if (std::abs(values(j)) > cut) out.push_back(j);
  }
  return out;
}

namespace {

void check_length(const Eigen::VectorXd& w, const CenterSet& S) {
  if (w.size() != S.size()) throw Error(ErrorKind::invalid_argument, "weight vector length does not match the center set");
}

}  // namespace

double seminorm_1mu(const Eigen::VectorXd& w, const CenterSet& S, double mu) {
  check_length(w, S);
  return w.cwiseAbs().dot(delta_vector(S, mu));
}

double seminorm_2mu(const Eigen::VectorXd& w, const CenterSet& S, double mu) {
  check_length(w, S);
  return w.cwiseProduct(delta_vector(S, mu)).norm();
}

double dual_norm_1mu(const Eigen::VectorXd& u, const CenterSet& S, double mu) {
  check_length(u, S);
  double out = 0.0;
  for (int j = 0; j < S.size(); ++j) {
    if (u(j) == 0.0) continue;
    const double dp = distance_power(S.distance(j), mu);
    if (dp == 0.0) return std::numeric_limits<double>::infinity();
    out = std::max(out, std::abs(u(j)) / dp);
  }
  return out;
}

double sigma_factor(const CenterSet& S, const Eigen::VectorXd& w, double mu, int k) {
  const double h = h_radius(S);
  return std::pow(h, k - mu) * seminorm_1mu(w, S, mu);
}

Eigen::MatrixXd parse_points_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::vector<double> row;
    std::stringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      const auto b = field.find_first_not_of(" \t");
      const auto e = field.find_last_not_of(" \t");
      if (b == std::string::npos) throw Error(ErrorKind::invalid_argument, "empty CSV field on line " + std::to_string(lineno));
      double v = 0.0;
      const char* begin = field.data() + b;
      const char* end = field.data() + e + 1;
      auto [ptr, ec] = std::from_chars(begin, end, v);
      if (ec != std::errc() || ptr != end) {
        throw Error(ErrorKind::invalid_argument, "bad number '" + field + "' on line " + std::to_string(lineno));
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorKind::invalid_argument, "inconsistent column count on line " + std::to_string(lineno));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::invalid_argument, "point file contains no points");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return out;
}

Eigen::MatrixXd read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::invalid_argument, "cannot open point file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_points_csv(buf.str());
}

std::string format_points_csv(const Eigen::MatrixXd& points) {
  std::string out;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = 0; j < points.cols(); ++j) {
      if (j) out += ',';
      out += format_double(points(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_points_csv(const std::string& path, const Eigen::MatrixXd& points) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::invalid_argument, "cannot write point file: " + path);
  out << format_points_csv(points);
}

}  // namespace mindiff
