#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mindiff {

/// Evaluation point z together with N pairwise distinct centers, stored as
/// the rows of an N x d matrix.
class CenterSet {
 public:
  CenterSet(Eigen::VectorXd z, Eigen::MatrixXd points);

  int dim() const { return static_cast<int>(z_.size()); }
  int size() const { return static_cast<int>(points_.rows()); }
  const Eigen::VectorXd& z() const { return z_; }
  const Eigen::MatrixXd& points() const { return points_; }
  Eigen::VectorXd point(int j) const { return points_.row(j).transpose(); }

  /// ||x_j - z||_2
  double distance(int j) const { return (points_.row(j).transpose() - z_).norm(); }
  Eigen::VectorXd distances() const;

  /// Index of the center equal to z, or -1.
  int index_of_z() const;

  /// x_j -> z + h (x_j - z)
  CenterSet scaled(double h) const;
  CenterSet subset(const std::vector<int>& indices) const;
  CenterSet permuted(const std::vector<int>& order) const { return subset(order); }

 private:
  Eigen::VectorXd z_;
  Eigen::MatrixXd points_;
};

/// Centers mapped into the unit ball around the origin: y_j = (x_j - z) / h.
struct NormalizedSet {
  Eigen::MatrixXd Y;
  double h = 0.0;
};

double h_radius(const CenterSet& S);
/// Smallest distance from z to X \ {z}; throws when X = {z}.
double s_radius(const CenterSet& S);
NormalizedSet normalize(const CenterSet& S);

/// ||x_j - z||^mu with the convention ||.||^0 = 1 even at x_j = z.
double distance_power(double dist, double mu);
Eigen::VectorXd delta_vector(const CenterSet& S, double mu);

enum class Provenance { l1min, l2min, kernel, external };
const char* to_string(Provenance p);

/// Relative cutoff under which a weight counts as zero.
inline constexpr double kZeroWeightThreshold = 1e-12;

struct WeightVector {
  Eigen::VectorXd values;
  Provenance provenance = Provenance::external;
  int exactness_order = 0;  // claimed q; 0 when no exactness is claimed

  int size() const { return static_cast<int>(values.size()); }
  /// Indices j with |w_j| > threshold * max_i |w_i|.
  std::vector<int> effective_support() const;
  int support_size() const { return static_cast<int>(effective_support().size()); }
};

double seminorm_1mu(const Eigen::VectorXd& w, const CenterSet& S, double mu);
double seminorm_2mu(const Eigen::VectorXd& w, const CenterSet& S, double mu);
/// max_{u_j != 0} |u_j| ||x_j - z||^-mu, +inf if some u_j != 0 sits at z with mu > 0.
double dual_norm_1mu(const Eigen::VectorXd& u, const CenterSet& S, double mu);
/// h^(k - mu) ||w||_{1,mu}; h^k ||w||_1 for mu = 0.
double sigma_factor(const CenterSet& S, const Eigen::VectorXd& w, double mu, int k);

// CSV point files: one point per row, d comma-separated decimal columns.
// Blank lines and lines starting with '#' are skipped.
Eigen::MatrixXd read_points_csv(const std::string& path);
Eigen::MatrixXd parse_points_csv(const std::string& text);
void write_points_csv(const std::string& path, const Eigen::MatrixXd& points);
std::string format_points_csv(const Eigen::MatrixXd& points);

}  // namespace mindiff
