#pragma once

#include <Eigen/Dense>
#include <vector>

namespace kerncollab {

using Point = Eigen::VectorXd;
using PointList = std::vector<Point>;

enum class KernelFamily { SquaredExponential, Matern };

/// Normalized positive-definite kernel: k(x, x) = 1 for both families.
/// Matern is restricted to the half-integer smoothness values with
/// closed-form expressions (nu in {1/2, 3/2, 5/2}).
struct KernelSpec {
  KernelFamily family = KernelFamily::SquaredExponential;
  double lengthscale = 1.0;
  double nu = 1.5;  // Matern only

  static KernelSpec se(double lengthscale);
  static KernelSpec matern(double lengthscale, double nu);

  void validate() const;  // throws std::invalid_argument
};

/// k(x, x') in (0, 1].
double eval(const KernelSpec& spec, const Point& x, const Point& xp);

/// n x n Gram matrix; each unordered pair evaluated once, so the result is
/// exactly symmetric. Empty X yields the 0x0 matrix.
Eigen::MatrixXd gram(const KernelSpec& spec, const PointList& xs);

/// [k(x_1, x), ..., k(x_n, x)]
Eigen::VectorXd cross(const KernelSpec& spec, const PointList& xs,
                      const Point& x);

/// Cross-kernel matrix [k(a_i, b_j)], |a| x |b|.
Eigen::MatrixXd cross_matrix(const KernelSpec& spec, const PointList& a,
                             const PointList& b);

}  // namespace kerncollab
