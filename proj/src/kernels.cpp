#include "kerncollab/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace kerncollab {

KernelSpec KernelSpec::se(double lengthscale) {
  KernelSpec s{KernelFamily::SquaredExponential, lengthscale, 1.5};
  s.validate();
  return s;
}

KernelSpec KernelSpec::matern(double lengthscale, double nu) {
  KernelSpec s{KernelFamily::Matern, lengthscale, nu};
  s.validate();
  return s;
}

void KernelSpec::validate() const {
  if (!(lengthscale > 0.0))
    throw std::invalid_argument("kernel lengthscale must be positive");
  if (family == KernelFamily::Matern && nu != 0.5 && nu != 1.5 && nu != 2.5)
    throw std::invalid_argument(
        "Matern smoothness must be one of 1/2, 3/2, 5/2");
}

namespace {

double eval_scaled_distance(const KernelSpec& spec, double r) {
  switch (spec.family) {
    case KernelFamily::SquaredExponential:
      return std::exp(-0.5 * r * r);
    case KernelFamily::Matern: {
      if (spec.nu == 0.5) return std::exp(-r);
      if (spec.nu == 1.5) {
        const double s = std::sqrt(3.0) * r;
        return (1.0 + s) * std::exp(-s);
      }
      const double s = std::sqrt(5.0) * r;
      return (1.0 + s + 5.0 * r * r / 3.0) * std::exp(-s);
    }
  }
  throw std::logic_error("unreachable kernel family");
}

}  // namespace

double eval(const KernelSpec& spec, const Point& x, const Point& xp) {
  spec.validate();
  if (x.size() != xp.size())
    throw std::invalid_argument("kernel eval: point dimension mismatch");
  return eval_scaled_distance(spec, (x - xp).norm() / spec.lengthscale);
}

Eigen::MatrixXd gram(const KernelSpec& spec, const PointList& xs) {
  spec.validate();
  const Eigen::Index n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = eval(spec, xs[i], xs[i]);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = eval(spec, xs[i], xs[j]);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

Eigen::VectorXd cross(const KernelSpec& spec, const PointList& xs,
                      const Point& x) {
  const Eigen::Index n = static_cast<Eigen::Index>(xs.size());
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = eval(spec, xs[i], x);
  return v;
}

Eigen::MatrixXd cross_matrix(const KernelSpec& spec, const PointList& a,
                             const PointList& b) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(a.size()),
                    static_cast<Eigen::Index>(b.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = eval(spec, a[static_cast<size_t>(i)],
                     b[static_cast<size_t>(j)]);
  return m;
}

}  // namespace kerncollab
