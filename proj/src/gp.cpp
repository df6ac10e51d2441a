#include "kerncollab/gp.hpp"

#include <cmath>
#include <stdexcept>

namespace kerncollab {

void ConfidenceParams::validate() const {
  if (bound_B < 0.0) throw std::invalid_argument("bound_B must be >= 0");
  if (noise_R < 0.0) throw std::invalid_argument("noise_R must be >= 0");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("delta must lie in (0, 1)");
}

double beta(const ConfidenceParams& params, double lambda) {
  params.validate();
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  return params.bound_B +
         params.noise_R * std::sqrt((2.0 / lambda) * std::log(2.0 / params.delta));
}

GpPosterior::GpPosterior(KernelSpec kernel, double lambda, Update mode)
    : kernel_(kernel), lambda_(lambda), mode_(mode) {
  kernel_.validate();
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
}

void GpPosterior::refactorize() {
  Eigen::MatrixXd a = gram(kernel_, xs_);
  a.diagonal().array() += lambda_;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    // one jitter retry, then hard error
    a.diagonal().array() += 1e-10;
    llt.compute(a);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("GpPosterior: Cholesky factorization failed");
  }
  chol_ = llt.matrixL();
  alpha_ = chol_.triangularView<Eigen::Lower>().solve(y_);
  chol_.transpose().triangularView<Eigen::Upper>().solveInPlace(alpha_);
}

void GpPosterior::extend(const Point& x) {
  const Eigen::Index t = chol_.rows();
  Eigen::VectorXd kx = cross(kernel_, xs_, x);  // xs_ does not yet contain x
  Eigen::VectorXd l = chol_.triangularView<Eigen::Lower>().solve(kx);
  const double pivot = eval(kernel_, x, x) + lambda_ - l.squaredNorm();
  if (pivot <= 1e-12) {
    xs_.push_back(x);
    refactorize();
    return;
  }
  Eigen::MatrixXd grown = Eigen::MatrixXd::Zero(t + 1, t + 1);
  grown.topLeftCorner(t, t) = chol_;
  grown.block(t, 0, 1, t) = l.transpose();
  grown(t, t) = std::sqrt(pivot);
  chol_ = std::move(grown);
  xs_.push_back(x);
  alpha_ = chol_.triangularView<Eigen::Lower>().solve(y_);
  chol_.transpose().triangularView<Eigen::Upper>().solveInPlace(alpha_);
}

void GpPosterior::append(const Point& x, double y) {
  info_gain_ += variance(x);

  Eigen::VectorXd grown_y(y_.size() + 1);
  grown_y.head(y_.size()) = y_;
  grown_y(y_.size()) = y;
  y_ = std::move(grown_y);

  if (mode_ == Update::Extend && !xs_.empty()) {
    extend(x);
  } else {
    xs_.push_back(x);
    refactorize();
  }
}

double GpPosterior::mean(const Point& x) const {
  if (xs_.empty()) return 0.0;
  return cross(kernel_, xs_, x).dot(alpha_);
}

double GpPosterior::variance_clamped(double raw) const {
  if (raw < 0.0) {
    if (raw > -1e-10) return 0.0;
    throw std::runtime_error("GpPosterior: negative posterior variance");
  }
  return raw;
}

double GpPosterior::variance(const Point& x) const {
  const double prior = eval(kernel_, x, x);
  if (xs_.empty()) return prior;
  Eigen::VectorXd v =
      chol_.triangularView<Eigen::Lower>().solve(cross(kernel_, xs_, x));
  return variance_clamped(prior - v.squaredNorm());
}

Eigen::VectorXd GpPosterior::mean_at(const PointList& xs) const {
  if (xs_.empty())
    return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(xs.size()));
  return cross_matrix(kernel_, xs, xs_) * alpha_;
}

Eigen::VectorXd GpPosterior::variance_at(const PointList& xs) const {
  const Eigen::Index m = static_cast<Eigen::Index>(xs.size());
  Eigen::VectorXd out(m);
  if (xs_.empty()) {
    for (Eigen::Index j = 0; j < m; ++j)
      out(j) = eval(kernel_, xs[static_cast<size_t>(j)],
                    xs[static_cast<size_t>(j)]);
    return out;
  }
  Eigen::MatrixXd c = cross_matrix(kernel_, xs_, xs);  // t x m
  chol_.triangularView<Eigen::Lower>().solveInPlace(c);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double prior = eval(kernel_, xs[static_cast<size_t>(j)],
                              xs[static_cast<size_t>(j)]);
    out(j) = variance_clamped(prior - c.col(j).squaredNorm());
  }
  return out;
}

std::pair<int, Point> max_variance_point(const GpPosterior& gp,
                                         const PointList& grid) {
  if (grid.empty())
    throw std::invalid_argument("max_variance_point: empty grid");
  const Eigen::VectorXd var = gp.variance_at(grid);
  int best = 0;
  for (int j = 1; j < static_cast<int>(grid.size()); ++j)
    if (var(j) > var(best)) best = j;
  return {best, grid[static_cast<size_t>(best)]};
}

bool max_std_bound_check(const GpPosterior& gp, const PointList& grid) {
  const int t = gp.size();
  if (t < 1) throw std::invalid_argument("max_std_bound_check: t >= 1 required");
  const double max_std = std::sqrt(gp.variance_at(grid).maxCoeff());
  return max_std <= std::sqrt(12.0 * gp.info_gain() / static_cast<double>(t));
}

}  // namespace kerncollab
