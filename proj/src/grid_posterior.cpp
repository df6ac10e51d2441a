#include "kerncollab/grid_posterior.hpp"

#include <stdexcept>

namespace kerncollab {

GridPosterior::GridPosterior(std::shared_ptr<const Eigen::MatrixXd> grid_gram,
                             double lambda)
    : grid_gram_(std::move(grid_gram)), lambda_(lambda) {
  if (!grid_gram_ || grid_gram_->rows() != grid_gram_->cols())
    throw std::invalid_argument("GridPosterior: square grid Gram required");
  if (!(lambda > 0.0))
    throw std::invalid_argument("GridPosterior: lambda must be positive");
  mu_ = Eigen::VectorXd::Zero(grid_gram_->rows());
  cov_ = *grid_gram_;
}

void GridPosterior::observe(int index, double y) {
  if (index < 0 || index >= cov_.rows())
    throw std::out_of_range("GridPosterior: grid index out of range");
  const double denom = cov_(index, index) + lambda_;
  const Eigen::VectorXd c = cov_.col(index);
  mu_ += c * ((y - mu_(index)) / denom);
  cov_.noalias() -= (c / denom) * c.transpose();
  ++count_;
}

double GridPosterior::variance(int index) const {
  const double v = cov_(index, index);
  if (v < 0.0) {
    if (v > -1e-10) return 0.0;
    throw std::runtime_error("GridPosterior: negative variance");
  }
  return v;
}

Eigen::VectorXd GridPosterior::variance_grid() const {
  Eigen::VectorXd d = cov_.diagonal();
  for (Eigen::Index j = 0; j < d.size(); ++j) {
    if (d(j) < 0.0) {
      if (d(j) > -1e-10)
        d(j) = 0.0;
      else
        throw std::runtime_error("GridPosterior: negative variance");
    }
  }
  return d;
}

}  // namespace kerncollab
