#include "kerncollab/sparse.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kerncollab {

namespace {

// SPD solve with one jitter retry, mirroring the exact-GP policy.
Eigen::LLT<Eigen::MatrixXd> spd_factor(Eigen::MatrixXd a, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    a.diagonal().array() += 1e-10;
    llt.compute(a);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error(std::string("sparse GP: singular system in ") +
                               what);
  }
  return llt;
}

}  // namespace

double default_q0(double epsilon, long horizon_T, long clients_K,
                  double delta0) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (!(delta0 > 0.0 && delta0 < 1.0))
    throw std::invalid_argument("delta0 must lie in (0, 1)");
  if (horizon_T < 1 || clients_K < 1)
    throw std::invalid_argument("T and K must be >= 1");
  const double log_term =
      std::log(8.0 * static_cast<double>(horizon_T) *
               static_cast<double>(clients_K) / delta0);
  return 6.0 * (1.0 + epsilon) * log_term / (epsilon * epsilon * (1.0 - epsilon));
}

SparsityParams SparsityParams::make(double epsilon, long horizon_T,
                                    long clients_K, double delta0) {
  SparsityParams p;
  p.epsilon = epsilon;
  p.q0 = default_q0(epsilon, horizon_T, clients_K, delta0);
  p.chi = (1.0 + epsilon) / (1.0 - epsilon);
  return p;
}

InducingModel InducingModel::from_broadcast(KernelSpec kernel, double lambda,
                                            PointList z, Eigen::VectorXd w) {
  if (static_cast<Eigen::Index>(z.size()) != w.size())
    throw std::invalid_argument("from_broadcast: |z| != |w|");
  InducingModel m;
  m.kernel = kernel;
  m.lambda = lambda;
  m.z = std::move(z);
  m.w = std::move(w);
  m.fitted = true;
  return m;
}

InducingModel sample_inducing(const GpPosterior& gp, double q0, Rng& rng) {
  if (gp.size() < 1)
    throw std::invalid_argument("sample_inducing: at least one observation");
  if (q0 < 0.0) throw std::invalid_argument("sample_inducing: q0 >= 0");
  InducingModel m;
  m.kernel = gp.kernel();
  m.lambda = gp.lambda();
  m.full_x = gp.points();
  m.full_y = gp.targets();
  const Eigen::VectorXd var = gp.variance_at(m.full_x);
  for (size_t j = 0; j < m.full_x.size(); ++j) {
    const double p = std::min(1.0, q0 * var(static_cast<Eigen::Index>(j)));
    if (rng.bernoulli(p)) m.z.push_back(m.full_x[j]);
  }
  return m;
}

void fit_weights(InducingModel& model) {
  if (model.z.empty())
    throw std::invalid_argument("fit_weights: empty inducing set");
  const Eigen::MatrixXd k_zz = gram(model.kernel, model.z);
  const Eigen::MatrixXd k_zx = cross_matrix(model.kernel, model.z, model.full_x);
  const Eigen::MatrixXd a =
      model.lambda * k_zz + k_zx * k_zx.transpose();
  model.w = spd_factor(a, "fit_weights").solve(k_zx * model.full_y);
  model.fitted = true;
}

double approx_mean(const InducingModel& model, const Point& x) {
  if (model.z.empty()) return 0.0;
  if (!model.fitted)
    throw std::logic_error("approx_mean: weights not fitted");
  return cross(model.kernel, model.z, x).dot(model.w);
}

Eigen::VectorXd approx_mean_at(const InducingModel& model,
                               const PointList& xs) {
  if (model.z.empty())
    return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(xs.size()));
  if (!model.fitted)
    throw std::logic_error("approx_mean_at: weights not fitted");
  return cross_matrix(model.kernel, xs, model.z) * model.w;
}

double approx_variance(const InducingModel& model, const Point& x) {
  if (model.z.empty())
    throw std::invalid_argument("approx_variance: empty inducing set");
  const Eigen::MatrixXd k_zz = gram(model.kernel, model.z);
  const Eigen::MatrixXd k_zx = cross_matrix(model.kernel, model.z, model.full_x);
  const Eigen::VectorXd k_z = cross(model.kernel, model.z, x);

  const Eigen::VectorXd nys = spd_factor(k_zz, "approx_variance K_zz").solve(k_z);
  const Eigen::MatrixXd b =
      k_zz + (1.0 / model.lambda) * (k_zx * k_zx.transpose());
  const Eigen::VectorXd reg = spd_factor(b, "approx_variance").solve(k_z);

  const double raw = (eval(model.kernel, x, x) - k_z.dot(nys) + k_z.dot(reg)) /
                     model.lambda;
  if (raw < 0.0) {
    if (raw > -1e-10) return 0.0;
    throw std::runtime_error("approx_variance: negative variance");
  }
  return raw;
}

double sparse_beta(double bound_B, double noise_R, double lambda,
                   double epsilon, long horizon_T, double delta) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  return bound_B * std::sqrt(2.0 * lambda / (1.0 - epsilon)) +
         noise_R * std::sqrt(2.0 * std::log(static_cast<double>(horizon_T) / delta));
}

long comm_phase_length(double q0, double lambda, double gamma_hat) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (q0 < 0.0 || gamma_hat < 0.0)
    throw std::invalid_argument("q0 and gamma_hat must be non-negative");
  return static_cast<long>(
      std::ceil(9.0 * (1.0 + 1.0 / lambda) * q0 * gamma_hat));
}

}  // namespace kerncollab
