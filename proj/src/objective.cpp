#include "mmpca/objective.hpp"

#include <cmath>

namespace mmpca {

int ModelParams::parameter_count() const {
  int n = 0;
  for (const auto& xi : angles) n += xi.count();
  for (const auto& d : scales) n += static_cast<int>(d.size());
  return n;
}

void ModelParams::validate(const ViewGraph& graph) const {
  if (rank < 1) throw invariant_error("ModelParams: rank must be positive");
  if (static_cast<int>(angles.size()) != graph.n_view ||
      static_cast<int>(scales.size()) != graph.n_view)
    throw invariant_error("ModelParams: per-view container size mismatch");
  for (int i = 0; i < graph.n_view; ++i) {
    const auto& xi = angles[static_cast<size_t>(i)];
    xi.validate();
    if (xi.p != graph.dims[static_cast<size_t>(i)] || xi.k != rank)
      throw invariant_error("ModelParams: angle layout mismatch for view " + std::to_string(i));
    const auto& d = scales[static_cast<size_t>(i)];
    if (static_cast<int>(d.size()) != rank)
      throw invariant_error("ModelParams: scale size mismatch for view " + std::to_string(i));
    if (!d.allFinite()) throw invariant_error("ModelParams: non-finite scale value");
  }
}

double smooth_abs(double x, double tau) {
  return x * std::tanh(x / tau);
}

double smooth_abs_derivative(double x, double tau) {
  const double t = std::tanh(x / tau);
  return t + (x / tau) * (1.0 - t * t);
}

std::vector<Eigen::MatrixXd> view_loadings(const ModelParams& params) {
  std::vector<Eigen::MatrixXd> v;
  v.reserve(params.angles.size());
  for (const auto& xi : params.angles) v.push_back(build_kframe(xi).matrix);
  return v;
}

double reconstruction_loss(const Dataset& dataset, const ModelParams& params) {
  const auto v = view_loadings(params);
  double loss = 0.0;
  for (const auto& m : dataset.matrices) {
    const auto& vi = v[static_cast<size_t>(m.row_view)];
    const auto& vj = v[static_cast<size_t>(m.col_view)];
    const Eigen::VectorXd dprod = params.scales[static_cast<size_t>(m.row_view)].cwiseProduct(
        params.scales[static_cast<size_t>(m.col_view)]);
    const Eigen::MatrixXd approx = vi * dprod.asDiagonal() * vj.transpose();
    loss += ((m.values - approx).array() * m.mask).matrix().squaredNorm();
  }
  return loss;
}

PenaltyTerms penalty_terms(const ModelParams& params, const Penalties& penalties, int n_view) {
  PenaltyTerms t;
  const double tau = penalties.tau;
  const int k = params.rank;

  for (const auto& d : params.scales)
    for (int c = 0; c < k; ++c) t.p1 += smooth_abs(d(c), tau);

  for (int c = 0; c < k; ++c) {
    double row_sq = 0.0;
    for (const auto& d : params.scales) row_sq += d(c) * d(c);
    t.p2 += std::sqrt(row_sq);
  }

  const auto v = view_loadings(params);
  for (size_t i = 0; i < v.size(); ++i) {
    const Eigen::MatrixXd vd = v[i] * params.scales[i].asDiagonal();
    for (Eigen::Index c = 0; c < vd.cols(); ++c)
      for (Eigen::Index r = 0; r < vd.rows(); ++r) t.p3 += smooth_abs(vd(r, c), tau);
    for (Eigen::Index r = 0; r < vd.rows(); ++r) t.p4 += vd.row(r).norm();
  }
  t.p3 /= static_cast<double>(n_view);
  t.p4 /= static_cast<double>(n_view);
  return t;
}

double lambda_scale_factor(const Dataset& dataset) {
  if (dataset.matrices.empty()) throw input_error("lambda_scale_factor: empty dataset");
  double c = 0.0;
  for (const auto& m : dataset.matrices) c += std::sqrt(m.observed_sq_norm());
  c /= static_cast<double>(dataset.matrices.size());
  return c * std::sqrt(c);
}

double scale_lambda(double lambda, const Dataset& dataset) {
  return lambda * lambda_scale_factor(dataset);
}

double objective_value(const Dataset& dataset, const ModelParams& params,
                       const Penalties& penalties) {
  const double loss = reconstruction_loss(dataset, params);
  const PenaltyTerms t = penalty_terms(params, penalties, dataset.graph.n_view);
  const double f = lambda_scale_factor(dataset);
  return loss + f * (penalties.lambda1 * t.p1 + penalties.lambda2 * t.p2 +
                     penalties.lambda3 * t.p3 + penalties.lambda4 * t.p4);
}

Eigen::VectorXd pack_params(const ModelParams& params) {
  Eigen::VectorXd x(params.parameter_count());
  Eigen::Index pos = 0;
  for (size_t i = 0; i < params.angles.size(); ++i) {
    for (double a : params.angles[i].angles) x(pos++) = a;
    for (Eigen::Index c = 0; c < params.scales[i].size(); ++c) x(pos++) = params.scales[i](c);
  }
  return x;
}

ModelParams unpack_params(const Eigen::VectorXd& x, const ViewGraph& graph, int rank) {
  ModelParams params;
  params.rank = rank;
  Eigen::Index pos = 0;
  for (int i = 0; i < graph.n_view; ++i) {
    GivensAngles xi(graph.dims[static_cast<size_t>(i)], rank);
    for (double& a : xi.angles) a = x(pos++);
    params.angles.push_back(std::move(xi));
    Eigen::VectorXd d(rank);
    for (int c = 0; c < rank; ++c) d(c) = x(pos++);
    params.scales.push_back(std::move(d));
  }
  if (pos != x.size()) throw invariant_error("unpack_params: length mismatch");
  return params;
}

}  // namespace mmpca
