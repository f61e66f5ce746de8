#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "mmpca/data_model.hpp"
#include "mmpca/kframe.hpp"

namespace mmpca {

// Model state: per-view frame angles and per-view scale diagonals, all at a
// common working rank.
struct ModelParams {
  std::vector<GivensAngles> angles;
  std::vector<Eigen::VectorXd> scales;
  int rank = 0;

  int parameter_count() const;
  void validate(const ViewGraph& graph) const;
};

// Penalty configuration. Roles: lambda1 scale-diagonal sparsity (which views
// each component touches), lambda2 component group penalty (rank selection),
// lambda3 loading sparsity, lambda4 loading row groups (variable selection).
// tau controls the tanh smoothing of the absolute values inside lambda1 and
// lambda3 terms. Raw lambdas are rescaled by the data-dependent factor
// lambda_scale_factor before use.
struct Penalties {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  double lambda4 = 0.0;
  double tau = 1e-3;

  std::array<double, 4> lambdas() const { return {lambda1, lambda2, lambda3, lambda4}; }
};

// Group-norm epsilon guard, used in gradients only (never in reported values).
constexpr double group_norm_eps = 1e-12;
// Entries of the scale diagonals and of loading*scale products below this
// magnitude are snapped to exact zero when reporting structure.
constexpr double default_zero_threshold = 1e-4;

// x * tanh(x / tau): smooth, monotone approximation of |x| with bias <= tau.
double smooth_abs(double x, double tau);
double smooth_abs_derivative(double x, double tau);

// Loading frames V for every view.
std::vector<Eigen::MatrixXd> view_loadings(const ModelParams& params);

// Masked squared Frobenius reconstruction error, summed over all links.
double reconstruction_loss(const Dataset& dataset, const ModelParams& params);

struct PenaltyTerms {
  double p1 = 0.0;
  double p2 = 0.0;
  double p3 = 0.0;
  double p4 = 0.0;
};
// The four penalty values (unweighted by lambda). smooth_abs replaces the
// absolute value inside p1 and p3.
PenaltyTerms penalty_terms(const ModelParams& params, const Penalties& penalties, int n_view);

// c^{3/2} with c the mean observed Frobenius norm of the data matrices;
// multiplying each lambda by this factor removes the dependence of the
// penalty weights on the scale of the data.
double lambda_scale_factor(const Dataset& dataset);
double scale_lambda(double lambda, const Dataset& dataset);

// reconstruction_loss + sum_i scaled_lambda_i * P_i.
double objective_value(const Dataset& dataset, const ModelParams& params,
                       const Penalties& penalties);

// Flat parameter vector layout, fixed and shared with the gradient: for each
// view in index order, the view's angles in canonical order followed by its
// k scale values.
Eigen::VectorXd pack_params(const ModelParams& params);
ModelParams unpack_params(const Eigen::VectorXd& x, const ViewGraph& graph, int rank);

}  // namespace mmpca
