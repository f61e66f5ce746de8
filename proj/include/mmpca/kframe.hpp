#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mmpca/common.hpp"

namespace mmpca {

// Angles parametrizing a p x k frame with orthonormal columns. One angle is
// stored for each pair (a, b) with 0 <= b < a < p and b < k (the strictly
// lower-triangular part of a p x k layout), giving m = p*k - k*(k+1)/2
// parameters. The canonical factor order is column-major: b = 0..k-1 outer,
// a = b+1..p-1 inner. The frame is the product of the rotation factors in
// that order applied to the first k columns of the identity,
//   V = R(b=0,a=1) R(b=0,a=2) ... R(b=k-1,a=p-1) I_pk,
// evaluated right to left. Forward map, gradient sweeps and the inverse all
// use this one ordering.
struct GivensAngles {
  int p = 0;
  int k = 0;
  std::vector<double> angles;

  GivensAngles() = default;
  GivensAngles(int p_, int k_);

  int count() const { return p * k - k * (k + 1) / 2; }
  int index(int a, int b) const;
  double& at(int a, int b) { return angles[static_cast<size_t>(index(a, b))]; }
  double at(int a, int b) const { return angles[static_cast<size_t>(index(a, b))]; }
  void validate() const;
};

// p x k matrix with orthonormal columns.
struct KFrame {
  int p = 0;
  int k = 0;
  Eigen::MatrixXd matrix;

  static constexpr double ortho_tol = 1e-10;

  KFrame() = default;
  KFrame(Eigen::MatrixXd m);

  // max |V^T V - I| element
  double orthonormality_error() const;
  bool is_orthonormal(double tol = ortho_tol) const {
    return orthonormality_error() <= tol;
  }
};

// Plane rotation acting on coordinates (b, a), b < a, as a full p x p matrix.
Eigen::MatrixXd givens_rotation(double theta, int a, int b, int p);

// Derivative of the rotation with respect to its angle; zero outside the
// four entries in rows/columns {a, b}.
Eigen::MatrixXd givens_derivative(double theta, int a, int b, int p);

// In-place rank-2 row updates on rows (b, a) of w. Each costs O(cols).
void apply_rotation(Eigen::MatrixXd& w, int a, int b, double theta);             // w <- R w
void apply_rotation_transposed(Eigen::MatrixXd& w, int a, int b, double theta);  // w <- R^T w

// Forward map: the frame parametrized by the angles.
KFrame build_kframe(const GivensAngles& xi);

// A p x (p-k) frame c with [v | c] orthogonal. No determinant guarantee;
// invert_kframe tries both sign candidates.
KFrame orthogonal_complement(const KFrame& v);

// Angles whose forward map reproduces v element-wise within round_trip_tol.
// Works on the completed square matrix [v | complement]; if annihilation does
// not reach the identity (improper completion), the sign-flipped complement
// is used instead. Throws invariant_error if neither candidate round-trips.
GivensAngles invert_kframe(const KFrame& v);
constexpr double kframe_round_trip_tol = 1e-8;

// Factorization V = prefix * R(theta) * suffix_frame at one stored angle.
// Reference implementation for tests; the gradient code reproduces the same
// split incrementally.
struct FactorSplit {
  Eigen::MatrixXd prefix;        // p x p, product of factors before (a, b)
  Eigen::MatrixXd suffix_frame;  // p x k, remaining factors applied to I_pk
  int a = 0;
  int b = 0;
  double theta = 0.0;
};
FactorSplit factor_split(const GivensAngles& xi, int a, int b);

}  // namespace mmpca
