#include "mmpca/kframe.hpp"

#include <cmath>

namespace mmpca {

GivensAngles::GivensAngles(int p_, int k_) : p(p_), k(k_) {
  if (p < 1 || k < 1 || k > p)
    throw input_error("GivensAngles: need 1 <= k <= p, got p=" + std::to_string(p) +
                      " k=" + std::to_string(k));
  angles.assign(static_cast<size_t>(count()), 0.0);
}

int GivensAngles::index(int a, int b) const {
  if (b < 0 || b >= k || a <= b || a >= p)
    throw std::out_of_range("GivensAngles::index: pair (" + std::to_string(a) + "," +
                            std::to_string(b) + ") out of range for p=" + std::to_string(p) +
                            " k=" + std::to_string(k));
  // column b holds entries a = b+1..p-1
  return b * (p - 1) - b * (b - 1) / 2 + (a - b - 1);
}

void GivensAngles::validate() const {
  if (p < 1 || k < 1 || k > p) throw invariant_error("GivensAngles: bad dimensions");
  if (angles.size() != static_cast<size_t>(count()))
    throw invariant_error("GivensAngles: angle count " + std::to_string(angles.size()) +
                          " != " + std::to_string(count()));
  for (double x : angles)
    if (!std::isfinite(x)) throw invariant_error("GivensAngles: non-finite angle");
}

KFrame::KFrame(Eigen::MatrixXd m)
    : p(static_cast<int>(m.rows())), k(static_cast<int>(m.cols())), matrix(std::move(m)) {}

double KFrame::orthonormality_error() const {
  Eigen::MatrixXd g = matrix.transpose() * matrix;
  g.diagonal().array() -= 1.0;
  return g.cwiseAbs().maxCoeff();
}

Eigen::MatrixXd givens_rotation(double theta, int a, int b, int p) {
  if (b < 0 || a <= b || a >= p) throw std::out_of_range("givens_rotation: bad indices");
  Eigen::MatrixXd r = Eigen::MatrixXd::Identity(p, p);
  const double c = std::cos(theta), s = std::sin(theta);
  r(b, b) = c;
  r(b, a) = -s;
  r(a, b) = s;
  r(a, a) = c;
  return r;
}

Eigen::MatrixXd givens_derivative(double theta, int a, int b, int p) {
  if (b < 0 || a <= b || a >= p) throw std::out_of_range("givens_derivative: bad indices");
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(p, p);
  const double c = std::cos(theta), s = std::sin(theta);
  r(b, b) = -s;
  r(b, a) = -c;
  r(a, b) = c;
  r(a, a) = -s;
  return r;
}

void apply_rotation(Eigen::MatrixXd& w, int a, int b, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    const double wb = w(b, j), wa = w(a, j);
    w(b, j) = c * wb - s * wa;
    w(a, j) = s * wb + c * wa;
  }
}

void apply_rotation_transposed(Eigen::MatrixXd& w, int a, int b, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    const double wb = w(b, j), wa = w(a, j);
    w(b, j) = c * wb + s * wa;
    w(a, j) = -s * wb + c * wa;
  }
}

KFrame build_kframe(const GivensAngles& xi) {
  xi.validate();
  Eigen::MatrixXd w = Eigen::MatrixXd::Identity(xi.p, xi.k);
  // Product is applied right to left, so sweep the canonical order backwards.
  for (int b = xi.k - 1; b >= 0; --b)
    for (int a = xi.p - 1; a > b; --a) apply_rotation(w, a, b, xi.at(a, b));
  return KFrame(std::move(w));
}

KFrame orthogonal_complement(const KFrame& v) {
  if (!v.is_orthonormal())
    throw input_error("orthogonal_complement: input columns not orthonormal");
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(v.matrix);
  Eigen::MatrixXd q = qr.householderQ();
  return KFrame(q.rightCols(v.p - v.k));
}

namespace {

// Annihilate sub-diagonal entries of the square matrix w in canonical order,
// recording the angles. Returns true if w is reduced to the identity.
bool annihilate(Eigen::MatrixXd& w, GivensAngles& out) {
  const int p = static_cast<int>(w.rows());
  for (int b = 0; b < p - 1; ++b) {
    for (int a = b + 1; a < p; ++a) {
      const double theta = std::atan2(w(a, b), w(b, b));
      apply_rotation_transposed(w, a, b, theta);
      w(a, b) = 0.0;
      if (b < out.k) out.at(a, b) = theta;
    }
  }
  w.diagonal().array() -= 1.0;
  const bool ok = w.cwiseAbs().maxCoeff() <= 1e-8;
  w.diagonal().array() += 1.0;
  return ok;
}

}  // namespace

GivensAngles invert_kframe(const KFrame& v) {
  if (!v.is_orthonormal()) throw input_error("invert_kframe: input columns not orthonormal");
  const KFrame comp = orthogonal_complement(v);

  for (int candidate = 0; candidate < 2; ++candidate) {
    Eigen::MatrixXd w(v.p, v.p);
    w << v.matrix, comp.matrix;
    if (candidate == 1 && v.p > v.k) w.col(v.p - 1) = -w.col(v.p - 1);

    GivensAngles xi(v.p, v.k);
    if (!annihilate(w, xi)) continue;
    const KFrame rebuilt = build_kframe(xi);
    if ((rebuilt.matrix - v.matrix).cwiseAbs().maxCoeff() <= kframe_round_trip_tol) return xi;
  }
  throw invariant_error("invert_kframe: neither complement candidate round-trips");
}

FactorSplit factor_split(const GivensAngles& xi, int a, int b) {
  xi.validate();
  FactorSplit split;
  split.a = a;
  split.b = b;
  split.theta = xi.at(a, b);
  split.prefix = Eigen::MatrixXd::Identity(xi.p, xi.p);
  split.suffix_frame = Eigen::MatrixXd::Identity(xi.p, xi.k);
  const int target = xi.index(a, b);
  for (int bb = 0; bb < xi.k; ++bb)
    for (int aa = bb + 1; aa < xi.p; ++aa)
      if (xi.index(aa, bb) < target)
        split.prefix = split.prefix * givens_rotation(xi.at(aa, bb), aa, bb, xi.p);
  // suffix factors are applied right to left, i.e. canonical order reversed
  for (int bb = xi.k - 1; bb >= 0; --bb)
    for (int aa = xi.p - 1; aa > bb; --aa)
      if (xi.index(aa, bb) > target) apply_rotation(split.suffix_frame, aa, bb, xi.at(aa, bb));
  return split;
}

}  // namespace mmpca
