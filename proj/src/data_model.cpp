#include "mmpca/data_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mmpca/rng.hpp"

namespace mmpca {

void ViewGraph::validate() const {
  if (n_view < 1) throw input_error("ViewGraph: need at least one view");
  if (static_cast<int>(dims.size()) != n_view)
    throw input_error("ViewGraph: dims size != n_view");
  for (int d : dims)
    if (d < 1) throw input_error("ViewGraph: non-positive view dimension");
  std::set<std::pair<int, int>> seen;
  for (auto [i, j] : links) {
    if (i < 0 || i >= n_view || j < 0 || j >= n_view)
      throw input_error("ViewGraph: link references unknown view");
    if (i == j) throw input_error("ViewGraph: link connects a view to itself");
    if (!seen.insert({i, j}).second) throw input_error("ViewGraph: duplicate link");
  }
}

bool ViewGraph::is_connected() const {
  if (n_view <= 1) return true;
  std::vector<int> reach;
  std::vector<bool> seen(static_cast<size_t>(n_view), false);
  reach.push_back(0);
  seen[0] = true;
  while (!reach.empty()) {
    int v = reach.back();
    reach.pop_back();
    for (auto [i, j] : links) {
      int other = -1;
      if (i == v) other = j;
      if (j == v) other = i;
      if (other >= 0 && !seen[static_cast<size_t>(other)]) {
        seen[static_cast<size_t>(other)] = true;
        reach.push_back(other);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

int ViewGraph::link_index(int i, int j) const {
  for (size_t t = 0; t < links.size(); ++t)
    if (links[t].first == i && links[t].second == j) return static_cast<int>(t);
  return -1;
}

std::vector<std::pair<int, bool>> ViewGraph::links_of_view(int view) const {
  std::vector<std::pair<int, bool>> out;
  for (size_t t = 0; t < links.size(); ++t) {
    if (links[t].first == view) out.emplace_back(static_cast<int>(t), true);
    if (links[t].second == view) out.emplace_back(static_cast<int>(t), false);
  }
  return out;
}

void MaskedMatrix::validate(const ViewGraph& graph) const {
  if (row_view < 0 || row_view >= graph.n_view || col_view < 0 || col_view >= graph.n_view)
    throw input_error("MaskedMatrix: unknown view index");
  if (values.rows() != graph.dims[static_cast<size_t>(row_view)] ||
      values.cols() != graph.dims[static_cast<size_t>(col_view)])
    throw input_error("MaskedMatrix: shape does not match view dimensions for views (" +
                      std::to_string(row_view) + "," + std::to_string(col_view) + ")");
  if (mask.rows() != values.rows() || mask.cols() != values.cols())
    throw input_error("MaskedMatrix: mask shape mismatch");
  if (((mask != 0.0) && (mask != 1.0)).any())
    throw input_error("MaskedMatrix: mask entries must be 0 or 1");
  if (observed_count() == 0) throw input_error("MaskedMatrix: no observed elements");
}

void Dataset::validate() const {
  graph.validate();
  if (matrices.size() != graph.links.size())
    throw input_error("Dataset: matrix count != link count");
  for (size_t t = 0; t < matrices.size(); ++t) {
    matrices[t].validate(graph);
    if (matrices[t].row_view != graph.links[t].first ||
        matrices[t].col_view != graph.links[t].second)
      throw input_error("Dataset: matrix order does not match links");
  }
}

Centering centering_from_string(const std::string& s) {
  if (s == "none") return Centering::None;
  if (s == "rows") return Centering::Rows;
  if (s == "columns") return Centering::Columns;
  if (s == "both") return Centering::Both;
  throw input_error("unknown centering policy: " + s);
}

MatrixScaling scaling_from_string(const std::string& s) {
  if (s == "none") return MatrixScaling::None;
  if (s == "equal_frobenius") return MatrixScaling::EqualFrobenius;
  if (s == "frobenius_per_element") return MatrixScaling::FrobeniusPerElement;
  if (s == "frobenius_per_row") return MatrixScaling::FrobeniusPerRow;
  if (s == "frobenius_per_column") return MatrixScaling::FrobeniusPerColumn;
  if (s == "equal_top_singular") return MatrixScaling::EqualTopSingular;
  if (s == "top_singular_per_row") return MatrixScaling::TopSingularPerRow;
  throw input_error("unknown scaling policy: " + s);
}

std::string to_string(Centering c) {
  switch (c) {
    case Centering::None: return "none";
    case Centering::Rows: return "rows";
    case Centering::Columns: return "columns";
    case Centering::Both: return "both";
  }
  return "none";
}

std::string to_string(MatrixScaling s) {
  switch (s) {
    case MatrixScaling::None: return "none";
    case MatrixScaling::EqualFrobenius: return "equal_frobenius";
    case MatrixScaling::FrobeniusPerElement: return "frobenius_per_element";
    case MatrixScaling::FrobeniusPerRow: return "frobenius_per_row";
    case MatrixScaling::FrobeniusPerColumn: return "frobenius_per_column";
    case MatrixScaling::EqualTopSingular: return "equal_top_singular";
    case MatrixScaling::TopSingularPerRow: return "top_singular_per_row";
  }
  return "none";
}

Eigen::MatrixXd NormalizationRecord::denormalize(int link, const Eigen::MatrixXd& v) const {
  const size_t t = static_cast<size_t>(link);
  Eigen::MatrixXd out = v / (matrix_scale[t] * global_scale);
  out.colwise() += row_center[t];
  out.rowwise() += col_center[t].transpose();
  return out;
}

Eigen::MatrixXd NormalizationRecord::denormalize_global_only(const Eigen::MatrixXd& v) const {
  return v / global_scale;
}

namespace {

double top_singular_value(const MaskedMatrix& m) {
  Eigen::MatrixXd x = m.values.array() * m.mask;
  if (x.rows() <= 32 && x.cols() <= 32)
    return Eigen::JacobiSVD<Eigen::MatrixXd>(x).singularValues()(0);
  return Eigen::BDCSVD<Eigen::MatrixXd>(x).singularValues()(0);
}

// Subtract missing-aware row means (over observed entries), in place.
void center_rows(MaskedMatrix& m, int link, Eigen::VectorXd& centers) {
  for (Eigen::Index r = 0; r < m.values.rows(); ++r) {
    const double cnt = m.mask.row(r).sum();
    if (cnt == 0.0)
      throw input_error("normalize: matrix " + std::to_string(link) + " row " +
                        std::to_string(r) + " has no observed elements, centering undefined");
    const double mean = (m.values.row(r).array() * m.mask.row(r)).sum() / cnt;
    centers(r) += mean;
    m.values.row(r).array() -= mean;
  }
  m.values.array() *= m.mask;  // keep missing slots at zero
}

}  // namespace

std::pair<Dataset, NormalizationRecord> normalize(const Dataset& dataset,
                                                  const NormalizationPolicy& policy,
                                                  std::vector<std::string>* warnings) {
  dataset.validate();
  if (!dataset.graph.is_connected() && warnings)
    warnings->push_back("view graph is not connected; integration decomposes into "
                        "independent sub-problems");

  Dataset out = dataset;
  const size_t n_m = out.matrices.size();
  NormalizationRecord rec;
  rec.matrix_scale.assign(n_m, 1.0);
  for (size_t t = 0; t < n_m; ++t) {
    rec.row_center.emplace_back(Eigen::VectorXd::Zero(out.matrices[t].values.rows()));
    rec.col_center.emplace_back(Eigen::VectorXd::Zero(out.matrices[t].values.cols()));
  }

  // Centering: rows first, then columns, one pass each.
  for (size_t t = 0; t < n_m; ++t) {
    auto& m = out.matrices[t];
    if (policy.centering == Centering::Rows || policy.centering == Centering::Both)
      center_rows(m, static_cast<int>(t), rec.row_center[t]);
    if (policy.centering == Centering::Columns || policy.centering == Centering::Both) {
      m.values.transposeInPlace();
      Eigen::ArrayXXd mask_t = m.mask.transpose();
      std::swap(m.mask, mask_t);
      center_rows(m, static_cast<int>(t), rec.col_center[t]);
      m.values.transposeInPlace();
      mask_t = m.mask.transpose();
      std::swap(m.mask, mask_t);
    }
  }

  // Matrix-wise relative scaling.
  for (size_t t = 0; t < n_m; ++t) {
    auto& m = out.matrices[t];
    MatrixScaling s = policy.scaling;
    if (auto it = policy.per_matrix.find(static_cast<int>(t)); it != policy.per_matrix.end())
      s = it->second;
    double scale = 1.0;
    const double fro = std::sqrt(m.observed_sq_norm());
    switch (s) {
      case MatrixScaling::None: break;
      case MatrixScaling::EqualFrobenius: scale = 1.0 / fro; break;
      case MatrixScaling::FrobeniusPerElement:
        scale = std::sqrt(static_cast<double>(m.values.size())) / fro;
        break;
      case MatrixScaling::FrobeniusPerRow:
        scale = std::sqrt(static_cast<double>(m.values.rows())) / fro;
        break;
      case MatrixScaling::FrobeniusPerColumn:
        scale = std::sqrt(static_cast<double>(m.values.cols())) / fro;
        break;
      case MatrixScaling::EqualTopSingular: scale = 1.0 / top_singular_value(m); break;
      case MatrixScaling::TopSingularPerRow:
        scale = static_cast<double>(m.values.rows()) / top_singular_value(m);
        break;
    }
    if (!std::isfinite(scale) || scale <= 0.0)
      throw input_error("normalize: degenerate scale for matrix " + std::to_string(t));
    m.values *= scale;
    rec.matrix_scale[t] = scale;
  }

  // Global rescale so the largest singular value over all matrices is pi^2.
  if (policy.rescale_to_pi_sq) {
    double sv_max = 0.0;
    for (const auto& m : out.matrices) sv_max = std::max(sv_max, top_singular_value(m));
    if (sv_max <= 0.0) throw input_error("normalize: all matrices are zero");
    rec.global_scale = M_PI * M_PI / sv_max;
    for (auto& m : out.matrices) m.values *= rec.global_scale;
  }

  return {std::move(out), std::move(rec)};
}

HoldoutSplit holdout_split(const Dataset& dataset, double probability, std::uint64_t seed) {
  dataset.validate();
  if (probability < 0.0 || probability >= 1.0)
    throw input_error("holdout_split: probability must be in [0, 1)");

  constexpr int max_attempts = 100;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(attempt)));
    HoldoutSplit split;
    split.training = dataset;
    bool ok = true;
    for (size_t t = 0; t < dataset.matrices.size() && ok; ++t) {
      auto& m = split.training.matrices[t];
      // row-major element order, fixed for reproducibility
      for (Eigen::Index r = 0; r < m.values.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.values.cols(); ++c) {
          if (m.mask(r, c) == 0.0) continue;
          if (rng.uniform() < probability) {
            m.mask(r, c) = 0.0;
            m.values(r, c) = 0.0;
            split.test.push_back({static_cast<int>(t), static_cast<int>(r), static_cast<int>(c)});
          }
        }
      }
      if (m.observed_count() == 0) ok = false;
    }
    if (ok) return split;
  }
  throw input_error("holdout_split: could not keep every matrix partially observed after " +
                    std::to_string(max_attempts) + " attempts; lower the holdout probability");
}

}  // namespace mmpca
