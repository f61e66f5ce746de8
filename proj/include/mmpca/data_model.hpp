#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mmpca/common.hpp"

namespace mmpca {

// The augmented multi-view layout: views, their dimensions, and the set of
// ordered view pairs (row view, column view) for which a data matrix exists.
struct ViewGraph {
  int n_view = 0;
  std::vector<int> dims;
  std::vector<std::pair<int, int>> links;

  void validate() const;  // throws input_error on malformed layouts
  bool is_connected() const;
  // Index into links of (i, j), or -1 if absent.
  int link_index(int i, int j) const;
  // All link indices that touch a view, with a flag telling whether the view
  // indexes the rows (true) or the columns (false) of that matrix.
  std::vector<std::pair<int, bool>> links_of_view(int view) const;
};

// One observed data block with its missingness mask (1 observed, 0 missing).
// Missing positions hold the value 0 and are ignored in every computation.
struct MaskedMatrix {
  int row_view = 0;
  int col_view = 0;
  Eigen::MatrixXd values;
  Eigen::ArrayXXd mask;

  long observed_count() const { return static_cast<long>(mask.sum()); }
  double observed_sq_norm() const { return (values.array() * mask).matrix().squaredNorm(); }
  void validate(const ViewGraph& graph) const;
};

struct Dataset {
  ViewGraph graph;
  std::vector<MaskedMatrix> matrices;  // aligned with graph.links

  void validate() const;
};

enum class Centering { None, Rows, Columns, Both };

enum class MatrixScaling {
  None,
  EqualFrobenius,        // ||X||_F equal across matrices
  FrobeniusPerElement,   // ||X||_F^2 proportional to element count
  FrobeniusPerRow,       // ||X||_F^2 proportional to row count
  FrobeniusPerColumn,    // ||X||_F^2 proportional to column count
  EqualTopSingular,      // largest singular value equal across matrices
  TopSingularPerRow      // largest singular value proportional to row count
};

struct NormalizationPolicy {
  Centering centering = Centering::None;
  MatrixScaling scaling = MatrixScaling::None;
  // After centering and matrix-wise scaling, rescale everything so the
  // largest singular value across all matrices is pi^2. This puts the scale
  // parameters on the same footing as the angles for the optimizer.
  bool rescale_to_pi_sq = true;
  std::map<int, MatrixScaling> per_matrix;  // overrides by link index
};

Centering centering_from_string(const std::string& s);
MatrixScaling scaling_from_string(const std::string& s);
std::string to_string(Centering c);
std::string to_string(MatrixScaling s);

// Everything needed to undo normalization:
//   normalized = (x - row_center - col_center) * matrix_scale * global_scale
struct NormalizationRecord {
  double global_scale = 1.0;
  std::vector<double> matrix_scale;
  std::vector<Eigen::VectorXd> row_center;
  std::vector<Eigen::VectorXd> col_center;

  Eigen::MatrixXd denormalize(int link, const Eigen::MatrixXd& v) const;
  // Undo the global factor only; used for imputed pairs outside the link set,
  // for which no per-matrix record exists.
  Eigen::MatrixXd denormalize_global_only(const Eigen::MatrixXd& v) const;
};

std::pair<Dataset, NormalizationRecord> normalize(const Dataset& dataset,
                                                  const NormalizationPolicy& policy,
                                                  std::vector<std::string>* warnings = nullptr);

struct HoldoutElement {
  int link = 0;
  int row = 0;
  int col = 0;
};

struct HoldoutSplit {
  Dataset training;
  std::vector<HoldoutElement> test;
};

// Marks each observed element as held out with the given probability. Held
// out elements become missing in the training copy; originally missing
// elements never enter the test set. If some matrix would lose every
// observed element the split is redrawn (up to a fixed retry budget).
HoldoutSplit holdout_split(const Dataset& dataset, double probability, std::uint64_t seed);

}  // namespace mmpca
