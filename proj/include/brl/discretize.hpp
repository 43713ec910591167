#pragma once

// Midpoint grids on boxes inside the half-space and symmetric Nystrom
// assembly of kernel operators.

#include "brl/types.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

namespace brl {

/// Midpoint rule on [a, b] with m cells: nodes a + (i + 1/2) h, weights h.
struct MidpointRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};
MidpointRule midpoint_rule(double a, double b, int m);

inline constexpr std::size_t kDefaultNodeCap = std::size_t{1} << 14;

/// Tensor-product midpoint grid.  Node i is column i of `nodes`; ordering is
/// lexicographic with the first axis varying slowest.
struct BoxGrid {
  Box bounds;
  std::vector<int> points_per_dim;
  Eigen::MatrixXd nodes;          // dim x size
  Eigen::VectorXd cell_weights;   // cell volumes
  Eigen::VectorXd spacing;        // cell width per axis

  int dim() const { return bounds.dim(); }
  Eigen::Index size() const { return nodes.cols(); }
  auto node(Eigen::Index i) const { return nodes.col(i); }
  /// Index of the node in cell (i_0, ..., i_{d-1}).
  Eigen::Index flat_index(const std::vector<int>& cell) const;
};

/// Throws std::invalid_argument for a bad box, non-positive counts or more than `cap` nodes.
BoxGrid make_grid(const Box& bounds, const std::vector<int>& points_per_dim, std::size_t cap = kDefaultNodeCap);
BoxGrid make_grid(const Box& bounds, int points_per_dim, std::size_t cap = kDefaultNodeCap);

enum class SpaceTag { weighted, unweighted };
const char* to_string(SpaceTag t);

/// Coincident node pairs: leave the entry 0, or evaluate the kernel there (smooth kernels only).
enum class DiagonalRule { zero, evaluate };

struct AssemblyOptions {
  DiagonalRule diagonal = DiagonalRule::zero;
  int threads = 0;            // 0: hardware concurrency
  bool estimate_bias = true;  // only used with DiagonalRule::zero
};

struct AssemblyReport {
  /// Hilbert-Schmidt mass of the skipped diagonal cells relative to the
  /// matrix, sqrt(sum_i int_{C_i x C_i} |K|^2) / ||A||_F, from a 2^d sub-cell split.
  double diagonal_bias = 0;
  double seconds = 0;
};

/// Kernel operator discretized on a grid, symmetric Nystrom normalization:
/// entries(i, j) = K(x_i, x_j) sqrt(nu_i nu_j), nu = cell weight * x_{n+1}^{measure_exponent}.
/// Its singular values approximate those of the integral operator.
struct OperatorMatrix {
  Eigen::MatrixXd entries;
  BoxGrid grid;
  SpaceTag space = SpaceTag::weighted;
  double lambda = 0;
  AssemblyReport report;

  double measure_exponent() const { return space == SpaceTag::weighted ? 2.0 * lambda : 0.0; }
  /// nu_i = w_i x_{i,n+1}^{measure_exponent}
  Eigen::VectorXd measure_weights() const;
  /// Action on nodal values, T(i, j) = K(x_i, x_j) nu_j.
  Eigen::MatrixXd action() const;
};

/// Kernel failures are rethrown as std::runtime_error naming the node pair.
OperatorMatrix assemble(const KernelFn& kernel, const BoxGrid& grid, SpaceTag space, double lambda,
                        const AssemblyOptions& opts = {});

/// Unitary change of space by M_{x_{n+1}^{-lambda}}: to_unweighted maps an
/// operator on L_2(m_lambda) to the conjugated one on L_2(dx); to_weighted is
/// the inverse.  The action matrix picks up (x_i / x_j)^{+-lambda} and the
/// measure weights change by x^{-+2 lambda}.
enum class WeightDirection { to_unweighted, to_weighted };
OperatorMatrix conjugate_weight(const OperatorMatrix& a, WeightDirection direction);

using PairSymbol = std::function<double(PointRef, PointRef)>;

/// Entrywise product B(i, j) = m(x_i, x_j) A(i, j).  Zero entries are left
/// alone, so m need not be defined on the diagonal when A vanishes there.
OperatorMatrix schur_apply(const PairSymbol& m, const OperatorMatrix& a, int threads = 0);

/// Binary export: header then column-major float64 entries; plus a CSV
/// sidecar of node coordinates and weights (`<path>.nodes.csv`).
void write_matrix(const OperatorMatrix& a, const std::filesystem::path& path);

struct MatrixFile {
  std::uint32_t version = 0;
  SpaceTag space = SpaceTag::weighted;
  double lambda = 0;
  Eigen::MatrixXd entries;
};
MatrixFile read_matrix(const std::filesystem::path& path);

namespace detail {
/// Runs body(i) for i in [0, count) over `threads` workers, rows interleaved.
/// The first exception (lowest index among failing workers' first failures) is rethrown.
void parallel_rows(Eigen::Index count, int threads, const std::function<void(Eigen::Index)>& body);
int resolve_threads(int threads);
}  // namespace detail

}  // namespace brl
