#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bezflow/bezier.hpp"

namespace bezflow {

// Adjacent patches sampled from a continuous curve may disagree at a shared
// node by round-off; up to this distance the rows are replaced by their
// midpoint, beyond it the data is rejected as discontinuous.
inline constexpr double kSharedNodeTolerance = 1e-9;

// Degrees above this are refused for fitting unless explicitly allowed
// (the collocation matrix of a regular subdivision degrades quickly).
inline constexpr int kDefaultFitDegreeCap = 10;

// Interpolation matrix B with B(r,c) = b_{c,D}(node_r), together with its
// LU factorization, computed once per node set and reused for every solve.
class CollocationOperator {
public:
    // nodes: D+1 strictly increasing local parameters with nodes.front() == 0
    // and nodes.back() == 1. Duplicates raise SingularError.
    explicit CollocationOperator(std::vector<double> nodes);

    int degree() const { return static_cast<int>(nodes_.size()) - 1; }
    const std::vector<double>& nodes() const { return nodes_; }
    const Eigen::MatrixXd& matrix() const { return matrix_; }
    double condition_estimate() const { return condition_estimate_; }

    // Solves B * P = samples coordinate-wise through the cached factorization.
    std::vector<Point2> solve(std::span<const Point2> samples) const;

    // Explicit inverse; intended for tests and diagnostics only.
    Eigen::MatrixXd inverse() const { return lu_.inverse(); }

private:
    std::vector<double> nodes_;
    Eigen::MatrixXd matrix_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    double condition_estimate_;
};

// Subdivision of [0,1] per patch. All patches share the same local nodes;
// the global parameter of node (i,j) is (i + local_j) / patch_count.
class SamplingGrid {
public:
    // Local nodes j/D.
    static SamplingGrid regular(int patch_count, int degree, bool allow_high_degree = false);
    // Chebyshev-Lobatto nodes mapped to [0,1], endpoints forced exact.
    static SamplingGrid chebyshev(int patch_count, int degree, bool allow_high_degree = false);

    SamplingGrid(int patch_count, std::vector<double> local_nodes, bool allow_high_degree = false);

    int patch_count() const { return patch_count_; }
    int degree() const { return op_->degree(); }
    const std::vector<double>& local_nodes() const { return op_->nodes(); }
    double local_node(int j) const { return op_->nodes()[static_cast<std::size_t>(j)]; }
    double global_node(int i, int j) const {
        return (static_cast<double>(i) + local_node(j)) / static_cast<double>(patch_count_);
    }
    // Rows of the sample matrix, shared join nodes counted twice.
    int row_count() const { return patch_count_ * (degree() + 1); }
    // Geometrically distinct nodes: patch_count * degree + 1.
    int distinct_node_count() const { return patch_count_ * degree() + 1; }

    const CollocationOperator& op() const { return *op_; }

private:
    int patch_count_;
    std::shared_ptr<const CollocationOperator> op_;
};

// Values of a curve (or of a deformation field) at the grid nodes, grouped
// by patch: rows[i][j] is the value at node (i,j).
struct SampleMatrix {
    std::vector<std::vector<Point2>> rows;

    int patch_count() const { return static_cast<int>(rows.size()); }
    int degree() const { return rows.empty() ? -1 : static_cast<int>(rows.front().size()) - 1; }
};

// Unique patch through the given samples at the operator's nodes.
// Endpoint control points are set to the endpoint samples exactly (the
// endpoint rows of B are unit rows), so shared samples yield exact joins.
ControlPolygon fit_patch(const CollocationOperator& op, std::span<const Point2> samples);

// Values of every patch at the grid's local nodes. Shared join rows come
// out bitwise equal.
SampleMatrix sample_curve(const PiecewiseCurve& curve, const SamplingGrid& grid);

// Patchwise interpolation through a sample matrix (block-diagonal inverse
// collocation). With closed unset, the curve is closed iff first and last
// rows coincide within kSharedNodeTolerance.
PiecewiseCurve fit_curve(SampleMatrix samples, const SamplingGrid& grid,
                         std::optional<bool> closed = std::nullopt);

// Samples an arbitrary parametric function at the grid nodes and fits.
// The result interpolates f at every node; polynomial curves of degree <= D
// are reproduced.
PiecewiseCurve project_function(const std::function<Point2(double)>& f, const SamplingGrid& grid,
                                std::optional<bool> closed = std::nullopt);

} // namespace bezflow
