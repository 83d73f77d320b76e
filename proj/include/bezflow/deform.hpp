#pragma once

#include <functional>
#include <vector>

#include "bezflow/collocation.hpp"

namespace bezflow {

// Tangents shorter than this cannot define a normal.
inline constexpr double kDegenerateTangentTolerance = 1e-12;

// Deformation vectors sampled at the grid nodes, one row per node, grouped
// by patch exactly like SampleMatrix.
struct DeformationSamples {
    std::vector<std::vector<Point2>> rows;

    int patch_count() const { return static_cast<int>(rows.size()); }
    int degree() const { return rows.empty() ? -1 : static_cast<int>(rows.front().size()) - 1; }
};

// Displacement of every control point of a piecewise curve; an element of
// the tangent space of control-polygon space. Join entries are required to
// match bitwise and always do for increments produced by this module.
class ControlIncrement {
public:
    explicit ControlIncrement(std::vector<std::vector<Point2>> patches);

    static ControlIncrement zero(int patch_count, int degree);

    int patch_count() const { return static_cast<int>(patches_.size()); }
    int degree() const { return static_cast<int>(patches_.front().size()) - 1; }
    const Point2& at(int i, int j) const {
        return patches_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    const std::vector<std::vector<Point2>>& patches() const { return patches_; }

private:
    friend ControlIncrement operator+(const ControlIncrement&, const ControlIncrement&);
    friend ControlIncrement operator*(double, const ControlIncrement&);
    friend ControlIncrement close_increment(ControlIncrement inc);
    std::vector<std::vector<Point2>> patches_;
};

ControlIncrement operator+(const ControlIncrement& a, const ControlIncrement& b);
ControlIncrement operator*(double s, const ControlIncrement& inc);
inline ControlIncrement operator-(const ControlIncrement& inc) { return -1.0 * inc; }

// Pointwise shape-gradient contract: the vector returned for a boundary
// point, its outward unit normal, and the node's global curve parameter.
// point_energy is optional; when present the flow records the sampled
// energy sum along trajectories.
struct ShapeGradient {
    std::function<Point2(double t, const Point2& point, const Point2& outward_normal)> gradient;
    std::function<double(double t, const Point2& point)> point_energy;
};

// Applies the block-diagonal inverse collocation operator to sampled
// deformation vectors: the control-space displacement whose curve
// interpolates the samples at the grid nodes.
ControlIncrement lift_deformation(const DeformationSamples& samples, const SamplingGrid& grid,
                                  bool closed = false);

// Translates every control point by h times its displacement.
PiecewiseCurve apply_increment(const PiecewiseCurve& curve, const ControlIncrement& inc, double h);

// Samples the curve, evaluates the gradient with outward unit normals
// (orientation fixed by the sampled loop's signed area), symmetrizes shared
// nodes, and lifts. The result is the gradient vector field evaluated at
// this curve in control-polygon coordinates.
ControlIncrement lift_shape_gradient(const PiecewiseCurve& curve, const ShapeGradient& grad,
                                     const SamplingGrid& grid);

// Max Euclidean norm over all displacement vectors.
double stationarity_norm(const ControlIncrement& inc);

// Orthogonal projection onto the closed-curve subspace: the first and last
// displacement entries are replaced by their average. Idempotent.
ControlIncrement close_increment(ControlIncrement inc);

} // namespace bezflow
