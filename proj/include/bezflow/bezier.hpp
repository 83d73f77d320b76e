#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bezflow/errors.hpp"
#include "bezflow/geometry.hpp"

namespace bezflow {

// Largest degree for which binomial coefficients are kept exact in int64.
inline constexpr int kMaxDegree = 60;

// C(n, k) computed exactly in integer arithmetic, n <= kMaxDegree.
std::int64_t binomial(int n, int k);

// Bernstein basis polynomial b_{i,D}(t) = C(D,i) (1-t)^(D-i) t^i.
// t slightly outside [0,1] is accepted (useful for finite differences).
double bernstein_basis(int i, int degree, double t);

// All D+1 Bernstein basis values at t. Entries sum to 1 on [0,1].
std::vector<double> bernstein_row(int degree, double t);

// Ordered control points of a single Bezier patch; degree = size - 1.
class ControlPolygon {
public:
    explicit ControlPolygon(std::vector<Point2> points);

    int degree() const { return static_cast<int>(points_.size()) - 1; }
    std::size_t size() const { return points_.size(); }
    const Point2& operator[](std::size_t i) const { return points_[i]; }
    const Point2& front() const { return points_.front(); }
    const Point2& back() const { return points_.back(); }
    std::span<const Point2> points() const { return points_; }

    auto begin() const { return points_.begin(); }
    auto end() const { return points_.end(); }

private:
    std::vector<Point2> points_;
};

// Recursive convex-combination evaluation. Numerically stable; the default
// evaluation path everywhere in the library.
Point2 de_casteljau(const ControlPolygon& poly, double t);

// Evaluation as sum of control points weighted by the Bernstein row.
// Kept as a cross-check of de_casteljau and for the collocation identities.
Point2 eval_bernstein_form(const ControlPolygon& poly, double t);

// Hodograph evaluation: B'(t) = D * sum (P_{i+1}-P_i) b_{i,D-1}(t).
// Degree 0 yields the zero vector.
Point2 eval_patch_derivative(const ControlPolygon& poly, double t);

// Control polygon of the plane polynomial sum coeffs[i] * t^i on [0,1].
ControlPolygon monomial_to_bernstein(const std::vector<Point2>& coeffs);

// N+1 degree-D patches joined end to end, optionally a loop. Join and
// closure points are required to match bitwise; every producer in the
// library guarantees this by construction.
class PiecewiseCurve {
public:
    PiecewiseCurve(std::vector<ControlPolygon> patches, bool closed);

    int patch_count() const { return static_cast<int>(patches_.size()); }
    int degree() const { return patches_.front().degree(); }
    bool closed() const { return closed_; }
    const ControlPolygon& patch(int i) const { return patches_[static_cast<std::size_t>(i)]; }
    const std::vector<ControlPolygon>& patches() const { return patches_; }

    // Global evaluation: patch i covers [i/(N+1), (i+1)/(N+1)] with the
    // affine local parameter s = (N+1) t - i.
    Point2 eval(double t) const;

private:
    std::vector<ControlPolygon> patches_;
    bool closed_;
};

// Free-function spelling of PiecewiseCurve::eval.
Point2 eval_piecewise(const PiecewiseCurve& curve, double t);

} // namespace bezflow
