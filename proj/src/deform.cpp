#include "bezflow/deform.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bezflow {

namespace {

void check_same_shape(const ControlIncrement& a, const ControlIncrement& b) {
    if (a.patch_count() != b.patch_count() || a.degree() != b.degree())
        throw ArgumentError("control increments have mismatched shapes");
}

// Signed area of the polygon through the distinct sampled nodes; determines
// which rotation of the tangent points away from the enclosed region.
double sampled_signed_area(const SampleMatrix& samples) {
    std::vector<Point2> loop;
    for (int i = 0; i < samples.patch_count(); ++i)
        for (int j = 0; j < samples.degree(); ++j)
            loop.push_back(samples.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    loop.push_back(samples.rows.back().back());
    double twice_area = 0.0;
    for (std::size_t k = 0; k < loop.size(); ++k) {
        const Point2 a = loop[k];
        const Point2 b = loop[(k + 1) % loop.size()];
        twice_area += cross(a, b);
    }
    return 0.5 * twice_area;
}

} // namespace

ControlIncrement::ControlIncrement(std::vector<std::vector<Point2>> patches)
    : patches_(std::move(patches)) {
    if (patches_.empty() || patches_.front().empty())
        throw ArgumentError("control increment must contain at least one patch entry");
    const std::size_t width = patches_.front().size();
    for (const auto& patch : patches_)
        if (patch.size() != width)
            throw ArgumentError("control increment patches must share a single degree");
    for (std::size_t i = 0; i + 1 < patches_.size(); ++i)
        if (patches_[i].back() != patches_[i + 1].front())
            throw ArgumentError("control increment join entries must match exactly");
}

ControlIncrement ControlIncrement::zero(int patch_count, int degree) {
    if (patch_count < 1 || degree < 0)
        throw ArgumentError("invalid control increment shape");
    std::vector<std::vector<Point2>> patches(
        static_cast<std::size_t>(patch_count),
        std::vector<Point2>(static_cast<std::size_t>(degree) + 1, Point2{0.0, 0.0}));
    return ControlIncrement(std::move(patches));
}

ControlIncrement operator+(const ControlIncrement& a, const ControlIncrement& b) {
    check_same_shape(a, b);
    std::vector<std::vector<Point2>> out = a.patches_;
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t j = 0; j < out[i].size(); ++j)
            out[i][j] += b.patches_[i][j];
    return ControlIncrement(std::move(out));
}

ControlIncrement operator*(double s, const ControlIncrement& inc) {
    std::vector<std::vector<Point2>> out = inc.patches_;
    for (auto& patch : out)
        for (Point2& p : patch)
            p *= s;
    return ControlIncrement(std::move(out));
}

ControlIncrement lift_deformation(const DeformationSamples& samples, const SamplingGrid& grid,
                                  bool closed) {
    SampleMatrix matrix{samples.rows};
    // The lift is exactly the patchwise interpolation applied to vector data.
    const PiecewiseCurve fitted = fit_curve(std::move(matrix), grid, closed);
    std::vector<std::vector<Point2>> patches;
    patches.reserve(static_cast<std::size_t>(fitted.patch_count()));
    for (const ControlPolygon& patch : fitted.patches())
        patches.emplace_back(patch.begin(), patch.end());
    return ControlIncrement(std::move(patches));
}

PiecewiseCurve apply_increment(const PiecewiseCurve& curve, const ControlIncrement& inc, double h) {
    if (curve.patch_count() != inc.patch_count() || curve.degree() != inc.degree())
        throw ArgumentError("increment shape does not match curve shape");
    std::vector<ControlPolygon> patches;
    patches.reserve(static_cast<std::size_t>(curve.patch_count()));
    for (int i = 0; i < curve.patch_count(); ++i) {
        std::vector<Point2> points(curve.patch(i).begin(), curve.patch(i).end());
        for (int j = 0; j <= curve.degree(); ++j)
            points[static_cast<std::size_t>(j)] += h * inc.at(i, j);
        patches.emplace_back(std::move(points));
    }
    return PiecewiseCurve(std::move(patches), curve.closed());
}

ControlIncrement lift_shape_gradient(const PiecewiseCurve& curve, const ShapeGradient& grad,
                                     const SamplingGrid& grid) {
    const SampleMatrix samples = sample_curve(curve, grid);
    const double orientation = sampled_signed_area(samples) >= 0.0 ? 1.0 : -1.0;

    DeformationSamples values;
    values.rows.resize(samples.rows.size());
    for (int i = 0; i < grid.patch_count(); ++i) {
        auto& out = values.rows[static_cast<std::size_t>(i)];
        out.resize(static_cast<std::size_t>(grid.degree()) + 1);
        for (int j = 0; j <= grid.degree(); ++j) {
            const Point2 tangent = eval_patch_derivative(curve.patch(i), grid.local_node(j));
            const double speed = norm(tangent);
            if (speed < kDegenerateTangentTolerance)
                throw DegenerateError("zero tangent at node (" + std::to_string(i) + "," +
                                      std::to_string(j) + "): outward normal undefined");
            const Point2 normal = (orientation / speed) * rotate_cw(tangent);
            out[static_cast<std::size_t>(j)] =
                grad.gradient(grid.global_node(i, j),
                              samples.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                              normal);
        }
    }

    // The same geometric point is reached through both adjacent patches with
    // different one-sided normals; average the two gradient values.
    for (std::size_t i = 0; i + 1 < values.rows.size(); ++i) {
        const Point2 mid = 0.5 * (values.rows[i].back() + values.rows[i + 1].front());
        values.rows[i].back() = mid;
        values.rows[i + 1].front() = mid;
    }
    if (curve.closed()) {
        const Point2 mid = 0.5 * (values.rows.front().front() + values.rows.back().back());
        values.rows.front().front() = mid;
        values.rows.back().back() = mid;
    }
    return lift_deformation(values, grid, curve.closed());
}

double stationarity_norm(const ControlIncrement& inc) {
    double worst = 0.0;
    for (const auto& patch : inc.patches())
        for (const Point2& p : patch)
            worst = std::max(worst, norm(p));
    return worst;
}

ControlIncrement close_increment(ControlIncrement inc) {
    const Point2 mid = 0.5 * (inc.patches_.front().front() + inc.patches_.back().back());
    inc.patches_.front().front() = mid;
    inc.patches_.back().back() = mid;
    return inc;
}

} // namespace bezflow
