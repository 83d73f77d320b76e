#include "bezflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace bezflow {

namespace {

void check_config(const FlowConfig& cfg) {
    if (!(cfg.step > 0.0 && cfg.step <= 1.0))
        throw ArgumentError("flow step must lie in (0, 1], got " + std::to_string(cfg.step));
    if (!(cfg.tol > 0.0))
        throw ArgumentError("flow tolerance must be positive");
    if (cfg.max_iters < 0)
        throw ArgumentError("flow iteration budget must be non-negative");
    if (cfg.resample_every < 0)
        throw ArgumentError("resample_every must be non-negative");
    if (cfg.record_every < 1)
        throw ArgumentError("record_every must be at least 1");
}

PiecewiseCurve one_step(const PiecewiseCurve& curve, const ShapeGradient& grad,
                        const SamplingGrid& grid, double h, StepMethod method) {
    if (method == StepMethod::euler)
        return apply_increment(curve, field_at(curve, grad, grid), h);
    const ControlIncrement k1 = field_at(curve, grad, grid);
    const ControlIncrement k2 = field_at(apply_increment(curve, k1, 0.5 * h), grad, grid);
    const ControlIncrement k3 = field_at(apply_increment(curve, k2, 0.5 * h), grad, grid);
    const ControlIncrement k4 = field_at(apply_increment(curve, k3, h), grad, grid);
    const ControlIncrement combined = (1.0 / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    return apply_increment(curve, combined, h);
}

} // namespace

ControlIncrement field_at(const PiecewiseCurve& curve, const ShapeGradient& grad,
                          const SamplingGrid& grid) {
    ControlIncrement descent = -lift_shape_gradient(curve, grad, grid);
    if (curve.closed())
        descent = close_increment(std::move(descent));
    return descent;
}

PiecewiseCurve euler_step(const PiecewiseCurve& curve, const ShapeGradient& grad,
                          const SamplingGrid& grid, double h) {
    return one_step(curve, grad, grid, h, StepMethod::euler);
}

PiecewiseCurve rk4_step(const PiecewiseCurve& curve, const ShapeGradient& grad,
                        const SamplingGrid& grid, double h) {
    return one_step(curve, grad, grid, h, StepMethod::rk4);
}

std::optional<double> sampled_energy(const PiecewiseCurve& curve, const ShapeGradient& grad,
                                     const SamplingGrid& grid) {
    if (!grad.point_energy)
        return std::nullopt;
    const SampleMatrix samples = sample_curve(curve, grid);
    double total = 0.0;
    for (int i = 0; i < grid.patch_count(); ++i)
        for (int j = 0; j <= grid.degree(); ++j)
            total += grad.point_energy(
                grid.global_node(i, j),
                samples.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    return total;
}

Trajectory integrate(const PiecewiseCurve& start, const ShapeGradient& grad,
                     const SamplingGrid& grid, const FlowConfig& cfg) {
    check_config(cfg);
    Trajectory traj;
    PiecewiseCurve current = start;
    int last_recorded = -1;

    auto record = [&](int iter, double stationarity) {
        if (iter == last_recorded)
            return;
        traj.iterates.push_back(
            {iter, current, stationarity, sampled_energy(current, grad, grid)});
        last_recorded = iter;
    };

    for (int iter = 0;; ++iter) {
        ControlIncrement field = ControlIncrement::zero(current.patch_count(), current.degree());
        try {
            field = field_at(current, grad, grid);
        } catch (const DegenerateError&) {
            record(iter, std::numeric_limits<double>::infinity());
            traj.status = FlowStatus::degenerate;
            return traj;
        }
        const double stationarity = stationarity_norm(field);
        if (iter % cfg.record_every == 0)
            record(iter, stationarity);
        if (stationarity < cfg.tol) {
            record(iter, stationarity);
            traj.status = FlowStatus::converged;
            return traj;
        }
        if (iter >= cfg.max_iters) {
            record(iter, stationarity);
            traj.status = FlowStatus::max_iters;
            return traj;
        }

        try {
            current = one_step(current, grad, grid, cfg.step, cfg.method);
            if (cfg.resample_every > 0 && (iter + 1) % cfg.resample_every == 0)
                current = arc_length_resample(current, grid);
        } catch (const DegenerateError&) {
            // The field became undefined inside the step; the pre-step curve
            // is the last valid state.
            record(iter, stationarity);
            traj.status = FlowStatus::degenerate;
            return traj;
        }
    }
}

PiecewiseCurve arc_length_resample(const PiecewiseCurve& curve, const SamplingGrid& grid) {
    if (curve.patch_count() != grid.patch_count() || curve.degree() != grid.degree())
        throw ArgumentError("resample grid does not match curve shape");

    constexpr int kSamplesPerPatch = 256;
    const int segments = curve.patch_count() * kSamplesPerPatch;
    std::vector<double> params(static_cast<std::size_t>(segments) + 1);
    std::vector<Point2> points(static_cast<std::size_t>(segments) + 1);
    std::vector<double> cumulative(static_cast<std::size_t>(segments) + 1, 0.0);
    for (int k = 0; k <= segments; ++k) {
        params[static_cast<std::size_t>(k)] = static_cast<double>(k) / static_cast<double>(segments);
        points[static_cast<std::size_t>(k)] = curve.eval(params[static_cast<std::size_t>(k)]);
        if (k > 0)
            cumulative[static_cast<std::size_t>(k)] =
                cumulative[static_cast<std::size_t>(k) - 1] +
                distance(points[static_cast<std::size_t>(k)], points[static_cast<std::size_t>(k) - 1]);
    }
    const double total = cumulative.back();
    if (!(total > 0.0))
        throw DegenerateError("cannot resample a zero-length curve");

    auto param_at_arc = [&](double s) {
        s = std::clamp(s, 0.0, total);
        const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), s);
        const std::size_t hi = static_cast<std::size_t>(it - cumulative.begin());
        if (hi == 0)
            return params.front();
        const std::size_t lo = hi - 1;
        // Bisection inside the bracket against the chord from the left
        // sample; exact on straight pieces, third-order on smooth ones at
        // this bracket width.
        const double want = s - cumulative[lo];
        const Point2 anchor = points[lo];
        double a = params[lo], b = params[hi];
        for (int k = 0; k < 40; ++k) {
            const double mid = 0.5 * (a + b);
            if (distance(curve.eval(mid), anchor) < want)
                a = mid;
            else
                b = mid;
        }
        return 0.5 * (a + b);
    };

    SampleMatrix resampled;
    resampled.rows.resize(static_cast<std::size_t>(grid.patch_count()));
    for (int i = 0; i < grid.patch_count(); ++i) {
        auto& row = resampled.rows[static_cast<std::size_t>(i)];
        row.resize(static_cast<std::size_t>(grid.degree()) + 1);
        for (int j = 0; j <= grid.degree(); ++j) {
            if (i > 0 && j == 0) {
                row[0] = resampled.rows[static_cast<std::size_t>(i) - 1].back();
                continue;
            }
            row[static_cast<std::size_t>(j)] =
                curve.eval(param_at_arc(grid.global_node(i, j) * total));
        }
    }
    return fit_curve(std::move(resampled), grid, curve.closed());
}

} // namespace bezflow
