#pragma once

#include <optional>
#include <vector>

#include "bezflow/deform.hpp"

namespace bezflow {

enum class StepMethod { euler, rk4 };
enum class FlowStatus { converged, max_iters, degenerate };

struct FlowConfig {
    StepMethod method = StepMethod::rk4;
    double step = 0.1;      // fixed step, in (0, 1]
    int max_iters = 1000;
    double tol = 1e-6;      // stationarity threshold on the descent field
    int resample_every = 0; // 0 disables arc-length resampling
    int record_every = 1;
};

struct FlowSample {
    int iter;
    PiecewiseCurve curve;
    double stationarity; // +inf when the field is undefined (degenerate stop)
    std::optional<double> energy;
};

struct Trajectory {
    std::vector<FlowSample> iterates;
    FlowStatus status = FlowStatus::max_iters;
};

// Descent direction: the negated lifted shape gradient, projected onto the
// closed subspace for closed curves.
ControlIncrement field_at(const PiecewiseCurve& curve, const ShapeGradient& grad,
                          const SamplingGrid& grid);

// One explicit Euler step of size h along the descent field.
PiecewiseCurve euler_step(const PiecewiseCurve& curve, const ShapeGradient& grad,
                          const SamplingGrid& grid, double h);

// One classical four-stage Runge-Kutta step of size h.
PiecewiseCurve rk4_step(const PiecewiseCurve& curve, const ShapeGradient& grad,
                        const SamplingGrid& grid, double h);

// Steps until the field's stationarity norm drops below cfg.tol, the
// iteration budget runs out, or the field becomes undefined. Iterates are
// recorded every record_every steps plus the final one; arc-length
// resampling runs every resample_every steps when enabled.
Trajectory integrate(const PiecewiseCurve& start, const ShapeGradient& grad,
                     const SamplingGrid& grid, const FlowConfig& cfg);

// Redistributes the grid nodes uniformly in arc length (dense chordal
// measurement, 256 samples per patch) and refits. Keeps endpoints, the
// closure point, and the C0 joins; counters node clustering during flows.
PiecewiseCurve arc_length_resample(const PiecewiseCurve& curve, const SamplingGrid& grid);

// Sampled energy sum over the grid nodes; empty when the gradient carries
// no pointwise energy.
std::optional<double> sampled_energy(const PiecewiseCurve& curve, const ShapeGradient& grad,
                                     const SamplingGrid& grid);

} // namespace bezflow
