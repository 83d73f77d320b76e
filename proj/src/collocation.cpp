#include "bezflow/collocation.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <string>

namespace bezflow {

namespace {

void check_grid_shape(int patch_count, int degree) {
    if (patch_count < 1)
        throw ArgumentError("patch count must be at least 1, got " + std::to_string(patch_count));
    if (degree < 1)
        throw ArgumentError("grid degree must be at least 1, got " + std::to_string(degree));
}

void enforce_degree_cap(const SamplingGrid& grid, bool allow_high_degree) {
    if (grid.degree() <= kDefaultFitDegreeCap)
        return;
    if (!allow_high_degree)
        throw ArgumentError("fitting degree " + std::to_string(grid.degree()) +
                            " above default cap " + std::to_string(kDefaultFitDegreeCap) +
                            " (pass allow_high_degree to override)");
    std::cerr << "bezflow: degree " << grid.degree()
              << " collocation enabled, condition estimate "
              << grid.op().condition_estimate() << "\n";
}

} // namespace

CollocationOperator::CollocationOperator(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 2)
        throw ArgumentError("collocation needs at least two nodes");
    if (nodes_.front() != 0.0 || nodes_.back() != 1.0)
        throw ArgumentError("collocation nodes must start at 0 and end at 1");
    for (std::size_t r = 0; r + 1 < nodes_.size(); ++r) {
        if (nodes_[r] == nodes_[r + 1])
            throw SingularError("duplicate collocation node " + std::to_string(nodes_[r]));
        if (nodes_[r] > nodes_[r + 1])
            throw ArgumentError("collocation nodes must be sorted increasingly");
    }
    const int d = degree();
    matrix_.resize(d + 1, d + 1);
    for (int r = 0; r <= d; ++r) {
        const std::vector<double> row = bernstein_row(d, nodes_[static_cast<std::size_t>(r)]);
        for (int c = 0; c <= d; ++c)
            matrix_(r, c) = row[static_cast<std::size_t>(c)];
    }
    lu_ = Eigen::PartialPivLU<Eigen::MatrixXd>(matrix_);
    const double rcond = lu_.rcond();
    condition_estimate_ = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
}

std::vector<Point2> CollocationOperator::solve(std::span<const Point2> samples) const {
    const int d = degree();
    if (static_cast<int>(samples.size()) != d + 1)
        throw ArgumentError("expected " + std::to_string(d + 1) + " samples, got " +
                            std::to_string(samples.size()));
    Eigen::MatrixXd rhs(d + 1, 2);
    for (int r = 0; r <= d; ++r) {
        rhs(r, 0) = samples[static_cast<std::size_t>(r)].x;
        rhs(r, 1) = samples[static_cast<std::size_t>(r)].y;
    }
    const Eigen::MatrixXd sol = lu_.solve(rhs);
    std::vector<Point2> control(static_cast<std::size_t>(d) + 1);
    for (int r = 0; r <= d; ++r)
        control[static_cast<std::size_t>(r)] = {sol(r, 0), sol(r, 1)};
    return control;
}

SamplingGrid::SamplingGrid(int patch_count, std::vector<double> local_nodes, bool allow_high_degree)
    : patch_count_(patch_count) {
    check_grid_shape(patch_count, static_cast<int>(local_nodes.size()) - 1);
    op_ = std::make_shared<const CollocationOperator>(std::move(local_nodes));
    enforce_degree_cap(*this, allow_high_degree);
}

SamplingGrid SamplingGrid::regular(int patch_count, int degree, bool allow_high_degree) {
    check_grid_shape(patch_count, degree);
    std::vector<double> nodes(static_cast<std::size_t>(degree) + 1);
    for (int j = 0; j <= degree; ++j)
        nodes[static_cast<std::size_t>(j)] = static_cast<double>(j) / static_cast<double>(degree);
    nodes.front() = 0.0;
    nodes.back() = 1.0;
    return SamplingGrid(patch_count, std::move(nodes), allow_high_degree);
}

SamplingGrid SamplingGrid::chebyshev(int patch_count, int degree, bool allow_high_degree) {
    check_grid_shape(patch_count, degree);
    std::vector<double> nodes(static_cast<std::size_t>(degree) + 1);
    for (int j = 0; j <= degree; ++j)
        nodes[static_cast<std::size_t>(j)] =
            0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(j) / static_cast<double>(degree)));
    nodes.front() = 0.0;
    nodes.back() = 1.0;
    return SamplingGrid(patch_count, std::move(nodes), allow_high_degree);
}

ControlPolygon fit_patch(const CollocationOperator& op, std::span<const Point2> samples) {
    std::vector<Point2> control = op.solve(samples);
    // Endpoint rows of B are unit rows; snapping removes the last bits of
    // factorization round-off so shared samples give exact joins.
    control.front() = samples.front();
    control.back() = samples[samples.size() - 1];
    return ControlPolygon(std::move(control));
}

SampleMatrix sample_curve(const PiecewiseCurve& curve, const SamplingGrid& grid) {
    if (curve.patch_count() != grid.patch_count() || curve.degree() != grid.degree())
        throw ArgumentError("curve shape (" + std::to_string(curve.patch_count()) + " patches, degree " +
                            std::to_string(curve.degree()) + ") does not match grid (" +
                            std::to_string(grid.patch_count()) + ", " + std::to_string(grid.degree()) + ")");
    SampleMatrix samples;
    samples.rows.resize(static_cast<std::size_t>(grid.patch_count()));
    for (int i = 0; i < grid.patch_count(); ++i) {
        auto& row = samples.rows[static_cast<std::size_t>(i)];
        row.resize(static_cast<std::size_t>(grid.degree()) + 1);
        for (int j = 0; j <= grid.degree(); ++j)
            row[static_cast<std::size_t>(j)] = de_casteljau(curve.patch(i), grid.local_node(j));
    }
    return samples;
}

PiecewiseCurve fit_curve(SampleMatrix samples, const SamplingGrid& grid, std::optional<bool> closed) {
    if (samples.patch_count() != grid.patch_count())
        throw ArgumentError("sample matrix has " + std::to_string(samples.patch_count()) +
                            " patches, grid expects " + std::to_string(grid.patch_count()));
    for (const auto& row : samples.rows) {
        if (static_cast<int>(row.size()) != grid.degree() + 1)
            throw ArgumentError("sample row size does not match grid degree " +
                                std::to_string(grid.degree()));
        for (const Point2& p : row)
            if (!is_finite(p))
                throw DataError("sample matrix contains a non-finite value");
    }

    auto& rows = samples.rows;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const Point2 a = rows[i].back();
        const Point2 b = rows[i + 1].front();
        if (distance(a, b) > kSharedNodeTolerance)
            throw DiscontinuityError("shared sample mismatch between patches " + std::to_string(i) +
                                     " and " + std::to_string(i + 1) + " (gap " +
                                     std::to_string(distance(a, b)) + ")");
        const Point2 mid = 0.5 * (a + b);
        rows[i].back() = mid;
        rows[i + 1].front() = mid;
    }

    const Point2 first = rows.front().front();
    const Point2 last = rows.back().back();
    const bool endpoints_meet = distance(first, last) <= kSharedNodeTolerance;
    const bool make_closed = closed.value_or(endpoints_meet);
    if (make_closed) {
        if (!endpoints_meet)
            throw DiscontinuityError("closed fit requested but endpoints differ by " +
                                     std::to_string(distance(first, last)));
        const Point2 mid = 0.5 * (first + last);
        rows.front().front() = mid;
        rows.back().back() = mid;
    }

    std::vector<ControlPolygon> patches;
    patches.reserve(rows.size());
    for (const auto& row : rows)
        patches.push_back(fit_patch(grid.op(), row));
    return PiecewiseCurve(std::move(patches), make_closed);
}

PiecewiseCurve project_function(const std::function<Point2(double)>& f, const SamplingGrid& grid,
                                std::optional<bool> closed) {
    SampleMatrix samples;
    samples.rows.resize(static_cast<std::size_t>(grid.patch_count()));
    for (int i = 0; i < grid.patch_count(); ++i) {
        auto& row = samples.rows[static_cast<std::size_t>(i)];
        row.resize(static_cast<std::size_t>(grid.degree()) + 1);
        for (int j = 0; j <= grid.degree(); ++j) {
            if (i > 0 && j == 0) {
                // Shared node: evaluate once.
                row[0] = samples.rows[static_cast<std::size_t>(i) - 1].back();
                continue;
            }
            const Point2 value = f(grid.global_node(i, j));
            if (!is_finite(value))
                throw DataError("projected function returned a non-finite value at t=" +
                                std::to_string(grid.global_node(i, j)));
            row[static_cast<std::size_t>(j)] = value;
        }
    }
    return fit_curve(std::move(samples), grid, closed);
}

} // namespace bezflow
