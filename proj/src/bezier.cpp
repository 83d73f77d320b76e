#include "bezflow/bezier.hpp"

#include <array>
#include <cmath>
#include <string>

namespace bezflow {

namespace {

// Pascal's triangle up to kMaxDegree, filled once. C(60,30) ~ 1.2e17 still
// fits in int64.
struct BinomialTable {
    std::array<std::array<std::int64_t, kMaxDegree + 1>, kMaxDegree + 1> c{};
    BinomialTable() {
        for (int n = 0; n <= kMaxDegree; ++n) {
            c[n][0] = 1;
            c[n][n] = 1;
            for (int k = 1; k < n; ++k)
                c[n][k] = c[n - 1][k - 1] + c[n - 1][k];
        }
    }
};

const BinomialTable& binomial_table() {
    static const BinomialTable table;
    return table;
}

void check_degree(int degree) {
    if (degree < 0)
        throw ArgumentError("degree must be non-negative, got " + std::to_string(degree));
    if (degree > kMaxDegree)
        throw ArgumentError("degree " + std::to_string(degree) + " exceeds supported maximum " +
                            std::to_string(kMaxDegree));
}

} // namespace

std::int64_t binomial(int n, int k) {
    check_degree(n);
    if (k < 0 || k > n)
        throw ArgumentError("binomial index k=" + std::to_string(k) + " out of range for n=" +
                            std::to_string(n));
    return binomial_table().c[n][k];
}

double bernstein_basis(int i, int degree, double t) {
    check_degree(degree);
    if (i < 0 || i > degree)
        throw ArgumentError("basis index i=" + std::to_string(i) + " out of range for degree " +
                            std::to_string(degree));
    return static_cast<double>(binomial_table().c[degree][i]) *
           std::pow(1.0 - t, degree - i) * std::pow(t, i);
}

std::vector<double> bernstein_row(int degree, double t) {
    check_degree(degree);
    std::vector<double> row(static_cast<std::size_t>(degree) + 1);
    // Incremental powers of t and (1-t); one multiplication per entry.
    double p = 1.0;
    for (int i = 0; i <= degree; ++i) {
        row[static_cast<std::size_t>(i)] = p * static_cast<double>(binomial_table().c[degree][i]);
        p *= t;
    }
    p = 1.0;
    for (int i = degree; i >= 0; --i) {
        row[static_cast<std::size_t>(i)] *= p;
        p *= 1.0 - t;
    }
    return row;
}

ControlPolygon::ControlPolygon(std::vector<Point2> points) : points_(std::move(points)) {
    if (points_.empty())
        throw ArgumentError("control polygon must contain at least one point");
    if (degree() > kMaxDegree)
        throw ArgumentError("control polygon degree exceeds supported maximum " +
                            std::to_string(kMaxDegree));
    for (const Point2& p : points_)
        if (!is_finite(p))
            throw ArgumentError("control polygon contains a non-finite point");
}

Point2 de_casteljau(const ControlPolygon& poly, double t) {
    std::vector<Point2> work(poly.begin(), poly.end());
    for (std::size_t level = work.size() - 1; level > 0; --level)
        for (std::size_t i = 0; i < level; ++i)
            work[i] = (1.0 - t) * work[i] + t * work[i + 1];
    return work[0];
}

Point2 eval_bernstein_form(const ControlPolygon& poly, double t) {
    const std::vector<double> row = bernstein_row(poly.degree(), t);
    Point2 value{0.0, 0.0};
    for (std::size_t i = 0; i < poly.size(); ++i)
        value += row[i] * poly[i];
    return value;
}

Point2 eval_patch_derivative(const ControlPolygon& poly, double t) {
    const int degree = poly.degree();
    if (degree == 0)
        return {0.0, 0.0};
    const std::vector<double> row = bernstein_row(degree - 1, t);
    Point2 value{0.0, 0.0};
    for (int i = 0; i < degree; ++i)
        value += row[static_cast<std::size_t>(i)] *
                 (poly[static_cast<std::size_t>(i) + 1] - poly[static_cast<std::size_t>(i)]);
    return static_cast<double>(degree) * value;
}

ControlPolygon monomial_to_bernstein(const std::vector<Point2>& coeffs) {
    if (coeffs.empty())
        throw ArgumentError("monomial coefficient list must not be empty");
    const int degree = static_cast<int>(coeffs.size()) - 1;
    check_degree(degree);
    const auto& c = binomial_table().c;
    // t^i = sum_{j>=i} C(j,i)/C(D,i) b_{j,D}(t), hence
    // P_j = sum_{i<=j} C(j,i)/C(D,i) a_i.
    std::vector<Point2> points(coeffs.size());
    for (int j = 0; j <= degree; ++j) {
        Point2 p{0.0, 0.0};
        for (int i = 0; i <= j; ++i)
            p += (static_cast<double>(c[j][i]) / static_cast<double>(c[degree][i])) * coeffs[static_cast<std::size_t>(i)];
        points[static_cast<std::size_t>(j)] = p;
    }
    return ControlPolygon(std::move(points));
}

PiecewiseCurve::PiecewiseCurve(std::vector<ControlPolygon> patches, bool closed)
    : patches_(std::move(patches)), closed_(closed) {
    if (patches_.empty())
        throw ArgumentError("piecewise curve must contain at least one patch");
    const int degree = patches_.front().degree();
    for (const ControlPolygon& patch : patches_)
        if (patch.degree() != degree)
            throw ArgumentError("piecewise curve patches must share a single degree");
    for (std::size_t i = 0; i + 1 < patches_.size(); ++i)
        if (patches_[i].back() != patches_[i + 1].front())
            throw ArgumentError("piecewise curve patches must join exactly (patch " +
                                std::to_string(i) + " to " + std::to_string(i + 1) + ")");
    if (closed_ && patches_.front().front() != patches_.back().back())
        throw ArgumentError("closed curve requires the first and last control points to coincide");
}

Point2 PiecewiseCurve::eval(double t) const {
    if (!(t >= 0.0 && t <= 1.0))
        throw ArgumentError("curve parameter " + std::to_string(t) + " outside [0,1]");
    const int n = patch_count();
    int i = static_cast<int>(std::floor(t * n));
    if (i > n - 1)
        i = n - 1;
    const double s = static_cast<double>(n) * t - static_cast<double>(i);
    return de_casteljau(patches_[static_cast<std::size_t>(i)], s);
}

Point2 eval_piecewise(const PiecewiseCurve& curve, double t) {
    return curve.eval(t);
}

} // namespace bezflow
