#include <doctest.h>

#include "bezflow/collocation.hpp"
#include "support.hpp"

using namespace bezflow;
using namespace test_support;

namespace {

bool near(Point2 a, Point2 b, double tol) {
    return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol;
}

double max_control_deviation(const PiecewiseCurve& a, const PiecewiseCurve& b) {
    double worst = 0.0;
    for (int i = 0; i < a.patch_count(); ++i)
        for (int j = 0; j <= a.degree(); ++j)
            worst = std::max(worst, distance(a.patch(i)[static_cast<std::size_t>(j)],
                                             b.patch(i)[static_cast<std::size_t>(j)]));
    return worst;
}

} // namespace

TEST_CASE("regular grid nodes") {
    const SamplingGrid one = SamplingGrid::regular(1, 2);
    CHECK(one.local_node(0) == 0.0);
    CHECK(one.local_node(1) == 0.5);
    CHECK(one.local_node(2) == 1.0);

    const SamplingGrid two = SamplingGrid::regular(2, 2);
    CHECK(two.global_node(0, 0) == 0.0);
    CHECK(two.global_node(0, 1) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(two.global_node(0, 2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(two.global_node(1, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(two.global_node(1, 1) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(two.global_node(1, 2) == 1.0);

    const SamplingGrid three = SamplingGrid::regular(3, 1);
    CHECK(three.global_node(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(three.global_node(1, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(three.global_node(1, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(three.distinct_node_count() == 4);
    CHECK(three.row_count() == 6);

    CHECK_THROWS_AS(SamplingGrid::regular(1, 0), ArgumentError);
    CHECK_THROWS_AS(SamplingGrid::regular(0, 2), ArgumentError);
}

TEST_CASE("degree cap for fitting") {
    CHECK_THROWS_AS(SamplingGrid::regular(1, 11), ArgumentError);
    const SamplingGrid high = SamplingGrid::regular(1, 11, true);
    CHECK(high.degree() == 11);
}

TEST_CASE("chebyshev grid") {
    const SamplingGrid grid = SamplingGrid::chebyshev(1, 4);
    CHECK(grid.local_node(0) == 0.0);
    CHECK(grid.local_node(4) == 1.0);
    for (int j = 0; j < 4; ++j)
        CHECK(grid.local_node(j) < grid.local_node(j + 1));
    // Lobatto point at j=1, D=4: (1 - cos(pi/4)) / 2.
    CHECK(grid.local_node(1) ==
          doctest::Approx(0.5 * (1.0 - std::numbers::sqrt2 / 2.0)).epsilon(1e-14));
}

TEST_CASE("collocation matrix layout") {
    const CollocationOperator identity2(std::vector<double>{0.0, 1.0});
    CHECK(identity2.matrix() == Eigen::MatrixXd::Identity(2, 2));

    const CollocationOperator quad(std::vector<double>{0.0, 0.5, 1.0});
    CHECK(quad.matrix()(0, 0) == 1.0);
    CHECK(quad.matrix()(0, 1) == 0.0);
    CHECK(quad.matrix()(0, 2) == 0.0);
    CHECK(quad.matrix()(1, 0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(quad.matrix()(1, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(quad.matrix()(1, 2) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(quad.matrix()(2, 0) == 0.0);
    CHECK(quad.matrix()(2, 2) == 1.0);
    CHECK(quad.condition_estimate() > 1.0);

    CHECK_THROWS_AS(CollocationOperator(std::vector<double>{0.0, 0.5, 0.5, 1.0}), SingularError);
    CHECK_THROWS_AS(CollocationOperator(std::vector<double>{0.1, 0.5, 1.0}), ArgumentError);
}

TEST_CASE("explicit inverse agrees with the factored solve") {
    const SamplingGrid grid = SamplingGrid::regular(1, 5);
    const Eigen::MatrixXd product = grid.op().inverse() * grid.op().matrix();
    CHECK((product - Eigen::MatrixXd::Identity(6, 6)).norm() < 1e-12);
}

TEST_CASE("chebyshev nodes fit round trip") {
    auto rng = make_rng(916);
    const SamplingGrid grid = SamplingGrid::chebyshev(3, 5);
    const PiecewiseCurve curve = random_curve(rng, 3, 5, false);
    const PiecewiseCurve fitted = fit_curve(sample_curve(curve, grid), grid, false);
    CHECK(max_control_deviation(curve, fitted) < 1e-8);
    // Better conditioned than the regular grid at the same degree.
    CHECK(grid.op().condition_estimate() <
          SamplingGrid::regular(3, 5).op().condition_estimate());
}

TEST_CASE("collocation inverse recovers coefficients") {
    const CollocationOperator op(std::vector<double>{0.0, 0.5, 1.0});
    // Forward image of (a, b, c) under the matrix, solved back by hand:
    // rows are (a), (a+2b+c)/4, (c).
    const Point2 a{1, -2}, b{3, 5}, c{-4, 0.5};
    const std::vector<Point2> image{a, 0.25 * a + 0.5 * b + 0.25 * c, c};
    const std::vector<Point2> recovered = op.solve(image);
    CHECK(near(recovered[0], a, 1e-12));
    CHECK(near(recovered[1], b, 1e-12));
    CHECK(near(recovered[2], c, 1e-12));
}

TEST_CASE("fit patch") {
    const CollocationOperator line(std::vector<double>{0.0, 1.0});
    const std::vector<Point2> endpoints{{0, 0}, {4, 4}};
    const ControlPolygon fitted = fit_patch(line, endpoints);
    CHECK(fitted[0] == Point2{0, 0});
    CHECK(fitted[1] == Point2{4, 4});

    // 3x3 system solved by hand: samples ((0,0),(1,1),(2,0)) at (0,1/2,1)
    // have the unique quadratic with control net ((0,0),(1,2),(2,0)).
    const CollocationOperator quad(std::vector<double>{0.0, 0.5, 1.0});
    const std::vector<Point2> samples{{0, 0}, {1, 1}, {2, 0}};
    const ControlPolygon parabola = fit_patch(quad, samples);
    CHECK(near(parabola[0], {0, 0}, 1e-13));
    CHECK(near(parabola[1], {1, 2}, 1e-13));
    CHECK(near(parabola[2], {2, 0}, 1e-13));

    // Interpolation property at the nodes.
    for (std::size_t k = 0; k < samples.size(); ++k)
        CHECK(near(de_casteljau(parabola, quad.nodes()[k]), samples[k], 1e-9));

    // Sampling a known polygon at the nodes and fitting recovers it.
    auto rng = make_rng(909);
    const SamplingGrid grid = SamplingGrid::regular(1, 5);
    const ControlPolygon known = random_polygon(rng, 5);
    std::vector<Point2> at_nodes;
    for (int j = 0; j <= 5; ++j)
        at_nodes.push_back(de_casteljau(known, grid.local_node(j)));
    const ControlPolygon recovered = fit_patch(grid.op(), at_nodes);
    for (std::size_t k = 0; k < known.size(); ++k)
        CHECK(near(recovered[k], known[k], 1e-10));
}

TEST_CASE("fit patch endpoints equal endpoint samples exactly") {
    auto rng = make_rng(910);
    const SamplingGrid grid = SamplingGrid::regular(1, 7);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Point2> samples;
        for (int j = 0; j <= 7; ++j)
            samples.push_back(random_point(rng, -10, 10));
        const ControlPolygon fitted = fit_patch(grid.op(), samples);
        CHECK(fitted.front() == samples.front());
        CHECK(fitted.back() == samples.back());
    }
}

TEST_CASE("sample curve") {
    const ControlPolygon constant({{2, 3}, {2, 3}, {2, 3}});
    const PiecewiseCurve flat({constant}, false);
    const SamplingGrid grid = SamplingGrid::regular(1, 2);
    const SampleMatrix samples = sample_curve(flat, grid);
    for (const auto& row : samples.rows)
        for (const Point2& p : row)
            CHECK(p == Point2{2, 3});

    const PiecewiseCurve segment({ControlPolygon({{0, 0}, {1, 0}})}, false);
    const SampleMatrix ends = sample_curve(segment, SamplingGrid::regular(1, 1));
    CHECK(ends.rows[0][0] == Point2{0, 0});
    CHECK(ends.rows[0][1] == Point2{1, 0});

    CHECK_THROWS_AS(sample_curve(segment, SamplingGrid::regular(2, 1)), ArgumentError);
}

TEST_CASE("shared join rows sampled bitwise equal") {
    auto rng = make_rng(911);
    const PiecewiseCurve curve = random_curve(rng, 4, 3, false);
    const SamplingGrid grid = SamplingGrid::regular(4, 3);
    const SampleMatrix samples = sample_curve(curve, grid);
    for (std::size_t i = 0; i + 1 < samples.rows.size(); ++i)
        CHECK(samples.rows[i].back() == samples.rows[i + 1].front());
}

TEST_CASE("fit curve round trip") {
    auto rng = make_rng(912);
    for (const bool closed : {false, true}) {
        const PiecewiseCurve curve = random_curve(rng, 3, 3, closed);
        const SamplingGrid grid = SamplingGrid::regular(3, 3);
        const PiecewiseCurve fitted = fit_curve(sample_curve(curve, grid), grid);
        CHECK(fitted.closed() == closed);
        CHECK(max_control_deviation(curve, fitted) < 1e-8);
        for (int i = 0; i + 1 < fitted.patch_count(); ++i)
            CHECK(fitted.patch(i).back() == fitted.patch(i + 1).front());
    }
}

TEST_CASE("fit curve simple cases") {
    const SamplingGrid grid = SamplingGrid::regular(2, 1);
    SampleMatrix segments;
    segments.rows = {{{0, 0}, {1, 0}}, {{1, 0}, {2, 1}}};
    const PiecewiseCurve curve = fit_curve(segments, grid);
    CHECK(curve.patch(0)[0] == Point2{0, 0});
    CHECK(curve.patch(0)[1] == Point2{1, 0});
    CHECK(curve.patch(1)[0] == Point2{1, 0});
    CHECK(curve.patch(1)[1] == Point2{2, 1});
    CHECK_FALSE(curve.closed());

    SampleMatrix constant;
    constant.rows = {{{5, 5}, {5, 5}}, {{5, 5}, {5, 5}}};
    const PiecewiseCurve flat = fit_curve(constant, grid);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j <= 1; ++j)
            CHECK(flat.patch(i)[static_cast<std::size_t>(j)] == Point2{5, 5});
}

TEST_CASE("fit curve rejects discontinuous samples") {
    const SamplingGrid grid = SamplingGrid::regular(2, 1);
    SampleMatrix gap;
    gap.rows = {{{0, 0}, {1, 0}}, {{2, 0}, {3, 0}}};
    CHECK_THROWS_AS(fit_curve(gap, grid), DiscontinuityError);

    // A mismatch below tolerance is averaged away.
    SampleMatrix nudged;
    nudged.rows = {{{0, 0}, {1, 0}}, {{1 + 1e-10, 0}, {3, 0}}};
    const PiecewiseCurve curve = fit_curve(nudged, grid);
    CHECK(curve.patch(0).back() == curve.patch(1).front());

    SampleMatrix bad;
    bad.rows = {{{0, 0}, {std::numeric_limits<double>::quiet_NaN(), 0}}};
    CHECK_THROWS_AS(fit_curve(bad, SamplingGrid::regular(1, 1)), DataError);
}

TEST_CASE("fit curve closure control") {
    const SamplingGrid grid = SamplingGrid::regular(2, 1);
    SampleMatrix loop;
    loop.rows = {{{0, 0}, {1, 0}}, {{1, 0}, {0, 0}}};
    CHECK(fit_curve(loop, grid).closed());
    CHECK(fit_curve(loop, grid, false).closed() == false);

    SampleMatrix open;
    open.rows = {{{0, 0}, {1, 0}}, {{1, 0}, {2, 0}}};
    CHECK_FALSE(fit_curve(open, grid).closed());
    CHECK_THROWS_AS(fit_curve(open, grid, true), DiscontinuityError);
}

TEST_CASE("commutative diagram: sampling equals the collocation image") {
    auto rng = make_rng(913);
    const SamplingGrid grid = SamplingGrid::regular(3, 4);
    const PiecewiseCurve curve = random_curve(rng, 3, 4, false);
    const SampleMatrix samples = sample_curve(curve, grid);
    const Eigen::MatrixXd& B = grid.op().matrix();
    for (int i = 0; i < 3; ++i) {
        Eigen::MatrixXd net(5, 2);
        for (int j = 0; j <= 4; ++j) {
            net(j, 0) = curve.patch(i)[static_cast<std::size_t>(j)].x;
            net(j, 1) = curve.patch(i)[static_cast<std::size_t>(j)].y;
        }
        const Eigen::MatrixXd image = B * net;
        for (int j = 0; j <= 4; ++j) {
            CHECK(std::abs(image(j, 0) -
                           samples.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].x) < 1e-12);
            CHECK(std::abs(image(j, 1) -
                           samples.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].y) < 1e-12);
        }
    }
}

TEST_CASE("fit is linear in the samples") {
    auto rng = make_rng(914);
    const SamplingGrid grid = SamplingGrid::regular(2, 3);
    const PiecewiseCurve u = random_curve(rng, 2, 3, false);
    const PiecewiseCurve v = random_curve(rng, 2, 3, false);
    const SampleMatrix su = sample_curve(u, grid);
    const SampleMatrix sv = sample_curve(v, grid);
    const double alpha = 0.7, beta = -1.9;

    SampleMatrix mix;
    mix.rows = su.rows;
    for (std::size_t i = 0; i < mix.rows.size(); ++i)
        for (std::size_t j = 0; j < mix.rows[i].size(); ++j)
            mix.rows[i][j] = alpha * su.rows[i][j] + beta * sv.rows[i][j];

    const PiecewiseCurve fit_mix = fit_curve(mix, grid, false);
    const PiecewiseCurve fit_u = fit_curve(su, grid, false);
    const PiecewiseCurve fit_v = fit_curve(sv, grid, false);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j <= 3; ++j) {
            const Point2 expect = alpha * fit_u.patch(i)[static_cast<std::size_t>(j)] +
                                  beta * fit_v.patch(i)[static_cast<std::size_t>(j)];
            CHECK(near(fit_mix.patch(i)[static_cast<std::size_t>(j)], expect, 1e-10));
        }
}

TEST_CASE("project function reproduces polynomials") {
    auto rng = make_rng(915);
    for (int degree = 1; degree <= 6; ++degree) {
        std::vector<Point2> coeffs;
        for (int i = 0; i <= degree; ++i)
            coeffs.push_back(random_point(rng, -1.0, 1.0));
        const SamplingGrid grid = SamplingGrid::regular(3, degree);
        const PiecewiseCurve projected = project_function(
            [&](double t) { return eval_monomial(coeffs, t); }, grid);
        for (int k = 0; k <= 100; ++k) {
            const double t = k / 100.0;
            CHECK(near(projected.eval(t), eval_monomial(coeffs, t), 1e-10));
        }
    }
}

TEST_CASE("project function interpolates at the nodes") {
    const SamplingGrid grid = SamplingGrid::regular(4, 3);
    auto wavy = [](double t) {
        return Point2{std::sin(5.0 * t), std::cos(3.0 * t) + 0.2 * t};
    };
    const PiecewiseCurve projected = project_function(wavy, grid);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j <= 3; ++j)
            CHECK(near(projected.eval(grid.global_node(i, j)), wavy(grid.global_node(i, j)), 1e-9));
}

TEST_CASE("project constant and circle") {
    const SamplingGrid grid = SamplingGrid::regular(8, 3);
    const PiecewiseCurve constant =
        project_function([](double) { return Point2{7, -1}; }, grid);
    for (const ControlPolygon& patch : constant.patches())
        for (const Point2& p : patch)
            CHECK(near(p, {7, -1}, 1e-12));

    const PiecewiseCurve circle = project_function(circle_map({0, 0}, 1.0), grid);
    CHECK(circle.closed());
    double worst = 0.0;
    for (int k = 0; k <= 800; ++k)
        worst = std::max(worst, std::abs(norm(circle.eval(k / 800.0)) - 1.0));
    // Measured max radial deviation for 8 cubic patches is ~1.9e-4.
    CHECK(worst < 5e-4);

    CHECK_THROWS_AS(project_function([](double t) { return Point2{t / 0.0, 0}; }, grid),
                    DataError);
}
