#pragma once

// Shared generators and independent oracles for the test suites. Everything
// here stays off the library's implementation paths: monomial expansion,
// dense geometric measurements and random instances are computed directly.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "bezflow/bezier.hpp"
#include "bezflow/collocation.hpp"

namespace test_support {

using bezflow::ControlPolygon;
using bezflow::PiecewiseCurve;
using bezflow::Point2;

inline std::mt19937 make_rng(unsigned seed) { return std::mt19937(seed); }

inline Point2 random_point(std::mt19937& rng, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    return {dist(rng), dist(rng)};
}

inline ControlPolygon random_polygon(std::mt19937& rng, int degree, double lo = -10.0,
                                     double hi = 10.0) {
    std::vector<Point2> points;
    points.reserve(static_cast<std::size_t>(degree) + 1);
    for (int i = 0; i <= degree; ++i)
        points.push_back(random_point(rng, lo, hi));
    return ControlPolygon(std::move(points));
}

// Random C0 piecewise curve; consecutive patches share their join point
// exactly, and closed curves reuse the very first point.
inline PiecewiseCurve random_curve(std::mt19937& rng, int patch_count, int degree, bool closed,
                                   double lo = -10.0, double hi = 10.0) {
    std::vector<ControlPolygon> patches;
    Point2 cursor = random_point(rng, lo, hi);
    const Point2 start = cursor;
    for (int i = 0; i < patch_count; ++i) {
        std::vector<Point2> points;
        points.push_back(cursor);
        for (int j = 1; j <= degree; ++j)
            points.push_back(random_point(rng, lo, hi));
        if (closed && i == patch_count - 1)
            points.back() = start;
        cursor = points.back();
        patches.emplace_back(std::move(points));
    }
    return PiecewiseCurve(std::move(patches), closed);
}

// Monomial coefficients of the Bernstein-form curve, from the expansion
// b_{i,D}(t) = C(D,i) sum_k C(D-i,k) (-1)^k t^(i+k). Independent route for
// the degree-bound and conversion checks.
inline std::vector<Point2> bernstein_to_monomial(const ControlPolygon& poly) {
    const int degree = poly.degree();
    std::vector<Point2> coeffs(static_cast<std::size_t>(degree) + 1, Point2{0.0, 0.0});
    for (int i = 0; i <= degree; ++i) {
        const double lead = static_cast<double>(bezflow::binomial(degree, i));
        for (int k = 0; k + i <= degree; ++k) {
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            const double weight =
                lead * sign * static_cast<double>(bezflow::binomial(degree - i, k));
            coeffs[static_cast<std::size_t>(i + k)] += weight * poly[static_cast<std::size_t>(i)];
        }
    }
    return coeffs;
}

inline Point2 eval_monomial(const std::vector<Point2>& coeffs, double t) {
    Point2 value{0.0, 0.0};
    for (std::size_t i = coeffs.size(); i-- > 0;)
        value = t * value + coeffs[i];
    return value;
}

inline std::vector<Point2> dense_points(const PiecewiseCurve& curve, int count) {
    std::vector<Point2> points;
    points.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k)
        points.push_back(curve.eval(static_cast<double>(k) / static_cast<double>(count - 1)));
    return points;
}

inline double hausdorff(const std::vector<Point2>& a, const std::vector<Point2>& b) {
    auto directed = [](const std::vector<Point2>& from, const std::vector<Point2>& to) {
        double worst = 0.0;
        for (const Point2& p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const Point2& q : to)
                best = std::min(best, bezflow::distance(p, q));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

inline std::function<Point2(double)> circle_map(Point2 center, double radius) {
    return [center, radius](double u) {
        const double angle = 2.0 * std::numbers::pi * u;
        return center + radius * Point2{std::cos(angle), std::sin(angle)};
    };
}

// Scratch directory unique to this process, removed on destruction.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("bezflow-" + tag + "-" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::filesystem::path file(const std::string& name) const { return path / name; }
};

inline void write_text(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

inline std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Runs the CLI under test; the harness exports BEZFLOW_CLI. Returns the
// process exit code, with stdout/stderr sent to capture_file when given.
inline int run_cli(const std::string& args, const std::filesystem::path& capture = {}) {
    const char* cli = std::getenv("BEZFLOW_CLI");
    if (!cli)
        throw std::runtime_error("BEZFLOW_CLI not set; run through ctest");
    std::string cmd = std::string(cli) + " " + args;
    if (!capture.empty())
        cmd += " > " + capture.string() + " 2>&1";
    else
        cmd += " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (status == -1)
        return -1;
    return WEXITSTATUS(status);
}

} // namespace test_support
