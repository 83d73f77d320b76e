#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bezflow/curve_io.hpp"
#include "bezflow/energy.hpp"
#include "bezflow/flow.hpp"
#include "bezflow/svg.hpp"

namespace {

namespace fs = std::filesystem;
using namespace bezflow;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;      // bad flags, malformed files, invalid arguments
constexpr int kExitBadData = 3;    // singular or inconsistent data
constexpr int kExitMaxIters = 4;   // flow stopped on the iteration budget
constexpr int kExitDegenerate = 5; // flow hit a degenerate configuration

void require_input_file(const fs::path& path) {
    if (!fs::is_regular_file(path))
        throw ArgumentError("input file not found: " + path.string());
}

void require_output_dir(const fs::path& path) {
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    if (!fs::is_directory(dir))
        throw ArgumentError("output directory does not exist: " + dir.string());
}

struct CircleSpec {
    Point2 center;
    double radius;
};

CircleSpec parse_circle(const std::string& body) {
    CircleSpec spec{};
    char trailing = '\0';
    if (std::sscanf(body.c_str(), "%lf,%lf,%lf%c", &spec.center.x, &spec.center.y, &spec.radius,
                    &trailing) != 3)
        throw ArgumentError("expected circle:cx,cy,r, got \"circle:" + body + "\"");
    if (!is_finite(spec.center) || !(spec.radius > 0.0))
        throw ArgumentError("circle spec needs finite center and positive radius");
    return spec;
}

std::function<Point2(double)> circle_map(const CircleSpec& spec) {
    return [spec](double u) {
        const double angle = 2.0 * std::numbers::pi * u;
        return spec.center + spec.radius * Point2{std::cos(angle), std::sin(angle)};
    };
}

// Chord-length parametrization of a polyline over [0,1].
std::function<Point2(double)> polyline_map(std::vector<Point2> points) {
    std::vector<double> cumulative(points.size(), 0.0);
    for (std::size_t i = 1; i < points.size(); ++i)
        cumulative[i] = cumulative[i - 1] + distance(points[i], points[i - 1]);
    const double total = cumulative.back();
    if (total <= 0.0) {
        const Point2 value = points.front();
        return [value](double) { return value; };
    }
    return [points = std::move(points), cumulative = std::move(cumulative), total](double u) {
        const double s = std::clamp(u, 0.0, 1.0) * total;
        const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), s);
        std::size_t hi = static_cast<std::size_t>(it - cumulative.begin());
        if (hi == 0)
            return points.front();
        const std::size_t lo = hi - 1;
        const double span = cumulative[hi] - cumulative[lo];
        const double frac = span > 0.0 ? (s - cumulative[lo]) / span : 0.0;
        return points[lo] + frac * (points[hi] - points[lo]);
    };
}

std::function<Point2(double)> parse_target(const std::string& spec) {
    if (spec.starts_with("circle:"))
        return circle_map(parse_circle(spec.substr(7)));
    if (spec.starts_with("csv:")) {
        const fs::path path = spec.substr(4);
        require_input_file(path);
        return polyline_map(polyline_from_csv(read_file(path)));
    }
    throw ArgumentError("unknown target spec \"" + spec + "\" (use circle:cx,cy,r or csv:<path>)");
}

ShapeGradient parse_energy(const std::string& spec) {
    if (spec.starts_with("circle:")) {
        const CircleSpec circle = parse_circle(spec.substr(7));
        return circle_attraction_gradient(circle.center, circle.radius);
    }
    if (spec.starts_with("points:")) {
        const fs::path path = spec.substr(7);
        require_input_file(path);
        return point_attraction_gradient(polyline_map(polyline_from_csv(read_file(path))));
    }
    throw ArgumentError("unknown energy spec \"" + spec +
                        "\" (use circle:cx,cy,r or points:<path>)");
}

StepMethod parse_method(const std::string& name) {
    if (name == "euler")
        return StepMethod::euler;
    if (name == "rk4")
        return StepMethod::rk4;
    throw ArgumentError("unknown method \"" + name + "\" (use euler or rk4)");
}

int status_exit_code(FlowStatus status) {
    switch (status) {
    case FlowStatus::converged: return kExitOk;
    case FlowStatus::max_iters: return kExitMaxIters;
    case FlowStatus::degenerate: return kExitDegenerate;
    }
    return kExitOk;
}

struct FitOptions {
    std::string samples, nodes = "regular", out;
    int patches = 0, degree = 0;
};

struct SampleOptions {
    std::string curve, out;
};

struct ProjectOptions {
    std::string target, out;
    int patches = 0, degree = 0;
};

struct FlowOptions {
    std::string curve, energy, method = "rk4", out;
    double step = 0.1, tol = 1e-6;
    int max_iters = 1000, resample_every = 0;
};

struct SegmentOptions {
    std::string image, init, method = "rk4", out, svg;
    int patches = 8, degree = 3, max_iters = 2000;
    double sigma = 2.0, balloon = 0.5, step = 0.5, tol = 1e-2;
};

struct ExportOptions {
    std::string curve, traj, out;
    int every = 1;
};

SamplingGrid make_grid(int patches, int degree, const std::string& nodes = "regular") {
    if (nodes == "regular")
        return SamplingGrid::regular(patches, degree);
    if (nodes == "chebyshev")
        return SamplingGrid::chebyshev(patches, degree);
    throw ArgumentError("unknown node placement \"" + nodes + "\"");
}

int run_fit(const FitOptions& opt) {
    require_input_file(opt.samples);
    require_output_dir(opt.out);
    const SamplingGrid grid = make_grid(opt.patches, opt.degree, opt.nodes);
    const SampleMatrix samples = samples_from_csv(read_file(opt.samples), grid);
    const PiecewiseCurve curve = fit_curve(samples, grid);
    write_file_atomic(opt.out, curve_to_json(curve) + "\n");
    return kExitOk;
}

int run_sample(const SampleOptions& opt) {
    require_input_file(opt.curve);
    require_output_dir(opt.out);
    const PiecewiseCurve curve = curve_from_json(read_file(opt.curve));
    const SamplingGrid grid = make_grid(curve.patch_count(), curve.degree());
    write_file_atomic(opt.out, samples_to_csv(sample_curve(curve, grid), grid));
    return kExitOk;
}

int run_project(const ProjectOptions& opt) {
    require_output_dir(opt.out);
    const auto target = parse_target(opt.target);
    const SamplingGrid grid = make_grid(opt.patches, opt.degree);
    const PiecewiseCurve curve = project_function(target, grid);
    write_file_atomic(opt.out, curve_to_json(curve) + "\n");
    return kExitOk;
}

int run_flow(const FlowOptions& opt) {
    require_input_file(opt.curve);
    require_output_dir(opt.out);
    const PiecewiseCurve start = curve_from_json(read_file(opt.curve));
    const ShapeGradient grad = parse_energy(opt.energy);
    const SamplingGrid grid = make_grid(start.patch_count(), start.degree());
    FlowConfig cfg;
    cfg.method = parse_method(opt.method);
    cfg.step = opt.step;
    cfg.max_iters = opt.max_iters;
    cfg.tol = opt.tol;
    cfg.resample_every = opt.resample_every;
    const Trajectory traj = integrate(start, grad, grid, cfg);
    write_file_atomic(opt.out, trajectory_to_json(traj) + "\n");
    return status_exit_code(traj.status);
}

int run_segment(const SegmentOptions& opt) {
    require_input_file(opt.image);
    require_output_dir(opt.out);
    if (!opt.svg.empty())
        require_output_dir(opt.svg);
    if (!opt.init.starts_with("circle:"))
        throw ArgumentError("--init expects circle:cx,cy,r");
    const CircleSpec init = parse_circle(opt.init.substr(7));

    const ScalarField image = load_pgm(read_file(opt.image));
    const double max_x = static_cast<double>(image.width() - 1);
    const double max_y = static_cast<double>(image.height() - 1);
    if (init.center.x - init.radius < 0.0 || init.center.x + init.radius > max_x ||
        init.center.y - init.radius < 0.0 || init.center.y + init.radius > max_y)
        throw ArgumentError("initial circle leaves the image bounds");

    const SamplingGrid grid = make_grid(opt.patches, opt.degree);
    const PiecewiseCurve start = project_function(circle_map(init), grid);
    const ShapeGradient grad = image_shape_gradient({opt.sigma, opt.balloon}, image);
    FlowConfig cfg;
    cfg.method = parse_method(opt.method);
    cfg.step = opt.step;
    cfg.max_iters = opt.max_iters;
    cfg.tol = opt.tol;
    cfg.resample_every = 25;
    cfg.record_every = std::max(1, opt.max_iters);
    const Trajectory traj = integrate(start, grad, grid, cfg);

    const PiecewiseCurve& contour = traj.iterates.back().curve;
    write_file_atomic(opt.out, curve_to_json(contour) + "\n");
    if (!opt.svg.empty())
        write_file_atomic(opt.svg, segmentation_svg(image, contour));
    return status_exit_code(traj.status);
}

int run_export(const ExportOptions& opt) {
    require_output_dir(opt.out);
    if (opt.curve.empty() == opt.traj.empty())
        throw ArgumentError("export-svg needs exactly one of --curve or --traj");
    std::string svg;
    if (!opt.curve.empty()) {
        require_input_file(opt.curve);
        svg = curve_svg(curve_from_json(read_file(opt.curve)));
    } else {
        require_input_file(opt.traj);
        svg = trajectory_svg(trajectory_from_json(read_file(opt.traj)), opt.every);
    }
    write_file_atomic(opt.out, svg);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bezflow: piecewise Bezier curve fitting, flows and segmentation"};
    app.require_subcommand(1);

    FitOptions fit_opt;
    CLI::App* fit = app.add_subcommand("fit", "interpolate a curve through node samples");
    fit->add_option("--samples", fit_opt.samples, "sample CSV (patch,node_index,global_t,x,y)")
        ->required();
    fit->add_option("--patches", fit_opt.patches, "number of patches")->required();
    fit->add_option("--degree", fit_opt.degree, "patch degree")->required();
    fit->add_option("--nodes", fit_opt.nodes, "node placement: regular|chebyshev");
    fit->add_option("--out", fit_opt.out, "output curve JSON")->required();

    SampleOptions sample_opt;
    CLI::App* sample = app.add_subcommand("sample", "sample a curve at its regular grid nodes");
    sample->add_option("--curve", sample_opt.curve, "input curve JSON")->required();
    sample->add_option("--out", sample_opt.out, "output sample CSV")->required();

    ProjectOptions project_opt;
    CLI::App* project = app.add_subcommand("project", "project a target shape onto a curve");
    project->add_option("--target", project_opt.target, "circle:cx,cy,r or csv:<polyline>")
        ->required();
    project->add_option("--patches", project_opt.patches, "number of patches")->required();
    project->add_option("--degree", project_opt.degree, "patch degree")->required();
    project->add_option("--out", project_opt.out, "output curve JSON")->required();

    FlowOptions flow_opt;
    CLI::App* flow = app.add_subcommand("flow", "integrate the descent flow of an energy");
    flow->add_option("--curve", flow_opt.curve, "starting curve JSON")->required();
    flow->add_option("--energy", flow_opt.energy, "circle:cx,cy,r or points:<polyline csv>")
        ->required();
    flow->add_option("--method", flow_opt.method, "euler|rk4")->required();
    flow->add_option("--step", flow_opt.step, "step size")->required();
    flow->add_option("--max-iters", flow_opt.max_iters, "iteration budget")->required();
    flow->add_option("--tol", flow_opt.tol, "stationarity tolerance")->required();
    flow->add_option("--resample-every", flow_opt.resample_every,
                     "arc-length resample period (0 disables)");
    flow->add_option("--out", flow_opt.out, "output trajectory JSON")->required();

    SegmentOptions segment_opt;
    CLI::App* segment = app.add_subcommand("segment", "evolve a contour on a PGM image");
    segment->add_option("--image", segment_opt.image, "input PGM (P2 or P5)")->required();
    segment->add_option("--init", segment_opt.init, "initial contour circle:cx,cy,r")->required();
    segment->add_option("--patches", segment_opt.patches, "number of patches")->required();
    segment->add_option("--degree", segment_opt.degree, "patch degree")->required();
    segment->add_option("--sigma", segment_opt.sigma, "Gaussian smoothing sigma, pixels")
        ->required();
    segment->add_option("--balloon", segment_opt.balloon, "balloon coefficient (positive inflates)")
        ->required();
    segment->add_option("--method", segment_opt.method, "euler|rk4")->required();
    segment->add_option("--step", segment_opt.step, "step size")->required();
    segment->add_option("--max-iters", segment_opt.max_iters, "iteration budget")->required();
    segment->add_option("--tol", segment_opt.tol, "stationarity tolerance, pixels")->required();
    segment->add_option("--out", segment_opt.out, "output contour JSON")->required();
    segment->add_option("--svg", segment_opt.svg, "optional SVG overlay path");

    ExportOptions export_opt;
    CLI::App* exp = app.add_subcommand("export-svg", "render a curve or trajectory as SVG");
    exp->add_option("--curve", export_opt.curve, "curve JSON to render");
    exp->add_option("--traj", export_opt.traj, "trajectory JSON to render");
    exp->add_option("--every", export_opt.every, "draw every k-th recorded iterate");
    exp->add_option("--out", export_opt.out, "output SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (fit->parsed())
            return run_fit(fit_opt);
        if (sample->parsed())
            return run_sample(sample_opt);
        if (project->parsed())
            return run_project(project_opt);
        if (flow->parsed())
            return run_flow(flow_opt);
        if (segment->parsed())
            return run_segment(segment_opt);
        if (exp->parsed())
            return run_export(export_opt);
    } catch (const FormatError& e) {
        std::cerr << "bezflow: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ArgumentError& e) {
        std::cerr << "bezflow: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SingularError& e) {
        std::cerr << "bezflow: " << e.what() << "\n";
        return kExitBadData;
    } catch (const DiscontinuityError& e) {
        std::cerr << "bezflow: " << e.what() << "\n";
        return kExitBadData;
    } catch (const DataError& e) {
        std::cerr << "bezflow: " << e.what() << "\n";
        return kExitBadData;
    } catch (const DegenerateError& e) {
        std::cerr << "bezflow: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const std::exception& e) {
        std::cerr << "bezflow: unexpected error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
