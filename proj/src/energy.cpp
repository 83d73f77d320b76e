#include "bezflow/energy.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <iostream>
#include <memory>
#include <numbers>

namespace bezflow {

namespace {

void check_sigma(double sigma) {
    if (!(sigma >= 0.5 && sigma <= 10.0))
        throw ArgumentError("sigma must lie in [0.5, 10], got " + std::to_string(sigma));
}

// Half-sample symmetric reflection: -1 -> 0, -2 -> 1, n -> n-1, ...
int reflect(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0)
            i = -i - 1;
        if (i >= n)
            i = 2 * n - 1 - i;
    }
    return i;
}

std::vector<double> gaussian_kernel(double sigma) {
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius) + 1);
    double sum = 0.0;
    for (int d = -radius; d <= radius; ++d) {
        const double w = std::exp(-0.5 * (d / sigma) * (d / sigma));
        kernel[static_cast<std::size_t>(d + radius)] = w;
        sum += w;
    }
    for (double& w : kernel)
        w /= sum;
    return kernel;
}

// PGM token scanner tracking the byte offset for error reporting.
struct PgmScanner {
    std::string_view bytes;
    std::size_t pos = 0;

    void skip_header_space() {
        while (pos < bytes.size()) {
            const char c = bytes[pos];
            if (c == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n')
                    ++pos;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos;
            } else {
                break;
            }
        }
    }

    int read_int(const char* what) {
        skip_header_space();
        if (pos >= bytes.size())
            throw FormatError(std::string("PGM truncated while reading ") + what +
                              " at byte offset " + std::to_string(pos));
        if (!std::isdigit(static_cast<unsigned char>(bytes[pos])))
            throw FormatError(std::string("PGM: expected digit for ") + what +
                              " at byte offset " + std::to_string(pos));
        long value = 0;
        while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
            value = value * 10 + (bytes[pos] - '0');
            if (value > 1'000'000'000)
                throw FormatError(std::string("PGM: ") + what + " out of range at byte offset " +
                                  std::to_string(pos));
            ++pos;
        }
        return static_cast<int>(value);
    }
};

} // namespace

ScalarField::ScalarField(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
    if (width_ < 2 || height_ < 2)
        throw ArgumentError("scalar field must be at least 2x2, got " + std::to_string(width_) +
                            "x" + std::to_string(height_));
    if (values_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_))
        throw ArgumentError("scalar field value count does not match dimensions");
    for (double v : values_)
        if (!std::isfinite(v))
            throw DataError("scalar field contains a non-finite value");
}

ScalarField ScalarField::constant(int width, int height, double value) {
    return ScalarField(width, height,
                       std::vector<double>(static_cast<std::size_t>(width) *
                                               static_cast<std::size_t>(height),
                                           value));
}

double ScalarField::sample(double x, double y) const {
    x = std::clamp(x, 0.0, static_cast<double>(width_ - 1));
    y = std::clamp(y, 0.0, static_cast<double>(height_ - 1));
    const int x0 = std::min(static_cast<int>(x), width_ - 2);
    const int y0 = std::min(static_cast<int>(y), height_ - 2);
    const double fx = x - x0;
    const double fy = y - y0;
    const double top = (1.0 - fx) * at(x0, y0) + fx * at(x0 + 1, y0);
    const double bottom = (1.0 - fx) * at(x0, y0 + 1) + fx * at(x0 + 1, y0 + 1);
    return (1.0 - fy) * top + fy * bottom;
}

double ScalarField::max_value() const {
    return *std::max_element(values_.begin(), values_.end());
}

ScalarField load_pgm(std::string_view bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
        throw FormatError("PGM: missing P2/P5 magic at byte offset 0");
    const bool binary = bytes[1] == '5';
    PgmScanner scan{bytes, 2};

    const int width = scan.read_int("width");
    const int height = scan.read_int("height");
    const int maxval = scan.read_int("maxval");
    if (maxval < 1 || maxval > 255)
        throw FormatError("PGM: unsupported maxval " + std::to_string(maxval) +
                          " at byte offset " + std::to_string(scan.pos) + " (8-bit only)");
    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    std::vector<double> values(count);

    if (binary) {
        if (scan.pos >= bytes.size() ||
            !std::isspace(static_cast<unsigned char>(bytes[scan.pos])))
            throw FormatError("PGM: expected single whitespace after maxval at byte offset " +
                              std::to_string(scan.pos));
        ++scan.pos;
        const std::size_t available = bytes.size() - scan.pos;
        if (available < count)
            throw FormatError("PGM: truncated payload, expected " + std::to_string(count) +
                              " bytes but received " + std::to_string(available));
        for (std::size_t k = 0; k < count; ++k)
            values[k] = static_cast<double>(static_cast<unsigned char>(bytes[scan.pos + k])) /
                        static_cast<double>(maxval);
    } else {
        for (std::size_t k = 0; k < count; ++k) {
            scan.skip_header_space();
            if (scan.pos >= bytes.size())
                throw FormatError("PGM: truncated payload, expected " + std::to_string(count) +
                                  " pixel values but received " + std::to_string(k));
            const int v = scan.read_int("pixel value");
            if (v > maxval)
                throw FormatError("PGM: pixel value " + std::to_string(v) + " exceeds maxval at byte offset " +
                                  std::to_string(scan.pos));
            values[k] = static_cast<double>(v) / static_cast<double>(maxval);
        }
    }
    return ScalarField(width, height, std::move(values));
}

std::string write_pgm(const ScalarField& field) {
    double lo = field.values().front();
    double hi = lo;
    for (double v : field.values()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;
    std::string out = "P5\n" + std::to_string(field.width()) + " " +
                      std::to_string(field.height()) + "\n255\n";
    out.reserve(out.size() + field.values().size());
    for (double v : field.values()) {
        const int byte = static_cast<int>(std::lround((v - lo) * scale));
        out.push_back(static_cast<char>(std::clamp(byte, 0, 255)));
    }
    return out;
}

ScalarField gaussian_gradient_magnitude(const ScalarField& img, double sigma) {
    check_sigma(sigma);
    const int w = img.width();
    const int h = img.height();
    const std::vector<double> kernel = gaussian_kernel(sigma);
    const int radius = (static_cast<int>(kernel.size()) - 1) / 2;

    ScalarField horizontal = ScalarField::constant(w, h, 0.0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int d = -radius; d <= radius; ++d)
                acc += kernel[static_cast<std::size_t>(d + radius)] * img.at(reflect(x + d, w), y);
            horizontal.set(x, y, acc);
        }
    ScalarField smooth = ScalarField::constant(w, h, 0.0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int d = -radius; d <= radius; ++d)
                acc += kernel[static_cast<std::size_t>(d + radius)] * horizontal.at(x, reflect(y + d, h));
            smooth.set(x, y, acc);
        }

    ScalarField magnitude = ScalarField::constant(w, h, 0.0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double gx = 0.5 * (smooth.at(reflect(x + 1, w), y) - smooth.at(reflect(x - 1, w), y));
            const double gy = 0.5 * (smooth.at(x, reflect(y + 1, h)) - smooth.at(x, reflect(y - 1, h)));
            magnitude.set(x, y, std::hypot(gx, gy));
        }
    return magnitude;
}

namespace {

// Peak-normalized stopping response with a contrast scale: magnitudes at
// `contrast` times the peak already count as a strong edge.
ScalarField stopping_field(const ScalarField& magnitude, double contrast) {
    const double peak = magnitude.max_value();
    ScalarField g = ScalarField::constant(magnitude.width(), magnitude.height(), 1.0);
    if (peak <= 0.0)
        return g;
    for (int y = 0; y < magnitude.height(); ++y)
        for (int x = 0; x < magnitude.width(); ++x) {
            const double m = magnitude.at(x, y) / (peak * contrast);
            g.set(x, y, 1.0 / (1.0 + m * m));
        }
    return g;
}

} // namespace

ScalarField edge_stopping_field(const ScalarField& magnitude) {
    return stopping_field(magnitude, 1.0);
}

ShapeGradient image_shape_gradient(const ImageEnergyConfig& cfg, const ScalarField& img) {
    check_sigma(cfg.sigma);
    if (!std::isfinite(cfg.balloon))
        throw ArgumentError("balloon coefficient must be finite");
    if (!(cfg.edge_contrast > 0.0 && cfg.edge_contrast <= 1.0))
        throw ArgumentError("edge_contrast must lie in (0, 1]");
    auto stopping = std::make_shared<const ScalarField>(
        stopping_field(gaussian_gradient_magnitude(img, cfg.sigma), cfg.edge_contrast));
    auto warned = std::make_shared<std::atomic<bool>>(false);
    const double balloon = cfg.balloon;

    ShapeGradient grad;
    grad.gradient = [stopping, warned, balloon](double /*t*/, const Point2& point,
                                                const Point2& normal) {
        if (!stopping->contains(point.x, point.y) && !warned->exchange(true))
            std::cerr << "bezflow: contour point (" << point.x << ", " << point.y
                      << ") outside the image, clamped to the border\n";
        const double g = stopping->sample(point.x, point.y);
        // Central differences of the bilinear interpolant, step 0.5 px.
        const Point2 grad_g{stopping->sample(point.x + 0.5, point.y) -
                                stopping->sample(point.x - 0.5, point.y),
                            stopping->sample(point.x, point.y + 0.5) -
                                stopping->sample(point.x, point.y - 0.5)};
        // Ascent direction; the descent flow negates it, so positive balloon
        // moves the contour along +normal and stalls where g vanishes.
        return grad_g - balloon * g * normal;
    };
    grad.point_energy = [stopping](double /*t*/, const Point2& point) {
        return stopping->sample(point.x, point.y);
    };
    return grad;
}

ShapeGradient point_attraction_gradient(std::function<Point2(double)> target) {
    if (!target)
        throw ArgumentError("point attraction requires a target map");
    auto shared = std::make_shared<const std::function<Point2(double)>>(std::move(target));
    ShapeGradient grad;
    grad.gradient = [shared](double t, const Point2& point, const Point2& /*normal*/) {
        return point - (*shared)(t);
    };
    grad.point_energy = [shared](double t, const Point2& point) {
        return 0.5 * squared_norm(point - (*shared)(t));
    };
    return grad;
}

ShapeGradient circle_attraction_gradient(Point2 center, double radius) {
    if (!(radius > 0.0))
        throw ArgumentError("circle attraction radius must be positive");
    if (!is_finite(center))
        throw ArgumentError("circle attraction center must be finite");
    ShapeGradient grad;
    grad.gradient = [center, radius](double /*t*/, const Point2& point, const Point2& /*normal*/) {
        const Point2 d = point - center;
        const double dist = norm(d);
        if (dist < 1e-12)
            throw DegenerateError("circle attraction gradient undefined at the center");
        return ((dist - radius) / dist) * d;
    };
    grad.point_energy = [center, radius](double /*t*/, const Point2& point) {
        const double dist = norm(point - center);
        return 0.5 * (dist - radius) * (dist - radius);
    };
    return grad;
}

} // namespace bezflow
