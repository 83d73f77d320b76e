#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "bezflow/deform.hpp"

namespace bezflow {

// Grayscale raster sampled bilinearly between pixel centers; coordinates
// outside the image clamp to the border.
class ScalarField {
public:
    ScalarField(int width, int height, std::vector<double> values);

    static ScalarField constant(int width, int height, double value);

    int width() const { return width_; }
    int height() const { return height_; }
    double at(int x, int y) const { return values_[index(x, y)]; }
    void set(int x, int y, double v) { values_[index(x, y)] = v; }
    const std::vector<double>& values() const { return values_; }

    // Bilinear interpolation at pixel-center coordinates, clamped.
    double sample(double x, double y) const;
    bool contains(double x, double y) const {
        return x >= 0.0 && x <= static_cast<double>(width_ - 1) && y >= 0.0 &&
               y <= static_cast<double>(height_ - 1);
    }
    double max_value() const;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }
    int width_;
    int height_;
    std::vector<double> values_;
};

// Decodes an 8-bit P2 (ASCII) or P5 (binary) PGM, values scaled to [0,1].
ScalarField load_pgm(std::string_view bytes);

// Binary P5 encoding with values rescaled to 0..255; debugging aid.
std::string write_pgm(const ScalarField& field);

// |grad(G_sigma * I)|: separable Gaussian smoothing (kernel radius
// ceil(3 sigma), reflected boundary) followed by central differences.
ScalarField gaussian_gradient_magnitude(const ScalarField& img, double sigma);

// g = 1 / (1 + m^2) with the magnitude normalized to peak 1; g is 1 in
// flat regions and drops toward 0 on edges. A zero field maps to all ones.
ScalarField edge_stopping_field(const ScalarField& magnitude);

struct ImageEnergyConfig {
    double sigma = 2.0;         // Gaussian pre-smoothing, pixels; valid range [0.5, 10]
    double balloon = 0.0;       // signed balloon coefficient; positive inflates under the descent flow
    double edge_contrast = 0.2; // normalized magnitude treated as a definite edge, in (0, 1];
                                // smaller values deepen the stopping well so the balloon stalls
};

// Edge-attraction gradient with balloon term. The returned vector is the
// ascent direction of the sampled edge energy; the flow steps along its
// negative, so positive balloon pushes the contour outward, stalling where
// g vanishes. Points outside the image clamp to the border (logged once).
ShapeGradient image_shape_gradient(const ImageEnergyConfig& cfg, const ScalarField& img);

// Gradient of 1/2 sum ||M_k - target(t_k)||^2; stationary exactly at the
// patchwise interpolant of the target map.
ShapeGradient point_attraction_gradient(std::function<Point2(double)> target);

// Gradient of the radial energy 1/2 (||M - c|| - r)^2. Evaluating at the
// center is a degenerate-gradient error.
ShapeGradient circle_attraction_gradient(Point2 center, double radius);

} // namespace bezflow
