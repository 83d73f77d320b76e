#pragma once

#include <string>

#include "bezflow/energy.hpp"
#include "bezflow/flow.hpp"

namespace bezflow {

// SVG with the curve drawn as native path segments for degree <= 3 and as
// 64-point polylines otherwise. Control points appear verbatim in the path
// data; a group transform flips the y-axis to image convention.
std::string curve_svg(const PiecewiseCurve& curve);

// Overlays every k-th recorded iterate (always including the last) with an
// opacity ramp from faint to solid.
std::string trajectory_svg(const Trajectory& traj, int every);

// Raster underlay (image pixels, origin top-left) with the contour drawn on
// top in the same pixel coordinates.
std::string segmentation_svg(const ScalarField& image, const PiecewiseCurve& contour);

} // namespace bezflow
