#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "bezflow/collocation.hpp"
#include "bezflow/flow.hpp"

namespace bezflow {

// Shortest-width %.17g rendering; round-trips doubles exactly.
std::string format_double(double v);

// {"degree": D, "closed": bool, "patches": [[[x,y] x (D+1)] x (N+1)]}
std::string curve_to_json(const PiecewiseCurve& curve);
PiecewiseCurve curve_from_json(std::string_view text);

// Same patch layout with displacement vectors.
std::string increment_to_json(const ControlIncrement& inc);
ControlIncrement increment_from_json(std::string_view text);

// {"status": ..., "iterates": [{"iter", "stationarity", "energy", "curve"}]}
std::string trajectory_to_json(const Trajectory& traj);
Trajectory trajectory_from_json(std::string_view text);

// Header patch,node_index,global_t,x,y; rows ordered by (patch, node).
std::string samples_to_csv(const SampleMatrix& samples, const SamplingGrid& grid);
SampleMatrix samples_from_csv(std::string_view text, const SamplingGrid& grid);

// Column-pair CSV (optional "x,y" header) describing a polyline.
std::vector<Point2> polyline_from_csv(std::string_view text);

std::string read_file(const std::filesystem::path& path);

// Writes through a temporary file in the target directory and renames, so
// the target is never left partially written.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

} // namespace bezflow
