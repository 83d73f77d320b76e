#include "bezflow/curve_io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace bezflow {

namespace {

using nlohmann::json;

json parse_json(std::string_view text, const char* what) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded())
        throw FormatError(std::string(what) + ": invalid JSON");
    return doc;
}

double number_field(const json& obj, const char* key, const char* what) {
    if (!obj.contains(key) || !obj[key].is_number())
        throw FormatError(std::string(what) + ": missing numeric field \"" + key + "\"");
    return obj[key].get<double>();
}

std::vector<std::vector<Point2>> patches_from_json(const json& doc, const char* what) {
    if (!doc.is_object() || !doc.contains("degree") || !doc.contains("patches"))
        throw FormatError(std::string(what) + ": expected object with degree and patches");
    if (!doc["degree"].is_number_integer())
        throw FormatError(std::string(what) + ": degree must be an integer");
    const int degree = doc["degree"].get<int>();
    if (degree < 0)
        throw FormatError(std::string(what) + ": degree must be non-negative");
    const json& patches = doc["patches"];
    if (!patches.is_array() || patches.empty())
        throw FormatError(std::string(what) + ": patches must be a non-empty array");

    std::vector<std::vector<Point2>> out;
    out.reserve(patches.size());
    for (const json& patch : patches) {
        if (!patch.is_array() || static_cast<int>(patch.size()) != degree + 1)
            throw FormatError(std::string(what) + ": every patch needs degree+1 points");
        std::vector<Point2> points;
        points.reserve(patch.size());
        for (const json& pt : patch) {
            if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number())
                throw FormatError(std::string(what) + ": points must be [x, y] number pairs");
            const Point2 p{pt[0].get<double>(), pt[1].get<double>()};
            if (!is_finite(p))
                throw FormatError(std::string(what) + ": non-finite coordinate");
            points.push_back(p);
        }
        out.push_back(std::move(points));
    }
    return out;
}

void append_patches(std::string& out, const std::vector<std::vector<Point2>>& patches) {
    out += "[";
    for (std::size_t i = 0; i < patches.size(); ++i) {
        if (i)
            out += ",";
        out += "[";
        for (std::size_t j = 0; j < patches[i].size(); ++j) {
            if (j)
                out += ",";
            out += "[" + format_double(patches[i][j].x) + "," + format_double(patches[i][j].y) + "]";
        }
        out += "]";
    }
    out += "]";
}

// Reconciles shared join rows the same way fit_curve does, so hand-edited
// files with round-off at the joins still load.
std::vector<ControlPolygon> snap_joins(std::vector<std::vector<Point2>> patches, bool closed,
                                       const char* what) {
    for (std::size_t i = 0; i + 1 < patches.size(); ++i) {
        const double gap = distance(patches[i].back(), patches[i + 1].front());
        if (gap > kSharedNodeTolerance)
            throw DiscontinuityError(std::string(what) + ": patches " + std::to_string(i) + " and " +
                                     std::to_string(i + 1) + " do not join (gap " +
                                     std::to_string(gap) + ")");
        const Point2 mid = 0.5 * (patches[i].back() + patches[i + 1].front());
        patches[i].back() = mid;
        patches[i + 1].front() = mid;
    }
    if (closed) {
        const double gap = distance(patches.front().front(), patches.back().back());
        if (gap > kSharedNodeTolerance)
            throw DiscontinuityError(std::string(what) + ": closed curve endpoints differ by " +
                                     std::to_string(gap));
        const Point2 mid = 0.5 * (patches.front().front() + patches.back().back());
        patches.front().front() = mid;
        patches.back().back() = mid;
    }
    std::vector<ControlPolygon> polys;
    polys.reserve(patches.size());
    for (auto& patch : patches)
        polys.emplace_back(std::move(patch));
    return polys;
}

const char* status_name(FlowStatus status) {
    switch (status) {
    case FlowStatus::converged: return "converged";
    case FlowStatus::max_iters: return "max_iters";
    case FlowStatus::degenerate: return "degenerate";
    }
    return "unknown";
}

FlowStatus status_from_name(const std::string& name) {
    if (name == "converged")
        return FlowStatus::converged;
    if (name == "max_iters")
        return FlowStatus::max_iters;
    if (name == "degenerate")
        return FlowStatus::degenerate;
    throw FormatError("trajectory: unknown status \"" + name + "\"");
}

double parse_csv_double(std::string_view token, int line) {
    const std::string buf(token);
    char* end = nullptr;
    errno = 0;
    const double value = std::strtod(buf.c_str(), &end);
    if (end == buf.c_str() || *end != '\0' || errno == ERANGE)
        throw FormatError("CSV line " + std::to_string(line) + ": bad number \"" + buf + "\"");
    return value;
}

long parse_csv_int(std::string_view token, int line) {
    long value = 0;
    const auto result = std::from_chars(token.data(), token.data() + token.size(), value);
    if (result.ec != std::errc{} || result.ptr != token.data() + token.size())
        throw FormatError("CSV line " + std::to_string(line) + ": bad integer \"" +
                          std::string(token) + "\"");
    return value;
}

std::vector<std::string_view> split_line(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r')
        line.remove_suffix(1);
    return line;
}

} // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string curve_to_json(const PiecewiseCurve& curve) {
    std::vector<std::vector<Point2>> patches;
    patches.reserve(static_cast<std::size_t>(curve.patch_count()));
    for (const ControlPolygon& patch : curve.patches())
        patches.emplace_back(patch.begin(), patch.end());
    std::string out = "{\"degree\":" + std::to_string(curve.degree()) +
                      ",\"closed\":" + (curve.closed() ? "true" : "false") + ",\"patches\":";
    append_patches(out, patches);
    out += "}";
    return out;
}

PiecewiseCurve curve_from_json(std::string_view text) {
    const json doc = parse_json(text, "curve");
    if (!doc.is_object() || !doc.contains("closed") || !doc["closed"].is_boolean())
        throw FormatError("curve: missing boolean field \"closed\"");
    std::vector<std::vector<Point2>> patches = patches_from_json(doc, "curve");
    const bool closed = doc["closed"].get<bool>();
    return PiecewiseCurve(snap_joins(std::move(patches), closed, "curve"), closed);
}

std::string increment_to_json(const ControlIncrement& inc) {
    std::string out = "{\"degree\":" + std::to_string(inc.degree()) + ",\"patches\":";
    append_patches(out, inc.patches());
    out += "}";
    return out;
}

ControlIncrement increment_from_json(std::string_view text) {
    const json doc = parse_json(text, "increment");
    std::vector<std::vector<Point2>> patches = patches_from_json(doc, "increment");
    for (std::size_t i = 0; i + 1 < patches.size(); ++i) {
        if (distance(patches[i].back(), patches[i + 1].front()) > kSharedNodeTolerance)
            throw DiscontinuityError("increment: join entries of patches " + std::to_string(i) +
                                     " and " + std::to_string(i + 1) + " disagree");
        const Point2 mid = 0.5 * (patches[i].back() + patches[i + 1].front());
        patches[i].back() = mid;
        patches[i + 1].front() = mid;
    }
    return ControlIncrement(std::move(patches));
}

std::string trajectory_to_json(const Trajectory& traj) {
    std::string out = "{\"status\":\"";
    out += status_name(traj.status);
    out += "\",\"iterates\":[";
    for (std::size_t k = 0; k < traj.iterates.size(); ++k) {
        const FlowSample& sample = traj.iterates[k];
        if (k)
            out += ",";
        out += "{\"iter\":" + std::to_string(sample.iter) + ",\"stationarity\":";
        out += std::isfinite(sample.stationarity) ? format_double(sample.stationarity) : "null";
        out += ",\"energy\":";
        out += sample.energy ? format_double(*sample.energy) : "null";
        out += ",\"curve\":" + curve_to_json(sample.curve) + "}";
    }
    out += "]}";
    return out;
}

Trajectory trajectory_from_json(std::string_view text) {
    const json doc = parse_json(text, "trajectory");
    if (!doc.is_object() || !doc.contains("status") || !doc["status"].is_string() ||
        !doc.contains("iterates") || !doc["iterates"].is_array())
        throw FormatError("trajectory: expected object with status and iterates");
    Trajectory traj;
    traj.status = status_from_name(doc["status"].get<std::string>());
    for (const json& entry : doc["iterates"]) {
        if (!entry.is_object() || !entry.contains("curve"))
            throw FormatError("trajectory: iterate entries need a curve");
        FlowSample sample{
            static_cast<int>(number_field(entry, "iter", "trajectory")),
            curve_from_json(entry["curve"].dump()),
            entry.contains("stationarity") && entry["stationarity"].is_number()
                ? entry["stationarity"].get<double>()
                : std::numeric_limits<double>::infinity(),
            std::nullopt};
        if (entry.contains("energy") && entry["energy"].is_number())
            sample.energy = entry["energy"].get<double>();
        traj.iterates.push_back(std::move(sample));
    }
    if (traj.iterates.empty())
        throw FormatError("trajectory: no iterates");
    return traj;
}

std::string samples_to_csv(const SampleMatrix& samples, const SamplingGrid& grid) {
    if (samples.patch_count() != grid.patch_count() || samples.degree() != grid.degree())
        throw ArgumentError("sample matrix shape does not match grid");
    std::string out = "patch,node_index,global_t,x,y\n";
    for (int i = 0; i < grid.patch_count(); ++i)
        for (int j = 0; j <= grid.degree(); ++j) {
            const Point2& p = samples.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            out += std::to_string(i) + "," + std::to_string(j) + "," +
                   format_double(grid.global_node(i, j)) + "," + format_double(p.x) + "," +
                   format_double(p.y) + "\n";
        }
    return out;
}

SampleMatrix samples_from_csv(std::string_view text, const SamplingGrid& grid) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        const std::string_view line = strip_cr(text.substr(start, end - start));
        if (!line.empty())
            lines.push_back(line);
        start = end + 1;
    }
    if (lines.empty() || lines.front() != "patch,node_index,global_t,x,y")
        throw FormatError("CSV: expected header patch,node_index,global_t,x,y");

    const int expected = grid.row_count();
    if (static_cast<int>(lines.size()) - 1 != expected)
        throw FormatError("CSV: expected " + std::to_string(expected) + " sample rows, got " +
                          std::to_string(lines.size() - 1));

    SampleMatrix samples;
    samples.rows.assign(static_cast<std::size_t>(grid.patch_count()),
                        std::vector<Point2>(static_cast<std::size_t>(grid.degree()) + 1));
    int row = 0;
    for (std::size_t k = 1; k < lines.size(); ++k, ++row) {
        const int line_no = static_cast<int>(k) + 1;
        const auto fields = split_line(lines[k]);
        if (fields.size() != 5)
            throw FormatError("CSV line " + std::to_string(line_no) + ": expected 5 fields");
        const long patch = parse_csv_int(fields[0], line_no);
        const long node = parse_csv_int(fields[1], line_no);
        const int want_patch = row / (grid.degree() + 1);
        const int want_node = row % (grid.degree() + 1);
        if (patch != want_patch || node != want_node)
            throw FormatError("CSV line " + std::to_string(line_no) + ": expected row (" +
                              std::to_string(want_patch) + "," + std::to_string(want_node) +
                              "), got (" + std::to_string(patch) + "," + std::to_string(node) + ")");
        const double t = parse_csv_double(fields[2], line_no);
        if (std::abs(t - grid.global_node(want_patch, want_node)) > 1e-9)
            throw FormatError("CSV line " + std::to_string(line_no) + ": global_t " +
                              std::string(fields[2]) + " does not match the grid node");
        samples.rows[static_cast<std::size_t>(want_patch)][static_cast<std::size_t>(want_node)] = {
            parse_csv_double(fields[3], line_no), parse_csv_double(fields[4], line_no)};
    }
    return samples;
}

std::vector<Point2> polyline_from_csv(std::string_view text) {
    std::vector<Point2> points;
    std::size_t start = 0;
    int line_no = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        const std::string_view line = strip_cr(text.substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty())
            continue;
        if (line_no == 1 && line == "x,y")
            continue;
        const auto fields = split_line(line);
        if (fields.size() != 2)
            throw FormatError("polyline CSV line " + std::to_string(line_no) +
                              ": expected x,y");
        points.push_back(
            {parse_csv_double(fields[0], line_no), parse_csv_double(fields[1], line_no)});
    }
    if (points.size() < 2)
        throw FormatError("polyline CSV needs at least two points");
    return points;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ArgumentError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof())
        throw ArgumentError("failed reading " + path.string());
    return std::move(buf).str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    const std::filesystem::path dir =
        path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec))
        throw ArgumentError("output directory does not exist: " + dir.string());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw ArgumentError("cannot create " + tmp.string());
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out.good()) {
            out.close();
            std::filesystem::remove(tmp, ec);
            throw ArgumentError("failed writing " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw ArgumentError("cannot move output into place at " + path.string() + ": " +
                            ec.message());
    }
}

} // namespace bezflow
