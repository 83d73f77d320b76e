#include "bezflow/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "bezflow/curve_io.hpp"

namespace bezflow {

namespace {

// The one line allowed to change between tool versions; it also documents
// the coordinate convention of the file.
constexpr const char* kCurveComment =
    "<!-- bezflow svg export 0.1.0; y axis flipped to image convention "
    "(origin top-left) by the group transform -->\n";
constexpr const char* kRasterComment =
    "<!-- bezflow svg export 0.1.0; pixel coordinates, origin top-left -->\n";

struct Bounds {
    double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
};

Bounds control_net_bounds(const PiecewiseCurve& curve) {
    Bounds b{curve.patch(0)[0].x, curve.patch(0)[0].y, curve.patch(0)[0].x, curve.patch(0)[0].y};
    for (const ControlPolygon& patch : curve.patches())
        for (const Point2& p : patch) {
            b.min_x = std::min(b.min_x, p.x);
            b.min_y = std::min(b.min_y, p.y);
            b.max_x = std::max(b.max_x, p.x);
            b.max_y = std::max(b.max_y, p.y);
        }
    return b;
}

Bounds merge(Bounds a, Bounds b) {
    return {std::min(a.min_x, b.min_x), std::min(a.min_y, b.min_y), std::max(a.max_x, b.max_x),
            std::max(a.max_y, b.max_y)};
}

std::string point_pair(const Point2& p) {
    return format_double(p.x) + " " + format_double(p.y);
}

// Path data with control points verbatim; the curve hull bounds the path.
std::string path_data(const PiecewiseCurve& curve) {
    std::string d = "M " + point_pair(curve.patch(0)[0]);
    for (const ControlPolygon& patch : curve.patches()) {
        switch (patch.degree()) {
        case 1:
            d += " L " + point_pair(patch[1]);
            break;
        case 2:
            d += " Q " + point_pair(patch[1]) + " " + point_pair(patch[2]);
            break;
        case 3:
            d += " C " + point_pair(patch[1]) + " " + point_pair(patch[2]) + " " +
                 point_pair(patch[3]);
            break;
        default:
            for (int k = 1; k <= 64; ++k)
                d += " L " + point_pair(de_casteljau(patch, static_cast<double>(k) / 64.0));
            break;
        }
    }
    if (curve.closed())
        d += " Z";
    return d;
}

std::string svg_header(Bounds b) {
    const double pad = 0.05 * std::max({b.max_x - b.min_x, b.max_y - b.min_y, 1e-6});
    const double width = b.max_x - b.min_x + 2 * pad;
    const double height = b.max_y - b.min_y + 2 * pad;
    // Flip to image convention (origin top-left, y down) via the group
    // transform; path coordinates stay verbatim.
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += kCurveComment;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + format_double(b.min_x - pad) +
           " " + format_double(-(b.max_y + pad)) + " " + format_double(width) + " " +
           format_double(height) + "\">\n";
    out += "<g transform=\"matrix(1 0 0 -1 0 0)\" fill=\"none\" stroke-width=\"" +
           format_double(0.006 * std::max(width, height)) + "\">\n";
    return out;
}

std::string base64_encode(const std::vector<std::uint8_t>& data) {
    static const char* alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    for (std::size_t i = 0; i < data.size(); i += 3) {
        std::uint32_t chunk = static_cast<std::uint32_t>(data[i]) << 16;
        if (i + 1 < data.size())
            chunk |= static_cast<std::uint32_t>(data[i + 1]) << 8;
        if (i + 2 < data.size())
            chunk |= data[i + 2];
        out.push_back(alphabet[(chunk >> 18) & 63]);
        out.push_back(alphabet[(chunk >> 12) & 63]);
        out.push_back(i + 1 < data.size() ? alphabet[(chunk >> 6) & 63] : '=');
        out.push_back(i + 2 < data.size() ? alphabet[chunk & 63] : '=');
    }
    return out;
}

// Uncompressed 24-bit BMP; universally decodable raster for the underlay.
std::vector<std::uint8_t> encode_bmp(const ScalarField& img) {
    const int w = img.width();
    const int h = img.height();
    const int row_bytes = (3 * w + 3) / 4 * 4;
    const std::uint32_t pixel_bytes = static_cast<std::uint32_t>(row_bytes) * static_cast<std::uint32_t>(h);
    const std::uint32_t file_size = 54 + pixel_bytes;

    std::vector<std::uint8_t> out(file_size, 0);
    auto put32 = [&](std::size_t off, std::uint32_t v) {
        out[off] = static_cast<std::uint8_t>(v & 0xff);
        out[off + 1] = static_cast<std::uint8_t>((v >> 8) & 0xff);
        out[off + 2] = static_cast<std::uint8_t>((v >> 16) & 0xff);
        out[off + 3] = static_cast<std::uint8_t>((v >> 24) & 0xff);
    };
    out[0] = 'B';
    out[1] = 'M';
    put32(2, file_size);
    put32(10, 54);
    put32(14, 40);
    put32(18, static_cast<std::uint32_t>(w));
    put32(22, static_cast<std::uint32_t>(h));
    out[26] = 1;            // planes
    out[28] = 24;           // bits per pixel
    put32(34, pixel_bytes);

    for (int y = 0; y < h; ++y) {
        // BMP rows run bottom-up.
        const std::size_t row_off = 54 + static_cast<std::size_t>(h - 1 - y) * static_cast<std::size_t>(row_bytes);
        for (int x = 0; x < w; ++x) {
            const double v = std::clamp(img.at(x, y), 0.0, 1.0);
            const auto byte = static_cast<std::uint8_t>(std::lround(v * 255.0));
            out[row_off + 3 * static_cast<std::size_t>(x)] = byte;
            out[row_off + 3 * static_cast<std::size_t>(x) + 1] = byte;
            out[row_off + 3 * static_cast<std::size_t>(x) + 2] = byte;
        }
    }
    return out;
}

} // namespace

std::string curve_svg(const PiecewiseCurve& curve) {
    std::string out = svg_header(control_net_bounds(curve));
    out += "<path stroke=\"#1f77b4\" d=\"" + path_data(curve) + "\"/>\n";
    out += "</g>\n</svg>\n";
    return out;
}

std::string trajectory_svg(const Trajectory& traj, int every) {
    if (every < 1)
        throw ArgumentError("svg iterate stride must be at least 1");
    std::vector<std::size_t> picks;
    for (std::size_t k = 0; k < traj.iterates.size(); k += static_cast<std::size_t>(every))
        picks.push_back(k);
    if (picks.empty() || picks.back() != traj.iterates.size() - 1)
        picks.push_back(traj.iterates.size() - 1);

    Bounds b = control_net_bounds(traj.iterates.front().curve);
    for (std::size_t k : picks)
        b = merge(b, control_net_bounds(traj.iterates[k].curve));

    std::string out = svg_header(b);
    for (std::size_t n = 0; n < picks.size(); ++n) {
        const double opacity =
            picks.size() == 1 ? 1.0
                              : 0.15 + 0.85 * static_cast<double>(n) /
                                           static_cast<double>(picks.size() - 1);
        out += "<path stroke=\"#1f77b4\" stroke-opacity=\"" + format_double(opacity) + "\" d=\"" +
               path_data(traj.iterates[picks[n]].curve) + "\"/>\n";
    }
    out += "</g>\n</svg>\n";
    return out;
}

std::string segmentation_svg(const ScalarField& image, const PiecewiseCurve& contour) {
    const int w = image.width();
    const int h = image.height();
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += kRasterComment;
    // Pixel coordinates throughout, origin top-left as in the image.
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + std::to_string(w) + " " +
           std::to_string(h) + "\">\n";
    out += "<image x=\"0\" y=\"0\" width=\"" + std::to_string(w) + "\" height=\"" +
           std::to_string(h) + "\" image-rendering=\"pixelated\" href=\"data:image/bmp;base64," +
           base64_encode(encode_bmp(image)) + "\"/>\n";
    out += "<path fill=\"none\" stroke=\"#d62728\" stroke-width=\"" +
           format_double(0.004 * std::max(w, h)) + "\" d=\"" + path_data(contour) + "\"/>\n";
    out += "</svg>\n";
    return out;
}

} // namespace bezflow
