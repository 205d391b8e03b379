#include "lacircle/edges.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "lacircle/errors.hpp"

namespace lacircle {

namespace {

using FloatPlane = std::vector<float>;

int clamp_index(int v, int hi) { return std::clamp(v, 0, hi - 1); }

std::vector<float> gaussian_kernel(double sigma) {
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<float> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double w = std::exp(-(i * i) / (2.0 * sigma * sigma));
        kernel[i + radius] = static_cast<float>(w);
        sum += w;
    }
    for (auto& w : kernel) w = static_cast<float>(w / sum);
    return kernel;
}

// Separable blur with clamp-to-edge borders.
FloatPlane blur(const FloatPlane& src, int w, int h, double sigma) {
    if (sigma <= 0.0) return src;
    const auto kernel = gaussian_kernel(sigma);
    const int radius = static_cast<int>(kernel.size() / 2);

    FloatPlane tmp(src.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            float acc = 0.0f;
            for (int k = -radius; k <= radius; ++k) {
                acc += kernel[k + radius] * src[y * w + clamp_index(x + k, w)];
            }
            tmp[y * w + x] = acc;
        }
    }
    FloatPlane out(src.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            float acc = 0.0f;
            for (int k = -radius; k <= radius; ++k) {
                acc += kernel[k + radius] * tmp[clamp_index(y + k, h) * w + x];
            }
            out[y * w + x] = acc;
        }
    }
    return out;
}

// Orientation bins: 0 horizontal gradient, 1 diagonal down-right,
// 2 vertical, 3 diagonal down-left. Offsets point along the gradient.
constexpr int kOffsets[4][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}};

int orientation_bin(float gx, float gy) {
    double angle = std::atan2(static_cast<double>(gy), static_cast<double>(gx));
    if (angle < 0.0) angle += std::numbers::pi;
    const int bin = static_cast<int>(std::floor((angle + std::numbers::pi / 8.0) /
                                                (std::numbers::pi / 4.0)));
    return bin % 4;
}

}  // namespace

EdgeMap::EdgeMap(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
    if (width <= 0 || height <= 0) {
        throw std::invalid_argument("EdgeMap: dimensions must be positive");
    }
    if (bits_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw std::invalid_argument("EdgeMap: bits length does not match width*height");
    }
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            auto& b = bits_[static_cast<std::size_t>(y) * width + x];
            if (b != 0) {
                b = 1;
                points_.push_back({x, y});
            }
        }
    }
}

EdgeMap detect_edges(const GrayImage& img, const EdgeConfig& cfg) {
    if (img.empty()) {
        throw std::invalid_argument("detect_edges: empty image");
    }
    if (!(cfg.low_thresh >= 0.0 && cfg.low_thresh <= cfg.high_thresh)) {
        throw std::invalid_argument("detect_edges: require 0 <= low_thresh <= high_thresh");
    }
    const int w = img.width();
    const int h = img.height();
    const std::size_t n = static_cast<std::size_t>(w) * h;

    FloatPlane plane(n);
    std::transform(img.data().begin(), img.data().end(), plane.begin(),
                   [](std::uint8_t v) { return static_cast<float>(v); });
    plane = blur(plane, w, h, cfg.blur_sigma);

    FloatPlane gx(n), gy(n), mag(n);
    float max_mag = 0.0f;
    auto px = [&](int x, int y) { return plane[clamp_index(y, h) * w + clamp_index(x, w)]; };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const float dx = (px(x + 1, y - 1) + 2.0f * px(x + 1, y) + px(x + 1, y + 1)) -
                             (px(x - 1, y - 1) + 2.0f * px(x - 1, y) + px(x - 1, y + 1));
            const float dy = (px(x - 1, y + 1) + 2.0f * px(x, y + 1) + px(x + 1, y + 1)) -
                             (px(x - 1, y - 1) + 2.0f * px(x, y - 1) + px(x + 1, y - 1));
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            gx[i] = dx;
            gy[i] = dy;
            mag[i] = std::sqrt(dx * dx + dy * dy);
            max_mag = std::max(max_mag, mag[i]);
        }
    }

    std::vector<std::uint8_t> bits(n, 0);
    // Blurring leaves float residue on flat images; treat it as no gradient.
    if (max_mag <= 1e-3f) {
        return EdgeMap(w, h, std::move(bits));
    }
    for (auto& m : mag) m /= max_mag;

    auto mag_at = [&](int x, int y) {
        return img.contains(x, y) ? mag[static_cast<std::size_t>(y) * w + x] : 0.0f;
    };

    // Non-maximum suppression. The >= / > asymmetry keeps exactly one pixel
    // when two neighbours tie across a step.
    FloatPlane thin(n, 0.0f);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            const float m = mag[i];
            if (m < static_cast<float>(cfg.low_thresh) || m == 0.0f) continue;
            const auto& off = kOffsets[orientation_bin(gx[i], gy[i])];
            if (m >= mag_at(x + off[0], y + off[1]) && m > mag_at(x - off[0], y - off[1])) {
                thin[i] = m;
            }
        }
    }

    // Hysteresis: grow strong pixels through 8-connected weak ones.
    const auto high = static_cast<float>(cfg.high_thresh);
    const auto low = static_cast<float>(cfg.low_thresh);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < n; ++i) {
        if (thin[i] > 0.0f && thin[i] >= high) {
            bits[i] = 1;
            stack.push_back(i);
        }
    }
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        const int x = static_cast<int>(i % w);
        const int y = static_cast<int>(i / w);
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const int nx = x + dx;
                const int ny = y + dy;
                if (!img.contains(nx, ny)) continue;
                const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
                if (bits[j] == 0 && thin[j] > 0.0f && thin[j] >= low) {
                    bits[j] = 1;
                    stack.push_back(j);
                }
            }
        }
    }
    return EdgeMap(w, h, std::move(bits));
}

std::filesystem::path edge_sidecar_path(const std::filesystem::path& pbm_path) {
    auto sidecar = pbm_path;
    sidecar += ".json";
    return sidecar;
}

EdgeMap load_edge_map(const std::filesystem::path& path) {
    const auto bytes = detail::read_file(path);
    detail::PnmHeader header;
    try {
        header = detail::parse_pnm_header(bytes);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    if (header.kind != '4') {
        throw FormatError(path.string() + ": edge maps must be binary PBM (P4)");
    }
    if (header.width <= 0 || header.height <= 0) {
        throw FormatError(path.string() + ": zero-dimension edge map");
    }
    const std::size_t row_bytes = (static_cast<std::size_t>(header.width) + 7) / 8;
    if (bytes.size() < header.offset + row_bytes * header.height) {
        throw FormatError(path.string() + ": truncated PBM raster");
    }
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(header.width) * header.height);
    for (int y = 0; y < header.height; ++y) {
        const auto* row = bytes.data() + header.offset + row_bytes * y;
        for (int x = 0; x < header.width; ++x) {
            bits[static_cast<std::size_t>(y) * header.width + x] =
                (row[x / 8] >> (7 - x % 8)) & 1u;
        }
    }
    EdgeMap edges(header.width, header.height, std::move(bits));

    const auto sidecar = edge_sidecar_path(path);
    if (std::filesystem::exists(sidecar)) {
        const auto text = detail::read_file(sidecar);
        nlohmann::json meta = nlohmann::json::parse(text.begin(), text.end(), nullptr, false);
        if (meta.is_discarded() || !meta.is_object()) {
            throw FormatError(sidecar.string() + ": malformed sidecar JSON");
        }
        if (meta.value("width", edges.width()) != edges.width() ||
            meta.value("height", edges.height()) != edges.height() ||
            meta.value("count", edges.count()) != edges.count()) {
            throw FormatError(sidecar.string() + ": sidecar does not match " + path.string());
        }
    }
    return edges;
}

void save_edge_map(const EdgeMap& edges, const std::filesystem::path& path) {
    const std::string header =
        "P4\n" + std::to_string(edges.width()) + " " + std::to_string(edges.height()) + "\n";
    const std::size_t row_bytes = (static_cast<std::size_t>(edges.width()) + 7) / 8;
    std::vector<std::uint8_t> bytes(header.begin(), header.end());
    const std::size_t raster = bytes.size();
    bytes.resize(raster + row_bytes * edges.height(), 0);
    for (const Point& p : edges.edge_points()) {
        bytes[raster + row_bytes * p.y + p.x / 8] |= static_cast<std::uint8_t>(0x80u >> (p.x % 8));
    }
    detail::write_file(path, bytes);

    const nlohmann::json meta = {
        {"width", edges.width()}, {"height", edges.height()}, {"count", edges.count()}};
    const std::string text = meta.dump(2) + "\n";
    detail::write_file(edge_sidecar_path(path),
                       {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

std::size_t sample_size(std::size_t total, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw std::invalid_argument("sampling fraction must lie in (0, 1]");
    }
    // The epsilon absorbs products such as 0.05 * 200 landing a hair above 10.
    const double wanted = std::ceil(fraction * static_cast<double>(total) - 1e-9);
    return std::min(total, static_cast<std::size_t>(std::max(0.0, wanted)));
}

SampledPoints sample_edge_points(const EdgeMap& edges, double fraction, Rng& rng) {
    const std::size_t total = edges.count();
    const std::size_t n = sample_size(total, fraction);
    if (n < 3) {
        throw TooFewEdgePoints("sampling " + std::to_string(fraction) + " of " +
                               std::to_string(total) + " edge points leaves " +
                               std::to_string(n) + " (< 3)");
    }
    std::vector<std::size_t> order(total);
    for (std::size_t i = 0; i < total; ++i) order[i] = i;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(uniform_below(rng, total - i));
        std::swap(order[i], order[j]);
    }
    SampledPoints out;
    out.points.reserve(n);
    const auto src = edges.edge_points();
    for (std::size_t i = 0; i < n; ++i) out.points.push_back(src[order[i]]);
    return out;
}

SampledPoints sample_edge_points(const EdgeMap& edges, double fraction, std::uint64_t seed) {
    Rng rng(seed);
    auto out = sample_edge_points(edges, fraction, rng);
    out.source_seed = seed;
    return out;
}

}  // namespace lacircle
