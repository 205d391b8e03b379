#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "lacircle/image.hpp"
#include "lacircle/random.hpp"

namespace lacircle {

/// Canny parameters. Thresholds are fractions of the largest gradient
/// magnitude in the image.
struct EdgeConfig {
    double blur_sigma = 1.4;
    double low_thresh = 0.1;
    double high_thresh = 0.3;
};

/// Binary edge mask together with the scan-ordered list of its set pixels.
class EdgeMap {
public:
    EdgeMap() = default;
    /// bits is row-major, non-zero meaning edge.
    EdgeMap(int width, int height, std::vector<std::uint8_t> bits);

    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] int height() const noexcept { return height_; }
    [[nodiscard]] std::size_t count() const noexcept { return points_.size(); }

    [[nodiscard]] bool is_edge(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_ &&
               bits_[static_cast<std::size_t>(y) * width_ + x] != 0;
    }

    [[nodiscard]] std::span<const std::uint8_t> bits() const noexcept { return bits_; }
    /// Row-major scan order.
    [[nodiscard]] std::span<const Point> edge_points() const noexcept { return points_; }

    friend bool operator==(const EdgeMap& a, const EdgeMap& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.bits_ == b.bits_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
    std::vector<Point> points_;
};

/// Canny: Gaussian smoothing, Sobel gradient, non-maximum suppression and
/// hysteresis. Produces no edges for a constant image.
[[nodiscard]] EdgeMap detect_edges(const GrayImage& img, const EdgeConfig& cfg = {});

/// Reads a P4 bitmap (1 = edge). A JSON sidecar next to it, if present, must agree.
[[nodiscard]] EdgeMap load_edge_map(const std::filesystem::path& path);

/// Writes the P4 bitmap and its {width, height, count} JSON sidecar.
void save_edge_map(const EdgeMap& edges, const std::filesystem::path& path);

/// Sidecar location for an edge-map path: the full name with ".json" appended.
[[nodiscard]] std::filesystem::path edge_sidecar_path(const std::filesystem::path& pbm_path);

/// Random subset of the edge points used to form triplets.
struct SampledPoints {
    std::vector<Point> points;
    std::optional<std::uint64_t> source_seed;

    [[nodiscard]] std::size_t count() const noexcept { return points.size(); }
};

/// Number of points drawn for a given fraction: ceil(fraction * total).
[[nodiscard]] std::size_t sample_size(std::size_t total, double fraction);

/// Uniform sampling without replacement (partial Fisher-Yates) of
/// sample_size(count, fraction) edge points. Throws TooFewEdgePoints when
/// fewer than three points would be drawn.
[[nodiscard]] SampledPoints sample_edge_points(const EdgeMap& edges, double fraction, Rng& rng);
[[nodiscard]] SampledPoints sample_edge_points(const EdgeMap& edges, double fraction,
                                               std::uint64_t seed);

}  // namespace lacircle
