#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "lacircle/image.hpp"

namespace lacircle {

/// Circle parameters in pixels: centre (x0, y0) and radius r.
struct Circle {
    double x0 = 0.0;
    double y0 = 0.0;
    double r = 0.0;

    friend bool operator==(const Circle&, const Circle&) = default;
};

/// Round half away from zero.
[[nodiscard]] inline long long round_pixel(double v) noexcept { return std::llround(v); }

/// An automaton action: a circle through three sampled edge points.
struct CandidateCircle {
    std::size_t i = 0;
    std::size_t j = 0;
    std::size_t k = 0;
    Circle circle;
    /// Largest |dist(centre, p_d) - r| over the three source points.
    double max_deviation = 0.0;
};

/// Circumscribed circle of three integer points. The centre uses the
/// determinant form with an exact integer collinearity test; r is the mean of
/// the three centre-to-point distances. Throws CollinearPoints.
[[nodiscard]] CandidateCircle circle_through(Point pi, Point pj, Point pk);

/// Same, taking indices into a point list and recording them on the result.
[[nodiscard]] CandidateCircle circle_from_triplet(std::span<const Point> points, std::size_t i,
                                                  std::size_t j, std::size_t k);

/// Unique in-bounds perimeter pixels of a rasterized circle.
struct PerimeterSet {
    std::vector<Point> points;  // sorted by (x, y)
    std::size_t clipped = 0;    // unique ideal pixels that fell outside the image

    [[nodiscard]] std::size_t count() const noexcept { return points.size(); }
    [[nodiscard]] std::size_t ideal_count() const noexcept { return points.size() + clipped; }
    [[nodiscard]] double clipped_fraction() const noexcept {
        return ideal_count() == 0 ? 0.0
                                  : static_cast<double>(clipped) / static_cast<double>(ideal_count());
    }
};

/// Every unique pixel the midpoint circle algorithm produces for the rounded
/// centre and radius, without clipping. Requires round(r) >= 1.
[[nodiscard]] std::vector<Point> midpoint_circle(long long cx, long long cy, long long radius);

/// Midpoint rasterization clipped to [0,width) x [0,height).
/// Throws EmptyPerimeter when nothing remains; std::invalid_argument if r < 1.
[[nodiscard]] PerimeterSet rasterize_circle(const Circle& c, int width, int height);

/// L1 distance between two parameter triples.
[[nodiscard]] inline double distinctiveness(const Circle& a, const Circle& b) noexcept {
    return std::abs(a.x0 - b.x0) + std::abs(a.y0 - b.y0) + std::abs(a.r - b.r);
}

/// (r_max - r_min) / s. Throws std::invalid_argument unless r_max > r_min and s > 0.
[[nodiscard]] double distinctiveness_threshold(double r_min, double r_max, double sensitivity);

}  // namespace lacircle
