#include "lacircle/geometry.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include "lacircle/errors.hpp"

namespace lacircle {

CandidateCircle circle_through(Point pi, Point pj, Point pk) {
    const std::int64_t dxj = pj.x - pi.x;
    const std::int64_t dyj = pj.y - pi.y;
    const std::int64_t dxk = pk.x - pi.x;
    const std::int64_t dyk = pk.y - pi.y;

    const std::int64_t denom = 4 * (dxj * dyk - dxk * dyj);
    if (denom == 0) {
        throw CollinearPoints();
    }

    auto sq = [](Point p) {
        return static_cast<std::int64_t>(p.x) * p.x + static_cast<std::int64_t>(p.y) * p.y;
    };
    const std::int64_t sj = sq(pj) - sq(pi);
    const std::int64_t sk = sq(pk) - sq(pi);

    const std::int64_t det_a = sj * (2 * dyk) - sk * (2 * dyj);
    const std::int64_t det_b = (2 * dxj) * sk - (2 * dxk) * sj;

    CandidateCircle c;
    c.circle.x0 = static_cast<double>(det_a) / static_cast<double>(denom);
    c.circle.y0 = static_cast<double>(det_b) / static_cast<double>(denom);

    double d[3];
    const Point pts[3] = {pi, pj, pk};
    for (int n = 0; n < 3; ++n) {
        d[n] = std::hypot(c.circle.x0 - pts[n].x, c.circle.y0 - pts[n].y);
    }
    // Sorted summation keeps r independent of argument order.
    std::sort(d, d + 3);
    c.circle.r = (d[0] + d[1] + d[2]) / 3.0;
    c.max_deviation = std::max(c.circle.r - d[0], d[2] - c.circle.r);
    return c;
}

CandidateCircle circle_from_triplet(std::span<const Point> points, std::size_t i, std::size_t j,
                                    std::size_t k) {
    if (i >= points.size() || j >= points.size() || k >= points.size()) {
        throw std::out_of_range("circle_from_triplet: index out of range");
    }
    auto c = circle_through(points[i], points[j], points[k]);
    c.i = i;
    c.j = j;
    c.k = k;
    return c;
}

std::vector<Point> midpoint_circle(long long cx, long long cy, long long radius) {
    if (radius < 1) {
        throw std::invalid_argument("midpoint_circle: radius must be >= 1");
    }
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(8 * radius + 8));
    auto plot8 = [&](long long x, long long y) {
        const long long ox[8] = {x, y, -y, -x, -x, -y, y, x};
        const long long oy[8] = {y, x, x, y, -y, -x, -x, -y};
        for (int n = 0; n < 8; ++n) {
            pts.push_back({static_cast<int>(cx + ox[n]), static_cast<int>(cy + oy[n])});
        }
    };

    // First octant from (r, 0) upward, reflected eight ways.
    long long x = radius;
    long long y = 0;
    long long decision = 1 - radius;
    while (y <= x) {
        plot8(x, y);
        ++y;
        if (decision < 0) {
            decision += 2 * y + 1;
        } else {
            --x;
            decision += 2 * (y - x) + 1;
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

PerimeterSet rasterize_circle(const Circle& c, int width, int height) {
    if (!(c.r >= 1.0)) {
        throw std::invalid_argument("rasterize_circle: radius must be >= 1");
    }
    const auto ideal = midpoint_circle(round_pixel(c.x0), round_pixel(c.y0), round_pixel(c.r));
    PerimeterSet out;
    out.points.reserve(ideal.size());
    for (const Point& p : ideal) {
        if (p.x >= 0 && p.y >= 0 && p.x < width && p.y < height) {
            out.points.push_back(p);
        } else {
            ++out.clipped;
        }
    }
    if (out.points.empty()) {
        throw EmptyPerimeter();
    }
    return out;
}

double distinctiveness_threshold(double r_min, double r_max, double sensitivity) {
    if (!(r_max > r_min) || !(sensitivity > 0.0)) {
        throw std::invalid_argument("distinctiveness_threshold: need r_max > r_min and s > 0");
    }
    return (r_max - r_min) / sensitivity;
}

}  // namespace lacircle
