#include "nhse/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nhse::geometry {

namespace {

double cross(Point o, Point a, Point b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
}

double segment_distance(Point a, Point b, Point z) {
    const Point ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(z - a);
    const double s = std::clamp(((z - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    return std::abs(z - (a + s * ab));
}

} // namespace

double signed_area(const std::vector<Point>& c) {
    if (c.size() < 3) return 0.0;
    const Point o = c.front();
    double twice = 0.0;
    for (std::size_t i = 1; i + 1 < c.size(); ++i) twice += cross(o, c[i], c[i + 1]);
    return 0.5 * twice;
}

int winding(const std::vector<Point>& c, Point z) {
    const std::size_t n = c.size();
    int w = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = c[i], b = c[(i + 1) % n];
        if (a.imag() <= z.imag()) {
            if (b.imag() > z.imag() && cross(a, b, z) > 0.0) ++w;
        } else if (b.imag() <= z.imag() && cross(a, b, z) < 0.0) {
            --w;
        }
    }
    return w;
}

double distance(const std::vector<Point>& c, Point z) {
    const std::size_t n = c.size();
    if (n == 0) return std::numeric_limits<double>::infinity();
    if (n == 1) return std::abs(z - c.front());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) best = std::min(best, segment_distance(c[i], c[(i + 1) % n], z));
    return best;
}

std::vector<Point> convex_hull(std::vector<Point> p) {
    auto less = [](Point a, Point b) { return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag()); };
    std::sort(p.begin(), p.end(), less);
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.size() < 3) return p;

    std::vector<Point> hull(2 * p.size());
    std::size_t k = 0;
    for (const auto& q : p) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], q) <= 0.0) --k;
        hull[k++] = q;
    }
    for (std::size_t i = p.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], p[i]) <= 0.0) --k;
        hull[k++] = p[i];
    }
    hull.resize(k - 1);
    return hull;
}

double diameter(const std::vector<Point>& points) {
    const auto hull = convex_hull(points);
    double best = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i)
        for (std::size_t j = i + 1; j < hull.size(); ++j) best = std::max(best, std::abs(hull[i] - hull[j]));
    return best;
}

} // namespace nhse::geometry
