#pragma once

#include <complex>
#include <vector>

namespace nhse::geometry {

using Point = std::complex<double>;

/// Signed shoelace area of a closed polyline (last point joins the first).
double signed_area(const std::vector<Point>& curve);

/// Winding number of a closed polyline around z (crossing rule).
int winding(const std::vector<Point>& curve, Point z);

/// Distance from z to the closed polyline.
double distance(const std::vector<Point>& curve, Point z);

/// Convex hull, counter-clockwise, collinear points dropped.
std::vector<Point> convex_hull(std::vector<Point> points);

/// Largest pairwise distance.
double diameter(const std::vector<Point>& points);

} // namespace nhse::geometry
