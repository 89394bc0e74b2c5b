#pragma once

// Sampled boundary curves: arclength, curvature, enclosed area, and quadrature along
// the curve. The points are interpolated by a cubic spline in the cumulative chord
// length; all integrals are taken on the spline with Gauss-Legendre nodes per segment.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "magspec/point.hpp"

namespace magspec {

struct CurveNode {
    Point2 position;
    double s = 0.0;
    double curvature = 0.0;
    double weight = 0.0;  // quadrature weight in arclength
};

struct CurveSample {
    Point2 position;
    double s = 0.0;          // arclength from the first sample
    double curvature = 0.0;  // signed, > 0 on a counterclockwise convex curve
};

// Which side of the curve the domain lies on. For a counterclockwise curve the interior
// is on the left; an exterior domain sees the curvature with the opposite sign, so
// that the tubular Jacobian 1 - t k(s) is positive for small t inside the domain.
enum class DomainSide { Interior, Exterior };

class BoundaryCurve {
public:
    const std::vector<CurveSample>& samples() const { return samples_; }
    double length() const { return length_; }
    double enclosed_area() const { return area_; }
    bool closed() const { return closed_; }
    // True when the input points were clockwise and have been reversed.
    bool reversed() const { return reversed_; }

    // Spline evaluation at arclength s (wrapped into [0, length) on closed curves).
    Point2 position(double s) const;
    Point2 unit_tangent(double s) const;
    // Unit normal pointing into the enclosed region (left of the direction of travel).
    Point2 inward_normal(double s) const;
    double curvature(double s) const;
    double curvature(double s, DomainSide side) const;

    // Integral of g(position, s, curvature) ds along the whole curve.
    double integrate(const std::function<double(Point2, double, double)>& g,
                     std::size_t order = 8) const;
    // Gauss-Legendre nodes along the curve, `order` per spline segment.
    std::vector<CurveNode> quadrature(std::size_t order = 8) const;

    double total_curvature() const;

private:
    friend BoundaryCurve curve_from_parametrization(const std::vector<Point2>&, bool);
    struct Spline;

    std::vector<CurveSample> samples_;
    double length_ = 0.0;
    double area_ = 0.0;
    bool closed_ = true;
    bool reversed_ = false;
    std::shared_ptr<const Spline> spline_;
};

// Builds the curve through `points` (>= 16, simple). Closed curves are normalized to
// counterclockwise orientation. Throws GeometryError on self-intersection and
// ConfigError on too few or repeated points.
BoundaryCurve curve_from_parametrization(const std::vector<Point2>& points, bool closed = true);

// Plain-text curve: one "x y" pair per line, whitespace separated, decimal point;
// blank lines and lines starting with '#' are skipped.
std::vector<Point2> read_curve_points(std::istream& in);
std::vector<Point2> read_curve_file(const std::string& path);

std::vector<Point2> circle_points(double radius, std::size_t count, Point2 center = {});
// Ellipse x = a cos(theta), y = b sin(theta), uniform in theta.
std::vector<Point2> ellipse_points(double a, double b, std::size_t count);

}  // namespace magspec
