#include "magspec/geometry.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>

#include "magspec/errors.hpp"
#include "magspec/quadrature.hpp"

namespace magspec {

namespace {

constexpr std::size_t kMinCurvePoints = 16;
constexpr std::size_t kArclengthOrder = 10;

struct Derivs {
    Point2 p, d1, d2;
};

double orientation(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

bool on_segment(Point2 a, Point2 b, Point2 p) {
    return std::min(a.x1, b.x1) <= p.x1 && p.x1 <= std::max(a.x1, b.x1) &&
           std::min(a.x2, b.x2) <= p.x2 && p.x2 <= std::max(a.x2, b.x2);
}

bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
    const double o1 = orientation(a, b, c), o2 = orientation(a, b, d);
    const double o3 = orientation(c, d, a), o4 = orientation(c, d, b);
    if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0)))
        return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

void check_simple(const std::vector<Point2>& p, bool closed) {
    const std::size_t n = p.size();
    const std::size_t segs = closed ? n : n - 1;
    for (std::size_t i = 0; i < segs; ++i) {
        const Point2 a = p[i], b = p[(i + 1) % n];
        for (std::size_t j = i + 2; j < segs; ++j) {
            if (closed && i == 0 && j == segs - 1) continue;  // shares the closing vertex
            const Point2 c = p[j], d = p[(j + 1) % n];
            if (std::max(a.x1, b.x1) < std::min(c.x1, d.x1) ||
                std::max(c.x1, d.x1) < std::min(a.x1, b.x1) ||
                std::max(a.x2, b.x2) < std::min(c.x2, d.x2) ||
                std::max(c.x2, d.x2) < std::min(a.x2, b.x2))
                continue;
            if (segments_intersect(a, b, c, d))
                throw GeometryError("self-intersection between segments " + std::to_string(i) +
                                    " and " + std::to_string(j));
        }
    }
}

double polygon_signed_area(const std::vector<Point2>& p) {
    double a = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) a += cross(p[i], p[(i + 1) % p.size()]);
    return 0.5 * a;
}

}  // namespace

// Cubic spline x(tau), y(tau) in the cumulative chord length tau; periodic for closed
// curves, natural for open ones.
struct BoundaryCurve::Spline {
    bool closed = true;
    std::vector<double> tau;      // knots, size segments + 1
    std::vector<Point2> value;    // at knots
    std::vector<Point2> second;   // second derivatives at knots
    std::vector<double> s_knot;   // arclength at knots
    QuadratureRule unit_rule = gauss_legendre(kArclengthOrder, 0.0, 1.0);

    std::size_t segments() const { return tau.size() - 1; }

    Derivs eval(std::size_t k, double t) const {
        const double h = tau[k + 1] - tau[k];
        const double A = tau[k + 1] - t, B = t - tau[k];
        const Point2 Mi = second[k], Mj = second[k + 1];
        const Point2 C = (1.0 / h) * value[k] - (h / 6.0) * Mi;
        const Point2 D = (1.0 / h) * value[k + 1] - (h / 6.0) * Mj;
        Derivs r;
        r.p = (A * A * A / (6.0 * h)) * Mi + (B * B * B / (6.0 * h)) * Mj + A * C + B * D;
        r.d1 = (-A * A / (2.0 * h)) * Mi + (B * B / (2.0 * h)) * Mj + D - C;
        r.d2 = (A / h) * Mi + (B / h) * Mj;
        return r;
    }

    double speed(std::size_t k, double t) const { return norm(eval(k, t).d1); }

    // Arclength from tau[k] to t within segment k.
    double partial_length(std::size_t k, double t) const {
        const double a = tau[k], w = t - a;
        double sum = 0.0;
        for (std::size_t q = 0; q < unit_rule.size(); ++q)
            sum += unit_rule.weights[q] * speed(k, a + w * unit_rule.nodes[q]);
        return sum * w;
    }

    double total() const { return s_knot.back(); }

    // Curvature from the degree-5 interpolant through the six knots nearest to segment
    // k; fourth order in the knot spacing, where the spline's own second derivative is
    // only second order.
    double local_curvature(std::size_t k, double t) const {
        constexpr int kStencil = 8;
        const auto segs = static_cast<long>(segments());
        const long nknots = closed ? segs : segs + 1;
        long first = static_cast<long>(k) - kStencil / 2 + 1;
        if (!closed) first = std::clamp(first, 0L, nknots - kStencil);
        double x[kStencil];
        Point2 y[kStencil];
        const double period = tau.back();
        for (int j = 0; j < kStencil; ++j) {
            long idx = first + j;
            double shift = 0.0;
            if (closed) {
                while (idx < 0) { idx += segs; shift -= period; }
                while (idx >= segs) { idx -= segs; shift += period; }
            }
            x[j] = tau[static_cast<std::size_t>(idx)] + shift;
            y[j] = value[static_cast<std::size_t>(idx)];
        }
        // Newton divided differences, then value/first/second derivative by Horner
        Point2 c[kStencil];
        for (int j = 0; j < kStencil; ++j) c[j] = y[j];
        for (int l = 1; l < kStencil; ++l)
            for (int j = kStencil - 1; j >= l; --j)
                c[j] = (1.0 / (x[j] - x[j - l])) * (c[j] - c[j - 1]);
        Point2 p0 = c[kStencil - 1], p1{}, p2{};
        for (int j = kStencil - 2; j >= 0; --j) {
            const double dt = t - x[j];
            p2 = dt * p2 + 2.0 * p1;
            p1 = dt * p1 + p0;
            p0 = dt * p0 + c[j];
        }
        const double sp = norm(p1);
        return cross(p1, p2) / (sp * sp * sp);
    }

    // (segment, tau) at arclength s.
    std::pair<std::size_t, double> locate(double s) const {
        const double L = total();
        if (closed) {
            s = std::fmod(s, L);
            if (s < 0) s += L;
        } else if (s < 0.0 || s > L) {
            throw ExtrapolationError("arclength " + std::to_string(s) + " outside open curve [0, " +
                                     std::to_string(L) + "]");
        }
        auto it = std::upper_bound(s_knot.begin(), s_knot.end(), s);
        std::size_t k = it == s_knot.begin() ? 0 : static_cast<std::size_t>(it - s_knot.begin()) - 1;
        k = std::min(k, segments() - 1);
        const double target = s - s_knot[k];
        const double seg_len = s_knot[k + 1] - s_knot[k];
        const double h = tau[k + 1] - tau[k];
        double t = tau[k] + h * target / seg_len;
        for (int it_n = 0; it_n < 30; ++it_n) {
            const double f = partial_length(k, t) - target;
            const double step = f / speed(k, t);
            t = std::clamp(t - step, tau[k], tau[k + 1]);
            if (std::abs(step) < 1e-15 * (1.0 + std::abs(t))) break;
        }
        return {k, t};
    }
};

namespace {

std::vector<Point2> solve_second_derivatives(const std::vector<double>& tau,
                                             const std::vector<Point2>& v, bool closed) {
    const std::size_t segs = tau.size() - 1;
    const std::size_t n = closed ? segs : segs + 1;
    auto hs = [&](std::size_t i) { return tau[i + 1] - tau[i]; };
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rx = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    Eigen::VectorXd ry = rx;
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<int>(i);
        if (!closed && (i == 0 || i == n - 1)) {
            trip.emplace_back(ii, ii, 1.0);
            continue;
        }
        const std::size_t im = closed ? (i + segs - 1) % segs : i - 1;
        const std::size_t ip = closed ? (i + 1) % segs : i + 1;
        const double hm = hs(im), hp = hs(i);
        trip.emplace_back(ii, static_cast<int>(im), hm);
        trip.emplace_back(ii, ii, 2.0 * (hm + hp));
        trip.emplace_back(ii, static_cast<int>(ip), hp);
        // v[i + 1] equals v[0] on the closing segment
        const Point2 slope_p = (1.0 / hp) * (v[i + 1] - v[i]);
        const Point2 slope_m = (1.0 / hm) * (v[closed && i == 0 ? segs : i] - v[im]);
        rx[ii] = 6.0 * (slope_p.x1 - slope_m.x1);
        ry[ii] = 6.0 * (slope_p.x2 - slope_m.x2);
    }
    Eigen::SparseMatrix<double> A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw NumericalError("spline system factorization failed");
    const Eigen::VectorXd mx = lu.solve(rx), my = lu.solve(ry);
    std::vector<Point2> m(segs + 1);
    for (std::size_t i = 0; i < n; ++i) m[i] = {mx[static_cast<Eigen::Index>(i)], my[static_cast<Eigen::Index>(i)]};
    if (closed) m[segs] = m[0];
    return m;
}

}  // namespace

BoundaryCurve curve_from_parametrization(const std::vector<Point2>& points, bool closed) {
    std::vector<Point2> p = points;
    if (closed && p.size() > 1 && p.front() == p.back()) p.pop_back();
    if (p.size() < kMinCurvePoints)
        throw ConfigError("curve needs at least " + std::to_string(kMinCurvePoints) +
                          " points, got " + std::to_string(p.size()));
    for (const Point2& q : p)
        if (!std::isfinite(q.x1) || !std::isfinite(q.x2)) throw ConfigError("non-finite curve point");
    const std::size_t n = p.size();
    const std::size_t segs = closed ? n : n - 1;
    for (std::size_t i = 0; i < segs; ++i)
        if (norm(p[(i + 1) % n] - p[i]) == 0.0)
            throw ConfigError("repeated consecutive curve point at index " + std::to_string(i));
    check_simple(p, closed);

    BoundaryCurve c;
    c.closed_ = closed;
    if (closed && polygon_signed_area(p) < 0.0) {
        std::reverse(p.begin() + 1, p.end());
        c.reversed_ = true;
    }

    auto sp = std::make_shared<BoundaryCurve::Spline>();
    sp->closed = closed;
    sp->value = p;
    if (closed) sp->value.push_back(p.front());
    sp->tau.assign(segs + 1, 0.0);
    for (std::size_t i = 0; i < segs; ++i)
        sp->tau[i + 1] = sp->tau[i] + norm(sp->value[i + 1] - sp->value[i]);
    sp->second = solve_second_derivatives(sp->tau, sp->value, closed);
    sp->s_knot.assign(segs + 1, 0.0);
    for (std::size_t k = 0; k < segs; ++k)
        sp->s_knot[k + 1] = sp->s_knot[k] + sp->partial_length(k, sp->tau[k + 1]);

    c.length_ = sp->total();
    if (closed) {
        // Green's theorem on the spline: the integrand is a degree-5 polynomial per segment
        const QuadratureRule g = gauss_legendre(4, 0.0, 1.0);
        double area = 0.0;
        for (std::size_t k = 0; k < segs; ++k) {
            const double a = sp->tau[k], w = sp->tau[k + 1] - a;
            for (std::size_t q = 0; q < g.size(); ++q) {
                const Derivs d = sp->eval(k, a + w * g.nodes[q]);
                area += g.weights[q] * w * cross(d.p, d.d1);
            }
        }
        c.area_ = 0.5 * area;
    }
    c.samples_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = std::min(i, segs - 1);
        c.samples_[i] = {p[i], sp->s_knot[i], sp->local_curvature(k, sp->tau[i])};
    }
    c.spline_ = std::move(sp);
    if (!(c.length_ > 0.0)) throw GeometryError("curve has zero length");
    if (closed && !(c.area_ > 0.0)) throw GeometryError("closed curve encloses no area");
    return c;
}

Point2 BoundaryCurve::position(double s) const {
    const auto [k, t] = spline_->locate(s);
    return spline_->eval(k, t).p;
}

Point2 BoundaryCurve::unit_tangent(double s) const {
    const auto [k, t] = spline_->locate(s);
    const Point2 d = spline_->eval(k, t).d1;
    return (1.0 / norm(d)) * d;
}

Point2 BoundaryCurve::inward_normal(double s) const {
    const Point2 t = unit_tangent(s);
    return {-t.x2, t.x1};
}

double BoundaryCurve::curvature(double s) const {
    const auto [k, t] = spline_->locate(s);
    return spline_->local_curvature(k, t);
}

double BoundaryCurve::curvature(double s, DomainSide side) const {
    const double k = curvature(s);
    return side == DomainSide::Interior ? k : -k;
}

std::vector<CurveNode> BoundaryCurve::quadrature(std::size_t order) const {
    if (order == 0) throw ConfigError("quadrature order must be positive");
    const Spline& sp = *spline_;
    const QuadratureRule g = gauss_legendre(order, 0.0, 1.0);
    std::vector<CurveNode> nodes;
    nodes.reserve(sp.segments() * order);
    for (std::size_t k = 0; k < sp.segments(); ++k) {
        const double a = sp.tau[k], w = sp.tau[k + 1] - a;
        for (std::size_t q = 0; q < g.size(); ++q) {
            const double t = a + w * g.nodes[q];
            const Derivs d = sp.eval(k, t);
            nodes.push_back({d.p, sp.s_knot[k] + sp.partial_length(k, t), sp.local_curvature(k, t),
                             g.weights[q] * w * norm(d.d1)});
        }
    }
    return nodes;
}

double BoundaryCurve::integrate(const std::function<double(Point2, double, double)>& g,
                                std::size_t order) const {
    double total = 0.0;
    for (const CurveNode& n : quadrature(order)) total += n.weight * g(n.position, n.s, n.curvature);
    return total;
}

double BoundaryCurve::total_curvature() const {
    return integrate([](Point2, double, double k) { return k; });
}

std::vector<Point2> read_curve_points(std::istream& in) {
    std::vector<Point2> pts;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream is(line);
        is.imbue(std::locale::classic());
        Point2 p;
        std::string extra;
        if (!(is >> p.x1 >> p.x2) || (is >> extra))
            throw ConfigError("curve line " + std::to_string(lineno) + ": expected two numbers");
        pts.push_back(p);
    }
    return pts;
}

std::vector<Point2> read_curve_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open curve file " + path);
    return read_curve_points(in);
}

std::vector<Point2> circle_points(double radius, std::size_t count, Point2 center) {
    std::vector<Point2> p(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
        p[i] = {center.x1 + radius * std::cos(th), center.x2 + radius * std::sin(th)};
    }
    return p;
}

std::vector<Point2> ellipse_points(double a, double b, std::size_t count) {
    std::vector<Point2> p(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
        p[i] = {a * std::cos(th), b * std::sin(th)};
    }
    return p;
}

}  // namespace magspec
