#include "ninpath/sensor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "ninpath/dubins.hpp"
#include "ninpath/errors.hpp"

namespace ninpath {

namespace {

constexpr double kBias = 1e-9;

double segment_distance(const Point& p, const Point& a, const Point& b) {
    const Point ab = b - a;
    const double len2 = ab.squaredNorm();
    const double t = len2 > 0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    return (p - (a + t * ab)).norm();
}

bool polygon_inside(const std::vector<Point>& poly, const Point& p) {
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Point& a = poly[i];
        const Point& b = poly[j];
        if ((a.y() > p.y()) != (b.y() > p.y())) {
            const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
            if (p.x() < x) inside = !inside;
        }
    }
    return inside;
}

double polygon_boundary_distance(const std::vector<Point>& poly, const Point& p) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++)
        d = std::min(d, segment_distance(p, poly[j], poly[i]));
    return d;
}

double polygon_signed_distance(const std::vector<Point>& poly, const Point& p) {
    const double d = polygon_boundary_distance(poly, p);
    return polygon_inside(poly, p) ? -d : d;
}

// Closed annulus test around `centre` with radii [inner, outer], shrunk by the margin.
bool in_annulus(const Point& q, const Point& centre, double inner, double outer) {
    const double d = (q - centre).norm();
    const double lo = inner > 0 ? inner + kBias : 0.0;
    return d >= lo && d <= outer - kBias;
}

Point centroid(const std::vector<Point>& poly) {
    double area2 = 0;
    Point c = Point::Zero();
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const double cross = poly[j].x() * poly[i].y() - poly[i].x() * poly[j].y();
        area2 += cross;
        c += cross * (poly[j] + poly[i]);
    }
    return c / (3.0 * area2);
}

// Whether a horizontal body-frame segment [q - L, q + L] passes through the polygon interior.
bool straight_sweep_hits(const std::vector<Point>& poly, const Point& q, double length) {
    std::vector<double> xs;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Point& a = poly[i];
        const Point& b = poly[j];
        if ((a.y() > q.y()) != (b.y() > q.y()))
            xs.push_back(a.x() + (q.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y()));
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
        const double lo = std::max(xs[k], q.x() - length);
        const double hi = std::min(xs[k + 1], q.x() + length);
        if (hi <= lo) continue;
        const Point mid{0.5 * (lo + hi), q.y()};
        if (polygon_signed_distance(poly, mid) <= -kBias) return true;
    }
    return false;
}

std::pair<double, double> distance_range(const std::vector<Point>& poly, const Point& c) {
    double lo = polygon_inside(poly, c) ? 0.0 : polygon_boundary_distance(poly, c);
    double hi = 0;
    for (const auto& v : poly) hi = std::max(hi, (v - c).norm());
    return {lo, hi};
}

int steer_of(Maneuver m) {
    switch (m) {
    case Maneuver::L: return 1;
    case Maneuver::R: return -1;
    case Maneuver::S: return 0;
    }
    return 0;
}

}  // namespace

SensorModel SensorModel::omni(double r_sen) {
    SensorModel s;
    s.orientation = Orientation::omni;
    s.r_sen = r_sen;
    s.offset_min = -r_sen;
    s.offset_max = r_sen;
    s.validate();
    return s;
}

SensorModel SensorModel::forward(double a, double b) {
    SensorModel s;
    s.orientation = Orientation::forward;
    s.offset_min = a;
    s.offset_max = b;
    s.r_sen = 0.5 * (b - a);
    s.validate();
    return s;
}

SensorModel SensorModel::rightward(double a, double b) {
    SensorModel s = forward(a, b);
    s.orientation = Orientation::rightward;
    return s;
}

SensorModel SensorModel::arbitrary(std::vector<Point> polygon, std::optional<double> r_sen) {
    SensorModel s;
    s.orientation = Orientation::arbitrary;
    s.polygon = std::move(polygon);
    if (s.polygon->size() < 3 || polygon_area(*s.polygon) < 1e-12)
        throw DomainError("footprint polygon is degenerate");
    s.r_sen = r_sen.value_or(polygon_radius(*s.polygon));
    s.offset_min = -s.r_sen;
    s.offset_max = s.r_sen;
    s.validate();
    return s;
}

void SensorModel::validate() const {
    if (!(r_sen > 0) || !std::isfinite(r_sen)) throw DomainError("r_sen must be positive");
    switch (orientation) {
    case Orientation::omni:
        if (polygon) throw DomainError("omni sensor cannot carry a polygon");
        if (std::abs(offset_min + r_sen) > 1e-9 || std::abs(offset_max - r_sen) > 1e-9)
            throw DomainError("omni sensor requires a = -r_sen, b = r_sen");
        break;
    case Orientation::forward:
    case Orientation::rightward:
        if (polygon) throw DomainError("circular sensor cannot carry a polygon");
        if (!(offset_min >= 0) || !(offset_max > offset_min))
            throw DomainError("directional sensor requires b > a >= 0");
        if (std::abs(r_sen - 0.5 * (offset_max - offset_min)) > 1e-9 * std::max(1.0, r_sen))
            throw DomainError("directional sensor requires r_sen = (b - a) / 2");
        break;
    case Orientation::arbitrary:
        if (!polygon || polygon->size() < 3 || polygon_area(*polygon) < 1e-12)
            throw DomainError("arbitrary sensor requires a non-degenerate polygon");
        break;
    }
}

Point SensorModel::center_offset() const {
    const double c = 0.5 * (offset_min + offset_max);
    switch (orientation) {
    case Orientation::forward: return {c, 0.0};
    case Orientation::rightward: return {0.0, -c};
    case Orientation::omni:
    case Orientation::arbitrary: break;
    }
    if (polygon) return centroid(*polygon);
    return Point::Zero();
}

FootprintGeometry footprint_geometry(double altitude, double min_nadir_angle, double max_nadir_angle) {
    if (!(altitude > 0)) throw DomainError("altitude must be positive");
    if (!(min_nadir_angle >= 0) || !(min_nadir_angle < max_nadir_angle) ||
        !(max_nadir_angle < std::numbers::pi / 2))
        throw DomainError("nadir angles must satisfy 0 <= min < max < pi/2");
    const double a = altitude * std::tan(min_nadir_angle);
    const double b = altitude * std::tan(max_nadir_angle);
    return {a, b, 0.5 * (b - a)};
}

Point footprint_center(const Pose& pose, const SensorModel& sensor) {
    return pose.to_world(sensor.center_offset());
}

double footprint_signed_distance(const SensorModel& sensor, const Point& body_point) {
    if (sensor.orientation == Orientation::arbitrary)
        return polygon_signed_distance(*sensor.polygon, body_point);
    return (body_point - sensor.center_offset()).norm() - sensor.r_sen;
}

bool footprint_contains(const Pose& pose, const SensorModel& sensor, const Point& task) {
    return footprint_signed_distance(sensor, pose.to_body(task)) <= -kBias;
}

double polygon_area(const std::vector<Point>& polygon) {
    double area2 = 0;
    for (std::size_t i = 0, j = polygon.size() - 1; i < polygon.size(); j = i++)
        area2 += polygon[j].x() * polygon[i].y() - polygon[i].x() * polygon[j].y();
    return 0.5 * std::abs(area2);
}

double polygon_radius(const std::vector<Point>& polygon) {
    const Point c = centroid(polygon);
    double r = 0;
    for (const auto& v : polygon) r = std::max(r, (v - c).norm());
    return r;
}

NirParams nir_params(const SensorModel& sensor, double r_min) {
    if (sensor.orientation != Orientation::forward && sensor.orientation != Orientation::rightward)
        throw DomainError("nir_params requires a directional circular sensor");
    if (!(r_min > 0)) throw DomainError("turn radius must be positive");
    const double a = sensor.offset_min, b = sensor.offset_max;
    const double c = 0.5 * (a + b), rs = 0.5 * (b - a);
    NirParams p;
    if (sensor.orientation == Orientation::rightward) {
        // Far turn centre lies on the look axis, so both tangency points are on it too.
        p.r_ab = r_min + c;
        p.r_a = r_min + a;
        p.r_b = r_min + b;
        p.l1 = a;
        p.l2 = b;
        return p;
    }
    p.r_ab = std::hypot(r_min, c);
    p.r_a = p.r_ab - rs;
    p.r_b = p.r_ab + rs;
    // Both circle pairs are tangent on the ray from the turn centre through the footprint centre.
    const Point p1{0.0, r_min}, p4{c, 0.0};
    const Point p3 = p1 + (p4 - p1) * (p.r_a / p.r_ab);
    const Point p5 = p1 + (p4 - p1) * (p.r_b / p.r_ab);
    p.l1 = p3.norm();
    p.l2 = p5.norm();
    p.alpha1 = p.l1 > 0 ? std::abs(std::atan2(p3.y(), p3.x())) : 0.0;
    p.alpha2 = std::abs(std::atan2(p5.y(), p5.x()));
    return p;
}

bool nir_contains(const Pose& sample, const SensorModel& sensor, double r_min, const Point& task) {
    if (!(r_min > 0)) throw DomainError("turn radius must be positive");
    if (sensor.orientation == Orientation::arbitrary)
        return nir_arbitrary(*sensor.polygon, sample, r_min, task, 4.0 * sensor.r_sen);
    const Point q = sample.to_body(task);
    const Point f = sensor.center_offset();
    const double rs = sensor.r_sen;
    if ((q - f).norm() <= rs - kBias) return true;
    if (sensor.orientation == Orientation::rightward && r_min < sensor.offset_max) return false;

    const Point left{0.0, r_min}, right{0.0, -r_min};
    const double rl = (f - left).norm(), rr = (f - right).norm();
    if (!in_annulus(q, left, rl - rs, rl + rs)) return false;
    if (!in_annulus(q, right, rr - rs, rr + rs)) return false;
    const double length = 4.0 * rs;
    return segment_distance(q, f - Point{length, 0.0}, f + Point{length, 0.0}) <= rs - kBias;
}

bool nir_arbitrary(const std::vector<Point>& polygon, const Pose& pose, double r_min,
                   const Point& task, double straight_length) {
    if (!(r_min > 0)) throw DomainError("turn radius must be positive");
    if (polygon.size() < 3 || polygon_area(polygon) < 1e-12)
        throw DomainError("footprint polygon is degenerate");
    if (straight_length < 0) straight_length = 4.0 * polygon_radius(polygon);
    const Point q = pose.to_body(task);
    if (polygon_signed_distance(polygon, q) <= -kBias) return true;
    for (const Point& centre : {Point{0.0, r_min}, Point{0.0, -r_min}}) {
        const auto [lo, hi] = distance_range(polygon, centre);
        if (!in_annulus(q, centre, lo, hi)) return false;
    }
    return straight_sweep_hits(polygon, q, straight_length);
}

double sweep_clearance(const Pose& sample, const SensorModel& sensor, double r_min,
                       const Point& task, Maneuver m, int direction, double step,
                       const OracleOptions& opts) {
    if (!(step > 0)) throw DomainError("oracle step must be positive");
    const int u = steer_of(m);
    const double straight = opts.straight_length < 0 ? 4.0 * sensor.r_sen : opts.straight_length;
    const double extent = u == 0 ? straight : opts.turn_extent * r_min;
    auto clearance = [&](double s) {
        const Pose p = propagate(sample, u, direction * s, r_min);
        return footprint_signed_distance(sensor, p.to_body(task));
    };
    const auto n = static_cast<std::size_t>(std::ceil(extent / step)) + 1;
    std::vector<double> s(n), f(n);
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = n > 1 ? extent * static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
        f[i] = clearance(s[i]);
    }
    double best = *std::min_element(f.begin(), f.end());
    for (std::size_t i = 0; i < n; ++i) {
        const bool local = (i == 0 || f[i] <= f[i - 1]) && (i + 1 == n || f[i] <= f[i + 1]);
        if (!local) continue;
        const double lo = s[i == 0 ? 0 : i - 1];
        const double hi = s[i + 1 == n ? i : i + 1];
        if (hi <= lo) continue;
        const auto r = boost::math::tools::brent_find_minima(clearance, lo, hi, 50);
        best = std::min(best, r.second);
    }
    return best;
}

bool maneuver_pair_covered(const Pose& sample, const SensorModel& sensor, double r_min,
                           const Point& task, Maneuver before, Maneuver after, double step,
                           const OracleOptions& opts) {
    return sweep_clearance(sample, sensor, r_min, task, before, -1, step, opts) <= 0 ||
           sweep_clearance(sample, sensor, r_min, task, after, +1, step, opts) <= 0;
}

bool nir_oracle(const Pose& sample, const SensorModel& sensor, double r_min, const Point& task,
                double step, const OracleOptions& opts) {
    const std::array<Maneuver, 3> all{Maneuver::L, Maneuver::S, Maneuver::R};
    std::array<bool, 3> back{}, fwd{};
    for (int i = 0; i < 3; ++i) {
        back[i] = sweep_clearance(sample, sensor, r_min, task, all[i], -1, step, opts) <= 0;
        fwd[i] = sweep_clearance(sample, sensor, r_min, task, all[i], +1, step, opts) <= 0;
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (!back[i] && !fwd[j]) return false;
    return true;
}

}  // namespace ninpath
