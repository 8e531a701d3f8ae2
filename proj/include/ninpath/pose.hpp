#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Core>

namespace ninpath {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

using Point = Point2<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle into [0, 2*pi).
template <typename Scalar>
Scalar mod2pi(Scalar angle) {
    Scalar r = std::fmod(angle, Scalar(kTwoPi));
    if (r < Scalar(0)) r += Scalar(kTwoPi);
    if (r >= Scalar(kTwoPi)) r -= Scalar(kTwoPi);
    return r;
}

/// Signed shortest angular difference a - b in (-pi, pi].
template <typename Scalar>
Scalar angle_diff(Scalar a, Scalar b) {
    Scalar d = mod2pi(a - b);
    if (d > Scalar(std::numbers::pi)) d -= Scalar(kTwoPi);
    return d;
}

template <typename Scalar>
Point2<Scalar> unit(Scalar angle) {
    return {std::cos(angle), std::sin(angle)};
}

/// Rotates a body-frame vector (x forward, y left) into the world frame.
template <typename Scalar>
Point2<Scalar> rotate(const Point2<Scalar>& body, Scalar heading) {
    const Scalar c = std::cos(heading), s = std::sin(heading);
    return {c * body.x() - s * body.y(), s * body.x() + c * body.y()};
}

/// Planar position plus heading. Heading is kept in [0, 2*pi).
struct Pose {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;

    Pose() = default;
    Pose(double x_, double y_, double theta_) : x(x_), y(y_), theta(mod2pi(theta_)) {}
    Pose(const Point& p, double theta_) : Pose(p.x(), p.y(), theta_) {}

    Point position() const { return {x, y}; }
    Point heading_vector() const { return unit(theta); }

    /// World coordinates of a body-frame offset.
    Point to_world(const Point& body) const { return position() + rotate(body, theta); }
    /// Body-frame coordinates of a world point.
    Point to_body(const Point& world) const { return rotate<double>(world - position(), -theta); }

    friend bool operator==(const Pose&, const Pose&) = default;
};

inline double distance(const Point& a, const Point& b) { return (a - b).norm(); }

}  // namespace ninpath
