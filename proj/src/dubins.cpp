#include "ninpath/dubins.hpp"

#include <algorithm>
#include <cmath>

#include "ninpath/errors.hpp"

namespace ninpath {

namespace {

constexpr double kArcClamp = 1e-9;
// Below this p^2 the CSC tangent direction is round-off; both circles coincide or touch.
constexpr double kDegenerate = 1e-12;

double clamp_arc(double angle) {
    if (angle < kArcClamp || angle > kTwoPi - kArcClamp) return 0.0;
    return angle;
}

struct Normalized {
    double alpha, beta, d;
    double sa, sb, ca, cb, c_ab;
};

// Normalized parameters (t, p, q) in units of the turn radius; p is metric only for CSC words.
std::optional<std::array<double, 3>> solve_word(const Normalized& in, DubinsWord word) {
    const double a = in.alpha, b = in.beta, d = in.d;
    const double sa = in.sa, sb = in.sb, ca = in.ca, cb = in.cb, c_ab = in.c_ab;
    switch (word) {
    case DubinsWord::LSL: {
        const double tmp0 = d + sa - sb;
        const double p_sq = 2 + d * d - 2 * c_ab + 2 * d * (sa - sb);
        if (p_sq < kDegenerate) return std::array{mod2pi(b - a), 0.0, 0.0};
        const double tmp1 = std::atan2(cb - ca, tmp0);
        return std::array{mod2pi(tmp1 - a), std::sqrt(p_sq), mod2pi(b - tmp1)};
    }
    case DubinsWord::RSR: {
        const double tmp0 = d - sa + sb;
        const double p_sq = 2 + d * d - 2 * c_ab + 2 * d * (sb - sa);
        if (p_sq < kDegenerate) return std::array{mod2pi(a - b), 0.0, 0.0};
        const double tmp1 = std::atan2(ca - cb, tmp0);
        return std::array{mod2pi(a - tmp1), std::sqrt(p_sq), mod2pi(tmp1 - b)};
    }
    case DubinsWord::LSR: {
        const double p_sq = -2 + d * d + 2 * c_ab + 2 * d * (sa + sb);
        if (p_sq < -kDegenerate) return std::nullopt;
        const double p = std::sqrt(std::max(p_sq, 0.0));
        const double tmp2 = std::atan2(-ca - cb, d + sa + sb) - std::atan2(-2.0, p);
        return std::array{mod2pi(tmp2 - a), p, mod2pi(tmp2 - b)};
    }
    case DubinsWord::RSL: {
        const double p_sq = -2 + d * d + 2 * c_ab - 2 * d * (sa + sb);
        if (p_sq < -kDegenerate) return std::nullopt;
        const double p = std::sqrt(std::max(p_sq, 0.0));
        const double tmp2 = std::atan2(ca + cb, d - sa - sb) - std::atan2(2.0, p);
        return std::array{mod2pi(a - tmp2), p, mod2pi(b - tmp2)};
    }
    case DubinsWord::RLR: {
        const double tmp0 = (6.0 - d * d + 2 * c_ab + 2 * d * (sa - sb)) / 8.0;
        if (std::abs(tmp0) > 1.0) return std::nullopt;
        const double phi = std::atan2(ca - cb, d - sa + sb);
        const double p = mod2pi(kTwoPi - std::acos(tmp0));
        const double t = mod2pi(a - phi + mod2pi(p / 2.0));
        return std::array{t, p, mod2pi(a - b - t + mod2pi(p))};
    }
    case DubinsWord::LRL: {
        const double tmp0 = (6.0 - d * d + 2 * c_ab + 2 * d * (sb - sa)) / 8.0;
        if (std::abs(tmp0) > 1.0) return std::nullopt;
        const double phi = std::atan2(ca - cb, d + sa - sb);
        const double p = mod2pi(kTwoPi - std::acos(tmp0));
        const double t = mod2pi(-a - phi + p / 2.0);
        return std::array{t, p, mod2pi(mod2pi(b) - a - t + mod2pi(p))};
    }
    }
    return std::nullopt;
}

}  // namespace

std::string_view to_string(DubinsWord word) {
    switch (word) {
    case DubinsWord::LSL: return "LSL";
    case DubinsWord::RSR: return "RSR";
    case DubinsWord::LSR: return "LSR";
    case DubinsWord::RSL: return "RSL";
    case DubinsWord::RLR: return "RLR";
    case DubinsWord::LRL: return "LRL";
    }
    return "?";
}

std::array<int, 3> steering(DubinsWord word) {
    switch (word) {
    case DubinsWord::LSL: return {1, 0, 1};
    case DubinsWord::RSR: return {-1, 0, -1};
    case DubinsWord::LSR: return {1, 0, -1};
    case DubinsWord::RSL: return {-1, 0, 1};
    case DubinsWord::RLR: return {-1, 1, -1};
    case DubinsWord::LRL: return {1, -1, 1};
    }
    return {0, 0, 0};
}

double DubinsPath::segment_length(int i) const {
    return steering(word)[i] == 0 ? segment_params[i] : segment_params[i] * radius;
}

VehicleKinematics VehicleKinematics::from_load_factor(double speed, double load_factor,
                                                      double gravity) {
    VehicleKinematics k;
    k.speed = speed;
    k.load_factor_max = load_factor;
    k.gravity = gravity;
    k.turn_radius = min_turn_radius(speed, load_factor, gravity);
    k.control_normalizer = speed * speed / k.turn_radius;
    return k;
}

VehicleKinematics VehicleKinematics::with_radius(double speed, double turn_radius) {
    if (!(speed > 0) || !(turn_radius > 0))
        throw DomainError("speed and turn radius must be positive");
    VehicleKinematics k;
    k.speed = speed;
    k.turn_radius = turn_radius;
    k.control_normalizer = speed * speed / turn_radius;
    return k;
}

double min_turn_radius(double speed, double load_factor, double gravity) {
    if (!(speed > 0)) throw DomainError("speed must be positive");
    if (!(gravity > 0)) throw DomainError("gravity must be positive");
    if (!(load_factor > 1.0)) throw DomainError("load factor must exceed 1");
    return speed * speed / (gravity * std::sqrt(load_factor * load_factor - 1.0));
}

std::optional<DubinsPath> path_for_word(const Pose& start, const Pose& end, double radius,
                                        DubinsWord word) {
    if (!(radius > 0)) throw DomainError("turn radius must be positive");
    const double dx = end.x - start.x, dy = end.y - start.y;
    const double dist = std::hypot(dx, dy);
    const double theta = dist > 0 ? mod2pi(std::atan2(dy, dx)) : 0.0;
    Normalized in;
    in.d = dist / radius;
    in.alpha = mod2pi(start.theta - theta);
    in.beta = mod2pi(end.theta - theta);
    in.sa = std::sin(in.alpha);
    in.sb = std::sin(in.beta);
    in.ca = std::cos(in.alpha);
    in.cb = std::cos(in.beta);
    in.c_ab = std::cos(in.alpha - in.beta);

    auto params = solve_word(in, word);
    if (!params) return std::nullopt;
    DubinsPath path;
    path.word = word;
    path.radius = radius;
    const auto steer = steering(word);
    double total = 0;
    for (int i = 0; i < 3; ++i) {
        double v = (*params)[i];
        if (steer[i] != 0) {
            v = clamp_arc(v);
            total += v * radius;
        } else {
            v *= radius;
            total += v;
        }
        path.segment_params[i] = v;
    }
    path.length = total;
    return path;
}

DubinsPath shortest_path(const Pose& start, const Pose& end, double radius) {
    if (!(radius > 0)) throw DomainError("turn radius must be positive");
    const double dist = std::hypot(end.x - start.x, end.y - start.y);
    if (dist < 1e-12 && std::abs(angle_diff(end.theta, start.theta)) < kArcClamp) {
        DubinsPath zero;
        zero.radius = radius;
        return zero;
    }
    std::optional<DubinsPath> best;
    for (DubinsWord w : kAllWords) {
        auto candidate = path_for_word(start, end, radius, w);
        if (!candidate) continue;
        // Strict improvement beyond round-off keeps the enumeration order as tie-break.
        const double tol = 1e-12 * std::max(1.0, candidate->length);
        if (!best || candidate->length < best->length - tol) best = candidate;
    }
    // At least one CSC word is always admissible.
    return *best;
}

Pose propagate(const Pose& start, int u, double s, double radius) {
    if (u == 0) return {start.x + s * std::cos(start.theta), start.y + s * std::sin(start.theta),
                        start.theta};
    const double dtheta = u * s / radius;
    const double th1 = start.theta + dtheta;
    // Integrates x' = cos(theta), y' = sin(theta), theta' = u / r exactly.
    const double x = start.x + (radius / u) * (std::sin(th1) - std::sin(start.theta));
    const double y = start.y - (radius / u) * (std::cos(th1) - std::cos(start.theta));
    return {x, y, th1};
}

Pose pose_at(const DubinsPath& path, const Pose& start, double s) {
    s = std::clamp(s, 0.0, path.length);
    const auto steer = steering(path.word);
    Pose current = start;
    for (int i = 0; i < 3; ++i) {
        const double seg = path.segment_length(i);
        if (s <= seg || i == 2) return propagate(current, steer[i], std::min(s, seg), path.radius);
        current = propagate(current, steer[i], seg, path.radius);
        s -= seg;
    }
    return current;
}

std::vector<Pose> sample_path(const DubinsPath& path, const Pose& start, double step) {
    if (!(step > 0)) throw DomainError("sampling step must be positive");
    if (path.length <= 0) return {start};
    const auto intervals = static_cast<std::size_t>(std::ceil(path.length / step - 1e-9));
    const std::size_t n = std::max<std::size_t>(intervals, 1);
    const double spacing = path.length / static_cast<double>(n);
    std::vector<Pose> out;
    out.reserve(n + 1);
    out.push_back(start);
    for (std::size_t i = 1; i <= n; ++i) out.push_back(pose_at(path, start, spacing * static_cast<double>(i)));
    return out;
}

}  // namespace ninpath
