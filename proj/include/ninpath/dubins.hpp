#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "ninpath/pose.hpp"

namespace ninpath {

/// Words in enumeration order; ties between equal-length words resolve to the earlier one.
enum class DubinsWord { LSL, RSR, LSR, RSL, RLR, LRL };

inline constexpr std::array<DubinsWord, 6> kAllWords = {DubinsWord::LSL, DubinsWord::RSR,
                                                        DubinsWord::LSR, DubinsWord::RSL,
                                                        DubinsWord::RLR, DubinsWord::LRL};

std::string_view to_string(DubinsWord word);

/// Steering of each segment: +1 left, 0 straight, -1 right.
std::array<int, 3> steering(DubinsWord word);

struct DubinsPath {
    DubinsWord word = DubinsWord::LSL;
    /// Arc segments hold the turned angle (rad), straight segments the length (m).
    std::array<double, 3> segment_params{0.0, 0.0, 0.0};
    double radius = 1.0;
    double length = 0.0;

    /// Metric length of segment i.
    double segment_length(int i) const;
};

struct VehicleKinematics {
    double speed = 1.0;
    double load_factor_max = 0.0;
    double gravity = 9.81;
    double turn_radius = 1.0;
    /// Carried for completeness of the vehicle model; no computation uses it.
    double control_normalizer = 1.0;

    static VehicleKinematics from_load_factor(double speed, double load_factor, double gravity = 9.81);
    static VehicleKinematics with_radius(double speed, double turn_radius);
};

/// Coordinated-turn radius v^2 / (g sqrt(n^2 - 1)). Throws DomainError when n <= 1.
double min_turn_radius(double speed, double load_factor, double gravity);

/// Path of one given word, if that word admits a solution for the pose pair.
std::optional<DubinsPath> path_for_word(const Pose& start, const Pose& end, double radius,
                                        DubinsWord word);

/// Minimum-length Dubins path over all six words.
DubinsPath shortest_path(const Pose& start, const Pose& end, double radius);

/// Pose after travelling `s` metres along `path` from `start`; `s` is clamped to [0, length].
Pose pose_at(const DubinsPath& path, const Pose& start, double s);

/// Poses spaced at most `step` apart along the path, first = start, last = path end.
std::vector<Pose> sample_path(const DubinsPath& path, const Pose& start, double step);

/// Flight time in seconds.
inline double edge_cost(const DubinsPath& path, double speed) { return path.length / speed; }

/// Pose reached by holding steering `u` (+1, 0, -1) for `s` metres at turn radius `radius`.
Pose propagate(const Pose& start, int u, double s, double radius);

}  // namespace ninpath
