#pragma once

#include <optional>
#include <vector>

#include "ninpath/pose.hpp"

namespace ninpath {

enum class Orientation { omni, forward, rightward, arbitrary };

struct SensorModel {
    Orientation orientation = Orientation::omni;
    double r_sen = 1.0;
    double offset_min = -1.0;  // a
    double offset_max = 1.0;   // b
    /// Body-frame footprint outline (x forward, y left); arbitrary sensors only.
    std::optional<std::vector<Point>> polygon;

    static SensorModel omni(double r_sen);
    static SensorModel forward(double a, double b);
    static SensorModel rightward(double a, double b);
    /// r_sen defaults to the largest centroid-to-vertex distance.
    static SensorModel arbitrary(std::vector<Point> polygon, std::optional<double> r_sen = {});

    /// Throws DomainError when the invariants of the chosen orientation do not hold.
    void validate() const;
    /// Footprint centre in the body frame.
    Point center_offset() const;
};

struct FootprintGeometry {
    double a, b, r_sen;
};

/// Ground offsets of a nadir-angle band seen from `altitude`.
FootprintGeometry footprint_geometry(double altitude, double min_nadir_angle, double max_nadir_angle);

Point footprint_center(const Pose& pose, const SensorModel& sensor);

/// Instantaneous footprint membership (boundary excluded by a 1e-9 m margin).
bool footprint_contains(const Pose& pose, const SensorModel& sensor, const Point& task);

struct NirParams {
    double r_a = 0, r_ab = 0, r_b = 0;
    double alpha1 = 0, alpha2 = 0;
    double l1 = 0, l2 = 0;
};

/// Tangency construction of the inner and outer footprint circles around the turn centre.
NirParams nir_params(const SensorModel& sensor, double r_min);

/// Whether every admissible continuation through `sample` makes the footprint touch `task`.
bool nir_contains(const Pose& sample, const SensorModel& sensor, double r_min, const Point& task);

/// Polygon version. `straight_length` < 0 means four times the polygon radius.
bool nir_arbitrary(const std::vector<Point>& polygon, const Pose& pose, double r_min,
                   const Point& task, double straight_length = -1.0);

/// Area of a simple polygon (absolute value).
double polygon_area(const std::vector<Point>& polygon);

/// Largest distance from the area centroid to a vertex.
double polygon_radius(const std::vector<Point>& polygon);

/// Signed distance from a body-frame point to the footprint boundary; negative inside.
double footprint_signed_distance(const SensorModel& sensor, const Point& body_point);

enum class Maneuver { L, S, R };

struct OracleOptions {
    /// Angle swept on each turn circle.
    double turn_extent = kTwoPi;
    /// Length of the straight manoeuvre; < 0 means 4 * r_sen.
    double straight_length = -1.0;
};

/// Smallest footprint signed distance to `task` while flying `m` for the configured extent,
/// forward from the sample (direction +1) or backward into it (direction -1).
double sweep_clearance(const Pose& sample, const SensorModel& sensor, double r_min,
                       const Point& task, Maneuver m, int direction, double step,
                       const OracleOptions& opts = {});

/// Coverage of one arrive-via-`before`, leave-via-`after` manoeuvre pair.
bool maneuver_pair_covered(const Pose& sample, const SensorModel& sensor, double r_min,
                           const Point& task, Maneuver before, Maneuver after, double step,
                           const OracleOptions& opts = {});

/// Brute-force reference: covered in all nine manoeuvre pairs.
bool nir_oracle(const Pose& sample, const SensorModel& sensor, double r_min, const Point& task,
                double step, const OracleOptions& opts = {});

}  // namespace ninpath
