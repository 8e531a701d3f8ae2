#pragma once

// Random scenarios for property tests.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "ninpath/instance.hpp"

namespace fixtures {

using ninpath::Point;

enum class SensorKind { omni, forward };

struct Options {
    int n = 4;
    int m = 1;
    int samples = 2;
    SensorKind sensor = SensorKind::omni;
    double omni_radius = 100;
    double area = 1500;
    /// Tasks drawn around a few centres of this spread; <= 0 means uniform.
    double cluster_spread = 0;
    bool restrict_eligibility = true;
    std::uint64_t sampling_seed = 0;
};

inline ninpath::Scenario random_scenario(std::uint64_t seed, const Options& o) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ninpath::Scenario s;
    s.samples_per_cluster = o.samples;
    s.seed = o.sampling_seed;
    for (int k = 1; k <= o.m; ++k) {
        ninpath::Vehicle v;
        v.id = k;
        v.kinematics = ninpath::VehicleKinematics::with_radius(50.0 - 10.0 * (k - 1), 66.0 - 12.0 * (k - 1));
        v.sensor = o.sensor == SensorKind::omni ? ninpath::SensorModel::omni(o.omni_radius)
                                                : ninpath::SensorModel::forward(60, 180);
        v.depot = {o.area * u(rng), o.area * u(rng)};
        v.terminal = {o.area * u(rng), o.area * u(rng)};
        s.vehicles.push_back(v);
    }
    std::vector<Point> centres;
    for (int c = 0; c < 2; ++c) centres.push_back({o.area * (0.2 + 0.6 * u(rng)), o.area * (0.2 + 0.6 * u(rng))});
    for (int t = 1; t <= o.n; ++t) {
        ninpath::Task task;
        task.id = t;
        if (o.cluster_spread > 0) {
            const Point& c = centres[static_cast<std::size_t>(t % 2)];
            task.position = c + o.cluster_spread * Point{2 * u(rng) - 1, 2 * u(rng) - 1};
        } else {
            task.position = {o.area * u(rng), o.area * u(rng)};
        }
        for (int k = 1; k <= o.m; ++k)
            if (!o.restrict_eligibility || u(rng) < 0.7) task.eligible_vehicles.push_back(k);
        if (task.eligible_vehicles.empty())
            task.eligible_vehicles.push_back(1 + static_cast<int>(rng() % static_cast<std::uint64_t>(o.m)));
        s.tasks.push_back(task);
    }
    s.validate();
    return s;
}

}  // namespace fixtures
