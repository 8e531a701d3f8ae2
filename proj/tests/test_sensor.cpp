#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ninpath/errors.hpp"
#include "ninpath/sensor.hpp"

using namespace ninpath;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kA = 173.2, kB = 519.6, kR = 65.8;

double deg(double d) { return d * kPi / 180.0; }

std::vector<Point> circle_polygon(const Point& c, double r, int n) {
    std::vector<Point> out;
    for (int i = 0; i < n; ++i) {
        const double t = kTwoPi * i / n;
        out.push_back(c + r * Point{std::cos(t), std::sin(t)});
    }
    return out;
}

struct Query {
    Pose sample;
    Point task;
};

// Random sample pose and a task point in a box that contains all reachable coverage.
Query random_query(std::mt19937_64& rng, double reach) {
    std::uniform_real_distribution<double> u(-1.0, 1.0), ang(0.0, kTwoPi);
    Pose s{400 * u(rng), 400 * u(rng), ang(rng)};
    return {s, s.position() + Point{reach * u(rng), reach * u(rng)}};
}

// Tangent point of circle(p1, r1) with circle(p4, r4), located by scanning circle(p4, r4).
Point tangent_point(const Point& p1, double r1, const Point& p4, double r4) {
    auto mismatch = [&](double t) {
        return std::abs((p4 + r4 * Point{std::cos(t), std::sin(t)} - p1).norm() - r1);
    };
    double best_t = 0, best = 1e300;
    for (int i = 0; i < 100000; ++i) {
        const double t = kTwoPi * i / 100000;
        if (mismatch(t) < best) {
            best = mismatch(t);
            best_t = t;
        }
    }
    double lo = best_t - 1e-4, hi = best_t + 1e-4;
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        if (mismatch(m1) < mismatch(m2)) hi = m2; else lo = m1;
    }
    const double t = 0.5 * (lo + hi);
    return p4 + r4 * Point{std::cos(t), std::sin(t)};
}

}  // namespace

TEST_CASE("footprint geometry from nadir angles") {
    auto g = footprint_geometry(300, deg(30), deg(60));
    CHECK(g.a == doctest::Approx(173.2).epsilon(1e-3));
    CHECK(g.b == doctest::Approx(519.6).epsilon(1e-3));
    CHECK(g.r_sen == doctest::Approx(173.2).epsilon(1e-3));
    auto h = footprint_geometry(200, deg(30), deg(60));
    CHECK(h.a == doctest::Approx(115.5).epsilon(1e-3));
    CHECK(h.b == doctest::Approx(346.4).epsilon(1e-3));
    CHECK(h.r_sen == doctest::Approx(115.5).epsilon(1e-3));
    CHECK_THROWS_AS(footprint_geometry(300, 0, 0), DomainError);
    CHECK_THROWS_AS(footprint_geometry(300, deg(60), deg(30)), DomainError);
    CHECK_THROWS_AS(footprint_geometry(300, deg(10), deg(90)), DomainError);
    CHECK_THROWS_AS(footprint_geometry(0, deg(10), deg(20)), DomainError);
}

TEST_CASE("sensor validation") {
    CHECK_THROWS_AS(SensorModel::forward(100, 50), DomainError);
    CHECK_THROWS_AS(SensorModel::forward(-1, 50), DomainError);
    CHECK_THROWS_AS(SensorModel::omni(0), DomainError);
    CHECK_THROWS_AS(SensorModel::arbitrary({{0, 0}, {1, 1}, {2, 2}}), DomainError);
    SensorModel bad = SensorModel::forward(kA, kB);
    bad.r_sen = 10;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("footprint centre") {
    CHECK((footprint_center({0, 0, 0}, SensorModel::omni(50)) - Point(0, 0)).norm() < 1e-12);
    CHECK((footprint_center({0, 0, 0}, SensorModel::forward(kA, kB)) - Point(346.4, 0)).norm() < 1e-9);
    CHECK((footprint_center({0, 0, kPi / 2}, SensorModel::rightward(kA, kB)) - Point(346.4, 0)).norm() < 1e-9);
}

TEST_CASE("nir_params: formula values and tangency cross-check") {
    auto p = nir_params(SensorModel::forward(kA, kB), kR);
    CHECK(p.r_ab == doctest::Approx(352.6).epsilon(1e-4));
    CHECK(p.r_a == doctest::Approx(179.4).epsilon(1e-3));
    CHECK(p.r_b == doctest::Approx(525.8).epsilon(1e-4));
    CHECK(p.r_a <= p.r_ab);
    CHECK(p.r_ab <= p.r_b);
    CHECK(p.alpha1 >= 0);
    CHECK(p.alpha1 < kPi / 2);
    CHECK(p.alpha2 >= 0);
    CHECK(p.alpha2 < kPi / 2);
    CHECK(p.l2 >= p.r_ab);
    CHECK(p.l2 <= p.r_b);

    const double c = 0.5 * (kA + kB), rs = 0.5 * (kB - kA);
    const Point p1{0, kR}, p4{c, 0};
    const Point p3 = tangent_point(p1, p.r_a, p4, rs);
    const Point p5 = tangent_point(p1, p.r_b, p4, rs);
    CHECK(p3.norm() == doctest::Approx(p.l1).epsilon(1e-6));
    CHECK(p5.norm() == doctest::Approx(p.l2).epsilon(1e-6));
    CHECK(std::abs(std::atan2(p3.y(), p3.x())) == doctest::Approx(p.alpha1).epsilon(1e-5));
    CHECK(std::abs(std::atan2(p5.y(), p5.x())) == doctest::Approx(p.alpha2).epsilon(1e-5));
}

TEST_CASE("nir_params: degenerate zero-width band") {
    SensorModel s;
    s.orientation = Orientation::forward;
    s.offset_min = s.offset_max = 200;
    s.r_sen = 0;
    auto p = nir_params(s, kR);
    CHECK(p.r_a == doctest::Approx(p.r_ab));
    CHECK(p.r_b == doctest::Approx(p.r_ab));
    CHECK(p.l1 == doctest::Approx(p.l2));
    CHECK(p.alpha1 == doctest::Approx(p.alpha2));
    CHECK_THROWS_AS(nir_params(SensorModel::omni(10), kR), DomainError);
}

TEST_CASE("large turn radius: region tends to the swept strip") {
    const auto s = SensorModel::forward(kA, kB);
    const double rs = s.r_sen, c = 0.5 * (kA + kB);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(c - 5 * rs, c + 5 * rs), uy(-2 * rs, 2 * rs);
    int agree = 0;
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
        const Point q{ux(rng), uy(rng)};
        const double dx = std::max(0.0, std::abs(q.x() - c) - 4 * rs);
        const bool strip = std::hypot(dx, q.y()) < rs;
        agree += nir_contains({0, 0, 0}, s, 1e7, q) == strip;
    }
    CHECK(agree >= 0.99 * n);
}

TEST_CASE("nir_contains examples") {
    CHECK(nir_contains({0, 0, 0}, SensorModel::omni(100), kR, {50, 0}));
    CHECK(nir_contains({0, 0, 1.0}, SensorModel::omni(100), kR, {30, 40}));
    const auto f = SensorModel::forward(kA, kB);
    Pose s{10, 20, 0.7};
    CHECK(nir_contains(s, f, kR, footprint_center(s, f)));
    CHECK_FALSE(nir_contains(s, f, kR, s.position() + Point{2000, 0}));
}

TEST_CASE("oracle examples") {
    const auto f = SensorModel::forward(kA, kB);
    Pose s{0, 0, 0};
    CHECK(nir_oracle(s, f, kR, {346.4, 10}, 5.0));
    const auto p = nir_params(f, kR);
    CHECK_FALSE(nir_oracle(s, f, kR, {0, -(kR + p.r_b + 5)}, 5.0));
    CHECK_FALSE(nir_oracle(s, f, kR, {p.r_b + kR + 20, 0}, 5.0));
}

TEST_CASE("soundness against the manoeuvre-sweep oracle") {
    struct Case {
        const char* name;
        SensorModel sensor;
        double r_min;
    };
    const std::vector<Case> cases = {
        {"omni", SensorModel::omni(60), 66},
        {"omni wide", SensorModel::omni(150), 40},
        {"forward", SensorModel::forward(kA, kB), kR},
        {"forward narrow", SensorModel::forward(50, 150), 100},
        {"rightward small radius", SensorModel::rightward(kA, kB), kR},
        {"rightward large radius", SensorModel::rightward(20, 80), 120},
        {"arbitrary", SensorModel::arbitrary({{60, -40}, {220, -90}, {260, 30}, {150, 70}, {80, 20}}), 70},
    };
    for (const auto& c : cases) {
        CAPTURE(c.name);
        std::mt19937_64 rng(17);
        const double reach = c.sensor.offset_max + c.sensor.r_sen + 2 * c.r_min;
        int positives = 0, false_pos = 0;
        for (int i = 0; i < 10000; ++i) {
            auto q = random_query(rng, reach);
            if (!nir_contains(q.sample, c.sensor, c.r_min, q.task)) continue;
            ++positives;
            if (!nir_oracle(q.sample, c.sensor, c.r_min, q.task, c.sensor.r_sen / 20)) ++false_pos;
        }
        CHECK(positives > 0);
        CHECK(false_pos == 0);
    }
}

TEST_CASE("agreement with the oracle") {
    const std::vector<std::pair<SensorModel, double>> cases = {
        {SensorModel::omni(60), 66},
        {SensorModel::forward(kA, kB), kR},
        {SensorModel::rightward(20, 80), 120},
    };
    for (const auto& [sensor, r_min] : cases) {
        std::mt19937_64 rng(23);
        const double reach = sensor.offset_max + sensor.r_sen + 2 * r_min;
        int agree = 0, false_pos = 0;
        const int n = 1000;
        for (int i = 0; i < n; ++i) {
            auto q = random_query(rng, reach);
            const bool fast = nir_contains(q.sample, sensor, r_min, q.task);
            const bool ref = nir_oracle(q.sample, sensor, r_min, q.task, sensor.r_sen / 20);
            agree += fast == ref;
            false_pos += fast && !ref;
        }
        CHECK(false_pos == 0);
        CHECK(agree >= n - 2);
    }
}

TEST_CASE("footprint is a subset of the region") {
    std::mt19937_64 rng(29);
    for (const auto& s : {SensorModel::omni(80), SensorModel::forward(kA, kB),
                          SensorModel::rightward(kA, kB), SensorModel::rightward(20, 80)}) {
        for (int i = 0; i < 2000; ++i) {
            auto q = random_query(rng, s.offset_max + s.r_sen);
            if (footprint_contains(q.sample, s, q.task)) CHECK(nir_contains(q.sample, s, kR, q.task));
        }
    }
}

TEST_CASE("rightward collapse when the turn radius is below b") {
    const auto s = SensorModel::rightward(kA, kB);
    std::mt19937_64 rng(31);
    for (int i = 0; i < 5000; ++i) {
        auto q = random_query(rng, kB + 2 * kR);
        CHECK(nir_contains(q.sample, s, kR, q.task) == footprint_contains(q.sample, s, q.task));
    }
}

TEST_CASE("rigid-motion equivariance") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(-1, 1), ang(0, kTwoPi);
    for (const auto& s : {SensorModel::omni(60), SensorModel::forward(kA, kB),
                          SensorModel::rightward(20, 80)}) {
        int same = 0;
        const int n = 2000;
        for (int i = 0; i < n; ++i) {
            auto q = random_query(rng, s.offset_max + s.r_sen + 2 * 120);
            const double rot = ang(rng);
            const Point shift{1000 * u(rng), 1000 * u(rng)};
            const Pose moved(rotate(q.sample.position(), rot) + shift, q.sample.theta + rot);
            const Point task = rotate(q.task, rot) + shift;
            same += nir_contains(q.sample, s, 120, q.task) == nir_contains(moved, s, 120, task);
        }
        // Only points within round-off of the boundary may flip.
        CHECK(same >= n - 1);
    }
}

TEST_CASE("polygon footprint") {
    const auto f = SensorModel::forward(kA, kB);
    const auto poly = circle_polygon(f.center_offset(), f.r_sen, 64);
    std::mt19937_64 rng(41);
    int agree = 0;
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
        auto q = random_query(rng, kB + f.r_sen + 2 * kR);
        agree += nir_arbitrary(poly, q.sample, kR, q.task, 4 * f.r_sen) ==
                 nir_contains(q.sample, f, kR, q.task);
    }
    CHECK(agree >= 0.99 * n);

    Pose s{5, 5, 2.0};
    CHECK(nir_arbitrary(poly, s, kR, s.to_world(f.center_offset() + Point{10, -20})));
    CHECK_FALSE(nir_arbitrary(poly, s, kR, s.to_world(Point{kB + 2 * kR + 50, 0})));
    const std::vector<Point> flat{{0, 0}, {1, 0}, {2, 0}};
    CHECK_THROWS_AS(nir_arbitrary(flat, s, kR, {0, 0}), DomainError);
}

TEST_CASE("LR and RL together already give the nine-way result for short manoeuvres") {
    const auto s = SensorModel::omni(60);
    const double r = 66;
    OracleOptions opts;
    opts.turn_extent = kPi / 2;
    opts.straight_length = r * kPi / 2;
    std::mt19937_64 rng(43);
    int mismatch = 0;
    for (int i = 0; i < 1000; ++i) {
        auto q = random_query(rng, s.r_sen + r);
        const double step = 1.5;
        const bool nine = nir_oracle(q.sample, s, r, q.task, step, opts);
        const bool lr = maneuver_pair_covered(q.sample, s, r, q.task, Maneuver::L, Maneuver::R, step, opts);
        const bool rl = maneuver_pair_covered(q.sample, s, r, q.task, Maneuver::R, Maneuver::L, step, opts);
        mismatch += nine != (lr && rl);
    }
    CHECK(mismatch == 0);
}

TEST_CASE("with full revolutions LR and RL cover more than the nine-way region") {
    const auto s = SensorModel::omni(60);
    const double r = 66;
    std::mt19937_64 rng(47);
    int wider = 0;
    for (int i = 0; i < 300; ++i) {
        auto q = random_query(rng, s.r_sen + 2 * r);
        const bool nine = nir_oracle(q.sample, s, r, q.task, 3.0);
        const bool lr = maneuver_pair_covered(q.sample, s, r, q.task, Maneuver::L, Maneuver::R, 3.0);
        const bool rl = maneuver_pair_covered(q.sample, s, r, q.task, Maneuver::R, Maneuver::L, 3.0);
        CHECK((!nine || (lr && rl)));
        wider += (lr && rl) && !nine;
    }
    CHECK(wider > 0);
}
