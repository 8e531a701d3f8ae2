#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ninpath/dubins.hpp"
#include "ninpath/errors.hpp"
#include "support/steering_lattice.hpp"

using namespace ninpath;

namespace {

constexpr double kPi = std::numbers::pi;

bool near_pose(const Pose& a, const Pose& b, double tol) {
    return std::hypot(a.x - b.x, a.y - b.y) < tol && std::abs(angle_diff(a.theta, b.theta)) < tol;
}

Pose random_pose(std::mt19937_64& rng, double span) {
    std::uniform_real_distribution<double> pos(-span, span), ang(0.0, kTwoPi);
    return {pos(rng), pos(rng), ang(rng)};
}

}  // namespace

TEST_CASE("turn radius from load factor") {
    CHECK(min_turn_radius(50, 4, 9.81) == doctest::Approx(2500.0 / (9.81 * std::sqrt(15.0))));
    CHECK(min_turn_radius(50, 4, 9.81) == doctest::Approx(66.0).epsilon(0.01));
    CHECK(min_turn_radius(25, 4, 9.81) == doctest::Approx(16.45).epsilon(1e-3));
    CHECK(min_turn_radius(25, 4, 9.81) == doctest::Approx(min_turn_radius(50, 4, 9.81) / 4));
    CHECK(min_turn_radius(50, 1e6, 9.81) < 1e-3);
    CHECK_THROWS_AS(min_turn_radius(50, 1.0, 9.81), DomainError);
    CHECK_THROWS_AS(min_turn_radius(50, 0.5, 9.81), DomainError);
    CHECK_THROWS_AS(min_turn_radius(0, 4, 9.81), DomainError);
    auto k = VehicleKinematics::from_load_factor(50, 4);
    CHECK(k.turn_radius == doctest::Approx(65.80).epsilon(1e-4));
}

TEST_CASE("aligned collinear poses give a straight LSL") {
    auto p = shortest_path({0, 0, 0}, {100, 0, 0}, 66);
    CHECK(p.word == DubinsWord::LSL);
    CHECK(p.length == doctest::Approx(100).epsilon(1e-12));
    CHECK(p.segment_params[0] == 0.0);
    CHECK(p.segment_params[2] == 0.0);
    CHECK(p.segment_params[1] == doctest::Approx(100));
}

TEST_CASE("identical poses give an empty path") {
    Pose s{12, -3, 1.2};
    auto p = shortest_path(s, s, 66);
    CHECK(p.length == 0.0);
    auto samples = sample_path(p, s, 5);
    REQUIRE(samples.size() == 1);
    CHECK(samples[0] == s);
}

TEST_CASE("half circle") {
    const double r = 66;
    Pose s{0, 0, kPi / 2}, e{2 * r, 0, 3 * kPi / 2};
    auto p = shortest_path(s, e, r);
    CHECK(std::abs(p.length - kPi * r) < 1e-9);
    CHECK(edge_cost(p, 50) == doctest::Approx(4.147).epsilon(1e-3));
    auto samples = sample_path(p, s, 7.5);
    for (const auto& q : samples) CHECK(std::abs(std::hypot(q.x - r, q.y) - r) < 1e-9);
    CHECK(near_pose(samples.back(), e, 1e-9));
}

TEST_CASE("straight sampling spacing") {
    Pose s{0, 0, 0};
    auto p = shortest_path(s, {100, 0, 0}, 66);
    auto samples = sample_path(p, s, 10);
    REQUIRE(samples.size() == 11);
    for (std::size_t i = 1; i < samples.size(); ++i)
        CHECK(std::hypot(samples[i].x - samples[i - 1].x, samples[i].y - samples[i - 1].y) ==
              doctest::Approx(10));
    CHECK_THROWS_AS(sample_path(p, s, 0), DomainError);
}

TEST_CASE("edge cost") {
    DubinsPath p;
    p.length = 100;
    CHECK(edge_cost(p, 50) == 2.0);
    p.length = 0;
    CHECK(edge_cost(p, 17) == 0.0);
}

TEST_CASE("random pairs: endpoints, Euclidean bound, word minimality") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 10000; ++i) {
        const double r = 10 + 90 * std::generate_canonical<double, 53>(rng);
        Pose a = random_pose(rng, 5 * r), b = random_pose(rng, 5 * r);
        auto p = shortest_path(a, b, r);
        CHECK(p.length >= distance(a.position(), b.position()) - 1e-9);
        double sum = 0;
        for (int j = 0; j < 3; ++j) sum += p.segment_length(j);
        CHECK(std::abs(sum - p.length) < 1e-9 * std::max(1.0, p.length));
        CHECK(near_pose(pose_at(p, a, p.length), b, 1e-6 * r));
        for (DubinsWord w : kAllWords) {
            auto q = path_for_word(a, b, r, w);
            if (!q) continue;
            CHECK(near_pose(pose_at(*q, a, q->length), b, 1e-6 * r));
            CHECK(q->length >= p.length - 1e-9);
        }
    }
}

TEST_CASE("steering lattice agrees with the analytic length") {
    std::mt19937_64 rng(11);
    int worse = 0;
    for (int i = 0; i < 1000; ++i) {
        const double r = 66;
        Pose a = random_pose(rng, 4 * r), b = random_pose(rng, 4 * r);
        auto p = shortest_path(a, b, r);
        auto ref = lattice::shortest_length({a.x, a.y, a.theta}, {b.x, b.y, b.theta}, r);
        REQUIRE(ref.has_value());
        CHECK(*ref >= 0.99 * p.length);
        if (*ref > 1.01 * p.length) ++worse;
    }
    CHECK(worse == 0);
}

TEST_CASE("sample spacing bound on random paths") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        Pose a = random_pose(rng, 300), b = random_pose(rng, 300);
        auto p = shortest_path(a, b, 40);
        auto s = sample_path(p, a, 6.0);
        CHECK(s.front() == a);
        CHECK(near_pose(s.back(), b, 1e-6));
        for (std::size_t j = 1; j < s.size(); ++j)
            CHECK(std::hypot(s[j].x - s[j - 1].x, s[j].y - s[j - 1].y) <= 6.0 + 1e-9);
    }
}

TEST_CASE("pieces of a shortest path are shortest") {
    // Any head or tail of an optimal path is itself optimal between its endpoints.
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20000; ++i) {
        const double r = 20 + 80 * u(rng);
        const Pose a(1000 * u(rng), 1000 * u(rng), kTwoPi * u(rng));
        const Pose b(1000 * u(rng), 1000 * u(rng), kTwoPi * u(rng));
        const auto p = shortest_path(a, b, r);
        // Short heads land on the first arc, the case most sensitive to round-off.
        const double s = p.length * (i % 3 == 0 ? 1e-3 * u(rng) : u(rng));
        const Pose mid = pose_at(p, a, s);
        CHECK(shortest_path(a, mid, r).length <= s + 1e-6);
        CHECK(shortest_path(mid, b, r).length <= p.length - s + 1e-6);
    }
}
