#pragma once

// Independent reference for shortest curvature-bounded paths: searches three-segment
// steering sequences u in {-1, 0, +1} by integrating the unicycle model directly, with a
// coarse lattice over segment lengths followed by Newton polishing of the endpoint.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace lattice {

struct State {
    double x, y, th;
};

inline State integrate(State s, int u, double len, double r) {
    if (u == 0) return {s.x + len * std::cos(s.th), s.y + len * std::sin(s.th), s.th};
    const double th1 = s.th + u * len / r;
    return {s.x + (r / u) * (std::sin(th1) - std::sin(s.th)),
            s.y - (r / u) * (std::cos(th1) - std::cos(s.th)), th1};
}

inline double wrap_positive(double a) {
    const double two_pi = 2.0 * M_PI;
    a = std::fmod(a, two_pi);
    if (a < 0) a += two_pi;
    return a;
}

struct Candidate {
    double length;
    double residual;
};

/// Length of the shortest three-segment steering path from a to b found by the search, if any.
inline std::optional<double> shortest_length(State a, State b, double r) {
    const double two_pi = 2.0 * M_PI;
    const double d = std::hypot(b.x - a.x, b.y - a.y);
    std::optional<double> best;

    for (int u1 : {-1, 0, 1})
        for (int u2 : {-1, 0, 1})
            for (int u3 : {-1, 1}) {
                const double max1 = u1 == 0 ? d + 4 * r : two_pi * r;
                const double max2 = u2 == 0 ? d + 4 * r : two_pi * r;
                // Final arc closes the heading; two free lengths remain.
                auto eval = [&](double l1, double l2, double& l3, double& ex, double& ey) {
                    State s = integrate(a, u1, l1, r);
                    s = integrate(s, u2, l2, r);
                    l3 = r * wrap_positive(u3 * (b.th - s.th));
                    s = integrate(s, u3, l3, r);
                    ex = s.x - b.x;
                    ey = s.y - b.y;
                };
                constexpr int kGrid = 24;
                struct Seed {
                    double res, l1, l2;
                };
                std::vector<Seed> seeds;
                for (int i = 0; i <= kGrid; ++i)
                    for (int j = 0; j <= kGrid; ++j) {
                        const double l1 = max1 * i / kGrid, l2 = max2 * j / kGrid;
                        double l3, ex, ey;
                        eval(l1, l2, l3, ex, ey);
                        seeds.push_back({std::hypot(ex, ey), l1, l2});
                    }
                std::partial_sort(seeds.begin(), seeds.begin() + 6, seeds.end(),
                                  [](const Seed& p, const Seed& q) { return p.res < q.res; });
                for (int k = 0; k < 6; ++k) {
                    double l1 = seeds[k].l1, l2 = seeds[k].l2;
                    for (int it = 0; it < 40; ++it) {
                        double l3, ex, ey;
                        eval(l1, l2, l3, ex, ey);
                        if (std::hypot(ex, ey) < 1e-10 * std::max(1.0, r)) break;
                        const double h = 1e-7 * std::max(1.0, r);
                        double l3a, ax, ay, l3b, bx, by;
                        eval(l1 + h, l2, l3a, ax, ay);
                        eval(l1, l2 + h, l3b, bx, by);
                        const double j11 = (ax - ex) / h, j21 = (ay - ey) / h;
                        const double j12 = (bx - ex) / h, j22 = (by - ey) / h;
                        const double det = j11 * j22 - j12 * j21;
                        if (std::abs(det) < 1e-14) break;
                        double d1 = (j22 * ex - j12 * ey) / det;
                        double d2 = (-j21 * ex + j11 * ey) / det;
                        const double cap = 0.5 * r;
                        const double norm = std::hypot(d1, d2);
                        if (norm > cap) {
                            d1 *= cap / norm;
                            d2 *= cap / norm;
                        }
                        l1 = std::max(0.0, l1 - d1);
                        l2 = std::max(0.0, l2 - d2);
                    }
                    double l3, ex, ey;
                    eval(l1, l2, l3, ex, ey);
                    if (std::hypot(ex, ey) < 1e-7 * std::max(1.0, r)) {
                        const double len = l1 + l2 + l3;
                        if (!best || len < *best) best = len;
                    }
                }
            }
    return best;
}

}  // namespace lattice
