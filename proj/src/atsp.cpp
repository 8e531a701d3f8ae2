#include "ninpath/atsp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>
#include <string>

#include "ninpath/errors.hpp"
#include "ninpath/numeric.hpp"

namespace ninpath {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

struct EffortProfile {
    int restarts;
    int max_segment;
    int kicks;
};

EffortProfile profile(Effort e, int n) {
    switch (e) {
    case Effort::low: return {4, 1, 0};
    case Effort::medium: return {16, 3, 0};
    case Effort::high: return {64, std::max(1, std::min(100, n - 2)), 30};
    }
    return {4, 1, 0};
}

constexpr int kCandidates = 12;

class LocalSearch {
public:
    LocalSearch(const Eigen::MatrixXd& c, double forbidden, int max_segment)
        : C_(c), N_(static_cast<int>(c.rows())), max_segment_(max_segment) {
        double largest = 0;
        for (Eigen::Index i = 0; i < c.rows(); ++i)
            for (Eigen::Index j = 0; j < c.cols(); ++j)
                if (i != j && c(i, j) < forbidden) largest = std::max(largest, std::abs(c(i, j)));
        eps_ = 1e-12 * std::max(1.0, largest);
        out_.resize(at(N_));
        in_.resize(at(N_));
        std::vector<int> idx(at(N_));
        for (int v = 0; v < N_; ++v) {
            std::iota(idx.begin(), idx.end(), 0);
            auto build = [&](std::vector<int>& dst, auto cost_of) {
                std::vector<int> cand;
                for (int u : idx)
                    if (u != v && cost_of(u) < forbidden) cand.push_back(u);
                const auto k = std::min<std::size_t>(kCandidates, cand.size());
                std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end(),
                                  [&](int a, int b) { return cost_of(a) < cost_of(b) || (cost_of(a) == cost_of(b) && a < b); });
                cand.resize(k);
                dst = std::move(cand);
            };
            build(out_[at(v)], [&](int u) { return C_(v, u); });
            build(in_[at(v)], [&](int u) { return C_(u, v); });
        }
    }

    double eps() const { return eps_; }
    void set_max_segment(int len) { max_segment_ = len; }

    void load(std::vector<int> tour) {
        tour_ = std::move(tour);
        pos_.assign(at(N_), 0);
        for (int i = 0; i < N_; ++i) pos_[at(tour_[at(i)])] = i;
    }
    const std::vector<int>& tour() const { return tour_; }

    void optimize(const std::vector<int>& active) {
        std::deque<int> queue(active.begin(), active.end());
        std::vector<char> queued(at(N_), 0);
        for (int v : active) queued[at(v)] = 1;
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            queued[at(v)] = 0;
            std::array<int, 6> touched{};
            if (improve_from(v, touched)) {
                for (int u : touched)
                    if (!queued[at(u)]) {
                        queued[at(u)] = 1;
                        queue.push_back(u);
                    }
                if (!queued[at(v)]) {
                    queued[at(v)] = 1;
                    queue.push_back(v);
                }
            }
        }
    }

    /// Double bridge: A B C D -> A C B D.
    std::vector<int> kick(std::mt19937_64& rng) {
        std::vector<int> cuts(3);
        std::uniform_int_distribution<int> u(1, N_ - 1);
        do {
            for (auto& c : cuts) c = u(rng);
            std::sort(cuts.begin(), cuts.end());
        } while (cuts[0] == cuts[1] || cuts[1] == cuts[2]);
        std::vector<int> t;
        t.reserve(tour_.size());
        t.insert(t.end(), tour_.begin(), tour_.begin() + cuts[0]);
        t.insert(t.end(), tour_.begin() + cuts[1], tour_.begin() + cuts[2]);
        t.insert(t.end(), tour_.begin() + cuts[0], tour_.begin() + cuts[1]);
        t.insert(t.end(), tour_.begin() + cuts[2], tour_.end());
        std::vector<int> touched;
        for (int c : {0, cuts[0], cuts[1], cuts[2]}) {
            touched.push_back(tour_[at(c)]);
            touched.push_back(tour_[at((c + N_ - 1) % N_)]);
        }
        load(std::move(t));
        return touched;
    }

private:
    int next(int v) const { return tour_[at((pos_[at(v)] + 1) % N_)]; }
    int prev(int v) const { return tour_[at((pos_[at(v)] + N_ - 1) % N_)]; }

    // Best directed reinsertion of any segment that starts or ends at v.
    bool improve_from(int v, std::array<int, 6>& touched) {
        double best = -eps_;
        int best_a = -1, best_len = 0, best_c = -1;
        for (int len = 1; len <= max_segment_ && len <= N_ - 2; ++len) {
            for (int side = 0; side < 2; ++side) {
                if (len == 1 && side == 1) continue;
                const int a = side == 0 ? v : tour_[at((pos_[at(v)] - (len - 1) + N_) % N_)];
                const int b = tour_[at((pos_[at(a)] + len - 1) % N_)];
                const int p = prev(a), q = next(b);
                const double removed = C_(p, a) + C_(b, q) - C_(p, q);
                auto in_segment = [&](int x) { return (pos_[at(x)] - pos_[at(a)] + N_) % N_ < len; };
                auto consider = [&](int c) {
                    if (c == p || in_segment(c)) return;
                    const int d = next(c);
                    const double delta = C_(c, a) + C_(b, d) - C_(c, d) - removed;
                    if (delta < best) {
                        best = delta;
                        best_a = a;
                        best_len = len;
                        best_c = c;
                    }
                };
                // Beyond Or-opt lengths only first-level gains are followed (lists are sorted).
                const bool prune = len > 3;
                for (int c : in_[at(a)]) {
                    if (prune && C_(c, a) >= C_(p, a)) break;
                    consider(c);
                }
                for (int d : out_[at(b)]) {
                    if (prune && C_(b, d) >= C_(b, q)) break;
                    consider(prev(d));
                }
                consider(q);
                consider(prev(p));
            }
        }
        if (best_a < 0) return false;
        const int a = best_a;
        const int b = tour_[at((pos_[at(a)] + best_len - 1) % N_)];
        touched = {prev(a), next(b), a, b, best_c, next(best_c)};
        move_segment(a, best_len, best_c);
        return true;
    }

    void move_segment(int a, int len, int c) {
        std::vector<int> seg;
        seg.reserve(at(len));
        for (int i = 0, x = a; i < len; ++i, x = next(x)) seg.push_back(x);
        const int q = next(seg.back());
        std::vector<int> t;
        t.reserve(at(N_));
        int x = q;
        while (true) {
            t.push_back(x);
            if (x == c) break;
            x = next(x);
        }
        t.insert(t.end(), seg.begin(), seg.end());
        x = next(c);
        while (x != a) {
            t.push_back(x);
            x = next(x);
        }
        load(std::move(t));
    }

    const Eigen::MatrixXd& C_;
    int N_;
    int max_segment_;
    double eps_ = 0;
    std::vector<std::vector<int>> out_, in_;
    std::vector<int> tour_, pos_;
};

std::vector<int> nearest_neighbor(const Eigen::MatrixXd& C, int start) {
    const int n = static_cast<int>(C.rows());
    std::vector<char> used(at(n), 0);
    std::vector<int> t{start};
    used[at(start)] = 1;
    int cur = start;
    for (int step = 1; step < n; ++step) {
        int best = -1;
        for (int j = 0; j < n; ++j)
            if (!used[at(j)] && (best < 0 || C(cur, j) < C(cur, best))) best = j;
        used[at(best)] = 1;
        t.push_back(best);
        cur = best;
    }
    return t;
}

std::vector<int> canonical(const std::vector<int>& seq) {
    auto it = std::find(seq.begin(), seq.end(), 0);
    std::vector<int> out(it, seq.end());
    out.insert(out.end(), seq.begin(), it);
    return out;
}

bool uses_forbidden(const Eigen::MatrixXd& C, const std::vector<int>& seq, double forbidden) {
    for (std::size_t i = 0; i < seq.size(); ++i)
        if (!(C(seq[i], seq[(i + 1) % seq.size()]) < forbidden)) return true;
    return false;
}

}  // namespace

Effort parse_effort(std::string_view name) {
    if (name == "low") return Effort::low;
    if (name == "medium") return Effort::medium;
    if (name == "high") return Effort::high;
    throw DomainError("unknown effort level '" + std::string(name) + "'");
}

std::string_view to_string(Effort effort) {
    switch (effort) {
    case Effort::low: return "low";
    case Effort::medium: return "medium";
    case Effort::high: return "high";
    }
    return "?";
}

double tour_cost(const Eigen::MatrixXd& cost, const std::vector<int>& sequence) {
    CompensatedSum sum;
    for (std::size_t i = 0; i < sequence.size(); ++i) sum.add(cost(sequence[i], sequence[(i + 1) % sequence.size()]));
    return sum.value();
}

double tour_cost(const AtspProblem& problem, const std::vector<int>& sequence) {
    return tour_cost(problem.cost, sequence);
}

TourPermutation solve_heuristic(const Eigen::MatrixXd& cost, std::uint64_t seed, Effort effort, double forbidden) {
    const int n = static_cast<int>(cost.rows());
    if (n < 3) throw DomainError("heuristic needs at least 3 nodes");
    if (cost.cols() != cost.rows()) throw DomainError("cost matrix must be square");
    const auto prof = profile(effort, n);
    LocalSearch ls(cost, forbidden, prof.max_segment);

    TourPermutation best;
    std::vector<int> best_canon;
    bool have = false;
    for (int r = 0; r < prof.restarts; ++r) {
        std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(r) + 1);
        if (r < n) {
            ls.load(nearest_neighbor(cost, (r + static_cast<int>(seed % static_cast<std::uint64_t>(n))) % n));
        } else {
            // All greedy starts used up; fall back to random permutations.
            std::vector<int> t(static_cast<std::size_t>(n));
            std::iota(t.begin(), t.end(), 0);
            std::shuffle(t.begin(), t.end(), rng);
            ls.load(std::move(t));
        }
        if (uses_forbidden(cost, ls.tour(), forbidden)) {
            // Repair with long segment moves before the effort-specific search.
            ls.set_max_segment(std::max(1, std::min(100, n - 2)));
            ls.optimize(ls.tour());
            ls.set_max_segment(prof.max_segment);
        }
        ls.optimize(ls.tour());
        double cur = tour_cost(cost, ls.tour());
        for (int k = 0; k < prof.kicks && n >= 8; ++k) {
            const auto saved = ls.tour();
            ls.optimize(ls.kick(rng));
            const double c = tour_cost(cost, ls.tour());
            if (c < cur - ls.eps())
                cur = c;
            else
                ls.load(saved);
        }
        auto canon = canonical(ls.tour());
        if (!have || cur < best.cost || (cur == best.cost && canon < best_canon)) {
            best.sequence = ls.tour();
            best.cost = cur;
            best_canon = std::move(canon);
            have = true;
        }
    }
    best.sequence = best_canon;
    if (uses_forbidden(cost, best.sequence, forbidden))
        throw InfeasibleError("no tour avoiding forbidden edges was found");
    return best;
}

TourPermutation solve_heuristic(const AtspProblem& problem, std::uint64_t seed, Effort effort) {
    return solve_heuristic(problem.cost, seed, effort, problem.sentinel);
}

TourPermutation solve_exact(const Eigen::MatrixXd& cost, double forbidden) {
    const int n = static_cast<int>(cost.rows());
    if (n > kExactMaxNodes) throw CapacityError("exact solver handles at most 18 nodes, got " + std::to_string(n));
    if (n < 1) throw DomainError("empty matrix");
    TourPermutation out;
    if (n == 1) {
        out.sequence = {0};
        out.cost = cost(0, 0);
        return out;
    }
    // dp over subsets of nodes 1..n-1, paths starting at node 0.
    const int k = n - 1;
    const std::size_t full = std::size_t{1} << k;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dp(full * at(k), inf);
    std::vector<std::int8_t> parent(full * at(k), -1);
    auto idx = [k](std::size_t mask, int j) { return mask * static_cast<std::size_t>(k) + static_cast<std::size_t>(j); };
    for (int j = 0; j < k; ++j) dp[idx(std::size_t{1} << j, j)] = cost(0, j + 1);
    for (std::size_t mask = 1; mask < full; ++mask)
        for (int j = 0; j < k; ++j) {
            if (!(mask & (std::size_t{1} << j))) continue;
            const double base = dp[idx(mask, j)];
            if (base == inf) continue;
            for (int l = 0; l < k; ++l) {
                if (mask & (std::size_t{1} << l)) continue;
                const std::size_t nm = mask | (std::size_t{1} << l);
                const double v = base + cost(j + 1, l + 1);
                if (v < dp[idx(nm, l)]) {
                    dp[idx(nm, l)] = v;
                    parent[idx(nm, l)] = static_cast<std::int8_t>(j);
                }
            }
        }
    double best = inf;
    int last = -1;
    for (int j = 0; j < k; ++j) {
        const double v = dp[idx(full - 1, j)] + cost(j + 1, 0);
        if (v < best) {
            best = v;
            last = j;
        }
    }
    std::vector<int> rev;
    std::size_t mask = full - 1;
    for (int j = last; j >= 0;) {
        rev.push_back(j + 1);
        const int pj = parent[idx(mask, j)];
        mask ^= std::size_t{1} << j;
        j = pj;
    }
    out.sequence = {0};
    out.sequence.insert(out.sequence.end(), rev.rbegin(), rev.rend());
    out.cost = tour_cost(cost, out.sequence);
    if (uses_forbidden(cost, out.sequence, forbidden)) throw InfeasibleError("no tour avoiding forbidden edges exists");
    return out;
}

TourPermutation solve_exact(const AtspProblem& problem) { return solve_exact(problem.cost, problem.sentinel); }

}  // namespace ninpath
