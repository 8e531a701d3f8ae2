#pragma once

#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ninpath/transform.hpp"

namespace ninpath {

struct TourPermutation {
    std::vector<int> sequence;
    double cost = 0.0;
};

enum class Effort { low, medium, high };

Effort parse_effort(std::string_view name);
std::string_view to_string(Effort effort);

/// Cyclic cost, compensated summation.
double tour_cost(const Eigen::MatrixXd& cost, const std::vector<int>& sequence);
double tour_cost(const AtspProblem& problem, const std::vector<int>& sequence);

/// Entries >= `forbidden` are non-edges. Throws InfeasibleError if the best tour still uses one.
TourPermutation solve_heuristic(const Eigen::MatrixXd& cost, std::uint64_t seed, Effort effort,
                                double forbidden = std::numeric_limits<double>::infinity());
TourPermutation solve_heuristic(const AtspProblem& problem, std::uint64_t seed, Effort effort);

/// Held-Karp; N <= 18, otherwise CapacityError.
TourPermutation solve_exact(const Eigen::MatrixXd& cost,
                            double forbidden = std::numeric_limits<double>::infinity());
TourPermutation solve_exact(const AtspProblem& problem);

inline constexpr int kExactMaxNodes = 18;

}  // namespace ninpath
