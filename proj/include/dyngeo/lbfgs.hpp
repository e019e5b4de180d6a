// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace dyngeo {

// Returns f(x) and writes the gradient into grad (same size as x).
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct LbfgsOptions {
    std::size_t memory = 10;
    double wolfe_c1 = 1e-4;  // sufficient decrease
    double wolfe_c2 = 0.9;   // curvature (strong Wolfe)
    double value_tol = 1e-10;
    double gradient_tol = 1e-9;
    std::size_t max_iterations = 500;
    std::size_t max_line_search = 40;
};

enum class LbfgsStatus { ReachedTarget, SmallGradient, MaxIterations, LineSearchFailed };

std::string_view to_string(LbfgsStatus status);

struct LbfgsResult {
    double initial_value = 0.0;
    double value = 0.0;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    LbfgsStatus status = LbfgsStatus::MaxIterations;
};

/// Limited-memory BFGS with a strong-Wolfe line search (bracketing plus
/// cubic-interpolation zoom). x is updated in place and f never increases
/// between accepted iterates. Throws NonFiniteError if f or its gradient
/// stop being finite at the starting point.
LbfgsResult minimize_lbfgs(const Objective& f, std::vector<double>& x, const LbfgsOptions& options = {});

}  // namespace dyngeo
