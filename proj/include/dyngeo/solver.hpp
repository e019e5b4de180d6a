// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dyngeo/canonical_json.hpp"
#include "dyngeo/lbfgs.hpp"
#include "dyngeo/logic_form.hpp"

#include <set>
#include <string>
#include <vector>

namespace dyngeo {

/// Residuals, one per relation (two for midpoint), each zero exactly when
/// its relation holds:
///
///   point_on_line    signed distance from P to the carrier of AB
///   point_on_circle  |P - O| - radius
///   perpendicular    dot of the unit directions
///   parallel         cross of the unit directions
///   equal_length     |AB|^2 - |CD|^2
///   fixed_length     |AB| - value
///   fixed_angle      angle AVB - value, in degrees
///   collinear        cross(B - A, C - A)
///   midpoint         2M - (A + B), x and y
///
/// Throws DegenerateRelation when a residual is undefined (e.g. a
/// zero-length direction).
std::vector<double> residuals(const LogicForm& lf);

// Sum of squared residuals.
double total_error(const LogicForm& lf);

/// Free coordinates: x, y of every unpinned point in name order.
struct ParamVector {
    std::vector<std::string> free_labels;
    std::set<std::string> pins;
    std::vector<double> values;
};

// Throws UnknownLabel for a pin that names no point.
ParamVector make_params(const LogicForm& lf, const std::set<std::string>& pins);

// dE/dparams evaluated at params.values (the form supplies pinned points).
std::vector<double> error_gradient(const LogicForm& lf, const ParamVector& params);

struct SolveOptions {
    LbfgsOptions lbfgs{};  // m = 10, c1 = 1e-4, c2 = 0.9, E < 1e-10, |g| < 1e-9, 500 iterations
    bool parallel_kernel = false;
};

struct SolveReport {
    double initial_error = 0.0;
    double final_error = 0.0;
    std::size_t iterations = 0;
    bool converged = false;  // final_error below the target
    double max_point_displacement = 0.0;
    LbfgsStatus status = LbfgsStatus::ReachedTarget;

    Json to_json() const;
};

struct SolveResult {
    LogicForm form;
    SolveReport report;
};

/// Repairs coordinates so the relations hold, starting from the current
/// drawing. Pinned points are copied through untouched.
/// Throws NoFreeParameters, NonFiniteError, DegenerateRelation, UnknownLabel.
SolveResult solve(const LogicForm& lf, const std::set<std::string>& pins = {}, const SolveOptions& options = {});

// Independent forms solved one after another, or spread across OpenMP
// threads. Both return results in input order; entries whose solve threw
// carry the message in `errors`.
struct BatchSolve {
    std::vector<SolveResult> results;
    std::vector<std::string> errors;
};
BatchSolve solve_batch_serial(const std::vector<LogicForm>& forms, const SolveOptions& options = {});
BatchSolve solve_batch_omp(const std::vector<LogicForm>& forms, const SolveOptions& options = {});

}  // namespace dyngeo
