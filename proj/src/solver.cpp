// SPDX-License-Identifier: Apache-2.0
#include "dyngeo/solver.hpp"

#include "dyngeo/errors.hpp"
#include "dyngeo/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace dyngeo {

std::vector<double> residuals(const LogicForm& lf) {
    ConstraintSystem system(lf);
    return system.residuals(system.initial_coordinates());
}

double total_error(const LogicForm& lf) {
    ConstraintSystem system(lf);
    return system.error_serial(system.initial_coordinates(), {});
}

ParamVector make_params(const LogicForm& lf, const std::set<std::string>& pins) {
    for (const auto& pin : pins)
        if (!find_point(lf, pin)) throw UnknownLabel(pin);
    ParamVector params;
    params.pins = pins;
    auto sorted = lf.points;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    for (const auto& p : sorted) {
        if (pins.count(p.name)) continue;
        params.free_labels.push_back(p.name);
        params.values.push_back(p.x);
        params.values.push_back(p.y);
    }
    return params;
}

namespace {

// Maps between the free parameter vector and the full coordinate array.
class ParamMap {
public:
    ParamMap(const ConstraintSystem& system, const ParamVector& params) {
        std::map<std::string, std::size_t> slot;
        for (std::size_t k = 0; k < system.labels().size(); ++k) slot[system.labels()[k]] = k;
        for (const auto& label : params.free_labels) {
            auto it = slot.find(label);
            if (it == slot.end()) throw UnknownLabel(label);
            point_of_param_.push_back(it->second);
        }
    }

    void scatter(std::span<const double> params, std::vector<double>& coords) const {
        for (std::size_t k = 0; k < point_of_param_.size(); ++k) {
            coords[2 * point_of_param_[k]] = params[2 * k];
            coords[2 * point_of_param_[k] + 1] = params[2 * k + 1];
        }
    }

    void gather_gradient(const std::vector<double>& full, std::span<double> out) const {
        for (std::size_t k = 0; k < point_of_param_.size(); ++k) {
            out[2 * k] = full[2 * point_of_param_[k]];
            out[2 * k + 1] = full[2 * point_of_param_[k] + 1];
        }
    }

private:
    std::vector<std::size_t> point_of_param_;
};

}  // namespace

std::vector<double> error_gradient(const LogicForm& lf, const ParamVector& params) {
    ConstraintSystem system(lf);
    ParamMap map(system, params);
    std::vector<double> coords = system.initial_coordinates();
    map.scatter(params.values, coords);
    std::vector<double> full(coords.size(), 0.0);
    system.error_serial(coords, full);
    std::vector<double> out(params.values.size(), 0.0);
    map.gather_gradient(full, out);
    return out;
}

Json SolveReport::to_json() const {
    return Json{{"initial_error", initial_error},
                {"final_error", final_error},
                {"iterations", iterations},
                {"converged", converged},
                {"max_point_displacement", max_point_displacement},
                {"status", std::string(dyngeo::to_string(status))}};
}

SolveResult solve(const LogicForm& lf, const std::set<std::string>& pins, const SolveOptions& options) {
    ParamVector params = make_params(lf, pins);
    if (params.free_labels.empty()) throw NoFreeParameters();

    ConstraintSystem system(lf);
    ParamMap map(system, params);
    std::vector<double> coords = system.initial_coordinates();
    std::vector<double> full(coords.size(), 0.0);

    Objective objective = [&](std::span<const double> x, std::span<double> grad) {
        map.scatter(x, coords);
        double e = options.parallel_kernel ? system.error_omp(coords, full) : system.error_serial(coords, full);
        map.gather_gradient(full, grad);
        return e;
    };

    std::vector<double> x = params.values;
    LbfgsResult run = minimize_lbfgs(objective, x, options.lbfgs);

    SolveResult out{lf, {}};
    out.report.initial_error = run.initial_value;
    out.report.final_error = run.value;
    out.report.iterations = run.iterations;
    out.report.status = run.status;
    out.report.converged = run.value < options.lbfgs.value_tol;

    std::map<std::string, std::size_t> index;
    for (std::size_t k = 0; k < params.free_labels.size(); ++k) index[params.free_labels[k]] = k;
    for (auto& p : out.form.points) {
        auto it = index.find(p.name);
        if (it == index.end()) continue;
        Vec2 moved{x[2 * it->second], x[2 * it->second + 1]};
        out.report.max_point_displacement = std::max(out.report.max_point_displacement, distance(p.pos(), moved));
        p.x = moved.x;
        p.y = moved.y;
    }
    return out;
}

BatchSolve solve_batch_serial(const std::vector<LogicForm>& forms, const SolveOptions& options) {
    BatchSolve batch;
    batch.results.resize(forms.size());
    batch.errors.resize(forms.size());
    for (std::size_t i = 0; i < forms.size(); ++i) {
        try {
            batch.results[i] = solve(forms[i], {}, options);
        } catch (const Error& e) {
            batch.errors[i] = e.what();
        }
    }
    return batch;
}

BatchSolve solve_batch_omp(const std::vector<LogicForm>& forms, const SolveOptions& options) {
    BatchSolve batch;
    batch.results.resize(forms.size());
    batch.errors.resize(forms.size());
    const long n = static_cast<long>(forms.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            batch.results[k] = solve(forms[k], {}, options);
        } catch (const Error& e) {
            batch.errors[k] = e.what();
        }
    }
    return batch;
}

}  // namespace dyngeo
