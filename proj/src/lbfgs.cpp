// SPDX-License-Identifier: Apache-2.0
#include "dyngeo/lbfgs.hpp"

#include "dyngeo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>

namespace dyngeo {

std::string_view to_string(LbfgsStatus status) {
    switch (status) {
    case LbfgsStatus::ReachedTarget: return "reached_target";
    case LbfgsStatus::SmallGradient: return "small_gradient";
    case LbfgsStatus::MaxIterations: return "max_iterations";
    case LbfgsStatus::LineSearchFailed: return "line_search_failed";
    }
    return "?";
}

namespace {

using Vec = std::vector<double>;

double dotv(const Vec& a, const Vec& b) { return std::inner_product(a.begin(), a.end(), b.begin(), 0.0); }
double normv(const Vec& a) { return std::sqrt(dotv(a, a)); }

bool all_finite(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

struct Trial {
    double step = 0.0;
    double value = 0.0;
    double slope = 0.0;  // directional derivative along the search direction
    Vec x;
    Vec grad;
};

// Minimizer of the cubic through (a, fa, da) and (b, fb, db), clamped into
// the safeguarded interior of [a, b]; falls back to bisection.
double cubic_step(const Trial& a, const Trial& b) {
    const double lo = std::min(a.step, b.step), hi = std::max(a.step, b.step);
    const double width = hi - lo;
    const double bisect = 0.5 * (lo + hi);
    double d1 = a.slope + b.slope - 3.0 * (a.value - b.value) / (a.step - b.step);
    double disc = d1 * d1 - a.slope * b.slope;
    if (!(disc >= 0.0) || !std::isfinite(disc)) return bisect;
    double d2 = std::copysign(std::sqrt(disc), b.step - a.step);
    double den = b.slope - a.slope + 2.0 * d2;
    if (den == 0.0) return bisect;
    double step = b.step - (b.step - a.step) * (b.slope + d2 - d1) / den;
    if (!std::isfinite(step)) return bisect;
    return std::clamp(step, lo + 0.1 * width, hi - 0.1 * width);
}

class LineSearch {
public:
    LineSearch(const Objective& f, const LbfgsOptions& opt, const Vec& x0, double f0, const Vec& dir, double slope0,
               std::size_t& evaluations)
        : f_(f), opt_(opt), x0_(x0), f0_(f0), dir_(dir), slope0_(slope0), evals_(evaluations) {}

    // Returns false when no step satisfies the sufficient decrease condition.
    bool run(double first_step, Trial& accepted) {
        Trial prev{0.0, f0_, slope0_, x0_, {}};
        double step = first_step;
        for (std::size_t i = 0; i < opt_.max_line_search; ++i) {
            Trial cur = eval(step);
            if (!std::isfinite(cur.value)) {
                step *= 0.5;
                continue;
            }
            if (cur.value > f0_ + opt_.wolfe_c1 * step * slope0_ || (i > 0 && cur.value >= prev.value))
                return zoom(prev, cur, accepted);
            if (std::abs(cur.slope) <= -opt_.wolfe_c2 * slope0_) {
                accepted = std::move(cur);
                return true;
            }
            if (cur.slope >= 0.0) return zoom(cur, prev, accepted);
            prev = std::move(cur);
            step *= 2.0;
        }
        return false;
    }

private:
    Trial eval(double step) {
        Trial t;
        t.step = step;
        t.x.resize(x0_.size());
        for (std::size_t k = 0; k < x0_.size(); ++k) t.x[k] = x0_[k] + step * dir_[k];
        t.grad.assign(x0_.size(), 0.0);
        t.value = f_(t.x, t.grad);
        ++evals_;
        if (!all_finite(t.grad)) t.value = std::numeric_limits<double>::infinity();
        t.slope = dotv(t.grad, dir_);
        return t;
    }

    bool armijo(const Trial& t) const { return t.value <= f0_ + opt_.wolfe_c1 * t.step * slope0_; }

    bool zoom(Trial lo, Trial hi, Trial& accepted) {
        for (std::size_t j = 0; j < opt_.max_line_search; ++j) {
            if (std::abs(hi.step - lo.step) <= 1e-16 * std::max(1.0, lo.step)) break;
            double step = lo.step == 0.0 && !std::isfinite(hi.value) ? 0.5 * (lo.step + hi.step) : cubic_step(lo, hi);
            Trial cur = eval(step);
            if (!armijo(cur) || cur.value >= lo.value) {
                hi = std::move(cur);
                continue;
            }
            if (std::abs(cur.slope) <= -opt_.wolfe_c2 * slope0_) {
                accepted = std::move(cur);
                return true;
            }
            if (cur.slope * (hi.step - lo.step) >= 0.0) hi = lo;
            lo = std::move(cur);
        }
        // Interval collapsed: a step with sufficient decrease still counts.
        if (lo.step > 0.0 && armijo(lo) && lo.value < f0_) {
            accepted = std::move(lo);
            return true;
        }
        return false;
    }

    const Objective& f_;
    const LbfgsOptions& opt_;
    const Vec& x0_;
    double f0_;
    const Vec& dir_;
    double slope0_;
    std::size_t& evals_;
};

}  // namespace

LbfgsResult minimize_lbfgs(const Objective& f, std::vector<double>& x, const LbfgsOptions& opt) {
    LbfgsResult result;
    Vec grad(x.size(), 0.0);
    double value = f(x, grad);
    result.evaluations = 1;
    if (!std::isfinite(value) || !all_finite(grad)) throw NonFiniteError();
    result.initial_value = result.value = value;

    auto stop_status = [&](double v, const Vec& g) -> std::optional<LbfgsStatus> {
        if (v < opt.value_tol) return LbfgsStatus::ReachedTarget;
        if (normv(g) < opt.gradient_tol) return LbfgsStatus::SmallGradient;
        return std::nullopt;
    };
    if (auto s = stop_status(value, grad)) {
        result.status = *s;
        return result;
    }

    struct Pair {
        Vec s, y;
        double rho;
    };
    std::deque<Pair> memory;
    Vec dir(x.size());
    std::vector<double> alpha;

    result.status = LbfgsStatus::MaxIterations;
    while (result.iterations < opt.max_iterations) {
        // Two-loop recursion: dir = -H * grad.
        Vec q = grad;
        alpha.assign(memory.size(), 0.0);
        for (std::size_t k = memory.size(); k-- > 0;) {
            alpha[k] = memory[k].rho * dotv(memory[k].s, q);
            for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alpha[k] * memory[k].y[i];
        }
        double gamma = 1.0;
        if (!memory.empty()) gamma = dotv(memory.back().s, memory.back().y) / dotv(memory.back().y, memory.back().y);
        for (auto& v : q) v *= gamma;
        for (std::size_t k = 0; k < memory.size(); ++k) {
            double beta = memory[k].rho * dotv(memory[k].y, q);
            for (std::size_t i = 0; i < q.size(); ++i) q[i] += (alpha[k] - beta) * memory[k].s[i];
        }
        for (std::size_t i = 0; i < q.size(); ++i) dir[i] = -q[i];

        double slope = dotv(grad, dir);
        if (!(slope < 0.0)) {
            memory.clear();
            for (std::size_t i = 0; i < grad.size(); ++i) dir[i] = -grad[i];
            slope = dotv(grad, dir);
        }
        // Without curvature history, start with a unit-length step.
        double first = memory.empty() ? std::min(1.0, 1.0 / normv(grad)) : 1.0;

        Trial accepted;
        LineSearch search(f, opt, x, value, dir, slope, result.evaluations);
        if (!search.run(first, accepted)) {
            if (!memory.empty()) {
                memory.clear();
                continue;  // retry along steepest descent
            }
            result.status = LbfgsStatus::LineSearchFailed;
            break;
        }

        Pair pair;
        pair.s.resize(x.size());
        pair.y.resize(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            pair.s[i] = accepted.x[i] - x[i];
            pair.y[i] = accepted.grad[i] - grad[i];
        }
        double sy = dotv(pair.s, pair.y);
        x = std::move(accepted.x);
        grad = std::move(accepted.grad);
        value = accepted.value;
        ++result.iterations;
        result.value = value;

        if (sy > 1e-300) {
            pair.rho = 1.0 / sy;
            memory.push_back(std::move(pair));
            if (memory.size() > opt.memory) memory.pop_front();
        }
        if (auto s = stop_status(value, grad)) {
            result.status = *s;
            break;
        }
    }
    return result;
}

}  // namespace dyngeo
