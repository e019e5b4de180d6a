// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dyngeo/logic_form.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace dyngeo {

/// The relations of a form compiled against a flat coordinate array
/// [x0, y0, x1, y1, ...] indexed in the form's point order.
///
/// Two evaluators share the residual code: error_serial is the reference,
/// error_omp splits the relations across OpenMP threads. They agree up to
/// floating-point summation order.
class ConstraintSystem {
public:
    explicit ConstraintSystem(const LogicForm& lf);

    std::size_t point_count() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    std::size_t relation_count() const { return relations_.size(); }
    std::size_t residual_count() const;
    const std::vector<double>& initial_coordinates() const { return coords_; }

    // One entry per relation; midpoint contributes two (x then y).
    std::vector<double> residuals(std::span<const double> coords) const;

    // Sum of squared residuals. When grad is nonempty (size 2n) it receives
    // the gradient with respect to every coordinate.
    double error_serial(std::span<const double> coords, std::span<double> grad) const;
    double error_omp(std::span<const double> coords, std::span<double> grad) const;

private:
    struct Compiled {
        RelationKind kind;
        std::array<int, 4> idx{};
        double value = 0.0;   // fixed_length / fixed_angle target
        double radius = 0.0;  // point_on_circle
        std::string text;     // for error messages
    };

    // Writes up to two residuals and their partials with respect to the
    // (up to four) involved points. Returns the residual count.
    struct Term {
        int count = 0;
        double r[2] = {0, 0};
        Vec2 d[2][4];
    };
    static void evaluate(const Compiled& rel, std::span<const double> coords, Term& out);

    std::vector<std::string> labels_;
    std::vector<double> coords_;
    std::vector<Compiled> relations_;
};

}  // namespace dyngeo
