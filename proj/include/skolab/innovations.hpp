#pragma once

#include <string>
#include <vector>

#include "skolab/errors.hpp"
#include "skolab/rng.hpp"

namespace skolab {

enum class InnovationKind {
    ParetoRademacher, // symmetrized Pareto: xi * W, W ~ Pareto(alpha, x_min)
    Stable,           // strictly alpha-stable via trigonometric inversion
    Gaussian,
    Rademacher,
    Constant,
    ParetoPositive, // Pareto(beta, x_min); canonical heavy-tailed waiting times
};

struct InnovationModel {
    InnovationKind kind = InnovationKind::Rademacher;
    double alpha = 2.0;  // stability / Pareto index
    double skew = 0.0;   // stable skew in [-1, 1]
    double scale = 1.0;  // stable scale
    double x_min = 1.0;  // Pareto support lower bound
    double sigma = 1.0;  // gaussian
    double c = 0.0;      // constant

    void validate() const;
    static InnovationModel parse(const std::string& spec);
    std::string describe() const;
};

double sample_innovation(const InnovationModel& model, RngStream& rng);
std::vector<double> sample_innovations(const InnovationModel& model, std::size_t count, Seed seed);

/// E[theta 1{|theta| <= cut}] for a single innovation. Closed form for the
/// symmetric kinds (zero) and for Pareto; numerical integration of the
/// inversion-formula density for skewed stable laws.
double truncated_mean(const InnovationModel& model, double cut);

/// Standard strictly alpha-stable draw (unit scale) from one uniform on
/// (-1/2, 1/2) and one unit exponential, trigonometric inversion form.
double stable_draw(double alpha, double skew, RngStream& rng);

} // namespace skolab
