#pragma once

// Closed-form value-loss bounds for the four kinds of bounded rationality and
// the discount-mismatch optimization program.

#include <string>
#include <vector>

namespace boundrat {

/// min(eps / gamma^(t-1), 1 / (1 - gamma)): loss of a self-modifying
/// eps-optimizer after t steps.
double f_opt(double eps, double gamma, int t);

/// 2 eps / (1 - gamma): loss of an eps-misaligned perfect optimizer.
double f_util(double eps, double gamma);

/// 2/(1-gamma) - 2/(1-gamma(1-eps)): loss of an eps-ignorant perfect optimizer.
double f_bel(double eps, double gamma);

/// ceil(-1 / lg gamma), lg the binary logarithm.
int discount_k(double gamma);

/// Exact worst-case loss of a gamma-discounting perfect optimizer judged with
/// gamma_star >= gamma. Throws std::invalid_argument if gamma > gamma_star.
double f_disc_exact(double gamma, double gamma_star);

/// (2 gamma*^(-1/lg gamma) - 1) / (1 - gamma*), accurate as gamma -> 1.
double f_disc_approx(double gamma, double gamma_star);

/// True when the approximation is used far from its validity region
/// (gamma < 0.9).
bool f_disc_approx_diverges(double gamma);

struct DiscountProgramSolution {
    std::vector<double> delta_u;  ///< per-step utility difference, entries in [-1, 1]
    double epsilon = 0.0;         ///< objective sum_t gamma*^(t-1) delta_u[t]
    int k = 0;                    ///< 1-based index of the single fractional entry
};

/// Maximizes sum gamma*^(t-1) d_t subject to sum gamma^(t-1) d_t <= 0 and
/// d_t in [-1, 1] over t = 1..T. The optimum is -1 before index k, +1 after
/// it, with d_k set so the constraint is tight. Throws std::invalid_argument
/// if gamma > gamma_star or T < discount_k(gamma) + 1.
DiscountProgramSolution solve_discount_program(double gamma, double gamma_star, int horizon);

/// Largest objective improvement found by single-coordinate and pairwise
/// exchange moves that keep the solution feasible. Zero (up to rounding) for
/// an optimal solution.
double discount_program_improvement(const DiscountProgramSolution& solution, double gamma,
                                    double gamma_star);

/// Sum gamma^(t-1) d_t.
double discount_program_constraint(const DiscountProgramSolution& solution, double gamma);

struct CombinedBound {
    double self_modifying = 0.0;      ///< f_opt at t + f_util + f_bel + f_disc
    double non_self_modifying = 0.0;  ///< eps_o + f_util + f_bel + f_disc
};

CombinedBound combined_bound(double eps_o, double eps_u, double eps_rho, double gamma,
                             double gamma_star, int t);

}  // namespace boundrat
