#include "boundrat/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace boundrat {

namespace {

void require_gamma(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("discount factor must lie in (0, 1), got " + std::to_string(gamma));
}

void require_pair(double gamma, double gamma_star) {
    require_gamma(gamma);
    require_gamma(gamma_star);
    if (gamma > gamma_star)
        throw std::invalid_argument("only gamma <= gamma_star is supported");
}

}  // namespace

double f_opt(double eps, double gamma, int t) {
    require_gamma(gamma);
    if (eps < 0.0 || t < 1) throw std::invalid_argument("f_opt: need eps >= 0 and t >= 1");
    return std::min(eps / std::pow(gamma, t - 1), 1.0 / (1.0 - gamma));
}

double f_util(double eps, double gamma) {
    require_gamma(gamma);
    if (eps < 0.0) throw std::invalid_argument("f_util: need eps >= 0");
    return 2.0 * eps / (1.0 - gamma);
}

double f_bel(double eps, double gamma) {
    require_gamma(gamma);
    if (eps < 0.0 || eps > 1.0) throw std::invalid_argument("f_bel: need 0 <= eps <= 1");
    return 2.0 / (1.0 - gamma) - 2.0 / (1.0 - gamma * (1.0 - eps));
}

int discount_k(double gamma) {
    require_gamma(gamma);
    // The guard keeps exact powers of two (gamma = 0.5 gives exactly 1) from
    // rounding up.
    return static_cast<int>(std::ceil(-1.0 / std::log2(gamma) - 1e-12));
}

double f_disc_exact(double gamma, double gamma_star) {
    require_pair(gamma, gamma_star);
    if (gamma == gamma_star) return 0.0;
    int k = discount_k(gamma);
    double gs_k = std::pow(gamma_star, k);
    double gs_k1 = std::pow(gamma_star, k - 1);
    double g_k = std::pow(gamma, k);
    double g_k1 = std::pow(gamma, k - 1);
    return (gs_k + gs_k1 - 1.0) / (1.0 - gamma_star) -
           gs_k1 * (g_k + g_k1 - 1.0) / (g_k1 * (1.0 - gamma));
}

double f_disc_approx(double gamma, double gamma_star) {
    require_pair(gamma, gamma_star);
    double x = -1.0 / std::log2(gamma);
    return (2.0 * std::pow(gamma_star, x) - 1.0) / (1.0 - gamma_star);
}

bool f_disc_approx_diverges(double gamma) { return gamma < 0.9; }

DiscountProgramSolution solve_discount_program(double gamma, double gamma_star, int horizon) {
    require_pair(gamma, gamma_star);
    int k_inf = discount_k(gamma);
    if (horizon < k_inf + 1)
        throw std::invalid_argument("solve_discount_program: horizon " + std::to_string(horizon) +
                                    " < k + 1 = " + std::to_string(k_inf + 1));
    DiscountProgramSolution sol;
    sol.delta_u.assign(horizon, 0.0);
    std::vector<double> w(horizon);
    for (int t = 0; t < horizon; ++t) w[t] = std::pow(gamma, t);
    // before[k] = sum of weights of indices < k, after[k] = sum of indices > k.
    std::vector<double> suffix(horizon + 1, 0.0);
    for (int t = horizon - 1; t >= 0; --t) suffix[t] = suffix[t + 1] + w[t];
    double before = 0.0;
    int k = horizon - 1;
    double dk = 1.0;
    for (int i = 0; i < horizon; ++i) {
        double d = (before - suffix[i + 1]) / w[i];
        if (d >= -1.0 && d <= 1.0) {
            k = i;
            dk = d;
            break;
        }
        before += w[i];
    }
    for (int t = 0; t < horizon; ++t) sol.delta_u[t] = t < k ? -1.0 : (t > k ? 1.0 : dk);
    sol.k = k + 1;
    double obj = 0.0;
    for (int t = 0; t < horizon; ++t) obj += std::pow(gamma_star, t) * sol.delta_u[t];
    // With equal discounts the objective is the tight constraint itself.
    sol.epsilon = gamma == gamma_star ? 0.0 : obj;
    return sol;
}

double discount_program_constraint(const DiscountProgramSolution& solution, double gamma) {
    double s = 0.0;
    for (std::size_t t = 0; t < solution.delta_u.size(); ++t)
        s += std::pow(gamma, static_cast<double>(t)) * solution.delta_u[t];
    return s;
}

double discount_program_improvement(const DiscountProgramSolution& solution, double gamma,
                                    double gamma_star) {
    const auto& d = solution.delta_u;
    std::size_t n = d.size();
    std::vector<double> w(n), c(n);
    for (std::size_t t = 0; t < n; ++t) {
        w[t] = std::pow(gamma, static_cast<double>(t));
        c[t] = std::pow(gamma_star, static_cast<double>(t));
    }
    double slack = std::max(0.0, -discount_program_constraint(solution, gamma));
    double best = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (w[j] == 0.0) {
            // Underflowed weight: d_j is free in the constraint.
            best = std::max(best, c[j] * (1.0 - d[j]));
            continue;
        }
        // Raise d_j using the constraint's slack.
        double up = std::min(1.0 - d[j], slack / w[j]);
        best = std::max(best, c[j] * up);
        // Lower d_j alone never helps (c > 0). Raise d_j and pay with d_i.
        for (std::size_t i = 0; i < n; ++i) {
            if (i == j || w[i] == 0.0) continue;
            double delta_j = std::min(1.0 - d[j], (1.0 + d[i]) * w[i] / w[j]);
            if (delta_j <= 0.0) continue;
            double delta_i = delta_j * w[j] / w[i];
            best = std::max(best, c[j] * delta_j - c[i] * delta_i);
        }
    }
    return best;
}

CombinedBound combined_bound(double eps_o, double eps_u, double eps_rho, double gamma,
                             double gamma_star, int t) {
    double rest = f_util(eps_u, gamma) + f_bel(eps_rho, gamma) + f_disc_exact(gamma, gamma_star);
    return {f_opt(eps_o, gamma, t) + rest, eps_o + rest};
}

}  // namespace boundrat
