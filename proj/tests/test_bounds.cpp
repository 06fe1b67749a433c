#include <doctest.h>

#include <cmath>

#include "boundrat/bounds.hpp"
#include "boundrat/value_engine.hpp"
#include "oracles.hpp"

using namespace boundrat;

TEST_CASE("f_opt") {
    CHECK(f_opt(0.01, 0.5, 1) == doctest::Approx(0.01));
    CHECK(f_opt(0.01, 0.5, 10) == 2.0);
    CHECK(f_opt(0.125, 0.5, 3) == 0.5);
}

TEST_CASE("f_util") {
    CHECK(f_util(0.1, 0.5) == doctest::Approx(0.4));
    CHECK(f_util(0.0, 0.99) == 0.0);
    CHECK(f_util(0.1, 0.9) == doctest::Approx(2.0));
}

TEST_CASE("f_bel") {
    CHECK(f_bel(0.0, 0.7) == 0.0);
    CHECK(f_bel(0.5, 0.5) == doctest::Approx(4.0 - 8.0 / 3.0));
    CHECK(f_bel(1.0, 0.5) == doctest::Approx(2.0));
}

TEST_CASE("f_disc_exact") {
    CHECK(discount_k(0.5) == 1);
    CHECK(discount_k(0.95) == 14);
    for (double g : {0.3, 0.6, 0.99}) CHECK(std::abs(f_disc_exact(g, g)) <= 1e-12);
    CHECK(f_disc_exact(0.5, 0.9) == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(std::abs(f_disc_exact(0.95, 0.99) - oracle::discount_closed_form(0.95, 0.99)) <= 1e-9);
    CHECK(f_disc_exact(0.95, 0.99) == doctest::Approx(74.6).epsilon(1e-3));
    CHECK_THROWS_AS(f_disc_exact(0.9, 0.5), std::invalid_argument);
}

TEST_CASE("f_disc_approx") {
    CHECK(std::abs(f_disc_approx(0.95, 0.99) / f_disc_exact(0.95, 0.99) - 1.0) <= 0.01);
    CHECK_FALSE(f_disc_approx_diverges(0.95));
    CHECK(f_disc_approx_diverges(0.5));
    double same = f_disc_approx(0.99, 0.99);
    CHECK(same == doctest::Approx((2.0 * std::pow(0.99, -1.0 / std::log2(0.99)) - 1.0) / 0.01));
    // gamma^(-1/lg gamma) = 1/2, so both forms vanish on the diagonal.
    CHECK(std::abs(same - f_disc_exact(0.99, 0.99)) <= 1e-9);
    for (double g = 0.9; g < 0.99; g += 0.005) {
        for (double gs = g + 0.001; gs < 0.995; gs += 0.004) {
            double exact = f_disc_exact(g, gs);
            if (exact < 1.0) continue;
            CHECK(std::abs(f_disc_approx(g, gs) - exact) <= 0.02 * exact);
        }
    }
}

TEST_CASE("solve_discount_program") {
    DiscountProgramSolution a = solve_discount_program(0.5, 0.9, 200);
    CHECK(a.k == 1);
    CHECK(a.delta_u[0] == doctest::Approx(-1.0));
    for (std::size_t t = 1; t < a.delta_u.size(); ++t) CHECK(a.delta_u[t] == 1.0);
    CHECK(std::abs(a.epsilon - 8.0) <= 1e-4);

    DiscountProgramSolution same = solve_discount_program(0.7, 0.7, 100);
    CHECK(same.epsilon == 0.0);
    CHECK(std::abs(discount_program_constraint(same, 0.7)) <= 1e-9);

    DiscountProgramSolution b = solve_discount_program(0.95, 0.99, 3000);
    CHECK(std::abs(b.epsilon - f_disc_exact(0.95, 0.99)) <= geometric_tail(0.99, 3000) + 1e-9);

    CHECK_THROWS_AS(solve_discount_program(0.95, 0.99, 10), std::invalid_argument);
    CHECK_THROWS_AS(solve_discount_program(0.9, 0.5, 100), std::invalid_argument);
}

TEST_CASE("discount program matches the greedy LP oracle") {
    CHECK(oracle::discount_lp_greedy(0.5, 0.9, 200) == doctest::Approx(solve_discount_program(0.5, 0.9, 200).epsilon).epsilon(1e-12));
    CHECK(oracle::discount_lp_greedy(0.95, 0.99, 3000) ==
          doctest::Approx(solve_discount_program(0.95, 0.99, 3000).epsilon).epsilon(1e-10));
    oracle::Gen gen(12);
    for (int i = 0; i < 200; ++i) {
        double g = gen.uniform(0.2, 0.97);
        double gs = gen.uniform(g, 0.99);
        int T = std::max(discount_k(g) + 1, gen.integer(5, 400));
        double greedy = oracle::discount_lp_greedy(g, gs, T);
        DiscountProgramSolution sol = solve_discount_program(g, gs, T);
        CHECK(sol.epsilon == doctest::Approx(greedy).epsilon(1e-9));
    }
}

TEST_CASE("property: program solutions are feasible, structured and unimprovable") {
    oracle::Gen gen(77);
    for (int i = 0; i < 300; ++i) {
        double g = gen.uniform(0.3, 0.95);
        double gs = gen.uniform(g, 0.99);
        int T = std::max(discount_k(g) + 1, auto_horizon(gs, 1e-9));
        DiscountProgramSolution sol = solve_discount_program(g, gs, T);
        CHECK(discount_program_constraint(sol, g) <= 1e-9);
        CHECK(std::abs(discount_program_constraint(sol, g)) <= 1e-9);
        int interior = 0;
        for (std::size_t t = 0; t < sol.delta_u.size(); ++t) {
            CHECK(sol.delta_u[t] >= -1.0);
            CHECK(sol.delta_u[t] <= 1.0);
            if (t > 0) CHECK(sol.delta_u[t] >= sol.delta_u[t - 1]);
            interior += sol.delta_u[t] > -1.0 && sol.delta_u[t] < 1.0;
        }
        CHECK(interior <= 1);
        CHECK(discount_program_improvement(sol, g, gs) <= 1e-9);
        CHECK(std::abs(sol.epsilon - f_disc_exact(g, gs)) <= geometric_tail(gs, T) + 1e-9);
    }
}

TEST_CASE("improvement check detects a suboptimal solution") {
    DiscountProgramSolution sol = solve_discount_program(0.5, 0.9, 50);
    sol.delta_u.assign(50, 0.0);
    CHECK(discount_program_improvement(sol, 0.5, 0.9) > 0.1);
}

TEST_CASE("combined_bound") {
    CHECK(combined_bound(0.0, 0.1, 0.0, 0.5, 0.5, 3).self_modifying == doctest::Approx(0.4));
    CHECK(combined_bound(0.0, 0.1, 0.0, 0.5, 0.5, 3).non_self_modifying == doctest::Approx(0.4));
    CHECK(combined_bound(0.0, 0.0, 0.0, 0.5, 0.9, 2).self_modifying == doctest::Approx(f_disc_exact(0.5, 0.9)));
    CombinedBound c = combined_bound(0.01, 0.05, 0.1, 0.5, 0.9, 4);
    double terms = f_opt(0.01, 0.5, 4) + f_util(0.05, 0.5) + f_bel(0.1, 0.5) + f_disc_exact(0.5, 0.9);
    CHECK(c.self_modifying == doctest::Approx(terms).epsilon(1e-14));
    CHECK(c.self_modifying == doctest::Approx(0.08 + 0.2 + 0.36363636363636365 + 8.0).epsilon(1e-12));
    CHECK(c.non_self_modifying == doctest::Approx(0.01 + 0.2 + 0.36363636363636365 + 8.0).epsilon(1e-12));
}

TEST_CASE("property: monotonicity and saturation") {
    oracle::Gen gen(5);
    for (int i = 0; i < 2000; ++i) {
        double g = gen.uniform(0.05, 0.98);
        double e1 = gen.uniform(0.0, 1.0), e2 = gen.uniform(0.0, 1.0);
        if (e1 > e2) std::swap(e1, e2);
        int t = gen.integer(1, 40);
        CHECK(f_opt(e1, g, t) <= f_opt(e2, g, t));
        CHECK(f_opt(e1, g, t) <= f_opt(e1, g, t + 1));
        CHECK(f_util(e1, g) <= f_util(e2, g));
        CHECK(f_bel(e1, g) <= f_bel(e2, g) + 1e-12);
        CHECK(f_opt(e1, g, 1) == doctest::Approx(std::min(e1, 1.0 / (1.0 - g))));
        if (e2 > 0.0) {
            double sat = 1.0 + std::log(e2 * (1.0 - g)) / std::log(g);
            int ts = static_cast<int>(std::ceil(sat + 1e-9));
            if (ts >= 1 && ts < 200) CHECK(f_opt(e2, g, ts) == doctest::Approx(1.0 / (1.0 - g)));
        }
    }
    // f_disc_exact shrinks as gamma approaches gamma* from below.
    for (int j = 0; j < 50; ++j) {
        double gs = 0.3 + 0.69 * j / 49.0;
        double prev = f_disc_exact(0.05, gs);
        for (int i = 1; i < 50; ++i) {
            double g = std::min(gs, 0.05 + (gs - 0.05) * i / 49.0);
            double v = f_disc_exact(g, gs);
            CHECK(v <= prev + 1e-9);
            prev = v;
        }
    }
}
