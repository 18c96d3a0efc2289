#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "binpack/lp.hpp"

using namespace binpack;

TEST_CASE("alpha constant and its defining equation") {
    long double a = alpha_constant(1e-6L);
    CHECK(a > 1.3870L);
    CHECK(a < 1.3872L);
    long double x = 1.0L - 1.0L / a;
    CHECK(std::fabs((double)alpha_equation_residual(x)) <= 1e-9);
    // the residual brackets the root
    CHECK(alpha_equation_residual(0.2L) > 0);
    CHECK(alpha_equation_residual(0.4L) < 0);
}

TEST_CASE("size grid construction") {
    auto g10 = make_size_grid(Rational(1, 10));
    REQUIRE(g10.points.size() == 2);
    CHECK(g10.points[0] == Rational(3, 5));
    CHECK(g10.points[1] == Rational(7, 10));

    auto g4 = make_size_grid(Rational(1, 4));
    CHECK(g4.points.empty());

    auto g50 = make_size_grid(Rational(1, 50));
    for (size_t i = 1; i < g50.points.size(); ++i)
        CHECK(g50.points[i] - g50.points[i - 1] == Rational(1, 50));
    CHECK(g50.points.back() <= inv_alpha_upper_bound());
    CHECK(g50.points.front() == Rational(1, 2) + Rational(1, 50));
}

TEST_CASE("simplex solves textbook instances exactly") {
    // min -x-y st x+2y<=4, 3x+y<=6  -> optimum at x=8/5, y=6/5, obj=-14/5
    std::vector<Rational> cost{Rational(-1), Rational(-1)};
    std::vector<LpRow> rows;
    rows.push_back({{Rational(1), Rational(2)}, Relation::Le, Rational(4)});
    rows.push_back({{Rational(3), Rational(1)}, Relation::Le, Rational(6)});
    auto r = Simplex::solve(cost, rows);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.objective == Rational(-14, 5));
    CHECK(r.x[0] == Rational(8, 5));
    CHECK(r.x[1] == Rational(6, 5));

    // infeasible: x <= 1, x >= 2
    std::vector<LpRow> bad;
    bad.push_back({{Rational(1)}, Relation::Le, Rational(1)});
    bad.push_back({{Rational(1)}, Relation::Ge, Rational(2)});
    CHECK(Simplex::solve({Rational(1)}, bad).status == LpStatus::Infeasible);

    // unbounded: min -x st x >= 1
    std::vector<LpRow> unb;
    unb.push_back({{Rational(1)}, Relation::Ge, Rational(1)});
    CHECK(Simplex::solve({Rational(-1)}, unb).status == LpStatus::Unbounded);

    // equality constraints
    std::vector<LpRow> eq;
    eq.push_back({{Rational(1), Rational(1)}, Relation::Eq, Rational(3)});
    eq.push_back({{Rational(1), Rational(-1)}, Relation::Eq, Rational(1)});
    auto re = Simplex::solve({Rational(1), Rational(2)}, eq);
    REQUIRE(re.status == LpStatus::Optimal);
    CHECK(re.x[0] == Rational(2));
    CHECK(re.x[1] == Rational(1));
}

TEST_CASE("normalized LP shape and degenerate grid") {
    auto inst = build_lp(Rational(1, 10), Rational(0), true);
    CHECK(inst.cost.size() == inst.grid.points.size() + 2);

    auto empty = build_lp(Rational(1, 4), Rational(0), true);
    auto sol = solve_lp(empty);
    CHECK(sol.alpha == Rational(0));
    CHECK(sol.n0 == Rational(1));
    CHECK(sol.objective == Rational(1));
}

TEST_CASE("lp optimum lands near alpha and weak duality holds") {
    for (auto eps : {Rational(1, 10), Rational(1, 20)}) {
        auto sol = solve_lp(build_lp(eps, Rational(0), true));
        double obj = sol.objective.to_double();
        CHECK(obj > 1.2);
        CHECK(obj < 1.5);
        auto dual = analytic_dual(eps);
        CHECK(dual.objective <= sol.objective);
        auto primal = analytic_primal(eps);
        CHECK(sol.objective <= primal.objective);
    }
}

TEST_CASE("sandwich width stays within 20 eps") {
    for (auto eps : {Rational(1, 10), Rational(1, 20), Rational(1, 50)}) {
        auto sol = solve_lp(build_lp(eps, Rational(0), true));
        auto dual = analytic_dual(eps);
        auto primal = analytic_primal(eps);
        CHECK(dual.objective <= sol.objective);
        CHECK(sol.objective <= primal.objective);
        CHECK(primal.objective - dual.objective <= Rational(20) * eps);
    }
}

TEST_CASE("analytic primal is exactly feasible with positive n_x") {
    for (auto eps : {Rational(1, 10), Rational(1, 20), Rational(1, 50)}) {
        auto p = analytic_primal(eps);
        CHECK(verify_lpnew(p, make_size_grid(eps)).empty());
        for (const auto& v : p.nx) CHECK(v > Rational(0));
    }
    auto p50 = analytic_primal(Rational(1, 50));
    CHECK(p50.objective.to_double() > 1.38);
    CHECK(p50.objective.to_double() < 1.43);
}

TEST_CASE("analytic dual construction values") {
    Rational alpha_hat = rational_from_long_double(alpha_constant());
    double z = (alpha_hat * (alpha_hat - Rational(1))).to_double();
    CHECK(z > 0.5365);
    CHECK(z < 0.5375);
    auto cert = analytic_dual(Rational(1, 50));
    CHECK(verify_dual(cert, make_size_grid(Rational(1, 50))).empty());
    CHECK(cert.objective.to_double() > 1.30);
}

TEST_CASE("unnormalized LP with floors tracks the normalized one") {
    Rational eps(1, 10);
    Rational B(100);
    auto inst = build_lp(eps, B, false);
    auto sol = solve_lp(inst);
    auto norm = solve_lp(build_lp(eps, Rational(0), true));
    // optima agree within O(eps)
    CHECK((sol.objective - norm.objective).abs() <= Rational(2, 10));
}

TEST_CASE("rounding to eps multiples") {
    Rational eps(1, 10);
    auto sol = solve_lp(build_lp(eps, Rational(0), true));
    auto rd = round_to_eps_multiples(sol, eps);
    CHECK(verify_lpnew(rd, make_size_grid(eps)).empty());
    auto frozen = round_to_eps_multiples(rd, eps);
    CHECK(frozen.n0 == rd.n0);
    for (size_t i = 0; i < rd.nx.size(); ++i) CHECK(frozen.nx[i] == rd.nx[i]);
}

TEST_CASE("rounding keeps prefix sums within eps on random feasible inputs") {
    std::mt19937_64 rng(23);
    Rational eps(1, 20);
    auto grid = make_size_grid(eps);
    Rational growth_max;
    for (int trial = 0; trial < 40; ++trial) {
        LpSolution sol;
        sol.n0 = Rational(static_cast<long long>(rng() % 2000), 1000);
        sol.nx.resize(grid.points.size());
        for (auto& v : sol.nx) v = Rational(static_cast<long long>(rng() % 600), 1000);
        // repair to feasibility with a volume margin wide enough that the
        // rounding step never needs its own n_0 bump (isolates the prefix check)
        Rational margin = eps * Rational(2 * (1 + static_cast<long long>(grid.points.size())));
        Rational vol = sol.n0;
        for (size_t i = 0; i < grid.points.size(); ++i)
            vol += (Rational(1) - grid.points[i]) * sol.nx[i];
        if (vol < Rational(1) + margin) sol.n0 += Rational(1) + margin - vol;
        Rational tot = sol.n0;
        for (const auto& v : sol.nx) tot += v;
        sol.alpha = tot - Rational(1);
        for (size_t ti = 0; ti < grid.points.size(); ++ti) {
            Rational prefix = sol.n0;
            for (size_t i = 0; i < grid.points.size(); ++i)
                if (grid.points[i] <= grid.points[ti] - eps) prefix += sol.nx[i];
            sol.alpha = max(sol.alpha, prefix * (Rational(1) - grid.points[ti]));
        }
        sol.alpha = max(sol.alpha, Rational(0));
        sol.objective = sol.alpha + Rational(1);
        REQUIRE(verify_lpnew(sol, grid).empty());

        auto rd = round_to_eps_multiples(sol, eps);
        CHECK(verify_lpnew(rd, grid).empty());
        Rational pa = sol.n0, pb = rd.n0;
        CHECK((pa - pb).abs() <= eps);
        for (size_t i = 0; i < grid.points.size(); ++i) {
            pa += sol.nx[i];
            pb += rd.nx[i];
            CHECK((pa - pb).abs() <= eps);
        }
        growth_max = max(growth_max, rd.objective - sol.objective);
    }
    // recorded O(eps) growth constant
    CHECK(growth_max <= Rational(20) * eps);
}

TEST_CASE("derive frequencies") {
    Rational eps(1, 10);
    auto grid = make_size_grid(eps);
    LpSolution a;
    a.n0 = Rational(3, 10);
    a.nx.assign(grid.points.size(), Rational(0));
    auto fa = derive_frequencies(a, eps);
    CHECK(fa.T == 3);
    CHECK(fa.f0 == Rational(1));

    LpSolution b;
    b.n0 = Rational(2, 10);
    b.nx.assign(grid.points.size(), Rational(0));
    b.nx[0] = Rational(1, 10);
    auto fb = derive_frequencies(b, eps);
    CHECK(fb.T == 3);
    CHECK(fb.f0 == Rational(2, 3));
    CHECK(fb.fx[0] == Rational(1, 3));

    LpSolution zero;
    zero.n0 = Rational(0);
    zero.nx.assign(grid.points.size(), Rational(0));
    CHECK_THROWS(derive_frequencies(zero, eps));
}

TEST_CASE("pipeline frequencies obey T <= 2/eps") {
    for (auto eps : {Rational(1, 10), Rational(1, 20), Rational(1, 50)}) {
        auto sol = solve_lp(build_lp(eps, Rational(0), true));
        auto rd = round_to_eps_multiples(sol, eps);
        auto fr = derive_frequencies(rd, eps);
        CHECK(Rational(fr.T) <= Rational(2) / eps);
        Rational sum = fr.f0;
        for (const auto& f : fr.fx) sum += f;
        CHECK(sum == Rational(1));
    }
}
