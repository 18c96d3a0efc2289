// The gap/factor-revealing linear programs over the grid of large-item sizes,
// an exact dense rational simplex, analytic primal/dual certificates, and the
// rounding to eps-multiples that feeds the bin curve.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "binpack/core.hpp"

namespace binpack {

// x = 1 - 1/alpha solves 3 + ln(1/2) = ln(x) + 1/x
inline long double alpha_equation_residual(long double x) {
    return std::log(x) + 1.0L / x - 3.0L - std::log(0.5L);
}

// Bisection for alpha ~ 1.3871. The residual at the returned root is far
// below any tolerance we assert (the equation's slope near the root is ~9).
inline long double alpha_constant(long double tolerance = 1e-12L) {
    if (tolerance <= 0) throw std::invalid_argument("alpha_constant: tolerance must be > 0");
    long double lo = 0.2L, hi = 0.4L;  // residual positive at lo, negative at hi
    if (!(alpha_equation_residual(lo) > 0 && alpha_equation_residual(hi) < 0))
        throw std::logic_error("alpha_constant: bracket lost");
    for (int i = 0; i < 200; ++i) {
        long double mid = (lo + hi) / 2;
        if (mid == lo || mid == hi) break;
        (alpha_equation_residual(mid) > 0 ? lo : hi) = mid;
    }
    long double x = (lo + hi) / 2;
    return 1.0L / (1.0L - x);
}

// Certified rational upper bound on 1/alpha: verified by the sign of the
// (decreasing) residual with a margin that dwarfs long-double error.
inline Rational inv_alpha_upper_bound() {
    Rational ub(7210, 10001);
    long double r = alpha_equation_residual(1.0L - ub.to_long_double());
    if (r < 1e-6L) throw std::logic_error("inv_alpha_upper_bound: certification failed");
    return ub;
}

struct SizeGrid {
    Rational eps;
    std::vector<Rational> points;  // 1/2 + i*eps, i >= 1, point <= ub(1/alpha)
};

// eps up to 1/4 is accepted so the degenerate empty-grid case is reachable
// (1/2 + eps already exceeds the 1/alpha bound there).
inline SizeGrid make_size_grid(const Rational& eps) {
    if (eps <= Rational(0) || eps > Rational(1, 4))
        throw std::invalid_argument("make_size_grid: eps out of (0,1/4]");
    SizeGrid g;
    g.eps = eps;
    Rational ub = inv_alpha_upper_bound();
    Rational p = Rational(1, 2) + eps;
    while (p <= ub) {
        g.points.push_back(p);
        p += eps;
    }
    return g;
}

// ---- generic dense rational LP ----

enum class Relation { Le, Ge, Eq };

struct LpRow {
    std::vector<Rational> coeff;
    Relation rel;
    Rational rhs;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Optimal;
    Rational objective;
    std::vector<Rational> x;
};

// Two-phase primal simplex with Bland's rule, everything exact.
class Simplex {
public:
    // minimize cost . x  subject to rows, x >= 0
    static LpResult solve(const std::vector<Rational>& cost, std::vector<LpRow> rows) {
        size_t n = cost.size(), m = rows.size();
        for (auto& r : rows) {
            if (r.coeff.size() != n) throw std::invalid_argument("Simplex: ragged row");
            if (r.rhs.is_negative()) {
                for (auto& a : r.coeff) a = -a;
                r.rhs = -r.rhs;
                r.rel = r.rel == Relation::Le ? Relation::Ge
                        : r.rel == Relation::Ge ? Relation::Le
                                                : Relation::Eq;
            }
        }
        // columns: n structural + slacks/surplus + artificials
        size_t slack_cols = 0;
        for (const auto& r : rows)
            if (r.rel != Relation::Eq) ++slack_cols;
        size_t art_cols = 0;
        for (const auto& r : rows)
            if (r.rel != Relation::Le) ++art_cols;
        size_t total = n + slack_cols + art_cols;

        std::vector<std::vector<Rational>> A(m, std::vector<Rational>(total));
        std::vector<Rational> b(m);
        std::vector<size_t> basis(m);
        size_t scol = n, acol = n + slack_cols;
        std::vector<bool> artificial(total, false);
        for (size_t i = 0; i < m; ++i) {
            for (size_t j = 0; j < n; ++j) A[i][j] = rows[i].coeff[j];
            b[i] = rows[i].rhs;
            switch (rows[i].rel) {
                case Relation::Le:
                    A[i][scol] = Rational(1);
                    basis[i] = scol++;
                    break;
                case Relation::Ge:
                    A[i][scol] = Rational(-1);
                    ++scol;
                    A[i][acol] = Rational(1);
                    artificial[acol] = true;
                    basis[i] = acol++;
                    break;
                case Relation::Eq:
                    A[i][acol] = Rational(1);
                    artificial[acol] = true;
                    basis[i] = acol++;
                    break;
            }
        }

        // phase 1
        bool any_artificial = art_cols > 0;
        if (any_artificial) {
            std::vector<Rational> c1(total);
            for (size_t j = 0; j < total; ++j)
                if (artificial[j]) c1[j] = Rational(1);
            Rational opt = run(A, b, basis, c1, total);
            if (opt > Rational(0)) return {LpStatus::Infeasible, Rational(0), {}};
            // pivot remaining artificials out of the basis
            for (size_t i = 0; i < m; ++i) {
                if (!artificial[basis[i]]) continue;
                size_t enter = total;
                for (size_t j = 0; j < total; ++j)
                    if (!artificial[j] && !A[i][j].is_zero()) {
                        enter = j;
                        break;
                    }
                if (enter == total) continue;  // redundant row
                pivot(A, b, basis, i, enter);
            }
        }

        // phase 2: forbid artificial columns
        std::vector<Rational> c2(total);
        for (size_t j = 0; j < n; ++j) c2[j] = cost[j];
        for (size_t j = 0; j < total; ++j)
            if (artificial[j])
                for (size_t i = 0; i < m; ++i) A[i][j] = Rational(0);
        Rational opt;
        if (!phase2(A, b, basis, c2, total, opt)) return {LpStatus::Unbounded, Rational(0), {}};

        LpResult res;
        res.status = LpStatus::Optimal;
        std::vector<Rational> x(total);
        for (size_t i = 0; i < m; ++i) x[basis[i]] = b[i];
        res.x.assign(x.begin(), x.begin() + n);
        for (size_t j = 0; j < n; ++j) res.objective += cost[j] * res.x[j];
        return res;
    }

private:
    static void pivot(std::vector<std::vector<Rational>>& A, std::vector<Rational>& b,
                      std::vector<size_t>& basis, size_t row, size_t col) {
        Rational p = A[row][col];
        for (auto& a : A[row]) a /= p;
        b[row] /= p;
        for (size_t i = 0; i < A.size(); ++i) {
            if (i == row || A[i][col].is_zero()) continue;
            Rational f = A[i][col];
            for (size_t j = 0; j < A[i].size(); ++j) A[i][j] -= f * A[row][j];
            b[i] -= f * b[row];
        }
        basis[row] = col;
    }

    static Rational reduced_cost(const std::vector<std::vector<Rational>>& A,
                                 const std::vector<size_t>& basis,
                                 const std::vector<Rational>& c, size_t j) {
        Rational r = c[j];
        for (size_t i = 0; i < A.size(); ++i) r -= c[basis[i]] * A[i][j];
        return r;
    }

    static bool phase2(std::vector<std::vector<Rational>>& A, std::vector<Rational>& b,
                       std::vector<size_t>& basis, const std::vector<Rational>& c, size_t total,
                       Rational& out) {
        while (true) {
            size_t enter = total;
            for (size_t j = 0; j < total; ++j) {  // Bland: lowest eligible index
                bool in_basis = false;
                for (size_t i = 0; i < basis.size(); ++i)
                    if (basis[i] == j) in_basis = true;
                if (in_basis) continue;
                if (reduced_cost(A, basis, c, j) < Rational(0)) {
                    enter = j;
                    break;
                }
            }
            if (enter == total) break;
            size_t leave = A.size();
            Rational best_ratio;
            for (size_t i = 0; i < A.size(); ++i) {
                if (A[i][enter] <= Rational(0)) continue;
                Rational ratio = b[i] / A[i][enter];
                if (leave == A.size() || ratio < best_ratio ||
                    (ratio == best_ratio && basis[i] < basis[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave == A.size()) return false;  // unbounded
            pivot(A, b, basis, leave, enter);
        }
        out = Rational(0);
        for (size_t i = 0; i < basis.size(); ++i) out += c[basis[i]] * b[i];
        return true;
    }

    static Rational run(std::vector<std::vector<Rational>>& A, std::vector<Rational>& b,
                        std::vector<size_t>& basis, const std::vector<Rational>& c,
                        size_t total) {
        Rational out;
        if (!phase2(A, b, basis, c, total, out))
            throw std::logic_error("Simplex: phase 1 unbounded");
        return out;
    }
};

// ---- the concrete LPs ----

// Variable layout: [n_0 (or N_0), n_x for each grid point, alpha' (or alpha)].
struct LpInstance {
    SizeGrid grid;
    Rational B;        // meaningful when !normalized
    bool normalized = true;
    long long floor_pow_c = 1;  // c in the B - 1/B^c volume term
    std::vector<Rational> cost;
    std::vector<LpRow> rows;
};

struct LpSolution {
    Rational objective;  // alpha'+1 when normalized, alpha when not
    Rational n0;
    std::vector<Rational> nx;
    Rational alpha;      // alpha' when normalized
};

inline LpInstance build_lp(const Rational& eps, const Rational& B, bool normalized,
                           long long c = 1) {
    if (eps <= Rational(0) || eps > Rational(1, 4))
        throw std::invalid_argument("build_lp: eps out of (0,1/4]");
    if (!normalized && B < Rational(1) / eps)
        throw std::invalid_argument("build_lp: B must be >= 1/eps");
    LpInstance inst;
    inst.grid = make_size_grid(eps);
    inst.B = B;
    inst.normalized = normalized;
    inst.floor_pow_c = c;
    size_t m = inst.grid.points.size();
    size_t nvars = m + 2;
    size_t alpha_col = m + 1;
    inst.cost.assign(nvars, Rational(0));
    inst.cost[alpha_col] = Rational(1);

    auto row = [&](Relation rel, Rational rhs) {
        LpRow r;
        r.coeff.assign(nvars, Rational(0));
        r.rel = rel;
        r.rhs = std::move(rhs);
        return r;
    };

    if (normalized) {
        // n_0 + sum (1-x) n_x >= 1
        LpRow vol = row(Relation::Ge, Rational(1));
        vol.coeff[0] = Rational(1);
        for (size_t i = 0; i < m; ++i) vol.coeff[i + 1] = Rational(1) - inst.grid.points[i];
        inst.rows.push_back(vol);
        // n_0 + sum n_x - alpha' <= 1
        LpRow small = row(Relation::Le, Rational(1));
        small.coeff[0] = Rational(1);
        for (size_t i = 0; i < m; ++i) small.coeff[i + 1] = Rational(1);
        small.coeff[alpha_col] = Rational(-1);
        inst.rows.push_back(small);
        // n_0 + sum_{x <= t-eps} n_x - alpha'/(1-t) <= 0  for each grid t
        for (size_t ti = 0; ti < m; ++ti) {
            const Rational& t = inst.grid.points[ti];
            LpRow cr = row(Relation::Le, Rational(0));
            cr.coeff[0] = Rational(1);
            for (size_t i = 0; i < m; ++i)
                if (inst.grid.points[i] <= t - eps) cr.coeff[i + 1] = Rational(1);
            cr.coeff[alpha_col] = Rational(-1) / (Rational(1) - t);
            inst.rows.push_back(cr);
        }
    } else {
        // N_0 + sum (1-x) N_x >= B - 1/B^c
        Rational pow_bc(1);
        for (long long i = 0; i < c; ++i) pow_bc *= B;
        LpRow vol = row(Relation::Ge, B - Rational(1) / pow_bc);
        vol.coeff[0] = Rational(1);
        for (size_t i = 0; i < m; ++i) vol.coeff[i + 1] = Rational(1) - inst.grid.points[i];
        inst.rows.push_back(vol);
        // N_0 + sum N_x <= alpha B
        LpRow small = row(Relation::Le, Rational(0));
        small.coeff[0] = Rational(1);
        for (size_t i = 0; i < m; ++i) small.coeff[i + 1] = Rational(1);
        small.coeff[alpha_col] = -B;
        inst.rows.push_back(small);
        // N_0 + sum_{x <= t-eps} N_x + floor(B/(1-t)) <= alpha ceil(B/(1-t))
        for (size_t ti = 0; ti < m; ++ti) {
            const Rational& t = inst.grid.points[ti];
            Rational q = B / (Rational(1) - t);
            LpRow cr = row(Relation::Le, Rational(-q.floor_i64()));
            cr.coeff[0] = Rational(1);
            for (size_t i = 0; i < m; ++i)
                if (inst.grid.points[i] <= t - eps) cr.coeff[i + 1] = Rational(1);
            cr.coeff[alpha_col] = Rational(-q.ceil_i64());
            inst.rows.push_back(cr);
        }
    }
    return inst;
}

inline LpSolution solve_lp(const LpInstance& inst) {
    LpResult r = Simplex::solve(inst.cost, inst.rows);
    if (r.status == LpStatus::Infeasible) throw std::runtime_error("solve_lp: infeasible");
    if (r.status == LpStatus::Unbounded) throw std::runtime_error("solve_lp: unbounded");
    LpSolution sol;
    size_t m = inst.grid.points.size();
    sol.n0 = r.x[0];
    sol.nx.assign(r.x.begin() + 1, r.x.begin() + 1 + m);
    sol.alpha = r.x[m + 1];
    sol.objective = inst.normalized ? sol.alpha + Rational(1) : sol.alpha;
    return sol;
}

// Exact residual check against LPnew_eps; returns violation descriptions.
inline std::vector<std::string> verify_lpnew(const LpSolution& sol, const SizeGrid& grid) {
    std::vector<std::string> bad;
    Rational vol = sol.n0;
    Rational tot = sol.n0;
    if (sol.n0.is_negative()) bad.push_back("n_0 < 0");
    for (size_t i = 0; i < grid.points.size(); ++i) {
        if (sol.nx[i].is_negative()) bad.push_back("n_x < 0 at x=" + grid.points[i].to_string());
        vol += (Rational(1) - grid.points[i]) * sol.nx[i];
        tot += sol.nx[i];
    }
    if (vol < Rational(1)) bad.push_back("volume constraint: " + vol.to_string() + " < 1");
    if (tot - sol.alpha > Rational(1))
        bad.push_back("small constraint: " + (tot - sol.alpha).to_string() + " > 1");
    for (size_t ti = 0; ti < grid.points.size(); ++ti) {
        const Rational& t = grid.points[ti];
        Rational prefix = sol.n0;
        for (size_t i = 0; i < grid.points.size(); ++i)
            if (grid.points[i] <= t - grid.eps) prefix += sol.nx[i];
        if (prefix > sol.alpha / (Rational(1) - t))
            bad.push_back("CR constraint violated at t=" + t.to_string());
    }
    return bad;
}

// Feasible LPnew solution from the closed-form construction; the log-based
// n_0 is evaluated in long double, then exact bumps restore feasibility.
inline LpSolution analytic_primal(const Rational& eps) {
    SizeGrid grid = make_size_grid(eps);
    long double alpha_ld = alpha_constant();
    Rational alpha_hat = rational_from_long_double(alpha_ld);
    Rational C = alpha_hat - Rational(1);

    LpSolution sol;
    sol.nx.resize(grid.points.size());
    for (size_t i = 0; i < grid.points.size(); ++i) {
        const Rational& x = grid.points[i];
        // integral of C/(1-y)^2 over [x-eps, x]
        sol.nx[i] = C * (Rational(1) / (Rational(1) - x) - Rational(1) / (Rational(1) - x + eps));
    }
    long double n0_ld = 1.0L - (alpha_ld - 1.0L) * std::log(0.5L) +
                        (alpha_ld - 1.0L) * std::log(1.0L - 1.0L / alpha_ld);
    sol.n0 = rational_from_long_double(n0_ld);

    // bump n_0 by the exact volume deficit
    Rational vol = sol.n0;
    for (size_t i = 0; i < grid.points.size(); ++i)
        vol += (Rational(1) - grid.points[i]) * sol.nx[i];
    if (vol < Rational(1)) sol.n0 += Rational(1) - vol;

    // alpha' is set to the exact max the remaining constraints demand
    Rational tot = sol.n0;
    for (const auto& v : sol.nx) tot += v;
    Rational alpha_prime = tot - Rational(1);
    for (size_t ti = 0; ti < grid.points.size(); ++ti) {
        const Rational& t = grid.points[ti];
        Rational prefix = sol.n0;
        for (size_t i = 0; i < grid.points.size(); ++i)
            if (grid.points[i] <= t - eps) prefix += sol.nx[i];
        alpha_prime = max(alpha_prime, prefix * (Rational(1) - t));
    }
    sol.alpha = max(alpha_prime, Rational(0));
    sol.objective = sol.alpha + Rational(1);
    if (!verify_lpnew(sol, grid).empty())
        throw std::logic_error("analytic_primal: construction infeasible");
    return sol;
}

struct DualCertificate {
    Rational Z, q0;
    std::vector<Rational> qt;  // aligned with grid points
    Rational objective;        // Z - q0 + 1
};

// Exact residuals of (d1),(d2),(d3); empty means feasible.
inline std::vector<std::string> verify_dual(const DualCertificate& cert, const SizeGrid& grid) {
    std::vector<std::string> bad;
    Rational d1 = cert.q0;
    Rational d2 = cert.q0;
    for (size_t i = 0; i < grid.points.size(); ++i) {
        if (cert.qt[i].is_negative()) bad.push_back("q_t < 0");
        d1 += cert.qt[i] / (Rational(1) - grid.points[i]);
        d2 += cert.qt[i];
    }
    if (cert.q0.is_negative()) bad.push_back("q_0 < 0");
    if (cert.Z.is_negative()) bad.push_back("Z < 0");
    if (d1 > Rational(1)) bad.push_back("(d1) violated: " + d1.to_string() + " > 1");
    if (d2 < cert.Z) bad.push_back("(d2) violated");
    for (size_t xi = 0; xi < grid.points.size(); ++xi) {
        Rational lhs = cert.q0;
        for (size_t ti = 0; ti < grid.points.size(); ++ti)
            if (grid.points[ti] >= grid.points[xi] + grid.eps) lhs += cert.qt[ti];
        if (lhs < (Rational(1) - grid.points[xi]) * cert.Z)
            bad.push_back("(d3) violated at x=" + grid.points[xi].to_string());
    }
    return bad;
}

// Dual certificate Z = a(a-1), q_0 = (a-1)^2, q_{1/2+eps} = a(a-1)/2,
// q_t = a(a-1) eps, with an exact q_0 bump for (d2),(d3) and a final uniform
// scale-down restoring (d1). Throws if the construction needs more than the
// O(eps) slack the proof promises.
inline DualCertificate analytic_dual(const Rational& eps) {
    SizeGrid grid = make_size_grid(eps);
    Rational alpha_hat = rational_from_long_double(alpha_constant());
    DualCertificate cert;
    cert.Z = alpha_hat * (alpha_hat - Rational(1));
    cert.q0 = (alpha_hat - Rational(1)) * (alpha_hat - Rational(1));
    cert.qt.assign(grid.points.size(), cert.Z * eps);
    if (!grid.points.empty()) cert.qt[0] = cert.Z / Rational(2);

    // minimal q_0 bump making (d2) and (d3) hold
    Rational need(0);
    {
        Rational d2 = cert.q0;
        for (const auto& q : cert.qt) d2 += q;
        need = max(need, cert.Z - d2);
        for (size_t xi = 0; xi < grid.points.size(); ++xi) {
            Rational lhs = cert.q0;
            for (size_t ti = 0; ti < grid.points.size(); ++ti)
                if (grid.points[ti] >= grid.points[xi] + eps) lhs += cert.qt[ti];
            need = max(need, (Rational(1) - grid.points[xi]) * cert.Z - lhs);
        }
    }
    if (need > Rational(10) * eps + Rational(1, 2))
        throw std::logic_error("analytic_dual: q_0 bump exceeds the expected O(eps) slack");
    cert.q0 += need;

    // (d1) may now exceed 1; scaling the whole certificate keeps (d2),(d3)
    Rational d1 = cert.q0;
    for (size_t i = 0; i < grid.points.size(); ++i)
        d1 += cert.qt[i] / (Rational(1) - grid.points[i]);
    if (d1 > Rational(1)) {
        cert.q0 /= d1;
        cert.Z /= d1;
        for (auto& q : cert.qt) q /= d1;
    }
    cert.objective = cert.Z - cert.q0 + Rational(1);
    if (!verify_dual(cert, grid).empty())
        throw std::logic_error("analytic_dual: certificate infeasible after adjustment");
    return cert;
}

// Round {n_x} to multiples of eps keeping every prefix sum within eps of the
// original, then restore feasibility with exact n_0 / alpha' bumps.
inline LpSolution round_to_eps_multiples(const LpSolution& sol, const Rational& eps) {
    SizeGrid grid = make_size_grid(eps);
    if (sol.nx.size() != grid.points.size())
        throw std::invalid_argument("round_to_eps_multiples: solution/grid mismatch");
    LpSolution out = sol;
    Rational delta;        // prefix sum of originals (over x' < x)
    Rational delta_tilde;  // prefix sum of rounded values
    auto round_one = [&](const Rational& v) {
        Rational q = v / eps;
        BigInt f = q.floor();
        Rational down = Rational(f, BigInt(1)) * eps;
        bool up = delta > delta_tilde;
        Rational r = up ? (down == v ? v : down + eps) : down;
        delta += v;
        delta_tilde += r;
        return r;
    };
    out.n0 = round_one(sol.n0);
    for (size_t i = 0; i < grid.points.size(); ++i) out.nx[i] = round_one(sol.nx[i]);

    // volume deficit is repaired in eps steps so n_0 stays a multiple
    Rational vol = out.n0;
    for (size_t i = 0; i < grid.points.size(); ++i)
        vol += (Rational(1) - grid.points[i]) * out.nx[i];
    if (vol < Rational(1)) {
        Rational deficit = Rational(1) - vol;
        out.n0 += Rational((deficit / eps).ceil(), BigInt(1)) * eps;
    }
    Rational tot = out.n0;
    for (const auto& v : out.nx) tot += v;
    Rational alpha_prime = tot - Rational(1);
    for (size_t ti = 0; ti < grid.points.size(); ++ti) {
        const Rational& t = grid.points[ti];
        Rational prefix = out.n0;
        for (size_t i = 0; i < grid.points.size(); ++i)
            if (grid.points[i] <= t - eps) prefix += out.nx[i];
        alpha_prime = max(alpha_prime, prefix * (Rational(1) - t));
    }
    out.alpha = max(max(alpha_prime, sol.alpha), Rational(0));
    out.objective = out.alpha + Rational(1);
    if (!verify_lpnew(out, grid).empty())
        throw std::logic_error("round_to_eps_multiples: infeasible after bumps");
    return out;
}

struct Frequencies {
    long long T = 0;
    Rational f0;
    std::vector<Rational> fx;  // aligned with grid points
};

// f_x = n_x / sum n_x with every n a multiple of eps; T = sum(n_x/eps).
inline Frequencies derive_frequencies(const LpSolution& rounded, const Rational& eps) {
    SizeGrid grid = make_size_grid(eps);
    auto as_int = [&](const Rational& v) {
        Rational q = v / eps;
        if (q != Rational(q.floor(), BigInt(1)))
            throw std::invalid_argument("derive_frequencies: value not a multiple of eps");
        return q.floor_i64();
    };
    Frequencies fr;
    long long i0 = as_int(rounded.n0);
    std::vector<long long> ix(grid.points.size());
    fr.T = i0;
    for (size_t i = 0; i < grid.points.size(); ++i) {
        ix[i] = as_int(rounded.nx[i]);
        fr.T += ix[i];
    }
    if (fr.T == 0) throw std::invalid_argument("derive_frequencies: all-zero solution");
    fr.f0 = Rational(i0, fr.T);
    fr.fx.resize(grid.points.size());
    for (size_t i = 0; i < grid.points.size(); ++i) fr.fx[i] = Rational(ix[i], fr.T);
    return fr;
}

// Measured alpha for an integer bin profile (bins of free space x hold
// N_x bins), checked against the unnormalized LP with small volume B.
struct ProfileReport {
    Rational alpha_measured;   // max ratio over the small/CR constraints
    Rational covered_volume;   // N_0 + sum (1-x) N_x
    bool volume_ok = false;    // covered >= (1 - vol_slack) * B
    Rational vol_slack;
};

inline ProfileReport profile_alpha(const Rational& n0, const std::vector<Rational>& nx,
                                   const SizeGrid& grid, const Rational& B) {
    ProfileReport rep;
    rep.covered_volume = n0;
    Rational tot = n0;
    for (size_t i = 0; i < grid.points.size(); ++i) {
        rep.covered_volume += (Rational(1) - grid.points[i]) * nx[i];
        tot += nx[i];
    }
    if (B.is_zero()) {
        rep.alpha_measured = Rational(0);
        rep.volume_ok = true;
        rep.vol_slack = Rational(0);
        return rep;
    }
    rep.alpha_measured = tot / B;
    for (size_t ti = 0; ti < grid.points.size(); ++ti) {
        const Rational& t = grid.points[ti];
        Rational prefix = n0;
        for (size_t i = 0; i < grid.points.size(); ++i)
            if (grid.points[i] <= t - grid.eps) prefix += nx[i];
        Rational q = B / (Rational(1) - t);
        Rational lhs = prefix + Rational(q.floor(), BigInt(1));
        Rational rhs_unit = Rational(q.ceil(), BigInt(1));
        rep.alpha_measured = max(rep.alpha_measured, lhs / rhs_unit);
    }
    rep.vol_slack = rep.covered_volume >= B ? Rational(0)
                                            : (B - rep.covered_volume) / B;
    rep.volume_ok = rep.covered_volume >= B || rep.vol_slack <= grid.eps * Rational(5);
    return rep;
}

}  // namespace binpack
