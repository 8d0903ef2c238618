#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uli/error.hpp"
#include "uli/linear.hpp"
#include "uli/rational.hpp"

namespace uli {

/// Feasibility of { x >= 0 : A x = b } in exact arithmetic.
struct LinearSystem {
    RationalMatrix a;
    std::vector<Rational> b;

    std::size_t rows() const noexcept { return a.size(); }
    std::size_t cols() const noexcept { return a.empty() ? 0 : a.front().size(); }
};

enum class LpMethod { Auto, FourierMotzkin, Simplex };

inline std::string_view to_string(LpMethod m)
{
    switch (m) {
    case LpMethod::Auto: return "auto";
    case LpMethod::FourierMotzkin: return "fourier-motzkin";
    case LpMethod::Simplex: return "simplex";
    }
    return "unknown";
}

/// Either a witness x (x >= 0, A x = b) or a Farkas vector y with
/// A^T y >= 0 and b^T y < 0, which rules out every non-negative solution.
struct LpResult {
    bool feasible = false;
    std::vector<Rational> x;
    std::vector<Rational> farkas;
    LpMethod method = LpMethod::Auto;
};

inline void validate(const LinearSystem& sys)
{
    require(sys.b.size() == sys.rows(), ErrorKind::InvalidArgument, "right-hand side length differs from row count");
    for (const auto& row : sys.a)
        require(row.size() == sys.cols(), ErrorKind::InvalidArgument, "ragged constraint matrix");
}

/// Re-checks a result by substitution.
inline bool verify(const LinearSystem& sys, const LpResult& result)
{
    const std::size_t m = sys.rows();
    const std::size_t n = sys.cols();
    if (result.feasible) {
        if (result.x.size() != n)
            return false;
        for (const auto& v : result.x)
            if (v < 0)
                return false;
        for (std::size_t i = 0; i < m; ++i) {
            Rational lhs = 0;
            for (std::size_t j = 0; j < n; ++j)
                lhs += sys.a[i][j] * result.x[j];
            if (lhs != sys.b[i])
                return false;
        }
        return true;
    }
    if (result.farkas.size() != m)
        return false;
    for (std::size_t j = 0; j < n; ++j) {
        Rational column = 0;
        for (std::size_t i = 0; i < m; ++i)
            column += sys.a[i][j] * result.farkas[i];
        if (column < 0)
            return false;
    }
    Rational value = 0;
    for (std::size_t i = 0; i < m; ++i)
        value += sys.b[i] * result.farkas[i];
    return value < 0;
}

namespace detail {

/// Reduced row echelon form of [A | b] with the row operations recorded.
struct Echelon {
    RationalMatrix rows;                 // r x (n + 1), last column is the rhs
    RationalMatrix transform;            // r x m, rows = transform * [A | b]
    std::vector<std::size_t> pivots;     // pivot column of each row
    std::optional<std::size_t> conflict; // row reading 0 = nonzero
};

inline Echelon echelon(const LinearSystem& sys)
{
    const std::size_t m = sys.rows();
    const std::size_t n = sys.cols();
    RationalMatrix work(m);
    RationalMatrix tr(m, std::vector<Rational>(m));
    for (std::size_t i = 0; i < m; ++i) {
        work[i] = sys.a[i];
        work[i].push_back(sys.b[i]);
        tr[i][i] = 1;
    }
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < m; ++col) {
        std::size_t pivot = row;
        while (pivot < m && work[pivot][col] == 0)
            ++pivot;
        if (pivot == m)
            continue;
        std::swap(work[pivot], work[row]);
        std::swap(tr[pivot], tr[row]);
        const Rational inv = 1 / work[row][col];
        for (auto& v : work[row])
            v *= inv;
        for (auto& v : tr[row])
            v *= inv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == row || work[i][col] == 0)
                continue;
            const Rational f = work[i][col];
            for (std::size_t j = 0; j <= n; ++j)
                work[i][j] -= f * work[row][j];
            for (std::size_t j = 0; j < m; ++j)
                tr[i][j] -= f * tr[row][j];
        }
        pivots.push_back(col);
        ++row;
    }
    Echelon out;
    for (std::size_t i = row; i < m; ++i)
        if (work[i][n] != 0) {
            out.conflict = i;
            break;
        }
    out.rows = std::move(work);
    out.transform = std::move(tr);
    out.pivots = std::move(pivots);
    return out;
}

/// c + sum_f coeff[f] * t_f >= 0, a non-negative combination (`origin`) of
/// the base inequalities x_j >= 0.
struct Inequality {
    std::vector<Rational> coeff;
    Rational constant;
    std::vector<Rational> origin;

    std::size_t support() const
    {
        return static_cast<std::size_t>(std::count_if(origin.begin(), origin.end(), [](const Rational& v) { return v != 0; }));
    }

    void normalize()
    {
        const auto it = std::find_if(coeff.begin(), coeff.end(), [](const Rational& v) { return v != 0; });
        const Rational scale = it != coeff.end() ? abs(*it) : (constant != 0 ? abs(constant) : Rational(1));
        for (auto& v : coeff)
            v /= scale;
        constant /= scale;
        for (auto& v : origin)
            v /= scale;
    }
};

inline std::vector<Rational> farkas_from_echelon_row(const Echelon& e, std::size_t row)
{
    const Rational rhs = e.rows[row].back();
    std::vector<Rational> y = e.transform[row];
    // y^T A = 0 and y^T b = rhs; flip so that y^T b < 0.
    if (rhs > 0)
        for (auto& v : y)
            v = -v;
    return y;
}

} // namespace detail

/// Fourier-Motzkin feasibility. Equalities are first solved for their pivot
/// variables; the non-negativity of all variables then becomes a system of
/// inequalities in the free variables, which are eliminated one at a time
/// (fewest generated pairs first, lowest index on ties). Combinations whose
/// origin involves more than k+1 base inequalities after k eliminations are
/// redundant and dropped.
inline LpResult solve_fourier_motzkin(const LinearSystem& sys, std::size_t max_inequalities = 200000)
{
    using detail::Inequality;
    validate(sys);
    const std::size_t n = sys.cols();
    LpResult result;
    result.method = LpMethod::FourierMotzkin;

    const auto e = detail::echelon(sys);
    if (e.conflict) {
        result.farkas = detail::farkas_from_echelon_row(e, *e.conflict);
        return result;
    }

    std::vector<int> pivot_row(n, -1);
    for (std::size_t i = 0; i < e.pivots.size(); ++i)
        pivot_row[e.pivots[i]] = static_cast<int>(i);
    std::vector<std::size_t> free_vars;
    for (std::size_t j = 0; j < n; ++j)
        if (pivot_row[j] < 0)
            free_vars.push_back(j);
    const std::size_t nf = free_vars.size();

    // Variable j as an affine function of the free variables.
    auto expression = [&](std::size_t j) {
        Inequality ineq;
        ineq.coeff.assign(nf, 0);
        ineq.origin.assign(n, 0);
        ineq.origin[j] = 1;
        if (pivot_row[j] >= 0) {
            const auto& row = e.rows[static_cast<std::size_t>(pivot_row[j])];
            ineq.constant = row[n];
            for (std::size_t f = 0; f < nf; ++f)
                ineq.coeff[f] = -row[free_vars[f]];
        } else {
            const auto pos = static_cast<std::size_t>(std::find(free_vars.begin(), free_vars.end(), j) - free_vars.begin());
            ineq.coeff[pos] = 1;
        }
        return ineq;
    };

    std::vector<Inequality> system;
    for (std::size_t j = 0; j < n; ++j)
        system.push_back(expression(j));

    auto contradiction = [&](const std::vector<Inequality>& ineqs) -> const Inequality* {
        for (const auto& ineq : ineqs)
            if (ineq.constant < 0 &&
                std::all_of(ineq.coeff.begin(), ineq.coeff.end(), [](const Rational& v) { return v == 0; }))
                return &ineq;
        return nullptr;
    };

    auto farkas_from_origin = [&](const std::vector<Rational>& mu) {
        // mu lies in the row space of A: mu^T = z^T R_A with z_i = mu[pivot_i],
        // and R_A = T A, so y = T^T z.
        std::vector<Rational> y(sys.rows(), 0);
        for (std::size_t i = 0; i < e.pivots.size(); ++i) {
            const Rational& z = mu[e.pivots[i]];
            if (z == 0)
                continue;
            for (std::size_t k = 0; k < sys.rows(); ++k)
                y[k] += z * e.transform[i][k];
        }
        return y;
    };

    std::vector<std::vector<Inequality>> stages;
    std::vector<std::size_t> order;
    std::vector<bool> eliminated(nf, false);
    for (std::size_t step = 0; step < nf; ++step) {
        if (const auto* bad = contradiction(system)) {
            result.farkas = farkas_from_origin(bad->origin);
            return result;
        }
        std::size_t best = nf;
        std::size_t best_cost = 0;
        for (std::size_t f = 0; f < nf; ++f) {
            if (eliminated[f])
                continue;
            std::size_t pos = 0, neg = 0;
            for (const auto& ineq : system) {
                pos += ineq.coeff[f] > 0;
                neg += ineq.coeff[f] < 0;
            }
            const std::size_t cost = pos * neg;
            if (best == nf || cost < best_cost) {
                best = f;
                best_cost = cost;
            }
        }
        stages.push_back(system);
        order.push_back(best);
        eliminated[best] = true;

        std::vector<Inequality> next, lower, upper;
        for (auto& ineq : system) {
            if (ineq.coeff[best] > 0)
                lower.push_back(ineq);
            else if (ineq.coeff[best] < 0)
                upper.push_back(ineq);
            else
                next.push_back(ineq);
        }
        const std::size_t support_cap = step + 2;
        for (const auto& lo : lower) {
            for (const auto& up : upper) {
                const Rational a = lo.coeff[best];
                const Rational b = -up.coeff[best];
                Inequality combined;
                combined.coeff.resize(nf);
                for (std::size_t f = 0; f < nf; ++f)
                    combined.coeff[f] = b * lo.coeff[f] + a * up.coeff[f];
                combined.coeff[best] = 0;
                combined.constant = b * lo.constant + a * up.constant;
                combined.origin.resize(n);
                for (std::size_t j = 0; j < n; ++j)
                    combined.origin[j] = b * lo.origin[j] + a * up.origin[j];
                if (combined.support() > support_cap)
                    continue;
                combined.normalize();
                next.push_back(std::move(combined));
                require(next.size() <= max_inequalities, ErrorKind::ResourceCap,
                        "Fourier-Motzkin elimination exceeded " + std::to_string(max_inequalities) + " inequalities");
            }
        }
        // Drop exact duplicates and trivially true rows, keeping first occurrences.
        std::vector<Inequality> kept;
        for (auto& ineq : next) {
            const bool trivial = ineq.constant >= 0 &&
                std::all_of(ineq.coeff.begin(), ineq.coeff.end(), [](const Rational& v) { return v == 0; });
            if (trivial)
                continue;
            const bool duplicate = std::any_of(kept.begin(), kept.end(), [&](const Inequality& k) {
                return k.constant == ineq.constant && k.coeff == ineq.coeff;
            });
            if (!duplicate)
                kept.push_back(std::move(ineq));
        }
        system = std::move(kept);
    }
    if (const auto* bad = contradiction(system)) {
        result.farkas = farkas_from_origin(bad->origin);
        return result;
    }

    // Back-substitution in reverse elimination order: each variable takes
    // its largest lower bound (else its smallest upper bound, else 0).
    std::vector<std::optional<Rational>> value(nf);
    for (std::size_t s = order.size(); s-- > 0;) {
        const std::size_t f = order[s];
        std::optional<Rational> lo, up;
        for (const auto& ineq : stages[s]) {
            if (ineq.coeff[f] == 0)
                continue;
            Rational rest = ineq.constant;
            for (std::size_t g = 0; g < nf; ++g)
                if (g != f && ineq.coeff[g] != 0)
                    rest += ineq.coeff[g] * value[g].value_or(0);
            const Rational bound = -rest / ineq.coeff[f];
            if (ineq.coeff[f] > 0)
                lo = lo ? std::max(*lo, bound) : bound;
            else
                up = up ? std::min(*up, bound) : bound;
        }
        value[f] = lo ? *lo : (up ? *up : Rational(0));
    }

    result.feasible = true;
    result.x.assign(n, 0);
    for (std::size_t f = 0; f < nf; ++f)
        result.x[free_vars[f]] = value[f].value_or(0);
    for (std::size_t i = 0; i < e.pivots.size(); ++i) {
        Rational v = e.rows[i][n];
        for (std::size_t f = 0; f < nf; ++f)
            v -= e.rows[i][free_vars[f]] * result.x[free_vars[f]];
        result.x[e.pivots[i]] = v;
    }
    if (!verify(sys, result))
        throw Error(ErrorKind::Internal, "Fourier-Motzkin produced an invalid witness");
    return result;
}

/// Phase-1 simplex on a dense tableau with Bland's rule (smallest entering
/// index with negative reduced cost; ratio ties broken by smallest basic
/// index). Artificial variables start as the basis.
inline LpResult solve_simplex(const LinearSystem& sys, std::size_t max_pivots = 100000)
{
    validate(sys);
    const std::size_t m = sys.rows();
    const std::size_t n = sys.cols();
    const std::size_t width = n + m;
    LpResult result;
    result.method = LpMethod::Simplex;

    std::vector<int> sign(m, 1);
    RationalMatrix tab(m, std::vector<Rational>(width + 1));
    for (std::size_t i = 0; i < m; ++i) {
        sign[i] = sys.b[i] < 0 ? -1 : 1;
        for (std::size_t j = 0; j < n; ++j)
            tab[i][j] = sign[i] * sys.a[i][j];
        tab[i][n + i] = 1;
        tab[i][width] = sign[i] * sys.b[i];
    }
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i)
        basis[i] = n + i;
    // Reduced costs for "minimize the sum of artificials"; last entry is -objective.
    std::vector<Rational> cost(width + 1, 0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i)
            cost[j] -= tab[i][j];
    for (std::size_t i = 0; i < m; ++i)
        cost[width] -= tab[i][width];

    for (std::size_t iter = 0;; ++iter) {
        require(iter < max_pivots, ErrorKind::ResourceCap, "simplex pivot limit reached");
        std::size_t enter = width;
        for (std::size_t j = 0; j < width; ++j)
            if (cost[j] < 0) {
                enter = j;
                break;
            }
        if (enter == width)
            break;
        std::size_t leave = m;
        Rational best_ratio;
        for (std::size_t i = 0; i < m; ++i) {
            if (tab[i][enter] <= 0)
                continue;
            const Rational ratio = tab[i][width] / tab[i][enter];
            if (leave == m || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        // The phase-1 objective is bounded below by 0.
        require(leave < m, ErrorKind::Internal, "phase-1 simplex reported unbounded");
        const Rational piv = tab[leave][enter];
        for (auto& v : tab[leave])
            v /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave || tab[i][enter] == 0)
                continue;
            const Rational f = tab[i][enter];
            for (std::size_t j = 0; j <= width; ++j)
                tab[i][j] -= f * tab[leave][j];
        }
        if (cost[enter] != 0) {
            const Rational f = cost[enter];
            for (std::size_t j = 0; j <= width; ++j)
                cost[j] -= f * tab[leave][j];
        }
        basis[leave] = enter;
    }

    const Rational objective = -cost[width];
    if (objective > 0) {
        // Duals of the sign-adjusted rows: pi_i = 1 - reduced cost of artificial i.
        result.farkas.assign(m, 0);
        for (std::size_t i = 0; i < m; ++i)
            result.farkas[i] = -sign[i] * (1 - cost[n + i]);
    } else {
        result.feasible = true;
        result.x.assign(n, 0);
        for (std::size_t i = 0; i < m; ++i)
            if (basis[i] < n)
                result.x[basis[i]] = tab[i][width];
    }
    if (!verify(sys, result))
        throw Error(ErrorKind::Internal, "simplex produced an unverifiable certificate");
    return result;
}

/// Fourier-Motzkin up to `fm_max_unknowns` unknowns, simplex above.
inline LpResult solve_feasibility(const LinearSystem& sys, LpMethod method = LpMethod::Auto,
                                  std::size_t fm_max_unknowns = 12)
{
    if (method == LpMethod::Auto)
        method = sys.cols() <= fm_max_unknowns ? LpMethod::FourierMotzkin : LpMethod::Simplex;
    return method == LpMethod::FourierMotzkin ? solve_fourier_motzkin(sys) : solve_simplex(sys);
}

} // namespace uli
