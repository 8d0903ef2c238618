#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "uli/error.hpp"
#include "uli/logic.hpp"
#include "uli/probability.hpp"

namespace uli {

enum class Principle { Ex, Px, IP, WIP, Additivity };

inline std::string_view to_string(Principle p)
{
    switch (p) {
    case Principle::Ex: return "Ex";
    case Principle::Px: return "Px";
    case Principle::IP: return "IP";
    case Principle::WIP: return "WIP";
    case Principle::Additivity: return "Additivity";
    }
    return "unknown";
}

/// Inputs of a failed instance plus both sides of the violated identity.
///
///  - Px: lhs = w(theta), rhs = w(sigma theta), `permutation` = sigma.
///  - Ex: lhs = w(theta), rhs = w(tau theta), `permutation` = tau.
///  - IP: lhs = w(theta & phi), rhs = w(theta) w(phi), phi on the next constants.
///  - WIP: as IP, theta over P_1..P_p and phi over P_{p+1}..P_{p+r} (phi is
///    stored as a description of L_r).
///  - Additivity: lhs = sum over atoms alpha of w(theta & alpha), rhs = w(theta).
struct Witness {
    StateDescription theta;
    std::optional<StateDescription> phi;
    std::vector<int> permutation;
    Rational lhs;
    Rational rhs;
};

struct CheckReport {
    Principle principle = Principle::Ex;
    int bound = 0;
    bool pass = true;
    std::optional<Witness> witness;
    // Predicate split for WIP reports.
    int p = 0;
    int r = 0;
};

struct CheckLimits {
    /// Upper bound on estimated state-description evaluations per check.
    double max_evaluations = 2.0e7;
};

namespace detail {

inline void guard(double estimate, const CheckLimits& limits, std::string_view what)
{
    if (estimate > limits.max_evaluations)
        throw Error(ErrorKind::ResourceCap, std::string(what) + " needs about " +
                                                std::to_string(static_cast<long long>(estimate)) +
                                                " evaluations, above the configured limit");
}

inline double atoms_pow(int q, int n) { return std::pow(std::ldexp(1.0, q), n); }

inline void require_bound(int n_max)
{
    require(n_max >= 1, ErrorKind::InvalidArgument, "check bound must be at least 1");
}

inline std::vector<std::vector<int>> all_perms(int n)
{
    std::vector<int> m(static_cast<std::size_t>(n));
    std::iota(m.begin(), m.end(), 1);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(m);
    } while (std::next_permutation(m.begin(), m.end()));
    return out;
}

/// Sums w over all completions of a split description: the first part fixes
/// predicates 1..p on its constants, the second fixes p+1..p+r on its own.
/// Either part may be empty.
inline Rational split_sum(const ProbabilityFunction& w, int p, int r, const std::vector<int>& low_part,
                          const std::vector<int>& high_part)
{
    const int q = p + r;
    const auto& table = atom_table(q);
    const std::size_t m = low_part.size();
    const std::size_t k = high_part.size();
    std::vector<std::uint32_t> fixed(m + k);
    if (m > 0) {
        const auto& lt = atom_table(p);
        for (std::size_t j = 0; j < m; ++j)
            fixed[j] = lt.mask(low_part[j]);
    }
    if (k > 0) {
        const auto& ht = atom_table(r);
        for (std::size_t j = 0; j < k; ++j)
            fixed[m + j] = ht.mask(high_part[j]) << p;
    }
    const int free_bits = r * static_cast<int>(m) + p * static_cast<int>(k);
    require(free_bits <= 26, ErrorKind::ResourceCap, "WIP marginal needs 2^" + std::to_string(free_bits) + " terms");
    StateDescription full;
    full.q = q;
    full.h.resize(m + k);
    Rational sum = 0;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << free_bits); ++code) {
        std::uint64_t rest = code;
        for (std::size_t j = 0; j < m + k; ++j) {
            const int width = j < m ? r : p;
            const auto bits = static_cast<std::uint32_t>(rest & ((std::uint64_t{1} << width) - 1));
            rest >>= width;
            full.h[j] = table.index_of(fixed[j] | (j < m ? bits << p : bits));
        }
        sum += w.eval_sd(full);
    }
    return sum;
}

} // namespace detail

/// Predicate exchangeability on all descriptions with 1..n_max constants and
/// all q! predicate permutations.
inline CheckReport check_px(const ProbabilityFunction& w, int n_max, const CheckLimits& limits = {})
{
    detail::require_bound(n_max);
    const int q = w.level();
    const auto perms = all_pred_perms(q);
    detail::guard(static_cast<double>(perms.size()) * detail::atoms_pow(q, n_max), limits, "Px check");
    CheckReport report;
    report.principle = Principle::Px;
    report.bound = n_max;
    for (int n = 1; n <= n_max && report.pass; ++n) {
        for_each_sd(q, static_cast<std::size_t>(n), [&](const StateDescription& sd) {
            const Rational base = w.eval_sd(sd);
            for (const auto& sigma : perms) {
                const Rational moved = w.eval_sd(apply_pred_perm(sigma, sd));
                if (moved != base) {
                    report.pass = false;
                    report.witness = Witness{sd, std::nullopt, sigma.mapping(), base, moved};
                    return false;
                }
            }
            return true;
        });
    }
    return report;
}

/// Constant exchangeability on all descriptions with up to n_max constants.
inline CheckReport check_ex(const ProbabilityFunction& w, int n_max, const CheckLimits& limits = {})
{
    detail::require_bound(n_max);
    const int q = w.level();
    double estimate = 0;
    double fact = 1;
    for (int n = 1; n <= n_max; ++n) {
        fact *= n;
        estimate += fact * detail::atoms_pow(q, n);
    }
    detail::guard(estimate, limits, "Ex check");
    CheckReport report;
    report.principle = Principle::Ex;
    report.bound = n_max;
    for (int n = 2; n <= n_max && report.pass; ++n) {
        const auto perms = detail::all_perms(n);
        for_each_sd(q, static_cast<std::size_t>(n), [&](const StateDescription& sd) {
            const Rational base = w.eval_sd(sd);
            for (const auto& tau : perms) {
                const Rational moved = w.eval_sd(apply_const_perm(tau, sd));
                if (moved != base) {
                    report.pass = false;
                    report.witness = Witness{sd, std::nullopt, tau, base, moved};
                    return false;
                }
            }
            return true;
        });
    }
    return report;
}

/// Constant irrelevance: w(theta & phi) = w(theta) w(phi) for descriptions
/// on disjoint constant blocks a_1..a_m and a_{m+1}..a_{m+k}, m + k <= n_max.
inline CheckReport check_ip(const ProbabilityFunction& w, int n_max, const CheckLimits& limits = {})
{
    detail::require_bound(n_max);
    const int q = w.level();
    double estimate = 0;
    for (int t = 2; t <= n_max; ++t)
        estimate += (t - 1) * detail::atoms_pow(q, t);
    detail::guard(estimate, limits, "IP check");
    CheckReport report;
    report.principle = Principle::IP;
    report.bound = n_max;
    for (int t = 2; t <= n_max && report.pass; ++t) {
        for (int m = 1; m < t && report.pass; ++m) {
            for_each_sd(q, static_cast<std::size_t>(m), [&](const StateDescription& theta) {
                const Rational left = w.eval_sd(theta);
                return for_each_sd(q, static_cast<std::size_t>(t - m), [&](const StateDescription& phi) {
                    const Rational lhs = w.eval_sd(theta.concat(phi));
                    const Rational rhs = left * w.eval_sd(phi);
                    if (lhs != rhs) {
                        report.pass = false;
                        report.witness = Witness{theta, phi, {}, lhs, rhs};
                        return false;
                    }
                    return true;
                });
            });
        }
    }
    return report;
}

/// Weak irrelevance for a function on L_{p+r}: theta is a description of
/// L_p (predicates P_1..P_p) on a_1..a_m, phi a description over
/// P_{p+1}..P_{p+r} on a_{m+1}..a_{m+k}; all three values are marginal sums.
inline CheckReport check_wip(const ProbabilityFunction& w, int p, int r, int n_max, const CheckLimits& limits = {})
{
    detail::require_bound(n_max);
    require(p >= 1 && r >= 1, ErrorKind::InvalidArgument, "WIP needs two non-empty predicate blocks");
    require(w.level() == p + r, ErrorKind::LevelMismatch,
            "WIP split " + std::to_string(p) + "+" + std::to_string(r) + " needs a function on L_" +
                std::to_string(p + r) + ", got L_" + std::to_string(w.level()));
    double estimate = 0;
    for (int t = 2; t <= n_max; ++t)
        for (int m = 1; m < t; ++m)
            estimate += detail::atoms_pow(p, m) * detail::atoms_pow(r, t - m) * std::ldexp(1.0, r * m + p * (t - m));
    detail::guard(estimate, limits, "WIP check");
    CheckReport report;
    report.principle = Principle::WIP;
    report.bound = n_max;
    report.p = p;
    report.r = r;
    for (int t = 2; t <= n_max && report.pass; ++t) {
        for (int m = 1; m < t && report.pass; ++m) {
            for_each_sd(p, static_cast<std::size_t>(m), [&](const StateDescription& theta) {
                const Rational left = detail::split_sum(w, p, r, theta.h, {});
                return for_each_sd(r, static_cast<std::size_t>(t - m), [&](const StateDescription& phi) {
                    const Rational lhs = detail::split_sum(w, p, r, theta.h, phi.h);
                    const Rational rhs = left * detail::split_sum(w, p, r, {}, phi.h);
                    if (lhs != rhs) {
                        report.pass = false;
                        report.witness = Witness{theta, phi, {}, lhs, rhs};
                        return false;
                    }
                    return true;
                });
            });
        }
    }
    return report;
}

/// (P2) as a refinement identity: for every theta with fewer than n_max
/// constants, the values of its one-constant extensions sum to w(theta)
/// (to 1 for the empty description).
inline CheckReport check_additivity(const ProbabilityFunction& w, int n_max, const CheckLimits& limits = {})
{
    detail::require_bound(n_max);
    const int q = w.level();
    double estimate = 0;
    for (int n = 1; n <= n_max; ++n)
        estimate += detail::atoms_pow(q, n);
    detail::guard(estimate, limits, "additivity check");
    const int count = atom_table(q).size();
    CheckReport report;
    report.principle = Principle::Additivity;
    report.bound = n_max;
    for (int n = 0; n < n_max && report.pass; ++n) {
        for_each_sd(q, static_cast<std::size_t>(n), [&](const StateDescription& theta) {
            StateDescription extended = theta;
            extended.h.push_back(1);
            Rational sum = 0;
            for (int a = 1; a <= count; ++a) {
                extended.h.back() = a;
                sum += w.eval_sd(extended);
            }
            const Rational target = n == 0 ? Rational(1) : w.eval_sd(theta);
            if (sum != target) {
                report.pass = false;
                report.witness = Witness{theta, std::nullopt, {}, sum, target};
                return false;
            }
            return true;
        });
    }
    return report;
}

/// Recomputes both sides of a witness against `w`.
inline std::pair<Rational, Rational> replay_witness(const ProbabilityFunction& w, const CheckReport& report)
{
    require(report.witness.has_value(), ErrorKind::InvalidArgument, "report carries no witness");
    const auto& wit = *report.witness;
    switch (report.principle) {
    case Principle::Px:
        return {w.eval_sd(wit.theta), w.eval_sd(apply_pred_perm(PredPermutation(wit.permutation), wit.theta))};
    case Principle::Ex:
        return {w.eval_sd(wit.theta), w.eval_sd(apply_const_perm(wit.permutation, wit.theta))};
    case Principle::IP:
        return {w.eval_sd(wit.theta.concat(*wit.phi)), w.eval_sd(wit.theta) * w.eval_sd(*wit.phi)};
    case Principle::WIP:
        return {detail::split_sum(w, report.p, report.r, wit.theta.h, wit.phi->h),
                detail::split_sum(w, report.p, report.r, wit.theta.h, {}) *
                    detail::split_sum(w, report.p, report.r, {}, wit.phi->h)};
    case Principle::Additivity: {
        StateDescription extended = wit.theta;
        extended.h.push_back(1);
        Rational sum = 0;
        for (int a = 1; a <= atom_table(w.level()).size(); ++a) {
            extended.h.back() = a;
            sum += w.eval_sd(extended);
        }
        return {sum, wit.theta.n() == 0 ? Rational(1) : w.eval_sd(wit.theta)};
    }
    }
    throw Error(ErrorKind::Internal, "unknown principle");
}

} // namespace uli
