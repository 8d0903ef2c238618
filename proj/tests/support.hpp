#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "uli/uli.hpp"

namespace uli::testing {

inline constexpr std::uint64_t kSeed = 0x5EED2026u;

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Random point of D_{2^q} with denominators dividing `den`-ish sums.
inline SimplexPoint random_point(Rng& rng, int q, int max_weight = 6, int zero_percent = 25)
{
    const int count = 1 << q;
    std::vector<long> raw(static_cast<std::size_t>(count));
    long total = 0;
    while (total == 0) {
        total = 0;
        for (auto& v : raw) {
            v = uniform_int(rng, 1, 100) <= zero_percent ? 0 : uniform_int(rng, 1, max_weight);
            total += v;
        }
    }
    std::vector<Rational> x;
    for (long v : raw)
        x.emplace_back(v, total);
    return SimplexPoint(q, std::move(x));
}

/// Random Px point via alternative notation.
inline SimplexPoint random_px_point(Rng& rng, int q, int max_weight = 6)
{
    std::vector<long> raw(static_cast<std::size_t>(q) + 1);
    long total = 0;
    while (total == 0) {
        total = 0;
        for (std::size_t k = 0; k < raw.size(); ++k) {
            raw[k] = uniform_int(rng, 0, max_weight);
            total += raw[k] * binomial(q, static_cast<std::int64_t>(k)).convert_to<long>();
        }
    }
    std::vector<Rational> c;
    for (long v : raw)
        c.emplace_back(v, total);
    return from_alt(AltNotation(q, std::move(c)));
}

inline std::vector<Rational> random_rationals(Rng& rng, std::size_t n, int lo, int hi, int max_den)
{
    std::vector<Rational> out;
    for (std::size_t i = 0; i < n; ++i)
        out.emplace_back(uniform_int(rng, lo, hi), uniform_int(rng, 1, max_den));
    return out;
}

/// Random nu x nu 0/1 matrix; rows are grouped into slots of equal bits.
inline UpsilonMatrix random_upsilon(Rng& rng, int nu)
{
    std::vector<UpsilonMatrix::Row> rows;
    for (int i = 0; i < nu; ++i) {
        BitRow bits(static_cast<std::size_t>(nu));
        for (auto&& b : bits)
            b = uniform_int(rng, 0, 1) == 1;
        auto it = std::find_if(rows.begin(), rows.end(), [&](const auto& r) { return r.bits == bits; });
        if (it != rows.end())
            ++it->mult;
        else
            rows.push_back({bits, 1});
    }
    return UpsilonMatrix(nu, std::move(rows));
}

inline std::vector<int> random_permutation(Rng& rng, int n)
{
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 1);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

inline StateDescription random_sd(Rng& rng, int q, int n)
{
    std::vector<int> h(static_cast<std::size_t>(n));
    for (auto& a : h)
        a = uniform_int(rng, 1, 1 << q);
    return StateDescription(q, std::move(h));
}

// ---------------------------------------------------------------------------
// Oracles written independently of the library internals.

/// Atom index of a sign vector: earlier blocks by number of zeros, then the
/// vectors of the same block with larger binary value (eps_1 most significant).
inline int oracle_atom_index(const std::vector<bool>& eps)
{
    const int q = static_cast<int>(eps.size());
    auto zeros = [&](const std::vector<bool>& v) { return static_cast<int>(std::count(v.begin(), v.end(), false)); };
    auto value = [&](const std::vector<bool>& v) {
        long x = 0;
        for (bool b : v)
            x = 2 * x + (b ? 1 : 0);
        return x;
    };
    int before = 0;
    for (long code = 0; code < (1L << q); ++code) {
        std::vector<bool> other(static_cast<std::size_t>(q));
        for (int i = 0; i < q; ++i)
            other[static_cast<std::size_t>(i)] = (code >> (q - 1 - i)) & 1;
        if (zeros(other) < zeros(eps) || (zeros(other) == zeros(eps) && value(other) > value(eps)))
            ++before;
    }
    return before + 1;
}

/// Leibniz expansion over all permutations.
inline Rational leibniz_determinant(const RationalMatrix& a)
{
    const std::size_t n = a.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rational total = 0;
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (perm[i] > perm[j])
                    ++inversions;
        Rational term = inversions % 2 == 0 ? 1 : -1;
        for (std::size_t i = 0; i < n && term != 0; ++i)
            term *= a[i][perm[i]];
        total += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

/// Expanded rows of Upsilon (each slot repeated by multiplicity).
inline std::vector<BitRow> expanded_rows(const UpsilonMatrix& upsilon)
{
    std::vector<BitRow> rows;
    for (const auto& r : upsilon.rows())
        for (int k = 0; k < r.mult; ++k)
            rows.push_back(r.bits);
    return rows;
}

/// Product-function value prod x_i^{n_i} from the column atoms of a picked
/// matrix, computed without the library's atom table.
inline Rational oracle_pick_value(const std::vector<const BitRow*>& picked, int nu, const StateDescription& sd)
{
    const int q = static_cast<int>(picked.size());
    std::vector<long> freq(static_cast<std::size_t>(1) << q, 0);
    for (int col = 0; col < nu; ++col) {
        std::vector<bool> eps(static_cast<std::size_t>(q));
        for (int s = 0; s < q; ++s)
            eps[static_cast<std::size_t>(s)] = (*picked[static_cast<std::size_t>(s)])[static_cast<std::size_t>(col)];
        ++freq[static_cast<std::size_t>(oracle_atom_index(eps) - 1)];
    }
    Rational value = 1;
    for (int a : sd.h)
        value *= Rational(freq[static_cast<std::size_t>(a - 1)], nu);
    return value;
}

/// nabla by literal enumeration of all nu^q picks (with replacement) or of
/// the injective ones.
inline Rational oracle_nabla(const UpsilonMatrix& upsilon, int q, const StateDescription& sd, bool replacement = true)
{
    const auto rows = expanded_rows(upsilon);
    const int nu = upsilon.nu();
    std::vector<int> pick(static_cast<std::size_t>(q), 0);
    Rational total = 0;
    long count = 0;
    while (true) {
        bool injective = true;
        for (int i = 0; i < q && injective; ++i)
            for (int j = i + 1; j < q; ++j)
                if (pick[static_cast<std::size_t>(i)] == pick[static_cast<std::size_t>(j)])
                    injective = false;
        if (replacement || injective) {
            std::vector<const BitRow*> picked;
            for (int p : pick)
                picked.push_back(&rows[static_cast<std::size_t>(p)]);
            total += oracle_pick_value(picked, nu, sd);
            ++count;
        }
        int pos = q - 1;
        while (pos >= 0 && pick[static_cast<std::size_t>(pos)] == nu - 1)
            pick[static_cast<std::size_t>(pos--)] = 0;
        if (pos < 0)
            break;
        ++pick[static_cast<std::size_t>(pos)];
    }
    return total / count;
}

/// Calls `check(sd)` for every description with 1..n_max constants.
inline void for_all_sds(int q, int n_max, const std::function<void(const StateDescription&)>& check)
{
    for (int n = 1; n <= n_max; ++n)
        for_each_sd(q, static_cast<std::size_t>(n), [&](const StateDescription& sd) {
            check(sd);
            return true;
        });
}

/// True iff the two functions agree on all descriptions with <= n_max constants.
inline bool agree(const ProbabilityFunction& a, const ProbabilityFunction& b, int n_max)
{
    bool same = true;
    for (int n = 1; n <= n_max && same; ++n)
        for_each_sd(a.level(), static_cast<std::size_t>(n), [&](const StateDescription& sd) {
            same = a.eval_sd(sd) == b.eval_sd(sd);
            return same;
        });
    return same;
}

inline Rational r(long n, long d = 1) { return Rational(n, d); }

inline std::vector<Rational> rv(std::initializer_list<Rational> values) { return values; }

} // namespace uli::testing
