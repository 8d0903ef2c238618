#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "uli/error.hpp"

namespace uli {

/// Atoms of the unary language L_q with predicates P_1..P_q.
///
/// Atom indices are 1-based. Atoms are ordered by the number of negated
/// predicates (gamma), and inside one gamma block by descending binary value
/// of the sign vector (eps_1 is the most significant bit). For q = 2 this is
/// P1&P2, P1&!P2, !P1&P2, !P1&!P2.
///
/// Internally a sign vector is a mask with bit (i-1) set iff P_i occurs
/// positively.
class AtomTable {
public:
    static constexpr int max_level = 12;

    explicit AtomTable(int q) : q_(q)
    {
        require(q >= 1 && q <= max_level, ErrorKind::OutOfRange,
                "predicate count " + std::to_string(q) + " outside 1.." + std::to_string(max_level));
        const std::uint32_t count = 1u << q;
        masks_.resize(count);
        std::iota(masks_.begin(), masks_.end(), 0u);
        auto value = [q](std::uint32_t mask) {
            std::uint32_t v = 0;
            for (int i = 0; i < q; ++i)
                if (mask & (1u << i))
                    v |= 1u << (q - 1 - i);
            return v;
        };
        auto zeros = [q](std::uint32_t mask) { return q - std::popcount(mask); };
        std::sort(masks_.begin(), masks_.end(), [&](std::uint32_t a, std::uint32_t b) {
            if (zeros(a) != zeros(b))
                return zeros(a) < zeros(b);
            return value(a) > value(b);
        });
        index_of_mask_.resize(count);
        gamma_.resize(count);
        for (std::uint32_t i = 0; i < count; ++i) {
            index_of_mask_[masks_[i]] = static_cast<int>(i) + 1;
            gamma_[i] = zeros(masks_[i]);
        }
    }

    int level() const noexcept { return q_; }
    int size() const noexcept { return static_cast<int>(masks_.size()); }

    std::uint32_t mask(int atom) const { return masks_.at(check(atom) - 1); }
    int index_of(std::uint32_t mask) const { return index_of_mask_.at(mask); }
    int gamma(int atom) const { return gamma_.at(check(atom) - 1); }

    bool positive(int atom, int predicate) const
    {
        require(predicate >= 1 && predicate <= q_, ErrorKind::OutOfRange,
                "predicate P" + std::to_string(predicate) + " not in L_" + std::to_string(q_));
        return (mask(atom) >> (predicate - 1)) & 1u;
    }

    /// Sign vector as a bit string, eps_1 first ("10" is P1 & !P2).
    std::string bits(int atom) const
    {
        std::string out(static_cast<std::size_t>(q_), '0');
        const auto m = mask(atom);
        for (int i = 0; i < q_; ++i)
            if (m & (1u << i))
                out[static_cast<std::size_t>(i)] = '1';
        return out;
    }

    int from_bits(std::string_view bits) const
    {
        require(static_cast<int>(bits.size()) == q_, ErrorKind::InvalidArgument,
                "atom bit string '" + std::string(bits) + "' has wrong length for L_" + std::to_string(q_));
        std::uint32_t m = 0;
        for (int i = 0; i < q_; ++i) {
            const char ch = bits[static_cast<std::size_t>(i)];
            require(ch == '0' || ch == '1', ErrorKind::InvalidArgument,
                    "atom bit string '" + std::string(bits) + "' contains a non-binary digit");
            if (ch == '1')
                m |= 1u << i;
        }
        return index_of(m);
    }

    const std::vector<int>& gammas() const noexcept { return gamma_; }

private:
    int check(int atom) const
    {
        require(atom >= 1 && atom <= size(), ErrorKind::OutOfRange,
                "atom index " + std::to_string(atom) + " outside 1.." + std::to_string(size()));
        return atom;
    }

    int q_;
    std::vector<std::uint32_t> masks_;
    std::vector<int> index_of_mask_;
    std::vector<int> gamma_;
};

/// Shared, lazily built atom table for level q.
inline const AtomTable& atom_table(int q)
{
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<AtomTable>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[q];
    if (!slot)
        slot = std::make_unique<AtomTable>(q);
    return *slot;
}

inline AtomTable enumerate_atoms(int q) { return AtomTable(q); }

/// A state description of L_q: atom h_j (1-based) for each constant a_j.
struct StateDescription {
    int q = 1;
    std::vector<int> h;

    StateDescription() = default;
    StateDescription(int level, std::vector<int> atoms) : q(level), h(std::move(atoms))
    {
        const int count = atom_table(q).size();
        for (int a : h)
            require(a >= 1 && a <= count, ErrorKind::OutOfRange,
                    "atom index " + std::to_string(a) + " outside 1.." + std::to_string(count));
    }

    std::size_t n() const noexcept { return h.size(); }

    /// Atom multiplicities n_i (index 0 is atom 1).
    std::vector<int> counts() const
    {
        std::vector<int> out(static_cast<std::size_t>(atom_table(q).size()), 0);
        for (int a : h)
            ++out[static_cast<std::size_t>(a - 1)];
        return out;
    }

    /// Conjunction with a description on fresh constants a_{n+1}, ...
    StateDescription concat(const StateDescription& other) const
    {
        require(other.q == q, ErrorKind::LevelMismatch, "cannot conjoin descriptions of different levels");
        StateDescription out = *this;
        out.h.insert(out.h.end(), other.h.begin(), other.h.end());
        return out;
    }

    friend bool operator==(const StateDescription&, const StateDescription&) = default;
    friend auto operator<=>(const StateDescription&, const StateDescription&) = default;
};

/// Visits all (2^q)^n state descriptions over a_1..a_n in lexicographic
/// order. Returning false from `visit` stops the enumeration; the function
/// then returns false as well.
inline bool for_each_sd(int q, std::size_t n, const std::function<bool(const StateDescription&)>& visit)
{
    const int count = atom_table(q).size();
    StateDescription sd;
    sd.q = q;
    sd.h.assign(n, 1);
    while (true) {
        if (!visit(sd))
            return false;
        std::size_t pos = n;
        while (pos > 0) {
            --pos;
            if (sd.h[pos] < count) {
                ++sd.h[pos];
                std::fill(sd.h.begin() + static_cast<std::ptrdiff_t>(pos) + 1, sd.h.end(), 1);
                break;
            }
            if (pos == 0)
                return true;
        }
        if (n == 0)
            return true;
    }
}

inline std::vector<StateDescription> all_sds(int q, std::size_t n)
{
    std::vector<StateDescription> out;
    for_each_sd(q, n, [&](const StateDescription& sd) {
        out.push_back(sd);
        return true;
    });
    return out;
}

/// Permutation of predicates P_1..P_q; mapping[i-1] = sigma(i).
class PredPermutation {
public:
    explicit PredPermutation(std::vector<int> mapping) : mapping_(std::move(mapping))
    {
        const int q = static_cast<int>(mapping_.size());
        require(q >= 1, ErrorKind::InvalidArgument, "empty predicate permutation");
        std::vector<bool> seen(static_cast<std::size_t>(q), false);
        for (int v : mapping_) {
            require(v >= 1 && v <= q && !seen[static_cast<std::size_t>(v - 1)], ErrorKind::InvalidArgument,
                    "predicate mapping is not a bijection on 1.." + std::to_string(q));
            seen[static_cast<std::size_t>(v - 1)] = true;
        }
    }

    static PredPermutation identity(int q)
    {
        std::vector<int> m(static_cast<std::size_t>(q));
        std::iota(m.begin(), m.end(), 1);
        return PredPermutation(std::move(m));
    }

    /// Swaps P_i and P_j.
    static PredPermutation swap(int q, int i, int j)
    {
        auto p = identity(q);
        std::swap(p.mapping_.at(static_cast<std::size_t>(i - 1)), p.mapping_.at(static_cast<std::size_t>(j - 1)));
        return p;
    }

    int level() const noexcept { return static_cast<int>(mapping_.size()); }
    int operator()(int i) const { return mapping_.at(static_cast<std::size_t>(i - 1)); }
    const std::vector<int>& mapping() const noexcept { return mapping_; }

    /// sigma alpha: the sign of P_i in alpha becomes the sign of sigma(P_i).
    int apply_atom(int atom) const
    {
        const auto& table = atom_table(level());
        const auto m = table.mask(atom);
        std::uint32_t out = 0;
        for (int i = 0; i < level(); ++i)
            if (m & (1u << i))
                out |= 1u << (mapping_[static_cast<std::size_t>(i)] - 1);
        return table.index_of(out);
    }

    /// (this * other)(i) = this(other(i)).
    PredPermutation compose(const PredPermutation& other) const
    {
        require(other.level() == level(), ErrorKind::LevelMismatch, "composing permutations of different levels");
        std::vector<int> m(mapping_.size());
        for (std::size_t i = 0; i < m.size(); ++i)
            m[i] = mapping_[static_cast<std::size_t>(other.mapping_[i] - 1)];
        return PredPermutation(std::move(m));
    }

    friend bool operator==(const PredPermutation&, const PredPermutation&) = default;

private:
    std::vector<int> mapping_;
};

/// All q! predicate permutations in lexicographic one-line order.
inline std::vector<PredPermutation> all_pred_perms(int q)
{
    std::vector<int> m(static_cast<std::size_t>(q));
    std::iota(m.begin(), m.end(), 1);
    std::vector<PredPermutation> out;
    do {
        out.emplace_back(m);
    } while (std::next_permutation(m.begin(), m.end()));
    return out;
}

/// Atom images under every predicate permutation: result[s][a-1] is the image
/// of atom a under the s-th permutation of all_pred_perms(q). Cached per q.
inline const std::vector<std::vector<int>>& pred_perm_atom_maps(int q)
{
    static std::mutex mutex;
    static std::map<int, std::vector<std::vector<int>>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(q);
    if (it != cache.end())
        return it->second;
    require(q <= 8, ErrorKind::ResourceCap, "predicate permutation table capped at q <= 8");
    std::vector<std::vector<int>> maps;
    const int count = atom_table(q).size();
    for (const auto& sigma : all_pred_perms(q)) {
        std::vector<int> image(static_cast<std::size_t>(count));
        for (int a = 1; a <= count; ++a)
            image[static_cast<std::size_t>(a - 1)] = sigma.apply_atom(a);
        maps.push_back(std::move(image));
    }
    return cache.emplace(q, std::move(maps)).first->second;
}

inline StateDescription apply_pred_perm(const PredPermutation& sigma, const StateDescription& target)
{
    require(sigma.level() == target.q, ErrorKind::LevelMismatch,
            "permutation of L_" + std::to_string(sigma.level()) + " applied to a description of L_" +
                std::to_string(target.q));
    StateDescription out = target;
    for (int& a : out.h)
        a = sigma.apply_atom(a);
    return out;
}

/// Renames constant a_j to a_{tau(j)}: the atom of a_j moves to position
/// tau(j). `tau` is 1-based one-line notation on 1..n.
inline StateDescription apply_const_perm(const std::vector<int>& tau, const StateDescription& target)
{
    const std::size_t n = target.n();
    require(tau.size() == n, ErrorKind::InvalidArgument,
            "constant permutation has " + std::to_string(tau.size()) + " entries for " + std::to_string(n) +
                " constants");
    std::vector<bool> seen(n, false);
    for (int v : tau) {
        require(v >= 1 && static_cast<std::size_t>(v) <= n && !seen[static_cast<std::size_t>(v - 1)],
                ErrorKind::InvalidArgument, "constant mapping is not a bijection on 1.." + std::to_string(n));
        seen[static_cast<std::size_t>(v - 1)] = true;
    }
    StateDescription out = target;
    for (std::size_t j = 0; j < n; ++j)
        out.h[static_cast<std::size_t>(tau[j] - 1)] = target.h[j];
    return out;
}

} // namespace uli
