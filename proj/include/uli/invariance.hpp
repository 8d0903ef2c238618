#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uli/error.hpp"
#include "uli/logic.hpp"
#include "uli/lp.hpp"
#include "uli/probability.hpp"
#include "uli/rational.hpp"

namespace uli {

/// A Px point of D_{2^q} in compressed form: C_k is the common weight of the
/// binomial(q, k) atoms with k negated predicates.
class AltNotation {
public:
    AltNotation(int q, std::vector<Rational> values) : q_(q), values_(std::move(values))
    {
        require(q >= 1, ErrorKind::OutOfRange, "alternative notation needs q >= 1");
        require(values_.size() == static_cast<std::size_t>(q) + 1, ErrorKind::InvalidArgument,
                "alternative notation for q = " + std::to_string(q) + " needs " + std::to_string(q + 1) +
                    " entries, got " + std::to_string(values_.size()));
        Rational total = 0;
        for (std::size_t k = 0; k < values_.size(); ++k) {
            require(values_[k] >= 0, ErrorKind::InvalidArgument,
                    "C_" + std::to_string(k) + " is negative (" + format_rational(values_[k]) + ")");
            total += Rational(binomial(q, static_cast<std::int64_t>(k))) * values_[k];
        }
        require(total == 1, ErrorKind::InvalidArgument,
                "sum of binomial(q,k) C_k is " + format_rational(total) + ", not 1");
    }

    int level() const noexcept { return q_; }
    const std::vector<Rational>& values() const noexcept { return values_; }
    const Rational& operator[](int k) const { return values_.at(static_cast<std::size_t>(k)); }

    friend bool operator==(const AltNotation&, const AltNotation&) = default;

private:
    int q_;
    std::vector<Rational> values_;
};

/// Compresses a Px point. Throws NotPx naming the first atom pair (in index
/// order) with equal gamma but different weight.
inline AltNotation to_alt(const SimplexPoint& c)
{
    const int q = c.level();
    const auto& table = atom_table(q);
    std::vector<std::optional<int>> first(static_cast<std::size_t>(q) + 1);
    std::vector<Rational> values(static_cast<std::size_t>(q) + 1);
    for (int a = 1; a <= table.size(); ++a) {
        const auto k = static_cast<std::size_t>(table.gamma(a));
        if (!first[k]) {
            first[k] = a;
            values[k] = c[a];
        } else if (c[a] != values[k]) {
            throw Error(ErrorKind::NotPx, "not a Px point: atoms " + std::to_string(*first[k]) + " and " +
                                              std::to_string(a) + " both have gamma " + std::to_string(k) +
                                              " but weights " + format_rational(values[k]) + " and " +
                                              format_rational(c[a]));
        }
    }
    return AltNotation(q, std::move(values));
}

inline SimplexPoint from_alt(const AltNotation& alt)
{
    const auto& table = atom_table(alt.level());
    std::vector<Rational> x;
    x.reserve(static_cast<std::size_t>(table.size()));
    for (int a = 1; a <= table.size(); ++a)
        x.push_back(alt[table.gamma(a)]);
    return SimplexPoint(alt.level(), std::move(x));
}

/// Coefficient matrix of the transfer from level r to level q:
/// row j, column k holds binomial(r - q, k - j).
inline RationalMatrix transfer_matrix(int r, int q)
{
    RationalMatrix a(static_cast<std::size_t>(q) + 1, std::vector<Rational>(static_cast<std::size_t>(r) + 1));
    for (int j = 0; j <= q; ++j)
        for (int k = j; k <= r - q + j; ++k)
            a[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = Rational(binomial(r - q, k - j));
    return a;
}

/// C_j = sum_{k=j}^{r-q+j} binomial(r-q, k-j) D_k: the level-q member of a
/// language-invariant family of Px product functions, from its level-r member.
inline AltNotation transfer(const AltNotation& upper, int q)
{
    const int r = upper.level();
    require(q >= 1 && q <= r, ErrorKind::OutOfRange,
            "cannot transfer from level " + std::to_string(r) + " to level " + std::to_string(q));
    std::vector<Rational> c(static_cast<std::size_t>(q) + 1, 0);
    for (int j = 0; j <= q; ++j)
        for (int k = j; k <= r - q + j; ++k)
            c[static_cast<std::size_t>(j)] += Rational(binomial(r - q, k - j)) * upper[k];
    return AltNotation(q, std::move(c));
}

/// Finitely supported probability measure on [0, 1].
class DiscreteMeasure {
public:
    struct Atom {
        Rational point;
        Rational weight;
    };

    explicit DiscreteMeasure(std::vector<Atom> support) : support_(std::move(support))
    {
        require(!support_.empty(), ErrorKind::InvalidArgument, "measure needs at least one support point");
        Rational total = 0;
        for (std::size_t i = 0; i < support_.size(); ++i) {
            const auto& [x, w] = support_[i];
            require(x >= 0 && x <= 1, ErrorKind::InvalidArgument,
                    "support point " + format_rational(x) + " outside [0,1]");
            require(w > 0, ErrorKind::InvalidArgument, "measure weights must be positive");
            for (std::size_t k = 0; k < i; ++k)
                require(support_[k].point != x, ErrorKind::InvalidArgument,
                        "duplicate support point " + format_rational(x));
            total += w;
        }
        require(total == 1, ErrorKind::InvalidArgument, "measure weights sum to " + format_rational(total) + ", not 1");
    }

    static DiscreteMeasure dirac(const Rational& x) { return DiscreteMeasure({{x, 1}}); }

    const std::vector<Atom>& support() const noexcept { return support_; }

private:
    std::vector<Atom> support_;
};

/// C_j = integral of x^j (1-x)^{q-j} against the measure.
inline AltNotation bernstein(const DiscreteMeasure& rho, int q)
{
    std::vector<Rational> c(static_cast<std::size_t>(q) + 1, 0);
    for (const auto& [x, w] : rho.support())
        for (int j = 0; j <= q; ++j)
            c[static_cast<std::size_t>(j)] += w * ipow(x, j) * ipow(1 - x, q - j);
    return AltNotation(q, std::move(c));
}

/// Answer to "does some D >= 0 at level r transfer to C?". A feasible
/// certificate carries D; an infeasible one carries y with
/// sum_j binomial(r-q, k-j) y_j >= 0 for all k and sum_j C_j y_j < 0.
struct FeasibilityCertificate {
    AltNotation target;
    int r = 0;
    bool feasible = false;
    std::optional<AltNotation> witness;
    std::vector<Rational> farkas;
    LpMethod method = LpMethod::Auto;
};

inline bool verify_certificate(const FeasibilityCertificate& cert)
{
    LinearSystem sys{transfer_matrix(cert.r, cert.target.level()), cert.target.values()};
    LpResult res;
    res.feasible = cert.feasible;
    if (cert.feasible) {
        if (!cert.witness)
            return false;
        res.x = cert.witness->values();
    } else {
        res.farkas = cert.farkas;
    }
    return verify(sys, res);
}

/// Decides whether C at level q extends to a Px point at level r.
inline FeasibilityCertificate extendable(const AltNotation& c, int r, LpMethod method = LpMethod::Auto)
{
    static constexpr int max_level = 400;
    const int q = c.level();
    require(r >= q, ErrorKind::OutOfRange,
            "target level r = " + std::to_string(r) + " is below q = " + std::to_string(q));
    require(r <= max_level, ErrorKind::ResourceCap, "extension level capped at " + std::to_string(max_level));
    LinearSystem sys{transfer_matrix(r, q), c.values()};
    const auto res = solve_feasibility(sys, method);
    FeasibilityCertificate cert{c, r, res.feasible, std::nullopt, res.farkas, res.method};
    if (res.feasible)
        cert.witness = AltNotation(r, res.x);
    if (!verify_certificate(cert))
        throw Error(ErrorKind::Internal, "extension certificate failed verification");
    return cert;
}

} // namespace uli
