#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uli/combinatorics.hpp"
#include "uli/error.hpp"
#include "uli/linear.hpp"
#include "uli/logic.hpp"
#include "uli/nabla.hpp"
#include "uli/probability.hpp"
#include "uli/rational.hpp"

namespace uli {

struct CompositionSet {
    int q = 0;
    std::vector<std::vector<int>> elements;

    std::size_t size() const noexcept { return elements.size(); }

    std::size_t index_of(const std::vector<int>& n) const
    {
        const auto it = std::find(elements.begin(), elements.end(), n);
        require(it != elements.end(), ErrorKind::InvalidArgument, "vector is not in the composition set");
        return static_cast<std::size_t>(it - elements.begin());
    }
};

/// K = { n in N^q : sum n_i = q }, lexicographically descending.
inline CompositionSet composition_set(int q)
{
    static constexpr int max_q = 5;
    require(q >= 1, ErrorKind::OutOfRange, "composition set needs q >= 1");
    require(q <= max_q, ErrorKind::ResourceCap, "composition set capped at q = " + std::to_string(max_q));
    return {q, compositions(q, q)};
}

/// A[m][n] = prod_k p_{m,k}^{n_k} (0^0 = 1) for m, n in K.
inline RationalMatrix monomial_matrix(const CompositionSet& k, const std::vector<std::vector<Rational>>& p_vectors)
{
    require(p_vectors.size() == k.size(), ErrorKind::InvalidArgument, "need one frequency vector per composition");
    RationalMatrix a(k.size(), std::vector<Rational>(k.size()));
    for (std::size_t m = 0; m < k.size(); ++m)
        for (std::size_t n = 0; n < k.size(); ++n) {
            Rational entry = 1;
            for (int s = 0; s < k.q; ++s)
                entry *= ipow(p_vectors[m][static_cast<std::size_t>(s)], k.elements[n][static_cast<std::size_t>(s)]);
            a[m][n] = entry;
        }
    return a;
}

/// The chosen frequency vectors with their regular monomial matrix, the
/// inverse row b at n = (1,...,1), and the resulting constant lambda.
struct MonomialMatrix {
    CompositionSet k;
    int g = 1;
    std::vector<std::vector<Rational>> p_vectors;
    RationalMatrix a;
    Rational det;
    std::vector<Rational> b;
    Rational lambda;
};

/// p_{m,s} proportional to (m_s / q)^g, with g = 1, 2, ... until A is regular.
inline MonomialMatrix choose_p_vectors(const CompositionSet& k, int max_g = 64)
{
    const int q = k.q;
    for (int g = 1; g <= max_g; ++g) {
        std::vector<std::vector<Rational>> p_vectors;
        p_vectors.reserve(k.size());
        for (const auto& m : k.elements) {
            std::vector<Rational> p;
            Rational total = 0;
            for (int part : m) {
                p.push_back(ipow(Rational(part, q), g));
                total += p.back();
            }
            for (auto& v : p)
                v /= total;
            p_vectors.push_back(std::move(p));
        }
        auto a = monomial_matrix(k, p_vectors);
        const Rational det = determinant(a);
        if (det == 0)
            continue;

        const auto inverse = invert(a);
        const std::size_t ones = k.index_of(std::vector<int>(static_cast<std::size_t>(q), 1));
        std::vector<Rational> b = inverse.inverse[ones];
        const Rational scale(factorial(q));
        Rational negative = 0;
        for (const auto& v : b)
            if (v < 0)
                negative -= v;
        return {k, g, std::move(p_vectors), std::move(a), det, std::move(b), negative / scale};
    }
    throw Error(ErrorKind::ResourceCap, "no regular monomial matrix found for g <= " + std::to_string(max_g));
}

struct NablaTerm {
    Rational weight;
    std::size_t component = 0;
    std::vector<Rational> p;
    UpsilonMatrix upsilon;
};

/// y = (1 + lambda) w1 - lambda w2 with w1, w2 convex combinations of nabla
/// functions. When lambda = 0, w2 is w1 and w2_terms is empty.
struct Decomposition {
    int q = 0;
    Rational lambda;
    MonomialMatrix basis;
    int nu = 1;
    std::vector<NablaTerm> w1_terms;
    std::vector<NablaTerm> w2_terms;
    ProbabilityFunction w1;
    ProbabilityFunction w2;
    int verify_n = 0;
    std::size_t verified_sds = 0;
};

namespace detail {

struct PxComponent {
    Rational weight;
    SimplexPoint c;
};

inline ProbabilityFunction nabla_mixture(const std::vector<NablaTerm>& terms, int q)
{
    if (terms.size() == 1 && terms[0].weight == 1)
        return nabla(terms[0].upsilon, q);
    std::vector<MixtureComponent> parts;
    parts.reserve(terms.size());
    for (const auto& t : terms)
        parts.push_back({t.weight, nabla(t.upsilon, q)});
    return mixture(std::move(parts));
}

inline Decomposition decompose_components(const std::vector<PxComponent>& components, const ProbabilityFunction& target,
                                          int verify_n)
{
    static constexpr long max_nu = 1L << 16;
    static constexpr double max_verified = 2e6;
    const int q = target.level();
    require(verify_n >= 0, ErrorKind::OutOfRange, "verification bound must be non-negative");
    require(static_cast<double>(std::pow(std::ldexp(1.0, q), verify_n)) <= max_verified, ErrorKind::ResourceCap,
            "verification over n <= " + std::to_string(verify_n) + " at q = " + std::to_string(q) + " is too large");

    auto basis = choose_p_vectors(composition_set(q));

    Integer nu = 1;
    for (const auto& comp : components)
        for (const auto& v : comp.c.values())
            nu = lcm(nu, denominator(v));
    for (const auto& p : basis.p_vectors)
        for (const auto& v : p)
            nu = lcm(nu, denominator(v));
    require(nu <= max_nu, ErrorKind::ResourceCap,
            "common denominator nu = " + nu.str() + " exceeds " + std::to_string(max_nu));
    const int nu_int = nu.convert_to<int>();

    const Rational scale(factorial(q));
    const Rational positive_mass = 1 + basis.lambda;
    Decomposition out{q,  basis.lambda, basis, nu_int, {}, {}, target, target, verify_n, 0};
    for (std::size_t t = 0; t < components.size(); ++t) {
        const auto phi = build_phi(components[t].c, nu_int);
        for (std::size_t m = 0; m < basis.p_vectors.size(); ++m) {
            const Rational& bm = basis.b[m];
            if (bm == 0)
                continue;
            NablaTerm term{components[t].weight, t, basis.p_vectors[m], build_upsilon(phi, basis.p_vectors[m], nu_int)};
            if (bm > 0) {
                term.weight *= bm / scale / positive_mass;
                out.w1_terms.push_back(std::move(term));
            } else {
                term.weight *= -bm / scale / basis.lambda;
                out.w2_terms.push_back(std::move(term));
            }
        }
    }
    out.w1 = nabla_mixture(out.w1_terms, q);
    out.w2 = out.w2_terms.empty() ? out.w1 : nabla_mixture(out.w2_terms, q);

    for (int n = 1; n <= verify_n; ++n)
        for_each_sd(q, static_cast<std::size_t>(n), [&](const StateDescription& sd) {
            const Rational lhs = target.eval_sd(sd);
            const Rational rhs = positive_mass * out.w1.eval_sd(sd) - out.lambda * out.w2.eval_sd(sd);
            if (lhs != rhs)
                throw Error(ErrorKind::Internal, "decomposition identity failed on a state description of size " +
                                                     std::to_string(n));
            ++out.verified_sds;
            return true;
        });
    return out;
}

} // namespace detail

inline Decomposition decompose_y(const SimplexPoint& c, int verify_n)
{
    return detail::decompose_components({{Rational(1), c}}, symmetrized(c), verify_n);
}

/// Decomposes a finite mixture of symmetrized functions (or a single one)
/// componentwise with one shared set of frequency vectors.
inline Decomposition decompose_px(const ProbabilityFunction& w, int verify_n)
{
    std::vector<detail::PxComponent> components;
    if (const auto* y = w.as<SymmetrizedFunction>()) {
        components.push_back({1, y->point()});
    } else if (const auto* mix = w.as<MixtureFunction>()) {
        for (const auto& part : mix->parts()) {
            const auto* yp = part.function.as<SymmetrizedFunction>();
            require(yp != nullptr, ErrorKind::InvalidArgument,
                    "mixture component of class " + std::string(to_string(part.function.kind())) +
                        " is not a symmetrized product function");
            if (part.weight != 0)
                components.push_back({part.weight, yp->point()});
        }
    } else {
        throw Error(ErrorKind::InvalidArgument, "decomposition needs a mixture of symmetrized product functions, got " +
                                                    std::string(to_string(w.kind())));
    }
    return detail::decompose_components(components, w, verify_n);
}

} // namespace uli
