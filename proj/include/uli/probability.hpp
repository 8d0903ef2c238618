#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "uli/error.hpp"
#include "uli/formula.hpp"
#include "uli/logic.hpp"
#include "uli/rational.hpp"

namespace uli {

/// A point of the probability simplex D_{2^q}: one weight per atom of L_q.
class SimplexPoint {
public:
    SimplexPoint(int q, std::vector<Rational> x) : q_(q), x_(std::move(x))
    {
        const auto count = static_cast<std::size_t>(atom_table(q).size());
        require(x_.size() == count, ErrorKind::InvalidArgument,
                "simplex point for L_" + std::to_string(q) + " needs " + std::to_string(count) + " entries, got " +
                    std::to_string(x_.size()));
        Rational total = 0;
        for (std::size_t i = 0; i < x_.size(); ++i) {
            require(x_[i] >= 0, ErrorKind::InvalidArgument,
                    "simplex entry " + std::to_string(i + 1) + " is negative (" + format_rational(x_[i]) + ")");
            total += x_[i];
        }
        require(total == 1, ErrorKind::InvalidArgument,
                "simplex entries sum to " + format_rational(total) + ", not 1");
    }

    /// Infers q from the length, which must be a power of two.
    explicit SimplexPoint(const std::vector<Rational>& x) : SimplexPoint(level_for(x.size()), x) {}

    int level() const noexcept { return q_; }
    const std::vector<Rational>& values() const noexcept { return x_; }
    const Rational& operator[](int atom) const { return x_.at(static_cast<std::size_t>(atom - 1)); }

    static int level_for(std::size_t length)
    {
        for (int q = 1; q <= AtomTable::max_level; ++q)
            if (std::size_t{1} << q == length)
                return q;
        throw Error(ErrorKind::InvalidArgument,
                    "vector length " + std::to_string(length) + " is not 2^q for a supported q");
    }

    friend bool operator==(const SimplexPoint&, const SimplexPoint&) = default;

private:
    int q_;
    std::vector<Rational> x_;
};

/// A finite mixture sum_k weight_k * w_{point_k} of product functions, with
/// identical points merged. Every function that admits such a presentation
/// exposes it, which makes evaluation a sum of monomials.
class ProductTerms {
public:
    void add(const Rational& weight, const std::vector<Rational>& point)
    {
        if (weight == 0)
            return;
        auto [it, inserted] = terms_.try_emplace(point, weight);
        if (!inserted) {
            it->second += weight;
            if (it->second == 0)
                terms_.erase(it);
        }
    }

    void add_all(const Rational& scale, const ProductTerms& other)
    {
        for (const auto& [point, weight] : other.terms_)
            add(scale * weight, point);
    }

    Rational evaluate(const std::vector<int>& counts) const
    {
        Rational total = 0;
        for (const auto& [point, weight] : terms_) {
            Rational term = weight;
            for (std::size_t i = 0; i < counts.size() && term != 0; ++i)
                if (counts[i] > 0)
                    term *= ipow(point[i], counts[i]);
            total += term;
        }
        return total;
    }

    std::size_t size() const noexcept { return terms_.size(); }
    const std::map<std::vector<Rational>, Rational>& terms() const noexcept { return terms_; }

private:
    std::map<std::vector<Rational>, Rational> terms_;
};

enum class FunctionClass { Product, Symmetrized, Mixture, Nabla, Restricted, Table };

inline std::string_view to_string(FunctionClass kind)
{
    switch (kind) {
    case FunctionClass::Product: return "product";
    case FunctionClass::Symmetrized: return "symmetrized";
    case FunctionClass::Mixture: return "mixture";
    case FunctionClass::Nabla: return "nabla";
    case FunctionClass::Restricted: return "restricted";
    case FunctionClass::Table: return "table";
    }
    return "unknown";
}

class FunctionImpl {
public:
    virtual ~FunctionImpl() = default;
    virtual int level() const = 0;
    virtual FunctionClass kind() const = 0;
    virtual Rational evaluate(const StateDescription& sd) const = 0;
    virtual const ProductTerms* product_terms() const { return nullptr; }
};

namespace detail {

struct SdHash {
    std::size_t operator()(const std::vector<int>& h) const noexcept
    {
        std::size_t seed = h.size();
        for (int v : h)
            seed ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
        return seed;
    }
};

/// Transparent memo of state-description values. Concurrent reads are
/// shared; writes are idempotent since values are deterministic.
class SdCache {
public:
    static constexpr std::size_t max_entries = 1u << 20;

    std::optional<Rational> find(const std::vector<int>& h) const
    {
        std::shared_lock lock(mutex_);
        auto it = values_.find(h);
        if (it == values_.end())
            return std::nullopt;
        return it->second;
    }

    void store(const std::vector<int>& h, const Rational& value)
    {
        std::unique_lock lock(mutex_);
        if (values_.size() < max_entries)
            values_.try_emplace(h, value);
    }

private:
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::vector<int>, Rational, SdHash> values_;
};

} // namespace detail

/// Value handle for a probability function on the state descriptions of L_q.
/// Copies share the underlying (immutable) function and its memo.
class ProbabilityFunction {
public:
    explicit ProbabilityFunction(std::shared_ptr<const FunctionImpl> impl)
        : impl_(std::move(impl)), cache_(std::make_shared<detail::SdCache>())
    {
    }

    int level() const { return impl_->level(); }
    FunctionClass kind() const { return impl_->kind(); }
    const FunctionImpl& impl() const { return *impl_; }
    const ProductTerms* product_terms() const { return impl_->product_terms(); }

    template <typename T>
    const T* as() const
    {
        return dynamic_cast<const T*>(impl_.get());
    }

    Rational eval_sd(const StateDescription& sd) const
    {
        require(sd.q == level(), ErrorKind::LevelMismatch,
                "state description of L_" + std::to_string(sd.q) + " given to a function on L_" +
                    std::to_string(level()));
        if (sd.n() == 0)
            return 1;
        if (auto hit = cache_->find(sd.h))
            return *hit;
        Rational value = impl_->evaluate(sd);
        cache_->store(sd.h, value);
        return value;
    }

    Rational operator()(const StateDescription& sd) const { return eval_sd(sd); }

private:
    std::shared_ptr<const FunctionImpl> impl_;
    std::shared_ptr<detail::SdCache> cache_;
};

/// Mixture implemented on top of product terms (product, symmetrized, nabla
/// and mixtures of those).
class TermsFunction : public FunctionImpl {
public:
    TermsFunction(int q, ProductTerms terms) : q_(q), terms_(std::move(terms)) {}

    int level() const override { return q_; }
    Rational evaluate(const StateDescription& sd) const override { return terms_.evaluate(sd.counts()); }
    const ProductTerms* product_terms() const override { return &terms_; }

private:
    int q_;
    ProductTerms terms_;
};

/// w_x(Theta) = prod_i x_i^{n_i}.
class ProductFunction : public TermsFunction {
public:
    explicit ProductFunction(SimplexPoint x) : TermsFunction(x.level(), single(x)), point_(std::move(x)) {}

    FunctionClass kind() const override { return FunctionClass::Product; }
    const SimplexPoint& point() const noexcept { return point_; }

private:
    static ProductTerms single(const SimplexPoint& x)
    {
        ProductTerms t;
        t.add(1, x.values());
        return t;
    }

    SimplexPoint point_;
};

/// The atom vector sigma c for a predicate permutation given by its atom map:
/// the weight of atom a moves to atom sigma(a).
inline std::vector<Rational> permute_point(const std::vector<int>& atom_map, const std::vector<Rational>& c)
{
    std::vector<Rational> out(c.size());
    for (std::size_t a = 0; a < c.size(); ++a)
        out[static_cast<std::size_t>(atom_map[a] - 1)] = c[a];
    return out;
}

/// y_c: the average of w_{sigma c} over all q! predicate-induced atom
/// permutations sigma.
class SymmetrizedFunction : public TermsFunction {
public:
    explicit SymmetrizedFunction(SimplexPoint c) : TermsFunction(c.level(), average(c)), point_(std::move(c)) {}

    FunctionClass kind() const override { return FunctionClass::Symmetrized; }
    const SimplexPoint& point() const noexcept { return point_; }

    static ProductTerms average(const SimplexPoint& c)
    {
        const auto& maps = pred_perm_atom_maps(c.level());
        const Rational share(1, static_cast<long>(maps.size()));
        ProductTerms t;
        for (const auto& map : maps)
            t.add(share, permute_point(map, c.values()));
        return t;
    }

private:
    SimplexPoint point_;
};

struct MixtureComponent {
    Rational weight;
    ProbabilityFunction function;
};

/// Finite mixture sum_t mu_t * w_t with rational weights summing to 1.
class MixtureFunction : public FunctionImpl {
public:
    explicit MixtureFunction(std::vector<MixtureComponent> parts) : parts_(std::move(parts))
    {
        require(!parts_.empty(), ErrorKind::InvalidArgument, "mixture needs at least one component");
        q_ = parts_.front().function.level();
        Rational total = 0;
        bool all_terms = true;
        for (const auto& part : parts_) {
            require(part.function.level() == q_, ErrorKind::LevelMismatch, "mixture components on different levels");
            require(part.weight >= 0, ErrorKind::InvalidArgument,
                    "negative mixture weight " + format_rational(part.weight));
            total += part.weight;
            all_terms = all_terms && part.function.product_terms() != nullptr;
        }
        require(total == 1, ErrorKind::InvalidArgument,
                "mixture weights sum to " + format_rational(total) + ", not 1");
        if (all_terms) {
            ProductTerms merged;
            for (const auto& part : parts_)
                merged.add_all(part.weight, *part.function.product_terms());
            terms_ = std::move(merged);
        }
    }

    int level() const override { return q_; }
    FunctionClass kind() const override { return FunctionClass::Mixture; }
    const ProductTerms* product_terms() const override { return terms_ ? &*terms_ : nullptr; }
    const std::vector<MixtureComponent>& parts() const noexcept { return parts_; }

    Rational evaluate(const StateDescription& sd) const override
    {
        if (terms_)
            return terms_->evaluate(sd.counts());
        Rational total = 0;
        for (const auto& part : parts_)
            if (part.weight != 0)
                total += part.weight * part.function.eval_sd(sd);
        return total;
    }

private:
    int q_ = 1;
    std::vector<MixtureComponent> parts_;
    std::optional<ProductTerms> terms_;
};

/// Restriction of a level-r function to L_q (predicates P_1..P_q): the value
/// of Theta is the sum over all level-r refinements of Theta on the same
/// constants.
class RestrictedFunction : public FunctionImpl {
public:
    static constexpr int max_level_gap = 8;
    static constexpr int max_refinement_bits = 24;

    RestrictedFunction(ProbabilityFunction inner, int q) : inner_(std::move(inner)), q_(q)
    {
        const int r = inner_.level();
        require(q >= 1 && q <= r, ErrorKind::OutOfRange,
                "cannot restrict a function on L_" + std::to_string(r) + " to L_" + std::to_string(q));
        require(r - q <= max_level_gap, ErrorKind::ResourceCap,
                "restriction gap " + std::to_string(r - q) + " exceeds " + std::to_string(max_level_gap));
    }

    int level() const override { return q_; }
    FunctionClass kind() const override { return FunctionClass::Restricted; }
    const ProbabilityFunction& inner() const noexcept { return inner_; }

    Rational evaluate(const StateDescription& sd) const override
    {
        const int r = inner_.level();
        const int gap = r - q_;
        const std::size_t n = sd.n();
        require(static_cast<std::size_t>(gap) * n <= max_refinement_bits, ErrorKind::ResourceCap,
                "restriction would enumerate 2^" + std::to_string(static_cast<std::size_t>(gap) * n) + " refinements");
        const auto& low = atom_table(q_);
        const auto& high = atom_table(r);
        std::vector<std::uint32_t> base(n);
        for (std::size_t j = 0; j < n; ++j)
            base[j] = low.mask(sd.h[j]);
        const std::uint64_t total = std::uint64_t{1} << (gap * static_cast<int>(n));
        const std::uint32_t slot = (1u << gap) - 1u;
        StateDescription refined;
        refined.q = r;
        refined.h.resize(n);
        Rational sum = 0;
        for (std::uint64_t code = 0; code < total; ++code) {
            for (std::size_t j = 0; j < n; ++j) {
                const auto extra = static_cast<std::uint32_t>(code >> (gap * static_cast<int>(j))) & slot;
                refined.h[j] = high.index_of(base[j] | (extra << q_));
            }
            sum += inner_.eval_sd(refined);
        }
        return sum;
    }

private:
    ProbabilityFunction inner_;
    int q_;
};

/// Explicit value table on state descriptions. Missing descriptions are 0;
/// the empty description is always 1. Used for hand-built (possibly
/// defective) functions.
class TableFunction : public FunctionImpl {
public:
    TableFunction(int q, std::map<std::vector<int>, Rational> values) : q_(q), values_(std::move(values))
    {
        for (const auto& [h, v] : values_)
            StateDescription(q, h);
    }

    int level() const override { return q_; }
    FunctionClass kind() const override { return FunctionClass::Table; }
    const std::map<std::vector<int>, Rational>& values() const noexcept { return values_; }

    Rational evaluate(const StateDescription& sd) const override
    {
        auto it = values_.find(sd.h);
        return it == values_.end() ? Rational(0) : it->second;
    }

private:
    int q_;
    std::map<std::vector<int>, Rational> values_;
};

inline ProbabilityFunction product_function(SimplexPoint x)
{
    return ProbabilityFunction(std::make_shared<ProductFunction>(std::move(x)));
}

inline ProbabilityFunction symmetrized(SimplexPoint c)
{
    return ProbabilityFunction(std::make_shared<SymmetrizedFunction>(std::move(c)));
}

inline ProbabilityFunction mixture(std::vector<MixtureComponent> parts)
{
    return ProbabilityFunction(std::make_shared<MixtureFunction>(std::move(parts)));
}

inline ProbabilityFunction table_function(int q, std::map<std::vector<int>, Rational> values)
{
    return ProbabilityFunction(std::make_shared<TableFunction>(q, std::move(values)));
}

inline ProbabilityFunction restrict(const ProbabilityFunction& w, int q)
{
    require(q <= w.level(), ErrorKind::OutOfRange,
            "target level " + std::to_string(q) + " exceeds source level " + std::to_string(w.level()));
    if (q == w.level())
        return w;
    return ProbabilityFunction(std::make_shared<RestrictedFunction>(w, q));
}

inline Rational eval_sd(const ProbabilityFunction& w, const StateDescription& sd) { return w.eval_sd(sd); }

/// w(phi) over the constant window `constants` (ascending mentioned
/// constants when empty).
inline Rational eval_sentence(const ProbabilityFunction& w, const QfFormula& phi, std::vector<int> constants = {})
{
    if (constants.empty())
        constants = phi.constants();
    const std::size_t n = constants.size();
    require(n <= 10, ErrorKind::ResourceCap, "sentence evaluation capped at 10 constants");
    require(static_cast<std::size_t>(w.level()) * n <= 24, ErrorKind::ResourceCap,
            "sentence evaluation would enumerate 2^" + std::to_string(static_cast<std::size_t>(w.level()) * n) +
                " state descriptions");
    Rational total = 0;
    for (const auto& sd : satisfying_descriptions(phi, w.level(), constants))
        total += w.eval_sd(sd);
    return total;
}

} // namespace uli
