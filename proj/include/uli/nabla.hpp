#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "uli/combinatorics.hpp"
#include "uli/error.hpp"
#include "uli/logic.hpp"
#include "uli/probability.hpp"
#include "uli/rational.hpp"

namespace uli {

using BitRow = std::vector<bool>;

inline BitRow parse_bits(std::string_view text)
{
    BitRow row;
    row.reserve(text.size());
    for (char ch : text) {
        require(ch == '0' || ch == '1', ErrorKind::InvalidArgument,
                "row bit string '" + std::string(text) + "' contains a non-binary digit");
        row.push_back(ch == '1');
    }
    return row;
}

inline std::string format_bits(const BitRow& row)
{
    std::string out;
    out.reserve(row.size());
    for (bool b : row)
        out += b ? '1' : '0';
    return out;
}

/// A nu x nu 0/1 matrix (a state description of L_nu on nu constants: row i
/// is predicate P_i, column j is constant a_j), stored as row slots with
/// multiplicities. Slots are positional: two slots may hold the same bits.
class UpsilonMatrix {
public:
    struct Row {
        BitRow bits;
        int mult = 1;
    };

    UpsilonMatrix(int nu, std::vector<Row> rows) : nu_(nu), rows_(std::move(rows))
    {
        require(nu >= 1, ErrorKind::InvalidArgument, "nu must be positive");
        require(!rows_.empty(), ErrorKind::InvalidArgument, "matrix needs at least one row");
        long total = 0;
        for (const auto& row : rows_) {
            require(static_cast<int>(row.bits.size()) == nu, ErrorKind::InvalidArgument,
                    "row '" + format_bits(row.bits) + "' does not have nu = " + std::to_string(nu) + " columns");
            require(row.mult >= 1, ErrorKind::InvalidArgument, "row multiplicities must be positive");
            total += row.mult;
        }
        require(total == nu, ErrorKind::InvalidArgument,
                "row multiplicities sum to " + std::to_string(total) + ", not nu = " + std::to_string(nu));
    }

    int nu() const noexcept { return nu_; }
    const std::vector<Row>& rows() const noexcept { return rows_; }

    /// Slot holding expanded row `index` (1-based, slots expanded in order).
    std::size_t slot_of(int index) const
    {
        require(index >= 1 && index <= nu_, ErrorKind::OutOfRange,
                "row index " + std::to_string(index) + " outside 1.." + std::to_string(nu_));
        int seen = 0;
        for (std::size_t s = 0; s < rows_.size(); ++s) {
            seen += rows_[s].mult;
            if (index <= seen)
                return s;
        }
        throw Error(ErrorKind::Internal, "row multiplicities inconsistent");
    }

private:
    int nu_;
    std::vector<Row> rows_;
};

/// The q x nu matrix whose columns list the atoms of L_q, atom i repeated
/// c_i * nu times. Row s holds the signs of P_s.
struct PhiMatrix {
    int nu = 0;
    std::vector<BitRow> rows;
};

/// Atom frequencies of the columns of a picked q x nu matrix: c_i is the
/// fraction of columns equal to atom i of L_q (q = number of rows).
inline std::vector<Rational> column_point(const std::vector<const BitRow*>& picked, int nu)
{
    const int q = static_cast<int>(picked.size());
    const auto& table = atom_table(q);
    std::vector<long> counts(static_cast<std::size_t>(table.size()), 0);
    for (int col = 0; col < nu; ++col) {
        std::uint32_t mask = 0;
        for (int s = 0; s < q; ++s)
            if ((*picked[static_cast<std::size_t>(s)])[static_cast<std::size_t>(col)])
                mask |= 1u << s;
        ++counts[static_cast<std::size_t>(table.index_of(mask) - 1)];
    }
    std::vector<Rational> c;
    c.reserve(counts.size());
    for (long k : counts)
        c.emplace_back(k, nu);
    return c;
}

inline PhiMatrix build_phi(const SimplexPoint& c, int nu)
{
    require(nu >= 1, ErrorKind::InvalidArgument, "nu must be positive");
    const int q = c.level();
    const auto& table = atom_table(q);
    PhiMatrix phi;
    phi.nu = nu;
    phi.rows.assign(static_cast<std::size_t>(q), BitRow{});
    for (int a = 1; a <= table.size(); ++a) {
        const Rational scaled = c[a] * nu;
        require(denominator(scaled) == 1, ErrorKind::NotIntegral,
                "c_" + std::to_string(a) + " * nu = " + format_rational(scaled) + " is not an integer");
        const long copies = numerator(scaled).convert_to<long>();
        for (long k = 0; k < copies; ++k)
            for (int s = 1; s <= q; ++s)
                phi.rows[static_cast<std::size_t>(s - 1)].push_back(table.positive(a, s));
    }
    return phi;
}

/// Row i of phi repeated p_i * nu times; zero-frequency rows are omitted.
inline UpsilonMatrix build_upsilon(const PhiMatrix& phi, const std::vector<Rational>& p, int nu)
{
    require(phi.nu == nu, ErrorKind::InvalidArgument, "phi has " + std::to_string(phi.nu) + " columns, not nu");
    require(p.size() == phi.rows.size(), ErrorKind::InvalidArgument,
            "frequency vector has " + std::to_string(p.size()) + " entries for " + std::to_string(phi.rows.size()) +
                " rows");
    Rational total = 0;
    std::vector<UpsilonMatrix::Row> rows;
    for (std::size_t i = 0; i < p.size(); ++i) {
        require(p[i] >= 0, ErrorKind::InvalidArgument, "negative row frequency");
        total += p[i];
        const Rational scaled = p[i] * nu;
        require(denominator(scaled) == 1, ErrorKind::NotIntegral,
                "p_" + std::to_string(i + 1) + " * nu = " + format_rational(scaled) + " is not an integer");
        const int mult = numerator(scaled).convert_to<int>();
        if (mult == 0)
            continue;
        auto same = std::find_if(rows.begin(), rows.end(), [&](const auto& row) { return row.bits == phi.rows[i]; });
        if (same != rows.end())
            same->mult += mult;
        else
            rows.push_back({phi.rows[i], mult});
    }
    require(total == 1, ErrorKind::InvalidArgument, "row frequencies sum to " + format_rational(total) + ", not 1");
    return UpsilonMatrix(nu, std::move(rows));
}

/// w^Upsilon for the q picked rows (1-based expanded indices, repeats
/// allowed): the product function of the column atom frequencies.
inline ProbabilityFunction row_pick_function(const UpsilonMatrix& upsilon, const std::vector<int>& picks)
{
    require(!picks.empty(), ErrorKind::InvalidArgument, "need at least one picked row");
    std::vector<const BitRow*> picked;
    for (int index : picks)
        picked.push_back(&upsilon.rows()[upsilon.slot_of(index)].bits);
    const int q = static_cast<int>(picks.size());
    return product_function(SimplexPoint(q, column_point(picked, upsilon.nu())));
}

/// Average of row-pick functions over picks of q rows, with replacement
/// (the nabla function) or without (injective picks only). Evaluated as a
/// mixture over multisets of row slots: a multiset with counts k_s has
/// weight multinomial(k) * prod (m_s / nu)^{k_s} with replacement, or
/// multinomial(k) * prod m_s^{(k_s)} / nu^{(q)} (falling powers) without, and
/// contributes y_c for the column frequencies c of any ordering.
class NablaFunction : public TermsFunction {
public:
    static constexpr double max_multisets = 200000;

    NablaFunction(UpsilonMatrix upsilon, int q, bool with_replacement)
        : TermsFunction(q, build_terms(upsilon, q, with_replacement)),
          upsilon_(std::move(upsilon)),
          with_replacement_(with_replacement)
    {
    }

    FunctionClass kind() const override { return FunctionClass::Nabla; }
    const UpsilonMatrix& upsilon() const noexcept { return upsilon_; }
    bool with_replacement() const noexcept { return with_replacement_; }

private:
    static ProductTerms build_terms(const UpsilonMatrix& upsilon, int q, bool with_replacement)
    {
        require(q >= 1, ErrorKind::OutOfRange, "nabla needs q >= 1");
        const int nu = upsilon.nu();
        if (!with_replacement)
            require(q <= nu, ErrorKind::OutOfRange,
                    "cannot pick " + std::to_string(q) + " distinct rows from nu = " + std::to_string(nu));
        const int t = static_cast<int>(upsilon.rows().size());
        require(binomial(t + q - 1, q) <= static_cast<long>(max_multisets), ErrorKind::ResourceCap,
                "nabla over " + std::to_string(t) + " row slots at q = " + std::to_string(q) +
                    " exceeds the multiset cap");
        const auto& maps = pred_perm_atom_maps(q);
        const Rational per_perm(1, static_cast<long>(maps.size()));
        const Integer total_falling = falling_factorial(nu, q);
        ProductTerms terms;
        for_each_multiset(t, q, [&](const std::vector<int>& counts) {
            Rational weight = Rational(multinomial(counts));
            std::vector<const BitRow*> picked;
            for (int s = 0; s < t; ++s) {
                const int k = counts[static_cast<std::size_t>(s)];
                const int m = upsilon.rows()[static_cast<std::size_t>(s)].mult;
                if (with_replacement)
                    weight *= ipow(Rational(m, nu), k);
                else
                    weight *= Rational(falling_factorial(m, k));
                for (int i = 0; i < k; ++i)
                    picked.push_back(&upsilon.rows()[static_cast<std::size_t>(s)].bits);
            }
            if (!with_replacement)
                weight /= Rational(total_falling);
            if (weight == 0)
                return;
            const auto c = column_point(picked, nu);
            for (const auto& map : maps)
                terms.add(weight * per_perm, permute_point(map, c));
        });
        return terms;
    }

    UpsilonMatrix upsilon_;
    bool with_replacement_;
};

inline ProbabilityFunction nabla(const UpsilonMatrix& upsilon, int q)
{
    return ProbabilityFunction(std::make_shared<NablaFunction>(upsilon, q, true));
}

inline ProbabilityFunction nabla_no_replacement(const UpsilonMatrix& upsilon, int q)
{
    return ProbabilityFunction(std::make_shared<NablaFunction>(upsilon, q, false));
}

/// p-nabla of Upsilon(c) written over the symmetrized functions:
/// sum_{n in K} prod p_i^{n_i} multinomial(n) y_{c_n}, where c_n takes row i
/// of phi n_i times. Zero-weight terms are dropped.
inline ProbabilityFunction nabla_expansion(const SimplexPoint& c, const std::vector<Rational>& p, int nu)
{
    const int q = c.level();
    const auto phi = build_phi(c, nu);
    build_upsilon(phi, p, nu); // validates p against nu
    std::vector<MixtureComponent> parts;
    for (const auto& n : compositions(q, q)) {
        Rational weight = Rational(multinomial(n));
        std::vector<const BitRow*> picked;
        for (int i = 0; i < q; ++i) {
            weight *= ipow(p[static_cast<std::size_t>(i)], n[static_cast<std::size_t>(i)]);
            for (int k = 0; k < n[static_cast<std::size_t>(i)]; ++k)
                picked.push_back(&phi.rows[static_cast<std::size_t>(i)]);
        }
        if (weight == 0)
            continue;
        parts.push_back({weight, symmetrized(SimplexPoint(q, column_point(picked, nu)))});
    }
    return mixture(std::move(parts));
}

} // namespace uli
