#include <gtest/gtest.h>

#include <map>
#include <memory>
#include <set>
#include <string>

#include "support.hpp"

namespace {

using namespace uli;
using namespace uli::testing;

std::vector<std::string> bit_strings(int q)
{
    std::vector<std::string> out;
    const auto& t = atom_table(q);
    for (int a = 1; a <= t.size(); ++a)
        out.push_back(t.bits(a));
    return out;
}

TEST(Atoms, LevelOneOrder)
{
    EXPECT_EQ(bit_strings(1), (std::vector<std::string>{"1", "0"}));
    EXPECT_EQ(atom_table(1).gammas(), (std::vector<int>{0, 1}));
}

TEST(Atoms, LevelTwoOrder)
{
    EXPECT_EQ(bit_strings(2), (std::vector<std::string>{"11", "10", "01", "00"}));
    EXPECT_EQ(atom_table(2).gammas(), (std::vector<int>{0, 1, 1, 2}));
}

TEST(Atoms, LevelThreeGammas)
{
    EXPECT_EQ(atom_table(3).gammas(), (std::vector<int>{0, 1, 1, 1, 2, 2, 2, 3}));
    EXPECT_EQ(bit_strings(3), (std::vector<std::string>{"111", "110", "101", "011", "100", "010", "001", "000"}));
}

TEST(Atoms, MatchesIndependentOrdering)
{
    for (int q = 1; q <= 7; ++q) {
        const auto& t = atom_table(q);
        for (int a = 1; a <= t.size(); ++a) {
            std::vector<bool> eps;
            for (char ch : t.bits(a))
                eps.push_back(ch == '1');
            EXPECT_EQ(oracle_atom_index(eps), a) << "q=" << q;
            EXPECT_EQ(t.from_bits(t.bits(a)), a);
        }
    }
}

TEST(Atoms, BlockSizesAreBinomial)
{
    for (int q = 1; q <= 10; ++q) {
        const auto& g = atom_table(q).gammas();
        ASSERT_EQ(static_cast<int>(g.size()), 1 << q);
        EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
        for (int k = 0; k <= q; ++k)
            EXPECT_EQ(std::count(g.begin(), g.end(), k), binomial(q, k).convert_to<long>());
    }
}

TEST(Atoms, LevelOutOfRange)
{
    EXPECT_THROW(AtomTable(0), Error);
    EXPECT_THROW(AtomTable(AtomTable::max_level + 1), Error);
    try {
        atom_table(2).mask(5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::OutOfRange);
    }
}

TEST(StateDescriptions, EnumerationIsLexicographic)
{
    const auto sds = all_sds(2, 2);
    ASSERT_EQ(sds.size(), 16u);
    EXPECT_EQ(sds.front().h, (std::vector<int>{1, 1}));
    EXPECT_EQ(sds[1].h, (std::vector<int>{1, 2}));
    EXPECT_EQ(sds.back().h, (std::vector<int>{4, 4}));
    EXPECT_TRUE(std::is_sorted(sds.begin(), sds.end()));
    EXPECT_EQ(all_sds(3, 0).size(), 1u);
}

TEST(StateDescriptions, CountsAndValidation)
{
    const StateDescription sd(2, {2, 3, 2});
    EXPECT_EQ(sd.counts(), (std::vector<int>{0, 2, 1, 0}));
    EXPECT_THROW(StateDescription(2, {5}), Error);
    EXPECT_THROW(StateDescription(1, {0}), Error);
}

TEST(PredicatePermutation, SwapMovesAtom)
{
    const auto& t = atom_table(2);
    const auto swap = PredPermutation::swap(2, 1, 2);
    EXPECT_EQ(swap.apply_atom(t.from_bits("10")), t.from_bits("01"));
    const StateDescription sd(2, {2, 4});
    EXPECT_EQ(apply_pred_perm(swap, sd).h, (std::vector<int>{3, 4}));
    EXPECT_EQ(apply_pred_perm(PredPermutation::identity(2), sd), sd);
}

TEST(PredicatePermutation, LevelMismatchAndBijectivity)
{
    EXPECT_THROW(apply_pred_perm(PredPermutation::identity(3), StateDescription(2, {1})), Error);
    EXPECT_THROW(PredPermutation({1, 1}), Error);
    EXPECT_THROW(PredPermutation({1, 3}), Error);
}

TEST(PredicatePermutation, LexicographicEnumeration)
{
    const auto perms = all_pred_perms(3);
    ASSERT_EQ(perms.size(), 6u);
    EXPECT_EQ(perms.front().mapping(), (std::vector<int>{1, 2, 3}));
    EXPECT_EQ(perms[1].mapping(), (std::vector<int>{1, 3, 2}));
    EXPECT_EQ(perms.back().mapping(), (std::vector<int>{3, 2, 1}));
}

TEST(PredicatePermutation, GroupActionProperty)
{
    Rng rng(kSeed);
    for (int trial = 0; trial < 300; ++trial) {
        const int q = uniform_int(rng, 1, 5);
        const PredPermutation sigma(random_permutation(rng, q));
        const PredPermutation tau(random_permutation(rng, q));
        const auto& t = atom_table(q);
        const int a = uniform_int(rng, 1, t.size());
        EXPECT_EQ(t.gamma(sigma.apply_atom(a)), t.gamma(a));
        EXPECT_EQ(sigma.apply_atom(tau.apply_atom(a)), sigma.compose(tau).apply_atom(a));
        // sign of P_i in a becomes the sign of P_sigma(i)
        for (int i = 1; i <= q; ++i)
            EXPECT_EQ(t.positive(sigma.apply_atom(a), sigma(i)), t.positive(a, i));
    }
}

TEST(ConstantPermutation, Examples)
{
    EXPECT_EQ(apply_const_perm({1, 2}, StateDescription(1, {1, 2})).h, (std::vector<int>{1, 2}));
    EXPECT_EQ(apply_const_perm({2, 1}, StateDescription(1, {1, 2})).h, (std::vector<int>{2, 1}));
    // cycle a1 -> a2 -> a3 -> a1
    EXPECT_EQ(apply_const_perm({2, 3, 1}, StateDescription(1, {1, 1, 2})).h, (std::vector<int>{2, 1, 1}));
}

TEST(ConstantPermutation, RejectsNonBijection)
{
    EXPECT_THROW(apply_const_perm({1, 1}, StateDescription(1, {1, 2})), Error);
    EXPECT_THROW(apply_const_perm({1}, StateDescription(1, {1, 2})), Error);
    EXPECT_THROW(apply_const_perm({1, 3}, StateDescription(1, {1, 2})), Error);
}

TEST(ConstantPermutation, PreservesMultiset)
{
    Rng rng(kSeed + 1);
    for (int trial = 0; trial < 200; ++trial) {
        const int q = uniform_int(rng, 1, 3);
        const int n = uniform_int(rng, 1, 6);
        const auto sd = random_sd(rng, q, n);
        const auto moved = apply_const_perm(random_permutation(rng, n), sd);
        EXPECT_EQ(moved.counts(), sd.counts());
    }
}

// --- formulas ---------------------------------------------------------------

TEST(Formula, ConjunctionNode)
{
    const auto f = parse_formula("P1(a1) & !P2(a1)");
    EXPECT_EQ(f.op(), QfFormula::Op::And);
    EXPECT_EQ(f.lhs().op(), QfFormula::Op::Literal);
    EXPECT_EQ(f.rhs().op(), QfFormula::Op::Not);
    EXPECT_EQ(f.rhs().lhs().predicate(), 2);
    EXPECT_EQ(f.to_string(), "P1(a1) & !P2(a1)");
}

TEST(Formula, PrecedenceAndOverOr)
{
    const auto f = parse_formula("P1(a1) | P1(a1) & P2(a2)");
    EXPECT_EQ(f.op(), QfFormula::Op::Or);
    EXPECT_EQ(f.rhs().op(), QfFormula::Op::And);
    EXPECT_EQ(f.constants(), (std::vector<int>{1, 2}));
}

TEST(Formula, ImplicationIsRightAssociative)
{
    const auto f = parse_formula("P1(a1) -> P2(a1) -> P3(a1)");
    EXPECT_EQ(f.op(), QfFormula::Op::Implies);
    EXPECT_EQ(f.rhs().op(), QfFormula::Op::Implies);
    EXPECT_EQ(f.max_predicate(), 3);
    EXPECT_EQ(parse_formula("(P1(a1) -> P2(a1)) -> P3(a1)").to_string(), "(P1(a1) -> P2(a1)) -> P3(a1)");
}

TEST(Formula, SyntaxErrorPosition)
{
    try {
        parse_formula("P1(a1");
        FAIL();
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.position(), 6u);
        EXPECT_EQ(e.kind(), ErrorKind::SyntaxError);
    }
    for (const char* bad : {"", "P1", "P0(a1)", "P1(a0)", "P1(a1) &", "(P1(a1)", "P1(a1))", "Q1(a1)", "P1(a1) - P2(a1)"})
        EXPECT_THROW(parse_formula(bad), SyntaxError) << bad;
}

TEST(Formula, ElaborationChecksPredicates)
{
    const auto f = parse_formula("P3(a1)");
    EXPECT_THROW(satisfying_descriptions(f, 2, {1}), Error);
    EXPECT_THROW(satisfying_descriptions(parse_formula("P1(a2)"), 2, {1}), Error);
}

TEST(Formula, SatisfyingDescriptionsExamples)
{
    EXPECT_EQ(satisfying_descriptions(parse_formula("P1(a1) | !P1(a1)"), 1, {1}).size(), 2u);
    EXPECT_TRUE(satisfying_descriptions(parse_formula("P1(a1) & !P1(a1)"), 1, {1}).empty());
    const auto sat = satisfying_descriptions(parse_formula("P1(a1)"), 2, {1});
    ASSERT_EQ(sat.size(), 2u);
    EXPECT_EQ(sat[0].h, (std::vector<int>{1}));
    EXPECT_EQ(sat[1].h, (std::vector<int>{2}));
}

TEST(Formula, WindowOrderMapsConstants)
{
    // constants listed as {2, 1}: position 0 describes a2
    const auto sat = satisfying_descriptions(parse_formula("P1(a1) & !P1(a2)"), 1, {2, 1});
    ASSERT_EQ(sat.size(), 1u);
    EXPECT_EQ(sat[0].h, (std::vector<int>{2, 1}));
}

// Random formulas carried both as text and as a test-side tree.
struct Tree {
    char op = 'L'; // L ! & | >
    int pred = 1;
    int constant = 1;
    std::shared_ptr<Tree> a, b;
};

std::shared_ptr<Tree> random_tree(Rng& rng, int depth, int q, int consts)
{
    auto t = std::make_shared<Tree>();
    const int pick = depth == 0 ? 0 : uniform_int(rng, 0, 4);
    static const char ops[] = {'L', '!', '&', '|', '>'};
    t->op = ops[pick];
    if (t->op == 'L') {
        t->pred = uniform_int(rng, 1, q);
        t->constant = uniform_int(rng, 1, consts);
    } else {
        t->a = random_tree(rng, depth - 1, q, consts);
        if (t->op != '!')
            t->b = random_tree(rng, depth - 1, q, consts);
    }
    return t;
}

std::string fully_parenthesized(const Tree& t)
{
    switch (t.op) {
    case 'L': return "P" + std::to_string(t.pred) + "(a" + std::to_string(t.constant) + ")";
    case '!': return "!(" + fully_parenthesized(*t.a) + ")";
    case '&': return "(" + fully_parenthesized(*t.a) + " & " + fully_parenthesized(*t.b) + ")";
    case '|': return "(" + fully_parenthesized(*t.a) + " | " + fully_parenthesized(*t.b) + ")";
    default: return "(" + fully_parenthesized(*t.a) + " -> " + fully_parenthesized(*t.b) + ")";
    }
}

bool truth(const Tree& t, const std::vector<std::string>& atom_bits)
{
    switch (t.op) {
    case 'L': return atom_bits[static_cast<std::size_t>(t.constant - 1)][static_cast<std::size_t>(t.pred - 1)] == '1';
    case '!': return !truth(*t.a, atom_bits);
    case '&': return truth(*t.a, atom_bits) && truth(*t.b, atom_bits);
    case '|': return truth(*t.a, atom_bits) || truth(*t.b, atom_bits);
    default: return !truth(*t.a, atom_bits) || truth(*t.b, atom_bits);
    }
}

TEST(Formula, ModelSetMatchesTruthTable)
{
    Rng rng(kSeed + 2);
    for (int trial = 0; trial < 150; ++trial) {
        const int q = uniform_int(rng, 1, 3);
        const int consts = uniform_int(rng, 1, 3);
        const auto tree = random_tree(rng, uniform_int(rng, 0, 4), q, consts);
        const auto phi = parse_formula(fully_parenthesized(*tree));
        std::vector<int> window(static_cast<std::size_t>(consts));
        std::iota(window.begin(), window.end(), 1);
        const auto sat = satisfying_descriptions(phi, q, window);
        std::set<std::vector<int>> got;
        for (const auto& sd : sat)
            got.insert(sd.h);
        std::size_t expected = 0;
        for_each_sd(q, static_cast<std::size_t>(consts), [&](const StateDescription& sd) {
            std::vector<std::string> bits;
            for (int a : sd.h)
                bits.push_back(atom_table(q).bits(a));
            const bool t = truth(*tree, bits);
            EXPECT_EQ(t, got.count(sd.h) == 1);
            expected += t ? 1 : 0;
            return true;
        });
        EXPECT_EQ(sat.size(), expected);
    }
}

TEST(Formula, ComplementCountsProperty)
{
    Rng rng(kSeed + 3);
    for (int trial = 0; trial < 100; ++trial) {
        const int q = uniform_int(rng, 1, 3);
        const int consts = uniform_int(rng, 1, 3);
        const auto tree = random_tree(rng, 3, q, consts);
        const auto phi = parse_formula(fully_parenthesized(*tree));
        std::vector<int> window(static_cast<std::size_t>(consts));
        std::iota(window.begin(), window.end(), 1);
        const auto pos = satisfying_descriptions(phi, q, window).size();
        const auto neg = satisfying_descriptions(QfFormula::negation(phi), q, window).size();
        EXPECT_EQ(pos + neg, static_cast<std::size_t>(1) << (q * consts));
    }
}

TEST(Formula, PrintParseFixpoint)
{
    Rng rng(kSeed + 4);
    for (int trial = 0; trial < 300; ++trial) {
        const auto tree = random_tree(rng, uniform_int(rng, 0, 5), 4, 4);
        const auto phi = parse_formula(fully_parenthesized(*tree));
        const auto printed = phi.to_string();
        const auto again = parse_formula(printed);
        EXPECT_TRUE(again == phi) << printed;
        EXPECT_EQ(again.to_string(), printed);
    }
}

} // namespace
