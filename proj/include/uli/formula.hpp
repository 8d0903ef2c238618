#pragma once

#include <algorithm>
#include <cctype>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "uli/error.hpp"
#include "uli/logic.hpp"

namespace uli {

/// Quantifier-free sentence over literals P_k(a_j).
///
/// Grammar (loosest binding first, `->` is right associative):
///
///     implication := disjunction [ "->" implication ]
///     disjunction := conjunction { "|" conjunction }
///     conjunction := unary { "&" unary }
///     unary       := "!" unary | "(" implication ")" | "P" k "(" "a" j ")"
class QfFormula {
public:
    enum class Op { Literal, Not, And, Or, Implies };

    static QfFormula literal(int predicate, int constant)
    {
        require(predicate >= 1 && constant >= 1, ErrorKind::OutOfRange, "predicate and constant indices start at 1");
        auto node = std::make_shared<Node>();
        node->op = Op::Literal;
        node->predicate = predicate;
        node->constant = constant;
        return QfFormula(std::move(node));
    }

    static QfFormula negation(QfFormula child)
    {
        auto node = std::make_shared<Node>();
        node->op = Op::Not;
        node->lhs = std::move(child.node_);
        return QfFormula(std::move(node));
    }

    static QfFormula binary(Op op, QfFormula lhs, QfFormula rhs)
    {
        require(op == Op::And || op == Op::Or || op == Op::Implies, ErrorKind::InvalidArgument,
                "not a binary connective");
        auto node = std::make_shared<Node>();
        node->op = op;
        node->lhs = std::move(lhs.node_);
        node->rhs = std::move(rhs.node_);
        return QfFormula(std::move(node));
    }

    Op op() const noexcept { return node_->op; }
    int predicate() const noexcept { return node_->predicate; }
    int constant() const noexcept { return node_->constant; }
    QfFormula lhs() const { return QfFormula(node_->lhs); }
    QfFormula rhs() const { return QfFormula(node_->rhs); }

    int max_predicate() const { return max_predicate(*node_); }

    /// Constant indices mentioned, ascending.
    std::vector<int> constants() const
    {
        std::set<int> seen;
        collect_constants(*node_, seen);
        return {seen.begin(), seen.end()};
    }

    /// `atom_of(constant)` returns the sign mask (bit k-1 for P_k) of the atom
    /// assigned to that constant.
    template <typename AtomOf>
    bool evaluate(const AtomOf& atom_of) const
    {
        return evaluate(*node_, atom_of);
    }

    std::string to_string() const
    {
        std::string out;
        print(*node_, out);
        return out;
    }

    friend bool operator==(const QfFormula& a, const QfFormula& b) { return equal(*a.node_, *b.node_); }

private:
    struct Node {
        Op op = Op::Literal;
        int predicate = 0;
        int constant = 0;
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;
    };

    explicit QfFormula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    static int precedence(Op op)
    {
        switch (op) {
        case Op::Implies: return 1;
        case Op::Or: return 2;
        case Op::And: return 3;
        case Op::Not: return 4;
        case Op::Literal: return 5;
        }
        return 0;
    }

    static int max_predicate(const Node& n)
    {
        if (n.op == Op::Literal)
            return n.predicate;
        int m = max_predicate(*n.lhs);
        if (n.rhs)
            m = std::max(m, max_predicate(*n.rhs));
        return m;
    }

    static void collect_constants(const Node& n, std::set<int>& out)
    {
        if (n.op == Op::Literal) {
            out.insert(n.constant);
            return;
        }
        collect_constants(*n.lhs, out);
        if (n.rhs)
            collect_constants(*n.rhs, out);
    }

    template <typename AtomOf>
    static bool evaluate(const Node& n, const AtomOf& atom_of)
    {
        switch (n.op) {
        case Op::Literal: return (atom_of(n.constant) >> (n.predicate - 1)) & 1u;
        case Op::Not: return !evaluate(*n.lhs, atom_of);
        case Op::And: return evaluate(*n.lhs, atom_of) && evaluate(*n.rhs, atom_of);
        case Op::Or: return evaluate(*n.lhs, atom_of) || evaluate(*n.rhs, atom_of);
        case Op::Implies: return !evaluate(*n.lhs, atom_of) || evaluate(*n.rhs, atom_of);
        }
        return false;
    }

    static void print(const Node& n, std::string& out)
    {
        auto child = [&](const Node& c, bool parens) {
            if (parens)
                out += '(';
            print(c, out);
            if (parens)
                out += ')';
        };
        const int prec = precedence(n.op);
        switch (n.op) {
        case Op::Literal:
            out += 'P' + std::to_string(n.predicate) + "(a" + std::to_string(n.constant) + ')';
            return;
        case Op::Not:
            out += '!';
            child(*n.lhs, precedence(n.lhs->op) < prec);
            return;
        case Op::And:
        case Op::Or:
        case Op::Implies: {
            const bool right_assoc = n.op == Op::Implies;
            const int lp = precedence(n.lhs->op);
            const int rp = precedence(n.rhs->op);
            child(*n.lhs, right_assoc ? lp <= prec : lp < prec);
            out += n.op == Op::And ? " & " : n.op == Op::Or ? " | " : " -> ";
            child(*n.rhs, right_assoc ? rp < prec : rp <= prec);
            return;
        }
        }
    }

    static bool equal(const Node& a, const Node& b)
    {
        if (a.op != b.op)
            return false;
        if (a.op == Op::Literal)
            return a.predicate == b.predicate && a.constant == b.constant;
        if (!equal(*a.lhs, *b.lhs))
            return false;
        return a.rhs == nullptr ? b.rhs == nullptr : equal(*a.rhs, *b.rhs);
    }

    std::shared_ptr<const Node> node_;
};

namespace detail {

class FormulaParser {
public:
    explicit FormulaParser(std::string_view text) : text_(text) {}

    QfFormula parse()
    {
        auto f = implication();
        skip_space();
        if (pos_ != text_.size())
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return f;
    }

private:
    QfFormula implication()
    {
        auto lhs = disjunction();
        if (accept("->"))
            return QfFormula::binary(QfFormula::Op::Implies, std::move(lhs), implication());
        return lhs;
    }

    QfFormula disjunction()
    {
        auto lhs = conjunction();
        while (accept("|"))
            lhs = QfFormula::binary(QfFormula::Op::Or, std::move(lhs), conjunction());
        return lhs;
    }

    QfFormula conjunction()
    {
        auto lhs = unary();
        while (accept("&"))
            lhs = QfFormula::binary(QfFormula::Op::And, std::move(lhs), unary());
        return lhs;
    }

    QfFormula unary()
    {
        if (accept("!"))
            return QfFormula::negation(unary());
        if (accept("(")) {
            auto inner = implication();
            expect(")");
            return inner;
        }
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == 'P') {
            ++pos_;
            const int predicate = index("predicate index");
            expect("(");
            skip_space();
            if (pos_ >= text_.size() || text_[pos_] != 'a')
                fail("expected constant 'a<j>'");
            ++pos_;
            const int constant = index("constant index");
            expect(")");
            return QfFormula::literal(predicate, constant);
        }
        if (pos_ >= text_.size())
            fail("unexpected end of input");
        fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    }

    int index(const char* what)
    {
        const std::size_t start = pos_;
        long value = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            value = value * 10 + (text_[pos_] - '0');
            if (value > 1000000)
                fail(std::string(what) + " too large");
            ++pos_;
        }
        if (pos_ == start)
            fail(std::string("expected ") + what);
        if (value == 0) {
            pos_ = start;
            fail(std::string(what) + " must be positive");
        }
        return static_cast<int>(value);
    }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool accept(std::string_view token)
    {
        skip_space();
        if (text_.substr(pos_, token.size()) == token) {
            pos_ += token.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view token)
    {
        if (!accept(token))
            fail("expected '" + std::string(token) + "'");
    }

    [[noreturn]] void fail(const std::string& message) const { throw SyntaxError(pos_ + 1, message); }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline QfFormula parse_formula(std::string_view text) { return detail::FormulaParser(text).parse(); }

/// Checks that `phi` can be elaborated in L_q over the constant window.
inline void check_elaboration(const QfFormula& phi, int q, const std::vector<int>& constants)
{
    require(phi.max_predicate() <= q, ErrorKind::OutOfRange,
            "predicate P" + std::to_string(phi.max_predicate()) + " not in L_" + std::to_string(q));
    for (int c : phi.constants())
        require(std::find(constants.begin(), constants.end(), c) != constants.end(), ErrorKind::InvalidArgument,
                "constant a" + std::to_string(c) + " is outside the constant window");
}

/// State descriptions over `constants` (in the given order) that satisfy
/// `phi`, in lexicographic order. Position j of each result describes
/// constants[j].
inline std::vector<StateDescription> satisfying_descriptions(const QfFormula& phi, int q,
                                                             const std::vector<int>& constants)
{
    check_elaboration(phi, q, constants);
    const auto& table = atom_table(q);
    std::vector<StateDescription> out;
    for_each_sd(q, constants.size(), [&](const StateDescription& sd) {
        auto atom_of = [&](int constant) {
            const auto it = std::find(constants.begin(), constants.end(), constant);
            return table.mask(sd.h[static_cast<std::size_t>(it - constants.begin())]);
        };
        if (phi.evaluate(atom_of))
            out.push_back(sd);
        return true;
    });
    return out;
}

} // namespace uli
