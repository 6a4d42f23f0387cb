// First-order syntax over finite signatures: terms, formulas, the syntactic
// measures dp(f) and |f|, subformula collection, and the canonical
// length-then-lexicographic formula enumeration.
//
// Formulas are immutable trees shared through shared_ptr; all operations here
// are pure and safe to use concurrently.

#ifndef FLAB_LOGIC_HPP
#define FLAB_LOGIC_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "flab/errors.hpp"

namespace flab {

// ── Signature ───────────────────────────────────────────────────────────────
// Finite first-order signature. Equality is a logical symbol and is not
// listed (nor counted in size()). The arithmetic base flag marks signatures
// containing S, +, * (functions), 0 (constant) and < (relation) with the
// standard arities.

struct Signature {
    struct Symbol {
        std::string name;
        std::size_t arity = 0;
    };

    std::vector<Symbol> relations;
    std::vector<Symbol> functions;
    std::vector<std::string> constants;
    bool arithmetic_base = false;

    // |L|: constants + relations + functions, equality excluded.
    std::size_t size() const { return relations.size() + functions.size() + constants.size(); }

    // Largest function arity; 0 when there are no function symbols.
    std::size_t max_function_arity() const;

    const Symbol* find_relation(const std::string& name) const;
    const Symbol* find_function(const std::string& name) const;
    bool has_constant(const std::string& name) const;
    bool has_symbol(const std::string& name) const;

    // Throws SignatureError on duplicate names or zero-arity relation/function.
    void validate() const;

    bool operator==(const Signature& other) const;
};

// The language of arithmetic: S/1, +/2, */2, constant 0, relation </2.
Signature arithmetic_signature();

// ── Terms ───────────────────────────────────────────────────────────────────

enum class TermKind : std::uint8_t { Variable, Constant, Apply };

class Term {
public:
    static Term variable(std::string name);
    static Term constant(std::string name);
    static Term apply(std::string fn, std::vector<Term> args);

    TermKind kind() const { return node_->kind; }
    const std::string& name() const { return node_->name; }
    const std::vector<Term>& args() const { return node_->args; }

    void collect_vars(std::set<std::string>& out) const;
    std::size_t nesting_depth() const;  // variables/constants: 0, f(t…): 1+max

    bool operator==(const Term& other) const;
    bool operator!=(const Term& other) const { return !(*this == other); }

private:
    struct Node {
        TermKind kind;
        std::string name;
        std::vector<Term> args;
    };
    std::shared_ptr<const Node> node_;
    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
};

// ── Formulas ────────────────────────────────────────────────────────────────
// Core connectives only: implication is desugared at parse time and bounded
// quantifiers are expanded, so evaluators need exactly these seven cases.

enum class FormulaKind : std::uint8_t { Equal, Relation, Not, And, Or, Exists, Forall };

class Formula {
public:
    Formula();  // the trivial atom x = x; lets aggregates default-construct

    static Formula equal(Term lhs, Term rhs);
    static Formula relation(std::string name, std::vector<Term> args);
    static Formula negation(Formula f);
    static Formula conjunction(Formula lhs, Formula rhs);
    static Formula disjunction(Formula lhs, Formula rhs);
    static Formula exists(std::string var, Formula body);
    static Formula forall(std::string var, Formula body);

    FormulaKind kind() const { return node_->kind; }
    bool is_atomic() const {
        return kind() == FormulaKind::Equal || kind() == FormulaKind::Relation;
    }
    bool is_quantifier() const {
        return kind() == FormulaKind::Exists || kind() == FormulaKind::Forall;
    }

    // Relation name, or the bound variable for quantifiers.
    const std::string& name() const { return node_->name; }
    const std::vector<Term>& terms() const { return node_->terms; }          // atomic nodes
    const Formula& child(std::size_t i = 0) const { return node_->children[i]; }
    std::size_t child_count() const { return node_->children.size(); }

    bool operator==(const Formula& other) const;
    bool operator!=(const Formula& other) const { return !(*this == other); }
    // Canonical-serialization order; usable as a strict weak ordering.
    bool operator<(const Formula& other) const;

private:
    struct Node {
        FormulaKind kind;
        std::string name;           // relation name / bound variable
        std::vector<Term> terms;    // atomic arguments
        std::vector<Formula> children;
    };
    std::shared_ptr<const Node> node_;
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
};

// ── Syntactic measures ──────────────────────────────────────────────────────

// dp(f): number of quantifier occurrences (not alternations).
std::size_t depth(const Formula& f);

// |f|: token count of the canonical (parenthesis-free prefix) serialization.
std::size_t length(const Formula& f);

// The canonical serialization itself; one token per symbol occurrence.
std::vector<std::string> canonical_tokens(const Formula& f);
std::string canonical_string(const Formula& f);

std::set<std::string> free_vars(const Formula& f);

// Capture-safe only when `to` does not occur bound in f; callers substitute
// fresh variables.
Formula substitute_free(const Formula& f, const std::string& var, const Term& to);
Formula substitute_free(const Formula& f, const std::string& var, const std::string& to_var);

// All structurally distinct subtrees of f, f included, in first-visit
// (preorder) order. |result| ≤ C(length(f), 2).
std::vector<Formula> subformulas(const Formula& f);

// Maximal term occurrences in f whose variables avoid every enclosing bound
// variable, i.e. the terms that an assignment on free_vars(f) fully
// instantiates. These drive the Def 2.6 eligibility check.
std::vector<Term> instantiable_terms(const Formula& f);

// Largest function nesting depth over all term occurrences in f.
std::size_t max_term_depth(const Formula& f);

// First k single-free-variable formulas over sig, ordered by (canonical
// length, lexicographic token comparison). The free variable is canonically
// named x; bound variables y0, y1, … by nesting depth. Deterministic and
// prefix-stable. Throws GuardExceeded if the enumeration would have to grow
// formulas beyond an internal length bound before producing k items.
std::vector<Formula> enumerate_formulas(const Signature& sig, std::size_t k);

}  // namespace flab

#endif
