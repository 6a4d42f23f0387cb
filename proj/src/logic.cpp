#include "flab/logic.hpp"

#include <algorithm>
#include <map>

namespace flab {

// ── Signature ───────────────────────────────────────────────────────────────

std::size_t Signature::max_function_arity() const {
    std::size_t j = 0;
    for (const auto& f : functions) j = std::max(j, f.arity);
    return j;
}

const Signature::Symbol* Signature::find_relation(const std::string& name) const {
    for (const auto& r : relations)
        if (r.name == name) return &r;
    return nullptr;
}

const Signature::Symbol* Signature::find_function(const std::string& name) const {
    for (const auto& f : functions)
        if (f.name == name) return &f;
    return nullptr;
}

bool Signature::has_constant(const std::string& name) const {
    return std::find(constants.begin(), constants.end(), name) != constants.end();
}

bool Signature::has_symbol(const std::string& name) const {
    return find_relation(name) || find_function(name) || has_constant(name);
}

void Signature::validate() const {
    std::set<std::string> seen;
    auto check = [&](const std::string& name) {
        if (name.empty()) throw SignatureError("empty symbol name");
        if (!seen.insert(name).second)
            throw SignatureError("duplicate symbol name: " + name);
    };
    for (const auto& r : relations) {
        check(r.name);
        if (r.arity == 0) throw SignatureError("relation arity must be >= 1: " + r.name);
    }
    for (const auto& f : functions) {
        check(f.name);
        if (f.arity == 0) throw SignatureError("function arity must be >= 1: " + f.name);
    }
    for (const auto& c : constants) check(c);
}

bool Signature::operator==(const Signature& other) const {
    auto sym_eq = [](const Symbol& a, const Symbol& b) {
        return a.name == b.name && a.arity == b.arity;
    };
    return arithmetic_base == other.arithmetic_base &&
           std::equal(relations.begin(), relations.end(), other.relations.begin(),
                      other.relations.end(), sym_eq) &&
           std::equal(functions.begin(), functions.end(), other.functions.begin(),
                      other.functions.end(), sym_eq) &&
           constants == other.constants;
}

Signature arithmetic_signature() {
    Signature sig;
    sig.relations = {{"<", 2}};
    sig.functions = {{"S", 1}, {"+", 2}, {"*", 2}};
    sig.constants = {"0"};
    sig.arithmetic_base = true;
    return sig;
}

// ── Terms ───────────────────────────────────────────────────────────────────

Term Term::variable(std::string name) {
    return Term(std::make_shared<Node>(Node{TermKind::Variable, std::move(name), {}}));
}

Term Term::constant(std::string name) {
    return Term(std::make_shared<Node>(Node{TermKind::Constant, std::move(name), {}}));
}

Term Term::apply(std::string fn, std::vector<Term> args) {
    return Term(std::make_shared<Node>(Node{TermKind::Apply, std::move(fn), std::move(args)}));
}

void Term::collect_vars(std::set<std::string>& out) const {
    if (kind() == TermKind::Variable) {
        out.insert(name());
        return;
    }
    for (const auto& a : args()) a.collect_vars(out);
}

std::size_t Term::nesting_depth() const {
    if (kind() != TermKind::Apply) return 0;
    std::size_t d = 0;
    for (const auto& a : args()) d = std::max(d, a.nesting_depth());
    return d + 1;
}

bool Term::operator==(const Term& other) const {
    if (node_ == other.node_) return true;
    if (kind() != other.kind() || name() != other.name()) return false;
    if (args().size() != other.args().size()) return false;
    for (std::size_t i = 0; i < args().size(); ++i)
        if (!(args()[i] == other.args()[i])) return false;
    return true;
}

// ── Formulas ────────────────────────────────────────────────────────────────

Formula::Formula() : node_(equal(Term::variable("x"), Term::variable("x")).node_) {}

Formula Formula::equal(Term lhs, Term rhs) {
    return Formula(std::make_shared<Node>(
        Node{FormulaKind::Equal, "=", {std::move(lhs), std::move(rhs)}, {}}));
}

Formula Formula::relation(std::string name, std::vector<Term> args) {
    return Formula(std::make_shared<Node>(
        Node{FormulaKind::Relation, std::move(name), std::move(args), {}}));
}

Formula Formula::negation(Formula f) {
    return Formula(std::make_shared<Node>(Node{FormulaKind::Not, "", {}, {std::move(f)}}));
}

Formula Formula::conjunction(Formula lhs, Formula rhs) {
    return Formula(std::make_shared<Node>(
        Node{FormulaKind::And, "", {}, {std::move(lhs), std::move(rhs)}}));
}

Formula Formula::disjunction(Formula lhs, Formula rhs) {
    return Formula(std::make_shared<Node>(
        Node{FormulaKind::Or, "", {}, {std::move(lhs), std::move(rhs)}}));
}

Formula Formula::exists(std::string var, Formula body) {
    return Formula(std::make_shared<Node>(
        Node{FormulaKind::Exists, std::move(var), {}, {std::move(body)}}));
}

Formula Formula::forall(std::string var, Formula body) {
    return Formula(std::make_shared<Node>(
        Node{FormulaKind::Forall, std::move(var), {}, {std::move(body)}}));
}

namespace {

void term_tokens(const Term& t, std::vector<std::string>& out) {
    out.push_back(t.name());
    for (const auto& a : t.args()) term_tokens(a, out);
}

void formula_tokens(const Formula& f, std::vector<std::string>& out) {
    switch (f.kind()) {
        case FormulaKind::Equal:
            out.push_back("=");
            term_tokens(f.terms()[0], out);
            term_tokens(f.terms()[1], out);
            break;
        case FormulaKind::Relation:
            out.push_back(f.name());
            for (const auto& t : f.terms()) term_tokens(t, out);
            break;
        case FormulaKind::Not:
            out.push_back("!");
            formula_tokens(f.child(), out);
            break;
        case FormulaKind::And:
            out.push_back("&");
            formula_tokens(f.child(0), out);
            formula_tokens(f.child(1), out);
            break;
        case FormulaKind::Or:
            out.push_back("|");
            formula_tokens(f.child(0), out);
            formula_tokens(f.child(1), out);
            break;
        case FormulaKind::Exists:
            out.push_back("exists");
            out.push_back(f.name());
            formula_tokens(f.child(), out);
            break;
        case FormulaKind::Forall:
            out.push_back("forall");
            out.push_back(f.name());
            formula_tokens(f.child(), out);
            break;
    }
}

}  // namespace

std::vector<std::string> canonical_tokens(const Formula& f) {
    std::vector<std::string> out;
    formula_tokens(f, out);
    return out;
}

std::string canonical_string(const Formula& f) {
    std::string s;
    for (const auto& tok : canonical_tokens(f)) {
        if (!s.empty()) s += ' ';
        s += tok;
    }
    return s;
}

bool Formula::operator==(const Formula& other) const {
    if (node_ == other.node_) return true;
    return canonical_tokens(*this) == canonical_tokens(other);
}

bool Formula::operator<(const Formula& other) const {
    return canonical_tokens(*this) < canonical_tokens(other);
}

std::size_t depth(const Formula& f) {
    std::size_t d = f.is_quantifier() ? 1 : 0;
    for (std::size_t i = 0; i < f.child_count(); ++i) d += depth(f.child(i));
    return d;
}

std::size_t length(const Formula& f) { return canonical_tokens(f).size(); }

namespace {

void free_vars_rec(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
    if (f.is_atomic()) {
        std::set<std::string> vs;
        for (const auto& t : f.terms()) t.collect_vars(vs);
        for (const auto& v : vs)
            if (!bound.count(v)) out.insert(v);
        return;
    }
    if (f.is_quantifier()) {
        bool fresh = bound.insert(f.name()).second;
        free_vars_rec(f.child(), bound, out);
        if (fresh) bound.erase(f.name());
        return;
    }
    for (std::size_t i = 0; i < f.child_count(); ++i) free_vars_rec(f.child(i), bound, out);
}

Term substitute_term(const Term& t, const std::string& var, const Term& to) {
    switch (t.kind()) {
        case TermKind::Variable:
            return t.name() == var ? to : t;
        case TermKind::Constant:
            return t;
        case TermKind::Apply: {
            std::vector<Term> args;
            args.reserve(t.args().size());
            for (const auto& a : t.args()) args.push_back(substitute_term(a, var, to));
            return Term::apply(t.name(), std::move(args));
        }
    }
    return t;
}

}  // namespace

std::set<std::string> free_vars(const Formula& f) {
    std::set<std::string> bound, out;
    free_vars_rec(f, bound, out);
    return out;
}

Formula substitute_free(const Formula& f, const std::string& var, const Term& to) {
    switch (f.kind()) {
        case FormulaKind::Equal:
            return Formula::equal(substitute_term(f.terms()[0], var, to),
                                  substitute_term(f.terms()[1], var, to));
        case FormulaKind::Relation: {
            std::vector<Term> args;
            for (const auto& t : f.terms()) args.push_back(substitute_term(t, var, to));
            return Formula::relation(f.name(), std::move(args));
        }
        case FormulaKind::Not:
            return Formula::negation(substitute_free(f.child(), var, to));
        case FormulaKind::And:
            return Formula::conjunction(substitute_free(f.child(0), var, to),
                                        substitute_free(f.child(1), var, to));
        case FormulaKind::Or:
            return Formula::disjunction(substitute_free(f.child(0), var, to),
                                        substitute_free(f.child(1), var, to));
        case FormulaKind::Exists:
            if (f.name() == var) return f;  // shadowed
            return Formula::exists(f.name(), substitute_free(f.child(), var, to));
        case FormulaKind::Forall:
            if (f.name() == var) return f;
            return Formula::forall(f.name(), substitute_free(f.child(), var, to));
    }
    return f;
}

Formula substitute_free(const Formula& f, const std::string& var, const std::string& to_var) {
    return substitute_free(f, var, Term::variable(to_var));
}

std::vector<Formula> subformulas(const Formula& f) {
    std::vector<Formula> out;
    std::set<std::string> seen;
    auto visit = [&](const Formula& g, auto&& self) -> void {
        if (seen.insert(canonical_string(g)).second) out.push_back(g);
        for (std::size_t i = 0; i < g.child_count(); ++i) self(g.child(i), self);
    };
    visit(f, visit);
    return out;
}

namespace {

void collect_instantiable(const Term& t, const std::set<std::string>& bound,
                          std::vector<Term>& out) {
    std::set<std::string> vs;
    t.collect_vars(vs);
    bool clean = true;
    for (const auto& v : vs)
        if (bound.count(v)) { clean = false; break; }
    if (clean) {
        out.push_back(t);
        return;
    }
    // Dig for maximal bound-free subterms.
    for (const auto& a : t.args()) collect_instantiable(a, bound, out);
}

void instantiable_rec(const Formula& f, std::set<std::string>& bound, std::vector<Term>& out) {
    if (f.is_atomic()) {
        for (const auto& t : f.terms()) collect_instantiable(t, bound, out);
        return;
    }
    if (f.is_quantifier()) {
        bool fresh = bound.insert(f.name()).second;
        instantiable_rec(f.child(), bound, out);
        if (fresh) bound.erase(f.name());
        return;
    }
    for (std::size_t i = 0; i < f.child_count(); ++i) instantiable_rec(f.child(i), bound, out);
}

}  // namespace

std::vector<Term> instantiable_terms(const Formula& f) {
    std::vector<Term> raw;
    std::set<std::string> bound;
    instantiable_rec(f, bound, raw);
    // Dedup structurally; variables dominate the counts otherwise.
    std::vector<Term> out;
    for (const auto& t : raw) {
        bool dup = false;
        for (const auto& u : out)
            if (u == t) { dup = true; break; }
        if (!dup) out.push_back(t);
    }
    return out;
}

std::size_t max_term_depth(const Formula& f) {
    std::size_t d = 0;
    for (const auto& t : f.terms()) d = std::max(d, t.nesting_depth());
    for (std::size_t i = 0; i < f.child_count(); ++i) d = std::max(d, max_term_depth(f.child(i)));
    return d;
}

// ── Formula enumeration ─────────────────────────────────────────────────────
// Exact-length recursive generation with the bound-variable pool named by
// nesting depth, then a lexicographic sort per length batch.

namespace {

struct Enumerator {
    const Signature& sig;
    // memoized terms by (length, available-bound-var count)
    std::map<std::pair<std::size_t, std::size_t>, std::vector<Term>> term_memo;

    std::vector<std::string> vars_at(std::size_t d) const {
        std::vector<std::string> vs = {"x"};
        for (std::size_t i = 0; i < d; ++i) vs.push_back("y" + std::to_string(i));
        return vs;
    }

    const std::vector<Term>& terms_of(std::size_t len, std::size_t d) {
        auto key = std::make_pair(len, d);
        auto it = term_memo.find(key);
        if (it != term_memo.end()) return it->second;
        std::vector<Term> out;
        if (len == 1) {
            for (const auto& v : vars_at(d)) out.push_back(Term::variable(v));
            for (const auto& c : sig.constants) out.push_back(Term::constant(c));
        } else if (len >= 2) {
            for (const auto& fn : sig.functions) {
                if (fn.arity + 1 > len) continue;
                std::vector<std::vector<Term>> parts;
                build_args(fn.arity, len - 1, d, {}, parts);
                for (auto& args : parts) out.push_back(Term::apply(fn.name, std::move(args)));
            }
        }
        return term_memo.emplace(key, std::move(out)).first->second;
    }

    void build_args(std::size_t arity, std::size_t budget, std::size_t d,
                    std::vector<Term> acc, std::vector<std::vector<Term>>& out) {
        if (arity == 0) {
            if (budget == 0) out.push_back(std::move(acc));
            return;
        }
        // each remaining argument needs at least one token
        for (std::size_t first = 1; first + (arity - 1) <= budget; ++first) {
            for (const auto& t : terms_of(first, d)) {
                auto next = acc;
                next.push_back(t);
                build_args(arity - 1, budget - first, d, std::move(next), out);
            }
        }
    }

    std::vector<Formula> formulas_of(std::size_t len, std::size_t d) {
        std::vector<Formula> out;
        if (len < 2) return out;
        // equality atoms: "=" t1 t2
        if (len >= 3) {
            for (std::size_t l1 = 1; l1 + 1 < len; ++l1) {
                for (const auto& t1 : terms_of(l1, d))
                    for (const auto& t2 : terms_of(len - 1 - l1, d))
                        out.push_back(Formula::equal(t1, t2));
            }
        }
        // relation atoms
        for (const auto& rel : sig.relations) {
            if (rel.arity + 1 > len) continue;
            std::vector<std::vector<Term>> parts;
            build_args(rel.arity, len - 1, d, {}, parts);
            for (auto& args : parts) out.push_back(Formula::relation(rel.name, std::move(args)));
        }
        // negation
        for (const auto& g : formulas_of(len - 1, d)) out.push_back(Formula::negation(g));
        // binary connectives
        for (std::size_t l1 = 2; l1 + 2 < len; ++l1) {
            auto lefts = formulas_of(l1, d);
            auto rights = formulas_of(len - 1 - l1, d);
            for (const auto& a : lefts)
                for (const auto& b : rights) {
                    out.push_back(Formula::conjunction(a, b));
                    out.push_back(Formula::disjunction(a, b));
                }
        }
        // quantifiers bind y<d> and descend with d+1
        if (len >= 4) {
            std::string v = "y" + std::to_string(d);
            for (const auto& g : formulas_of(len - 2, d + 1)) {
                out.push_back(Formula::exists(v, g));
                out.push_back(Formula::forall(v, g));
            }
        }
        return out;
    }
};

}  // namespace

std::vector<Formula> enumerate_formulas(const Signature& sig, std::size_t k) {
    sig.validate();
    std::vector<Formula> result;
    if (k == 0) return result;
    Enumerator en{sig, {}};
    constexpr std::size_t kMaxLength = 12;
    for (std::size_t len = 2; len <= kMaxLength; ++len) {
        std::vector<Formula> batch;
        for (auto& f : en.formulas_of(len, 0)) {
            auto fv = free_vars(f);
            if (fv.size() == 1 && *fv.begin() == "x") batch.push_back(std::move(f));
        }
        std::sort(batch.begin(), batch.end(),
                  [](const Formula& a, const Formula& b) { return a < b; });
        for (auto& f : batch) {
            result.push_back(std::move(f));
            if (result.size() == k) return result;
        }
    }
    throw GuardExceeded("enumerate_formulas: k=" + std::to_string(k) +
                        " requires formulas longer than the enumeration bound");
}

}  // namespace flab
