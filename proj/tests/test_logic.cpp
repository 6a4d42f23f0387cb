#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "flab/logic.hpp"
#include "flab/parser.hpp"
#include "flab/random_gen.hpp"

using namespace flab;

namespace {

Signature sig_pc() {
    Signature sig;
    sig.relations = {{"P", 1}};
    sig.constants = {"c"};
    return sig;
}

// test-local token counter, independent of length()
std::size_t count_tokens_oracle(const Formula& f) {
    std::function<std::size_t(const Term&)> term_count = [&](const Term& t) {
        std::size_t n = 1;
        for (const auto& a : t.args()) n += term_count(a);
        return n;
    };
    std::size_t n = 0;
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
        switch (g.kind()) {
            case FormulaKind::Equal:
                n += 1 + term_count(g.terms()[0]) + term_count(g.terms()[1]);
                return;
            case FormulaKind::Relation: {
                n += 1;
                for (const auto& t : g.terms()) n += term_count(t);
                return;
            }
            case FormulaKind::Not:
                n += 1;
                walk(g.child());
                return;
            case FormulaKind::And:
            case FormulaKind::Or:
                n += 1;
                walk(g.child(0));
                walk(g.child(1));
                return;
            case FormulaKind::Exists:
            case FormulaKind::Forall:
                n += 2;
                walk(g.child());
                return;
        }
    };
    walk(f);
    return n;
}

// test-local random AST generator (independent of flab::random_formula)
Formula random_ast(Rng& rng, const Signature& sig, int fuel) {
    auto rand_term = [&](auto&& self, int tf) -> Term {
        if (tf > 0 && !sig.functions.empty() && rng.coin(0.4)) {
            const auto& f = sig.functions[rng.below(sig.functions.size())];
            std::vector<Term> args;
            for (std::size_t i = 0; i < f.arity; ++i) args.push_back(self(self, tf - 1));
            return Term::apply(f.name, std::move(args));
        }
        if (!sig.constants.empty() && rng.coin(0.4))
            return Term::constant(sig.constants[rng.below(sig.constants.size())]);
        std::vector<std::string> vars = {"x", "y", "z"};
        return Term::variable(vars[rng.below(vars.size())]);
    };
    if (fuel <= 0 || rng.coin(0.3)) {
        if (!sig.relations.empty() && rng.coin()) {
            const auto& r = sig.relations[rng.below(sig.relations.size())];
            std::vector<Term> args;
            for (std::size_t i = 0; i < r.arity; ++i) args.push_back(rand_term(rand_term, 2));
            return Formula::relation(r.name, std::move(args));
        }
        return Formula::equal(rand_term(rand_term, 2), rand_term(rand_term, 2));
    }
    switch (rng.below(5)) {
        case 0: return Formula::negation(random_ast(rng, sig, fuel - 1));
        case 1:
            return Formula::conjunction(random_ast(rng, sig, fuel - 1),
                                        random_ast(rng, sig, fuel - 1));
        case 2:
            return Formula::disjunction(random_ast(rng, sig, fuel - 1),
                                        random_ast(rng, sig, fuel - 1));
        case 3: return Formula::exists("v" + std::to_string(fuel), random_ast(rng, sig, fuel - 1));
        default:
            return Formula::forall("v" + std::to_string(fuel), random_ast(rng, sig, fuel - 1));
    }
}

}  // namespace

TEST_CASE("parse: Q axiom 1 shape") {
    auto sig = arithmetic_signature();
    Formula f = parse_formula("forall x. !(0 = S(x))", sig);
    REQUIRE(f.kind() == FormulaKind::Forall);
    CHECK(f.name() == "x");
    const Formula& body = f.child();
    REQUIRE(body.kind() == FormulaKind::Not);
    const Formula& eq = body.child();
    REQUIRE(eq.kind() == FormulaKind::Equal);
    CHECK(eq.terms()[0].name() == "0");
    CHECK(eq.terms()[1].name() == "S");
}

TEST_CASE("parse: atomic equality, no quantifiers") {
    auto sig = arithmetic_signature();
    Formula f = parse_formula("0 = 0", sig);
    CHECK(f.kind() == FormulaKind::Equal);
    CHECK(depth(f) == 0);
}

TEST_CASE("parse: implication desugars to !A | B") {
    auto sig = sig_pc();
    Formula f = parse_formula("P(c) -> P(c)", sig);
    REQUIRE(f.kind() == FormulaKind::Or);
    CHECK(f.child(0).kind() == FormulaKind::Not);
    CHECK(f.child(0).child().kind() == FormulaKind::Relation);
    CHECK(f.child(1).kind() == FormulaKind::Relation);
}

TEST_CASE("parse: numerals are S-towers") {
    auto sig = arithmetic_signature();
    Formula f = parse_formula("3 = S(S(S(0)))", sig);
    CHECK(f.terms()[0] == f.terms()[1]);
}

TEST_CASE("parse: bounded quantifiers expand") {
    auto sig = arithmetic_signature();
    Formula ex = parse_formula("exists y < x. y = y", sig);
    CHECK(ex == parse_formula("exists y. (y < x & y = y)", sig));
    Formula all = parse_formula("forall y < x. y = y", sig);
    CHECK(all == parse_formula("forall y. (!(y < x) | y = y)", sig));
}

TEST_CASE("parse errors carry position and kind") {
    auto sig = sig_pc();
    CHECK_THROWS_AS(parse_formula("P(c", sig), ParseError);
    CHECK_THROWS_AS(parse_formula("Q(c) = c", sig), Error);
    CHECK_THROWS_AS(parse_formula("R(c,c)", sig), SignatureError);   // undeclared
    CHECK_THROWS_AS(parse_formula("P(c,c)", sig), SignatureError);   // arity
}

TEST_CASE("render: axiom 4 round-trips and prints the expected shape") {
    auto sig = arithmetic_signature();
    Formula f = parse_formula("forall x. x + 0 = x", sig);
    CHECK(render_formula(f) == "forall x. x+0 = x");
    CHECK(parse_formula(render_formula(f), sig) == f);
}

TEST_CASE("render: atomic round-trip") {
    auto sig = arithmetic_signature();
    Formula f = parse_formula("0 = 0", sig);
    CHECK(parse_formula(render_formula(f), sig) == f);
}

TEST_CASE("render: 500 random formulas round-trip") {
    auto sig = arithmetic_signature();
    Rng rng(42);
    for (int i = 0; i < 500; ++i) {
        Formula f = random_ast(rng, sig, 4);
        Formula g = parse_formula(render_formula(f), sig);
        CHECK(g == f);
    }
}

TEST_CASE("depth: axiom profile cases") {
    auto sig = arithmetic_signature();
    CHECK(depth(parse_formula("forall x. !(0 = S(x))", sig)) == 1);
    CHECK(depth(parse_formula("forall x. forall y. x * S(y) = (x * y) + x", sig)) == 2);
    CHECK(depth(parse_formula("0 < S(0)", sig)) == 0);
}

TEST_CASE("depth: recurrences over random formulas") {
    auto sig = arithmetic_signature();
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        Formula a = random_ast(rng, sig, 3), b = random_ast(rng, sig, 3);
        CHECK(depth(Formula::exists("w", a)) == depth(a) + 1);
        CHECK(depth(Formula::forall("w", a)) == depth(a) + 1);
        CHECK(depth(Formula::conjunction(a, b)) == depth(a) + depth(b));
        CHECK(depth(Formula::disjunction(a, b)) == depth(a) + depth(b));
        CHECK(depth(Formula::negation(a)) == depth(a));
    }
}

TEST_CASE("length: canonical token counts") {
    auto sig = arithmetic_signature();
    Formula f = parse_formula("0 = 0", sig);
    CHECK(length(f) == 3);
    Formula ax1 = parse_formula("forall x. !(0 = S(x))", sig);
    CHECK(length(ax1) == count_tokens_oracle(ax1));
    CHECK(length(ax1) == 7);
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        Formula g = random_ast(rng, sig, 4);
        CHECK(length(g) == count_tokens_oracle(g));
        CHECK(length(Formula::negation(g)) == length(g) + 1);
        CHECK(depth(g) <= length(g));
    }
}

TEST_CASE("subformulas: atomic and conjunction cases") {
    auto sig = arithmetic_signature();
    Formula atom = parse_formula("0 = 0", sig);
    CHECK(subformulas(atom).size() == 1);
    Formula conj = parse_formula("0 = 0 & 0 < S(0)", sig);
    CHECK(subformulas(conj).size() == 3);
    // duplicate children collapse structurally
    Formula dup = parse_formula("0 = 0 & 0 = 0", sig);
    CHECK(subformulas(dup).size() == 2);
}

TEST_CASE("subformulas: axiom 7 by exhaustive subtree walk") {
    auto sig = arithmetic_signature();
    Formula ax7 = parse_formula("forall x. forall y. x * S(y) = (x * y) + x", sig);
    // independent oracle: collect canonical strings of all formula subtrees
    std::set<std::string> seen;
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
        seen.insert(canonical_string(g));
        for (std::size_t i = 0; i < g.child_count(); ++i) walk(g.child(i));
    };
    walk(ax7);
    CHECK(subformulas(ax7).size() == seen.size());
    CHECK(subformulas(ax7).size() == 3);
}

TEST_CASE("subformulas: count bounded by C(|f|,2)") {
    auto sig = arithmetic_signature();
    Rng rng(13);
    for (int i = 0; i < 300; ++i) {
        Formula f = random_ast(rng, sig, 4);
        std::size_t len = length(f);
        CHECK(subformulas(f).size() <= len * (len - 1) / 2 + (len < 2 ? 1 : 0));
    }
}

TEST_CASE("enumerate_formulas: k=0 and the first arithmetic formula") {
    auto sig = arithmetic_signature();
    CHECK(enumerate_formulas(sig, 0).empty());

    // independent oracle for the first element: all 3-token prefix strings
    // over the base alphabet, filtered to exactly-one-free-x atoms, sorted
    std::vector<std::string> heads = {"<", "="};
    std::vector<std::string> leaves = {"0", "x"};
    std::vector<std::vector<std::string>> candidates;
    for (const auto& h : heads)
        for (const auto& a : leaves)
            for (const auto& b : leaves)
                if (a == "x" || b == "x") candidates.push_back({h, a, b});
    std::sort(candidates.begin(), candidates.end());
    auto first = enumerate_formulas(sig, 1);
    REQUIRE(first.size() == 1);
    CHECK(canonical_tokens(first[0]) == candidates[0]);
    CHECK(first[0] == parse_formula("0 < x", sig));
}

TEST_CASE("enumerate_formulas: prefix-stable and injective") {
    auto sig = arithmetic_signature();
    auto a = enumerate_formulas(sig, 40);
    auto b = enumerate_formulas(sig, 41);
    REQUIRE(a.size() == 40);
    REQUIRE(b.size() == 41);
    for (std::size_t i = 0; i < 40; ++i) CHECK(a[i] == b[i]);
    std::set<std::string> keys;
    for (const auto& f : a) {
        CHECK(free_vars(f) == std::set<std::string>{"x"});
        CHECK(keys.insert(canonical_string(f)).second);
    }
    // ordered by (length, lexicographic)
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        auto ta = canonical_tokens(a[i]), tb = canonical_tokens(a[i + 1]);
        CHECK((ta.size() < tb.size() || (ta.size() == tb.size() && ta < tb)));
    }
}

TEST_CASE("substitute_free respects shadowing") {
    auto sig = arithmetic_signature();
    Formula f = parse_formula("x = 0 & exists x. x = S(0)", sig);
    Formula g = substitute_free(f, "x", std::string("w"));
    CHECK(g == parse_formula("w = 0 & exists x. x = S(0)", sig));
}
