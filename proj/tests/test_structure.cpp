#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "flab/parser.hpp"
#include "flab/random_gen.hpp"
#include "flab/structure.hpp"

using namespace flab;

namespace {

Signature sig_rel() {
    Signature sig;
    sig.relations = {{"R", 2}};
    sig.constants = {"c"};
    return sig;
}

PartialStructure tiny_total() {
    Signature sig;
    sig.functions = {{"f", 1}};
    sig.constants = {"c"};
    return PartialStructure::make_explicit(sig, {0, 1}, {{"c", 0}}, {},
                                           {{"f", {{{0}, 1}, {{1}, 0}}}});
}

}  // namespace

TEST_CASE("make_segment: M_6 arithmetic facts") {
    auto m6 = make_segment(6);
    auto sig = arithmetic_signature();
    Assignment empty;
    CHECK(eval_term(m6, parse_term("1 + 1", sig), empty) == Element(2));
    CHECK(!eval_term(m6, parse_term("3 * 4", sig), empty).has_value());
    CHECK(satisfies_atomic(m6, parse_formula("1 + 1 = 2", sig), empty) == Truth::True);
    CHECK(satisfies_atomic(m6, parse_formula("3 * 4 = 0", sig), empty) == Truth::Undefined);
}

TEST_CASE("make_segment: M_1 has undefined successor; n=0 rejected") {
    auto m1 = make_segment(1);
    CHECK(!m1.fun_value("S", {0}).has_value());
    CHECK_THROWS_AS(make_segment(0), PreconditionError);
}

TEST_CASE("eval_term: undefined propagates strictly") {
    auto sig = arithmetic_signature();
    Assignment empty;
    auto m6 = make_segment(6);
    CHECK(eval_term(m6, parse_term("S(S(0))", sig), empty) == Element(2));
    CHECK(!eval_term(m6, parse_term("(3 * 4) + 0", sig), empty).has_value());
    auto m10 = make_segment(10);
    Assignment a{{"x", 9}};
    CHECK(!eval_term(m10, parse_term("S(x)", sig), a).has_value());
    CHECK_THROWS_AS(eval_term(m10, parse_term("S(y)", sig), a), UsageError);
}

TEST_CASE("satisfies_atomic: relation lookup") {
    auto m5 = make_segment(5);
    auto sig = arithmetic_signature();
    CHECK(satisfies_atomic(m5, parse_formula("2 < 3", sig), {}) == Truth::True);
    CHECK(satisfies_atomic(m5, parse_formula("3 < 2", sig), {}) == Truth::False);
}

TEST_CASE("is_substructure: segments follow Def 2.3, not the m^2 shortcut") {
    // n > m^2 is sufficient (paper) ...
    for (Element m = 1; m <= 8; ++m)
        for (Element n = m + 1; n <= m * m + 3; ++n) {
            if (n > m * m) CHECK(is_substructure(make_segment(m), make_segment(n)));
        }
    // ... but not necessary: every S/+/× value on {0,1} stays below 4
    CHECK(is_substructure(make_segment(2), make_segment(4)));
    CHECK(is_substructure(make_segment(2), make_segment(5)));
    // 2+2 = 4 escapes M_4
    CHECK(!is_substructure(make_segment(3), make_segment(4)));
    // non-total structures are not substructures of themselves
    CHECK(!is_substructure(make_segment(5), make_segment(5)));
}

TEST_CASE("is_substructure: explicit structures agree with the segment fast path") {
    for (Element a = 1; a <= 6; ++a)
        for (Element b = a; b <= 9; ++b) {
            bool fast = is_substructure(make_segment(a), make_segment(b));
            bool slow = is_substructure(make_segment(a).materialize(),
                                        make_segment(b).materialize());
            CHECK(fast == slow);
        }
}

TEST_CASE("is_substructure: transitive over random small structures") {
    Signature sig;
    sig.relations = {{"R", 2}};
    sig.functions = {{"f", 1}};
    sig.constants = {"c"};
    Rng rng(5);
    ChainGenOptions opt;
    std::size_t hit = 0;
    for (int i = 0; i < 150; ++i) {
        // chained generation guarantees a ⊆ b ⊆ c actually occurs
        LnModel v = random_chain(rng, sig, 3, opt);
        const auto &a = v.level(0), &b = v.level(1), &c = v.level(2);
        REQUIRE(is_substructure(a, b));
        REQUIRE(is_substructure(b, c));
        ++hit;
        CHECK(is_substructure(a, c));
    }
    CHECK(hit > 0);
}

TEST_CASE("is_total: characterizations") {
    CHECK(!is_total(make_segment(1)));
    for (Element n = 2; n <= 6; ++n) CHECK(!is_total(make_segment(n)));
    auto sig = sig_rel();
    auto rel_only = PartialStructure::make_explicit(sig, {0, 1}, {{"c", 0}},
                                                    {{"R", {{0, 1}}}}, {});
    CHECK(is_total(rel_only));
    CHECK(is_total(tiny_total()));
}

TEST_CASE("is_substructure(s,s) iff is_total(s)") {
    Rng rng(17);
    Signature sig;
    sig.functions = {{"f", 1}};
    sig.constants = {"c"};
    ChainGenOptions opt;
    for (int i = 0; i < 200; ++i) {
        auto s = random_structure(rng, sig, opt);
        CHECK(is_substructure(s, s) == is_total(s));
    }
    CHECK(is_substructure(tiny_total(), tiny_total()));
}

TEST_CASE("is_isomorphic: identity, relabeling, and size mismatch") {
    auto m2 = make_segment(2).materialize();
    auto self = is_isomorphic(m2, m2);
    REQUIRE(self.has_value());
    CHECK(is_isomorphism_witness(m2, m2, *self));

    // transported copy of M_2 on {5,7}
    std::map<Element, Element> relabel{{0, 5}, {1, 7}};
    auto copy = m2.rename(relabel);
    auto g = is_isomorphic(m2, copy);
    REQUIRE(g.has_value());
    CHECK(is_isomorphism_witness(m2, copy, *g));
    CHECK(*g == relabel);  // the only candidate maps 0->5 (constant), 1->7

    CHECK(!is_isomorphic(make_segment(2), make_segment(3)).has_value());
}

TEST_CASE("segment/explicit agreement on terms up to depth 3") {
    auto sig = arithmetic_signature();
    Rng rng(23);
    FormulaGenOptions fopt;
    fopt.max_term_depth = 3;
    for (Element n = 1; n <= 30; n += 7) {
        auto seg = make_segment(n);
        auto exp = seg.materialize();
        for (int i = 0; i < 60; ++i) {
            Formula f = random_formula(rng, sig, fopt);
            auto fv = free_vars(f);
            Assignment a = random_assignment(rng, fv, seg);
            for (const auto& t : instantiable_terms(f)) {
                auto v1 = eval_term(seg, t, a);
                auto v2 = eval_term(exp, t, a);
                CHECK(v1 == v2);
            }
        }
    }
}

TEST_CASE("satisfies_atomic is invariant under isomorphism witnesses") {
    Rng rng(29);
    auto sig = sig_rel();
    ChainGenOptions opt;
    for (int i = 0; i < 100; ++i) {
        auto s = random_structure(rng, sig, opt);
        // relabel through +10
        std::map<Element, Element> g;
        for (std::size_t k = 0; k < s.domain_size(); ++k)
            g[s.element_at(k)] = s.element_at(k) + 10;
        auto t = s.rename(g);
        REQUIRE(is_isomorphism_witness(s, t, g));
        Formula atom = Formula::relation(
            "R", {Term::variable("x"), Term::variable("y")});
        for (std::size_t xi = 0; xi < s.domain_size(); ++xi)
            for (std::size_t yi = 0; yi < s.domain_size(); ++yi) {
                Assignment a{{"x", s.element_at(xi)}, {"y", s.element_at(yi)}};
                Assignment b{{"x", g[s.element_at(xi)]}, {"y", g[s.element_at(yi)]}};
                CHECK(satisfies_atomic(s, atom, a) == satisfies_atomic(t, atom, b));
            }
    }
}

TEST_CASE("classical_satisfies: restrictive quantifiers on partial structures") {
    auto sig = arithmetic_signature();
    auto m3 = make_segment(3);
    // S(x) is undefined at x=2, so the universal is undefined
    CHECK(classical_satisfies(m3, parse_formula("forall x. 0 < S(x)", sig), {}) ==
          Truth::Undefined);
    // total structures get classical semantics
    Signature fs;
    fs.functions = {{"f", 1}};
    fs.constants = {"c"};
    auto tot = tiny_total();
    CHECK(classical_satisfies(tot, parse_formula("forall x. !(f(x) = x)", fs), {}) ==
          Truth::True);
    CHECK(classical_satisfies(tot, parse_formula("exists x. f(x) = c", fs), {}) == Truth::True);
}

TEST_CASE("enlarged segment constants interpret as their index") {
    Signature sig = arithmetic_signature();
    sig.constants.push_back("c3");
    auto m5 = PartialStructure::segment(5, sig);
    CHECK(m5.const_value("c3") == 3);
    CHECK_THROWS_AS(PartialStructure::segment(3, sig), SignatureError);  // 3 outside {0,1,2}
}
