#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "flab/collapse.hpp"
#include "flab/parser.hpp"
#include "flab/random_gen.hpp"

using namespace flab;

namespace {

Signature small_sig() {
    Signature sig;
    sig.relations = {{"P", 1}, {"R", 2}};
    sig.functions = {{"f", 1}};
    sig.constants = {"c"};
    return sig;
}

// random (chain, closed formula) with defined fulfillment
std::pair<LnModel, Formula> random_instance(Rng& rng, const Signature& sig) {
    ChainGenOptions copt;
    FormulaGenOptions fopt;
    fopt.closed = true;
    fopt.max_tokens = 12;
    for (int tries = 0; tries < 20000; ++tries) {
        std::size_t n = 3 + rng.below(3);
        LnModel v = random_chain(rng, sig, n, copt);
        Formula f = random_formula(rng, sig, fopt);
        if (depth(f) + 2 > n) continue;
        if (!fulfills(v, f, {}).defined()) continue;
        return {v, f};
    }
    throw GuardExceeded("no instance found");
}

}  // namespace

TEST_CASE("col_bound: base case and the hand-checked value") {
    CHECK(col_bound({0, 2, 5, 3}) == 3);
    CHECK(col_bound({0, 2, 5, 0}) == 1);  // max(l, 1)
    // Col(1,1,2,1): B* = 1 + 1^1*1 = 2; C(2,2) = 1; 2 + 1*2^2 + 0 = 6
    CHECK(col_bound({1, 1, 2, 1}) == 6);
}

TEST_CASE("col_bound: nondecreasing in the level") {
    for (std::size_t j = 0; j <= 4; ++j)
        for (std::size_t k = 2; k <= 4; ++k)
            for (std::size_t l = 1; l <= 4; ++l) {
                BigInt prev = 0;
                for (std::size_t i = 0; i <= 5; ++i) {
                    BigInt cur = col_bound({i, j, k, l});
                    CHECK(cur >= prev);
                    prev = cur;
                }
            }
}

TEST_CASE("col_bound: values explode past uint64 but stay comparable") {
    BigInt cap = BigInt("340282366920938463463374607431768211456");  // 2^128
    BigInt big = col_bound_clamped({3, 2, 10, 5}, cap);
    CHECK(big > BigInt("18446744073709551615"));
    // clamped agrees with the exact value while under the cap
    CHECK(col_bound_clamped({1, 1, 2, 1}, cap) == col_bound({1, 1, 2, 1}));
}

TEST_CASE("f_collapse: B_0 is the constants (or the least element)") {
    auto sig = small_sig();
    Rng rng(51);
    for (int i = 0; i < 20; ++i) {
        auto [v, f] = random_instance(rng, sig);
        auto r = f_collapse(v, f);
        REQUIRE(r.universes[0].size() == 1);  // one constant
        CHECK(r.universes[0][0] == v.level(0).const_value("c"));
    }
    // no constants: least element of A_0
    Signature rel;
    rel.relations = {{"P", 1}};
    auto a = PartialStructure::make_explicit(rel, {3, 5}, {}, {{"P", {{3}}}}, {});
    LnModel v = LnModel::create({a, a, a});
    Formula f = parse_formula("exists x. P(x)", rel);
    auto r = f_collapse(v, f);
    CHECK(r.universes[0] == std::vector<Element>{3});
}

TEST_CASE("f_collapse: constant chain of a one-element total structure is identity-like") {
    Signature sig;
    sig.functions = {{"f", 1}};
    sig.constants = {"c"};
    auto one = PartialStructure::make_explicit(sig, {7}, {{"c", 7}}, {}, {{"f", {{{7}, 7}}}});
    LnModel v = LnModel::create({one, one, one});
    Formula f = parse_formula("exists x. f(x) = c", sig);
    auto r = f_collapse(v, f);
    for (const auto& u : r.universes) CHECK(u == std::vector<Element>{7});
    CHECK(r.collapsed == v);
    // renamed form maps 7 -> 0
    CHECK(r.renamed.level(0).const_value("c") == 0);
}

TEST_CASE("f_collapse: deterministic in (v, f)") {
    auto sig = small_sig();
    Rng rng(57);
    auto [v, f] = random_instance(rng, sig);
    auto r1 = f_collapse(v, f);
    auto r2 = f_collapse(v, f);
    CHECK(r1.universes == r2.universes);
    CHECK(r1.collapsed == r2.collapsed);
    CHECK(r1.renaming == r2.renaming);
}

TEST_CASE("f_collapse: renamed form is isomorphic to the collapsed chain") {
    auto sig = small_sig();
    Rng rng(61);
    for (int i = 0; i < 20; ++i) {
        auto [v, f] = random_instance(rng, sig);
        auto r = f_collapse(v, f);
        std::map<Element, Element> g(r.renaming.begin(), r.renaming.end());
        CHECK(is_ln_isomorphism_witness(r.collapsed, r.renamed, g));
    }
}

TEST_CASE("verify_collapse: randomized suite passes all five conditions") {
    auto sig = small_sig();
    Rng rng(71);
    for (int i = 0; i < 60; ++i) {
        auto [v, f] = random_instance(rng, sig);
        auto r = f_collapse(v, f);
        auto rep = verify_collapse(v, r, f);
        if (!rep.ok()) {
            CAPTURE(render_formula(f));
            CAPTURE(chain_key(v));
            for (const auto& viol : rep.violations) MESSAGE(viol);
        }
        CHECK(rep.ok());
        CHECK(rep.condition4_pairs > 0);
    }
}

TEST_CASE("verify_collapse: sizes stay below the Col bounds") {
    auto sig = small_sig();
    Rng rng(73);
    const BigInt sat = BigInt(1) << 96;
    for (int i = 0; i < 30; ++i) {
        auto [v, f] = random_instance(rng, sig);
        auto r = f_collapse(v, f);
        ColParams base{0, sig.max_function_arity(), length(f), sig.size()};
        for (std::size_t lvl = 0; lvl < r.universes.size(); ++lvl) {
            ColParams p = base;
            p.level = lvl;
            CHECK(BigInt(r.universes[lvl].size()) <= col_bound_clamped(p, sat));
        }
    }
}

TEST_CASE("verify_collapse: tampering flips condition 4 or 5") {
    // crafted instance where the existential witness matters: P holds only at
    // element 1, which enters at level 1
    Signature sig;
    sig.relations = {{"P", 1}};
    sig.constants = {"c"};
    auto a0 = PartialStructure::make_explicit(sig, {0}, {{"c", 0}}, {{"P", {}}}, {});
    auto a1 = PartialStructure::make_explicit(sig, {0, 1}, {{"c", 0}}, {{"P", {{1}}}}, {});
    auto a2 = PartialStructure::make_explicit(sig, {0, 1, 2}, {{"c", 0}}, {{"P", {{1}}}}, {});
    LnModel v = LnModel::create({a0, a1, a2});
    Formula f = parse_formula("exists x. P(x)", sig);
    REQUIRE(fulfills(v, f, {}).truth == Truth::True);

    auto r = f_collapse(v, f);
    REQUIRE(verify_collapse(v, r, f).ok());
    // the witness 1 must have been kept at level 1
    REQUIRE(std::count(r.universes[1].begin(), r.universes[1].end(), 1) == 1);

    auto tampered = r.universes;
    for (auto& u : tampered) u.erase(std::remove(u.begin(), u.end(), Element(1)), u.end());
    auto bad = rebuild_from_universes(v, tampered);
    auto rep = verify_collapse(v, bad, f);
    CHECK(!rep.ok());
    CHECK((!rep.c4 || !rep.c5));
}

TEST_CASE("f_collapse: precondition violations") {
    auto sig = small_sig();
    Rng rng(79);
    ChainGenOptions copt;
    LnModel v = random_chain(rng, sig, 3, copt);
    CHECK_THROWS_AS(f_collapse(v, parse_formula("P(x)", sig)), PreconditionError);  // open
    Formula deep = parse_formula("exists x. exists y. R(x, y)", sig);               // dp 2 > n-2
    CHECK_THROWS_AS(f_collapse(v, deep), PreconditionError);
}
