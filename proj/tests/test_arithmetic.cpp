#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "flab/arithmetic.hpp"
#include "flab/parser.hpp"
#include "flab/random_gen.hpp"

using namespace flab;

TEST_CASE("validate_sq_inc") {
    CHECK(validate_sq_inc({2, 5, 26, 677}));
    CHECK(!validate_sq_inc({2, 4}));  // boundary: 4 = 2*2 is not > 2*2
    CHECK(!validate_sq_inc({3, 8}));
    CHECK(validate_sq_inc({}));
    CHECK(validate_sq_inc({9}));
    CHECK(!validate_sq_inc({5, 5}));
}

TEST_CASE("make_sq_models: chains build and invalid sequences are rejected") {
    CHECK(make_sq_models({2, 5, 26}).size() == 3);
    CHECK(make_sq_models({2, 5, 26, 677, 458330}).size() == 5);  // 677^2 = 458329
    CHECK_THROWS_AS(make_sq_models({3, 8}), PreconditionError);
}

TEST_CASE("make_sq_models: never a chain violation, random square-increasing sweeps") {
    Rng rng(3);
    for (int i = 0; i < 60; ++i) {
        std::vector<Element> m{2 + rng.below(4)};
        std::size_t len = 2 + rng.below(3);
        while (m.size() < len) m.push_back(m.back() * m.back() + 1 + rng.below(3));
        REQUIRE(validate_sq_inc(m));
        CHECK_NOTHROW(make_sq_models(m));
    }
}

TEST_CASE("q_axioms: count, rendering, depth profile") {
    const auto& axs = q_axioms();
    REQUIRE(axs.size() == 7);
    CHECK(render_formula(axs[3]) == "forall x. x+0 = x");
    std::vector<std::size_t> profile;
    for (const auto& ax : axs) profile.push_back(depth(ax));
    CHECK(profile == std::vector<std::size_t>{1, 2, 2, 1, 2, 1, 2});
    auto sig = arithmetic_signature();
    for (const auto& ax : axs) CHECK(parse_formula(render_formula(ax), sig) == ax);
}

TEST_CASE("check_q: square-increasing chains fulfill Q") {
    for (auto m : std::vector<std::vector<Element>>{{2, 5, 26}, {2, 5, 26, 677}}) {
        auto rep = check_q(make_sq_models(m));
        CHECK(rep.hypothesis_met);
        CHECK(rep.all_true());
    }
}

TEST_CASE("check_q: length-2 chains leave depth-2 axioms undefined") {
    auto rep = check_q(make_sq_models({2, 5}));
    CHECK(!rep.hypothesis_met);
    CHECK(rep.axioms[6].truth == Truth::Undefined);  // axiom 7 has depth 2
    CHECK(rep.axioms[6].reason == UndefReason::NoEligibleIndex);
    CHECK(!rep.all_true());
}

TEST_CASE("lnp: template structure, depth, round-trip") {
    auto sig = arithmetic_signature();
    Formula f = parse_formula("x = x", sig);
    Formula l = lnp(f);
    Formula expected = parse_formula(
        "!(exists x. x = x) | exists x. forall y. (x = x & (!(y = y) | (x < y | x = y)))", sig);
    CHECK(l == expected);
    CHECK(parse_formula(render_formula(l), sig) == l);

    // dp(lnp(f)) counts 3 quantifier nodes plus three copies of f
    for (const char* src : {"x = x", "exists w. w = x", "exists w. exists v. w = v + x"}) {
        Formula g = parse_formula(src, sig);
        CHECK(depth(lnp(g)) == 3 * depth(g) + 3);
    }
    CHECK_THROWS_AS(lnp(parse_formula("0 = 0", sig)), PreconditionError);
}

TEST_CASE("first_primes") {
    CHECK(first_primes(3) == std::vector<Element>{2, 3, 5});
    CHECK(first_primes(6) == std::vector<Element>{2, 3, 5, 7, 11, 13});
}

TEST_CASE("prime_code_psi: k=1, cap 2 expands into three disjuncts") {
    auto sig = arithmetic_signature();
    Formula phi = parse_formula("x = x", sig);
    Formula psi = prime_code_psi({phi}, 2);
    // shape: ((e0 ∨ e1) ∨ e2), each ei a conjunction with x = 2^i as head
    REQUIRE(psi.kind() == FormulaKind::Or);
    std::vector<Formula> disjuncts;
    std::function<void(const Formula&)> flatten = [&](const Formula& g) {
        if (g.kind() == FormulaKind::Or) {
            flatten(g.child(0));
            flatten(g.child(1));
        } else {
            disjuncts.push_back(g);
        }
    };
    flatten(psi);
    REQUIRE(disjuncts.size() == 3);
    auto heads = std::vector<std::string>{};
    for (const auto& d : disjuncts) {
        REQUIRE(d.kind() == FormulaKind::And);
        heads.push_back(render_formula(d.child(0)));
    }
    CHECK(heads[0] == "x = S(0)");                 // 2^0, the empty product
    CHECK(heads[1] == "x = S(S(0))");              // 2^1
    CHECK(heads[2] == "x = S(S(0))*S(S(0))");      // 2^2
    CHECK(free_vars(psi) == std::set<std::string>{"x"});
    CHECK_THROWS_AS(prime_code_psi({phi, phi, phi}, 40), GuardExceeded);
}

TEST_CASE("prime_code_psi: psi(1) holds when no phi_i has a witness") {
    // explicit total quasi-model: wrap-around arithmetic on {0..4}
    Signature sig = arithmetic_signature();
    std::map<std::vector<Element>, Element> s_map, add, mul;
    for (Element a = 0; a < 5; ++a) {
        s_map[{a}] = (a + 1) % 5;
        for (Element b = 0; b < 5; ++b) {
            add[{a, b}] = (a + b) % 5;
            mul[{a, b}] = (a * b) % 5;
        }
    }
    std::set<std::vector<Element>> lt;
    for (Element a = 0; a < 5; ++a)
        for (Element b = 0; b < 5; ++b)
            if (a < b) lt.insert({a, b});
    auto qm = PartialStructure::make_explicit(sig, {0, 1, 2, 3, 4}, {{"0", 0}},
                                              {{"<", lt}}, {{"S", s_map}, {"+", add}, {"*", mul}});
    REQUIRE(is_total(qm));
    Formula none = parse_formula("x < x", sig);  // no witness anywhere
    Formula psi = prime_code_psi({none}, 2);
    CHECK(classical_satisfies(qm, psi, {{"x", 1}}) == Truth::True);
    CHECK(classical_satisfies(qm, psi, {{"x", 3}}) == Truth::False);
}

TEST_CASE("enlarge_with_constants") {
    auto sig = arithmetic_signature();
    CHECK(enlarge_with_constants(sig, 0) == sig);
    auto big = enlarge_with_constants(sig, 4);
    CHECK(big.constants.size() == sig.constants.size() + 4);
    auto m5 = PartialStructure::segment(5, big);
    CHECK(m5.const_value("c3") == 3);
    CHECK_THROWS_AS(enlarge_with_constants(big, 2), SignatureError);  // c0 clashes
}

TEST_CASE("check_q: explicit non-segment chain can leave axioms undefined") {
    // a valid 2-chain of explicit structures; depth-2 axioms have no room
    Signature sig = arithmetic_signature();
    auto seg2 = make_segment(2).materialize();
    auto seg5 = make_segment(5).materialize();
    LnModel v = LnModel::create({seg2, seg5});
    auto rep = check_q(v);
    CHECK(rep.axioms[6].truth == Truth::Undefined);
}
