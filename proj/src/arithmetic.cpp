#include "flab/arithmetic.hpp"

#include "flab/parser.hpp"

namespace flab {

bool validate_sq_inc(const std::vector<Element>& m) {
    for (Element v : m)
        if (v >= (Element(1) << 31))
            throw PreconditionError("validate_sq_inc: entries must stay below 2^31");
    for (std::size_t i = 0; i + 1 < m.size(); ++i) {
        if (m[i] >= m[i + 1]) return false;
        if (m[i] * m[i] >= m[i + 1]) return false;
    }
    return true;
}

LnModel make_sq_models(const std::vector<Element>& m) {
    if (!validate_sq_inc(m))
        throw PreconditionError("make_sq_models: sequence is not square-increasing");
    if (m.empty()) throw PreconditionError("make_sq_models: empty sequence");
    std::vector<PartialStructure> levels;
    levels.reserve(m.size());
    for (Element mi : m) levels.push_back(make_segment(mi));
    return LnModel::create(std::move(levels));
}

const std::vector<Formula>& q_axioms() {
    static const std::vector<Formula> axioms = [] {
        Signature sig = arithmetic_signature();
        std::vector<Formula> out;
        out.push_back(parse_formula("forall x. !(0 = S(x))", sig));
        out.push_back(parse_formula("forall x. forall y. (S(x) = S(y) -> x = y)", sig));
        out.push_back(parse_formula("forall x. (!(x = 0) -> exists y. x = S(y))", sig));
        out.push_back(parse_formula("forall x. x + 0 = x", sig));
        out.push_back(parse_formula("forall x. forall y. x + S(y) = S(x + y)", sig));
        out.push_back(parse_formula("forall x. x * 0 = 0", sig));
        out.push_back(parse_formula("forall x. forall y. x * S(y) = (x * y) + x", sig));
        return out;
    }();
    return axioms;
}

const Formula& no_greatest_element_sentence() {
    static const Formula f = parse_formula(
        "forall x. exists y. ((x < y | x = y) & !(x = y))", arithmetic_signature());
    return f;
}

bool QCheckReport::all_true() const {
    for (const auto& v : axioms)
        if (v.truth != Truth::True) return false;
    return no_greatest.truth == Truth::True;
}

QCheckReport check_q(const LnModel& v) {
    if (!v.signature().arithmetic_base)
        throw PreconditionError("check_q: arithmetic base signature required");
    QCheckReport rep;
    for (const auto& ax : q_axioms()) rep.axioms.push_back(fulfills(v, ax, {}));
    rep.no_greatest = fulfills(v, no_greatest_element_sentence(), {});
    bool m0_big = v.level(0).domain_size() >= 2;
    rep.hypothesis_met = (v.size() >= 3 && m0_big) || v.size() >= 4;
    return rep;
}

Formula lnp(const Formula& f) {
    auto fv = free_vars(f);
    if (fv.size() != 1)
        throw PreconditionError("lnp: formula must have exactly one free variable");
    const std::string x = *fv.begin();

    // fresh bound variable not occurring anywhere in f
    std::set<std::string> used;
    auto walk = [&](const Formula& g, auto&& self) -> void {
        if (g.is_quantifier()) used.insert(g.name());
        for (const auto& t : g.terms()) t.collect_vars(used);
        for (std::size_t i = 0; i < g.child_count(); ++i) self(g.child(i), self);
    };
    walk(f, walk);
    used.insert(x);
    std::string y = "y";
    while (used.count(y)) y += "'";

    Formula f_y = substitute_free(f, x, y);
    Formula x_le_y = Formula::disjunction(
        Formula::relation("<", {Term::variable(x), Term::variable(y)}),
        Formula::equal(Term::variable(x), Term::variable(y)));
    Formula inner = Formula::conjunction(
        f, Formula::disjunction(Formula::negation(f_y), x_le_y));
    Formula right = Formula::exists(x, Formula::forall(y, inner));
    Formula left = Formula::negation(Formula::exists(x, f));
    return Formula::disjunction(left, right);
}

std::vector<Element> first_primes(std::size_t k) {
    std::vector<Element> out;
    Element cand = 2;
    while (out.size() < k) {
        bool prime = true;
        for (Element d = 2; d * d <= cand; ++d)
            if (cand % d == 0) {
                prime = false;
                break;
            }
        if (prime) out.push_back(cand);
        ++cand;
    }
    return out;
}

namespace {

Term numeral(Element v) {
    Term t = Term::constant("0");
    for (Element i = 0; i < v; ++i) t = Term::apply("S", {t});
    return t;
}

// p^e as an iterated product of S-tower numerals; exponent 0 contributes no
// factor.
Term power_product(const std::vector<Element>& primes, const std::vector<Element>& exps) {
    std::optional<Term> acc;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        for (Element e = 0; e < exps[i]; ++e) {
            Term factor = numeral(primes[i]);
            acc = acc ? Term::apply("*", {*acc, factor}) : factor;
        }
    }
    return acc ? *acc : numeral(1);
}

}  // namespace

Formula prime_code_psi(const std::vector<Formula>& fs, std::size_t exp_cap,
                       std::size_t max_disjuncts) {
    if (fs.empty()) throw PreconditionError("prime_code_psi: k must be >= 1");
    const std::size_t k = fs.size();

    double count = 1;
    for (std::size_t i = 0; i < k; ++i) count *= static_cast<double>(exp_cap + 1);
    if (count > static_cast<double>(max_disjuncts))
        throw GuardExceeded("prime_code_psi: exponent cap exceeded: " +
                            std::to_string(exp_cap) + "^" + std::to_string(k) +
                            " disjuncts over the limit");

    auto primes = first_primes(k);

    // rename each φ_i's free variable apart; u<i> chosen fresh per formula
    std::vector<Formula> phis;
    std::vector<std::string> uvars;
    for (std::size_t i = 0; i < k; ++i) {
        auto fv = free_vars(fs[i]);
        if (fv.size() != 1)
            throw PreconditionError("prime_code_psi: each formula needs one free variable");
        std::string u = "u" + std::to_string(i);
        while (free_vars(fs[i]).count(u)) u += "'";
        phis.push_back(substitute_free(fs[i], *fv.begin(), u));
        uvars.push_back(u);
    }

    std::optional<Formula> disjunction;
    std::vector<Element> exps(k, 0);
    for (;;) {
        Formula eq = Formula::equal(Term::variable("x"), power_product(primes, exps));
        Formula clause = eq;
        for (std::size_t i = 0; i < k; ++i) {
            Formula exists_wit = Formula::exists(uvars[i], phis[i]);
            Formula at_exp = substitute_free(phis[i], uvars[i], numeral(exps[i]));
            clause = Formula::conjunction(
                clause, Formula::disjunction(Formula::negation(exists_wit), at_exp));
        }
        disjunction = disjunction ? Formula::disjunction(*disjunction, clause) : clause;

        std::size_t pos = k;
        bool done = true;
        while (pos > 0) {
            --pos;
            if (++exps[pos] <= exp_cap) {
                done = false;
                break;
            }
            exps[pos] = 0;
        }
        if (done) break;
    }
    return *disjunction;
}

Signature enlarge_with_constants(const Signature& sig, std::size_t bound) {
    Signature out = sig;
    for (std::size_t i = 0; i < bound; ++i) {
        std::string name = "c" + std::to_string(i);
        if (out.has_symbol(name))
            throw SignatureError("enlarge_with_constants: name clash on " + name);
        out.constants.push_back(name);
    }
    out.validate();
    return out;
}

}  // namespace flab
