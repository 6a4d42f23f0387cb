#include "flab/random_gen.hpp"

#include <algorithm>

namespace flab {

std::uint64_t instance_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed ^ (index * 0x9e3779b97f4a7c15ULL);
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

void for_each_tuple_of(const std::vector<Element>& pool, std::size_t arity,
                       const std::function<void(const std::vector<Element>&)>& fn) {
    if (pool.empty()) return;
    std::vector<std::size_t> idx(arity, 0);
    for (;;) {
        std::vector<Element> t(arity);
        for (std::size_t i = 0; i < arity; ++i) t[i] = pool[idx[i]];
        fn(t);
        std::size_t pos = arity;
        bool done = true;
        while (pos > 0) {
            --pos;
            if (++idx[pos] < pool.size()) { done = false; break; }
            idx[pos] = 0;
        }
        if (done) break;
    }
}

}  // namespace

PartialStructure random_structure(Rng& rng, const Signature& sig, const ChainGenOptions& opt) {
    std::size_t size = 1 + rng.below(std::min(opt.max_domain, opt.element_pool.size()));
    std::vector<Element> pool = opt.element_pool;
    std::shuffle(pool.begin(), pool.end(), rng.eng);
    std::vector<Element> domain(pool.begin(), pool.begin() + size);
    std::sort(domain.begin(), domain.end());

    std::map<std::string, Element> consts;
    for (const auto& c : sig.constants) consts[c] = domain[rng.below(domain.size())];
    std::map<std::string, std::set<std::vector<Element>>> rels;
    for (const auto& r : sig.relations) {
        auto& set = rels[r.name];
        for_each_tuple_of(domain, r.arity, [&](const std::vector<Element>& t) {
            if (rng.coin()) set.insert(t);
        });
    }
    std::map<std::string, std::map<std::vector<Element>, Element>> funs;
    for (const auto& f : sig.functions) {
        auto& graph = funs[f.name];
        for_each_tuple_of(domain, f.arity, [&](const std::vector<Element>& t) {
            if (rng.coin(0.6)) graph[t] = domain[rng.below(domain.size())];
        });
    }
    return PartialStructure::make_explicit(sig, std::move(domain), std::move(consts),
                                           std::move(rels), std::move(funs));
}

namespace {

// Extend prev to a strictly larger-or-equal structure: keep its
// interpretations, possibly add a fresh element, define every function on
// prev's tuples, and fill new tuples at random.
PartialStructure extend_structure(Rng& rng, const PartialStructure& prev,
                                  const ChainGenOptions& opt, bool force_total_on_prev) {
    const Signature& sig = prev.signature();
    std::vector<Element> domain = prev.domain_vector();
    std::vector<Element> fresh;
    for (Element e : opt.element_pool)
        if (!prev.contains(e)) fresh.push_back(e);
    if (!fresh.empty() && domain.size() < opt.max_domain && rng.coin(0.7))
        domain.push_back(fresh[rng.below(fresh.size())]);
    std::sort(domain.begin(), domain.end());

    std::map<std::string, Element> consts;
    for (const auto& c : sig.constants) consts[c] = prev.const_value(c);

    std::vector<Element> prev_dom = prev.domain_vector();
    std::map<std::string, std::set<std::vector<Element>>> rels;
    for (const auto& r : sig.relations) {
        auto& set = rels[r.name];
        for_each_tuple_of(domain, r.arity, [&](const std::vector<Element>& t) {
            bool in_prev = std::all_of(t.begin(), t.end(),
                                       [&](Element e) { return prev.contains(e); });
            if (in_prev ? prev.rel_holds(r.name, t) : rng.coin()) set.insert(t);
        });
    }
    std::map<std::string, std::map<std::vector<Element>, Element>> funs;
    for (const auto& f : sig.functions) {
        auto& graph = funs[f.name];
        for_each_tuple_of(domain, f.arity, [&](const std::vector<Element>& t) {
            bool in_prev = std::all_of(t.begin(), t.end(),
                                       [&](Element e) { return prev.contains(e); });
            if (in_prev) {
                auto v = prev.fun_value(f.name, t);
                if (v) {
                    graph[t] = *v;
                } else {
                    // the chain condition requires a value one level up; it
                    // must land outside prev's domain or the usual
                    // substructure graph condition breaks
                    std::vector<Element> outside;
                    for (Element e : domain)
                        if (!prev.contains(e)) outside.push_back(e);
                    if (!outside.empty() && rng.coin(0.8))
                        graph[t] = outside[rng.below(outside.size())];
                    else if (outside.empty())
                        graph[t] = domain[rng.below(domain.size())];
                    else
                        graph[t] = outside[rng.below(outside.size())];
                }
            } else if (force_total_on_prev ? rng.coin(0.5) : rng.coin(0.4)) {
                graph[t] = domain[rng.below(domain.size())];
            }
        });
    }
    return PartialStructure::make_explicit(sig, std::move(domain), std::move(consts),
                                           std::move(rels), std::move(funs));
}

}  // namespace

LnModel random_chain(Rng& rng, const Signature& sig, std::size_t n, const ChainGenOptions& opt) {
    for (int attempt = 0; attempt < 400; ++attempt) {
        try {
            std::vector<PartialStructure> levels;
            levels.push_back(random_structure(rng, sig, opt));
            for (std::size_t i = 1; i < n; ++i)
                levels.push_back(extend_structure(rng, levels.back(), opt, false));
            return LnModel::create(std::move(levels));
        } catch (const ChainError&) {
            continue;  // retry with fresh randomness
        }
    }
    throw GuardExceeded("random_chain: could not build a valid chain");
}

PartialStructure random_extension_top(Rng& rng, const PartialStructure& base) {
    const Signature& sig = base.signature();
    std::vector<Element> domain = base.domain_vector();
    Element fresh = domain.back() + 1;
    bool grew = false;
    std::vector<Element> prev_dom = domain;

    // add the fresh element when base is not total (a value outside is needed)
    if (!is_total(base)) {
        domain.push_back(fresh);
        grew = true;
    } else if (rng.coin()) {
        domain.push_back(fresh);
        grew = true;
    }

    std::map<std::string, Element> consts;
    for (const auto& c : sig.constants) consts[c] = base.const_value(c);
    std::map<std::string, std::set<std::vector<Element>>> rels;
    for (const auto& r : sig.relations) {
        auto& set = rels[r.name];
        for_each_tuple_of(domain, r.arity, [&](const std::vector<Element>& t) {
            bool in_prev = std::all_of(t.begin(), t.end(),
                                       [&](Element e) { return base.contains(e); });
            if (in_prev ? base.rel_holds(r.name, t) : rng.coin()) set.insert(t);
        });
    }
    std::map<std::string, std::map<std::vector<Element>, Element>> funs;
    for (const auto& f : sig.functions) {
        auto& graph = funs[f.name];
        for_each_tuple_of(domain, f.arity, [&](const std::vector<Element>& t) {
            bool in_prev = std::all_of(t.begin(), t.end(),
                                       [&](Element e) { return base.contains(e); });
            if (in_prev) {
                auto v = base.fun_value(f.name, t);
                if (v)
                    graph[t] = *v;
                else
                    graph[t] = grew ? fresh : t[0];  // grew is guaranteed when base isn't total
            } else if (rng.coin(0.4)) {
                graph[t] = domain[rng.below(domain.size())];
            }
        });
    }
    return PartialStructure::make_explicit(sig, std::move(domain), std::move(consts),
                                           std::move(rels), std::move(funs));
}

namespace {

Term random_term(Rng& rng, const Signature& sig, const std::vector<std::string>& vars,
                 std::size_t depth_left, std::size_t& budget) {
    // budget counts canonical tokens
    bool can_apply = depth_left > 0 && !sig.functions.empty() && budget >= 2;
    if (can_apply && rng.coin(0.45)) {
        const auto& f = sig.functions[rng.below(sig.functions.size())];
        if (budget >= f.arity + 1) {
            budget -= 1;
            std::vector<Term> args;
            for (std::size_t i = 0; i < f.arity; ++i)
                args.push_back(random_term(rng, sig, vars, depth_left - 1, budget));
            return Term::apply(f.name, std::move(args));
        }
    }
    budget -= 1;
    if (vars.empty() && sig.constants.empty())
        throw GuardExceeded("random_term: no variables in scope and no constants");
    bool use_var = !vars.empty() && (sig.constants.empty() || rng.coin(0.6));
    if (use_var) return Term::variable(vars[rng.below(vars.size())]);
    return Term::constant(sig.constants[rng.below(sig.constants.size())]);
}

Formula random_formula_rec(Rng& rng, const Signature& sig, const FormulaGenOptions& opt,
                           std::vector<std::string> vars, std::size_t& budget,
                           std::size_t bound_depth) {
    // atoms cost >= 3 tokens; connectives need room for children
    bool atom_only = budget <= 5;
    // without variables or constants there is no term, so bind one first
    bool must_bind = vars.empty() && sig.constants.empty();
    double roll = must_bind ? 0.0 : std::uniform_real_distribution<>(0, 1)(rng.eng);
    if (must_bind || (!atom_only && roll < 0.2 && budget >= 6)) {  // quantifier
        bool forall = opt.allow_forall && rng.coin(0.4);
        std::string v = "q" + std::to_string(bound_depth);
        budget -= 2;
        auto inner_vars = vars;
        inner_vars.push_back(v);
        Formula body = random_formula_rec(rng, sig, opt, inner_vars, budget, bound_depth + 1);
        return forall ? Formula::forall(v, body) : Formula::exists(v, body);
    }
    if (!atom_only && roll < 0.35) {  // negation
        budget -= 1;
        return Formula::negation(random_formula_rec(rng, sig, opt, vars, budget, bound_depth));
    }
    if (!atom_only && roll < 0.55 && budget >= 7) {  // binary
        budget -= 1;
        Formula l = random_formula_rec(rng, sig, opt, vars, budget, bound_depth);
        Formula r = random_formula_rec(rng, sig, opt, vars, budget, bound_depth);
        return rng.coin() ? Formula::conjunction(l, r) : Formula::disjunction(l, r);
    }
    // atom
    bool use_rel = !sig.relations.empty() && rng.coin(0.5);
    if (use_rel) {
        const auto& r = sig.relations[rng.below(sig.relations.size())];
        if (budget >= r.arity + 1) {
            budget -= 1;
            std::vector<Term> args;
            for (std::size_t i = 0; i < r.arity; ++i)
                args.push_back(random_term(rng, sig, vars, opt.max_term_depth, budget));
            return Formula::relation(r.name, std::move(args));
        }
    }
    budget -= 1;
    Term l = random_term(rng, sig, vars, opt.max_term_depth, budget);
    Term r = random_term(rng, sig, vars, opt.max_term_depth, budget);
    return Formula::equal(std::move(l), std::move(r));
}

}  // namespace

Formula random_formula(Rng& rng, const Signature& sig, const FormulaGenOptions& opt) {
    for (int attempt = 0; attempt < 500; ++attempt) {
        try {
            std::size_t budget = opt.max_tokens;
            std::vector<std::string> vars =
                opt.closed ? std::vector<std::string>{} : opt.free_pool;
            Formula f = random_formula_rec(rng, sig, opt, vars, budget, 0);
            if (length(f) > opt.max_tokens) continue;
            if (opt.closed && !free_vars(f).empty()) continue;
            return f;
        } catch (const GuardExceeded&) {
            continue;  // ran out of budget mid-tree; redraw
        }
    }
    throw GuardExceeded("random_formula: could not fit the token budget");
}

Assignment random_assignment(Rng& rng, const std::set<std::string>& vars,
                             const PartialStructure& into) {
    Assignment a;
    for (const auto& v : vars) a[v] = into.element_at(rng.below(into.domain_size()));
    return a;
}

}  // namespace flab
