#include "flab/collapse.hpp"

#include <algorithm>
#include <functional>

#include "flab/parser.hpp"

namespace flab {

// ── Col ─────────────────────────────────────────────────────────────────────

namespace {

BigInt binom2(std::size_t k) { return BigInt(k) * BigInt(k >= 1 ? k - 1 : 0) / 2; }

BigInt ipow(const BigInt& base, std::size_t e) {
    BigInt r = 1;
    for (std::size_t i = 0; i < e; ++i) r *= base;
    return r;
}

}  // namespace

namespace {

BigInt col_bound_impl(const ColParams& p, const BigInt* cap) {
    const std::size_t j = p.max_fn_arity, k = p.formula_len, l = p.sig_size;
    BigInt col = std::max<std::size_t>(l, 1);
    const BigInt ck2 = binom2(k);
    for (std::size_t i = 0; i < p.level; ++i) {
        if (cap && col > *cap) return col;  // nondecreasing from here on
        BigInt bstar = col + ipow(col, j) * l;
        BigInt bstarstar = bstar + ck2 * ipow(bstar, k);
        // Σ_{m=0}^{i−1} C(i,m) = 2^i − 1
        BigInt subseq = (BigInt(1) << i) - 1;
        col = bstar + ck2 * ipow(bstar, k) + subseq * ipow(bstarstar, k) * ck2 * 2;
    }
    return col;
}

}  // namespace

BigInt col_bound(const ColParams& p) { return col_bound_impl(p, nullptr); }

BigInt col_bound_clamped(const ColParams& p, const BigInt& cap) {
    return col_bound_impl(p, &cap);
}

// ── F-collapse construction ─────────────────────────────────────────────────

namespace {

// All variables of ψ, sorted, for tuple enumeration.
std::vector<std::string> sorted_free_vars(const Formula& f) {
    auto fv = free_vars(f);
    return {fv.begin(), fv.end()};
}

// Enumerate assignments of vars drawn from pool (sorted ascending), invoking
// fn for each; returns false early if fn does.
void for_each_assignment(const std::vector<std::string>& vars, const std::vector<Element>& pool,
                         const std::function<bool(const Assignment&)>& fn) {
    if (vars.empty()) {
        Assignment a;
        fn(a);
        return;
    }
    if (pool.empty()) return;
    std::vector<std::size_t> idx(vars.size(), 0);
    Assignment a;
    for (;;) {
        for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = pool[idx[i]];
        if (!fn(a)) return;
        std::size_t pos = vars.size();
        bool done = true;
        while (pos > 0) {
            --pos;
            if (++idx[pos] < pool.size()) {
                done = false;
                break;
            }
            idx[pos] = 0;
        }
        if (done) return;
    }
}

// All term nodes occurring in f (every subterm occurrence, deduplicated).
void collect_term_nodes(const Term& t, std::vector<Term>& out) {
    bool dup = false;
    for (const auto& u : out)
        if (u == t) {
            dup = true;
            break;
        }
    if (!dup) out.push_back(t);
    for (const auto& a : t.args()) collect_term_nodes(a, out);
}

std::vector<Term> all_term_nodes(const Formula& f) {
    std::vector<Term> out;
    auto walk = [&](const Formula& g, auto&& self) -> void {
        for (const auto& t : g.terms()) collect_term_nodes(t, out);
        for (std::size_t i = 0; i < g.child_count(); ++i) self(g.child(i), self);
    };
    walk(f, walk);
    return out;
}

// Evaluate t bottom-up in s; when every subterm value is defined (and inside
// s), push all of them into out and return the root value.
std::optional<Element> term_values_at(const PartialStructure& s, const Term& t,
                                      const Assignment& a, std::vector<Element>& out) {
    switch (t.kind()) {
        case TermKind::Variable: {
            auto it = a.find(t.name());
            if (it == a.end() || !s.contains(it->second)) return std::nullopt;
            out.push_back(it->second);
            return it->second;
        }
        case TermKind::Constant: {
            Element v = s.const_value(t.name());
            if (!s.contains(v)) return std::nullopt;
            out.push_back(v);
            return v;
        }
        case TermKind::Apply: {
            std::vector<Element> args;
            for (const auto& sub : t.args()) {
                auto v = term_values_at(s, sub, a, out);
                if (!v) return std::nullopt;
                args.push_back(*v);
            }
            auto v = s.fun_value(t.name(), args);
            if (!v || !s.contains(*v)) return std::nullopt;
            out.push_back(*v);
            return v;
        }
    }
    return std::nullopt;
}

// Least x (numeric order over the subchain's top universe) with
// chain ⊨* ψ(x) True; nullopt when there is none.
std::optional<Element> least_fulfilling_witness(const LnModel& chain, const Formula& psi,
                                                const std::string& var) {
    const PartialStructure& pool = chain.top();
    for (std::size_t i = 0; i < pool.domain_size(); ++i) {
        Element x = pool.element_at(i);
        Assignment a{{var, x}};
        if (fulfills(chain, psi, a).truth == Truth::True) return x;
    }
    return std::nullopt;
}

std::size_t first_level_of(const LnModel& v, Element e) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v.level(i).contains(e)) return i;
    throw PreconditionError("element not in the chain");
}

LnModel build_restricted(const LnModel& v, const std::vector<std::vector<Element>>& universes) {
    std::vector<PartialStructure> levels;
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::set<Element> keep(universes[i].begin(), universes[i].end());
        levels.push_back(v.level(i).restrict_to(keep));
    }
    return LnModel::create(std::move(levels));
}

}  // namespace

CollapseResult f_collapse(const LnModel& v, const Formula& f) {
    const std::size_t n = v.size();
    if (!free_vars(f).empty()) throw PreconditionError("f_collapse: formula must be closed");
    if (depth(f) + 2 > n) throw PreconditionError("f_collapse: dp(f) must be <= n-2");
    if (!fulfills(v, f, {}).defined())
        throw PreconditionError("f_collapse: fulfillment of f is not defined on the chain");

    const Signature& sig = v.signature();
    auto subs = subformulas(f);
    std::vector<Formula> quantified, one_free;
    for (const auto& s : subs) {
        if (s.is_quantifier()) quantified.push_back(s);
        if (free_vars(s).size() == 1) one_free.push_back(s);
    }
    auto term_nodes = all_term_nodes(f);

    // Per-subsequence least witnesses (condition 5 and domain preservation):
    // for every subsequence of length >= 2 and every single-free-variable
    // subformula, keep the least fulfilling witness at level
    // max(first level, 1).
    std::vector<std::set<Element>> sub_wit(n);
    {
        std::vector<std::size_t> idxs;
        auto rec = [&](std::size_t next, auto&& self) -> void {
            if (idxs.size() >= 2) {
                std::vector<PartialStructure> lv;
                for (auto i : idxs) lv.push_back(v.level(i));
                LnModel chain = LnModel::create(std::move(lv));
                for (const auto& psi : one_free) {
                    std::string var = *free_vars(psi).begin();
                    auto w = least_fulfilling_witness(chain, psi, var);
                    if (w) {
                        std::size_t lvl = std::max<std::size_t>(first_level_of(v, *w), 1);
                        sub_wit[lvl].insert(*w);
                    }
                }
            }
            for (std::size_t i = next; i < n; ++i) {
                idxs.push_back(i);
                self(i + 1, self);
                idxs.pop_back();
            }
        };
        rec(0, rec);
    }

    std::vector<std::set<Element>> B(n);
    // B_0: interpreted constants, or the least element when there are none.
    if (sig.constants.empty()) {
        B[0].insert(v.level(0).min_element());
    } else {
        for (const auto& c : sig.constants) B[0].insert(v.level(0).const_value(c));
    }
    for (Element w : sub_wit[0]) B[0].insert(w);  // empty by construction

    for (std::size_t i = 0; i + 1 < n; ++i) {
        std::set<Element> next = B[i];
        std::vector<Element> pool(B[i].begin(), B[i].end());
        const PartialStructure& up = v.level(i + 1);

        // one application of every function symbol inside A_{i+1}
        for (const auto& fn : sig.functions) {
            std::vector<Element> tuple(fn.arity, 0);
            std::vector<std::size_t> idx(fn.arity, 0);
            if (pool.empty()) break;
            for (;;) {
                for (std::size_t t = 0; t < fn.arity; ++t) tuple[t] = pool[idx[t]];
                auto val = up.fun_value(fn.name, tuple);
                if (val && up.contains(*val)) next.insert(*val);
                std::size_t pos = fn.arity;
                bool done = true;
                while (pos > 0) {
                    --pos;
                    if (++idx[pos] < pool.size()) {
                        done = false;
                        break;
                    }
                    idx[pos] = 0;
                }
                if (done) break;
            }
        }

        // φ-term instances fully defined in A_{i+1}: keep all subterm values,
        // so nested terms stay evaluable after the cut
        for (const auto& tn : term_nodes) {
            std::set<std::string> vs;
            tn.collect_vars(vs);
            std::vector<std::string> vars(vs.begin(), vs.end());
            for_each_assignment(vars, pool, [&](const Assignment& a) {
                std::vector<Element> vals;
                if (term_values_at(up, tn, a, vals))
                    for (Element e : vals) next.insert(e);
                return true;
            });
        }

        // least existential witnesses / universal counterexamples, per suffix
        // slice, per quantified subformula, per tuple from B_i
        for (std::size_t s = 0; s + 2 <= n; ++s) {
            LnModel vs = v.slice(s, n - 1);
            for (const auto& chi : quantified) {
                auto vars = sorted_free_vars(chi);
                for_each_assignment(vars, pool, [&](const Assignment& a) {
                    auto lti = least_term_index(vs, chi, a);
                    if (!lti.index) return true;
                    std::size_t iota = *lti.index;
                    const std::string& y = chi.name();
                    if (chi.kind() == FormulaKind::Exists) {
                        LnModel rest = vs.slice(iota + 1, vs.size() - 1);
                        const PartialStructure& wpool = vs.level(iota + 1);
                        for (std::size_t bi = 0; bi < wpool.domain_size(); ++bi) {
                            Element b = wpool.element_at(bi);
                            Assignment ext = a;
                            ext[y] = b;
                            if (fulfills(rest, chi.child(), ext).truth == Truth::True) {
                                if (up.contains(b)) next.insert(b);
                                break;  // least witness only
                            }
                        }
                    } else {
                        // mirror case 6: the instance at level j_b runs
                        // against the suffix slice starting there
                        std::size_t cap = vs.size() - depth(chi) - 1;
                        const PartialStructure& wpool = vs.level(cap);
                        for (std::size_t bi = 0; bi < wpool.domain_size(); ++bi) {
                            Element b = wpool.element_at(bi);
                            std::size_t jb = iota;
                            while (!vs.level(jb).contains(b)) ++jb;
                            Assignment ext = a;
                            ext[y] = b;
                            if (fulfills(vs.slice(jb, vs.size() - 1), chi.child(), ext).truth !=
                                Truth::True) {
                                if (up.contains(b)) next.insert(b);
                                break;  // least counterexample only
                            }
                        }
                    }
                    return true;
                });
            }
        }

        for (std::size_t l = 0; l <= i + 1; ++l)
            for (Element w : sub_wit[l]) next.insert(w);

        B[i + 1] = std::move(next);
    }

    std::vector<std::vector<Element>> universes;
    for (auto& s : B) universes.emplace_back(s.begin(), s.end());

    LnModel collapsed = build_restricted(v, universes);

    std::vector<std::pair<Element, Element>> renaming;
    std::map<Element, Element> rename_map;
    for (std::size_t i = 0; i < universes.back().size(); ++i) {
        renaming.emplace_back(universes.back()[i], static_cast<Element>(i));
        rename_map[universes.back()[i]] = static_cast<Element>(i);
    }
    std::vector<PartialStructure> renamed_levels;
    for (std::size_t i = 0; i < n; ++i)
        renamed_levels.push_back(collapsed.level(i).rename(rename_map));
    LnModel renamed = LnModel::create(std::move(renamed_levels));

    return CollapseResult{std::move(universes), std::move(collapsed), std::move(renaming),
                          std::move(renamed)};
}

CollapseResult rebuild_from_universes(const LnModel& v,
                                      std::vector<std::vector<Element>> universes) {
    LnModel collapsed = build_restricted(v, universes);
    std::vector<std::pair<Element, Element>> renaming;
    std::map<Element, Element> rename_map;
    for (std::size_t i = 0; i < universes.back().size(); ++i) {
        renaming.emplace_back(universes.back()[i], static_cast<Element>(i));
        rename_map[universes.back()[i]] = static_cast<Element>(i);
    }
    std::vector<PartialStructure> renamed_levels;
    for (std::size_t i = 0; i < v.size(); ++i)
        renamed_levels.push_back(collapsed.level(i).rename(rename_map));
    return CollapseResult{std::move(universes), std::move(collapsed), std::move(renaming),
                          LnModel::create(std::move(renamed_levels))};
}

// ── Verification ────────────────────────────────────────────────────────────

CollapseReport verify_collapse(const LnModel& v, const CollapseResult& r, const Formula& f) {
    CollapseReport rep;
    const std::size_t n = v.size();
    const Signature& sig = v.signature();
    ColParams base{0, sig.max_function_arity(), length(f), sig.size()};

    const BigInt sat = BigInt(1) << 96;
    // condition 1
    if (BigInt(r.universes[0].size()) > col_bound_clamped(base, sat)) {
        rep.c1 = false;
        rep.violations.push_back("condition 1: |B_0| = " +
                                 std::to_string(r.universes[0].size()) + " exceeds max(|L|,1)");
    }
    // condition 2
    for (std::size_t i = 0; i < n; ++i) {
        ColParams p = base;
        p.level = i;
        if (BigInt(r.universes[i].size()) > col_bound_clamped(p, sat)) {
            rep.c2 = false;
            rep.violations.push_back("condition 2: |B_" + std::to_string(i) + "| exceeds Col");
        }
    }
    // condition 3
    for (std::size_t i = 0; i < n; ++i)
        for (Element e : r.universes[i])
            if (!v.level(i).contains(e)) {
                rep.c3 = false;
                rep.violations.push_back("condition 3: element " + std::to_string(e) +
                                         " not in A_" + std::to_string(i));
            }

    // condition 4: verdict equivalence (including Undefined) for every
    // subformula and every tuple from the collapsed top universe
    const std::vector<Element>& pool = r.universes.back();
    for (const auto& psi : subformulas(f)) {
        auto vars = sorted_free_vars(psi);
        if (vars.size() > 3) continue;  // generator keeps arities small
        bool ok = true;
        for_each_assignment(vars, pool, [&](const Assignment& a) {
            ++rep.condition4_pairs;
            auto va = fulfills(v, psi, a);
            auto vb = fulfills(r.collapsed, psi, a);
            if (va.truth != vb.truth) {
                ok = false;
                rep.violations.push_back("condition 4: " + render_formula(psi) +
                                         " disagrees for " + chain_key(r.collapsed));
                return false;
            }
            return true;
        });
        if (!ok) rep.c4 = false;
    }

    // condition 5: brute force over subsequences and single-free-variable
    // subformulas, comparing least witnesses of the two deleted-index chains
    std::vector<Formula> one_free;
    for (const auto& s : subformulas(f))
        if (free_vars(s).size() == 1) one_free.push_back(s);
    std::vector<std::size_t> idxs;
    auto rec = [&](std::size_t nextIdx, auto&& self) -> void {
        if (idxs.size() >= 3) {
            // delete position 2 / position 1
            std::vector<PartialStructure> d2, d1;
            for (std::size_t p = 0; p < idxs.size(); ++p) {
                if (p != 2) d2.push_back(v.level(idxs[p]));
                if (p != 1) d1.push_back(v.level(idxs[p]));
            }
            LnModel c2 = LnModel::create(std::move(d2));
            LnModel c1 = LnModel::create(std::move(d1));
            for (const auto& psi : one_free) {
                ++rep.condition5_checks;
                std::string var = *free_vars(psi).begin();
                auto w1 = least_fulfilling_witness(c2, psi, var);
                auto w2 = least_fulfilling_witness(c1, psi, var);
                if (w1 && w2 && *w1 != *w2) {
                    auto present = [&](Element w) {
                        std::size_t lvl = std::max<std::size_t>(first_level_of(v, w), 1);
                        return std::binary_search(r.universes[lvl].begin(),
                                                  r.universes[lvl].end(), w);
                    };
                    if (!present(*w1) || !present(*w2)) {
                        rep.c5 = false;
                        rep.violations.push_back(
                            "condition 5: witnesses " + std::to_string(*w1) + "/" +
                            std::to_string(*w2) + " missing for " + render_formula(psi));
                    }
                }
            }
        }
        if (idxs.size() == n) return;
        for (std::size_t i = nextIdx; i < n; ++i) {
            idxs.push_back(i);
            self(i + 1, self);
            idxs.pop_back();
        }
    };
    rec(0, rec);

    return rep;
}

}  // namespace flab
