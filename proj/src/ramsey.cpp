#include "flab/ramsey.hpp"

#include <algorithm>

#include "flab/parser.hpp"

namespace flab {

// ── TupleColoring ───────────────────────────────────────────────────────────

std::size_t TupleColoring::color(const std::vector<std::size_t>& subset) const {
    auto key = subset;
    std::sort(key.begin(), key.end());
    auto it = table.find(key);
    if (it == table.end()) throw UsageError("TupleColoring: uncolored tuple");
    return it->second;
}

namespace {

void for_each_combination(std::size_t n, std::size_t e,
                          const std::function<bool(const std::vector<std::size_t>&)>& fn) {
    if (e > n) return;
    std::vector<std::size_t> idx(e);
    for (std::size_t i = 0; i < e; ++i) idx[i] = i;
    for (;;) {
        if (!fn(idx)) return;
        std::size_t pos = e;
        while (pos > 0) {
            --pos;
            if (idx[pos] + (e - pos) < n) {
                ++idx[pos];
                for (std::size_t q = pos + 1; q < e; ++q) idx[q] = idx[q - 1] + 1;
                break;
            }
            if (pos == 0) return;
        }
        if (e == 0) return;
    }
}

bool sq_inc_set(const std::vector<std::size_t>& sorted) {
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
        if (sorted[i] * sorted[i] >= sorted[i + 1]) return false;
    return true;
}

bool monochrome(const TupleColoring& p, const std::vector<std::size_t>& H) {
    std::optional<std::size_t> c;
    bool ok = true;
    for_each_combination(H.size(), p.e, [&](const std::vector<std::size_t>& pick) {
        std::vector<std::size_t> tuple;
        for (auto i : pick) tuple.push_back(H[i]);
        if (p.sq_inc_only && !sq_inc_set(tuple)) return true;
        std::size_t col = p.color(tuple);
        if (!c) {
            c = col;
        } else if (*c != col) {
            ok = false;
            return false;
        }
        return true;
    });
    return ok;
}

}  // namespace

TupleColoring TupleColoring::constant(std::size_t e, std::size_t r, std::size_t N,
                                      std::size_t color, bool sq_inc_only) {
    TupleColoring p{e, r, N, sq_inc_only, {}};
    for_each_combination(N, e, [&](const std::vector<std::size_t>& pick) {
        if (!sq_inc_only || sq_inc_set(pick)) p.table[pick] = color;
        return true;
    });
    return p;
}

std::optional<std::vector<std::size_t>> find_homogeneous(const TupleColoring& p, std::size_t k) {
    for (std::size_t s = std::max<std::size_t>(k, 1); s <= p.N; ++s) {
        std::optional<std::vector<std::size_t>> hit;
        for_each_combination(p.N, s, [&](const std::vector<std::size_t>& H) {
            if (H.size() <= H[0]) return true;  // need |H| > min(H)
            if (monochrome(p, H)) {
                hit = H;
                return false;
            }
            return true;
        });
        if (hit) return hit;
    }
    return std::nullopt;
}

std::size_t ph_number(std::size_t e, std::size_t k, std::size_t r, std::size_t max_colorings) {
    if (r == 0) throw PreconditionError("ph_number: r must be >= 1");
    for (std::size_t N = 1; N <= 64; ++N) {
        std::vector<std::vector<std::size_t>> tuples;
        for_each_combination(N, e, [&](const std::vector<std::size_t>& t) {
            tuples.push_back(t);
            return true;
        });
        double total = 1;
        for (std::size_t i = 0; i < tuples.size(); ++i) {
            total *= static_cast<double>(r);
            if (total > static_cast<double>(max_colorings))
                throw GuardExceeded("ph_number: coloring space exceeds the guard at N=" +
                                    std::to_string(N));
        }
        std::vector<std::size_t> colors(tuples.size(), 0);
        bool all_have_H = true;
        for (;;) {
            TupleColoring p{e, r, N, false, {}};
            for (std::size_t i = 0; i < tuples.size(); ++i) p.table[tuples[i]] = colors[i];
            if (!find_homogeneous(p, k)) {
                all_have_H = false;
                break;
            }
            std::size_t pos = tuples.size();
            bool done = true;
            while (pos > 0) {
                --pos;
                if (++colors[pos] < r) {
                    done = false;
                    break;
                }
                colors[pos] = 0;
            }
            if (done) break;
        }
        if (all_have_H) return N;
    }
    throw GuardExceeded("ph_number: no N <= 64 suffices");
}

std::optional<std::vector<std::size_t>> sq_inc_homogeneous(const TupleColoring& p, std::size_t k,
                                                           std::size_t m) {
    // DFS over square-increasing subsets of (m, N), ascending.
    std::vector<std::size_t> H;
    std::optional<std::vector<std::size_t>> found;
    auto extend_ok = [&](std::size_t v) {
        if (H.empty()) return true;
        return H.back() * H.back() < v;
    };
    auto consistent = [&]() {
        // check color consistency of e-subsets containing the new last element
        if (H.size() < p.e) return true;
        return monochrome(p, H);  // desk scale: recheck whole set
    };
    std::function<bool(std::size_t)> dfs = [&](std::size_t next) -> bool {
        if (!H.empty() && H.size() > H[0] + k) {
            found = H;
            return true;
        }
        for (std::size_t v = next; v < p.N; ++v) {
            if (v <= m || !extend_ok(v)) continue;
            H.push_back(v);
            if (consistent() && dfs(v + 1)) return true;
            H.pop_back();
        }
        return false;
    };
    dfs(0);
    return found;
}

// ── Min-witness machinery ───────────────────────────────────────────────────

namespace {

std::string single_free_var(const Formula& phi) {
    auto fv = free_vars(phi);
    if (fv.size() != 1)
        throw PreconditionError("expected exactly one free variable in " + render_formula(phi));
    return *fv.begin();
}

std::vector<Element> a0_in_order(const LnModel& v, WitnessOrder order) {
    std::vector<Element> elems = v.level(0).domain_vector();
    if (order == WitnessOrder::Numeric) return elems;
    const PartialStructure& top = v.top();
    // verify < is linear on A_0
    for (Element a : elems) {
        if (top.rel_holds("<", {a, a}))
            throw PreconditionError("top-model < is not irreflexive on A_0");
        for (Element b : elems) {
            if (a == b) continue;
            bool ab = top.rel_holds("<", {a, b});
            bool ba = top.rel_holds("<", {b, a});
            if (ab == ba) throw PreconditionError("top-model < is not linear on A_0");
        }
    }
    std::sort(elems.begin(), elems.end(), [&](Element a, Element b) {
        return top.rel_holds("<", {a, b});
    });
    return elems;
}

LnModel delete_level(const LnModel& v, std::size_t drop) {
    std::vector<PartialStructure> levels;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (i != drop) levels.push_back(v.level(i));
    return LnModel::create(std::move(levels));
}

}  // namespace

std::optional<Element> min_witness(const LnModel& v, const Formula& phi, WitnessOrder order) {
    std::string var = single_free_var(phi);
    for (Element b : a0_in_order(v, order)) {
        if (fulfills(v, phi, {{var, b}}).truth == Truth::True) return b;
    }
    return std::nullopt;
}

std::size_t pair_coloring(const LnModel& v, const Formula& phi) {
    if (v.size() < 3) throw PreconditionError("pair_coloring: chain must have length >= 3");
    LnModel del1 = delete_level(v, 1);
    LnModel del2 = delete_level(v, 2);
    auto w1 = min_witness(del1, phi);
    auto w2 = min_witness(del2, phi);
    if (!w1 || !w2)
        throw PreconditionError("pair_coloring: min_witness undefined on a deleted subchain");
    return *w1 == *w2 ? 0 : 1;
}

// ── ChainColoring ───────────────────────────────────────────────────────────

bool ChainColoring::in_domain(const LnModel& chain) const {
    if (chain.size() != n) return false;
    if (!(chain.signature() == sig)) return false;
    const PartialStructure& top = chain.top();
    for (std::size_t i = 0; i < top.domain_size(); ++i)
        if (top.element_at(i) >= N) return false;
    for (std::size_t i = 0; i < top.domain_size(); ++i) {
        Element b = top.element_at(i);
        if (fulfills(chain, phi, {{phi_var, b}}).truth == Truth::True) return true;
    }
    return false;
}

std::optional<std::size_t> ChainColoring::color(const LnModel& chain) const {
    if (std::holds_alternative<ConstantRule>(rule))
        return std::get<ConstantRule>(rule).color;
    if (std::holds_alternative<MinWitnessPairRule>(rule)) {
        if (chain.size() < 3) return std::nullopt;
        auto w1 = min_witness(delete_level(chain, 1), phi);
        auto w2 = min_witness(delete_level(chain, 2), phi);
        return w1 == w2 ? 0 : 1;  // optionals compare as values-or-absence
    }
    const auto& table = std::get<TableRule>(rule).table;
    auto it = table.find(chain_key(chain));
    if (it == table.end()) return std::nullopt;
    return it->second;
}

// ── StructurePool ───────────────────────────────────────────────────────────

namespace {

// Enumerate every partial structure over one fixed domain, canonical order.
void structures_on_domain(const Signature& sig, const std::vector<Element>& domain,
                          std::size_t guard, std::vector<PartialStructure>& out) {
    // constants: odometer over domain^|constants|
    std::vector<std::size_t> cidx(sig.constants.size(), 0);
    for (;;) {
        std::map<std::string, Element> consts;
        for (std::size_t i = 0; i < sig.constants.size(); ++i)
            consts[sig.constants[i]] = domain[cidx[i]];

        // relations: bitmask per relation over tuple list
        std::vector<std::vector<std::vector<Element>>> rel_tuples;
        for (const auto& r : sig.relations) {
            std::vector<std::vector<Element>> tuples;
            std::vector<std::size_t> idx(r.arity, 0);
            for (;;) {
                std::vector<Element> t(r.arity);
                for (std::size_t q = 0; q < r.arity; ++q) t[q] = domain[idx[q]];
                tuples.push_back(std::move(t));
                std::size_t pos = r.arity;
                bool done = true;
                while (pos > 0) {
                    --pos;
                    if (++idx[pos] < domain.size()) {
                        done = false;
                        break;
                    }
                    idx[pos] = 0;
                }
                if (done) break;
            }
            rel_tuples.push_back(std::move(tuples));
        }
        std::vector<std::size_t> rel_mask(sig.relations.size(), 0);
        auto rel_done = [&]() {
            for (std::size_t i = 0; i < sig.relations.size(); ++i) {
                if (rel_tuples[i].size() >= 20)
                    throw GuardExceeded("structure enumeration: relation table too large");
                if (++rel_mask[i] < (std::size_t(1) << rel_tuples[i].size())) return false;
                rel_mask[i] = 0;
            }
            return true;
        };

        for (;;) {
            std::map<std::string, std::set<std::vector<Element>>> rels;
            for (std::size_t i = 0; i < sig.relations.size(); ++i) {
                auto& set = rels[sig.relations[i].name];
                for (std::size_t t = 0; t < rel_tuples[i].size(); ++t)
                    if (rel_mask[i] & (std::size_t(1) << t)) set.insert(rel_tuples[i][t]);
            }

            // functions: odometer over (|D|+1)^{tuples} per function
            std::vector<std::vector<std::vector<Element>>> fn_tuples;
            for (const auto& f : sig.functions) {
                std::vector<std::vector<Element>> tuples;
                std::vector<std::size_t> idx(f.arity, 0);
                for (;;) {
                    std::vector<Element> t(f.arity);
                    for (std::size_t q = 0; q < f.arity; ++q) t[q] = domain[idx[q]];
                    tuples.push_back(std::move(t));
                    std::size_t pos = f.arity;
                    bool done = true;
                    while (pos > 0) {
                        --pos;
                        if (++idx[pos] < domain.size()) {
                            done = false;
                            break;
                        }
                        idx[pos] = 0;
                    }
                    if (done) break;
                }
                fn_tuples.push_back(std::move(tuples));
            }
            std::vector<std::vector<std::size_t>> fn_choice;  // 0 = undefined, 1+i = domain[i]
            for (auto& tuples : fn_tuples) fn_choice.emplace_back(tuples.size(), 0);
            auto fn_done = [&]() {
                for (std::size_t i = 0; i < fn_choice.size(); ++i)
                    for (std::size_t t = 0; t < fn_choice[i].size(); ++t) {
                        if (++fn_choice[i][t] <= domain.size()) return false;
                        fn_choice[i][t] = 0;
                    }
                return true;
            };

            for (;;) {
                std::map<std::string, std::map<std::vector<Element>, Element>> funs;
                for (std::size_t i = 0; i < sig.functions.size(); ++i) {
                    auto& graph = funs[sig.functions[i].name];
                    for (std::size_t t = 0; t < fn_tuples[i].size(); ++t)
                        if (fn_choice[i][t] > 0)
                            graph[fn_tuples[i][t]] = domain[fn_choice[i][t] - 1];
                }
                out.push_back(PartialStructure::make_explicit(sig, domain, consts, rels, funs));
                if (out.size() > guard)
                    throw GuardExceeded("structure enumeration guard exceeded");
                if (sig.functions.empty() || fn_done()) break;
            }
            if (sig.relations.empty() || rel_done()) break;
        }

        std::size_t pos = sig.constants.size();
        bool done = true;
        while (pos > 0) {
            --pos;
            if (++cidx[pos] < domain.size()) {
                done = false;
                break;
            }
            cidx[pos] = 0;
        }
        if (done || sig.constants.empty()) break;
    }
}

void nonempty_subsets(const std::vector<Element>& universe,
                      std::vector<std::vector<Element>>& out) {
    const std::size_t n = universe.size();
    for (std::size_t mask = 1; mask < (std::size_t(1) << n); ++mask) {
        std::vector<Element> subset;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t(1) << i)) subset.push_back(universe[i]);
        out.push_back(std::move(subset));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
}

}  // namespace

StructurePool StructurePool::over_universe(const Signature& sig,
                                           const std::vector<Element>& universe,
                                           std::size_t max_structures) {
    sig.validate();
    StructurePool pool;
    std::vector<std::vector<Element>> subsets;
    nonempty_subsets(universe, subsets);
    for (const auto& d : subsets) structures_on_domain(sig, d, max_structures, pool.structures);
    pool.successors.resize(pool.structures.size());
    for (std::size_t i = 0; i < pool.structures.size(); ++i)
        for (std::size_t j = 0; j < pool.structures.size(); ++j)
            if (is_substructure(pool.structures[i], pool.structures[j]))
                pool.successors[i].push_back(j);
    return pool;
}

StructurePool StructurePool::segments(const Signature& sig, Element max_top) {
    StructurePool pool;
    for (Element n = 1; n <= max_top; ++n)
        pool.structures.push_back(PartialStructure::segment(n, sig));
    pool.successors.resize(pool.structures.size());
    for (std::size_t i = 0; i < pool.structures.size(); ++i)
        for (std::size_t j = 0; j < pool.structures.size(); ++j)
            if (is_substructure(pool.structures[i], pool.structures[j]))
                pool.successors[i].push_back(j);
    return pool;
}

// ── enumerate_ln_models ─────────────────────────────────────────────────────

std::size_t enumerate_ln_models(const Signature& sig, std::size_t n,
                                const std::vector<Element>& universe, std::size_t max_models,
                                const std::function<void(const LnModel&)>& visit) {
    if (n == 0) throw PreconditionError("enumerate_ln_models: n must be >= 1");
    if (universe.empty()) return 0;
    StructurePool pool = StructurePool::over_universe(sig, universe, max_models * 8 + 1024);

    std::size_t count = 0;
    std::vector<std::size_t> chain;
    auto rec = [&](auto&& self) -> void {
        if (chain.size() == n) {
            std::vector<PartialStructure> levels;
            for (auto i : chain) levels.push_back(pool.structures[i]);
            LnModel m = LnModel::create(std::move(levels));
            if (++count > max_models) throw GuardExceeded("enumerate_ln_models: cap exceeded");
            visit(m);
            return;
        }
        if (chain.empty()) {
            for (std::size_t i = 0; i < pool.structures.size(); ++i) {
                chain.push_back(i);
                self(self);
                chain.pop_back();
            }
        } else {
            for (std::size_t j : pool.successors[chain.back()]) {
                chain.push_back(j);
                self(self);
                chain.pop_back();
            }
        }
    };
    rec(rec);
    return count;
}

std::size_t count_ln_models_relational(const Signature& sig, std::size_t n,
                                       const std::vector<Element>& universe) {
    if (!sig.functions.empty())
        throw PreconditionError("count_ln_models_relational: relational signatures only");
    // Structures chain iff domains nest and relations agree on the smaller
    // domain; free choices are the constants of A_0 and, per level, the
    // relation bits on new tuples.
    std::vector<std::vector<Element>> subsets;
    nonempty_subsets(universe, subsets);
    auto tuple_count = [&](std::size_t dom, std::size_t arity) {
        std::size_t c = 1;
        for (std::size_t i = 0; i < arity; ++i) c *= dom;
        return c;
    };
    std::function<std::size_t(std::size_t, std::size_t)> chains_from =
        [&](std::size_t idx, std::size_t remaining) -> std::size_t {
        if (remaining == 0) return 1;
        std::size_t total = 0;
        for (std::size_t jdx = 0; jdx < subsets.size(); ++jdx) {
            const auto& small = subsets[idx];
            const auto& big = subsets[jdx];
            if (!std::includes(big.begin(), big.end(), small.begin(), small.end())) continue;
            std::size_t fresh_bits = 0;
            for (const auto& r : sig.relations)
                fresh_bits += tuple_count(big.size(), r.arity) - tuple_count(small.size(), r.arity);
            std::size_t ways = std::size_t(1) << fresh_bits;
            total += ways * chains_from(jdx, remaining - 1);
        }
        return total;
    };
    std::size_t total = 0;
    for (std::size_t idx = 0; idx < subsets.size(); ++idx) {
        std::size_t bits = 0;
        for (const auto& r : sig.relations) bits += tuple_count(subsets[idx].size(), r.arity);
        std::size_t consts = 1;
        for (std::size_t c = 0; c < sig.constants.size(); ++c) consts *= subsets[idx].size();
        total += consts * (std::size_t(1) << bits) * chains_from(idx, n - 1);
    }
    return total;
}

// ── Boundedness audit ───────────────────────────────────────────────────────

namespace {

void for_each_chain(const StructurePool& pool, std::size_t len, std::size_t max_chains,
                    const std::function<void(const std::vector<std::size_t>&)>& fn) {
    std::size_t count = 0;
    std::vector<std::size_t> chain;
    auto rec = [&](auto&& self) -> void {
        if (chain.size() == len) {
            if (++count > max_chains) throw GuardExceeded("chain enumeration cap exceeded");
            fn(chain);
            return;
        }
        if (chain.empty()) {
            for (std::size_t i = 0; i < pool.structures.size(); ++i) {
                chain.push_back(i);
                self(self);
                chain.pop_back();
            }
        } else {
            for (std::size_t j : pool.successors[chain.back()]) {
                chain.push_back(j);
                self(self);
                chain.pop_back();
            }
        }
    };
    rec(rec);
}

LnModel chain_from_indices(const StructurePool& pool, const std::vector<std::size_t>& idxs) {
    std::vector<PartialStructure> levels;
    for (auto i : idxs) levels.push_back(pool.structures[i]);
    return LnModel::create(std::move(levels));
}

LnModel subchain(const LnModel& v, const std::vector<std::size_t>& picks) {
    std::vector<PartialStructure> levels;
    for (auto i : picks) levels.push_back(v.level(i));
    return LnModel::create(std::move(levels));
}

}  // namespace

BoundednessReport is_bounded_coloring(const ChainColoring& c, const AuditConfig& cfg) {
    BoundednessReport rep;
    Formula exists_phi = Formula::exists(c.phi_var, c.phi);

    // (1)+(2): totality and range on the enumerated domain slice
    for_each_chain(cfg.pool, c.n, cfg.max_chains, [&](const std::vector<std::size_t>& idxs) {
        LnModel chain = chain_from_indices(cfg.pool, idxs);
        if (!c.in_domain(chain)) return;
        ++rep.chains_checked;
        auto col = c.color(chain);
        if (!col) {
            rep.domain_violations.push_back("rule undefined on domain member " + chain_key(chain));
            return;
        }
        if (*col >= c.r)
            rep.domain_violations.push_back("color out of range on " + chain_key(chain));
    });

    // (3): collapse invariance
    for (std::size_t k = c.n; k <= cfg.k_max; ++k) {
        for_each_chain(cfg.pool, k, cfg.max_chains, [&](const std::vector<std::size_t>& idxs) {
            LnModel chain = chain_from_indices(cfg.pool, idxs);
            // all n-subtuples must be in the domain
            bool eligible = true;
            for_each_combination(k, c.n, [&](const std::vector<std::size_t>& picks) {
                if (!c.in_domain(subchain(chain, picks))) {
                    eligible = false;
                    return false;
                }
                return true;
            });
            if (!eligible) return;
            if (!fulfills(chain, exists_phi, {}).defined() || depth(exists_phi) + 2 > k) {
                rep.skipped.push_back("collapse precondition fails on " + chain_key(chain));
                return;
            }
            CollapseResult r = f_collapse(chain, exists_phi);
            for_each_combination(k, c.n, [&](const std::vector<std::size_t>& picks) {
                ++rep.subsequences_checked;
                LnModel asub = subchain(chain, picks);
                LnModel bsub = subchain(r.collapsed, picks);
                std::optional<std::size_t> ca =
                    c.in_domain(asub) ? c.color(asub) : std::nullopt;
                std::optional<std::size_t> cb =
                    c.in_domain(bsub) ? c.color(bsub) : std::nullopt;
                if (ca != cb) {
                    rep.collapse_violations.push_back(
                        "color changed under collapse on " + chain_key(chain) + " picks " +
                        [&] {
                            std::string s;
                            for (auto p : picks) s += std::to_string(p) + ",";
                            return s;
                        }());
                }
                return true;
            });
        });
    }
    return rep;
}

// ── find_homog_subseq ───────────────────────────────────────────────────────

SubseqSearchResult find_homog_subseq(const ChainColoring& c, std::size_t k, std::size_t m,
                                     const StructurePool& pool, std::size_t max_nodes) {
    SubseqSearchResult res{SubseqSearchResult::Status::NoneExists, std::nullopt, std::nullopt, 0};
    std::vector<std::size_t> chain;
    std::optional<std::size_t> color;

    // every n-subsequence ending at the newest level must be in the domain
    // with the established color
    auto new_level_ok = [&]() {
        if (chain.size() < c.n) return true;
        LnModel whole = chain_from_indices(pool, chain);
        bool ok = true;
        for_each_combination(chain.size() - 1, c.n - 1, [&](const std::vector<std::size_t>& pre) {
            std::vector<std::size_t> picks = pre;
            picks.push_back(chain.size() - 1);
            LnModel sub = subchain(whole, picks);
            if (!c.in_domain(sub)) {
                ok = false;
                return false;
            }
            auto col = c.color(sub);
            if (!col || (color && *col != *color)) {
                ok = false;
                return false;
            }
            if (!color) color = col;
            return true;
        });
        return ok;
    };

    std::function<bool()> dfs = [&]() -> bool {
        if (++res.nodes_visited > max_nodes) {
            res.status = SubseqSearchResult::Status::BoundExceeded;
            return true;
        }
        if (!chain.empty()) {
            std::size_t a0_size = pool.structures[chain[0]].domain_size();
            std::size_t needed = std::max<std::size_t>(k, a0_size + m + 1);
            if (chain.size() >= needed && chain.size() >= c.n) {
                res.status = SubseqSearchResult::Status::Found;
                res.chain = chain_from_indices(pool, chain);
                res.color = color;
                return true;
            }
            if (chain.size() >= needed) return false;  // long enough but too few levels colored
        }
        const std::vector<std::size_t>* cands;
        std::vector<std::size_t> all;
        if (chain.empty()) {
            all.resize(pool.structures.size());
            for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
            cands = &all;
        } else {
            cands = &pool.successors[chain.back()];
        }
        for (std::size_t j : *cands) {
            auto saved_color = color;
            chain.push_back(j);
            if (new_level_ok() && dfs()) return true;
            chain.pop_back();
            color = saved_color;
        }
        return false;
    };
    dfs();
    return res;
}

// ── BCP ─────────────────────────────────────────────────────────────────────

BigInt default_bcp_universe_bound(const BcpInstance& inst) {
    Formula exists_phi = Formula::exists(inst.phi_var, inst.phi);
    ColParams p{inst.k, inst.j, length(exists_phi), inst.sig.size()};
    return col_bound(p) + 1;
}

BcpReport check_bcp_instance(const BcpInstance& inst, const AuditConfig& cfg,
                             const std::optional<ChainColoring>& supplied,
                             std::size_t max_enumerated) {
    if (inst.k < inst.n || inst.k < inst.sig.size() + inst.m)
        throw PreconditionError("check_bcp_instance: k must be >= n and >= |L| + m");
    if (inst.j != inst.sig.max_function_arity())
        throw PreconditionError("check_bcp_instance: j must equal the max function arity");

    BcpReport rep;
    auto run_one = [&](const ChainColoring& F, const std::string& desc) {
        ++rep.colorings_checked;
        auto audit = is_bounded_coloring(F, cfg);
        if (!audit.ok()) {
            ++rep.colorings_unbounded;
            rep.outcomes.push_back({desc, SubseqSearchResult::Status::NoneExists, std::nullopt,
                                    "not a bounded coloring; skipped"});
            return;
        }
        auto sr = find_homog_subseq(F, inst.k, inst.m, cfg.pool);
        BcpOutcome out{desc, sr.status, sr.color, ""};
        if (sr.status == SubseqSearchResult::Status::Found)
            out.detail = chain_key(*sr.chain);
        rep.outcomes.push_back(std::move(out));
    };

    if (supplied) {
        run_one(*supplied, "supplied");
        return rep;
    }

    // enumerated mode: table colorings over the audited n-chain domain
    std::vector<std::string> keys;
    ChainColoring probe{inst.n, inst.phi, inst.phi_var, inst.sig, inst.r,
                        inst.N, ConstantRule{0}};
    for_each_chain(cfg.pool, inst.n, cfg.max_chains, [&](const std::vector<std::size_t>& idxs) {
        LnModel chain = chain_from_indices(cfg.pool, idxs);
        if (probe.in_domain(chain)) keys.push_back(chain_key(chain));
    });
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

    double total = 1;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        total *= static_cast<double>(inst.r);
        if (total > static_cast<double>(max_enumerated))
            throw GuardExceeded("check_bcp_instance: coloring space exceeds the guard");
    }
    std::vector<std::size_t> colors(keys.size(), 0);
    for (;;) {
        TableRule tr;
        for (std::size_t i = 0; i < keys.size(); ++i) tr.table[keys[i]] = colors[i];
        ChainColoring F{inst.n, inst.phi, inst.phi_var, inst.sig, inst.r, inst.N, tr};
        std::string desc = "table[";
        for (auto ccol : colors) desc += std::to_string(ccol);
        desc += "]";
        run_one(F, desc);
        std::size_t pos = keys.size();
        bool done = true;
        while (pos > 0) {
            --pos;
            if (++colors[pos] < inst.r) {
                done = false;
                break;
            }
            colors[pos] = 0;
        }
        if (done || keys.empty()) break;
    }
    return rep;
}

// ── Completeness probe ──────────────────────────────────────────────────────

ProbeReport completeness_probe(const Formula& phi, std::size_t n, const Signature& sig,
                               const std::vector<Element>& universe, std::size_t max_models) {
    if (depth(phi) >= n)
        throw PreconditionError("completeness_probe: dp(phi) must be < n");
    ProbeReport rep;
    enumerate_ln_models(sig, n, universe, max_models, [&](const LnModel& m) {
        ++rep.chains;
        auto v = fulfills(m, phi, {});
        switch (v.truth) {
            case Truth::True:
                ++rep.defined_true;
                if (!rep.first_true_chain) rep.first_true_chain = chain_key(m);
                break;
            case Truth::False:
                ++rep.defined_false;
                if (!rep.first_false_chain) rep.first_false_chain = chain_key(m);
                break;
            case Truth::Undefined:
                ++rep.undefined;
                break;
        }
    });
    return rep;
}

}  // namespace flab
