#include "flab/fulfillment.hpp"

#include <algorithm>

#include "flab/parser.hpp"

namespace flab {

// ── LnModel ─────────────────────────────────────────────────────────────────

LnModel LnModel::create(std::vector<PartialStructure> levels) {
    if (levels.empty()) throw PreconditionError("LnModel: empty sequence");
    const Signature& sig = levels[0].signature();
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (!(levels[i].signature() == sig))
            throw SignatureError("LnModel: mixed signatures at level " + std::to_string(i));
    for (std::size_t i = 0; i + 1 < levels.size(); ++i)
        if (!is_substructure(levels[i], levels[i + 1]))
            throw ChainError("LnModel: A_i is not a substructure of A_{i+1}", i);
    auto store = std::make_shared<std::vector<PartialStructure>>(std::move(levels));
    std::size_t n = store->size();
    return LnModel(std::move(store), 0, n);
}

LnModel LnModel::slice(std::size_t i, std::size_t j) const {
    if (i > j || j >= len_) throw PreconditionError("slice: index out of range");
    return LnModel(store_, off_ + i, j - i + 1);
}

std::vector<PartialStructure> LnModel::levels() const {
    std::vector<PartialStructure> out;
    out.reserve(len_);
    for (std::size_t i = 0; i < len_; ++i) out.push_back(level(i));
    return out;
}

bool LnModel::operator==(const LnModel& other) const {
    if (len_ != other.len_) return false;
    for (std::size_t i = 0; i < len_; ++i)
        if (!(level(i) == other.level(i))) return false;
    return true;
}

LnModel new_ln_model(std::vector<PartialStructure> levels) {
    return LnModel::create(std::move(levels));
}

LnModel end_extend(const LnModel& v, const PartialStructure& top) {
    if (!is_substructure(v.top(), top))
        throw ChainError("end_extend: old top is not a substructure of the new top",
                         v.size() - 1);
    auto levels = v.levels();
    levels.push_back(top);
    return LnModel::create(std::move(levels));
}

// ── Eligibility ─────────────────────────────────────────────────────────────

LeastIndex least_term_index(const LnModel& v, const Formula& f, const Assignment& a) {
    const std::size_t n = v.size();
    const std::size_t dp = depth(f);
    // Quantifier-free formulas anchor at the top, so their terms may reach
    // A_{n−1}; quantified ones need everything strictly below the top and the
    // inclusive dp bound of the paper's proofs (axiom 7 takes i = n−dp−1).
    if (n < 2 || dp + 1 > n) return {std::nullopt, UndefReason::NoEligibleIndex};
    std::size_t upper;
    if (dp == 0) {
        upper = n - 2;
    } else {
        if (n < 3) return {std::nullopt, UndefReason::NoEligibleIndex};
        upper = std::min(n - dp - 1, n - 3);
    }

    auto terms = instantiable_terms(f);
    auto all_defined_at = [&](std::size_t lvl) {
        const PartialStructure& s = v.level(lvl);
        for (const auto& t : terms) {
            auto val = eval_term(s, t, a);
            if (!val || !s.contains(*val)) return false;
        }
        return true;
    };

    for (std::size_t i = 0; i <= upper; ++i)
        if (all_defined_at(i + 1)) return {i, UndefReason::None};

    for (std::size_t lvl = upper + 2; lvl < n; ++lvl)
        if (all_defined_at(lvl)) return {std::nullopt, UndefReason::ParameterInTopModel};
    return {std::nullopt, UndefReason::TermUndefined};
}

// ── Fulfillment ─────────────────────────────────────────────────────────────

void FulfillTrace::add(std::size_t depth, const std::string& line) {
    if (lines.size() >= limit) return;
    lines.push_back(std::string(2 * depth, ' ') + line);
}

namespace {

FulfillmentVerdict fulfills_rec(const LnModel& v, const Formula& f, const Assignment& a,
                                FulfillTrace* tr, std::size_t td) {
    auto lti = least_term_index(v, f, a);
    if (!lti.index) {
        if (tr) tr->add(td, render_formula(f) + ": undefined (preamble fails)");
        return {Truth::Undefined, lti.reason};
    }
    const std::size_t i = *lti.index;
    const std::size_t n = v.size();

    switch (f.kind()) {
        case FormulaKind::Equal:
        case FormulaKind::Relation: {
            Truth t = satisfies_atomic(v.top(), f, a);
            // terms defined in A_{i+1} stay defined (same values) in the top
            if (tr)
                tr->add(td, render_formula(f) + " [i=" + std::to_string(i) + "] -> " +
                                (t == Truth::True ? "true" : "false"));
            return {t, UndefReason::None};
        }
        case FormulaKind::Not: {
            auto r = fulfills_rec(v, f.child(), a, tr, td + 1);
            return {r.truth == Truth::True ? Truth::False : Truth::True, UndefReason::None};
        }
        case FormulaKind::And: {
            auto l = fulfills_rec(v, f.child(0), a, tr, td + 1);
            if (l.truth != Truth::True) return {Truth::False, UndefReason::None};
            auto r = fulfills_rec(v, f.child(1), a, tr, td + 1);
            return {r.truth == Truth::True ? Truth::True : Truth::False, UndefReason::None};
        }
        case FormulaKind::Or: {
            auto l = fulfills_rec(v, f.child(0), a, tr, td + 1);
            if (l.truth == Truth::True) return {Truth::True, UndefReason::None};
            auto r = fulfills_rec(v, f.child(1), a, tr, td + 1);
            return {r.truth == Truth::True ? Truth::True : Truth::False, UndefReason::None};
        }
        case FormulaKind::Exists: {
            // witness from A_{i+1}, recursion on the slice [i+1, n−1]
            LnModel rest = v.slice(i + 1, n - 1);
            const PartialStructure& pool = v.level(i + 1);
            for (std::size_t bi = 0; bi < pool.domain_size(); ++bi) {
                Element b = pool.element_at(bi);
                Assignment ext = a;
                ext[f.name()] = b;
                auto r = fulfills_rec(rest, f.child(), ext, nullptr, td + 1);
                if (r.truth == Truth::True) {
                    if (tr)
                        tr->add(td, "exists " + f.name() + " [i=" + std::to_string(i) +
                                        "]: witness " + f.name() + "=" + std::to_string(b));
                    return {Truth::True, UndefReason::None};
                }
            }
            if (tr)
                tr->add(td, "exists " + f.name() + " [i=" + std::to_string(i) +
                                "]: no witness in A_" + std::to_string(i + 1));
            return {Truth::False, UndefReason::None};
        }
        case FormulaKind::Forall: {
            // instances from ∪_{j∈[i, n−dp(f)−1]} A_j = A_{n−dp(f)−1}; each
            // b is evaluated against the suffix starting at its level j_b, so
            // witnesses inside the body come from one level above j_b — this
            // is how the Lemma 2.2 proof reads case 6 (pools M_{m_{j+1}})
            const std::size_t cap = n - depth(f) - 1;
            const PartialStructure& pool = v.level(cap);
            for (std::size_t bi = 0; bi < pool.domain_size(); ++bi) {
                Element b = pool.element_at(bi);
                std::size_t jb = i;
                while (!v.level(jb).contains(b)) ++jb;  // jb <= cap
                Assignment ext = a;
                ext[f.name()] = b;
                auto r = fulfills_rec(v.slice(jb, n - 1), f.child(), ext, nullptr, td + 1);
                if (r.truth != Truth::True) {
                    if (tr)
                        tr->add(td, "forall " + f.name() + " [i=" + std::to_string(i) +
                                        ", j<=" + std::to_string(cap) + "]: fails at " +
                                        f.name() + "=" + std::to_string(b) + " (level " +
                                        std::to_string(jb) + ")");
                    return {Truth::False, UndefReason::None};
                }
            }
            if (tr)
                tr->add(td, "forall " + f.name() + " [i=" + std::to_string(i) +
                                ", j<=" + std::to_string(cap) + "]: all instances hold");
            return {Truth::True, UndefReason::None};
        }
    }
    return {Truth::Undefined, UndefReason::None};
}

}  // namespace

FulfillmentVerdict fulfills(const LnModel& v, const Formula& f, const Assignment& a,
                            FulfillTrace* trace) {
    return fulfills_rec(v, f, a, trace, 0);
}

// ── Keys and isomorphism ────────────────────────────────────────────────────

namespace {

void append_structure_key(const PartialStructure& s, std::string& out) {
    if (s.is_segment()) {
        out += "seg:" + std::to_string(s.segment_bound());
        return;
    }
    const Signature& sig = s.signature();
    out += "{d=[";
    auto dom = s.domain_vector();
    for (std::size_t i = 0; i < dom.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(dom[i]);
    }
    out += "];c{";
    for (const auto& c : sig.constants) out += c + ":" + std::to_string(s.const_value(c)) + ";";
    out += "}r{";
    for (const auto& r : sig.relations) {
        out += r.name + ":";
        std::vector<Element> tuple(r.arity, 0);
        std::vector<std::size_t> idx(r.arity, 0);
        bool done = dom.empty();
        while (!done) {
            for (std::size_t i = 0; i < r.arity; ++i) tuple[i] = dom[idx[i]];
            if (s.rel_holds(r.name, tuple)) {
                out += '(';
                for (std::size_t i = 0; i < r.arity; ++i) {
                    if (i) out += ',';
                    out += std::to_string(tuple[i]);
                }
                out += ')';
            }
            std::size_t pos = r.arity;
            done = true;
            while (pos > 0) {
                --pos;
                if (++idx[pos] < dom.size()) {
                    done = false;
                    break;
                }
                idx[pos] = 0;
            }
        }
        out += ';';
    }
    out += "}f{";
    for (const auto& fsym : sig.functions) {
        out += fsym.name + ":";
        std::vector<Element> tuple(fsym.arity, 0);
        std::vector<std::size_t> idx(fsym.arity, 0);
        bool done = dom.empty();
        while (!done) {
            for (std::size_t i = 0; i < fsym.arity; ++i) tuple[i] = dom[idx[i]];
            auto val = s.fun_value(fsym.name, tuple);
            if (val) {
                out += '(';
                for (std::size_t i = 0; i < fsym.arity; ++i) {
                    if (i) out += ',';
                    out += std::to_string(tuple[i]);
                }
                out += ")=" + std::to_string(*val);
            }
            std::size_t pos = fsym.arity;
            done = true;
            while (pos > 0) {
                --pos;
                if (++idx[pos] < dom.size()) {
                    done = false;
                    break;
                }
                idx[pos] = 0;
            }
        }
        out += ';';
    }
    out += '}';
}

}  // namespace

std::string chain_key(const LnModel& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += '|';
        append_structure_key(v.level(i), out);
    }
    out += ']';
    return out;
}

bool is_ln_isomorphism_witness(const LnModel& a, const LnModel& b,
                               const std::map<Element, Element>& g) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& ai = a.level(i);
        const auto& bi = b.level(i);
        if (ai.domain_size() != bi.domain_size()) return false;
        std::map<Element, Element> restricted;
        for (std::size_t k = 0; k < ai.domain_size(); ++k) {
            Element x = ai.element_at(k);
            auto it = g.find(x);
            if (it == g.end() || !bi.contains(it->second)) return false;
            restricted[x] = it->second;
        }
        if (!is_isomorphism_witness(ai, bi, restricted)) return false;
    }
    return true;
}

}  // namespace flab
