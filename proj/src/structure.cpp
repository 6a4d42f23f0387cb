#include "flab/structure.hpp"

#include <algorithm>
#include <functional>
#include <limits>

namespace flab {

namespace {

constexpr Element kMaterializeGuard = 1u << 22;

bool parse_indexed_constant(const std::string& name, Element& out) {
    if (name.size() < 2 || name[0] != 'c') return false;
    Element v = 0;
    for (std::size_t i = 1; i < name.size(); ++i) {
        char ch = name[i];
        if (ch < '0' || ch > '9') return false;
        v = v * 10 + static_cast<Element>(ch - '0');
    }
    out = v;
    return true;
}

void for_each_tuple(const std::vector<Element>& pool, std::size_t arity,
                    const std::function<bool(const std::vector<Element>&)>& fn) {
    std::vector<Element> tuple(arity, 0);
    std::vector<std::size_t> idx(arity, 0);
    if (pool.empty()) return;
    for (;;) {
        for (std::size_t i = 0; i < arity; ++i) tuple[i] = pool[idx[i]];
        if (!fn(tuple)) return;
        std::size_t pos = arity;
        while (pos > 0) {
            --pos;
            if (++idx[pos] < pool.size()) break;
            idx[pos] = 0;
            if (pos == 0) return;
        }
        if (arity == 0) return;
    }
}

}  // namespace

struct PartialStructure::Impl {
    Signature sig;
    bool segment = false;

    // segment payload
    Element bound = 0;

    // explicit payload
    std::vector<Element> domain;  // sorted, unique
    std::map<std::string, Element> constants;
    std::map<std::string, std::set<std::vector<Element>>> relations;
    std::map<std::string, std::map<std::vector<Element>, Element>> functions;
};

PartialStructure PartialStructure::segment(Element n, Signature sig) {
    if (n == 0) throw PreconditionError("segment: empty domain disallowed (n must be >= 1)");
    sig.validate();
    if (!sig.arithmetic_base || !sig.find_function("S") || !sig.find_function("+") ||
        !sig.find_function("*") || !sig.find_relation("<") || !sig.has_constant("0"))
        throw SignatureError("segment structures need the arithmetic base signature");
    for (const auto& c : sig.constants) {
        if (c == "0") continue;
        Element v = 0;
        if (!parse_indexed_constant(c, v))
            throw SignatureError("segment cannot interpret constant '" + c + "'");
        if (v >= n)
            throw SignatureError("constant '" + c + "' falls outside the segment universe");
    }
    auto impl = std::make_shared<Impl>();
    impl->sig = std::move(sig);
    impl->segment = true;
    impl->bound = n;
    return PartialStructure(std::move(impl));
}

PartialStructure PartialStructure::make_explicit(
    Signature sig, std::vector<Element> domain, std::map<std::string, Element> constants,
    std::map<std::string, std::set<std::vector<Element>>> relations,
    std::map<std::string, std::map<std::vector<Element>, Element>> functions) {
    sig.validate();
    std::sort(domain.begin(), domain.end());
    domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
    if (domain.empty()) throw PreconditionError("explicit structure: empty domain disallowed");
    auto in_domain = [&](Element e) {
        return std::binary_search(domain.begin(), domain.end(), e);
    };
    for (const auto& c : sig.constants) {
        auto it = constants.find(c);
        if (it == constants.end())
            throw SignatureError("constant '" + c + "' is not interpreted");
        if (!in_domain(it->second))
            throw SignatureError("constant '" + c + "' interpreted outside the domain");
    }
    for (const auto& [name, _] : constants)
        if (!sig.has_constant(name)) throw SignatureError("undeclared constant: " + name);
    for (const auto& [name, tuples] : relations) {
        const auto* rel = sig.find_relation(name);
        if (!rel) throw SignatureError("undeclared relation: " + name);
        for (const auto& t : tuples) {
            if (t.size() != rel->arity)
                throw SignatureError("relation tuple arity mismatch for " + name);
            for (Element e : t)
                if (!in_domain(e))
                    throw SignatureError("relation tuple outside the domain for " + name);
        }
    }
    for (const auto& [name, graph] : functions) {
        const auto* fn = sig.find_function(name);
        if (!fn) throw SignatureError("undeclared function: " + name);
        for (const auto& [t, val] : graph) {
            if (t.size() != fn->arity)
                throw SignatureError("function tuple arity mismatch for " + name);
            for (Element e : t)
                if (!in_domain(e))
                    throw SignatureError("function tuple outside the domain for " + name);
            if (!in_domain(val))
                throw SignatureError("function value outside the domain for " + name);
        }
    }
    auto impl = std::make_shared<Impl>();
    impl->sig = std::move(sig);
    impl->domain = std::move(domain);
    impl->constants = std::move(constants);
    impl->relations = std::move(relations);
    impl->functions = std::move(functions);
    return PartialStructure(std::move(impl));
}

const Signature& PartialStructure::signature() const { return impl_->sig; }
bool PartialStructure::is_segment() const { return impl_->segment; }

Element PartialStructure::segment_bound() const {
    if (!impl_->segment) throw UsageError("segment_bound on an explicit structure");
    return impl_->bound;
}

std::size_t PartialStructure::domain_size() const {
    return impl_->segment ? static_cast<std::size_t>(impl_->bound) : impl_->domain.size();
}

Element PartialStructure::element_at(std::size_t idx) const {
    if (impl_->segment) return static_cast<Element>(idx);
    return impl_->domain[idx];
}

bool PartialStructure::contains(Element e) const {
    if (impl_->segment) return e < impl_->bound;
    return std::binary_search(impl_->domain.begin(), impl_->domain.end(), e);
}

Element PartialStructure::min_element() const { return element_at(0); }

std::vector<Element> PartialStructure::domain_vector() const {
    if (!impl_->segment) return impl_->domain;
    if (impl_->bound > kMaterializeGuard)
        throw GuardExceeded("domain_vector: segment too large to materialize");
    std::vector<Element> d(impl_->bound);
    for (Element i = 0; i < impl_->bound; ++i) d[i] = i;
    return d;
}

Element PartialStructure::const_value(const std::string& name) const {
    if (impl_->segment) {
        if (name == "0") return 0;
        Element v = 0;
        if (parse_indexed_constant(name, v) && v < impl_->bound) return v;
        throw SignatureError("segment: unknown constant '" + name + "'");
    }
    auto it = impl_->constants.find(name);
    if (it == impl_->constants.end()) throw SignatureError("unknown constant '" + name + "'");
    return it->second;
}

std::optional<Element> PartialStructure::fun_value(const std::string& name,
                                                   const std::vector<Element>& args) const {
    if (impl_->segment) {
        const Element n = impl_->bound;
        for (Element e : args)
            if (e >= n) throw UsageError("fun_value: argument outside the domain");
        Element r = 0;
        if (name == "S") {
            r = args[0] + 1;
        } else if (name == "+") {
            r = args[0] + args[1];
        } else if (name == "*") {
            if (args[0] != 0 && args[1] > (std::numeric_limits<Element>::max)() / args[0])
                return std::nullopt;
            r = args[0] * args[1];
        } else {
            throw SignatureError("segment: unknown function '" + name + "'");
        }
        if (r < n) return r;
        return std::nullopt;
    }
    auto it = impl_->functions.find(name);
    if (it == impl_->functions.end()) {
        if (!impl_->sig.find_function(name))
            throw SignatureError("unknown function '" + name + "'");
        return std::nullopt;  // everywhere-undefined function
    }
    auto jt = it->second.find(args);
    if (jt == it->second.end()) return std::nullopt;
    return jt->second;
}

bool PartialStructure::rel_holds(const std::string& name,
                                 const std::vector<Element>& args) const {
    if (impl_->segment) {
        if (name == "<") return args[0] < args[1];
        throw SignatureError("segment: unknown relation '" + name + "'");
    }
    auto it = impl_->relations.find(name);
    if (it == impl_->relations.end()) {
        if (!impl_->sig.find_relation(name))
            throw SignatureError("unknown relation '" + name + "'");
        return false;  // empty relation
    }
    return it->second.count(args) > 0;
}

PartialStructure PartialStructure::restrict_to(const std::set<Element>& keep) const {
    std::vector<Element> domain;
    for (Element e : keep) {
        if (!contains(e)) throw PreconditionError("restrict_to: element outside the structure");
        domain.push_back(e);
    }
    std::map<std::string, Element> consts;
    for (const auto& c : impl_->sig.constants) {
        Element v = const_value(c);
        if (!keep.count(v))
            throw PreconditionError("restrict_to: constant '" + c + "' not kept");
        consts[c] = v;
    }
    std::map<std::string, std::set<std::vector<Element>>> rels;
    for (const auto& r : impl_->sig.relations) {
        auto& out = rels[r.name];
        for_each_tuple(domain, r.arity, [&](const std::vector<Element>& t) {
            if (rel_holds(r.name, t)) out.insert(t);
            return true;
        });
    }
    std::map<std::string, std::map<std::vector<Element>, Element>> funs;
    for (const auto& f : impl_->sig.functions) {
        auto& out = funs[f.name];
        for_each_tuple(domain, f.arity, [&](const std::vector<Element>& t) {
            auto v = fun_value(f.name, t);
            if (v && keep.count(*v)) out[t] = *v;
            return true;
        });
    }
    return make_explicit(impl_->sig, std::move(domain), std::move(consts), std::move(rels),
                         std::move(funs));
}

PartialStructure PartialStructure::materialize() const {
    if (!impl_->segment) return *this;
    if (impl_->bound > 4096) throw GuardExceeded("materialize: segment too large");
    auto dom = domain_vector();
    std::set<Element> keep(dom.begin(), dom.end());
    return restrict_to(keep);
}

PartialStructure PartialStructure::rename(const std::map<Element, Element>& to) const {
    auto mapped = [&](Element e) {
        auto it = to.find(e);
        if (it == to.end()) throw PreconditionError("rename: element missing from the map");
        return it->second;
    };
    if (impl_->segment) return materialize().rename(to);
    std::vector<Element> domain;
    for (Element e : impl_->domain) domain.push_back(mapped(e));
    std::map<std::string, Element> consts;
    for (const auto& [k, v] : impl_->constants) consts[k] = mapped(v);
    std::map<std::string, std::set<std::vector<Element>>> rels;
    for (const auto& [k, tuples] : impl_->relations) {
        auto& out = rels[k];
        for (const auto& t : tuples) {
            std::vector<Element> m;
            for (Element e : t) m.push_back(mapped(e));
            out.insert(std::move(m));
        }
    }
    std::map<std::string, std::map<std::vector<Element>, Element>> funs;
    for (const auto& [k, graph] : impl_->functions) {
        auto& out = funs[k];
        for (const auto& [t, v] : graph) {
            std::vector<Element> m;
            for (Element e : t) m.push_back(mapped(e));
            out[std::move(m)] = mapped(v);
        }
    }
    return make_explicit(impl_->sig, std::move(domain), std::move(consts), std::move(rels),
                         std::move(funs));
}

bool PartialStructure::operator==(const PartialStructure& other) const {
    if (impl_ == other.impl_) return true;
    if (!(impl_->sig == other.impl_->sig)) return false;
    if (impl_->segment != other.impl_->segment) {
        // Compare a small segment with an explicit structure by materializing.
        const auto& seg = impl_->segment ? *this : other;
        const auto& exp = impl_->segment ? other : *this;
        if (seg.segment_bound() > 4096) return false;
        return seg.materialize() == exp;
    }
    if (impl_->segment) return impl_->bound == other.impl_->bound;
    return impl_->domain == other.impl_->domain && impl_->constants == other.impl_->constants &&
           impl_->relations == other.impl_->relations &&
           impl_->functions == other.impl_->functions;
}

PartialStructure make_segment(Element n) { return PartialStructure::segment(n); }

// ── Term / atomic evaluation ────────────────────────────────────────────────

std::optional<Element> eval_term(const PartialStructure& s, const Term& t, const Assignment& a) {
    switch (t.kind()) {
        case TermKind::Variable: {
            auto it = a.find(t.name());
            if (it == a.end()) throw UsageError("unassigned variable '" + t.name() + "'");
            return it->second;
        }
        case TermKind::Constant:
            return s.const_value(t.name());
        case TermKind::Apply: {
            std::vector<Element> args;
            args.reserve(t.args().size());
            for (const auto& sub : t.args()) {
                auto v = eval_term(s, sub, a);
                if (!v) return std::nullopt;
                if (!s.contains(*v)) return std::nullopt;
                args.push_back(*v);
            }
            return s.fun_value(t.name(), args);
        }
    }
    return std::nullopt;
}

Truth satisfies_atomic(const PartialStructure& s, const Formula& atom, const Assignment& a) {
    if (!atom.is_atomic()) throw PreconditionError("satisfies_atomic: formula is not atomic");
    std::vector<Element> vals;
    vals.reserve(atom.terms().size());
    for (const auto& t : atom.terms()) {
        auto v = eval_term(s, t, a);
        if (!v || !s.contains(*v)) return Truth::Undefined;
        vals.push_back(*v);
    }
    if (atom.kind() == FormulaKind::Equal)
        return vals[0] == vals[1] ? Truth::True : Truth::False;
    return s.rel_holds(atom.name(), vals) ? Truth::True : Truth::False;
}

// ── Substructure / totality / isomorphism ───────────────────────────────────

namespace {

// M_a ⊆ M_b: every S/+/× value on {0..a−1} must land below b.
bool segment_substructure(Element a, Element b) {
    if (a > b) return false;
    Element need = a;  // S(a−1) = a
    if (a >= 1) need = std::max(need, 2 * (a - 1));        // (a−1)+(a−1)
    if (a >= 1) need = std::max(need, (a - 1) * (a - 1));  // (a−1)×(a−1)
    return b > need;
}

}  // namespace

bool is_substructure(const PartialStructure& small, const PartialStructure& big) {
    if (!(small.signature() == big.signature()))
        throw SignatureError("is_substructure: signature mismatch");
    if (small.is_segment() && big.is_segment())
        return segment_substructure(small.segment_bound(), big.segment_bound());

    const Signature& sig = small.signature();
    std::vector<Element> dom = small.domain_vector();
    for (Element e : dom)
        if (!big.contains(e)) return false;
    for (const auto& c : sig.constants)
        if (small.const_value(c) != big.const_value(c)) return false;
    for (const auto& r : sig.relations) {
        bool ok = true;
        for_each_tuple(dom, r.arity, [&](const std::vector<Element>& t) {
            if (small.rel_holds(r.name, t) != big.rel_holds(r.name, t)) {
                ok = false;
                return false;
            }
            return true;
        });
        if (!ok) return false;
    }
    for (const auto& f : sig.functions) {
        bool ok = true;
        for_each_tuple(dom, f.arity, [&](const std::vector<Element>& t) {
            auto bv = big.fun_value(f.name, t);
            if (!bv) {  // Def 2.3 extra condition
                ok = false;
                return false;
            }
            auto sv = small.fun_value(f.name, t);
            if (sv) {
                if (*sv != *bv) {
                    ok = false;
                    return false;
                }
            } else if (small.contains(*bv)) {
                // usual-substructure graph condition: a value inside the small
                // domain must already be defined there
                ok = false;
                return false;
            }
            return true;
        });
        if (!ok) return false;
    }
    return true;
}

bool is_total(const PartialStructure& s) {
    const Signature& sig = s.signature();
    if (sig.functions.empty()) return true;
    if (s.is_segment()) return false;  // S(n−1) always escapes
    std::vector<Element> dom = s.domain_vector();
    for (const auto& f : sig.functions) {
        bool ok = true;
        for_each_tuple(dom, f.arity, [&](const std::vector<Element>& t) {
            if (!s.fun_value(f.name, t)) {
                ok = false;
                return false;
            }
            return true;
        });
        if (!ok) return false;
    }
    return true;
}

bool is_isomorphism_witness(const PartialStructure& a, const PartialStructure& b,
                            const std::map<Element, Element>& g) {
    if (!(a.signature() == b.signature())) return false;
    if (g.size() != a.domain_size() || a.domain_size() != b.domain_size()) return false;
    std::set<Element> image;
    for (const auto& [x, y] : g) {
        if (!a.contains(x) || !b.contains(y)) return false;
        if (!image.insert(y).second) return false;
    }
    const Signature& sig = a.signature();
    auto mapped = [&](Element e) { return g.at(e); };
    for (const auto& c : sig.constants)
        if (mapped(a.const_value(c)) != b.const_value(c)) return false;
    std::vector<Element> dom = a.domain_vector();
    bool ok = true;
    for (const auto& r : sig.relations) {
        for_each_tuple(dom, r.arity, [&](const std::vector<Element>& t) {
            std::vector<Element> mt;
            for (Element e : t) mt.push_back(mapped(e));
            if (a.rel_holds(r.name, t) != b.rel_holds(r.name, mt)) {
                ok = false;
                return false;
            }
            return true;
        });
        if (!ok) return false;
    }
    for (const auto& f : sig.functions) {
        for_each_tuple(dom, f.arity, [&](const std::vector<Element>& t) {
            std::vector<Element> mt;
            for (Element e : t) mt.push_back(mapped(e));
            auto av = a.fun_value(f.name, t);
            auto bv = b.fun_value(f.name, mt);
            if (av.has_value() != bv.has_value()) {
                ok = false;
                return false;
            }
            if (av && mapped(*av) != *bv) {
                ok = false;
                return false;
            }
            return true;
        });
        if (!ok) return false;
    }
    return true;
}

std::optional<std::map<Element, Element>> is_isomorphic(const PartialStructure& a,
                                                        const PartialStructure& b) {
    if (!(a.signature() == b.signature()))
        throw SignatureError("is_isomorphic: signature mismatch");
    if (a.domain_size() != b.domain_size()) return std::nullopt;
    if (a.is_segment() && b.is_segment()) {
        std::map<Element, Element> id;
        for (Element i = 0; i < a.segment_bound(); ++i) id[i] = i;
        return id;
    }
    if (a.is_segment() || b.is_segment()) {
        const auto& seg = a.is_segment() ? a : b;
        if (seg.segment_bound() > 2048)
            throw GuardExceeded("is_isomorphic: segment too large to materialize");
        return a.is_segment() ? is_isomorphic(a.materialize(), b)
                              : is_isomorphic(a, b.materialize());
    }
    if (a.domain_size() > 10) throw GuardExceeded("is_isomorphic: domain too large");

    std::vector<Element> da = a.domain_vector(), db = b.domain_vector();
    std::map<Element, Element> g;
    std::vector<bool> used(db.size(), false);

    // constants force their images
    const Signature& sig = a.signature();
    for (const auto& c : sig.constants) {
        Element x = a.const_value(c), y = b.const_value(c);
        auto it = g.find(x);
        if (it != g.end()) {
            if (it->second != y) return std::nullopt;
            continue;
        }
        std::size_t yi = std::lower_bound(db.begin(), db.end(), y) - db.begin();
        if (used[yi]) return std::nullopt;
        g[x] = y;
        used[yi] = true;
    }

    std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
        if (i == da.size()) return is_isomorphism_witness(a, b, g);
        Element x = da[i];
        if (g.count(x)) return go(i + 1);
        for (std::size_t yi = 0; yi < db.size(); ++yi) {
            if (used[yi]) continue;
            g[x] = db[yi];
            used[yi] = true;
            if (go(i + 1)) return true;
            used[yi] = false;
            g.erase(x);
        }
        return false;
    };
    if (go(0)) return g;
    return std::nullopt;
}

// ── Classical satisfaction (debugging utility) ──────────────────────────────

Truth classical_satisfies(const PartialStructure& s, const Formula& f, const Assignment& a) {
    switch (f.kind()) {
        case FormulaKind::Equal:
        case FormulaKind::Relation:
            return satisfies_atomic(s, f, a);
        case FormulaKind::Not: {
            Truth t = classical_satisfies(s, f.child(), a);
            if (t == Truth::Undefined) return t;
            return t == Truth::True ? Truth::False : Truth::True;
        }
        case FormulaKind::And: {
            Truth l = classical_satisfies(s, f.child(0), a);
            if (l == Truth::Undefined) return l;
            Truth r = classical_satisfies(s, f.child(1), a);
            if (r == Truth::Undefined) return r;
            return (l == Truth::True && r == Truth::True) ? Truth::True : Truth::False;
        }
        case FormulaKind::Or: {
            Truth l = classical_satisfies(s, f.child(0), a);
            if (l == Truth::Undefined) return l;
            Truth r = classical_satisfies(s, f.child(1), a);
            if (r == Truth::Undefined) return r;
            return (l == Truth::True || r == Truth::True) ? Truth::True : Truth::False;
        }
        case FormulaKind::Exists:
        case FormulaKind::Forall: {
            bool universal = f.kind() == FormulaKind::Forall;
            bool hit = false;
            for (std::size_t i = 0; i < s.domain_size(); ++i) {
                Assignment ext = a;
                ext[f.name()] = s.element_at(i);
                Truth t = classical_satisfies(s, f.child(), ext);
                if (t == Truth::Undefined) return Truth::Undefined;  // restrictive reading
                if (universal && t == Truth::False) hit = true;
                if (!universal && t == Truth::True) hit = true;
            }
            if (universal) return hit ? Truth::False : Truth::True;
            return hit ? Truth::True : Truth::False;
        }
    }
    return Truth::Undefined;
}

}  // namespace flab
