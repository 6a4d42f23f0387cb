// Finite partial L-structures: explicit table-backed structures and the
// intensional arithmetic segments M_n (universe {0,…,n−1}, operations defined
// iff the result stays below n). Structures are immutable values sharing
// their payload; copying is cheap.

#ifndef FLAB_STRUCTURE_HPP
#define FLAB_STRUCTURE_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "flab/logic.hpp"

namespace flab {

using Element = std::uint64_t;

// Three-valued outcome of evaluating something over a partial structure.
enum class Truth : std::uint8_t { True, False, Undefined };

// Variable valuation; total on the free variables of whatever it is applied to.
using Assignment = std::map<std::string, Element>;

class PartialStructure {
public:
    // M_n. The signature must be the arithmetic base, optionally enlarged by
    // constants c0, c1, … (interpreted as their index, which must be < n).
    static PartialStructure segment(Element n, Signature sig = arithmetic_signature());

    static PartialStructure make_explicit(
        Signature sig, std::vector<Element> domain,
        std::map<std::string, Element> constants,
        std::map<std::string, std::set<std::vector<Element>>> relations,
        std::map<std::string, std::map<std::vector<Element>, Element>> functions);

    const Signature& signature() const;

    bool is_segment() const;
    Element segment_bound() const;  // n for segments; UsageError otherwise

    std::size_t domain_size() const;
    Element element_at(std::size_t idx) const;  // ascending numeric order
    bool contains(Element e) const;
    Element min_element() const;
    // Materialized domain; guarded against huge segments.
    std::vector<Element> domain_vector() const;

    Element const_value(const std::string& name) const;
    std::optional<Element> fun_value(const std::string& name,
                                     const std::vector<Element>& args) const;
    bool rel_holds(const std::string& name, const std::vector<Element>& args) const;

    // Explicit structure with the universe cut down to `keep` and every
    // interpretation restricted (function values surviving only when they
    // stay inside `keep`). Constants must all lie in `keep`.
    PartialStructure restrict_to(const std::set<Element>& keep) const;

    // Explicit copy of a segment (guarded); identity for explicit structures.
    PartialStructure materialize() const;

    // Rename elements through a bijection given as an ordered map.
    PartialStructure rename(const std::map<Element, Element>& to) const;

    bool operator==(const PartialStructure& other) const;
    bool operator!=(const PartialStructure& other) const { return !(*this == other); }

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    explicit PartialStructure(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
};

// make_segment(n): the spec-level constructor; n = 0 is rejected.
PartialStructure make_segment(Element n);

// Bottom-up evaluation; undefined propagates strictly. An unassigned variable
// is a UsageError, distinct from undefinedness.
std::optional<Element> eval_term(const PartialStructure& s, const Term& t, const Assignment& a);

// Undefined iff some argument term is undefined, classical lookup otherwise.
Truth satisfies_atomic(const PartialStructure& s, const Formula& atom, const Assignment& a);

// Def 2.3: usual substructure (interpretations agree on the small domain) and
// additionally every function of `big` is defined on every tuple from
// `small`'s domain. Throws SignatureError when signatures differ.
bool is_substructure(const PartialStructure& small, const PartialStructure& big);

// Every function defined on every tuple; equivalently is_substructure(s, s).
bool is_total(const PartialStructure& s);

// Witnessing bijection preserving constants, relations and partial-function
// graphs (definedness included), or nullopt. Backtracking; guarded by domain
// size for explicit structures.
std::optional<std::map<Element, Element>> is_isomorphic(const PartialStructure& a,
                                                        const PartialStructure& b);

// Exact check that g is an isomorphism witness between a and b.
bool is_isomorphism_witness(const PartialStructure& a, const PartialStructure& b,
                            const std::map<Element, Element>& g);

// Debugging utility only: classical satisfaction over one partial structure,
// taking the restrictive reading of quantifiers (any undefined instance makes
// the quantified formula undefined). Total structures get ordinary classical
// semantics.
Truth classical_satisfies(const PartialStructure& s, const Formula& f, const Assignment& a);

}  // namespace flab

#endif
