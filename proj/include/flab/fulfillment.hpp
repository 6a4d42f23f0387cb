// (L,n)-models and the fulfillment relation ⊨*.
//
// Eligibility (the Def 2.6 preamble): an index i with every fully
// instantiated term of f defined in A_{i+1}, drawn from
// [0, min(n − dp(f) − 1, n − 2)]. The inclusive upper bound follows the
// paper's own proofs (axiom 7 at n = 3 takes i = n − dp − 1); the n−2 cap
// keeps A_{i+1} in range for quantifier-free formulas.
//
// Case 5 recurses on the slice [i+1, n−1]. Case 6 ranges over
// j ∈ [i, n − dp(f) − 1] for the universal formula f itself (equivalently
// n − dp(body) − 2) and evaluates the instance at level j against the suffix
// slice [j, n−1]: inner existentials then draw witnesses from one level above
// j, exactly as the Lemma 2.2 proof walks the definition. An instance whose
// recursive verdict is Undefined is simply not fulfilled.

#ifndef FLAB_FULFILLMENT_HPP
#define FLAB_FULFILLMENT_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "flab/structure.hpp"

namespace flab {

class LnModel {
public:
    // Validates the chain condition; throws ChainError identifying the first
    // failing link, SignatureError on mixed signatures.
    static LnModel create(std::vector<PartialStructure> levels);

    std::size_t size() const { return len_; }
    const PartialStructure& level(std::size_t i) const { return (*store_)[off_ + i]; }
    const PartialStructure& top() const { return level(len_ - 1); }
    const Signature& signature() const { return level(0).signature(); }

    // A⃗^{[i,j]}; shares storage with the parent chain.
    LnModel slice(std::size_t i, std::size_t j) const;

    std::vector<PartialStructure> levels() const;

    bool operator==(const LnModel& other) const;

private:
    std::shared_ptr<const std::vector<PartialStructure>> store_;
    std::size_t off_ = 0, len_ = 0;
    LnModel(std::shared_ptr<const std::vector<PartialStructure>> s, std::size_t off,
            std::size_t len)
        : store_(std::move(s)), off_(off), len_(len) {}
};

LnModel new_ln_model(std::vector<PartialStructure> levels);

// ⟨v, top⟩; throws ChainError when the old top is not a substructure of top.
LnModel end_extend(const LnModel& v, const PartialStructure& top);

enum class UndefReason : std::uint8_t {
    None,
    NoEligibleIndex,     // the index range [0, min(n−dp−1, n−2)] is empty
    ParameterInTopModel, // terms only come together above every eligible level
    TermUndefined        // some instantiated term is nowhere defined
};

struct FulfillmentVerdict {
    Truth truth = Truth::Undefined;
    UndefReason reason = UndefReason::None;

    bool defined() const { return truth != Truth::Undefined; }
    bool operator==(const FulfillmentVerdict& o) const {
        return truth == o.truth && reason == o.reason;
    }
};

struct LeastIndex {
    std::optional<std::size_t> index;
    UndefReason reason = UndefReason::None;
};

// Least eligible i, or the classified reason there is none.
LeastIndex least_term_index(const LnModel& v, const Formula& f, const Assignment& a);

// Recorded evaluation steps for the CLI; line count capped.
struct FulfillTrace {
    std::vector<std::string> lines;
    std::size_t limit = 400;
    void add(std::size_t depth, const std::string& line);
};

FulfillmentVerdict fulfills(const LnModel& v, const Formula& f, const Assignment& a,
                            FulfillTrace* trace = nullptr);

// Compact deterministic serialization of a chain, usable as a table key.
std::string chain_key(const LnModel& v);

// Level-wise isomorphism of (L,n)-models (Def 2.9): one bijection on the top
// universes restricting to an isomorphism on every level.
bool is_ln_isomorphism_witness(const LnModel& a, const LnModel& b,
                               const std::map<Element, Element>& g);

}  // namespace flab

#endif
