// Square-increasing sequences and models, the Q axiom corpus, LNP(φ),
// language enlargement by constants, and the prime-coding formula ψ(x).

#ifndef FLAB_ARITHMETIC_HPP
#define FLAB_ARITHMETIC_HPP

#include "flab/fulfillment.hpp"

namespace flab {

// Strictly increasing with m_i^2 < m_{i+1}; empty and singleton sequences
// pass vacuously. Entries above 2^31 are rejected (squares must fit).
bool validate_sq_inc(const std::vector<Element>& m);

// ⟨M_{m_0}, …, M_{m_{n−1}}⟩; throws PreconditionError unless validate_sq_inc.
LnModel make_sq_models(const std::vector<Element>& m);

// The seven axioms of Robinson arithmetic, implications desugared.
const std::vector<Formula>& q_axioms();

// ∀x∃y(x ≤ y ∧ x ≠ y), with ≤ spelled through < and =.
const Formula& no_greatest_element_sentence();

struct QCheckReport {
    std::vector<FulfillmentVerdict> axioms;  // 7 entries
    FulfillmentVerdict no_greatest;
    // Lemma 2.2 hypotheses: length ≥ 3 and m_0 > 1 (or length ≥ 4).
    bool hypothesis_met = false;

    bool all_true() const;
};

// Verdicts for each axiom and the no-greatest-element sentence over any
// arithmetic-base chain.
QCheckReport check_q(const LnModel& v);

// LNP(φ) := ∃xφ(x) → ∃x∀y(φ(x) ∧ (φ(y) → x ≤ y)), desugared; f must have
// exactly one free variable.
Formula lnp(const Formula& f);

std::vector<Element> first_primes(std::size_t k);

// ψ(x) of the prime-coding argument, with exponentiation realized as a
// bounded disjunction over exponent tuples in [0, exp_cap]^k; numerals are
// S-towers and p^e is an iterated product. Throws GuardExceeded when the
// expansion would exceed max_disjuncts.
Formula prime_code_psi(const std::vector<Formula>& fs, std::size_t exp_cap,
                       std::size_t max_disjuncts = 4096);

// sig plus constants c0, …, c_{bound−1}; segments interpret ck as k.
Signature enlarge_with_constants(const Signature& sig, std::size_t bound);

}  // namespace flab

#endif
