// The Finite Model Lemma: the computable F-collapse with its five conditions
// and the Col size-bound function. Col values explode past uint64 almost
// immediately, so they live in an arbitrary-precision integer.

#ifndef FLAB_COLLAPSE_HPP
#define FLAB_COLLAPSE_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include "flab/fulfillment.hpp"

namespace flab {

using BigInt = boost::multiprecision::cpp_int;

struct ColParams {
    std::size_t level = 0;        // i
    std::size_t max_fn_arity = 0; // j
    std::size_t formula_len = 0;  // k = |φ|
    std::size_t sig_size = 0;     // l = |L|, equality excluded
};

// Col(0) = max(l, 1); with B* = Col(i) + Col(i)^j·l and
// B** = B* + C(k,2)·(B*)^k,
// Col(i+1) = B* + C(k,2)·(B*)^k + (Σ_{m=0}^{i−1} C(i,m))·(B**)^k·C(k,2)·2.
// Independent of n and of the chain.
BigInt col_bound(const ColParams& p);

// Col is nondecreasing in the level, and exact values grow to millions of
// digits within a few levels; this stops iterating once the running value
// exceeds cap (the result is then some value > cap). Size checks only need
// |B_i| ≤ col_bound, so comparisons against small numbers stay exact.
BigInt col_bound_clamped(const ColParams& p, const BigInt& cap);

struct CollapseResult {
    std::vector<std::vector<Element>> universes;  // chosen B_i, sorted
    LnModel collapsed;                            // levels restricted to B_i
    std::vector<std::pair<Element, Element>> renaming;  // ∪B → 0..|∪B|−1
    LnModel renamed;                              // the F-collapse proper
};

// Preconditions: f closed, dp(f) ≤ n−2, fulfillment of f defined on v.
// Deterministic in (v, f) under the numeric well-order.
CollapseResult f_collapse(const LnModel& v, const Formula& f);

struct CollapseReport {
    bool c1 = true, c2 = true, c3 = true, c4 = true, c5 = true;
    std::vector<std::string> violations;
    std::size_t condition4_pairs = 0;
    std::size_t condition5_checks = 0;
    bool ok() const { return c1 && c2 && c3 && c4 && c5; }
};

// Independent re-check of conditions 1–5 against (v, f); condition 5 by brute
// force over all subsequences and single-free-variable subformulas.
CollapseReport verify_collapse(const LnModel& v, const CollapseResult& r, const Formula& f);

// Rebuild a CollapseResult from tampered universes (test hook for mutation
// checks); throws if the universes no longer restrict to a valid chain.
CollapseResult rebuild_from_universes(const LnModel& v,
                                      std::vector<std::vector<Element>> universes);

}  // namespace flab

#endif
