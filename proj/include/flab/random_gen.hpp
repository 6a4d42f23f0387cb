// Seeded generators for the randomized suites: explicit structures, valid
// chains, formulas and assignments. One seed fully determines a run.

#ifndef FLAB_RANDOM_GEN_HPP
#define FLAB_RANDOM_GEN_HPP

#include <random>

#include "flab/fulfillment.hpp"

namespace flab {

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}

    std::uint64_t below(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(eng);
    }
    bool coin(double p = 0.5) { return std::uniform_real_distribution<>(0, 1)(eng) < p; }
    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[below(v.size())];
    }
};

// Independent per-instance sub-seed (splitmix64 over seed ⊕ index), so work
// can be sharded across workers without changing the stream.
std::uint64_t instance_seed(std::uint64_t seed, std::uint64_t index);

struct FormulaGenOptions {
    std::size_t max_tokens = 14;
    std::size_t max_term_depth = 2;
    bool allow_forall = true;
    bool closed = false;                 // no free variables
    std::vector<std::string> free_pool = {"x", "z"};
};

struct ChainGenOptions {
    std::size_t max_domain = 4;          // per-structure universe cap
    std::vector<Element> element_pool = {0, 1, 2, 3};
};

PartialStructure random_structure(Rng& rng, const Signature& sig, const ChainGenOptions& opt);

// A valid (L,n)-model of explicit structures: each level extends the previous
// one and defines every function value on the previous domain.
LnModel random_chain(Rng& rng, const Signature& sig, std::size_t n, const ChainGenOptions& opt);

// A superstructure of `base` that is total on base's tuples (usable as an
// end_extend top). May add one fresh element beyond the pool.
PartialStructure random_extension_top(Rng& rng, const PartialStructure& base);

Formula random_formula(Rng& rng, const Signature& sig, const FormulaGenOptions& opt);

Assignment random_assignment(Rng& rng, const std::set<std::string>& vars,
                             const PartialStructure& into);

}  // namespace flab

#endif
