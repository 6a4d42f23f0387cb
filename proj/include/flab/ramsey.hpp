// Coloring constructions and searches: PH-style homogeneous search, the
// min-witness pair colorings, bounded (n,φ)-colorings with their audit,
// homogeneous-subsequence search, BCP instance checking, and exhaustive
// (L,n)-model enumeration for completeness probes.
//
// Every search distinguishes "none exists" (enumeration completed) from
// "bound exceeded"; nothing is inferred from a timeout.

#ifndef FLAB_RAMSEY_HPP
#define FLAB_RAMSEY_HPP

#include <functional>
#include <variant>

#include "flab/collapse.hpp"

namespace flab {

// ── Classical tuple colorings ───────────────────────────────────────────────

struct TupleColoring {
    std::size_t e = 1;       // tuple size
    std::size_t r = 1;       // color count
    std::size_t N = 0;       // colors e-subsets of {0..N−1}
    bool sq_inc_only = false;
    std::map<std::vector<std::size_t>, std::size_t> table;  // keys sorted ascending

    std::size_t color(const std::vector<std::size_t>& subset) const;
    static TupleColoring constant(std::size_t e, std::size_t r, std::size_t N,
                                  std::size_t color, bool sq_inc_only = false);
};

// H ⊆ {0..N−1} with p constant on [H]^e, |H| ≥ k and |H| > min(H); smallest
// by (size, lexicographic) order, or nullopt after exhausting every subset.
std::optional<std::vector<std::size_t>> find_homogeneous(const TupleColoring& p, std::size_t k);

// Least N such that every p: [N]^e → r admits a valid H; exhaustive over
// colorings, guarded by max_colorings per N.
std::size_t ph_number(std::size_t e, std::size_t k, std::size_t r,
                      std::size_t max_colorings = 1u << 22);

// Lemma 3.3 search: square-increasing H with every element > m, p constant on
// [H]^e and |H| > min(H) + k.
std::optional<std::vector<std::size_t>> sq_inc_homogeneous(const TupleColoring& p,
                                                           std::size_t k, std::size_t m);

// ── Min-witness machinery ───────────────────────────────────────────────────

enum class WitnessOrder : std::uint8_t { Numeric, TopModelLess };

// Least b ∈ A_0 with v ⊨* φ(b) True; φ has exactly one free variable.
// TopModelLess requires < to be linear on A_0 (PreconditionError otherwise).
std::optional<Element> min_witness(const LnModel& v, const Formula& phi,
                                   WitnessOrder order = WitnessOrder::Numeric);

// F′ of §3/§4: 0 iff the min-witnesses of the two deleted-index subchains
// (delete level 1 vs delete level 2) agree. Requires both to be defined.
std::size_t pair_coloring(const LnModel& v, const Formula& phi);

// ── Bounded (n,φ)-colorings ─────────────────────────────────────────────────

struct ConstantRule {
    std::size_t color = 0;
};
// Optional-equality comparison of deleted-index min-witnesses (total on the
// Def 4.1 domain; agreeing "both undefined" counts as agreement).
struct MinWitnessPairRule {};
// Keyed by chain_key(); lookups may miss, which the audit reports.
struct TableRule {
    std::map<std::string, std::size_t> table;
};

struct ChainColoring {
    std::size_t n = 3;
    Formula phi;
    std::string phi_var;  // the free variable of phi
    Signature sig;
    std::size_t r = 2;
    Element N = 64;  // universes live inside {0..N−1}
    std::variant<ConstantRule, MinWitnessPairRule, TableRule> rule;

    // Def 4.1 condition 1: length n, top universe ⊆ N, fulfills φ(b) for some
    // b in the top universe (Undefined verdicts never qualify).
    bool in_domain(const LnModel& chain) const;
    std::optional<std::size_t> color(const LnModel& chain) const;
};

// ── Chain enumeration ───────────────────────────────────────────────────────

// Chain sources for audits and searches: either all partial structures over
// subsets of a base universe (guarded), or arithmetic segments with bounded
// tops.
struct StructurePool {
    std::vector<PartialStructure> structures;             // canonical order
    std::vector<std::vector<std::size_t>> successors;     // substructure DAG (with loops)

    static StructurePool over_universe(const Signature& sig, const std::vector<Element>& universe,
                                       std::size_t max_structures = 200000);
    static StructurePool segments(const Signature& sig, Element max_top);
};

// Every (L,n)-model over subsets of `universe`, each exactly once, in a fixed
// canonical order. Returns the count; throws GuardExceeded past max_models.
std::size_t enumerate_ln_models(const Signature& sig, std::size_t n,
                                const std::vector<Element>& universe, std::size_t max_models,
                                const std::function<void(const LnModel&)>& visit);

// Independent count for relational signatures (no function symbols): product
// formula over domain chains. Test oracle.
std::size_t count_ln_models_relational(const Signature& sig, std::size_t n,
                                       const std::vector<Element>& universe);

// ── Audits and searches ─────────────────────────────────────────────────────

struct BoundednessReport {
    std::vector<std::string> domain_violations;    // rule partial / out of range
    std::vector<std::string> collapse_violations;  // color changed under F-collapse
    std::vector<std::string> skipped;              // collapse precondition failed
    std::size_t chains_checked = 0;
    std::size_t subsequences_checked = 0;
    bool ok() const { return domain_violations.empty() && collapse_violations.empty(); }
};

struct AuditConfig {
    StructurePool pool;
    std::size_t k_max = 4;
    std::size_t max_chains = 100000;
};

// Def 4.1 audit: (1) the rule is total with range < r on every domain member,
// (3) colors are invariant under the F-collapse for ∃x φ(x) on every
// k-chain (n ≤ k ≤ k_max) whose n-subtuples all lie in the domain.
BoundednessReport is_bounded_coloring(const ChainColoring& c, const AuditConfig& cfg);

struct SubseqSearchResult {
    enum class Status { Found, NoneExists, BoundExceeded } status;
    std::optional<LnModel> chain;
    std::optional<std::size_t> color;
    std::size_t nodes_visited = 0;
};

// A chain of length k̄ ≥ max(k, |A_0|+m+1) whose n-subsequences are all in
// c's domain and receive one constant color; exhaustive over the pool within
// max_nodes.
SubseqSearchResult find_homog_subseq(const ChainColoring& c, std::size_t k, std::size_t m,
                                     const StructurePool& pool, std::size_t max_nodes = 2000000);

// ── BCP instances ───────────────────────────────────────────────────────────

struct BcpInstance {
    std::size_t r = 1;
    std::size_t n = 3;
    Signature sig;
    Formula phi;
    std::string phi_var;
    std::size_t j = 0;  // max function arity (validated against sig)
    std::size_t m = 0;
    std::size_t k = 3;
    Element N = 0;  // 0 = use default_bcp_universe_bound clipped by caller
};

// Col(k, j, |∃x φ(x)|, |L|) + 1.
BigInt default_bcp_universe_bound(const BcpInstance& inst);

struct BcpOutcome {
    std::string coloring_desc;
    SubseqSearchResult::Status status;
    std::optional<std::size_t> homogeneous_color;
    std::string detail;
};

struct BcpReport {
    std::vector<BcpOutcome> outcomes;
    std::size_t colorings_checked = 0;
    std::size_t colorings_unbounded = 0;  // enumerated candidates failing Def 4.1
};

// Checks the instance for the supplied coloring, or for every bounded table
// coloring over the audited domain (enumerated mode; guarded).
BcpReport check_bcp_instance(const BcpInstance& inst, const AuditConfig& cfg,
                             const std::optional<ChainColoring>& supplied,
                             std::size_t max_enumerated = 4096);

// ── Completeness probes ─────────────────────────────────────────────────────

struct ProbeReport {
    std::size_t chains = 0;
    std::size_t defined_true = 0;
    std::size_t defined_false = 0;
    std::size_t undefined = 0;
    std::optional<std::string> first_false_chain;
    std::optional<std::string> first_true_chain;
    bool no_defined_false() const { return defined_false == 0; }
};

// Exhaustively evaluates fulfillment of φ over every (L,n)-model on subsets
// of the universe. Requires dp(φ) < n.
ProbeReport completeness_probe(const Formula& phi, std::size_t n, const Signature& sig,
                               const std::vector<Element>& universe, std::size_t max_models);

}  // namespace flab

#endif
