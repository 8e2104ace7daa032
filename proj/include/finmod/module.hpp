#pragma once
// Finite left modules over a finite ring. The additive part is always kept in
// invariant-factor form (orders d_0 | d_1 | ..., each >= 2); the action of the
// ring is one matrix per ring basis element, acting on coordinate columns.
// Elements are coordinate vectors with entry i in [0, d_i).

#include "finmod/exact_linalg.hpp"
#include "finmod/ring.hpp"

#include <optional>
#include <vector>

namespace finmod {

struct Module {
    Ring ring;
    IntVec orders;                   // invariant factors, ascending divisibility
    std::vector<IntMatrix> actions;  // one per ring basis element, entries reduced

    std::size_t rank() const { return orders.size(); }
    Int cardinality() const;

    IntVec reduce(const IntVec& x) const;
    IntVec add(const IntVec& a, const IntVec& b) const;
    IntVec sub(const IntVec& a, const IntVec& b) const;
    IntVec neg(const IntVec& a) const;
    bool is_zero_elem(const IntVec& a) const;

    IntMatrix action_of(const RElem& r) const;  // matrix of the action of r
    IntVec act(const RElem& r, const IntVec& x) const;

    std::vector<IntVec> enumerate_elements() const;  // lexicographic
    Int element_additive_order(const IntVec& x) const;

    static Module zero(const Ring& ring);

    bool operator==(const Module& o) const = default;
};

// a module map, matrix column j = image of the j-th source generator
struct Hom {
    Module source, target;
    IntMatrix matrix;  // target.rank() x source.rank()

    IntVec apply(const IntVec& x) const;
    bool operator==(const Hom& o) const = default;
};

Hom identity_hom(const Module& m);
Hom zero_hom(const Module& source, const Module& target);

// validates shapes and module laws, and canonicalizes the additive
// presentation (raw orders may be arbitrary >= 1; actions are conjugated
// along, order-1 coordinates dropped)
Module make_module(const Ring& ring, const IntVec& raw_orders,
                   const std::vector<IntMatrix>& raw_actions);

// the ring as a left module over itself (actions = left multiplication)
Module regular_module(const Ring& ring);

// same, but also returns the coordinate change:
//   to_canonical:   canonical coords from raw coords  (k_new x k_raw)
//   from_canonical: raw coords from canonical coords  (k_raw x k_new)
struct CanonicalizedPresentation {
    Module module;
    IntMatrix to_canonical;
    IntMatrix from_canonical;
};

// presents Z^r / (row span of `relations`) with the given raw actions;
// `relations` must be a full-rank r x r lattice (it always contains the
// coordinate orders in every use here)
CanonicalizedPresentation reduce_presentation(const Ring& ring, const IntMatrix& relations,
                                              const std::vector<IntMatrix>& raw_actions);

struct DirectSumResult {
    Module sum;
    Hom inj_a, inj_b;    // a -> sum, b -> sum
    Hom proj_a, proj_b;  // sum -> a, sum -> b
};

DirectSumResult direct_sum(const Module& a, const Module& b);
Module direct_power(const Module& m, std::size_t n);

// an action-closed subgroup of a module's additive group
struct Submodule {
    Module ambient;
    CanonicalSubgroup group;

    Int cardinality() const { return group.cardinality(); }
    bool operator==(const Submodule& o) const = default;
};

Submodule submodule_generate(const Module& m, const std::vector<IntVec>& gens);
Submodule zero_submodule(const Module& m);
Submodule full_submodule(const Module& m);
// wraps an already-closed subgroup (validates closure)
Submodule make_submodule(const Module& m, const CanonicalSubgroup& s);
bool is_action_closed(const Module& m, const CanonicalSubgroup& s);

// the abstract module structure carried by a submodule, plus the inclusion
struct SubmoduleModule {
    Module module;
    Hom inclusion;  // module -> ambient
};
SubmoduleModule submodule_as_module(const Submodule& s);

struct QuotientResult {
    Module quotient;
    Hom projection;  // ambient -> quotient
};
QuotientResult quotient_by(const Module& m, const Submodule& s);

// backtracking isomorphism test: returns the matrix of an isomorphism a -> b
// (generator images tried in lexicographic element order, so the witness is
// deterministic), or nothing
std::optional<IntMatrix> are_isomorphic(const Module& a, const Module& b);

inline constexpr long kDefaultEnumCandidateCap = 100000;

struct EnumLimits {
    Int max_candidates = kDefaultEnumCandidateCap;
};

// every isomorphism class of modules of cardinality <= max_size, deduplicated
// deterministically: candidates sorted by (cardinality, additive invariants,
// lexicographic action matrices), first representative kept
std::vector<Module> enumerate_modules(const Ring& ring, const Int& max_size,
                                      const EnumLimits& limits = {});

// all submodules, sorted by (cardinality, canonical subgroup order)
std::vector<Submodule> submodule_lattice(const Module& m,
                                         const Int& cap = kDefaultEnumCandidateCap);

}  // namespace finmod
