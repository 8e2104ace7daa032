#pragma once

#include "finmod/pp_formula.hpp"

#include <optional>
#include <vector>

namespace finmod {

// Pushout of f1: M -> N1 along f2: M -> N2, presented as the quotient of
// N1 (+) N2 by the span of the pairs (f1(m), -f2(m)).  Coset representatives
// are the canonical reduced coordinates of the quotient module, so equal
// cosets always carry equal coordinate vectors.
//
// leg1 extends f1 across f2 and therefore starts at N2; leg2 starts at N1.
// When a mode is supplied and f1 is itself a mode-embedding the result
// records whether leg1 is one too (and likewise for f2/leg2); these verdicts
// are expected to always come back true.
struct PushoutResult {
    Module apex;
    Hom leg1;       // N2 -> apex
    Hom leg2;       // N1 -> apex
    Hom coset_map;  // N1 (+) N2 -> apex, the quotient projection
    std::optional<Mode> mode;
    std::optional<bool> leg1_preserves_mode;
    std::optional<bool> leg2_preserves_mode;
};

PushoutResult pushout(const Hom& f1, const Hom& f2,
                      std::optional<Mode> mode = std::nullopt);

// the unique t: apex -> Q with t(coset of (n1, n2)) = h1(n1) + h2(n2);
// requires h1 after f1 == h2 after f2
Hom induced_corner(const PushoutResult& p, const Hom& h1, const Hom& h2);

// a commuting square (f1, f2 out of a shared corner, h1, h2 into a shared
// target) together with the mode verdict: all four maps and the induced map
// out of the pushout apex must be mode-embeddings
struct IndependenceSquare {
    Hom f1, f2;  // M0 -> M1, M0 -> M2
    Hom h1, h2;  // M1 -> M3, M2 -> M3
    Mode mode;
    bool verdict;
    Hom corner_hom;  // apex -> M3
};

IndependenceSquare is_independent_square(const Hom& f1, const Hom& f2, const Hom& h1,
                                         const Hom& h2, Mode mode);

// the same square built from nested submodules of one ambient module
// (m0 inside both m1 and m2), with inclusions as the four maps
IndependenceSquare is_independent_submodules(const Submodule& m0, const Submodule& m1,
                                             const Submodule& m2, Mode mode);

// as above, but with a fourth submodule containing m1 and m2 as the shared
// target corner instead of the full ambient module
IndependenceSquare is_independent_submodules(const Submodule& m0, const Submodule& m1,
                                             const Submodule& m2, const Submodule& m3,
                                             Mode mode);

// Local character: given mode-submodules m1, m2 of n, find a base m0 inside
// m2 and an enlargement of m1 making the square (m0; enlarged, m2; n)
// independent.  Candidates are scanned by (|m0|, |enlarged|, canonical
// order), so the returned witness is the minimal one.
struct IndependenceBase {
    Submodule base;      // inside m2
    Submodule enlarged;  // contains m1
};

IndependenceBase find_independence_base(const Submodule& m1, const Submodule& m2,
                                        const Module& n, Mode mode);

// Decomposition of a mode-embedding into a chain of independent pieces.  Both
// chains live inside the target: a_chain[i] is the image of the source (the
// source is exhausted from the start), b_chain grows from that image to the
// full target, one enumerated element at a time.  For i < j the square
// (a_chain[i]; b_chain[i], a_chain[j]; b_chain[j]) is independent, and each
// step keeps the index [b_{i+1} : b_i] within target_step when any valid
// step that small exists.
struct ChainDecomposition {
    std::vector<Submodule> a_chain;
    std::vector<Submodule> b_chain;
};

ChainDecomposition decompose_chain(const Hom& f, Mode mode, const Int& target_step = Int(4),
                                   const Int& cap = kDefaultEnumCandidateCap);

}  // namespace finmod
