#pragma once
// The homomorphism calculus: validated construction, composition, kernels and
// images, Hom(a, b) as a finite abelian group, and the extension solver
// (find h with h∘f = g). Everything reduces to linear congruence systems in
// the matrix entries.

#include "finmod/module.hpp"

#include <optional>
#include <vector>

namespace finmod {

Hom make_hom(const Module& source, const Module& target, const IntMatrix& matrix);
Hom compose_hom(const Hom& g, const Hom& f);  // g after f

struct HomAnalysis {
    Submodule kernel;  // of the source
    Submodule image;   // of the target
    bool injective = false;
    bool surjective = false;
};

HomAnalysis analyze_hom(const Hom& f);

// Hom(source, target) presented by a basis with coefficient ranges: every
// homomorphism is sum(c_i * basis_i) for a unique tuple with c_i in
// [0, orders_i). `flat` is the same group as a subgroup of the flattened
// matrix space (row-major), which is what the solvers consume.
struct HomGroup {
    Module source, target;
    std::vector<Hom> basis;
    IntVec orders;
    CanonicalSubgroup flat;

    Int cardinality() const;
    Hom from_flat(const IntVec& entries) const;
};

HomGroup hom_group(const Module& a, const Module& b);

// all homomorphisms a -> b in the deterministic order of the flat subgroup
std::vector<Hom> enumerate_homs(const Module& a, const Module& b);
std::vector<Hom> module_automorphisms(const Module& m);

// h: f.target -> g.target with h∘f = g, if any; the returned solution is the
// canonical (lexicographically least) representative of its solution coset
std::optional<Hom> solve_extension(const Hom& f, const Hom& g);

// the map between the abstract modules of nested submodules (inner must be
// contained in outer) commuting with both inclusions
Hom submodule_connecting_hom(const Submodule& inner, const Submodule& outer);

}  // namespace finmod
