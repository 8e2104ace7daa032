#pragma once
// Finite unital rings, presented additively: the underlying group is
// Z/c[0] x ... x Z/c[r-1], multiplication is given by structure constants on
// the additive basis and extended bilinearly. Validation checks that the
// table is well defined, associative and unital on basis elements (which is
// equivalent to the full laws by bilinearity).

#include "finmod/exact_linalg.hpp"

#include <string>
#include <vector>

namespace finmod {

using RElem = IntVec;  // coordinates in the additive basis, entry i in [0, c[i])

struct Ring {
    IntVec additive_orders;                         // c[i] >= 1
    std::vector<std::vector<RElem>> struct_consts;  // [i][j] = b_i * b_j
    RElem unit;
    bool commutative = false;  // computed by make_ring, not an input
    std::string label;

    std::size_t rank() const { return additive_orders.size(); }
    Int cardinality() const;

    RElem zero() const { return RElem(rank(), Int(0)); }
    const RElem& one() const { return unit; }
    RElem reduce(const RElem& a) const;
    RElem add(const RElem& a, const RElem& b) const;
    RElem sub(const RElem& a, const RElem& b) const;
    RElem neg(const RElem& a) const;
    RElem mul(const RElem& a, const RElem& b) const;
    bool is_zero_elem(const RElem& a) const;

    // all elements in lexicographic coordinate order (last coordinate fastest)
    std::vector<RElem> enumerate_elements() const;

    // matrix of left multiplication by basis element i (column j = b_i * b_j)
    IntMatrix left_mult_matrix(std::size_t i) const;
    // matrix of left multiplication by an arbitrary element
    IntMatrix left_mult_by(const RElem& r) const;

    bool operator==(const Ring& o) const {
        return additive_orders == o.additive_orders && struct_consts == o.struct_consts &&
               unit == o.unit;
    }
};

inline constexpr long kDefaultRingCardinalityCap = 256;

Ring make_ring(IntVec additive_orders, std::vector<std::vector<RElem>> struct_consts,
               RElem unit, std::string label = "",
               const Int& cardinality_cap = kDefaultRingCardinalityCap);

Ring make_zmod(const Int& n);

// (Z/n)[x]/(f) with f monic of degree d = f_tail.size():
// f = x^d + f_tail[d-1] x^(d-1) + ... + f_tail[0]
Ring make_poly_quotient(const Int& n, const IntVec& f_tail, std::string label = "");

// F_p[x_1..x_k] / (all monomials of degree 2); basis {1, x_1, ..., x_k}
Ring make_trunc_poly(const Int& p, std::size_t k);

// the five rings every exhaustive suite runs over:
// Z/2, Z/4, Z/8, Z/9, F_2[x,y]/(x,y)^2
std::vector<Ring> standard_test_rings();

}  // namespace finmod
