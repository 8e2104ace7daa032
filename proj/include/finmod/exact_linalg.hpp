#pragma once
// Exact integer linear algebra: Smith normal form, canonical subgroup forms of
// finite abelian groups presented as products of cyclic groups, and linear
// congruence solving. All arithmetic is arbitrary precision (GMP); zero-row
// and zero-column matrices are legal everywhere.

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace finmod {

using Int = mpz_class;
using IntVec = std::vector<Int>;

// thrown on malformed inputs (dimension mismatches, bad orders, ...);
// carries a human-readable witness of the violation
struct ValidationError {
    std::string message;
};

// thrown when a configurable resource cap is exceeded
struct ResourceCapError {
    std::string message;
};

class IntMatrix {
  public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}
    IntMatrix(std::size_t rows, std::size_t cols, std::vector<long> entries);

    static IntMatrix identity(std::size_t n);
    static IntMatrix diagonal(const IntVec& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Int& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool operator==(const IntMatrix& o) const = default;

    bool is_zero() const;
    IntMatrix mul(const IntMatrix& o) const;
    IntVec mul_vec(const IntVec& x) const;       // column-vector action
    IntMatrix transpose() const;
    IntMatrix vstack(const IntMatrix& below) const;
    IntMatrix hstack(const IntMatrix& right) const;
    IntMatrix row_slice(std::size_t lo, std::size_t hi) const;
    IntVec row(std::size_t i) const;
    IntVec col(std::size_t j) const;

    // entrywise reduction of row i modulo m[i] (m[i] >= 1); used to present
    // matrices whose row i lives in Z/m[i]
    IntMatrix reduce_rows_mod(const IntVec& m) const;

    std::string to_string() const;

  private:
    std::size_t rows_, cols_;
    IntVec a_;
};

// u * m * v == d with u, v unimodular, d diagonal, d[0] | d[1] | ..., all >= 0
struct SmithResult {
    IntMatrix u, d, v;
    IntVec diagonal() const;  // the min(rows, cols) diagonal entries
};

SmithResult smith_normal_form(const IntMatrix& m);

// row Hermite form h = u*a (u unimodular), echelon with positive pivots and
// entries above each pivot reduced into [0, pivot)
struct HermiteResult {
    IntMatrix h, u;
    std::vector<std::size_t> pivot_cols;  // one per nonzero row of h
};

HermiteResult row_hermite(const IntMatrix& a);

// basis (as rows) of { z : z * a == 0 }
IntMatrix left_kernel(const IntMatrix& a);

Int floor_div(const Int& a, const Int& b);
Int mod_reduce(const Int& a, const Int& m);  // representative in [0, m)

// A subgroup of the finite abelian group  Z/d[0] x ... x Z/d[k-1],
// represented canonically: equal subgroups compare equal as values.
// Internally this is the row Hermite form of the full preimage lattice in
// Z^k (which always contains diag(d)); gen_matrix() exposes the reduced
// nonzero rows, the Howell form of the generating set with respect to the
// ambient orders.
class CanonicalSubgroup {
  public:
    CanonicalSubgroup() = default;

    static CanonicalSubgroup zero(const IntVec& ambient_orders);
    static CanonicalSubgroup full(const IntVec& ambient_orders);
    // rows of `generators` are elements of the ambient group
    static CanonicalSubgroup span(const IntMatrix& generators,
                                  const IntVec& ambient_orders);

    const IntVec& ambient_orders() const { return orders_; }
    std::size_t ambient_rank() const { return orders_.size(); }

    // Howell-form generator matrix: nonzero rows, strictly increasing pivot
    // columns, every row reduced modulo the ambient orders and a member
    IntMatrix gen_matrix() const;
    // the full k x k triangular lattice form (pivot i divides orders[i])
    const IntMatrix& lattice() const { return lat_; }

    Int cardinality() const;
    Int ambient_cardinality() const;
    bool is_zero() const;
    bool is_full() const;

    bool contains(const IntVec& x) const;
    bool subgroup_of(const CanonicalSubgroup& o) const;
    // canonical coset representative of x + this (coordinates reduced below
    // the lattice pivots); deterministic
    IntVec reduce(const IntVec& x) const;

    CanonicalSubgroup sum(const CanonicalSubgroup& o) const;
    CanonicalSubgroup intersect(const CanonicalSubgroup& o) const;

    // all elements, deterministic order (coefficient odometer over the
    // triangular transversal); intended for small groups only
    std::vector<IntVec> elements() const;

    bool operator==(const CanonicalSubgroup& o) const = default;

    // strict total order (ambient, then lattice entries); used for
    // deterministic container keys
    static int compare(const CanonicalSubgroup& a, const CanonicalSubgroup& b);

  private:
    IntVec orders_;
    IntMatrix lat_;
};

// Solve a*x == b (mod moduli[i]) row by row, x ranging over Z^n.
//   particular: canonical solution if one exists (reduced modulo the kernel)
//   kernel:     all solutions of a*x == 0 as a subgroup of (Z/L)^n,
//               L = lcm(moduli) (L = 1 when there are no equations)
struct SolveResult {
    std::optional<IntVec> particular;
    CanonicalSubgroup kernel;
};

SolveResult howell_solve(const IntMatrix& a, const IntVec& b, const IntVec& moduli);

// Same system, but the unknown vector is read modulo unknown_orders[j]; the
// solution set must be invariant under those shifts (the caller guarantees
// unknown_orders[j] * e_j solves the homogeneous system; this holds for all
// hom/action systems in this library and is cheap-checked).
SolveResult congruence_solve(const IntMatrix& a, const IntVec& b,
                             const IntVec& moduli, const IntVec& unknown_orders);

Int lcm_of(const IntVec& v);

}  // namespace finmod
