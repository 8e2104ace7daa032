#pragma once
// Positive primitive formulas: existentially quantified conjunctions of
// homogeneous linear equations over a ring. Text form (whitespace ignored):
//
//   formula := [ "E" wvar { "," wvar } "." ] eq { "&" eq }
//   eq      := term { ("+"|"-") term } "=" "0"
//   term    := coeff "*" var | var
//   var     := ("w"|"x") digits            w = bound, x = free, 1-based
//   coeff   := integer (rank-1 rings) | "(" int { "," int } ")"
//
// The bound prefix must declare w1..wl with no gaps. Every formula defines a
// subgroup of M^n on each module M; embeddings are classified by which of
// these subgroups they reflect.

#include "finmod/hom.hpp"

#include <optional>
#include <string>
#include <vector>

namespace finmod {

// the three embedding notions the whole calculus is parameterized by
enum class Mode { plain, rd, pure };

std::string mode_name(Mode mode);
std::optional<Mode> parse_mode(const std::string& name);

struct PpEquation {
    std::vector<RElem> bound_coeffs;  // one per bound variable
    std::vector<RElem> free_coeffs;   // one per free variable

    bool operator==(const PpEquation& o) const = default;
};

struct PpFormula {
    Ring ring;
    std::size_t free_count = 0;
    std::size_t bound_count = 0;
    std::vector<PpEquation> equations;

    bool operator==(const PpFormula& o) const = default;
};

// validates coefficient arity against the ring and reduces entries;
// free_count >= 1 and at least one equation are required
PpFormula make_pp_formula(const Ring& ring, std::size_t free_count, std::size_t bound_count,
                          std::vector<PpEquation> equations);

PpFormula parse_pp(const Ring& ring, const std::string& text);
std::string pp_to_text(const PpFormula& f);  // canonical form; parses back equal

// the solution set { x̄ : M ⊨ φ(x̄) } as a subgroup of M^n (block j holds the
// coordinates of the j-th free variable)
CanonicalSubgroup pp_subgroup(const PpFormula& phi, const Module& m);
bool pp_holds(const PpFormula& phi, const Module& m, const std::vector<IntVec>& args);

struct FormulaBounds {
    std::size_t max_free = 2;
    std::size_t max_bound = 2;
    std::size_t max_equations = 2;
    long max_formulas = 20000;  // search budget; exceeding it ends the search
};

// a formula φ and arguments ā from f.source with f.target ⊨ φ(f(ā)) but
// f.source ⊭ φ(ā); the existence of one refutes purity of f
struct ReflectionWitness {
    PpFormula formula;
    std::vector<IntVec> source_args;

    bool operator==(const ReflectionWitness& o) const = default;
};

// bounded exhaustive search in deterministic order (shape, then coefficient
// odometer); returns the first witness found, or nothing if the budget or the
// bounds are exhausted
std::optional<ReflectionWitness> purity_reflection_witness(const Hom& f,
                                                           const FormulaBounds& bounds = {});

struct ModeRequest {
    bool embedding = true;
    bool rd = true;
    bool pure = true;
    bool split = true;
};

struct EmbeddingClass {
    std::optional<bool> is_embedding, is_rd, is_pure, is_split;
    // evidence for the strongest failed property, when one was computed:
    std::optional<IntVec> kernel_witness;               // nonzero kernel element
    std::optional<RElem> rd_witness;                    // r with f[A] ∩ rB ≠ r f[A]
    std::optional<ReflectionWitness> purity_witness;    // reflected formula
};

// is_pure is decided as is_split: finite modules are pure-injective, so pure
// submodules of finite modules are direct summands and conversely. The
// formula-based route is kept as an independent falsification oracle
// (purity_reflection_witness) and feeds the purity witness on failures.
EmbeddingClass classify_embedding(const Hom& f, const ModeRequest& modes = {},
                                  const FormulaBounds& witness_bounds = {});

bool is_mode_embedding(const Hom& f, Mode mode);

struct PhiFamily {
    std::vector<PpFormula> formulas;
    std::size_t arity_bound = 0;  // equation formulas materialized up to here
    bool truncated = true;        // the equation family is infinite in general
};

// the divisibility-sum formulas (one per ring element) plus every equation
// formula with at most `equation_arity_bound` free variables
PhiFamily phi_family(const Ring& ring, std::size_t equation_arity_bound);

}  // namespace finmod
