#pragma once

#include "finmod/pushout.hpp"

#include <optional>
#include <string>
#include <vector>

namespace finmod {

// which modules over the ring belong to the class under test; torsion_free
// keeps the modules where no nonzero ring element kills a nonzero element
enum class ClassFilter { all, torsion_free, explicit_list };

struct UniverseSpec {
    Ring ring;
    Mode mode = Mode::plain;
    Int max_module_size = 16;
    ClassFilter filter = ClassFilter::all;
    std::vector<Module> members;  // explicit_list only

    // automorphism-orbit deduplication of test embeddings is skipped for
    // targets whose endomorphism count exceeds this
    Int aut_orbit_cap = 4096;
    // cap on subjects built internally (e.g. powers in the sigma test)
    Int max_subject_size = 4096;
    EnumLimits limits;
};

// the class members of cardinality <= max_module_size, deterministically
// ordered; explicit lists are validated and deduplicated up to isomorphism
std::vector<Module> realize_universe(const UniverseSpec& u);

bool universe_contains(const UniverseSpec& u, const Module& m);

struct ClosureViolation {
    std::string kind;  // "submodule" | "image" | "sum"
    Module subject;    // the member (for sums: the first summand)
    Module produced;   // the module missing from the class
};

struct ClosureReport {
    bool closed = true;
    std::vector<ClosureViolation> violations;
    long cases_checked = 0;
};

// checks, within the size bound, that the class is closed under
// mode-submodules, images of maps killing a mode-submodule, and finite
// direct sums
ClosureReport audit_class_closure(const UniverseSpec& u);

struct InjectivityCounterexample {
    Hom f;  // a mode-embedding between universe members
    Hom g;  // f.source -> subject, admits no h with h after f == g
};

struct InjectivityReport {
    Module subject;
    UniverseSpec universe;
    bool verdict = false;
    std::optional<InjectivityCounterexample> counterexample;
    long pairs_checked = 0;
};

// Tests whether every map A -> subject extends along every mode-embedding
// A -> B with A, B in the realized universe.  Embeddings are reduced to
// mode-submodule inclusions (precomposition by isomorphisms cannot change
// the answer) and deduplicated along automorphism orbits of the target when
// the target's endomorphism count stays under the orbit cap.  Surjectivity
// of each restriction map is decided by comparing subgroup cardinalities in
// the flat coordinates of the hom group.
InjectivityReport is_rel_injective(const Module& e, const UniverseSpec& u);

struct BaerReport {
    bool pass = true;
    std::optional<InjectivityCounterexample> counterexample;
    long ideals_checked = 0;
};

// the classical ideal test: extend every map I -> e along I into the ring
// seen as a module over itself; only meaningful for plain embeddings, other
// modes are rejected
BaerReport baer_ideal_test(const Module& e, const UniverseSpec& u);

// Extension through the chain decomposition of f: at every stage the next
// piece is glued in with a pushout, the map so far is combined with g on the
// new piece, and the result is pushed along the stage's corner embedding.
// Stage solutions are searched with backtracking (solution cosets in
// deterministic order), so the outcome agrees exactly with the direct
// solver: a map is returned iff solve_extension(f, g) would find one.
std::optional<Hom> extend_via_decomposition(const Hom& f, const Hom& g,
                                            const UniverseSpec& u);

// The same algorithm split into reusable phases, for sweeps that extend many
// maps along one embedding: the chain and pushout data depend only on f, the
// stage solution cosets only on (f, target), and the per-map remainder is a
// handful of small congruence solves.
struct ExtensionPlan {
    Hom f;
    Mode mode = Mode::plain;
    Int search_cap = 0;
    Hom bottom_inverse;  // bottom stage module -> f.source
    struct PlanStage {
        PushoutResult push;  // of (stage piece <- old image -> old stage)
        Hom t;               // apex -> next stage module
        Hom piece_to_source;  // next image piece -> f.source, the lift through f
    };
    std::vector<PlanStage> stages;
    Hom top_inverse;  // f.target -> top stage module
};

ExtensionPlan prepare_extension(const Hom& f, const UniverseSpec& u);

struct ExtensionSolver {
    ExtensionPlan plan;
    Module target;
    struct TargetStage {
        HomGroup homs;              // next stage module -> target
        std::vector<IntVec> coset;  // flat homs vanishing on the image of t
    };
    std::vector<TargetStage> stages;
};

ExtensionSolver bind_extension_target(ExtensionPlan plan, const Module& e);
std::optional<Hom> run_extension(const ExtensionSolver& s, const Hom& g);

struct SigmaReport {
    std::vector<InjectivityReport> per_power;  // powers 1..k in order
    std::optional<std::size_t> first_failing_power;
    bool all_pass = true;
};

// relative injectivity of e, e^2, ..., e^k
SigmaReport sigma_injective_bounded(const Module& e, const UniverseSpec& u, std::size_t k);

// complement of the image of a split mode-embedding out of an injective:
// the kernel of the canonical retraction
Submodule split_off_injective(const Hom& f);

struct NoetherianViolation {
    std::string kind;  // "sum" | "chain" | "csb"
    std::vector<Module> inputs;
    std::optional<Module> produced;
};

struct NoetherianReport {
    std::vector<Module> injectives;  // verdict-injective members, universe order
    bool sums_closed = true;
    bool chains_closed = true;
    bool csb_holds = true;
    std::vector<NoetherianViolation> violations;
    long cases_checked = 0;
};

// the closure audit for the verdict-injective members: direct sums of arity
// <= sum_arity stay injective (checked stage by stage along the summation
// chain, which is the finite form of the directed-colimit closure), and any
// two injectives with mode-embeddings both ways are isomorphic
NoetherianReport noetherian_bounded_check(const UniverseSpec& u, std::size_t sum_arity);

}  // namespace finmod
