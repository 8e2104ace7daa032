#pragma once
// The exhaustive property suites behind `suite run`. Every suite enumerates
// a deterministic family of cases (over one ring and mode, or over a fixed
// matrix grid for the linear-algebra suite), checks one law per case, and
// reports the case count plus the first counterexample in enumeration order.
//
// Cases are independent, so the runner may spread them across OpenMP
// threads; results are merged by case index, which makes the report
// byte-identical to the serial reference path. The serial path is kept both
// as that reference and for the benchmark comparison.

#include "finmod/serialization.hpp"

namespace finmod {

struct SuiteConfig {
    // Universe cardinality bound. Families with steeper enumeration costs pin
    // their own ceiling below it (12 for the pushout, sum, base and extension
    // sweeps, 8 for the independence-law tables) and rings of additive rank
    // above one stay at 12 throughout; the scope string of every result names
    // the bound that was actually used.
    Int bound = 12;
    bool parallel = true;  // spread cases across OpenMP threads
    EnumLimits limits;
    Int aut_orbit_cap = 4096;
    Int max_subject_size = 4096;
};

struct SuiteResult {
    std::string name;
    std::string scope;  // ring and mode, or the grid description
    long checked = 0;   // individual checks up to and including the first failure
    bool passed = true;
    bool capped = false;  // a resource cap ended a case early
    Json counterexample;  // first failing case, null when passed
};

// linalg, push-preservation, sum-embeddings, indep-calculus, local-character,
// extension-algorithm, injective-classification, purity-split,
// injective-closure, witness-surrogate
std::vector<std::string> suite_names();

// one named suite over the given rings (the linalg grid ignores them);
// unknown names are a validation error
std::vector<SuiteResult> run_suite(const std::string& name, const std::vector<Ring>& rings,
                                   const SuiteConfig& cfg);

// every suite over the standard five test rings
std::vector<SuiteResult> run_all_suites(const SuiteConfig& cfg);

Json suite_report(const std::vector<SuiteResult>& results, const SuiteConfig& cfg);

}  // namespace finmod
