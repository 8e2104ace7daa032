#pragma once
// JSON encoding of the core objects and of operation reports. The format is
// byte-stable: ordered_json keeps fields in the order they are written,
// every integer is a decimal string (values are arbitrary precision, and
// golden outputs must not depend on number formatting), and floats never
// appear. Decoders accept exactly what the encoders emit and rebuild objects
// through the validating constructors, so a parsed object satisfies the same
// invariants as a freshly built one.
//
// Object schemas:
//   ring    {"orders": [str], "struct": [[[str]]], "unit": [str]}
//   module  {"ring": ring, "orders": [str], "actions": [[[str]]]}
//   hom     {"source": module, "target": module, "matrix": [[str]]}
//   formula a single grammar text string
//
// Everything else is a tagged record: an object whose first field is "kind".

#include "finmod/injectivity.hpp"

#include <json.hpp>

#include <string>

namespace finmod {

using Json = nlohmann::ordered_json;

// scalars, vectors, matrices (decimal strings; matrices as row arrays)
Json int_to_json(const Int& v);
Json vec_to_json(const IntVec& v);
Json matrix_to_json(const IntMatrix& m);
Int int_from_json(const Json& j, const std::string& where);
IntVec vec_from_json(const Json& j, const std::string& where);
IntMatrix matrix_from_json(const Json& j, const std::string& where);

Json ring_to_json(const Ring& r);
Json module_to_json(const Module& m);
Json hom_to_json(const Hom& h);
Json formula_to_json(const PpFormula& f);  // the canonical text form
Ring ring_from_json(const Json& j);
Module module_from_json(const Json& j);
Hom hom_from_json(const Json& j);
PpFormula formula_from_json(const Ring& ring, const Json& j);

// Submodules are asymmetric: outputs carry the canonical generator rows and
// the cardinality (the ambient is clear from context), while inputs name the
// ambient module explicitly and may list any generating set.
Json submodule_to_json(const Submodule& s);
// input record {"module": module, "generators": [[str]]}
Submodule submodule_from_json(const Json& j);

// ---- tagged reports (output only) ------------------------------------------

Json error_record(const std::string& type, const std::string& message);
Json hom_analysis_record(const Hom& h, const HomAnalysis& a);
Json formula_record(const PpFormula& f, const Module* evaluated_on);
Json classify_record(const EmbeddingClass& c);
Json pushout_record(const PushoutResult& p);
Json independence_record(const IndependenceSquare& sq);
Json independence_base_record(const IndependenceBase& b, Mode mode);
Json chain_record(const ChainDecomposition& c, Mode mode);
Json extension_record(const std::optional<Hom>& h);
Json injectivity_record(const InjectivityReport& r);
Json baer_record(const BaerReport& r, const Int& bound);
Json sigma_record(const SigmaReport& r);
Json closure_record(const ClosureReport& r);
Json noetherian_record(const NoetherianReport& r);

// canonical printing: two-space indent and a trailing newline
std::string serialize(const Json& j);

// reads and parses a file; parse failures report the path and byte position
Json load_json_file(const std::string& path);

}  // namespace finmod
