#include "finmod/serialization.hpp"

#include <cctype>
#include <fstream>
#include <initializer_list>

namespace finmod {

namespace {

// strict schemas: exactly the listed fields, nothing else
void expect_fields(const Json& j, std::initializer_list<const char*> fields,
                   const std::string& where) {
    if (!j.is_object()) throw ValidationError{where + ": expected an object"};
    for (const char* f : fields)
        if (!j.contains(f)) throw ValidationError{where + ": missing field \"" + f + "\""};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* f : fields) known = known || it.key() == f;
        if (!known) throw ValidationError{where + ": unexpected field \"" + it.key() + "\""};
    }
}

Json opt_bool(const std::optional<bool>& b) {
    if (!b) return nullptr;
    return *b;
}

}  // namespace

Json int_to_json(const Int& v) { return v.get_str(); }

Json vec_to_json(const IntVec& v) {
    Json a = Json::array();
    for (const Int& x : v) a.push_back(int_to_json(x));
    return a;
}

Json matrix_to_json(const IntMatrix& m) {
    Json a = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(vec_to_json(m.row(i)));
    return a;
}

Int int_from_json(const Json& j, const std::string& where) {
    if (!j.is_string()) throw ValidationError{where + ": expected a decimal string"};
    const std::string s = j.get<std::string>();
    std::size_t k = (!s.empty() && s[0] == '-') ? 1 : 0;
    if (k == s.size()) throw ValidationError{where + ": \"" + s + "\" is not a decimal string"};
    for (std::size_t i = k; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            throw ValidationError{where + ": \"" + s + "\" is not a decimal string"};
    return Int(s);
}

IntVec vec_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) throw ValidationError{where + ": expected an array"};
    IntVec v;
    v.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        v.push_back(int_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    return v;
}

IntMatrix matrix_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) throw ValidationError{where + ": expected an array of rows"};
    const std::size_t rows = j.size();
    std::size_t cols = 0;
    std::vector<IntVec> parsed;
    parsed.reserve(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        parsed.push_back(vec_from_json(j[i], where + "[" + std::to_string(i) + "]"));
        if (i == 0)
            cols = parsed[0].size();
        else if (parsed[i].size() != cols)
            throw ValidationError{where + ": ragged rows"};
    }
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t c = 0; c < cols; ++c) m.at(i, c) = parsed[i][c];
    return m;
}

Json ring_to_json(const Ring& r) {
    Json j = Json::object();
    j["orders"] = vec_to_json(r.additive_orders);
    Json table = Json::array();
    for (const auto& row : r.struct_consts) {
        Json jrow = Json::array();
        for (const RElem& e : row) jrow.push_back(vec_to_json(e));
        table.push_back(jrow);
    }
    j["struct"] = table;
    j["unit"] = vec_to_json(r.unit);
    return j;
}

Ring ring_from_json(const Json& j) {
    expect_fields(j, {"orders", "struct", "unit"}, "ring");
    IntVec orders = vec_from_json(j["orders"], "ring.orders");
    const std::size_t r = orders.size();
    const Json& table = j["struct"];
    if (!table.is_array() || table.size() != r)
        throw ValidationError{"ring.struct: expected " + std::to_string(r) + " rows"};
    std::vector<std::vector<RElem>> sc(r, std::vector<RElem>(r));
    for (std::size_t i = 0; i < r; ++i) {
        const std::string wi = "ring.struct[" + std::to_string(i) + "]";
        if (!table[i].is_array() || table[i].size() != r)
            throw ValidationError{wi + ": expected " + std::to_string(r) + " entries"};
        for (std::size_t k = 0; k < r; ++k)
            sc[i][k] = vec_from_json(table[i][k], wi + "[" + std::to_string(k) + "]");
    }
    RElem unit = vec_from_json(j["unit"], "ring.unit");
    return make_ring(std::move(orders), std::move(sc), std::move(unit));
}

Json module_to_json(const Module& m) {
    Json j = Json::object();
    j["ring"] = ring_to_json(m.ring);
    j["orders"] = vec_to_json(m.orders);
    Json acts = Json::array();
    for (const IntMatrix& a : m.actions) acts.push_back(matrix_to_json(a));
    j["actions"] = acts;
    return j;
}

Module module_from_json(const Json& j) {
    expect_fields(j, {"ring", "orders", "actions"}, "module");
    Ring ring = ring_from_json(j["ring"]);
    IntVec orders = vec_from_json(j["orders"], "module.orders");
    const Json& acts = j["actions"];
    if (!acts.is_array() || acts.size() != ring.rank())
        throw ValidationError{"module.actions: expected one matrix per ring basis element"};
    std::vector<IntMatrix> actions;
    actions.reserve(acts.size());
    for (std::size_t i = 0; i < acts.size(); ++i) {
        IntMatrix a = matrix_from_json(acts[i], "module.actions[" + std::to_string(i) + "]");
        // [] carries no column count; rebuild the degenerate shape
        if (a.rows() == 0) a = IntMatrix(orders.size(), orders.size());
        actions.push_back(std::move(a));
    }
    return make_module(ring, orders, actions);
}

Json hom_to_json(const Hom& h) {
    Json j = Json::object();
    j["source"] = module_to_json(h.source);
    j["target"] = module_to_json(h.target);
    j["matrix"] = matrix_to_json(h.matrix);
    return j;
}

Hom hom_from_json(const Json& j) {
    expect_fields(j, {"source", "target", "matrix"}, "hom");
    Module source = module_from_json(j["source"]);
    Module target = module_from_json(j["target"]);
    IntMatrix m = matrix_from_json(j["matrix"], "hom.matrix");
    if (m.rows() == 0) m = IntMatrix(0, source.rank());
    return make_hom(source, target, m);
}

Json formula_to_json(const PpFormula& f) { return pp_to_text(f); }

PpFormula formula_from_json(const Ring& ring, const Json& j) {
    if (!j.is_string()) throw ValidationError{"formula: expected a grammar text string"};
    return parse_pp(ring, j.get<std::string>());
}

Json submodule_to_json(const Submodule& s) {
    Json j = Json::object();
    j["generators"] = matrix_to_json(s.group.gen_matrix());
    j["cardinality"] = int_to_json(s.cardinality());
    return j;
}

Submodule submodule_from_json(const Json& j) {
    expect_fields(j, {"module", "generators"}, "submodule");
    Module m = module_from_json(j["module"]);
    IntMatrix gens = matrix_from_json(j["generators"], "submodule.generators");
    std::vector<IntVec> rows;
    for (std::size_t i = 0; i < gens.rows(); ++i) {
        if (gens.cols() != m.rank())
            throw ValidationError{"submodule.generators: wrong coordinate count"};
        rows.push_back(gens.row(i));
    }
    return submodule_generate(m, rows);
}

// ---- tagged reports ----------------------------------------------------------

Json error_record(const std::string& type, const std::string& message) {
    Json j = Json::object();
    j["kind"] = "error";
    Json e = Json::object();
    e["type"] = type;
    e["message"] = message;
    j["error"] = e;
    return j;
}

Json hom_analysis_record(const Hom& h, const HomAnalysis& a) {
    Json j = Json::object();
    j["kind"] = "hom_analysis";
    j["hom"] = hom_to_json(h);
    j["kernel"] = submodule_to_json(a.kernel);
    j["image"] = submodule_to_json(a.image);
    j["injective"] = a.injective;
    j["surjective"] = a.surjective;
    return j;
}

Json formula_record(const PpFormula& f, const Module* evaluated_on) {
    Json j = Json::object();
    j["kind"] = "formula";
    j["text"] = pp_to_text(f);
    j["free_count"] = int_to_json(Int(static_cast<long>(f.free_count)));
    j["bound_count"] = int_to_json(Int(static_cast<long>(f.bound_count)));
    if (evaluated_on != nullptr) {
        CanonicalSubgroup sol = pp_subgroup(f, *evaluated_on);
        Json s = Json::object();
        s["generators"] = matrix_to_json(sol.gen_matrix());
        s["cardinality"] = int_to_json(sol.cardinality());
        j["solution_subgroup"] = s;
    }
    return j;
}

Json classify_record(const EmbeddingClass& c) {
    Json j = Json::object();
    j["kind"] = "classify";
    j["embedding"] = opt_bool(c.is_embedding);
    j["rd"] = opt_bool(c.is_rd);
    j["pure"] = opt_bool(c.is_pure);
    j["split"] = opt_bool(c.is_split);
    Json w = nullptr;
    if (c.kernel_witness) {
        w = Json::object();
        w["element"] = vec_to_json(*c.kernel_witness);
    } else if (c.rd_witness) {
        w = Json::object();
        w["r"] = vec_to_json(*c.rd_witness);
    } else if (c.purity_witness) {
        w = Json::object();
        w["formula"] = pp_to_text(c.purity_witness->formula);
        Json args = Json::array();
        for (const IntVec& v : c.purity_witness->source_args) args.push_back(vec_to_json(v));
        w["args"] = args;
    }
    j["witness"] = w;
    return j;
}

Json pushout_record(const PushoutResult& p) {
    Json j = Json::object();
    j["kind"] = "pushout";
    j["apex"] = module_to_json(p.apex);
    j["leg1"] = hom_to_json(p.leg1);
    j["leg2"] = hom_to_json(p.leg2);
    if (p.mode) {
        j["mode"] = mode_name(*p.mode);
        j["leg1_preserves_mode"] = opt_bool(p.leg1_preserves_mode);
        j["leg2_preserves_mode"] = opt_bool(p.leg2_preserves_mode);
    }
    return j;
}

Json independence_record(const IndependenceSquare& sq) {
    Json j = Json::object();
    j["kind"] = "independence";
    j["mode"] = mode_name(sq.mode);
    j["verdict"] = sq.verdict;
    j["corner_hom"] = hom_to_json(sq.corner_hom);
    return j;
}

Json independence_base_record(const IndependenceBase& b, Mode mode) {
    Json j = Json::object();
    j["kind"] = "independence_base";
    j["mode"] = mode_name(mode);
    j["base"] = submodule_to_json(b.base);
    j["enlarged"] = submodule_to_json(b.enlarged);
    return j;
}

Json chain_record(const ChainDecomposition& c, Mode mode) {
    Json j = Json::object();
    j["kind"] = "chain";
    j["mode"] = mode_name(mode);
    Json a = Json::array(), b = Json::array();
    for (const Submodule& s : c.a_chain) a.push_back(submodule_to_json(s));
    for (const Submodule& s : c.b_chain) b.push_back(submodule_to_json(s));
    j["a_chain"] = a;
    j["b_chain"] = b;
    return j;
}

Json extension_record(const std::optional<Hom>& h) {
    Json j = Json::object();
    j["kind"] = "extension";
    j["found"] = h.has_value();
    j["hom"] = h ? hom_to_json(*h) : Json(nullptr);
    return j;
}

namespace {

std::string filter_name(ClassFilter f) {
    switch (f) {
        case ClassFilter::all: return "all";
        case ClassFilter::torsion_free: return "torsion-free";
        case ClassFilter::explicit_list: return "explicit";
    }
    return "?";
}

Json counterexample_to_json(const std::optional<InjectivityCounterexample>& c) {
    if (!c) return nullptr;
    Json j = Json::object();
    j["f"] = hom_to_json(c->f);
    j["g"] = hom_to_json(c->g);
    return j;
}

}  // namespace

Json injectivity_record(const InjectivityReport& r) {
    const std::string bound = r.universe.max_module_size.get_str();
    Json j = Json::object();
    j["kind"] = "injectivity";
    j["label"] = (r.verdict ? "verdict-injective at bound " : "not verdict-injective at bound ") +
                 bound;
    j["verdict"] = r.verdict;
    j["mode"] = mode_name(r.universe.mode);
    j["ring"] = r.universe.ring.label;
    j["bound"] = bound;
    j["filter"] = filter_name(r.universe.filter);
    j["subject"] = module_to_json(r.subject);
    j["pairs_checked"] = int_to_json(Int(r.pairs_checked));
    j["counterexample"] = counterexample_to_json(r.counterexample);
    return j;
}

Json baer_record(const BaerReport& r, const Int& bound) {
    Json j = Json::object();
    j["kind"] = "baer";
    j["pass"] = r.pass;
    j["bound"] = int_to_json(bound);
    j["ideals_checked"] = int_to_json(Int(r.ideals_checked));
    j["counterexample"] = counterexample_to_json(r.counterexample);
    return j;
}

Json sigma_record(const SigmaReport& r) {
    Json j = Json::object();
    j["kind"] = "sigma";
    j["all_pass"] = r.all_pass;
    j["first_failing_power"] =
        r.first_failing_power
            ? Json(int_to_json(Int(static_cast<long>(*r.first_failing_power))))
            : Json(nullptr);
    Json powers = Json::array();
    for (const InjectivityReport& p : r.per_power) powers.push_back(injectivity_record(p));
    j["powers"] = powers;
    return j;
}

Json closure_record(const ClosureReport& r) {
    Json j = Json::object();
    j["kind"] = "closure_audit";
    j["closed"] = r.closed;
    j["cases_checked"] = int_to_json(Int(r.cases_checked));
    Json v = Json::array();
    for (const ClosureViolation& x : r.violations) {
        Json e = Json::object();
        e["violation"] = x.kind;
        e["subject"] = module_to_json(x.subject);
        e["produced"] = module_to_json(x.produced);
        v.push_back(e);
    }
    j["violations"] = v;
    return j;
}

Json noetherian_record(const NoetherianReport& r) {
    Json j = Json::object();
    j["kind"] = "noetherian";
    Json inj = Json::array();
    for (const Module& m : r.injectives) inj.push_back(module_to_json(m));
    j["injectives"] = inj;
    j["sums_closed"] = r.sums_closed;
    j["chains_closed"] = r.chains_closed;
    j["csb_holds"] = r.csb_holds;
    j["cases_checked"] = int_to_json(Int(r.cases_checked));
    Json v = Json::array();
    for (const NoetherianViolation& x : r.violations) {
        Json e = Json::object();
        e["violation"] = x.kind;
        Json in = Json::array();
        for (const Module& m : x.inputs) in.push_back(module_to_json(m));
        e["inputs"] = in;
        e["produced"] = x.produced ? Json(module_to_json(*x.produced)) : Json(nullptr);
        v.push_back(e);
    }
    j["violations"] = v;
    return j;
}

std::string serialize(const Json& j) { return j.dump(2) + "\n"; }

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError{path + ": cannot open file"};
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError{path + ": " + e.what()};
    }
}

}  // namespace finmod
