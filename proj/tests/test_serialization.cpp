#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "finmod/serialization.hpp"

#include <cstdio>
#include <fstream>

using namespace finmod;

namespace {

Module cyclic_module(const Ring& r, long n) {
    return make_module(r, {Int(n)}, {IntMatrix::identity(1)});
}

bool fails_with(const std::function<void()>& f, const std::string& needle) {
    try {
        f();
    } catch (const ValidationError& e) {
        return e.message.find(needle) != std::string::npos;
    }
    return false;
}

std::string write_temp(const std::string& name, const std::string& body) {
    std::string path = std::string("/tmp/finmod_ser_") + name;
    std::ofstream out(path);
    out << body;
    out.close();
    return path;
}

}  // namespace

TEST_CASE("integer, vector and matrix codecs round-trip and reject junk") {
    Int big("123456789012345678901234567890");
    std::vector<Int> samples{Int(0), Int(-7), Int(42), big, Int(-big)};
    for (const Int& v : samples) CHECK(int_from_json(int_to_json(v), "t") == v);
    CHECK(int_to_json(Int(-3)) == Json("-3"));

    IntVec v{Int(1), Int(-2), Int(0)};
    CHECK(vec_from_json(vec_to_json(v), "t") == v);

    IntMatrix m(2, 3, {1, 2, 3, -4, 5, 6});
    CHECK(matrix_from_json(matrix_to_json(m), "t") == m);
    CHECK(matrix_to_json(IntMatrix(0, 2)) == Json::array());

    CHECK(fails_with([] { int_from_json(Json(7), "spot"); }, "spot: expected a decimal string"));
    CHECK(fails_with([] { int_from_json(Json("1.5"), "t"); }, "not a decimal string"));
    CHECK(fails_with([] { int_from_json(Json(""), "t"); }, "not a decimal string"));
    CHECK(fails_with([] { int_from_json(Json("-"), "t"); }, "not a decimal string"));
    CHECK(fails_with([] { int_from_json(Json(" 3"), "t"); }, "not a decimal string"));
    CHECK(fails_with([] { vec_from_json(Json("x"), "t"); }, "expected an array"));
    CHECK(fails_with([] { matrix_from_json(Json::parse("[[\"1\"],[\"1\",\"2\"]]"), "t"); },
                     "ragged rows"));
}

TEST_CASE("ring records round-trip through the validating constructor") {
    for (const Ring& r : standard_test_rings()) {
        Ring back = ring_from_json(ring_to_json(r));
        CHECK(back == r);
        CHECK(back.commutative == r.commutative);
    }

    // the label is build metadata, not part of the record
    Ring z4 = make_zmod(4);
    CHECK(ring_to_json(z4).contains("label") == false);
    CHECK(ring_from_json(ring_to_json(z4)).label == "");

    std::string golden =
        "{\n"
        "  \"orders\": [\n    \"4\"\n  ],\n"
        "  \"struct\": [\n    [\n      [\n        \"1\"\n      ]\n    ]\n  ],\n"
        "  \"unit\": [\n    \"1\"\n  ]\n"
        "}\n";
    CHECK(serialize(ring_to_json(z4)) == golden);

    // a bad table is rejected by ring validation, not accepted silently
    Json j = ring_to_json(z4);
    j["struct"][0][0] = vec_to_json({Int(2)});
    CHECK_THROWS_AS((void)ring_from_json(j), ValidationError);
}

TEST_CASE("ring records reject schema violations with field names") {
    Json j = ring_to_json(make_zmod(2));
    j["extra"] = "x";
    CHECK(fails_with([&] { ring_from_json(j); }, "unexpected field \"extra\""));

    Json missing = Json::object();
    missing["orders"] = vec_to_json({Int(2)});
    CHECK(fails_with([&] { ring_from_json(missing); }, "missing field \"struct\""));

    Json bad = ring_to_json(make_zmod(2));
    bad["struct"] = Json::array();
    CHECK(fails_with([&] { ring_from_json(bad); }, "ring.struct: expected 1 rows"));
}

TEST_CASE("module records round-trip and re-canonicalize on input") {
    Ring z4 = make_zmod(4);
    Ring f8 = make_trunc_poly(2, 2);
    std::vector<Module> mods = {
        Module::zero(z4),        cyclic_module(z4, 4),
        regular_module(f8),      direct_sum(cyclic_module(z4, 2), cyclic_module(z4, 4)).sum,
        Module::zero(f8),
    };
    for (const Module& m : mods) CHECK(module_from_json(module_to_json(m)) == m);

    // raw presentations are legal input; the decoder canonicalizes them
    Json raw = Json::object();
    raw["ring"] = ring_to_json(z4);
    raw["orders"] = vec_to_json({Int(1), Int(4)});
    raw["actions"] = Json::array({matrix_to_json(IntMatrix::identity(2))});
    CHECK(module_from_json(raw) == cyclic_module(z4, 4));

    Json bad = module_to_json(cyclic_module(z4, 4));
    bad["actions"] = Json::array();
    CHECK(fails_with([&] { module_from_json(bad); }, "one matrix per ring basis element"));
}

TEST_CASE("hom records round-trip, including zero-rank shapes") {
    Ring z4 = make_zmod(4);
    Module zero = Module::zero(z4);
    Module c4 = cyclic_module(z4, 4);
    Module c2 = cyclic_module(z4, 2);

    Hom f = make_hom(c2, c4, IntMatrix(1, 1, {2}));
    CHECK(hom_from_json(hom_to_json(f)) == f);
    CHECK(hom_from_json(hom_to_json(identity_hom(c4))) == identity_hom(c4));
    CHECK(hom_from_json(hom_to_json(zero_hom(zero, c4))) == zero_hom(zero, c4));
    CHECK(hom_from_json(hom_to_json(zero_hom(c4, zero))) == zero_hom(c4, zero));
    CHECK(hom_from_json(hom_to_json(zero_hom(zero, zero))) == zero_hom(zero, zero));

    // an ill-typed matrix is a validation error from make_hom
    Json j = hom_to_json(f);
    j["matrix"] = matrix_to_json(IntMatrix(2, 1, {1, 1}));
    CHECK_THROWS_AS((void)hom_from_json(j), ValidationError);
}

TEST_CASE("formulas serialize as their canonical text") {
    Ring z4 = make_zmod(4);
    PpFormula f = parse_pp(z4, "E w1 . 2*w1 - x1 = 0");
    Json j = formula_to_json(f);
    CHECK(j.is_string());
    CHECK(j.get<std::string>() == pp_to_text(f));
    CHECK(formula_from_json(z4, j) == f);
    CHECK(fails_with([&] { formula_from_json(z4, Json(3)); }, "grammar text string"));
}

TEST_CASE("submodule output and input records") {
    Ring z4 = make_zmod(4);
    Module m = direct_sum(cyclic_module(z4, 2), cyclic_module(z4, 4)).sum;
    Submodule s = submodule_generate(m, {IntVec{Int(0), Int(2)}, IntVec{Int(1), Int(0)}});

    Json out = submodule_to_json(s);
    CHECK(out["generators"] == matrix_to_json(s.group.gen_matrix()));
    CHECK(int_from_json(out["cardinality"], "t") == s.cardinality());

    Json in = Json::object();
    in["module"] = module_to_json(m);
    in["generators"] = out["generators"];
    CHECK(submodule_from_json(in) == s);

    in["generators"] = matrix_to_json(IntMatrix(1, 3, {1, 0, 0}));
    CHECK(fails_with([&] { submodule_from_json(in); }, "wrong coordinate count"));
}

TEST_CASE("classify record carries the four verdicts and the strongest witness") {
    Ring z4 = make_zmod(4);
    Hom f = make_hom(cyclic_module(z4, 2), cyclic_module(z4, 4), IntMatrix(1, 1, {2}));
    Json j = classify_record(classify_embedding(f));
    CHECK(j["kind"] == "classify");
    CHECK(j["embedding"] == Json(true));
    CHECK(j["rd"] == Json(false));
    CHECK(j["pure"] == Json(false));
    CHECK(j["split"] == Json(false));
    CHECK(j["witness"]["r"] == vec_to_json({Int(2)}));

    Json ok = classify_record(classify_embedding(identity_hom(cyclic_module(z4, 4))));
    CHECK(ok["split"] == Json(true));
    CHECK(ok["witness"] == Json(nullptr));
}

TEST_CASE("injectivity and sigma records label verdicts by bound") {
    Ring z4 = make_zmod(4);
    UniverseSpec u;
    u.ring = z4;
    u.mode = Mode::plain;
    u.max_module_size = 16;

    InjectivityReport good = is_rel_injective(cyclic_module(z4, 4), u);
    Json j = injectivity_record(good);
    CHECK(j["kind"] == "injectivity");
    CHECK(j["label"] == "verdict-injective at bound 16");
    CHECK(j["verdict"] == Json(true));
    CHECK(j["mode"] == "plain");
    CHECK(j["bound"] == "16");
    CHECK(j["filter"] == "all");
    CHECK(j["counterexample"] == Json(nullptr));

    u.max_module_size = 8;
    InjectivityReport bad = is_rel_injective(cyclic_module(z4, 2), u);
    Json k = injectivity_record(bad);
    CHECK(k["label"] == "not verdict-injective at bound 8");
    CHECK(k["counterexample"]["f"] == hom_to_json(bad.counterexample->f));

    SigmaReport sr = sigma_injective_bounded(cyclic_module(z4, 2), u, 2);
    Json s = sigma_record(sr);
    CHECK(s["kind"] == "sigma");
    CHECK(s["all_pass"] == Json(false));
    CHECK(s["first_failing_power"] == "1");
    CHECK(s["powers"].size() == 1);
}

TEST_CASE("audit, baer and noetherian records") {
    Ring z4 = make_zmod(4);
    UniverseSpec u;
    u.ring = z4;
    u.mode = Mode::plain;
    u.max_module_size = 8;

    Json a = closure_record(audit_class_closure(u));
    CHECK(a["kind"] == "closure_audit");
    CHECK(a["closed"] == Json(true));
    CHECK(a["violations"] == Json::array());

    Json b = baer_record(baer_ideal_test(cyclic_module(z4, 2), u), u.max_module_size);
    CHECK(b["kind"] == "baer");
    CHECK(b["pass"] == Json(false));
    CHECK(b["counterexample"]["g"].contains("matrix"));

    u.max_module_size = 16;
    Json n = noetherian_record(noetherian_bounded_check(u, 2));
    CHECK(n["kind"] == "noetherian");
    CHECK(n["injectives"].size() == 3);
    CHECK(n["sums_closed"] == Json(true));
    CHECK(n["chains_closed"] == Json(true));
    CHECK(n["csb_holds"] == Json(true));
    CHECK(n["violations"] == Json::array());
}

TEST_CASE("pushout, independence, base, chain and extension records") {
    Ring z4 = make_zmod(4);
    Module c2 = cyclic_module(z4, 2);
    Module c4 = cyclic_module(z4, 4);
    Hom f1 = make_hom(c2, c4, IntMatrix(1, 1, {2}));
    Hom f2 = identity_hom(c2);

    Json p = pushout_record(pushout(f1, f2, Mode::plain));
    CHECK(p["kind"] == "pushout");
    CHECK(p["mode"] == "plain");
    CHECK(p["leg1_preserves_mode"] == Json(true));
    CHECK(module_from_json(p["apex"]).cardinality() == 4);

    Json q = pushout_record(pushout(f1, f2));
    CHECK(q.contains("mode") == false);

    auto ds = direct_sum(c2, c2);
    Submodule m1 = submodule_generate(ds.sum, {ds.inj_a.apply({Int(1)})});
    Submodule m2 = submodule_generate(ds.sum, {ds.inj_b.apply({Int(1)})});
    IndependenceSquare sq =
        is_independent_submodules(zero_submodule(ds.sum), m1, m2, Mode::plain);
    Json i = independence_record(sq);
    CHECK(i["kind"] == "independence");
    CHECK(i["verdict"] == Json(true));

    Json ib = independence_base_record(find_independence_base(m1, m2, ds.sum, Mode::plain),
                                       Mode::plain);
    CHECK(ib["kind"] == "independence_base");
    CHECK(ib["base"]["cardinality"] == "1");

    Json ch = chain_record(decompose_chain(ds.inj_a, Mode::plain), Mode::plain);
    CHECK(ch["kind"] == "chain");
    CHECK(ch["a_chain"].size() == ch["b_chain"].size());

    Json ext = extension_record(solve_extension(ds.inj_a, identity_hom(c2)));
    CHECK(ext["found"] == Json(true));
    Json none = extension_record(std::nullopt);
    CHECK(none["found"] == Json(false));
    CHECK(none["hom"] == Json(nullptr));
}

TEST_CASE("error records and file loading") {
    Json e = error_record("validation", "boom");
    CHECK(e["kind"] == "error");
    CHECK(e["error"]["type"] == "validation");
    CHECK(e["error"]["message"] == "boom");

    CHECK(fails_with([] { load_json_file("/tmp/finmod_ser_does_not_exist.json"); },
                     "cannot open file"));

    std::string path = write_temp("broken.json", "{\"orders\": [\"2\",]}");
    CHECK(fails_with([&] { load_json_file(path); }, path));
    CHECK(fails_with([&] { load_json_file(path); }, "parse error"));
    CHECK(fails_with([&] { load_json_file(path); }, "line 1"));

    std::string ok = write_temp("ok.json", serialize(ring_to_json(make_zmod(4))));
    CHECK(ring_from_json(load_json_file(ok)) == make_zmod(4));
    std::remove(path.c_str());
    std::remove(ok.c_str());
}

TEST_CASE("serialization is deterministic byte for byte") {
    Ring f8 = make_trunc_poly(2, 2);
    Module reg = regular_module(f8);
    std::string once = serialize(module_to_json(reg));
    std::string twice = serialize(module_to_json(module_from_json(module_to_json(reg))));
    CHECK(once == twice);
    CHECK(once.back() == '\n');
    CHECK(once.find(". ") == std::string::npos);  // no floats anywhere
}
