#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "finmod/suites.hpp"

using namespace finmod;

namespace {

SuiteConfig small_config(long bound, bool parallel) {
    SuiteConfig cfg;
    cfg.bound = bound;
    cfg.parallel = parallel;
    return cfg;
}

const SuiteResult& single(const std::vector<SuiteResult>& rows, const std::string& scope_part) {
    for (const SuiteResult& r : rows)
        if (r.scope.find(scope_part) != std::string::npos) return r;
    REQUIRE(false);
    return rows.front();
}

}  // namespace

TEST_CASE("the suite registry lists ten suites and rejects unknown names") {
    std::vector<std::string> names = suite_names();
    CHECK(names.size() == 10);
    CHECK(names.front() == "linalg");
    CHECK(names.back() == "witness-surrogate");

    bool threw = false;
    try {
        run_suite("nosuch", standard_test_rings(), {});
    } catch (const ValidationError& e) {
        threw = true;
        CHECK(e.message == "unknown suite: nosuch");
    }
    CHECK(threw);
}

TEST_CASE("the linear algebra grid agrees with enumeration") {
    std::vector<SuiteResult> rows = run_suite("linalg", {}, small_config(8, true));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].passed);
    CHECK_FALSE(rows[0].capped);
    CHECK(rows[0].counterexample.is_null());
    // 8190 exhaustive matrices + 3 * 4096 sampled, 20 checks each
    CHECK(rows[0].checked == 20478 * 20);
}

TEST_CASE("property suites pass on small universes") {
    std::vector<Ring> z4{make_zmod(4)};
    std::vector<Ring> z9{make_zmod(9)};

    for (const SuiteResult& r : run_suite("purity-split", z4, small_config(8, true))) {
        CHECK(r.passed);
        CHECK(r.checked > 0);
    }
    std::vector<SuiteResult> cls = run_suite("injective-classification", z9, small_config(9, true));
    REQUIRE(cls.size() == 2);  // one row per mode
    CHECK(single(cls, "plain").passed);
    CHECK(single(cls, "pure").passed);
    for (const SuiteResult& r : run_suite("injective-closure", z4, small_config(8, true)))
        CHECK(r.passed);
}

TEST_CASE("parallel and serial runs render identical reports") {
    std::vector<Ring> rings{make_zmod(4)};
    for (const std::string& name :
         {std::string("push-preservation"), std::string("local-character"),
          std::string("witness-surrogate")}) {
        std::vector<SuiteResult> serial = run_suite(name, rings, small_config(8, false));
        std::vector<SuiteResult> par = run_suite(name, rings, small_config(8, true));
        std::vector<SuiteResult> par2 = run_suite(name, rings, small_config(8, true));
        std::string a = serialize(suite_report(serial, small_config(8, false)));
        std::string b = serialize(suite_report(par, small_config(8, true)));
        std::string c = serialize(suite_report(par2, small_config(8, true)));
        CHECK(a == b);
        CHECK(b == c);
        for (const SuiteResult& r : serial) CHECK(r.passed);
    }
}

TEST_CASE("suite setup propagates resource caps") {
    SuiteConfig cfg = small_config(8, false);
    cfg.limits.max_candidates = 1;
    bool capped = false;
    try {
        run_suite("push-preservation", {make_zmod(4)}, cfg);
    } catch (const ResourceCapError&) {
        capped = true;
    }
    CHECK(capped);
}

TEST_CASE("reports carry fixed fields in a fixed order") {
    std::vector<SuiteResult> rows = run_suite("purity-split", {make_zmod(2)}, small_config(4, true));
    Json rep = suite_report(rows, small_config(4, true));
    std::vector<std::string> keys;
    for (auto it = rep.begin(); it != rep.end(); ++it) keys.push_back(it.key());
    CHECK(keys == std::vector<std::string>{"kind", "bound", "suites", "total_checked", "passed",
                                           "capped"});
    REQUIRE(rep["suites"].size() == rows.size());
    std::vector<std::string> row_keys;
    for (auto it = rep["suites"][0].begin(); it != rep["suites"][0].end(); ++it)
        row_keys.push_back(it.key());
    CHECK(row_keys == std::vector<std::string>{"name", "scope", "checked", "passed", "capped",
                                               "counterexample"});
    CHECK(rep["passed"] == true);
    CHECK(rep["bound"] == "4");
}
