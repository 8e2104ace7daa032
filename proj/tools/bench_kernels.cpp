// Compares the OpenMP suite runner against the serial reference path on a
// representative slice of the property suites, and verifies that both paths
// render byte-identical reports (the merge is ordered by case index, so the
// schedule must never show in the output).

#include "finmod/suites.hpp"

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace finmod;
using Clock = std::chrono::steady_clock;

namespace {

double run_once(const std::string& name, const std::vector<Ring>& rings, const SuiteConfig& cfg,
                std::string* bytes) {
    auto t0 = Clock::now();
    std::vector<SuiteResult> rows = run_suite(name, rings, cfg);
    double s = std::chrono::duration<double>(Clock::now() - t0).count();
    *bytes = serialize(suite_report(rows, cfg));
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    long bound = argc > 1 ? std::atol(argv[1]) : 12;
#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without openmp; both paths are serial\n");
#endif
    std::printf("universe bound: %ld\n\n", bound);
    std::printf("%-22s %10s %10s %9s  %s\n", "suite", "serial", "parallel", "speedup", "reports");

    std::vector<Ring> rings = standard_test_rings();
    bool all_equal = true;
    double ser_total = 0, par_total = 0;
    for (const std::string& name :
         {std::string("linalg"), std::string("push-preservation"),
          std::string("extension-algorithm"), std::string("indep-calculus")}) {
        SuiteConfig cfg;
        cfg.bound = bound;
        cfg.parallel = false;
        std::string ser_bytes, par_bytes;
        double ser = run_once(name, rings, cfg, &ser_bytes);
        cfg.parallel = true;
        double par = run_once(name, rings, cfg, &par_bytes);
        bool equal = ser_bytes == par_bytes;
        all_equal = all_equal && equal;
        ser_total += ser;
        par_total += par;
        std::printf("%-22s %9.2fs %9.2fs %8.2fx  %s\n", name.c_str(), ser, par,
                    par > 0 ? ser / par : 0.0, equal ? "identical" : "DIFFER");
    }
    std::printf("%-22s %9.2fs %9.2fs %8.2fx\n", "total", ser_total, par_total,
                par_total > 0 ? ser_total / par_total : 0.0);
    if (!all_equal) {
        std::printf("\nparallel and serial reports differ; the merge is broken\n");
        return 1;
    }
    return 0;
}
