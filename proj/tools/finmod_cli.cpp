// finmod: exact computations with modules over finite rings.
//
// Every command reads JSON objects (rings, modules, homs, submodules) or a
// formula in the pp grammar, runs one operation, and prints one JSON record
// with a fixed field order and all integers as decimal strings, so identical
// invocations produce identical bytes. Exit codes: 0 for a completed
// computation (whatever the verdict), 1 for a domain error (the output is an
// error record naming the violation), 2 when a resource cap was exceeded.
//
// Resource caps are flags; each falls back to an environment variable
// (FINMOD_BOUND, FINMOD_MAX_CANDIDATES, FINMOD_AUT_ORBIT_CAP,
// FINMOD_MAX_SUBJECT_SIZE, FINMOD_FORMULA_BUDGET) when the flag is absent.

#include "finmod/suites.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace finmod;

namespace {

long cap_default(const char* env, long fallback) {
    const char* v = std::getenv(env);
    if (!v || !*v) return fallback;
    std::string s(v);
    std::size_t used = 0;
    long out = 0;
    try {
        out = std::stol(s, &used);
    } catch (...) {
        used = 0;
    }
    if (used != s.size() || out < 1)
        throw ValidationError{std::string(env) + " must be a positive integer, got \"" + s + "\""};
    return out;
}

Ring resolve_ring(const std::string& spec) {
    if (spec == "f2xy") {
        Ring r = make_trunc_poly(2, 2);
        r.label = "F2[x,y]/(x,y)^2";
        return r;
    }
    if (spec.size() > 1 && spec[0] == 'z' &&
        spec.find_first_not_of("0123456789", 1) == std::string::npos)
        return make_zmod(Int(spec.substr(1)));
    return ring_from_json(load_json_file(spec));
}

Mode resolve_mode(std::string name) {
    if (name == "emb") name = "plain";
    std::optional<Mode> m = parse_mode(name);
    if (!m) throw ValidationError{"unknown mode: expected emb, plain, rd or pure, got \"" + name +
                                  "\""};
    return *m;
}

void emit(const Json& j, const std::string& out_path) {
    std::string bytes = serialize(j);
    if (out_path.empty()) {
        std::cout << bytes;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw ValidationError{"cannot open output file: " + out_path};
    f << bytes;
}

// flags shared by every command that realizes a universe of modules
struct UniverseFlags {
    std::string ring_spec;
    std::string mode = "plain";
    long bound = 16;
    long max_candidates = kDefaultEnumCandidateCap;
    long aut_orbit_cap = 4096;
    long max_subject_size = 4096;
    std::string filter = "all";
    std::string members_path;
};

void add_cap_flags(CLI::App* cmd, UniverseFlags& u) {
    u.bound = cap_default("FINMOD_BOUND", 16);
    u.max_candidates = cap_default("FINMOD_MAX_CANDIDATES", kDefaultEnumCandidateCap);
    u.aut_orbit_cap = cap_default("FINMOD_AUT_ORBIT_CAP", 4096);
    u.max_subject_size = cap_default("FINMOD_MAX_SUBJECT_SIZE", 4096);
    cmd->add_option("--bound", u.bound, "universe cardinality bound")->capture_default_str();
    cmd->add_option("--max-candidates", u.max_candidates, "enumeration candidate budget")
        ->capture_default_str();
    cmd->add_option("--aut-orbit-cap", u.aut_orbit_cap,
                    "skip automorphism-orbit deduplication beyond this endomorphism count")
        ->capture_default_str();
    cmd->add_option("--max-subject-size", u.max_subject_size,
                    "cap on internally built subjects (powers, sums)")
        ->capture_default_str();
}

void add_universe_flags(CLI::App* cmd, UniverseFlags& u, bool with_mode = true) {
    cmd->add_option("--ring", u.ring_spec, "ring: z<N>, f2xy, or a JSON file")->required();
    if (with_mode)
        cmd->add_option("--mode", u.mode, "embedding mode: emb|rd|pure (emb = plain)")
            ->capture_default_str();
    add_cap_flags(cmd, u);
    cmd->add_option("--filter", u.filter, "class filter: all|torsion-free|explicit")
        ->capture_default_str();
    cmd->add_option("--members", u.members_path,
                    "JSON array of modules (required by --filter explicit)");
}

UniverseSpec make_universe(const UniverseFlags& uf) {
    UniverseSpec u;
    u.ring = resolve_ring(uf.ring_spec);
    u.mode = resolve_mode(uf.mode);
    u.max_module_size = uf.bound;
    u.aut_orbit_cap = uf.aut_orbit_cap;
    u.max_subject_size = uf.max_subject_size;
    u.limits.max_candidates = uf.max_candidates;
    if (uf.filter == "all")
        u.filter = ClassFilter::all;
    else if (uf.filter == "torsion-free")
        u.filter = ClassFilter::torsion_free;
    else if (uf.filter == "explicit")
        u.filter = ClassFilter::explicit_list;
    else
        throw ValidationError{"unknown filter: expected all, torsion-free or explicit, got \"" +
                              uf.filter + "\""};
    if (!uf.members_path.empty()) {
        Json j = load_json_file(uf.members_path);
        if (!j.is_array())
            throw ValidationError{uf.members_path + ": expected a JSON array of modules"};
        for (const Json& m : j) u.members.push_back(module_from_json(m));
    }
    if (u.filter == ClassFilter::explicit_list && u.members.empty())
        throw ValidationError{"--filter explicit requires --members"};
    return u;
}

Module load_module(const std::string& path) { return module_from_json(load_json_file(path)); }
Hom load_hom(const std::string& path) { return hom_from_json(load_json_file(path)); }
Submodule load_submodule(const std::string& path) {
    return submodule_from_json(load_json_file(path));
}

int run_cli(int argc, char** argv) {
    CLI::App app{"exact module theory over finite rings: embeddings, pushouts, independence, "
                 "relative injectivity, and the property suites"};
    app.require_subcommand(1);
    std::function<int()> action;

    // ring ------------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("ring", "validate a ring and print its canonical form");
        auto ring_spec = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        cmd->add_option("--ring", *ring_spec, "ring: z<N>, f2xy, or a JSON file")->required();
        cmd->add_option("--out", *out, "write the record here instead of stdout");
        cmd->callback([&action, ring_spec, out] {
            action = [ring_spec, out] {
                emit(ring_to_json(resolve_ring(*ring_spec)), *out);
                return 0;
            };
        });
    }

    // module ----------------------------------------------------------------
    {
        auto* cmd =
            app.add_subcommand("module", "validate a module and print its canonical form");
        auto path = std::make_shared<std::string>();
        auto ring_spec = std::make_shared<std::string>();
        auto regular = std::make_shared<bool>(false);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--module", *path, "module JSON file");
        cmd->add_flag("--regular", *regular, "the ring as a module over itself");
        cmd->add_option("--ring", *ring_spec, "ring for --regular");
        cmd->add_option("--out", *out, "write the record here instead of stdout");
        cmd->callback([&action, path, ring_spec, regular, out] {
            action = [path, ring_spec, regular, out] {
                if (*regular == !path->empty())
                    throw ValidationError{"pass exactly one of --module or --regular"};
                Module m = *regular ? regular_module(resolve_ring(*ring_spec))
                                    : load_module(*path);
                emit(module_to_json(m), *out);
                return 0;
            };
        });
    }

    // hom -------------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("hom", "validate a hom and analyze kernel and image");
        auto path = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        cmd->add_option("--hom", *path, "hom JSON file")->required();
        cmd->add_option("--out", *out, "write the record here instead of stdout");
        cmd->callback([&action, path, out] {
            action = [path, out] {
                Hom h = load_hom(*path);
                emit(hom_analysis_record(h, analyze_hom(h)), *out);
                return 0;
            };
        });
    }

    // pp --------------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand(
            "pp", "parse a pp formula, optionally evaluating its solution subgroup");
        auto ring_spec = std::make_shared<std::string>();
        auto text = std::make_shared<std::string>();
        auto file = std::make_shared<std::string>();
        auto module_path = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        cmd->add_option("--ring", *ring_spec, "ring: z<N>, f2xy, or a JSON file")->required();
        cmd->add_option("--formula", *text, "formula text");
        cmd->add_option("--formula-file", *file, "JSON file holding the formula text string");
        cmd->add_option("--module", *module_path, "evaluate the solution subgroup here");
        cmd->add_option("--out", *out, "write the record here instead of stdout");
        cmd->callback([&action, ring_spec, text, file, module_path, out] {
            action = [ring_spec, text, file, module_path, out] {
                if (text->empty() == file->empty())
                    throw ValidationError{"pass exactly one of --formula or --formula-file"};
                Ring r = resolve_ring(*ring_spec);
                PpFormula f = text->empty() ? formula_from_json(r, load_json_file(*file))
                                            : parse_pp(r, *text);
                std::optional<Module> m;
                if (!module_path->empty()) m = load_module(*module_path);
                emit(formula_record(f, m ? &*m : nullptr), *out);
                return 0;
            };
        });
    }

    // classify --------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand(
            "classify", "classify a hom: embedding, rd, pure, split, with witnesses");
        auto path = std::make_shared<std::string>();
        auto mode = std::make_shared<std::string>("plain");
        auto budget = std::make_shared<long>(cap_default("FINMOD_FORMULA_BUDGET", 20000));
        auto out = std::make_shared<std::string>();
        cmd->add_option("--hom", *path, "hom JSON file")->required();
        cmd->add_option("--mode", *mode, "mode of interest: emb|rd|pure (the record carries all)")
            ->capture_default_str();
        cmd->add_option("--formula-budget", *budget, "witness search budget")
            ->capture_default_str();
        cmd->add_option("--out", *out, "write the record here instead of stdout");
        cmd->callback([&action, path, mode, budget, out] {
            action = [path, mode, budget, out] {
                resolve_mode(*mode);  // the flag is validated; every property is reported
                FormulaBounds fb;
                fb.max_formulas = *budget;
                emit(classify_record(classify_embedding(load_hom(*path), {}, fb)), *out);
                return 0;
            };
        });
    }

    // pushout ---------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("pushout", "pushout of two homs out of a shared source");
        auto f1 = std::make_shared<std::string>();
        auto f2 = std::make_shared<std::string>();
        auto mode = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        cmd->add_option("--f1", *f1, "hom JSON file")->required();
        cmd->add_option("--f2", *f2, "hom JSON file")->required();
        cmd->add_option("--mode", *mode, "also record whether the legs preserve this mode");
        cmd->add_option("--out", *out, "write the record here instead of stdout");
        cmd->callback([&action, f1, f2, mode, out] {
            action = [f1, f2, mode, out] {
                std::optional<Mode> m;
                if (!mode->empty()) m = resolve_mode(*mode);
                emit(pushout_record(pushout(load_hom(*f1), load_hom(*f2), m)), *out);
                return 0;
            };
        });
    }

    // indep -----------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand(
            "indep", "independence verdict for a commuting square of four homs");
        auto f1 = std::make_shared<std::string>();
        auto f2 = std::make_shared<std::string>();
        auto h1 = std::make_shared<std::string>();
        auto h2 = std::make_shared<std::string>();
        auto mode = std::make_shared<std::string>("plain");
        auto out = std::make_shared<std::string>();
        cmd->add_option("--f1", *f1, "hom M0 -> M1")->required();
        cmd->add_option("--f2", *f2, "hom M0 -> M2")->required();
        cmd->add_option("--h1", *h1, "hom M1 -> M3")->required();
        cmd->add_option("--h2", *h2, "hom M2 -> M3")->required();
        cmd->add_option("--mode", *mode, "embedding mode")->capture_default_str();
        cmd->add_option("--out", *out, "write the record here instead of stdout");
        cmd->callback([&action, f1, f2, h1, h2, mode, out] {
            action = [f1, f2, h1, h2, mode, out] {
                IndependenceSquare sq =
                    is_independent_square(load_hom(*f1), load_hom(*f2), load_hom(*h1),
                                          load_hom(*h2), resolve_mode(*mode));
                emit(independence_record(sq), *out);
                return 0;
            };
        });
    }

    // indep-base ------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand(
            "indep-base", "minimal base and enlargement making two submodules independent");
        auto m1 = std::make_shared<std::string>();
        auto m2 = std::make_shared<std::string>();
        auto mode = std::make_shared<std::string>("plain");
        auto out = std::make_shared<std::string>();
        cmd->add_option("--m1", *m1, "submodule JSON file {module, generators}")->required();
        cmd->add_option("--m2", *m2, "submodule JSON file over the same ambient")->required();
        cmd->add_option("--mode", *mode, "embedding mode")->capture_default_str();
        cmd->add_option("--out", *out, "write the record here instead of stdout");
        cmd->callback([&action, m1, m2, mode, out] {
            action = [m1, m2, mode, out] {
                Submodule s1 = load_submodule(*m1);
                Submodule s2 = load_submodule(*m2);
                if (!(s1.ambient == s2.ambient))
                    throw ValidationError{"--m1 and --m2 must share their ambient module"};
                Mode m = resolve_mode(*mode);
                emit(independence_base_record(find_independence_base(s1, s2, s1.ambient, m), m),
                     *out);
                return 0;
            };
        });
    }

    // decompose -------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand(
            "decompose", "chain decomposition of a mode-embedding into independent pieces");
        auto path = std::make_shared<std::string>();
        auto mode = std::make_shared<std::string>("plain");
        auto step = std::make_shared<long>(4);
        auto cap =
            std::make_shared<long>(cap_default("FINMOD_MAX_CANDIDATES", kDefaultEnumCandidateCap));
        auto out = std::make_shared<std::string>();
        cmd->add_option("--hom", *path, "hom JSON file")->required();
        cmd->add_option("--mode", *mode, "embedding mode")->capture_default_str();
        cmd->add_option("--step", *step, "preferred index bound per chain step")
            ->capture_default_str();
        cmd->add_option("--max-candidates", *cap, "search budget")->capture_default_str();
        cmd->add_option("--out", *out, "write the record here instead of stdout");
        cmd->callback([&action, path, mode, step, cap, out] {
            action = [path, mode, step, cap, out] {
                Mode m = resolve_mode(*mode);
                emit(chain_record(decompose_chain(load_hom(*path), m, Int(*step), Int(*cap)), m),
                     *out);
                return 0;
            };
        });
    }

    // inj -------------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand(
            "inj", "relative injectivity of a subject against a bounded universe");
        auto uf = std::make_shared<UniverseFlags>();
        auto subject = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        cmd->add_option("--subject", *subject, "module JSON file")->required();
        add_universe_flags(cmd, *uf);
        cmd->add_option("--out", *out, "write the record here instead of stdout");
        cmd->callback([&action, uf, subject, out] {
            action = [uf, subject, out] {
                emit(injectivity_record(is_rel_injective(load_module(*subject),
                                                         make_universe(*uf))),
                     *out);
                return 0;
            };
        });
    }

    // baer ------------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand(
            "baer", "ideal extension test against the ring as a module over itself");
        auto uf = std::make_shared<UniverseFlags>();
        auto subject = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        cmd->add_option("--subject", *subject, "module JSON file")->required();
        add_universe_flags(cmd, *uf, /*with_mode=*/false);
        cmd->add_option("--out", *out, "write the record here instead of stdout");
        cmd->callback([&action, uf, subject, out] {
            action = [uf, subject, out] {
                UniverseSpec u = make_universe(*uf);
                emit(baer_record(baer_ideal_test(load_module(*subject), u), u.max_module_size),
                     *out);
                return 0;
            };
        });
    }

    // sigma -----------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand(
            "sigma", "relative injectivity of the subject and its finite powers");
        auto uf = std::make_shared<UniverseFlags>();
        auto subject = std::make_shared<std::string>();
        auto power = std::make_shared<long>(3);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--subject", *subject, "module JSON file")->required();
        cmd->add_option("--power", *power, "highest power tested")->capture_default_str();
        add_universe_flags(cmd, *uf);
        cmd->add_option("--out", *out, "write the record here instead of stdout");
        cmd->callback([&action, uf, subject, power, out] {
            action = [uf, subject, power, out] {
                if (*power < 1) throw ValidationError{"--power must be >= 1"};
                SigmaReport r =
                    sigma_injective_bounded(load_module(*subject), make_universe(*uf),
                                            static_cast<std::size_t>(*power));
                emit(sigma_record(r), *out);
                return 0;
            };
        });
    }

    // noetherian ------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand(
            "noetherian", "closure of the verdict-injectives under sums, chains and mutual "
                          "embeddings");
        auto uf = std::make_shared<UniverseFlags>();
        auto arity = std::make_shared<long>(3);
        auto out = std::make_shared<std::string>();
        add_universe_flags(cmd, *uf);
        cmd->add_option("--arity", *arity, "largest direct-sum arity")->capture_default_str();
        cmd->add_option("--out", *out, "write the record here instead of stdout");
        cmd->callback([&action, uf, arity, out] {
            action = [uf, arity, out] {
                if (*arity < 1) throw ValidationError{"--arity must be >= 1"};
                NoetherianReport r = noetherian_bounded_check(
                    make_universe(*uf), static_cast<std::size_t>(*arity));
                emit(noetherian_record(r), *out);
                return 0;
            };
        });
    }

    // audit -----------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand(
            "audit", "closure audit of a module class under submodules, images and sums");
        auto uf = std::make_shared<UniverseFlags>();
        auto out = std::make_shared<std::string>();
        add_universe_flags(cmd, *uf);
        cmd->add_option("--out", *out, "write the record here instead of stdout");
        cmd->callback([&action, uf, out] {
            action = [uf, out] {
                emit(closure_record(audit_class_closure(make_universe(*uf))), *out);
                return 0;
            };
        });
    }

    // suite -----------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("suite", "property suites");
        cmd->require_subcommand(1);
        auto* run = cmd->add_subcommand("run", "run one named suite, or all of them");
        auto name = std::make_shared<std::string>();
        auto ring_spec = std::make_shared<std::string>("all");
        auto serial = std::make_shared<bool>(false);
        auto uf = std::make_shared<UniverseFlags>();
        auto out = std::make_shared<std::string>();
        run->add_option("--name", *name, "suite name, or \"all\"")->required();
        run->add_option("--ring", *ring_spec, "z<N>, f2xy, a JSON file, or \"all\"")
            ->capture_default_str();
        run->add_flag("--serial", *serial, "run cases on one thread (same bytes either way)");
        add_cap_flags(run, *uf);
        run->add_option("--out", *out, "write the report here instead of stdout");
        run->callback([&action, name, ring_spec, serial, uf, out] {
            action = [name, ring_spec, serial, uf, out] {
                SuiteConfig cfg;
                cfg.bound = uf->bound;
                cfg.parallel = !*serial;
                cfg.limits.max_candidates = uf->max_candidates;
                cfg.aut_orbit_cap = uf->aut_orbit_cap;
                cfg.max_subject_size = uf->max_subject_size;
                std::vector<Ring> rings = *ring_spec == "all"
                                              ? standard_test_rings()
                                              : std::vector<Ring>{resolve_ring(*ring_spec)};
                std::vector<std::string> names =
                    *name == "all" ? suite_names() : std::vector<std::string>{*name};
                std::vector<SuiteResult> rows;
                for (const std::string& n : names)
                    for (SuiteResult& r : run_suite(n, rings, cfg)) rows.push_back(std::move(r));
                emit(suite_report(rows, cfg), *out);
                bool failed = false, capped = false;
                for (const SuiteResult& r : rows) {
                    failed = failed || !r.passed;
                    capped = capped || r.capped;
                }
                return capped ? 2 : failed ? 1 : 0;
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    return action ? action() : 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const ValidationError& e) {
        std::cout << serialize(error_record("validation", e.message));
        return 1;
    } catch (const ResourceCapError& e) {
        std::cout << serialize(error_record("resource_cap", e.message));
        return 2;
    } catch (const std::exception& e) {
        std::cout << serialize(error_record("internal", e.what()));
        return 1;
    }
}
