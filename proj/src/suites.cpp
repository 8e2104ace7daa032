#include "finmod/suites.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace finmod {

namespace {

// ---------------------------------------------------------------------------
// case runner

struct CaseOutcome {
    bool ok = true;
    bool capped = false;
    long units = 1;  // individual checks performed by this case
    Json detail;
};

template <typename Fn>
CaseOutcome guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ResourceCapError& e) {
        CaseOutcome out;
        out.ok = false;
        out.capped = true;
        out.detail = error_record("resource_cap", e.message);
        return out;
    } catch (const ValidationError& e) {
        CaseOutcome out;
        out.ok = false;
        out.detail = error_record("validation", e.message);
        return out;
    } catch (const std::exception& e) {
        CaseOutcome out;
        out.ok = false;
        out.detail = error_record("internal", e.what());
        return out;
    } catch (...) {
        CaseOutcome out;
        out.ok = false;
        out.detail = error_record("internal", "unknown error");
        return out;
    }
}

// Runs `count` independent cases and merges them by index. The merged result
// is always that of the serial prefix ending at the first failing case, no
// matter how the cases were scheduled, so parallel and serial runs report
// identical bytes. A case with index beyond an already-recorded failure may
// be skipped; every index up to the final minimum failure is guaranteed to
// have run.
SuiteResult run_cases(const std::string& name, const std::string& scope, long count,
                      const std::function<CaseOutcome(long)>& fn, bool parallel) {
    std::vector<CaseOutcome> out(static_cast<std::size_t>(count));
    std::atomic<long> first_bad{count};
#ifdef _OPENMP
    if (parallel && count > 1) {
#pragma omp parallel for schedule(dynamic, 1)
        for (long i = 0; i < count; ++i) {
            if (i > first_bad.load(std::memory_order_relaxed)) continue;
            CaseOutcome c = guarded([&] { return fn(i); });
            if (!c.ok) {
                long cur = first_bad.load();
                while (i < cur && !first_bad.compare_exchange_weak(cur, i)) {
                }
            }
            out[static_cast<std::size_t>(i)] = std::move(c);
        }
    } else
#endif
    {
        for (long i = 0; i < count; ++i) {
            out[static_cast<std::size_t>(i)] = guarded([&] { return fn(i); });
            if (!out[static_cast<std::size_t>(i)].ok) {
                first_bad.store(i);
                break;
            }
        }
    }

    SuiteResult r;
    r.name = name;
    r.scope = scope;
    long stop = first_bad.load();
    long last = std::min(stop, count - 1);
    for (long i = 0; i <= last; ++i) r.checked += out[static_cast<std::size_t>(i)].units;
    if (stop < count) {
        r.passed = false;
        r.capped = out[static_cast<std::size_t>(stop)].capped;
        r.counterexample = out[static_cast<std::size_t>(stop)].detail;
    } else {
        r.counterexample = nullptr;
    }
    return r;
}

// ---------------------------------------------------------------------------
// shared helpers

const std::vector<Mode> kAllModes{Mode::plain, Mode::rd, Mode::pure};
const std::vector<Mode> kPlainPure{Mode::plain, Mode::pure};

// Per-family size caps, lowered further by the configured bound: the square
// and extension sweeps are quadratic-and-worse in the universe, and the
// independence-law tables are cubic in the subgroup count, so each family
// pins the largest corner size it enumerates. Rings of additive rank > 1
// stay at 12 regardless (their lattices are wider at equal cardinality).
Int effective_bound(const std::string& name, const Ring& r, const SuiteConfig& cfg) {
    Int b = cfg.bound;
    if (name == "push-preservation" || name == "sum-embeddings" || name == "local-character" ||
        name == "extension-algorithm") {
        if (b > 12) b = 12;
    }
    if (name == "indep-calculus" || name == "witness-surrogate") {
        if (b > 8) b = 8;
    }
    if (r.rank() != 1 && b > 12) b = 12;
    return b;
}

std::string scope_label(const Ring& r, Mode mode, const Int& bound) {
    return r.label + ", " + mode_name(mode) + ", bound " + bound.get_str();
}

UniverseSpec universe_of(const Ring& r, Mode mode, const Int& bound, const SuiteConfig& cfg) {
    UniverseSpec u;
    u.ring = r;
    u.mode = mode;
    u.max_module_size = bound;
    u.aut_orbit_cap = cfg.aut_orbit_cap;
    u.max_subject_size = cfg.max_subject_size;
    u.limits = cfg.limits;
    return u;
}

std::vector<Submodule> mode_submodules(const Module& m, Mode mode, const EnumLimits& limits) {
    std::vector<Submodule> out;
    for (const Submodule& s : submodule_lattice(m, limits.max_candidates)) {
        if (mode == Mode::plain || is_mode_embedding(submodule_as_module(s).inclusion, mode))
            out.push_back(s);
    }
    return out;
}

// f (+) g between the coordinatewise direct sums
Hom sum_hom(const Hom& f, const Hom& g) {
    DirectSumResult src = direct_sum(f.source, g.source);
    DirectSumResult tgt = direct_sum(f.target, g.target);
    Hom a = compose_hom(tgt.inj_a, compose_hom(f, src.proj_a));
    Hom b = compose_hom(tgt.inj_b, compose_hom(g, src.proj_b));
    IntMatrix m = a.matrix;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) += b.matrix.at(i, j);
    return make_hom(src.sum, tgt.sum, m.reduce_rows_mod(tgt.sum.orders));
}

Int small_det(const IntMatrix& m) {
    std::size_t n = m.rows();
    if (n == 0) return Int(1);
    if (n == 1) return m.at(0, 0);
    if (n == 2) return m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
    Int d = m.at(0, 0) * (m.at(1, 1) * m.at(2, 2) - m.at(1, 2) * m.at(2, 1));
    d -= m.at(0, 1) * (m.at(1, 0) * m.at(2, 2) - m.at(1, 2) * m.at(2, 0));
    d += m.at(0, 2) * (m.at(1, 0) * m.at(2, 1) - m.at(1, 1) * m.at(2, 0));
    return d;
}

bool is_prime_power(Int n) {
    if (n < 2) return false;
    for (Int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            return n == 1;
        }
    }
    return true;
}

// rank-1 rings of prime-power cardinality, where injective = free holds and
// the ideal test applies
bool chain_ring(const Ring& r) { return r.rank() == 1 && is_prime_power(r.cardinality()); }

// ---------------------------------------------------------------------------
// linalg: canonical forms against exhaustive enumeration

struct GridCase {
    int rows, cols;
    unsigned long long index;  // base-9 digit string of the entries, offset -4
};

std::vector<GridCase> linalg_grid() {
    // every shape up to 3x3; exhaustive through 4 cells, beyond that a pinned
    // equidistributed sample (multiplier coprime to the 9^k index space)
    const unsigned long long kStride = 2305843009213693951ull;
    const long kSamples = 4096;
    std::vector<GridCase> cases;
    for (int r = 1; r <= 3; ++r) {
        for (int c = 1; c <= 3; ++c) {
            unsigned long long total = 1;
            for (int k = 0; k < r * c; ++k) total *= 9;
            if (r * c <= 4) {
                for (unsigned long long i = 0; i < total; ++i) cases.push_back({r, c, i});
            } else {
                for (long t = 0; t < kSamples; ++t) {
                    unsigned long long idx = static_cast<unsigned long long>(
                        (static_cast<unsigned __int128>(t) * kStride) % total);
                    cases.push_back({r, c, idx});
                }
            }
        }
    }
    return cases;
}

// all elements of the row span inside (Z/q)^c, by breadth-first closure over
// the raw generators; elements packed base q, returned sorted
std::vector<long> closure_codes(const IntMatrix& m, long q) {
    std::size_t c = m.cols();
    long total = 1;
    for (std::size_t j = 0; j < c; ++j) total *= q;
    std::vector<long> gens;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        long code = 0;
        for (std::size_t j = c; j-- > 0;) code = code * q + mod_reduce(m.at(i, j), Int(q)).get_si();
        gens.push_back(code);
    }
    std::vector<char> seen(static_cast<std::size_t>(total), 0);
    seen[0] = 1;
    std::vector<long> stack{0}, out;
    while (!stack.empty()) {
        long v = stack.back();
        stack.pop_back();
        out.push_back(v);
        for (long g : gens) {
            long w = 0, place = 1, vv = v, gg = g;
            for (std::size_t j = 0; j < c; ++j) {
                w += ((vv % q + gg % q) % q) * place;
                place *= q;
                vv /= q;
                gg /= q;
            }
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                stack.push_back(w);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<long> subgroup_codes(const CanonicalSubgroup& s, long q) {
    std::vector<long> out;
    for (const IntVec& e : s.elements()) {
        long code = 0;
        for (std::size_t j = e.size(); j-- > 0;) code = code * q + e[j].get_si();
        out.push_back(code);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<SuiteResult> suite_linalg(const SuiteConfig& cfg) {
    auto grid = std::make_shared<std::vector<GridCase>>(linalg_grid());
    auto fn = [grid](long i) {
        const GridCase& gc = (*grid)[static_cast<std::size_t>(i)];
        CaseOutcome out;
        out.units = 0;
        IntMatrix m(static_cast<std::size_t>(gc.rows), static_cast<std::size_t>(gc.cols));
        unsigned long long ix = gc.index;
        for (int a = 0; a < gc.rows; ++a)
            for (int b = 0; b < gc.cols; ++b) {
                m.at(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) =
                    Int(static_cast<long>(ix % 9) - 4);
                ix /= 9;
            }
        auto fail = [&](const std::string& what) {
            out.ok = false;
            Json d;
            d["matrix"] = matrix_to_json(m);
            d["check"] = what;
            out.detail = d;
            return out;
        };

        SmithResult s = smith_normal_form(m);
        if (s.u.mul(m).mul(s.v) != s.d) return fail("smith transform identity");
        IntVec diag = s.diagonal();
        for (std::size_t a = 0; a < diag.size(); ++a) {
            if (diag[a] < 0) return fail("smith diagonal sign");
            if (a + 1 < diag.size()) {
                bool ok = diag[a] == 0 ? diag[a + 1] == 0 : diag[a + 1] % diag[a] == 0;
                if (!ok) return fail("smith divisibility chain");
            }
        }
        Int du = small_det(s.u), dv = small_det(s.v);
        if (du != 1 && du != -1) return fail("smith left transform unimodular");
        if (dv != 1 && dv != -1) return fail("smith right transform unimodular");
        out.units += 3;

        HermiteResult h = row_hermite(m);
        if (h.u.mul(m) != h.h) return fail("hermite transform identity");
        Int dh = small_det(h.u);
        if (dh != 1 && dh != -1) return fail("hermite transform unimodular");
        ++out.units;

        for (long q = 2; q <= 8; ++q) {
            IntVec amb(static_cast<std::size_t>(gc.cols), Int(q));
            CanonicalSubgroup span = CanonicalSubgroup::span(m, amb);
            if (subgroup_codes(span, q) != closure_codes(m, q))
                return fail("span disagrees with closure enumeration mod " + std::to_string(q));
            if (CanonicalSubgroup::span(h.h, amb) != span)
                return fail("hermite rows span a different subgroup mod " + std::to_string(q));
            out.units += 2;
        }

        // canonical form ignores generator order and redundant generators
        long q = 2 + static_cast<long>(gc.index % 7);
        IntVec amb(static_cast<std::size_t>(gc.cols), Int(q));
        IntMatrix shuffled(m.rows() + 1, m.cols());
        for (std::size_t a = 0; a < m.rows(); ++a)
            for (std::size_t b = 0; b < m.cols(); ++b) {
                shuffled.at(m.rows() - 1 - a, b) = m.at(a, b);
                shuffled.at(m.rows(), b) += m.at(a, b);
            }
        CanonicalSubgroup span = CanonicalSubgroup::span(m, amb);
        if (CanonicalSubgroup::span(shuffled, amb) != span)
            return fail("canonical form depends on the generating set");
        ++out.units;

        // the subgroup index from the stacked lattice [m; qI] must complement
        // the Howell cardinality: |span| * |Z^c / lattice| == q^c
        IntMatrix stacked =
            m.vstack(IntMatrix::diagonal(IntVec(static_cast<std::size_t>(gc.cols), Int(q))));
        Int prod = 1;
        for (const Int& d : smith_normal_form(stacked).diagonal()) prod *= d;
        Int qc = 1;
        for (int b = 0; b < gc.cols; ++b) qc *= q;
        if (span.cardinality() * prod != qc) return fail("lattice index identity");
        ++out.units;
        return out;
    };
    SuiteResult r =
        run_cases("linalg",
                  "entries -4..4, shapes to 3x3 (exhaustive to 4 cells, pinned samples beyond), "
                  "moduli 2..8",
                  static_cast<long>(grid->size()), fn, cfg.parallel);
    return {r};
}

// ---------------------------------------------------------------------------
// push-preservation: pushout legs keep the mode of the pushed maps

std::vector<SuiteResult> suite_push_preservation(const std::vector<Ring>& rings,
                                                 const SuiteConfig& cfg) {
    std::vector<SuiteResult> out;
    for (const Ring& ring : rings) {
        Int bound = effective_bound("push-preservation", ring, cfg);
        std::vector<Module> mods = enumerate_modules(ring, bound, cfg.limits);
        for (Mode mode : kAllModes) {
            struct Block {
                std::size_t n1, n2;
                Submodule sub;
            };
            std::vector<Block> blocks;
            for (std::size_t a = 0; a < mods.size(); ++a)
                for (const Submodule& s : mode_submodules(mods[a], mode, cfg.limits))
                    for (std::size_t b = 0; b < mods.size(); ++b) blocks.push_back({a, b, s});
            auto fn = [&](long i) {
                const Block& blk = blocks[static_cast<std::size_t>(i)];
                CaseOutcome c;
                c.units = 0;
                SubmoduleModule sm = submodule_as_module(blk.sub);
                for (const Hom& f2 : enumerate_homs(sm.module, mods[blk.n2])) {
                    PushoutResult p = pushout(sm.inclusion, f2, mode);
                    ++c.units;
                    bool leg1_ok = p.leg1_preserves_mode.has_value() && *p.leg1_preserves_mode;
                    bool leg2_ok = !is_mode_embedding(f2, mode) ||
                                   (p.leg2_preserves_mode.has_value() && *p.leg2_preserves_mode);
                    bool commutes =
                        compose_hom(p.leg2, sm.inclusion) == compose_hom(p.leg1, f2);
                    if (!(leg1_ok && leg2_ok && commutes)) {
                        c.ok = false;
                        Json d;
                        d["ambient"] = module_to_json(mods[blk.n1]);
                        d["f1"] = hom_to_json(sm.inclusion);
                        d["f2"] = hom_to_json(f2);
                        d["pushout"] = pushout_record(p);
                        c.detail = d;
                        return c;
                    }
                }
                return c;
            };
            out.push_back(run_cases("push-preservation", scope_label(ring, mode, bound),
                                    static_cast<long>(blocks.size()), fn, cfg.parallel));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// sum-embeddings: direct sums of mode-embeddings are mode-embeddings

std::vector<SuiteResult> suite_sum_embeddings(const std::vector<Ring>& rings,
                                              const SuiteConfig& cfg) {
    std::vector<SuiteResult> out;
    for (const Ring& ring : rings) {
        Int bound = effective_bound("sum-embeddings", ring, cfg);
        std::vector<Module> mods = enumerate_modules(ring, bound, cfg.limits);
        for (Mode mode : kAllModes) {
            std::vector<Hom> incs;
            for (const Module& m : mods)
                for (const Submodule& s : mode_submodules(m, mode, cfg.limits))
                    incs.push_back(submodule_as_module(s).inclusion);
            long n = static_cast<long>(incs.size());
            auto fn = [&](long i) {
                const Hom& f = incs[static_cast<std::size_t>(i / n)];
                const Hom& g = incs[static_cast<std::size_t>(i % n)];
                CaseOutcome c;
                Hom h = sum_hom(f, g);
                if (!is_mode_embedding(h, mode)) {
                    c.ok = false;
                    Json d;
                    d["f"] = hom_to_json(f);
                    d["g"] = hom_to_json(g);
                    d["sum"] = hom_to_json(h);
                    c.detail = d;
                }
                return c;
            };
            out.push_back(run_cases("sum-embeddings", scope_label(ring, mode, bound), n * n, fn,
                                    cfg.parallel));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// indep-calculus: the independence laws over every subgroup configuration

// lazily memoized verdict table over a fixed ambient lattice; verdicts are
// false outright unless every corner is a mode-submodule (inclusions between
// mode-submodules of the ambient are themselves mode-embeddings, and modes
// compose, so those are exactly the squares whose maps all carry the mode)
struct IndepTable {
    const Module* ambient;
    Mode mode;
    std::vector<Submodule> lat;
    std::vector<char> flags;
    std::vector<std::vector<char>> leq;
    std::vector<signed char> memo;

    explicit IndepTable(const Module& n, Mode m, const EnumLimits& limits)
        : ambient(&n), mode(m) {
        lat = submodule_lattice(n, limits.max_candidates);
        std::size_t k = lat.size();
        flags.resize(k);
        leq.assign(k, std::vector<char>(k, 0));
        for (std::size_t i = 0; i < k; ++i) {
            flags[i] = mode == Mode::plain ||
                       is_mode_embedding(submodule_as_module(lat[i]).inclusion, mode);
            for (std::size_t j = 0; j < k; ++j) leq[i][j] = lat[i].group.subgroup_of(lat[j].group);
        }
        memo.assign(k * k * k, -1);
    }

    std::size_t size() const { return lat.size(); }

    std::size_t index_of(const CanonicalSubgroup& g) const {
        for (std::size_t i = 0; i < lat.size(); ++i)
            if (lat[i].group == g) return i;
        throw ValidationError{"subgroup missing from the lattice"};
    }

    bool verdict(std::size_t a, std::size_t b, std::size_t c) {
        signed char& t = memo[(a * lat.size() + b) * lat.size() + c];
        if (t < 0) {
            bool v = flags[a] && flags[b] && flags[c] &&
                     is_independent_submodules(lat[a], lat[b], lat[c], mode).verdict;
            t = v ? 1 : 0;
        }
        return t == 1;
    }
};

Json indep_violation(const IndepTable& t, const std::string& law, std::size_t a, std::size_t b,
                     std::size_t c) {
    Json d;
    d["ambient"] = module_to_json(*t.ambient);
    d["law"] = law;
    d["base"] = submodule_to_json(t.lat[a]);
    d["side1"] = submodule_to_json(t.lat[b]);
    d["side2"] = submodule_to_json(t.lat[c]);
    return d;
}

std::vector<SuiteResult> suite_indep_calculus(const std::vector<Ring>& rings,
                                              const SuiteConfig& cfg) {
    std::vector<SuiteResult> out;
    for (const Ring& ring : rings) {
        Int bound = effective_bound("indep-calculus", ring, cfg);
        std::vector<Module> mods = enumerate_modules(ring, bound, cfg.limits);
        for (Mode mode : kAllModes) {
            auto fn = [&](long i) {
                CaseOutcome c;
                c.units = 0;
                IndepTable t(mods[static_cast<std::size_t>(i)], mode, cfg.limits);
                std::size_t k = t.size();
                auto fail = [&](const std::string& law, std::size_t a, std::size_t b,
                                std::size_t cc) {
                    c.ok = false;
                    c.detail = indep_violation(t, law, a, b, cc);
                    return c;
                };
                for (std::size_t a = 0; a < k; ++a) {
                    for (std::size_t b = 0; b < k; ++b) {
                        if (!t.leq[a][b]) continue;
                        for (std::size_t d = 0; d < k; ++d) {
                            if (!t.leq[a][d]) continue;
                            bool v = t.verdict(a, b, d);
                            ++c.units;
                            if (v != t.verdict(a, d, b)) return fail("symmetry", a, b, d);
                            if (!v) continue;
                            for (std::size_t e = 0; e < k; ++e) {
                                // shrink the second side
                                if (t.flags[e] && t.leq[a][e] && t.leq[e][d]) {
                                    ++c.units;
                                    if (!t.verdict(a, b, e))
                                        return fail("monotonicity", a, b, e);
                                }
                                // grow the base inside side2 and side1
                                if (t.flags[e] && t.leq[a][e] && t.leq[e][d] && t.leq[e][b]) {
                                    ++c.units;
                                    if (!t.verdict(e, b, d))
                                        return fail("base monotonicity", e, b, d);
                                }
                                // paste along a larger second side
                                if (t.leq[d][e]) {
                                    std::size_t s =
                                        t.index_of(t.lat[b].group.sum(t.lat[d].group));
                                    ++c.units;
                                    if (t.verdict(d, s, e) && !t.verdict(a, b, e))
                                        return fail("transitivity", a, b, e);
                                }
                            }
                        }
                    }
                }
                return c;
            };
            out.push_back(run_cases("indep-calculus", scope_label(ring, mode, bound),
                                    static_cast<long>(mods.size()), fn, cfg.parallel));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// local-character: every submodule pair admits an independence base

std::vector<SuiteResult> suite_local_character(const std::vector<Ring>& rings,
                                               const SuiteConfig& cfg) {
    std::vector<SuiteResult> out;
    for (const Ring& ring : rings) {
        Int bound = effective_bound("local-character", ring, cfg);
        std::vector<Module> mods = enumerate_modules(ring, bound, cfg.limits);
        for (Mode mode : kAllModes) {
            struct Pair {
                std::size_t n;
                Submodule m1, m2;
            };
            std::vector<Pair> pairs;
            for (std::size_t a = 0; a < mods.size(); ++a) {
                std::vector<Submodule> subs = mode_submodules(mods[a], mode, cfg.limits);
                for (const Submodule& m1 : subs)
                    for (const Submodule& m2 : subs) pairs.push_back({a, m1, m2});
            }
            auto fn = [&](long i) {
                const Pair& p = pairs[static_cast<std::size_t>(i)];
                CaseOutcome c;
                IndependenceBase b = find_independence_base(p.m1, p.m2, mods[p.n], mode);
                bool placed = b.base.group.subgroup_of(p.m2.group) &&
                              p.m1.group.subgroup_of(b.enlarged.group);
                bool indep =
                    is_independent_submodules(b.base, b.enlarged, p.m2, mode).verdict;
                if (!(placed && indep)) {
                    c.ok = false;
                    Json d;
                    d["ambient"] = module_to_json(mods[p.n]);
                    d["m1"] = submodule_to_json(p.m1);
                    d["m2"] = submodule_to_json(p.m2);
                    d["found"] = independence_base_record(b, mode);
                    c.detail = d;
                }
                return c;
            };
            out.push_back(run_cases("local-character", scope_label(ring, mode, bound),
                                    static_cast<long>(pairs.size()), fn, cfg.parallel));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// extension-algorithm: the staged chain extension agrees with direct solving

std::vector<SuiteResult> suite_extension_algorithm(const std::vector<Ring>& rings,
                                                   const SuiteConfig& cfg) {
    std::vector<SuiteResult> out;
    for (const Ring& ring : rings) {
        Int bound = effective_bound("extension-algorithm", ring, cfg);
        std::vector<Module> mods = enumerate_modules(ring, bound, cfg.limits);
        for (Mode mode : kPlainPure) {
            UniverseSpec u = universe_of(ring, mode, bound, cfg);
            struct Block {
                std::size_t n;
                Submodule sub;
            };
            std::vector<Block> blocks;
            for (std::size_t a = 0; a < mods.size(); ++a)
                for (const Submodule& s : mode_submodules(mods[a], mode, cfg.limits))
                    blocks.push_back({a, s});
            auto fn = [&](long i) {
                const Block& blk = blocks[static_cast<std::size_t>(i)];
                CaseOutcome c;
                c.units = 0;
                SubmoduleModule sm = submodule_as_module(blk.sub);
                ExtensionPlan plan = prepare_extension(sm.inclusion, u);
                for (const Module& e : mods) {
                    ExtensionSolver solver = bind_extension_target(plan, e);
                    for (const Hom& g : enumerate_homs(sm.module, e)) {
                        std::optional<Hom> staged = run_extension(solver, g);
                        std::optional<Hom> direct = solve_extension(sm.inclusion, g);
                        ++c.units;
                        bool agree = staged.has_value() == direct.has_value();
                        bool restricts =
                            !staged || compose_hom(*staged, sm.inclusion) == g;
                        if (!(agree && restricts)) {
                            c.ok = false;
                            Json d;
                            d["f"] = hom_to_json(sm.inclusion);
                            d["g"] = hom_to_json(g);
                            d["staged"] = extension_record(staged);
                            d["direct"] = extension_record(direct);
                            c.detail = d;
                            return c;
                        }
                    }
                }
                return c;
            };
            out.push_back(run_cases("extension-algorithm", scope_label(ring, mode, bound),
                                    static_cast<long>(blocks.size()), fn, cfg.parallel));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// injective-classification: verdicts, counterexample replay, and over chain
// rings the free = injective equivalence plus the ideal test

std::vector<SuiteResult> suite_injective_classification(const std::vector<Ring>& rings,
                                                        const SuiteConfig& cfg) {
    std::vector<SuiteResult> out;
    for (const Ring& ring : rings) {
        Int bound = effective_bound("injective-classification", ring, cfg);
        std::vector<Module> mods = enumerate_modules(ring, bound, cfg.limits);
        for (Mode mode : kPlainPure) {
            UniverseSpec u = universe_of(ring, mode, bound, cfg);
            // the free = injective equivalence (and the ideal test it is
            // compared against) presumes the regular module is in range
            bool chain = chain_ring(ring) && ring.cardinality() <= bound;
            auto fn = [&](long i) {
                const Module& m = mods[static_cast<std::size_t>(i)];
                CaseOutcome c;
                c.units = 0;
                InjectivityReport rep = is_rel_injective(m, u);
                auto fail = [&](const std::string& what) {
                    c.ok = false;
                    Json d;
                    d["subject"] = module_to_json(m);
                    d["check"] = what;
                    d["report"] = injectivity_record(rep);
                    c.detail = d;
                    return c;
                };

                ++c.units;
                if (rep.verdict != !rep.counterexample.has_value())
                    return fail("verdict and counterexample disagree");
                if (rep.counterexample) {
                    // the reported pair must really fail the direct solver
                    ++c.units;
                    if (solve_extension(rep.counterexample->f, rep.counterexample->g))
                        return fail("counterexample extends after all");
                }
                if (mode == Mode::pure) {
                    ++c.units;
                    if (!rep.verdict) return fail("pure injectivity must hold for every module");
                } else if (chain) {
                    bool free = true;
                    for (const Int& o : m.orders) free = free && o == ring.cardinality();
                    ++c.units;
                    if (rep.verdict != free) return fail("free modules are exactly the injectives");
                    BaerReport ideal = baer_ideal_test(m, u);
                    ++c.units;
                    if (ideal.pass != rep.verdict) return fail("ideal test disagrees");
                }
                return c;
            };
            out.push_back(run_cases("injective-classification", scope_label(ring, mode, bound),
                                    static_cast<long>(mods.size()), fn, cfg.parallel));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// purity-split: over rank-1 rings the divisibility check, the retraction
// check and the formula witnesses must tell one story

// the witness r certifies by brute force: some image element is divisible by
// r in the ambient module but not inside the image
bool rd_witness_certifies(const Submodule& s, const RElem& r) {
    const Module& b = s.ambient;
    std::set<IntVec> image, divisible, inner;
    for (const IntVec& x : s.group.elements()) image.insert(x);
    for (const IntVec& x : b.enumerate_elements()) divisible.insert(b.act(r, x));
    for (const IntVec& x : image) inner.insert(b.act(r, x));
    for (const IntVec& x : image)
        if (divisible.count(x) && !inner.count(x)) return true;
    return false;
}

std::vector<SuiteResult> suite_purity_split(const std::vector<Ring>& rings,
                                            const SuiteConfig& cfg) {
    std::vector<SuiteResult> out;
    for (const Ring& ring : rings) {
        if (ring.rank() != 1) continue;  // the divisibility shortcut is a rank-1 statement
        Int bound = effective_bound("purity-split", ring, cfg);
        std::vector<Module> mods = enumerate_modules(ring, bound, cfg.limits);
        std::vector<Submodule> subs;
        for (const Module& m : mods)
            for (const Submodule& s : submodule_lattice(m, cfg.limits.max_candidates))
                subs.push_back(s);
        auto fn = [&](long i) {
            const Submodule& s = subs[static_cast<std::size_t>(i)];
            CaseOutcome c;
            c.units = 0;
            Hom f = submodule_as_module(s).inclusion;
            EmbeddingClass cls = classify_embedding(f);
            auto fail = [&](const std::string& what) {
                c.ok = false;
                Json d;
                d["ambient"] = module_to_json(s.ambient);
                d["sub"] = submodule_to_json(s);
                d["classified"] = classify_record(cls);
                d["check"] = what;
                c.detail = d;
                return c;
            };
            ++c.units;
            if (!cls.is_embedding.has_value() || !*cls.is_embedding)
                return fail("inclusion not seen as an embedding");
            ++c.units;
            if (*cls.is_rd != *cls.is_pure) return fail("divisibility and retraction disagree");
            ++c.units;
            if (*cls.is_pure != *cls.is_split) return fail("purity and splitting disagree");
            if (!*cls.is_rd) {
                ++c.units;
                if (!cls.rd_witness.has_value()) return fail("failure carries no witness");
                if (!rd_witness_certifies(s, *cls.rd_witness))
                    return fail("witness does not certify");
            }
            return c;
        };
        out.push_back(run_cases("purity-split", ring.label + ", bound " + bound.get_str(),
                                static_cast<long>(subs.size()), fn, cfg.parallel));
    }
    return out;
}

// ---------------------------------------------------------------------------
// injective-closure: the injective members survive sums, chains and mutual
// embeddings

std::vector<SuiteResult> suite_injective_closure(const std::vector<Ring>& rings,
                                                 const SuiteConfig& cfg) {
    std::vector<SuiteResult> out;
    for (const Ring& ring : rings) {
        Int bound = effective_bound("injective-closure", ring, cfg);
        for (Mode mode : kPlainPure) {
            UniverseSpec u = universe_of(ring, mode, bound, cfg);
            auto fn = [&](long) {
                CaseOutcome c;
                NoetherianReport rep = noetherian_bounded_check(u, 3);
                c.units = rep.cases_checked;
                if (!(rep.sums_closed && rep.chains_closed && rep.csb_holds)) {
                    c.ok = false;
                    c.detail = noetherian_record(rep);
                }
                return c;
            };
            out.push_back(run_cases("injective-closure", scope_label(ring, mode, bound), 1, fn,
                                    cfg.parallel));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// witness-surrogate: independence is detected by spans of the base and two
// extra elements (bounded stand-in for the finite-character statement)

std::vector<SuiteResult> suite_witness_surrogate(const std::vector<Ring>& rings,
                                                 const SuiteConfig& cfg) {
    std::vector<SuiteResult> out;
    for (const Ring& ring : rings) {
        Int bound = effective_bound("witness-surrogate", ring, cfg);
        std::vector<Module> mods = enumerate_modules(ring, bound, cfg.limits);
        for (Mode mode : kPlainPure) {
            auto fn = [&](long i) {
                const Module& n = mods[static_cast<std::size_t>(i)];
                CaseOutcome c;
                c.units = 0;
                IndepTable t(n, mode, cfg.limits);
                std::size_t k = t.size();
                for (std::size_t a = 0; a < k; ++a) {
                    if (!t.flags[a]) continue;
                    for (std::size_t b = 0; b < k; ++b) {
                        if (!t.flags[b] || !t.leq[a][b]) continue;
                        for (std::size_t d = 0; d < k; ++d) {
                            if (!t.flags[d] || !t.leq[a][d]) continue;
                            ++c.units;
                            if (t.verdict(a, b, d)) continue;
                            // every span of the base plus two elements of
                            // side2 is independent over side1, yet side2
                            // itself is not: the two-element spans would
                            // wrongly certify independence
                            bool small_all_pass = true;
                            std::set<std::size_t> seen;
                            std::vector<IntVec> elems = t.lat[d].group.elements();
                            IntMatrix base_gens = t.lat[a].group.gen_matrix();
                            for (std::size_t x = 0; x < elems.size() && small_all_pass; ++x) {
                                for (std::size_t y = x; y < elems.size() && small_all_pass;
                                     ++y) {
                                    std::vector<IntVec> gens;
                                    for (std::size_t g = 0; g < base_gens.rows(); ++g)
                                        gens.push_back(base_gens.row(g));
                                    gens.push_back(elems[x]);
                                    gens.push_back(elems[y]);
                                    Submodule span = submodule_generate(n, gens);
                                    std::size_t si = t.index_of(span.group);
                                    if (!t.flags[si] || !seen.insert(si).second) continue;
                                    if (!t.verdict(a, b, si)) small_all_pass = false;
                                }
                            }
                            if (small_all_pass) {
                                c.ok = false;
                                c.detail = indep_violation(t, "two-element witness", a, b, d);
                                return c;
                            }
                        }
                    }
                }
                return c;
            };
            out.push_back(run_cases("witness-surrogate",
                                    scope_label(ring, mode, bound) + " (bounded surrogate)",
                                    static_cast<long>(mods.size()), fn, cfg.parallel));
        }
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<std::string> suite_names() {
    return {"linalg",           "push-preservation",        "sum-embeddings",
            "indep-calculus",   "local-character",          "extension-algorithm",
            "injective-classification", "purity-split",     "injective-closure",
            "witness-surrogate"};
}

std::vector<SuiteResult> run_suite(const std::string& name, const std::vector<Ring>& rings,
                                   const SuiteConfig& cfg) {
    if (name == "linalg") return suite_linalg(cfg);
    if (name == "push-preservation") return suite_push_preservation(rings, cfg);
    if (name == "sum-embeddings") return suite_sum_embeddings(rings, cfg);
    if (name == "indep-calculus") return suite_indep_calculus(rings, cfg);
    if (name == "local-character") return suite_local_character(rings, cfg);
    if (name == "extension-algorithm") return suite_extension_algorithm(rings, cfg);
    if (name == "injective-classification") return suite_injective_classification(rings, cfg);
    if (name == "purity-split") return suite_purity_split(rings, cfg);
    if (name == "injective-closure") return suite_injective_closure(rings, cfg);
    if (name == "witness-surrogate") return suite_witness_surrogate(rings, cfg);
    throw ValidationError{"unknown suite: " + name};
}

std::vector<SuiteResult> run_all_suites(const SuiteConfig& cfg) {
    std::vector<Ring> rings = standard_test_rings();
    std::vector<SuiteResult> out;
    for (const std::string& name : suite_names())
        for (SuiteResult& r : run_suite(name, rings, cfg)) out.push_back(std::move(r));
    return out;
}

Json suite_report(const std::vector<SuiteResult>& results, const SuiteConfig& cfg) {
    Json rows = Json::array();
    bool passed = true, capped = false;
    long total = 0;
    for (const SuiteResult& r : results) {
        Json row;
        row["name"] = r.name;
        row["scope"] = r.scope;
        row["checked"] = int_to_json(Int(r.checked));
        row["passed"] = r.passed;
        row["capped"] = r.capped;
        row["counterexample"] = r.counterexample;
        rows.push_back(row);
        passed = passed && r.passed;
        capped = capped || r.capped;
        total += r.checked;
    }
    Json rep;
    rep["kind"] = "suite_report";
    rep["bound"] = int_to_json(cfg.bound);
    rep["suites"] = rows;
    rep["total_checked"] = int_to_json(Int(total));
    rep["passed"] = passed;
    rep["capped"] = capped;
    return rep;
}

}  // namespace finmod
