#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "finmod/pp_formula.hpp"

#include <map>
#include <set>
#include <vector>

using namespace finmod;

namespace {

Module cyclic_module(const Ring& r, long n) {
    return make_module(r, {Int(n)}, {IntMatrix(1, 1, {1})});
}

std::vector<long> key_of(const IntVec& v) {
    std::vector<long> k;
    for (const Int& x : v) k.push_back(x.get_si());
    return k;
}

// evaluation by brute enumeration of the bound variables, using only module
// arithmetic; fully independent of the congruence-solver route
bool pp_holds_brute(const PpFormula& phi, const Module& m, const std::vector<IntVec>& args) {
    std::vector<IntVec> elems = m.enumerate_elements();
    std::vector<std::size_t> pick(phi.bound_count, 0);
    while (true) {
        bool all_ok = true;
        for (const PpEquation& eq : phi.equations) {
            IntVec acc(m.rank(), Int(0));
            for (std::size_t j = 0; j < phi.bound_count; ++j)
                acc = m.add(acc, m.act(eq.bound_coeffs[j], elems[pick[j]]));
            for (std::size_t j = 0; j < phi.free_count; ++j)
                acc = m.add(acc, m.act(eq.free_coeffs[j], args[j]));
            if (!m.is_zero_elem(acc)) {
                all_ok = false;
                break;
            }
        }
        if (all_ok) return true;
        std::size_t pos = phi.bound_count;
        bool done = (pos == 0);
        while (pos > 0) {
            --pos;
            if (++pick[pos] < elems.size()) break;
            pick[pos] = 0;
            if (pos == 0) done = true;
        }
        if (done) return false;
    }
}

std::set<std::vector<long>> brute_solution_set(const PpFormula& phi, const Module& m) {
    std::set<std::vector<long>> out;
    std::vector<IntVec> elems = m.enumerate_elements();
    std::vector<std::size_t> pick(phi.free_count, 0);
    while (true) {
        std::vector<IntVec> args;
        for (std::size_t j = 0; j < phi.free_count; ++j) args.push_back(elems[pick[j]]);
        if (pp_holds_brute(phi, m, args)) {
            IntVec flat;
            for (const IntVec& a : args) flat.insert(flat.end(), a.begin(), a.end());
            out.insert(key_of(flat));
        }
        std::size_t pos = phi.free_count;
        bool done = (pos == 0);
        while (pos > 0) {
            --pos;
            if (++pick[pos] < elems.size()) break;
            pick[pos] = 0;
            if (pos == 0) done = true;
        }
        if (done) return out;
    }
}

std::set<std::vector<long>> subgroup_keys(const CanonicalSubgroup& s) {
    std::set<std::vector<long>> out;
    for (const IntVec& e : s.elements()) out.insert(key_of(e));
    return out;
}

bool parse_fails_with(const Ring& r, const std::string& text, const std::string& needle) {
    try {
        parse_pp(r, text);
    } catch (const ValidationError& e) {
        return e.message.find(needle) != std::string::npos;
    }
    return false;
}

}  // namespace

TEST_CASE("parsing: frozen shapes and errors with positions") {
    Ring z4 = make_zmod(4);
    PpFormula d2 = parse_pp(z4, "E w1 . 2*w1 - 1*x1 = 0");
    CHECK(d2.free_count == 1);
    CHECK(d2.bound_count == 1);
    REQUIRE(d2.equations.size() == 1);
    CHECK(d2.equations[0].bound_coeffs[0] == RElem{2});
    CHECK(d2.equations[0].free_coeffs[0] == RElem{3});  // -1 reduced mod 4

    PpFormula triv = parse_pp(z4, "0*x1 = 0");
    CHECK(triv.free_count == 1);
    CHECK(triv.bound_count == 0);

    // bare variables mean coefficient 1; repeated variables accumulate
    PpFormula sum = parse_pp(z4, "x1 + x1 + 3*x2 = 0 & x2 - x1 = 0");
    CHECK(sum.equations[0].free_coeffs[0] == RElem{2});
    CHECK(sum.equations[0].free_coeffs[1] == RElem{3});
    CHECK(sum.equations.size() == 2);

    Ring f8 = make_trunc_poly(2, 2);
    PpFormula tup = parse_pp(f8, "E w1 . (0,1,0)*w1 + (1,0,0)*x1 = 0");
    CHECK(tup.equations[0].bound_coeffs[0] == RElem{Int(0), Int(1), Int(0)});

    CHECK(parse_fails_with(z4, "E w1 . w1 + = 0", "syntax error at position"));
    CHECK(parse_fails_with(z4, "E w1 . w2 = 0", "unknown variable"));
    CHECK_THROWS_AS(parse_pp(z4, "E w2 . w2 = 0"), ValidationError);  // prefix gap
    CHECK_THROWS_AS(parse_pp(z4, "x1 = 1"), ValidationError);
    CHECK_THROWS_AS(parse_pp(z4, "x1 = 0 junk"), ValidationError);
    CHECK_THROWS_AS(parse_pp(z4, "w1 = 0"), ValidationError);   // w without prefix
    CHECK_THROWS_AS(parse_pp(z4, "2*x0 = 0"), ValidationError); // 1-based indices
    CHECK_THROWS_AS(parse_pp(f8, "2*x1 = 0"), ValidationError); // integer literal, rank 3
    CHECK_THROWS_AS(parse_pp(f8, "(1,0)*x1 = 0"), ValidationError);  // tuple arity
    CHECK_THROWS_AS(parse_pp(z4, "E x1 . x1 = 0"), ValidationError);
}

TEST_CASE("printing round-trips") {
    Ring z4 = make_zmod(4);
    Ring f8 = make_trunc_poly(2, 2);
    std::vector<PpFormula> fixtures{
        parse_pp(z4, "E w1 . 2*w1 - 1*x1 = 0"),
        parse_pp(z4, "0*x1 = 0"),
        parse_pp(z4, "E w1, w2 . 2*w1 + w2 - x1 = 0 & w2 + 3*x2 = 0"),
        parse_pp(f8, "E w1 . (0,1,0)*w1 + (1,1,0)*x1 = 0"),
    };
    for (const PhiFamily& fam : {phi_family(z4, 2), phi_family(f8, 1)})
        for (const PpFormula& f : fam.formulas) fixtures.push_back(f);
    for (const PpFormula& f : fixtures) {
        PpFormula back = parse_pp(f.ring, pp_to_text(f));
        CHECK(back == f);
    }
}

TEST_CASE("pp subgroups: frozen examples") {
    Ring z4 = make_zmod(4);
    Module m4 = cyclic_module(z4, 4), m2 = cyclic_module(z4, 2);
    PpFormula div2 = parse_pp(z4, "E w1 . 2*w1 - 1*x1 = 0");

    CHECK(subgroup_keys(pp_subgroup(div2, m4)) ==
          std::set<std::vector<long>>{{0}, {2}});
    CHECK(subgroup_keys(pp_subgroup(div2, m2)) == std::set<std::vector<long>>{{0}});
    CHECK(pp_subgroup(parse_pp(z4, "0*x1 = 0"), m4).is_full());

    PpFormula anti = parse_pp(z4, "x1 + x2 = 0");
    CanonicalSubgroup s = pp_subgroup(anti, m4);
    CHECK(s.cardinality() == 4);
    CHECK(s.contains({Int(1), Int(3)}));
    CHECK_FALSE(s.contains({Int(1), Int(1)}));

    CHECK_THROWS_AS(pp_subgroup(div2, cyclic_module(make_zmod(2), 2)), ValidationError);

    CHECK(pp_holds(div2, m4, {{Int(2)}}));
    CHECK_FALSE(pp_holds(div2, m4, {{Int(1)}}));
}

TEST_CASE("pp subgroups agree with brute-force evaluation") {
    Ring z4 = make_zmod(4);
    Ring f8 = make_trunc_poly(2, 2);
    std::vector<Module> mods;
    for (const Module& m : enumerate_modules(z4, 8)) mods.push_back(m);
    for (const Module& m : enumerate_modules(f8, 4)) mods.push_back(m);

    std::vector<PpFormula> deeper{
        parse_pp(z4, "E w1, w2 . 2*w1 + w2 - x1 = 0 & w2 + 2*x2 = 0"),
        parse_pp(z4, "E w1 . 2*w1 - x1 = 0 & w1 - x2 = 0"),
        parse_pp(f8, "E w1 . (0,1,0)*w1 - (1,0,0)*x1 = 0"),
        parse_pp(f8, "(0,1,0)*x1 + (0,0,1)*x2 = 0"),
    };

    for (const Module& m : mods) {
        PhiFamily fam = phi_family(m.ring, 2);
        std::vector<PpFormula> all = fam.formulas;
        for (const PpFormula& f : deeper)
            if (f.ring == m.ring) all.push_back(f);
        for (const PpFormula& phi : all)
            CHECK(subgroup_keys(pp_subgroup(phi, m)) == brute_solution_set(phi, m));
    }
}

TEST_CASE("pp subgroups are preserved by homomorphisms") {
    Ring z4 = make_zmod(4);
    std::vector<Module> mods = enumerate_modules(z4, 8);
    PhiFamily fam = phi_family(z4, 2);
    std::map<std::pair<std::size_t, std::size_t>, CanonicalSubgroup> cache;
    auto sub = [&](std::size_t phi_i, std::size_t mod_i) {
        auto key = std::make_pair(phi_i, mod_i);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, pp_subgroup(fam.formulas[phi_i], mods[mod_i])).first;
        return it->second;
    };
    for (std::size_t ai = 0; ai < mods.size(); ++ai)
        for (std::size_t bi = 0; bi < mods.size(); ++bi)
            for (const Hom& f : enumerate_homs(mods[ai], mods[bi]))
                for (std::size_t pi = 0; pi < fam.formulas.size(); ++pi) {
                    const std::size_t n = fam.formulas[pi].free_count;
                    CanonicalSubgroup sa = sub(pi, ai), sb = sub(pi, bi);
                    IntMatrix gens = sa.gen_matrix();
                    for (std::size_t r = 0; r < gens.rows(); ++r) {
                        IntVec img;
                        for (std::size_t b = 0; b < n; ++b) {
                            IntVec block(mods[ai].rank());
                            for (std::size_t c = 0; c < mods[ai].rank(); ++c)
                                block[c] = gens.at(r, b * mods[ai].rank() + c);
                            IntVec fb = f.apply(block);
                            img.insert(img.end(), fb.begin(), fb.end());
                        }
                        CHECK(sb.contains(img));
                    }
                }
}

TEST_CASE("embedding classification: frozen verdicts and witnesses") {
    Ring z4 = make_zmod(4);
    Module c2 = cyclic_module(z4, 2), c4 = cyclic_module(z4, 4);
    Hom f = make_hom(c2, c4, IntMatrix(1, 1, {2}));

    EmbeddingClass cls = classify_embedding(f);
    CHECK(*cls.is_embedding);
    CHECK_FALSE(*cls.is_rd);
    CHECK_FALSE(*cls.is_pure);
    CHECK_FALSE(*cls.is_split);
    REQUIRE(cls.rd_witness.has_value());
    CHECK(*cls.rd_witness == RElem{2});

    // replay the witness at element level: f[A] ∩ 2B vs 2 f[A]
    std::set<std::vector<long>> fa, rb, rfa;
    for (const IntVec& a : c2.enumerate_elements()) {
        fa.insert(key_of(f.apply(a)));
        rfa.insert(key_of(c4.act(*cls.rd_witness, f.apply(a))));
    }
    for (const IntVec& b : c4.enumerate_elements()) rb.insert(key_of(c4.act(*cls.rd_witness, b)));
    std::set<std::vector<long>> meet;
    for (const auto& k : fa)
        if (rb.count(k)) meet.insert(k);
    CHECK(meet != rfa);

    DirectSumResult ds = direct_sum(c2, c2);
    EmbeddingClass split = classify_embedding(ds.inj_a);
    CHECK(*split.is_embedding);
    CHECK(*split.is_rd);
    CHECK(*split.is_pure);
    CHECK(*split.is_split);
    CHECK_FALSE(split.rd_witness.has_value());

    EmbeddingClass ident = classify_embedding(identity_hom(c4));
    CHECK(*ident.is_split);

    EmbeddingClass notinj = classify_embedding(make_hom(c4, c2, IntMatrix(1, 1, {1})));
    CHECK_FALSE(*notinj.is_embedding);
    CHECK_FALSE(*notinj.is_rd);
    REQUIRE(notinj.kernel_witness.has_value());
    CHECK(*notinj.kernel_witness == IntVec{Int(2)});

    // requested-mode subsets leave the rest unset
    EmbeddingClass only_emb = classify_embedding(f, ModeRequest{true, false, false, false});
    CHECK(only_emb.is_embedding.has_value());
    CHECK_FALSE(only_emb.is_rd.has_value());
    CHECK_FALSE(only_emb.is_split.has_value());

    CHECK(is_mode_embedding(f, Mode::plain));
    CHECK_FALSE(is_mode_embedding(f, Mode::rd));
    CHECK_FALSE(is_mode_embedding(f, Mode::pure));
    CHECK(is_mode_embedding(ds.inj_a, Mode::pure));
}

TEST_CASE("purity witnesses are found and replay independently") {
    Ring z4 = make_zmod(4);
    Module c2 = cyclic_module(z4, 2), c4 = cyclic_module(z4, 4);
    Hom f = make_hom(c2, c4, IntMatrix(1, 1, {2}));

    auto w = purity_reflection_witness(f);
    REQUIRE(w.has_value());
    // the target satisfies the formula on the mapped tuple, the source does
    // not; checked with the brute evaluator only
    std::vector<IntVec> mapped;
    for (const IntVec& a : w->source_args) mapped.push_back(f.apply(a));
    CHECK(pp_holds_brute(w->formula, c4, mapped));
    CHECK_FALSE(pp_holds_brute(w->formula, c2, w->source_args));

    // split embeddings admit no witness (full sweep is feasible over Z/2)
    Ring z2 = make_zmod(2);
    Module a2 = cyclic_module(z2, 2);
    DirectSumResult ds = direct_sum(a2, a2);
    CHECK_FALSE(purity_reflection_witness(ds.inj_a).has_value());

    // the classifier attaches a witness when purity fails and RD held no clue
    Ring f8 = make_trunc_poly(2, 2);
    Module reg = regular_module(f8);
    // no small RD-but-not-pure embedding is guaranteed, so just check the
    // failing classify of the Z/4 example carries either kind of evidence
    EmbeddingClass cls = classify_embedding(f);
    CHECK((cls.rd_witness.has_value() || cls.purity_witness.has_value()));
    (void)reg;
}

TEST_CASE("classifier sweep: implication chain, RD ring equivalence, split=pure") {
    Ring z4 = make_zmod(4);
    std::vector<Module> pool4 = enumerate_modules(z4, 8);
    long rd_not_pure = 0;
    for (const Module& a : pool4)
        for (const Module& b : pool4)
            for (const Hom& h : enumerate_homs(a, b)) {
                EmbeddingClass c = classify_embedding(h);
                if (*c.is_split) CHECK(*c.is_pure);
                if (*c.is_pure) CHECK(*c.is_rd);
                if (*c.is_rd) CHECK(*c.is_embedding);
                // Z/n is an RD ring: purity and RD coincide
                if (*c.is_embedding) CHECK(*c.is_rd == *c.is_pure);
                // purity failures over Z/n always carry a ring-element witness
                if (*c.is_embedding && !*c.is_pure) CHECK(c.rd_witness.has_value());
            }

    Ring f8 = make_trunc_poly(2, 2);
    std::vector<Module> pool8 = enumerate_modules(f8, 4);
    for (const Module& a : pool8)
        for (const Module& b : pool8)
            for (const Hom& h : enumerate_homs(a, b)) {
                EmbeddingClass c = classify_embedding(h);
                if (*c.is_split) CHECK(*c.is_pure);
                if (*c.is_pure) CHECK(*c.is_rd);
                if (*c.is_rd) CHECK(*c.is_embedding);
                if (*c.is_embedding && *c.is_rd && !*c.is_pure) ++rd_not_pure;
            }
    MESSAGE("RD-but-not-pure embeddings over F2[x,y]/(x,y)^2, cardinality <= 4: ",
            rd_not_pure);

    // bounded dual routes: split verdict iff no reflection witness.  Full
    // formula sweep over Z/2 at cardinality <= 4; over Z/4 one-equation
    // shapes suffice because purity there reduces to element divisibility
    Ring z2 = make_zmod(2);
    std::vector<Module> pool2 = enumerate_modules(z2, 4);
    for (const Module& a : pool2)
        for (const Module& b : pool2)
            for (const Hom& h : enumerate_homs(a, b)) {
                if (!analyze_hom(h).injective) continue;
                bool split = solve_extension(h, identity_hom(a)).has_value();
                CHECK(split == !purity_reflection_witness(h).has_value());
            }
    FormulaBounds one_eq;
    one_eq.max_free = 1;
    one_eq.max_bound = 1;
    one_eq.max_equations = 1;
    for (const Module& a : pool4)
        for (const Module& b : pool4)
            for (const Hom& h : enumerate_homs(a, b)) {
                if (!analyze_hom(h).injective) continue;
                bool split = solve_extension(h, identity_hom(a)).has_value();
                CHECK(split == !purity_reflection_witness(h, one_eq).has_value());
            }
}

TEST_CASE("phi_family contents") {
    Ring z4 = make_zmod(4);
    PhiFamily fam = phi_family(z4, 2);
    CHECK(fam.arity_bound == 2);
    CHECK(fam.truncated);
    // one sum-divisibility formula per ring element, then 4 + 16 equations
    CHECK(fam.formulas.size() == 4 + 4 + 16);
    const PpFormula& div2 = fam.formulas[2];
    CHECK(div2.bound_count == 2);
    CHECK(div2.free_count == 2);
    REQUIRE(div2.equations.size() == 2);
    CHECK(div2.equations[0].bound_coeffs[0] == RElem{2});
    CHECK(div2.equations[0].bound_coeffs[1] == RElem{3});
    CHECK(div2.equations[1].free_coeffs[0] == RElem{3});

    PhiFamily f2 = phi_family(make_zmod(2), 1);
    CHECK(f2.formulas.size() == 4);  // 2 sum-divisibility + {0x=0, 1x=0}

    PhiFamily zr = phi_family(make_zmod(1), 1);
    CHECK(zr.formulas.size() == 2);
    Module z = Module::zero(make_zmod(1));
    for (const PpFormula& f : zr.formulas) CHECK(pp_subgroup(f, z).is_full());

    CHECK_THROWS_AS(phi_family(z4, 0), ValidationError);
}
