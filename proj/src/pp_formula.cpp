#include "finmod/pp_formula.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace finmod {

std::string mode_name(Mode mode) {
    switch (mode) {
        case Mode::plain: return "plain";
        case Mode::rd: return "rd";
        case Mode::pure: return "pure";
    }
    return "?";
}

std::optional<Mode> parse_mode(const std::string& name) {
    if (name == "plain") return Mode::plain;
    if (name == "rd") return Mode::rd;
    if (name == "pure") return Mode::pure;
    return std::nullopt;
}

PpFormula make_pp_formula(const Ring& ring, std::size_t free_count, std::size_t bound_count,
                          std::vector<PpEquation> equations) {
    if (free_count < 1) throw ValidationError{"pp formula needs at least one free variable"};
    if (equations.empty()) throw ValidationError{"pp formula needs at least one equation"};
    for (PpEquation& eq : equations) {
        if (eq.bound_coeffs.size() != bound_count || eq.free_coeffs.size() != free_count)
            throw ValidationError{"pp formula equation has wrong coefficient arity"};
        for (RElem& c : eq.bound_coeffs) c = ring.reduce(c);
        for (RElem& c : eq.free_coeffs) c = ring.reduce(c);
    }
    return PpFormula{ring, free_count, bound_count, std::move(equations)};
}

namespace {

struct Lexer {
    const std::string& text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= text.size();
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    bool eat(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c, const std::string& what) {
        if (!eat(c))
            throw ValidationError{"syntax error at position " + std::to_string(pos) +
                                  ": expected " + what};
    }
    long integer() {
        skip_ws();
        std::size_t start = pos;
        bool neg = (pos < text.size() && text[pos] == '-');
        if (neg) ++pos;
        if (pos >= text.size() || !std::isdigit((unsigned char)text[pos]))
            throw ValidationError{"syntax error at position " + std::to_string(start) +
                                  ": expected an integer"};
        long v = 0;
        while (pos < text.size() && std::isdigit((unsigned char)text[pos]))
            v = v * 10 + (text[pos++] - '0');
        return neg ? -v : v;
    }
    // returns variable kind 'w'/'x' and 1-based index, or 0 if not a variable
    char try_var(std::size_t& index) {
        skip_ws();
        if (pos >= text.size()) return 0;
        char k = text[pos];
        if ((k != 'w' && k != 'x') || pos + 1 >= text.size() ||
            !std::isdigit((unsigned char)text[pos + 1]))
            return 0;
        ++pos;
        index = 0;
        while (pos < text.size() && std::isdigit((unsigned char)text[pos]))
            index = index * 10 + (std::size_t)(text[pos++] - '0');
        if (index == 0)
            throw ValidationError{"syntax error at position " + std::to_string(pos) +
                                  ": variable indices are 1-based"};
        return k;
    }
};

RElem parse_coeff(Lexer& lx, const Ring& ring) {
    if (lx.eat('(')) {
        RElem c;
        c.push_back(Int(lx.integer()));
        while (lx.eat(',')) c.push_back(Int(lx.integer()));
        lx.expect(')', "')' closing a coefficient tuple");
        if (c.size() != ring.rank())
            throw ValidationError{"coefficient not in ring: tuple has " +
                                  std::to_string(c.size()) + " coordinates, ring has " +
                                  std::to_string(ring.rank())};
        return ring.reduce(c);
    }
    long v = lx.integer();
    if (ring.rank() != 1)
        throw ValidationError{
            "coefficient not in ring: integer literals need a rank-1 ring, got rank " +
            std::to_string(ring.rank())};
    return ring.reduce({Int(v)});
}

}  // namespace

PpFormula parse_pp(const Ring& ring, const std::string& text) {
    Lexer lx{text};
    std::size_t bound_count = 0;
    if (lx.peek() == 'E') {
        ++lx.pos;
        std::vector<bool> declared;
        while (true) {
            std::size_t idx = 0;
            char kind = lx.try_var(idx);
            if (kind != 'w')
                throw ValidationError{"syntax error at position " + std::to_string(lx.pos) +
                                      ": quantifier prefix declares w-variables"};
            if (declared.size() < idx) declared.resize(idx, false);
            declared[idx - 1] = true;
            if (!lx.eat(',')) break;
        }
        lx.expect('.', "'.' after the quantifier prefix");
        for (std::size_t i = 0; i < declared.size(); ++i)
            if (!declared[i])
                throw ValidationError{"unknown variable: prefix skips w" + std::to_string(i + 1)};
        bound_count = declared.size();
    }

    // coefficient maps per equation; sizes fixed after the whole text is read
    struct RawEq {
        std::map<std::size_t, RElem> bound, free;
    };
    std::vector<RawEq> raw;
    std::size_t free_count = 0;

    do {
        RawEq eq;
        bool first = true;
        while (true) {
            Int sign = 1;
            if (!first) {
                if (lx.eat('+')) {
                    sign = 1;
                } else if (lx.eat('-')) {
                    sign = -1;
                } else {
                    break;
                }
            }
            first = false;
            RElem coeff;
            std::size_t idx = 0;
            char kind = lx.try_var(idx);
            if (kind == 0) {
                coeff = parse_coeff(lx, ring);
                lx.expect('*', "'*' between coefficient and variable");
                kind = lx.try_var(idx);
                if (kind == 0)
                    throw ValidationError{"syntax error at position " + std::to_string(lx.pos) +
                                          ": expected a variable"};
            } else {
                coeff = ring.one();
            }
            if (sign == -1) coeff = ring.neg(coeff);
            if (kind == 'w') {
                if (idx > bound_count)
                    throw ValidationError{"unknown variable w" + std::to_string(idx) +
                                          " (not in the quantifier prefix)"};
                auto [it, fresh] = eq.bound.try_emplace(idx - 1, coeff);
                if (!fresh) it->second = ring.add(it->second, coeff);
            } else {
                free_count = std::max(free_count, idx);
                auto [it, fresh] = eq.free.try_emplace(idx - 1, coeff);
                if (!fresh) it->second = ring.add(it->second, coeff);
            }
        }
        lx.expect('=', "'=' ending an equation");
        if (lx.integer() != 0)
            throw ValidationError{"syntax error at position " + std::to_string(lx.pos) +
                                  ": right-hand sides must be 0"};
        raw.push_back(std::move(eq));
    } while (lx.eat('&'));
    if (!lx.eof())
        throw ValidationError{"syntax error at position " + std::to_string(lx.pos) +
                              ": trailing input"};

    std::vector<PpEquation> eqs;
    for (RawEq& r : raw) {
        PpEquation eq;
        eq.bound_coeffs.assign(bound_count, ring.zero());
        eq.free_coeffs.assign(free_count, ring.zero());
        for (auto& [i, c] : r.bound) eq.bound_coeffs[i] = c;
        for (auto& [i, c] : r.free) eq.free_coeffs[i] = c;
        eqs.push_back(std::move(eq));
    }
    return make_pp_formula(ring, free_count, bound_count, std::move(eqs));
}

namespace {

std::string coeff_text(const Ring& ring, const RElem& c) {
    if (ring.rank() == 1) return c[0].get_str();
    std::string s = "(";
    for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + c[i].get_str();
    return s + ")";
}

}  // namespace

std::string pp_to_text(const PpFormula& f) {
    std::ostringstream os;
    if (f.bound_count > 0) {
        os << "E ";
        for (std::size_t i = 0; i < f.bound_count; ++i)
            os << (i ? ", " : "") << "w" << (i + 1);
        os << " . ";
    }
    for (std::size_t e = 0; e < f.equations.size(); ++e) {
        if (e) os << " & ";
        bool first = true;
        auto emit = [&](const RElem& c, char kind, std::size_t idx) {
            os << (first ? "" : " + ") << coeff_text(f.ring, c) << "*" << kind << idx;
            first = false;
        };
        for (std::size_t j = 0; j < f.bound_count; ++j)
            emit(f.equations[e].bound_coeffs[j], 'w', j + 1);
        for (std::size_t j = 0; j < f.free_count; ++j)
            emit(f.equations[e].free_coeffs[j], 'x', j + 1);
        os << " = 0";
    }
    return os.str();
}

CanonicalSubgroup pp_subgroup(const PpFormula& phi, const Module& m) {
    if (!(phi.ring == m.ring))
        throw ValidationError{"pp_subgroup: formula and module live over different rings"};
    const std::size_t k = m.rank(), l = phi.bound_count, n = phi.free_count;
    const std::size_t vars = (l + n) * k;

    IntVec unknown_orders(vars), free_orders(n * k);
    for (std::size_t b = 0; b < l + n; ++b)
        for (std::size_t c = 0; c < k; ++c) unknown_orders[b * k + c] = m.orders[c];
    for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < k; ++c) free_orders[b * k + c] = m.orders[c];

    IntMatrix sys(phi.equations.size() * k, vars);
    IntVec moduli(phi.equations.size() * k);
    for (std::size_t e = 0; e < phi.equations.size(); ++e) {
        std::vector<IntMatrix> acts;
        for (std::size_t j = 0; j < l; ++j)
            acts.push_back(m.action_of(phi.equations[e].bound_coeffs[j]));
        for (std::size_t j = 0; j < n; ++j)
            acts.push_back(m.action_of(phi.equations[e].free_coeffs[j]));
        for (std::size_t c = 0; c < k; ++c) {
            moduli[e * k + c] = m.orders[c];
            for (std::size_t b = 0; b < l + n; ++b)
                for (std::size_t c2 = 0; c2 < k; ++c2)
                    sys.at(e * k + c, b * k + c2) = acts[b].at(c, c2);
        }
    }

    SolveResult sol = congruence_solve(sys, IntVec(moduli.size(), Int(0)), moduli, unknown_orders);
    IntMatrix gens = sol.kernel.gen_matrix();
    IntMatrix proj(gens.rows(), n * k);
    for (std::size_t r = 0; r < gens.rows(); ++r)
        for (std::size_t j = 0; j < n * k; ++j) proj.at(r, j) = gens.at(r, l * k + j);
    return CanonicalSubgroup::span(proj, free_orders);
}

bool pp_holds(const PpFormula& phi, const Module& m, const std::vector<IntVec>& args) {
    if (args.size() != phi.free_count)
        throw ValidationError{"pp_holds: expected " + std::to_string(phi.free_count) +
                              " arguments"};
    IntVec flat;
    for (const IntVec& a : args) {
        IntVec r = m.reduce(a);
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return pp_subgroup(phi, m).contains(flat);
}

namespace {

// membership congruences of a subgroup: y ∈ S iff rows * y ≡ 0 (mod mods)
struct SubgroupCongruences {
    IntMatrix rows;
    IntVec mods;
};

SubgroupCongruences subgroup_congruences(const CanonicalSubgroup& s) {
    SmithResult snf = smith_normal_form(s.lattice().transpose());
    const std::size_t k = s.ambient_rank();
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < k; ++i)
        if (snf.d.at(i, i) != 1) keep.push_back(i);
    SubgroupCongruences out;
    out.rows = IntMatrix(keep.size(), k);
    out.mods.resize(keep.size());
    for (std::size_t r = 0; r < keep.size(); ++r) {
        out.mods[r] = snf.d.at(keep[r], keep[r]);
        for (std::size_t j = 0; j < k; ++j) out.rows.at(r, j) = snf.u.at(keep[r], j);
    }
    return out;
}

// block-diagonal n-fold power of f's matrix, mapping source^n to target^n
IntMatrix power_matrix(const Hom& f, std::size_t n) {
    const std::size_t rs = f.target.rank(), cs = f.source.rank();
    IntMatrix g(n * rs, n * cs);
    for (std::size_t b = 0; b < n; ++b)
        for (std::size_t i = 0; i < rs; ++i)
            for (std::size_t j = 0; j < cs; ++j)
                g.at(b * rs + i, b * cs + j) = f.matrix.at(i, j);
    return g;
}

// the subgroup { x̄ ∈ A^n : f(x̄) ∈ S } for S ≤ B^n
CanonicalSubgroup pp_preimage(const Hom& f, const CanonicalSubgroup& s, std::size_t n) {
    SubgroupCongruences cg = subgroup_congruences(s);
    IntMatrix gf = cg.rows.mul(power_matrix(f, n));
    IntVec unknown_orders(n * f.source.rank());
    for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < f.source.rank(); ++c)
            unknown_orders[b * f.source.rank() + c] = f.source.orders[c];
    SolveResult sol =
        congruence_solve(gf, IntVec(cg.mods.size(), Int(0)), cg.mods, unknown_orders);
    return sol.kernel;
}

}  // namespace

std::optional<ReflectionWitness> purity_reflection_witness(const Hom& f,
                                                           const FormulaBounds& bounds) {
    const Ring& ring = f.source.ring;
    std::vector<RElem> elems = ring.enumerate_elements();
    long tried = 0;
    for (std::size_t n = 1; n <= bounds.max_free; ++n)
        for (std::size_t l = 0; l <= bounds.max_bound; ++l)
            for (std::size_t m = 1; m <= bounds.max_equations; ++m) {
                const std::size_t cells = m * (l + n);
                std::vector<std::size_t> pick(cells, 0);
                while (true) {
                    if (++tried > bounds.max_formulas) return std::nullopt;
                    std::vector<PpEquation> eqs(m);
                    for (std::size_t e = 0; e < m; ++e) {
                        eqs[e].bound_coeffs.resize(l);
                        eqs[e].free_coeffs.resize(n);
                        for (std::size_t j = 0; j < l; ++j)
                            eqs[e].bound_coeffs[j] = elems[pick[e * (l + n) + j]];
                        for (std::size_t j = 0; j < n; ++j)
                            eqs[e].free_coeffs[j] = elems[pick[e * (l + n) + l + j]];
                    }
                    PpFormula phi = make_pp_formula(ring, n, l, std::move(eqs));
                    CanonicalSubgroup sa = pp_subgroup(phi, f.source);
                    CanonicalSubgroup sb = pp_subgroup(phi, f.target);
                    CanonicalSubgroup pre = pp_preimage(f, sb, n);
                    if (pre.cardinality() > sa.cardinality()) {
                        for (const IntVec& e : pre.elements())
                            if (!sa.contains(e)) {
                                std::vector<IntVec> args;
                                for (std::size_t b = 0; b < n; ++b)
                                    args.emplace_back(e.begin() + b * f.source.rank(),
                                                      e.begin() + (b + 1) * f.source.rank());
                                return ReflectionWitness{std::move(phi), std::move(args)};
                            }
                    }
                    std::size_t pos = cells;
                    bool done = (cells == 0);
                    while (pos > 0) {
                        --pos;
                        if (++pick[pos] < elems.size()) break;
                        pick[pos] = 0;
                        if (pos == 0) done = true;
                    }
                    if (done) break;
                }
            }
    return std::nullopt;
}

EmbeddingClass classify_embedding(const Hom& f, const ModeRequest& modes,
                                  const FormulaBounds& witness_bounds) {
    EmbeddingClass out;
    HomAnalysis ha = analyze_hom(f);
    if (modes.embedding || modes.rd || modes.pure || modes.split)
        out.is_embedding = ha.injective;
    if (!ha.injective) {
        if (modes.rd) out.is_rd = false;
        if (modes.pure) out.is_pure = false;
        if (modes.split) out.is_split = false;
        for (const IntVec& e : ha.kernel.group.elements())
            if (!f.source.is_zero_elem(e)) {
                out.kernel_witness = e;
                break;
            }
        return out;
    }

    const Module& b = f.target;
    if (modes.rd) {
        out.is_rd = true;
        for (const RElem& r : b.ring.enumerate_elements()) {
            IntMatrix act = b.action_of(r);
            CanonicalSubgroup rb = CanonicalSubgroup::span(act.transpose(), b.orders);
            CanonicalSubgroup rfa = CanonicalSubgroup::span(
                act.mul(f.matrix).transpose(), b.orders);
            if (!(ha.image.group.intersect(rb) == rfa)) {
                out.is_rd = false;
                out.rd_witness = r;
                break;
            }
        }
    }
    if (modes.pure || modes.split) {
        bool split = solve_extension(f, identity_hom(f.source)).has_value();
        if (modes.split) out.is_split = split;
        if (modes.pure) out.is_pure = split;
        if (!split && !out.rd_witness)
            out.purity_witness = purity_reflection_witness(f, witness_bounds);
    }
    return out;
}

bool is_mode_embedding(const Hom& f, Mode mode) {
    ModeRequest req{true, mode == Mode::rd, false, mode == Mode::pure};
    // witness search is skipped for the fast predicate
    FormulaBounds nb;
    nb.max_formulas = 0;
    EmbeddingClass c = classify_embedding(f, req, nb);
    if (!*c.is_embedding) return false;
    switch (mode) {
        case Mode::plain: return true;
        case Mode::rd: return *c.is_rd;
        case Mode::pure: return *c.is_split;
    }
    return false;
}

PhiFamily phi_family(const Ring& ring, std::size_t equation_arity_bound) {
    if (equation_arity_bound < 1)
        throw ValidationError{"phi_family: arity bound must be at least 1"};
    PhiFamily fam;
    fam.arity_bound = equation_arity_bound;
    RElem one = ring.one(), minus_one = ring.neg(ring.one());

    // ∃ w1 w2 ( r·w1 - w2 = 0  &  w2 - x1 - x2 = 0 ), one per ring element
    for (const RElem& r : ring.enumerate_elements()) {
        PpEquation e1, e2;
        e1.bound_coeffs = {r, minus_one};
        e1.free_coeffs = {ring.zero(), ring.zero()};
        e2.bound_coeffs = {ring.zero(), one};
        e2.free_coeffs = {minus_one, minus_one};
        fam.formulas.push_back(make_pp_formula(ring, 2, 2, {e1, e2}));
    }

    std::vector<RElem> elems = ring.enumerate_elements();
    for (std::size_t arity = 1; arity <= equation_arity_bound; ++arity) {
        std::vector<std::size_t> pick(arity, 0);
        while (true) {
            PpEquation eq;
            eq.free_coeffs.resize(arity);
            for (std::size_t j = 0; j < arity; ++j) eq.free_coeffs[j] = elems[pick[j]];
            fam.formulas.push_back(make_pp_formula(ring, arity, 0, {eq}));
            std::size_t pos = arity;
            bool done = false;
            while (pos > 0) {
                --pos;
                if (++pick[pos] < elems.size()) break;
                pick[pos] = 0;
                if (pos == 0) done = true;
            }
            if (done) break;
        }
    }
    return fam;
}

}  // namespace finmod
