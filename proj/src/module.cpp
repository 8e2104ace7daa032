#include "finmod/module.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <string>

namespace finmod {
namespace {

std::string vec_str(const IntVec& v) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
    os << "]";
    return os.str();
}

// inverse of a unimodular integer matrix: the row Hermite form of u is the
// identity, and the recorded transformation is exactly u^-1
IntMatrix unimodular_inverse(const IntMatrix& u) {
    HermiteResult h = row_hermite(u);
    if (h.h != IntMatrix::identity(u.rows()))
        throw ValidationError{"unimodular_inverse: matrix is not unimodular"};
    return h.u;
}

// membership of column vector w in the row span of a full-rank square
// Hermite form (upper triangular, positive diagonal)
bool hnf_lattice_contains(const IntMatrix& h, const IntVec& w) {
    IntVec x = w;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        Int q, r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), x[i].get_mpz_t(), h.at(i, i).get_mpz_t());
        if (r != 0) return false;
        for (std::size_t j = i; j < h.cols(); ++j) x[j] -= q * h.at(i, j);
    }
    return true;
}

void validate_module_laws(const Module& m) {
    const std::size_t k = m.rank();
    const Ring& ring = m.ring;
    if (m.actions.size() != ring.rank())
        throw ValidationError{"module: expected one action matrix per ring basis element"};
    for (std::size_t i = 0; i < ring.rank(); ++i) {
        const IntMatrix& a = m.actions[i];
        if (a.rows() != k || a.cols() != k)
            throw ValidationError{"module: action matrix " + std::to_string(i) +
                                  " is not " + std::to_string(k) + "x" + std::to_string(k)};
        for (std::size_t l = 0; l < k; ++l)
            for (std::size_t j = 0; j < k; ++j)
                if (mod_reduce(a.at(l, j) * m.orders[j], m.orders[l]) != 0)
                    throw ValidationError{
                        "module: action of basis element " + std::to_string(i) +
                        " is not well defined at entry (" + std::to_string(l) + "," +
                        std::to_string(j) + "): order " + m.orders[j].get_str() +
                        " does not annihilate it modulo " + m.orders[l].get_str()};
    }
    if (m.action_of(ring.unit) != IntMatrix::identity(k).reduce_rows_mod(m.orders))
        throw ValidationError{"module: ring unit does not act as the identity"};
    for (std::size_t i = 0; i < ring.rank(); ++i)
        for (std::size_t j = 0; j < ring.rank(); ++j) {
            IntMatrix lhs = m.actions[i].mul(m.actions[j]).reduce_rows_mod(m.orders);
            IntMatrix rhs = m.action_of(ring.struct_consts[i][j]);
            if (lhs != rhs)
                throw ValidationError{
                    "module: action is not multiplicative on ring basis pair (" +
                    std::to_string(i) + "," + std::to_string(j) + ")"};
        }
}

}  // namespace

Int Module::cardinality() const {
    Int c = 1;
    for (const Int& d : orders) c *= d;
    return c;
}

IntVec Module::reduce(const IntVec& x) const {
    if (x.size() != rank()) throw ValidationError{"module element has wrong length"};
    IntVec r(rank());
    for (std::size_t i = 0; i < rank(); ++i) r[i] = mod_reduce(x[i], orders[i]);
    return r;
}

IntVec Module::add(const IntVec& a, const IntVec& b) const {
    IntVec r = reduce(a);
    const IntVec rb = reduce(b);
    for (std::size_t i = 0; i < rank(); ++i) r[i] = mod_reduce(r[i] + rb[i], orders[i]);
    return r;
}

IntVec Module::sub(const IntVec& a, const IntVec& b) const { return add(a, neg(b)); }

IntVec Module::neg(const IntVec& a) const {
    IntVec r = reduce(a);
    for (std::size_t i = 0; i < rank(); ++i) r[i] = mod_reduce(-r[i], orders[i]);
    return r;
}

bool Module::is_zero_elem(const IntVec& a) const {
    for (const Int& v : reduce(a))
        if (v != 0) return false;
    return true;
}

IntMatrix Module::action_of(const RElem& r) const {
    if (r.size() != ring.rank()) throw ValidationError{"action_of: ring element has wrong length"};
    IntMatrix m(rank(), rank());
    for (std::size_t i = 0; i < ring.rank(); ++i) {
        if (r[i] == 0) continue;
        for (std::size_t l = 0; l < rank(); ++l)
            for (std::size_t j = 0; j < rank(); ++j) m.at(l, j) += r[i] * actions[i].at(l, j);
    }
    return m.reduce_rows_mod(orders);
}

IntVec Module::act(const RElem& r, const IntVec& x) const {
    return reduce(action_of(r).mul_vec(reduce(x)));
}

std::vector<IntVec> Module::enumerate_elements() const {
    for (const Int& d : orders)
        if (!d.fits_ulong_p()) throw ResourceCapError{"module too large to enumerate"};
    std::vector<IntVec> out;
    Int card = cardinality();
    if (!card.fits_ulong_p()) throw ResourceCapError{"module too large to enumerate"};
    out.reserve(card.get_ui());
    IntVec cur(rank(), Int(0));
    while (true) {
        out.push_back(cur);
        std::size_t pos = rank();
        while (pos > 0) {
            --pos;
            cur[pos] += 1;
            if (cur[pos] < orders[pos]) break;
            cur[pos] = 0;
            if (pos == 0) return out;
        }
        if (rank() == 0) return out;
    }
}

Int Module::element_additive_order(const IntVec& x) const {
    IntVec r = reduce(x);
    Int o = 1;
    for (std::size_t i = 0; i < rank(); ++i) {
        Int g = gcd(r[i], orders[i]);
        o = lcm(o, orders[i] / g);
    }
    return o;
}

Module Module::zero(const Ring& ring) {
    Module m;
    m.ring = ring;
    m.actions.assign(ring.rank(), IntMatrix(0, 0));
    return m;
}

IntVec Hom::apply(const IntVec& x) const {
    return target.reduce(matrix.mul_vec(source.reduce(x)));
}

Hom identity_hom(const Module& m) {
    return Hom{m, m, IntMatrix::identity(m.rank()).reduce_rows_mod(m.orders)};
}

Hom zero_hom(const Module& source, const Module& target) {
    return Hom{source, target, IntMatrix(target.rank(), source.rank())};
}

CanonicalizedPresentation reduce_presentation(const Ring& ring, const IntMatrix& relations,
                                              const std::vector<IntMatrix>& raw_actions) {
    const std::size_t r = relations.rows();
    if (relations.cols() != r)
        throw ValidationError{"reduce_presentation: relation lattice must be square"};
    if (raw_actions.size() != ring.rank())
        throw ValidationError{"reduce_presentation: expected one action per ring basis element"};
    for (const IntMatrix& a : raw_actions)
        if (a.rows() != r || a.cols() != r)
            throw ValidationError{"reduce_presentation: action matrix shape mismatch"};

    // actions must map the relation lattice into itself, otherwise they do
    // not descend to the quotient
    IntMatrix hnf = row_hermite(relations).h;
    if (hnf.rows() != r || [&] {
            for (std::size_t i = 0; i < r; ++i)
                if (hnf.at(i, i) == 0) return true;
            return false;
        }())
        throw ValidationError{"reduce_presentation: relation lattice is not full rank"};
    for (std::size_t i = 0; i < raw_actions.size(); ++i)
        for (std::size_t g = 0; g < r; ++g) {
            IntVec image = raw_actions[i].mul_vec(relations.row(g));
            if (!hnf_lattice_contains(hnf, image))
                throw ValidationError{
                    "reduce_presentation: action of ring basis element " + std::to_string(i) +
                    " does not preserve the relation " + vec_str(relations.row(g))};
        }

    SmithResult snf = smith_normal_form(relations.transpose());
    IntMatrix uinv = unimodular_inverse(snf.u);

    std::vector<std::size_t> keep;
    IntVec orders;
    for (std::size_t i = 0; i < r; ++i) {
        const Int& d = snf.d.at(i, i);
        if (d < 1) throw ValidationError{"reduce_presentation: relation lattice is degenerate"};
        if (d != 1) {
            keep.push_back(i);
            orders.push_back(d);
        }
    }
    const std::size_t k = keep.size();

    Module mod;
    mod.ring = ring;
    mod.orders = orders;
    for (const IntMatrix& a : raw_actions) {
        IntMatrix conj = snf.u.mul(a).mul(uinv);
        IntMatrix b(k, k);
        for (std::size_t l = 0; l < k; ++l)
            for (std::size_t j = 0; j < k; ++j)
                b.at(l, j) = mod_reduce(conj.at(keep[l], keep[j]), orders[l]);
        mod.actions.push_back(b);
    }
    validate_module_laws(mod);

    IntMatrix to_c(k, r), from_c(r, k);
    for (std::size_t l = 0; l < k; ++l)
        for (std::size_t j = 0; j < r; ++j) to_c.at(l, j) = mod_reduce(snf.u.at(keep[l], j), orders[l]);
    for (std::size_t l = 0; l < r; ++l)
        for (std::size_t j = 0; j < k; ++j) from_c.at(l, j) = uinv.at(l, keep[j]);
    return CanonicalizedPresentation{std::move(mod), std::move(to_c), std::move(from_c)};
}

Module make_module(const Ring& ring, const IntVec& raw_orders,
                   const std::vector<IntMatrix>& raw_actions) {
    for (const Int& d : raw_orders)
        if (d < 1)
            throw ValidationError{"make_module: additive orders must be >= 1, got " + d.get_str()};
    return reduce_presentation(ring, IntMatrix::diagonal(raw_orders), raw_actions).module;
}

DirectSumResult direct_sum(const Module& a, const Module& b) {
    if (!(a.ring == b.ring))
        throw ValidationError{"direct_sum: modules live over different rings"};
    const std::size_t ka = a.rank(), kb = b.rank(), kr = ka + kb;
    IntVec raw_orders = a.orders;
    raw_orders.insert(raw_orders.end(), b.orders.begin(), b.orders.end());
    std::vector<IntMatrix> raw_actions;
    for (std::size_t i = 0; i < a.ring.rank(); ++i) {
        IntMatrix m(kr, kr);
        for (std::size_t l = 0; l < ka; ++l)
            for (std::size_t j = 0; j < ka; ++j) m.at(l, j) = a.actions[i].at(l, j);
        for (std::size_t l = 0; l < kb; ++l)
            for (std::size_t j = 0; j < kb; ++j) m.at(ka + l, ka + j) = b.actions[i].at(l, j);
        raw_actions.push_back(std::move(m));
    }
    CanonicalizedPresentation cp =
        reduce_presentation(a.ring, IntMatrix::diagonal(raw_orders), raw_actions);

    const std::size_t k = cp.module.rank();
    IntMatrix inj_a(k, ka), inj_b(k, kb), proj_a(ka, k), proj_b(kb, k);
    for (std::size_t l = 0; l < k; ++l) {
        for (std::size_t j = 0; j < ka; ++j) inj_a.at(l, j) = cp.to_canonical.at(l, j);
        for (std::size_t j = 0; j < kb; ++j) inj_b.at(l, j) = cp.to_canonical.at(l, ka + j);
    }
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t l = 0; l < ka; ++l)
            proj_a.at(l, j) = mod_reduce(cp.from_canonical.at(l, j), a.orders[l]);
        for (std::size_t l = 0; l < kb; ++l)
            proj_b.at(l, j) = mod_reduce(cp.from_canonical.at(ka + l, j), b.orders[l]);
    }
    return DirectSumResult{cp.module,
                           Hom{a, cp.module, std::move(inj_a)},
                           Hom{b, cp.module, std::move(inj_b)},
                           Hom{cp.module, a, std::move(proj_a)},
                           Hom{cp.module, b, std::move(proj_b)}};
}

Module direct_power(const Module& m, std::size_t n) {
    Module acc = Module::zero(m.ring);
    for (std::size_t i = 0; i < n; ++i) acc = direct_sum(acc, m).sum;
    return acc;
}

Module regular_module(const Ring& ring) {
    std::vector<IntMatrix> actions;
    for (std::size_t i = 0; i < ring.rank(); ++i) actions.push_back(ring.left_mult_matrix(i));
    return make_module(ring, ring.additive_orders, actions);
}

bool is_action_closed(const Module& m, const CanonicalSubgroup& s) {
    if (s.ambient_orders() != m.orders) return false;
    IntMatrix g = s.gen_matrix();
    for (std::size_t r = 0; r < g.rows(); ++r)
        for (std::size_t i = 0; i < m.ring.rank(); ++i)
            if (!s.contains(m.reduce(m.actions[i].mul_vec(g.row(r))))) return false;
    return true;
}

Submodule submodule_generate(const Module& m, const std::vector<IntVec>& gens) {
    IntMatrix g(gens.size(), m.rank());
    for (std::size_t r = 0; r < gens.size(); ++r) {
        IntVec red = m.reduce(gens[r]);
        for (std::size_t j = 0; j < m.rank(); ++j) g.at(r, j) = red[j];
    }
    CanonicalSubgroup s = CanonicalSubgroup::span(g, m.orders);
    while (true) {
        IntMatrix cur = s.gen_matrix();
        std::vector<IntVec> grown;
        for (std::size_t r = 0; r < cur.rows(); ++r)
            for (std::size_t i = 0; i < m.ring.rank(); ++i) {
                IntVec x = m.reduce(m.actions[i].mul_vec(cur.row(r)));
                if (!s.contains(x)) grown.push_back(x);
            }
        if (grown.empty()) break;
        IntMatrix next(cur.rows() + grown.size(), m.rank());
        for (std::size_t r = 0; r < cur.rows(); ++r)
            for (std::size_t j = 0; j < m.rank(); ++j) next.at(r, j) = cur.at(r, j);
        for (std::size_t r = 0; r < grown.size(); ++r)
            for (std::size_t j = 0; j < m.rank(); ++j) next.at(cur.rows() + r, j) = grown[r][j];
        s = CanonicalSubgroup::span(next, m.orders);
    }
    return Submodule{m, s};
}

Submodule zero_submodule(const Module& m) {
    return Submodule{m, CanonicalSubgroup::zero(m.orders)};
}

Submodule full_submodule(const Module& m) {
    return Submodule{m, CanonicalSubgroup::full(m.orders)};
}

Submodule make_submodule(const Module& m, const CanonicalSubgroup& s) {
    if (s.ambient_orders() != m.orders)
        throw ValidationError{"make_submodule: subgroup ambient does not match the module"};
    if (!is_action_closed(m, s))
        throw ValidationError{"make_submodule: subgroup is not closed under the ring action"};
    return Submodule{m, s};
}

SubmoduleModule submodule_as_module(const Submodule& s) {
    const Module& amb = s.ambient;
    IntMatrix g = s.group.gen_matrix();
    const std::size_t r = g.rows();
    IntVec gen_orders(r);
    for (std::size_t i = 0; i < r; ++i)
        gen_orders[i] = amb.element_additive_order(g.row(i));

    IntMatrix gt = g.transpose();  // columns = generators, as an ambient system
    SolveResult hom0 = congruence_solve(gt, IntVec(amb.rank(), Int(0)), amb.orders, gen_orders);
    IntMatrix relations = hom0.kernel.lattice();

    std::vector<IntMatrix> raw_actions;
    for (std::size_t i = 0; i < amb.ring.rank(); ++i) {
        IntMatrix a(r, r);
        for (std::size_t j = 0; j < r; ++j) {
            IntVec img = amb.reduce(amb.actions[i].mul_vec(g.row(j)));
            SolveResult sol = congruence_solve(gt, img, amb.orders, gen_orders);
            if (!sol.particular)
                throw ValidationError{"submodule_as_module: subgroup is not action closed"};
            for (std::size_t l = 0; l < r; ++l) a.at(l, j) = (*sol.particular)[l];
        }
        raw_actions.push_back(std::move(a));
    }

    CanonicalizedPresentation cp = reduce_presentation(amb.ring, relations, raw_actions);
    IntMatrix incl = gt.mul(cp.from_canonical).reduce_rows_mod(amb.orders);
    return SubmoduleModule{cp.module, Hom{cp.module, amb, std::move(incl)}};
}


QuotientResult quotient_by(const Module& m, const Submodule& s) {
    if (!(s.ambient == m)) throw ValidationError{"quotient_by: submodule of a different module"};
    CanonicalizedPresentation cp = reduce_presentation(m.ring, s.group.lattice(), m.actions);
    return QuotientResult{cp.module, Hom{m, cp.module, cp.to_canonical}};
}

std::optional<IntMatrix> are_isomorphic(const Module& a, const Module& b) {
    if (!(a.ring == b.ring))
        throw ValidationError{"are_isomorphic: modules live over different rings"};
    if (a.orders != b.orders) return std::nullopt;
    const std::size_t k = a.rank();
    if (k == 0) return IntMatrix(0, 0);

    std::vector<std::vector<IntVec>> candidates(k);
    for (const IntVec& e : b.enumerate_elements()) {
        Int o = b.element_additive_order(e);
        for (std::size_t i = 0; i < k; ++i)
            if (o == a.orders[i]) candidates[i].push_back(e);
    }

    IntMatrix f(k, k);
    std::function<bool(std::size_t)> assign = [&](std::size_t col) -> bool {
        if (col == k) {
            for (std::size_t i = 0; i < a.ring.rank(); ++i)
                if (f.mul(a.actions[i]).reduce_rows_mod(b.orders) !=
                    b.actions[i].mul(f).reduce_rows_mod(b.orders))
                    return false;
            return CanonicalSubgroup::span(f.transpose(), b.orders).is_full();
        }
        for (const IntVec& cand : candidates[col]) {
            for (std::size_t l = 0; l < k; ++l) f.at(l, col) = cand[l];
            // check every equivariance column that only involves assigned
            // columns of f so far
            bool ok = true;
            for (std::size_t i = 0; ok && i < a.ring.rank(); ++i)
                for (std::size_t j = 0; ok && j <= col; ++j) {
                    bool ready = true;
                    for (std::size_t l = col + 1; l < k; ++l)
                        if (mod_reduce(a.actions[i].at(l, j), a.orders[l]) != 0) ready = false;
                    if (!ready) continue;
                    for (std::size_t row = 0; ok && row < k; ++row) {
                        Int lhs = 0, rhs = 0;
                        for (std::size_t l = 0; l <= col; ++l)
                            lhs += f.at(row, l) * a.actions[i].at(l, j);
                        for (std::size_t l = 0; l < k; ++l)
                            rhs += b.actions[i].at(row, l) * f.at(l, j);
                        if (mod_reduce(lhs - rhs, b.orders[row]) != 0) ok = false;
                    }
                }
            if (ok && assign(col + 1)) return true;
        }
        return false;
    };
    if (assign(0)) return f;
    return std::nullopt;
}

namespace {

// ascending-divisibility order tuples with product <= max_size, every entry
// dividing `exponent`; sorted by (product, lexicographic)
std::vector<IntVec> additive_types(const Int& exponent, const Int& max_size) {
    std::vector<Int> divisors;
    for (Int d = 2; d <= exponent; ++d)
        if (exponent % d == 0) divisors.push_back(d);
    std::vector<IntVec> out;
    IntVec cur;
    std::function<void(const Int&, const Int&)> grow = [&](const Int& last, const Int& prod) {
        out.push_back(cur);
        for (const Int& d : divisors) {
            if (d % last != 0) continue;
            Int np = prod * d;
            if (np > max_size) continue;
            cur.push_back(d);
            grow(d, np);
            cur.pop_back();
        }
    };
    grow(Int(1), Int(1));
    std::sort(out.begin(), out.end(), [](const IntVec& x, const IntVec& y) {
        Int px = 1, py = 1;
        for (const Int& v : x) px *= v;
        for (const Int& v : y) py *= v;
        if (px != py) return px < py;
        return x < y;
    });
    return out;
}

// all well-defined matrices for one action slot, entry (l,j) ranging over the
// multiples of orders[l]/gcd(orders[l], orders[j]); lexicographic row-major
std::vector<IntMatrix> action_slot_candidates(const IntVec& orders, Int& budget,
                                              const Int& cap) {
    const std::size_t k = orders.size();
    std::vector<Int> step(k * k), count(k * k);
    for (std::size_t l = 0; l < k; ++l)
        for (std::size_t j = 0; j < k; ++j) {
            Int g = gcd(orders[l], orders[j]);
            step[l * k + j] = orders[l] / g;
            count[l * k + j] = g;
        }
    std::vector<IntMatrix> out;
    IntMatrix cur(k, k);
    std::vector<Int> idx(k * k, Int(0));
    while (true) {
        budget += 1;
        if (budget > cap)
            throw ResourceCapError{
                "module enumeration candidate budget exceeded (max_candidates = " +
                cap.get_str() + ")"};
        out.push_back(cur);
        std::size_t pos = k * k;
        bool done = (k == 0);
        while (pos > 0) {
            --pos;
            idx[pos] += 1;
            if (idx[pos] < count[pos]) {
                cur.at(pos / k, pos % k) = idx[pos] * step[pos];
                break;
            }
            idx[pos] = 0;
            cur.at(pos / k, pos % k) = 0;
            if (pos == 0) done = true;
        }
        if (done) break;
    }
    return out;
}

bool supported_in(const RElem& r, const std::vector<bool>& allowed) {
    for (std::size_t i = 0; i < r.size(); ++i)
        if (r[i] != 0 && !allowed[i]) return false;
    return true;
}

}  // namespace

std::vector<Module> enumerate_modules(const Ring& ring, const Int& max_size,
                                      const EnumLimits& limits) {
    std::vector<Module> reps;
    if (max_size < 1) return reps;

    Int exponent = 1;
    for (std::size_t i = 0; i < ring.rank(); ++i) {
        Int g = gcd(ring.unit[i], ring.additive_orders[i]);
        exponent = lcm(exponent, ring.additive_orders[i] / g);
    }

    // the action of a basis unit is forced to be the identity
    std::optional<std::size_t> unit_pos;
    {
        std::size_t nz = 0, pos = 0;
        for (std::size_t i = 0; i < ring.rank(); ++i)
            if (ring.unit[i] != 0) {
                ++nz;
                pos = i;
            }
        if (nz == 1 && ring.unit[pos] == 1) unit_pos = pos;
    }

    Int budget = 0;
    const Int cap = limits.max_candidates;
    for (const IntVec& orders : additive_types(exponent, max_size)) {
        const std::size_t k = orders.size();
        std::vector<bool> forced(ring.rank(), false);
        if (unit_pos) forced[*unit_pos] = true;

        std::vector<std::size_t> free_slots;
        for (std::size_t i = 0; i < ring.rank(); ++i)
            if (!forced[i]) free_slots.push_back(i);

        IntMatrix ident = IntMatrix::identity(k).reduce_rows_mod(orders);
        std::vector<std::vector<IntMatrix>> lists;
        for (std::size_t i : free_slots) {
            std::vector<IntMatrix> cands = action_slot_candidates(orders, budget, cap);
            // keep candidates consistent with every product constraint that
            // involves only this slot and forced slots
            std::vector<bool> allowed = forced;
            allowed[i] = true;
            std::vector<IntMatrix> kept;
            for (const IntMatrix& x : cands) {
                auto partial_action = [&](const RElem& r) {
                    IntMatrix m(k, k);
                    for (std::size_t s = 0; s < ring.rank(); ++s) {
                        if (r[s] == 0) continue;
                        const IntMatrix& base = (s == i) ? x : ident;
                        for (std::size_t l = 0; l < k; ++l)
                            for (std::size_t j = 0; j < k; ++j)
                                m.at(l, j) += r[s] * base.at(l, j);
                    }
                    return m.reduce_rows_mod(orders);
                };
                bool ok = true;
                for (std::size_t s = 0; ok && s < ring.rank(); ++s) {
                    if (s != i && !forced[s]) continue;
                    const IntMatrix& ms = (s == i) ? x : ident;
                    if (supported_in(ring.struct_consts[i][s], allowed))
                        ok = ok && x.mul(ms).reduce_rows_mod(orders) ==
                                       partial_action(ring.struct_consts[i][s]);
                    if (ok && s != i && supported_in(ring.struct_consts[s][i], allowed))
                        ok = ok && ms.mul(x).reduce_rows_mod(orders) ==
                                       partial_action(ring.struct_consts[s][i]);
                }
                if (ok) kept.push_back(x);
            }
            lists.push_back(std::move(kept));
        }

        std::vector<Module> type_reps;
        std::vector<std::size_t> pick(lists.size(), 0);
        bool exhausted = false;
        for (const auto& l : lists)
            if (l.empty()) exhausted = true;
        while (!exhausted) {
            budget += 1;
            if (budget > cap)
                throw ResourceCapError{
                    "module enumeration candidate budget exceeded (max_candidates = " +
                    cap.get_str() + ")"};
            Module cand;
            cand.ring = ring;
            cand.orders = orders;
            cand.actions.assign(ring.rank(), ident);
            for (std::size_t t = 0; t < free_slots.size(); ++t)
                cand.actions[free_slots[t]] = lists[t][pick[t]];
            bool lawful = cand.action_of(ring.unit) == ident;
            for (std::size_t i = 0; lawful && i < ring.rank(); ++i)
                for (std::size_t j = 0; lawful && j < ring.rank(); ++j)
                    lawful = cand.actions[i].mul(cand.actions[j]).reduce_rows_mod(orders) ==
                             cand.action_of(ring.struct_consts[i][j]);
            if (lawful) {
                bool fresh = true;
                for (const Module& rep : type_reps)
                    if (are_isomorphic(rep, cand)) {
                        fresh = false;
                        break;
                    }
                if (fresh) type_reps.push_back(std::move(cand));
            }
            std::size_t pos = pick.size();
            exhausted = (pos == 0);
            while (pos > 0) {
                --pos;
                if (++pick[pos] < lists[pos].size()) break;
                pick[pos] = 0;
                if (pos == 0) exhausted = true;
            }
        }
        for (Module& m : type_reps) reps.push_back(std::move(m));
    }
    return reps;
}

std::vector<Submodule> submodule_lattice(const Module& m, const Int& cap) {
    std::vector<IntVec> elems = m.enumerate_elements();
    std::vector<Submodule> found{zero_submodule(m)};
    std::size_t scan = 0;
    while (scan < found.size()) {
        Submodule base = found[scan++];
        IntMatrix g = base.group.gen_matrix();
        std::vector<IntVec> gens;
        for (std::size_t r = 0; r < g.rows(); ++r) gens.push_back(g.row(r));
        gens.push_back(IntVec());
        for (const IntVec& x : elems) {
            if (base.group.contains(x)) continue;
            gens.back() = x;
            Submodule grown = submodule_generate(m, gens);
            bool fresh = true;
            for (const Submodule& s : found)
                if (s.group == grown.group) {
                    fresh = false;
                    break;
                }
            if (fresh) {
                found.push_back(std::move(grown));
                if (Int(found.size()) > cap)
                    throw ResourceCapError{"submodule lattice exceeded cap " + cap.get_str()};
            }
        }
    }
    std::sort(found.begin(), found.end(), [](const Submodule& a, const Submodule& b) {
        Int ca = a.cardinality(), cb = b.cardinality();
        if (ca != cb) return ca < cb;
        return CanonicalSubgroup::compare(a.group, b.group) < 0;
    });
    return found;
}

}  // namespace finmod
