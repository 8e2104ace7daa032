#include "finmod/hom.hpp"

#include <string>

namespace finmod {
namespace {

// Linear system in the entries of a matrix F (target.rank x source.rank,
// flattened row-major) expressing that F is a homomorphism source -> target:
// additive well-definedness plus equivariance with every ring basis action.
// Rows are reduced modulo their own modulus and dropped when trivial.
struct HomSystem {
    IntMatrix a;
    IntVec rhs;
    IntVec moduli;
    IntVec unknown_orders;

    void push_row(IntVec row, const Int& b, const Int& m) {
        for (Int& v : row) v = mod_reduce(v, m);
        Int br = mod_reduce(b, m);
        bool zero = (br == 0);
        for (const Int& v : row)
            if (v != 0) zero = false;
        if (zero) return;
        for (const Int& v : row) a_rows.push_back(v);
        rhs.push_back(br);
        moduli.push_back(m);
    }

    void finish(std::size_t width) {
        a = IntMatrix(moduli.size(), width);
        for (std::size_t i = 0; i < moduli.size(); ++i)
            for (std::size_t j = 0; j < width; ++j) a.at(i, j) = a_rows[i * width + j];
    }

  private:
    IntVec a_rows;
};

HomSystem hom_conditions(const Module& src, const Module& tgt) {
    const std::size_t ks = src.rank(), kt = tgt.rank(), n = ks * kt;
    HomSystem sys;
    sys.unknown_orders.resize(n);
    for (std::size_t l = 0; l < kt; ++l)
        for (std::size_t j = 0; j < ks; ++j) sys.unknown_orders[l * ks + j] = tgt.orders[l];

    for (std::size_t l = 0; l < kt; ++l)
        for (std::size_t j = 0; j < ks; ++j) {
            IntVec row(n, Int(0));
            row[l * ks + j] = src.orders[j];
            sys.push_row(std::move(row), Int(0), tgt.orders[l]);
        }
    for (std::size_t i = 0; i < src.ring.rank(); ++i)
        for (std::size_t r = 0; r < kt; ++r)
            for (std::size_t j = 0; j < ks; ++j) {
                IntVec row(n, Int(0));
                for (std::size_t l = 0; l < ks; ++l)
                    row[r * ks + l] += src.actions[i].at(l, j);
                for (std::size_t l = 0; l < kt; ++l)
                    row[l * ks + j] -= tgt.actions[i].at(r, l);
                sys.push_row(std::move(row), Int(0), tgt.orders[r]);
            }
    return sys;
}

IntMatrix unflatten(const IntVec& entries, std::size_t rows, std::size_t cols) {
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = entries[i * cols + j];
    return m;
}

}  // namespace

Hom make_hom(const Module& source, const Module& target, const IntMatrix& matrix) {
    if (!(source.ring == target.ring))
        throw ValidationError{"make_hom: source and target live over different rings"};
    if (matrix.rows() != target.rank() || matrix.cols() != source.rank())
        throw ValidationError{"make_hom: matrix must be " + std::to_string(target.rank()) + "x" +
                              std::to_string(source.rank())};
    IntMatrix red = matrix.reduce_rows_mod(target.orders);
    for (std::size_t l = 0; l < target.rank(); ++l)
        for (std::size_t j = 0; j < source.rank(); ++j)
            if (mod_reduce(red.at(l, j) * source.orders[j], target.orders[l]) != 0)
                throw ValidationError{
                    "make_hom: not additively well defined at generator " + std::to_string(j) +
                    ": its order " + source.orders[j].get_str() +
                    " does not annihilate the image coordinate " + std::to_string(l)};
    for (std::size_t i = 0; i < source.ring.rank(); ++i)
        if (red.mul(source.actions[i]).reduce_rows_mod(target.orders) !=
            target.actions[i].mul(red).reduce_rows_mod(target.orders))
            throw ValidationError{
                "make_hom: not equivariant for ring basis element " + std::to_string(i)};
    return Hom{source, target, std::move(red)};
}

Hom compose_hom(const Hom& g, const Hom& f) {
    if (!(f.target == g.source))
        throw ValidationError{"compose_hom: middle modules do not match"};
    return Hom{f.source, g.target, g.matrix.mul(f.matrix).reduce_rows_mod(g.target.orders)};
}

HomAnalysis analyze_hom(const Hom& f) {
    SolveResult sol = congruence_solve(f.matrix, IntVec(f.target.rank(), Int(0)),
                                       f.target.orders, f.source.orders);
    Submodule kernel = make_submodule(f.source, sol.kernel);
    Submodule image =
        make_submodule(f.target, CanonicalSubgroup::span(f.matrix.transpose(), f.target.orders));
    HomAnalysis out{kernel, image, kernel.cardinality() == 1,
                    image.cardinality() == f.target.cardinality()};
    return out;
}

Int HomGroup::cardinality() const {
    Int c = 1;
    for (const Int& o : orders) c *= o;
    return c;
}

Hom HomGroup::from_flat(const IntVec& entries) const {
    return Hom{source, target,
               unflatten(entries, target.rank(), source.rank()).reduce_rows_mod(target.orders)};
}

HomGroup hom_group(const Module& a, const Module& b) {
    if (!(a.ring == b.ring))
        throw ValidationError{"hom_group: modules live over different rings"};
    const std::size_t n = a.rank() * b.rank();
    HomSystem sys = hom_conditions(a, b);
    sys.finish(n);
    SolveResult sol = congruence_solve(sys.a, sys.rhs, sys.moduli, sys.unknown_orders);

    HomGroup hg;
    hg.source = a;
    hg.target = b;
    hg.flat = sol.kernel;
    const IntMatrix& lat = sol.kernel.lattice();
    IntMatrix gens = sol.kernel.gen_matrix();
    std::size_t g = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (lat.at(i, i) != sys.unknown_orders[i]) {
            hg.basis.push_back(hg.from_flat(gens.row(g++)));
            hg.orders.push_back(sys.unknown_orders[i] / lat.at(i, i));
        }
    return hg;
}

std::vector<Hom> enumerate_homs(const Module& a, const Module& b) {
    HomGroup hg = hom_group(a, b);
    std::vector<Hom> out;
    for (const IntVec& e : hg.flat.elements()) out.push_back(hg.from_flat(e));
    return out;
}

std::vector<Hom> module_automorphisms(const Module& m) {
    std::vector<Hom> out;
    for (Hom& h : enumerate_homs(m, m))
        if (CanonicalSubgroup::span(h.matrix.transpose(), m.orders).is_full())
            out.push_back(std::move(h));
    return out;
}

std::optional<Hom> solve_extension(const Hom& f, const Hom& g) {
    if (!(f.source == g.source))
        throw ValidationError{"solve_extension: the two maps have different sources"};
    const Module& b = f.target;
    const Module& e = g.target;
    const std::size_t n = b.rank() * e.rank();

    HomSystem sys = hom_conditions(b, e);
    for (std::size_t r = 0; r < e.rank(); ++r)
        for (std::size_t j = 0; j < f.source.rank(); ++j) {
            IntVec row(n, Int(0));
            for (std::size_t l = 0; l < b.rank(); ++l)
                row[r * b.rank() + l] += f.matrix.at(l, j);
            sys.push_row(std::move(row), g.matrix.at(r, j), e.orders[r]);
        }
    sys.finish(n);
    SolveResult sol = congruence_solve(sys.a, sys.rhs, sys.moduli, sys.unknown_orders);
    if (!sol.particular) return std::nullopt;
    return Hom{b, e, unflatten(*sol.particular, e.rank(), b.rank()).reduce_rows_mod(e.orders)};
}


Hom submodule_connecting_hom(const Submodule& inner, const Submodule& outer) {
    if (!(inner.ambient == outer.ambient))
        throw ValidationError{"submodule_connecting_hom: ambient modules differ"};
    if (!inner.group.subgroup_of(outer.group))
        throw ValidationError{"submodule_connecting_hom: inner is not contained in outer"};
    SubmoduleModule in = submodule_as_module(inner);
    SubmoduleModule out = submodule_as_module(outer);
    IntMatrix x(out.module.rank(), in.module.rank());
    for (std::size_t j = 0; j < in.module.rank(); ++j) {
        SolveResult sol = congruence_solve(out.inclusion.matrix, in.inclusion.matrix.col(j),
                                           inner.ambient.orders, out.module.orders);
        if (!sol.particular)
            throw ValidationError{"submodule_connecting_hom: generator image lift failed"};
        for (std::size_t l = 0; l < out.module.rank(); ++l) x.at(l, j) = (*sol.particular)[l];
    }
    return make_hom(in.module, out.module, x);
}
}  // namespace finmod
