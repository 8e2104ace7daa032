#include "finmod/pushout.hpp"

#include <algorithm>

namespace finmod {

PushoutResult pushout(const Hom& f1, const Hom& f2, std::optional<Mode> mode) {
    if (!(f1.source == f2.source))
        throw ValidationError{"pushout: the two maps must share their source"};
    DirectSumResult ds = direct_sum(f1.target, f2.target);

    std::vector<IntVec> gens;
    for (std::size_t j = 0; j < f1.source.rank(); ++j) {
        IntVec a = ds.inj_a.apply(f1.matrix.col(j));
        IntVec b = ds.inj_b.apply(f2.target.neg(f2.matrix.col(j)));
        gens.push_back(ds.sum.add(a, b));
    }
    QuotientResult q = quotient_by(ds.sum, submodule_generate(ds.sum, gens));

    PushoutResult out;
    out.apex = q.quotient;
    out.leg1 = compose_hom(q.projection, ds.inj_b);
    out.leg2 = compose_hom(q.projection, ds.inj_a);
    out.coset_map = q.projection;
    out.mode = mode;
    if (mode) {
        if (is_mode_embedding(f1, *mode))
            out.leg1_preserves_mode = is_mode_embedding(out.leg1, *mode);
        if (is_mode_embedding(f2, *mode))
            out.leg2_preserves_mode = is_mode_embedding(out.leg2, *mode);
    }
    return out;
}

Hom induced_corner(const PushoutResult& p, const Hom& h1, const Hom& h2) {
    if (!(h1.target == h2.target))
        throw ValidationError{"induced_corner: the two maps must share their target"};
    if (!(h1.source == p.leg2.source) || !(h2.source == p.leg1.source))
        throw ValidationError{"induced_corner: maps do not start at the pushout inputs"};
    const Module& sum = p.coset_map.source;
    DirectSumResult ds = direct_sum(h1.source, h2.source);
    if (!(ds.sum == sum))
        throw ValidationError{"induced_corner: pushout data is inconsistent"};

    // (n1, n2) |-> h1(n1) + h2(n2) on the direct sum
    IntMatrix combined = h1.matrix.mul(ds.proj_a.matrix);
    IntMatrix part2 = h2.matrix.mul(ds.proj_b.matrix);
    for (std::size_t i = 0; i < combined.rows(); ++i)
        for (std::size_t j = 0; j < combined.cols(); ++j)
            combined.at(i, j) += part2.at(i, j);
    Hom on_sum = make_hom(sum, h1.target, combined.reduce_rows_mod(h1.target.orders));

    // factoring through the projection is exactly the commutation of the
    // square: the combined map must kill every pair (f1(m), -f2(m))
    std::optional<Hom> t = solve_extension(p.coset_map, on_sum);
    if (!t)
        throw ValidationError{
            "induced_corner: the square does not commute on the shared source"};
    return *t;
}

IndependenceSquare is_independent_square(const Hom& f1, const Hom& f2, const Hom& h1,
                                         const Hom& h2, Mode mode) {
    if (!(f1.source == f2.source) || !(h1.source == f1.target) ||
        !(h2.source == f2.target) || !(h1.target == h2.target))
        throw ValidationError{"is_independent_square: corner maps do not line up"};
    if (!(compose_hom(h1, f1) == compose_hom(h2, f2)))
        throw ValidationError{"is_independent_square: the outer square does not commute"};

    PushoutResult p = pushout(f1, f2);
    Hom corner = induced_corner(p, h1, h2);
    bool verdict = is_mode_embedding(f1, mode) && is_mode_embedding(f2, mode) &&
                   is_mode_embedding(h1, mode) && is_mode_embedding(h2, mode) &&
                   is_mode_embedding(corner, mode);
    return IndependenceSquare{f1, f2, h1, h2, mode, verdict, std::move(corner)};
}

IndependenceSquare is_independent_submodules(const Submodule& m0, const Submodule& m1,
                                             const Submodule& m2, Mode mode) {
    if (!(m0.ambient == m1.ambient) || !(m0.ambient == m2.ambient))
        throw ValidationError{"is_independent_submodules: ambient modules differ"};
    Hom f1 = submodule_connecting_hom(m0, m1);
    Hom f2 = submodule_connecting_hom(m0, m2);
    Hom h1 = submodule_as_module(m1).inclusion;
    Hom h2 = submodule_as_module(m2).inclusion;
    return is_independent_square(f1, f2, h1, h2, mode);
}

IndependenceSquare is_independent_submodules(const Submodule& m0, const Submodule& m1,
                                             const Submodule& m2, const Submodule& m3,
                                             Mode mode) {
    Hom f1 = submodule_connecting_hom(m0, m1);
    Hom f2 = submodule_connecting_hom(m0, m2);
    Hom h1 = submodule_connecting_hom(m1, m3);
    Hom h2 = submodule_connecting_hom(m2, m3);
    return is_independent_square(f1, f2, h1, h2, mode);
}

IndependenceBase find_independence_base(const Submodule& m1, const Submodule& m2,
                                        const Module& n, Mode mode) {
    if (!(m1.ambient == n) || !(m2.ambient == n))
        throw ValidationError{"find_independence_base: submodules of a different module"};
    if (!is_mode_embedding(submodule_as_module(m1).inclusion, mode) ||
        !is_mode_embedding(submodule_as_module(m2).inclusion, mode))
        throw ValidationError{"find_independence_base: inputs are not mode-submodules"};

    std::vector<Submodule> lattice = submodule_lattice(n);
    std::vector<Submodule> bases, enlargements;
    for (const Submodule& s : lattice) {
        if (!is_mode_embedding(submodule_as_module(s).inclusion, mode)) continue;
        if (s.group.subgroup_of(m2.group)) bases.push_back(s);
        if (m1.group.subgroup_of(s.group)) enlargements.push_back(s);
    }
    // the lattice is sorted by (cardinality, canonical subgroup order), so
    // the first hit is the minimal witness
    for (const Submodule& m0 : bases)
        for (const Submodule& big : enlargements) {
            if (!m0.group.subgroup_of(big.group)) continue;
            if (is_independent_submodules(m0, big, m2, mode).verdict)
                return IndependenceBase{m0, big};
        }
    throw ValidationError{
        "find_independence_base: exhausted all candidates without an independent "
        "square; local character failed on this instance"};
}

ChainDecomposition decompose_chain(const Hom& f, Mode mode, const Int& target_step,
                                   const Int& cap) {
    if (!is_mode_embedding(f, mode))
        throw ValidationError{"decompose_chain: the map is not a mode-embedding"};
    if (target_step < 2)
        throw ValidationError{"decompose_chain: target_step must be at least 2"};
    const Module& b = f.target;

    std::vector<IntVec> img_gens;
    for (std::size_t j = 0; j < f.source.rank(); ++j) img_gens.push_back(f.matrix.col(j));
    Submodule image = submodule_generate(b, img_gens);

    ChainDecomposition out;
    out.a_chain.push_back(image);
    out.b_chain.push_back(image);

    std::vector<Submodule> lattice = submodule_lattice(b, cap);
    CanonicalSubgroup full = full_submodule(b).group;
    std::vector<IntVec> all = b.enumerate_elements();

    while (!(out.b_chain.back().group == full)) {
        const Submodule cur = out.b_chain.back();
        IntVec next;
        for (const IntVec& e : all)
            if (!cur.group.contains(e)) {
                next = e;
                break;
            }

        // local character drives the step: the current stage sits
        // independently from the image over a minimal base before growing
        IndependenceBase base = find_independence_base(cur, image, b, mode);

        auto admissible = [&](const Submodule& s) {
            if (!base.enlarged.group.subgroup_of(s.group)) return false;
            if (!s.group.contains(next)) return false;
            if (!is_mode_embedding(submodule_as_module(s).inclusion, mode)) return false;
            for (std::size_t i = 0; i < out.b_chain.size(); ++i)
                if (!is_independent_submodules(out.a_chain[i], out.b_chain[i], image, s,
                                               mode)
                         .verdict)
                    return false;
            return true;
        };

        const Submodule* chosen = nullptr;
        Int bound = cur.cardinality() * target_step;
        for (const Submodule& s : lattice) {
            if (s.cardinality() > bound) break;
            if (admissible(s)) {
                chosen = &s;
                break;
            }
        }
        if (!chosen)
            for (const Submodule& s : lattice)
                if (s.cardinality() > bound && admissible(s)) {
                    chosen = &s;
                    break;
                }
        if (!chosen)
            throw ValidationError{
                "decompose_chain: no independent next stage exists; chain "
                "decomposition failed on this instance"};
        out.a_chain.push_back(image);
        out.b_chain.push_back(*chosen);
    }
    return out;
}

}  // namespace finmod
