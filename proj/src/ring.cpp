#include "finmod/ring.hpp"

#include <sstream>

namespace finmod {

Int Ring::cardinality() const {
    Int n = 1;
    for (const Int& c : additive_orders) n *= c;
    return n;
}

RElem Ring::reduce(const RElem& a) const {
    RElem r(rank());
    for (std::size_t i = 0; i < rank(); ++i) r[i] = mod_reduce(a[i], additive_orders[i]);
    return r;
}

RElem Ring::add(const RElem& a, const RElem& b) const {
    RElem r(rank());
    for (std::size_t i = 0; i < rank(); ++i)
        r[i] = mod_reduce(a[i] + b[i], additive_orders[i]);
    return r;
}

RElem Ring::sub(const RElem& a, const RElem& b) const {
    RElem r(rank());
    for (std::size_t i = 0; i < rank(); ++i)
        r[i] = mod_reduce(a[i] - b[i], additive_orders[i]);
    return r;
}

RElem Ring::neg(const RElem& a) const {
    RElem r(rank());
    for (std::size_t i = 0; i < rank(); ++i) r[i] = mod_reduce(-a[i], additive_orders[i]);
    return r;
}

RElem Ring::mul(const RElem& a, const RElem& b) const {
    RElem r(rank(), Int(0));
    for (std::size_t i = 0; i < rank(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < rank(); ++j) {
            if (b[j] == 0) continue;
            Int c = a[i] * b[j];
            const RElem& s = struct_consts[i][j];
            for (std::size_t l = 0; l < rank(); ++l) r[l] += c * s[l];
        }
    }
    for (std::size_t l = 0; l < rank(); ++l) r[l] = mod_reduce(r[l], additive_orders[l]);
    return r;
}

bool Ring::is_zero_elem(const RElem& a) const {
    for (std::size_t i = 0; i < rank(); ++i)
        if (mod_reduce(a[i], additive_orders[i]) != 0) return false;
    return true;
}

std::vector<RElem> Ring::enumerate_elements() const {
    std::vector<RElem> out;
    RElem cur = zero();
    for (;;) {
        out.push_back(cur);
        std::size_t p = rank();
        bool done = (rank() == 0);
        while (p > 0) {
            --p;
            cur[p] += 1;
            if (cur[p] < additive_orders[p]) break;
            cur[p] = 0;
            if (p == 0) done = true;
        }
        if (done) return out;
    }
}

IntMatrix Ring::left_mult_matrix(std::size_t i) const {
    IntMatrix m(rank(), rank());
    for (std::size_t j = 0; j < rank(); ++j)
        for (std::size_t l = 0; l < rank(); ++l) m.at(l, j) = struct_consts[i][j][l];
    return m;
}

IntMatrix Ring::left_mult_by(const RElem& r) const {
    IntMatrix m(rank(), rank());
    for (std::size_t i = 0; i < rank(); ++i) {
        if (r[i] == 0) continue;
        for (std::size_t j = 0; j < rank(); ++j)
            for (std::size_t l = 0; l < rank(); ++l)
                m.at(l, j) += r[i] * struct_consts[i][j][l];
    }
    IntVec row_mods(rank());
    for (std::size_t l = 0; l < rank(); ++l) row_mods[l] = additive_orders[l];
    return m.reduce_rows_mod(row_mods);
}

namespace {

std::string elem_str(const RElem& a) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i].get_str();
    os << ")";
    return os.str();
}

}  // namespace

Ring make_ring(IntVec additive_orders, std::vector<std::vector<RElem>> struct_consts,
               RElem unit, std::string label, const Int& cardinality_cap) {
    const std::size_t r = additive_orders.size();
    for (const Int& c : additive_orders)
        if (c < 1) throw ValidationError{"ring: additive orders must be >= 1"};
    if (struct_consts.size() != r)
        throw ValidationError{"ring: structure constant table must have one row per basis element"};
    for (std::size_t i = 0; i < r; ++i) {
        if (struct_consts[i].size() != r)
            throw ValidationError{"ring: structure constant row " + std::to_string(i) +
                                  " has wrong length"};
        for (std::size_t j = 0; j < r; ++j)
            if (struct_consts[i][j].size() != r)
                throw ValidationError{"ring: structure constant (" + std::to_string(i) + "," +
                                      std::to_string(j) + ") has wrong coordinate count"};
    }
    if (unit.size() != r) throw ValidationError{"ring: unit has wrong coordinate count"};

    Ring ring{std::move(additive_orders), std::move(struct_consts), std::move(unit), false,
              std::move(label)};
    if (ring.cardinality() > cardinality_cap)
        throw ResourceCapError{"ring cardinality " + ring.cardinality().get_str() +
                               " exceeds cap " + cardinality_cap.get_str()};

    // normalize the table entries and the unit into canonical residues
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) ring.struct_consts[i][j] = ring.reduce(ring.struct_consts[i][j]);
    ring.unit = ring.reduce(ring.unit);

    // bilinear extension is well defined iff the additive order of each factor
    // annihilates the product
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            for (std::size_t l = 0; l < r; ++l) {
                const Int& v = ring.struct_consts[i][j][l];
                if (mod_reduce(ring.additive_orders[i] * v, ring.additive_orders[l]) != 0 ||
                    mod_reduce(ring.additive_orders[j] * v, ring.additive_orders[l]) != 0)
                    throw ValidationError{
                        "ring: product b" + std::to_string(i) + "*b" + std::to_string(j) +
                        " = " + elem_str(ring.struct_consts[i][j]) +
                        " is not annihilated by the factor orders (coordinate " +
                        std::to_string(l) + ")"};
            }

    auto basis = [&](std::size_t i) {
        RElem e(r, Int(0));
        e[i] = 1;
        return e;
    };

    // associativity on basis triples (bilinearity lifts this to all elements)
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            for (std::size_t k = 0; k < r; ++k) {
                RElem left = ring.mul(ring.struct_consts[i][j], basis(k));
                RElem right = ring.mul(basis(i), ring.struct_consts[j][k]);
                if (left != right)
                    throw ValidationError{"ring: associativity fails on basis triple (" +
                                          std::to_string(i) + "," + std::to_string(j) + "," +
                                          std::to_string(k) + "): (b_i b_j) b_k = " +
                                          elem_str(left) + " but b_i (b_j b_k) = " +
                                          elem_str(right)};
            }

    // two-sided unit on basis elements
    for (std::size_t j = 0; j < r; ++j) {
        RElem bj = ring.reduce(basis(j));
        RElem lu = ring.mul(ring.unit, basis(j));
        RElem ru = ring.mul(basis(j), ring.unit);
        if (lu != bj || ru != bj)
            throw ValidationError{"ring: unit " + elem_str(ring.unit) +
                                  " fails on basis element b" + std::to_string(j) + ": 1*b = " +
                                  elem_str(lu) + ", b*1 = " + elem_str(ru)};
    }

    ring.commutative = true;
    for (std::size_t i = 0; i < r && ring.commutative; ++i)
        for (std::size_t j = 0; j < r; ++j)
            if (ring.struct_consts[i][j] != ring.struct_consts[j][i]) {
                ring.commutative = false;
                break;
            }
    return ring;
}

Ring make_zmod(const Int& n) {
    if (n < 1) throw ValidationError{"make_zmod: n must be >= 1"};
    return make_ring({n}, {{{Int(1)}}}, {Int(1)}, "Z/" + n.get_str(), n < 2 ? Int(2) : n);
}

Ring make_poly_quotient(const Int& n, const IntVec& f_tail, std::string label) {
    if (n < 1) throw ValidationError{"make_poly_quotient: modulus must be >= 1"};
    const std::size_t d = f_tail.size();
    if (d == 0) throw ValidationError{"make_poly_quotient: degree must be >= 1"};
    // powers of x modulo the monic polynomial, as coordinate vectors
    std::vector<RElem> pow(2 * d - 1, RElem(d, Int(0)));
    for (std::size_t e = 0; e < d; ++e) pow[e][e] = 1;
    for (std::size_t e = d; e < 2 * d - 1; ++e) {
        // x^e = x * x^(e-1); shift then reduce the overflow coordinate
        RElem prev = pow[e - 1];
        RElem cur(d, Int(0));
        for (std::size_t i = 0; i + 1 < d; ++i) cur[i + 1] = prev[i];
        Int top = prev[d - 1];
        for (std::size_t i = 0; i < d; ++i) cur[i] = mod_reduce(cur[i] - top * f_tail[i], n);
        pow[e] = cur;
    }
    std::vector<std::vector<RElem>> sc(d, std::vector<RElem>(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) sc[i][j] = pow[i + j];
    RElem unit(d, Int(0));
    unit[0] = 1;
    if (label.empty()) label = "Z/" + n.get_str() + "[x]/(f), deg " + std::to_string(d);
    Int cap = kDefaultRingCardinalityCap;
    Int card = 1;
    for (std::size_t i = 0; i < d; ++i) card *= n;
    if (card > cap) cap = card;  // builders construct what they are asked for
    return make_ring(IntVec(d, n), std::move(sc), std::move(unit), std::move(label), cap);
}

Ring make_trunc_poly(const Int& p, std::size_t k) {
    if (p < 2) throw ValidationError{"make_trunc_poly: p must be >= 2"};
    const std::size_t r = k + 1;  // basis {1, x_1, ..., x_k}
    std::vector<std::vector<RElem>> sc(r, std::vector<RElem>(r, RElem(r, Int(0))));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            if (i == 0)
                sc[i][j][j] = 1;  // 1 * b_j
            else if (j == 0)
                sc[i][j][i] = 1;  // b_i * 1
            // x_i * x_j = 0 otherwise
        }
    RElem unit(r, Int(0));
    unit[0] = 1;
    std::string label = "F" + p.get_str() + "[x_1..x_" + std::to_string(k) + "]/(deg 2)";
    Int cap = kDefaultRingCardinalityCap;
    Int card = 1;
    for (std::size_t i = 0; i < r; ++i) card *= p;
    if (card > cap) cap = card;
    return make_ring(IntVec(r, p), std::move(sc), std::move(unit), std::move(label), cap);
}

std::vector<Ring> standard_test_rings() {
    std::vector<Ring> rings;
    rings.push_back(make_zmod(2));
    rings.push_back(make_zmod(4));
    rings.push_back(make_zmod(8));
    rings.push_back(make_zmod(9));
    Ring f2xy = make_trunc_poly(2, 2);
    f2xy.label = "F2[x,y]/(x,y)^2";
    rings.push_back(f2xy);
    return rings;
}

}  // namespace finmod
