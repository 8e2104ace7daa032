#include "finmod/exact_linalg.hpp"

#include <algorithm>
#include <sstream>

namespace finmod {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, std::vector<long> entries)
    : rows_(rows), cols_(cols), a_(rows * cols) {
    if (entries.size() != rows * cols)
        throw ValidationError{"matrix literal: expected " + std::to_string(rows * cols) +
                              " entries, got " + std::to_string(entries.size())};
    for (std::size_t i = 0; i < entries.size(); ++i) a_[i] = entries[i];
}

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::diagonal(const IntVec& d) {
    IntMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
    return m;
}

bool IntMatrix::is_zero() const {
    for (const Int& x : a_)
        if (x != 0) return false;
    return true;
}

IntMatrix IntMatrix::mul(const IntMatrix& o) const {
    if (cols_ != o.rows_)
        throw ValidationError{"matrix product: inner dimensions " + std::to_string(cols_) +
                              " vs " + std::to_string(o.rows_)};
    IntMatrix r(rows_, o.cols_);
    Int acc, t;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < o.cols_; ++j) {
            acc = 0;
            for (std::size_t k = 0; k < cols_; ++k) {
                t = at(i, k) * o.at(k, j);
                acc += t;
            }
            r.at(i, j) = acc;
        }
    return r;
}

IntVec IntMatrix::mul_vec(const IntVec& x) const {
    if (cols_ != x.size())
        throw ValidationError{"matrix*vector: dimension mismatch"};
    IntVec r(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        Int acc = 0;
        for (std::size_t k = 0; k < cols_; ++k) acc += at(i, k) * x[k];
        r[i] = acc;
    }
    return r;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

IntMatrix IntMatrix::vstack(const IntMatrix& below) const {
    if (cols_ != below.cols_) throw ValidationError{"vstack: column mismatch"};
    IntMatrix r(rows_ + below.rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
    for (std::size_t i = 0; i < below.rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(rows_ + i, j) = below.at(i, j);
    return r;
}

IntMatrix IntMatrix::hstack(const IntMatrix& right) const {
    if (rows_ != right.rows_) throw ValidationError{"hstack: row mismatch"};
    IntMatrix r(rows_, cols_ + right.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
        for (std::size_t j = 0; j < right.cols_; ++j) r.at(i, cols_ + j) = right.at(i, j);
    }
    return r;
}

IntMatrix IntMatrix::row_slice(std::size_t lo, std::size_t hi) const {
    IntMatrix r(hi - lo, cols_);
    for (std::size_t i = lo; i < hi; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(i - lo, j) = at(i, j);
    return r;
}

IntVec IntMatrix::row(std::size_t i) const {
    IntVec r(cols_);
    for (std::size_t j = 0; j < cols_; ++j) r[j] = at(i, j);
    return r;
}

IntVec IntMatrix::col(std::size_t j) const {
    IntVec r(rows_);
    for (std::size_t i = 0; i < rows_; ++i) r[i] = at(i, j);
    return r;
}

IntMatrix IntMatrix::reduce_rows_mod(const IntVec& m) const {
    if (m.size() != rows_) throw ValidationError{"reduce_rows_mod: moduli count"};
    IntMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = mod_reduce(at(i, j), m[i]);
    return r;
}

std::string IntMatrix::to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i ? "; " : "");
        for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << at(i, j).get_str();
    }
    os << "]";
    return os.str();
}

Int floor_div(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

Int mod_reduce(const Int& a, const Int& m) {
    if (m <= 0) throw ValidationError{"mod_reduce: modulus must be >= 1"};
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

Int lcm_of(const IntVec& v) {
    Int l = 1;
    for (const Int& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_mpz_t());
    return l;
}

namespace {

void swap_rows(IntMatrix& m, std::size_t i, std::size_t j) {
    for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m.at(i, c), m.at(j, c));
}

void negate_row(IntMatrix& m, std::size_t i) {
    for (std::size_t c = 0; c < m.cols(); ++c) m.at(i, c) = -m.at(i, c);
}

// row_i -= q * row_j
void row_axpy(IntMatrix& m, std::size_t i, std::size_t j, const Int& q) {
    if (q == 0) return;
    for (std::size_t c = 0; c < m.cols(); ++c) m.at(i, c) -= q * m.at(j, c);
}

void swap_cols(IntMatrix& m, std::size_t i, std::size_t j) {
    for (std::size_t r = 0; r < m.rows(); ++r) std::swap(m.at(r, i), m.at(r, j));
}

void negate_col(IntMatrix& m, std::size_t i) {
    for (std::size_t r = 0; r < m.rows(); ++r) m.at(r, i) = -m.at(r, i);
}

// col_i -= q * col_j
void col_axpy(IntMatrix& m, std::size_t i, std::size_t j, const Int& q) {
    if (q == 0) return;
    for (std::size_t r = 0; r < m.rows(); ++r) m.at(r, i) -= q * m.at(r, j);
}

}  // namespace

HermiteResult row_hermite(const IntMatrix& a) {
    const std::size_t r = a.rows(), c = a.cols();
    HermiteResult res{a, IntMatrix::identity(r), {}};
    IntMatrix& h = res.h;
    IntMatrix& u = res.u;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < c && rank < r; ++col) {
        // euclidean elimination below the current rank row
        for (;;) {
            std::size_t best = r;
            for (std::size_t i = rank; i < r; ++i) {
                if (h.at(i, col) == 0) continue;
                if (best == r || mpz_cmpabs(h.at(i, col).get_mpz_t(), h.at(best, col).get_mpz_t()) < 0)
                    best = i;
            }
            if (best == r) break;  // column clear below rank
            if (best != rank) { swap_rows(h, best, rank); swap_rows(u, best, rank); }
            if (h.at(rank, col) < 0) { negate_row(h, rank); negate_row(u, rank); }
            bool done = true;
            for (std::size_t i = rank + 1; i < r; ++i) {
                if (h.at(i, col) == 0) continue;
                Int q = floor_div(h.at(i, col), h.at(rank, col));
                row_axpy(h, i, rank, q);
                row_axpy(u, i, rank, q);
                if (h.at(i, col) != 0) done = false;
            }
            if (done) break;
        }
        if (h.at(rank, col) != 0) {
            for (std::size_t i = 0; i < rank; ++i) {
                Int q = floor_div(h.at(i, col), h.at(rank, col));
                row_axpy(h, i, rank, q);
                row_axpy(u, i, rank, q);
            }
            res.pivot_cols.push_back(col);
            ++rank;
        }
    }
    return res;
}

IntMatrix left_kernel(const IntMatrix& a) {
    HermiteResult hr = row_hermite(a);
    const std::size_t rank = hr.pivot_cols.size();
    return hr.u.row_slice(rank, a.rows());
}

SmithResult smith_normal_form(const IntMatrix& m) {
    const std::size_t r = m.rows(), c = m.cols();
    SmithResult res{IntMatrix::identity(r), m, IntMatrix::identity(c)};
    IntMatrix& d = res.d;
    IntMatrix& u = res.u;
    IntMatrix& v = res.v;
    const std::size_t n = std::min(r, c);
    for (std::size_t t = 0; t < n; ++t) {
        // pivot: least |value| in the trailing submatrix, first hit on ties
        std::size_t pi = r, pj = c;
        for (std::size_t i = t; i < r; ++i)
            for (std::size_t j = t; j < c; ++j) {
                if (d.at(i, j) == 0) continue;
                if (pi == r ||
                    mpz_cmpabs(d.at(i, j).get_mpz_t(), d.at(pi, pj).get_mpz_t()) < 0) {
                    pi = i;
                    pj = j;
                }
            }
        if (pi == r) break;  // trailing submatrix is zero
        if (pi != t) { swap_rows(d, pi, t); swap_rows(u, pi, t); }
        if (pj != t) { swap_cols(d, pj, t); swap_cols(v, pj, t); }
        for (;;) {
            // clear column t
            bool col_clear = true;
            for (std::size_t i = 0; i < r; ++i) {
                if (i == t || d.at(i, t) == 0) continue;
                Int q = floor_div(d.at(i, t), d.at(t, t));
                row_axpy(d, i, t, q);
                row_axpy(u, i, t, q);
                if (d.at(i, t) != 0) {
                    // remainder is strictly smaller; promote it to pivot
                    swap_rows(d, i, t);
                    swap_rows(u, i, t);
                    col_clear = false;
                    break;
                }
            }
            if (!col_clear) continue;
            // clear row t
            bool row_clear = true;
            for (std::size_t j = 0; j < c; ++j) {
                if (j == t || d.at(t, j) == 0) continue;
                Int q = floor_div(d.at(t, j), d.at(t, t));
                col_axpy(d, j, t, q);
                col_axpy(v, j, t, q);
                if (d.at(t, j) != 0) {
                    swap_cols(d, j, t);
                    swap_cols(v, j, t);
                    row_clear = false;
                    break;
                }
            }
            if (!row_clear) continue;
            if (d.at(t, t) < 0) { negate_row(d, t); negate_row(u, t); }
            // pivot must divide every trailing entry, else absorb and redo
            bool divides = true;
            for (std::size_t i = t + 1; i < r && divides; ++i)
                for (std::size_t j = t + 1; j < c && divides; ++j)
                    if (mod_reduce(d.at(i, j), d.at(t, t)) != 0) {
                        row_axpy(d, t, i, Int(-1));
                        row_axpy(u, t, i, Int(-1));
                        divides = false;
                    }
            if (divides) break;
        }
    }
    return res;
}

IntVec SmithResult::diagonal() const {
    const std::size_t n = std::min(d.rows(), d.cols());
    IntVec r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = d.at(i, i);
    return r;
}

// --- CanonicalSubgroup ------------------------------------------------------

namespace {

void check_orders(const IntVec& orders) {
    for (const Int& d : orders)
        if (d < 1) throw ValidationError{"ambient orders must be >= 1"};
}

}  // namespace

CanonicalSubgroup CanonicalSubgroup::zero(const IntVec& ambient_orders) {
    check_orders(ambient_orders);
    CanonicalSubgroup s;
    s.orders_ = ambient_orders;
    s.lat_ = IntMatrix::diagonal(ambient_orders);
    return s;
}

CanonicalSubgroup CanonicalSubgroup::full(const IntVec& ambient_orders) {
    check_orders(ambient_orders);
    CanonicalSubgroup s;
    s.orders_ = ambient_orders;
    s.lat_ = IntMatrix::identity(ambient_orders.size());
    return s;
}

CanonicalSubgroup CanonicalSubgroup::span(const IntMatrix& generators,
                                          const IntVec& ambient_orders) {
    check_orders(ambient_orders);
    const std::size_t k = ambient_orders.size();
    if (generators.cols() != k)
        throw ValidationError{"subgroup generators: expected " + std::to_string(k) +
                              " coordinates per row"};
    IntMatrix stacked = generators.vstack(IntMatrix::diagonal(ambient_orders));
    HermiteResult hr = row_hermite(stacked);
    CanonicalSubgroup s;
    s.orders_ = ambient_orders;
    s.lat_ = hr.h.row_slice(0, k);
    return s;
}

IntMatrix CanonicalSubgroup::gen_matrix() const {
    const std::size_t k = orders_.size();
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < k; ++i)
        if (lat_.at(i, i) != orders_[i]) keep.push_back(i);
    IntMatrix g(keep.size(), k);
    for (std::size_t r = 0; r < keep.size(); ++r)
        for (std::size_t j = 0; j < k; ++j)
            g.at(r, j) = mod_reduce(lat_.at(keep[r], j), orders_[j]);
    return g;
}

Int CanonicalSubgroup::cardinality() const {
    Int n = 1;
    for (std::size_t i = 0; i < orders_.size(); ++i) n *= orders_[i] / lat_.at(i, i);
    return n;
}

Int CanonicalSubgroup::ambient_cardinality() const {
    Int n = 1;
    for (const Int& d : orders_) n *= d;
    return n;
}

bool CanonicalSubgroup::is_zero() const { return cardinality() == 1; }
bool CanonicalSubgroup::is_full() const { return lat_ == IntMatrix::identity(orders_.size()); }

bool CanonicalSubgroup::contains(const IntVec& x) const {
    const std::size_t k = orders_.size();
    if (x.size() != k) throw ValidationError{"membership: coordinate count"};
    IntVec v = x;
    for (std::size_t c = 0; c < k; ++c) {
        Int q = floor_div(v[c], lat_.at(c, c));
        if (q != 0)
            for (std::size_t j = c; j < k; ++j) v[j] -= q * lat_.at(c, j);
        if (v[c] != 0) return false;
    }
    return true;
}

bool CanonicalSubgroup::subgroup_of(const CanonicalSubgroup& o) const {
    if (orders_ != o.orders_) throw ValidationError{"subgroup_of: ambient mismatch"};
    for (std::size_t i = 0; i < orders_.size(); ++i)
        if (!o.contains(lat_.row(i))) return false;
    return true;
}

IntVec CanonicalSubgroup::reduce(const IntVec& x) const {
    const std::size_t k = orders_.size();
    if (x.size() != k) throw ValidationError{"reduce: coordinate count"};
    IntVec v = x;
    for (std::size_t c = 0; c < k; ++c) {
        Int q = floor_div(v[c], lat_.at(c, c));
        if (q != 0)
            for (std::size_t j = c; j < k; ++j) v[j] -= q * lat_.at(c, j);
    }
    return v;
}

CanonicalSubgroup CanonicalSubgroup::sum(const CanonicalSubgroup& o) const {
    if (orders_ != o.orders_) throw ValidationError{"subgroup sum: ambient mismatch"};
    return span(lat_.vstack(o.lat_), orders_);
}

CanonicalSubgroup CanonicalSubgroup::intersect(const CanonicalSubgroup& o) const {
    if (orders_ != o.orders_) throw ValidationError{"subgroup intersection: ambient mismatch"};
    const std::size_t k = orders_.size();
    IntMatrix stacked = lat_.vstack(o.lat_);   // (2k) x k
    IntMatrix ker = left_kernel(stacked);      // rows (z1 | z2), z1*lat + z2*olat = 0
    IntMatrix gens(ker.rows(), k);
    for (std::size_t i = 0; i < ker.rows(); ++i)
        for (std::size_t j = 0; j < k; ++j) {
            Int acc = 0;
            for (std::size_t t = 0; t < k; ++t) acc += ker.at(i, t) * lat_.at(t, j);
            gens.at(i, j) = acc;
        }
    return span(gens, orders_);
}

std::vector<IntVec> CanonicalSubgroup::elements() const {
    const std::size_t k = orders_.size();
    IntVec reps(k);
    for (std::size_t i = 0; i < k; ++i) reps[i] = orders_[i] / lat_.at(i, i);
    std::vector<IntVec> out;
    Int count = cardinality();
    if (!count.fits_ulong_p())
        throw ResourceCapError{"subgroup too large to enumerate: " + count.get_str()};
    out.reserve(count.get_ui());
    IntVec coef(k, 0);
    for (;;) {
        IntVec x(k, 0);
        for (std::size_t i = 0; i < k; ++i) {
            if (coef[i] == 0) continue;
            for (std::size_t j = 0; j < k; ++j) x[j] += coef[i] * lat_.at(i, j);
        }
        for (std::size_t j = 0; j < k; ++j) x[j] = mod_reduce(x[j], orders_[j]);
        out.push_back(std::move(x));
        // odometer, last index fastest
        std::size_t p = k;
        while (p > 0) {
            --p;
            coef[p] += 1;
            if (coef[p] < reps[p]) break;
            coef[p] = 0;
            if (p == 0) return out;
        }
        if (k == 0) return out;
    }
}

int CanonicalSubgroup::compare(const CanonicalSubgroup& a, const CanonicalSubgroup& b) {
    if (a.orders_.size() != b.orders_.size())
        return a.orders_.size() < b.orders_.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.orders_.size(); ++i) {
        int c = cmp(a.orders_[i], b.orders_[i]);
        if (c) return c;
    }
    for (std::size_t i = 0; i < a.orders_.size(); ++i)
        for (std::size_t j = 0; j < a.orders_.size(); ++j) {
            int c = cmp(a.lat_.at(i, j), b.lat_.at(i, j));
            if (c) return c;
        }
    return 0;
}

// --- congruence solving -----------------------------------------------------

SolveResult congruence_solve(const IntMatrix& a, const IntVec& b,
                             const IntVec& moduli, const IntVec& unknown_orders) {
    const std::size_t m = a.rows(), n = a.cols();
    if (b.size() != m || moduli.size() != m)
        throw ValidationError{"congruence_solve: rhs/moduli length must equal row count"};
    if (unknown_orders.size() != n)
        throw ValidationError{"congruence_solve: unknown_orders length must equal column count"};
    check_orders(moduli);
    check_orders(unknown_orders);
    // the solution set must be invariant under unknown_orders shifts
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i)
            if (mod_reduce(a.at(i, j) * unknown_orders[j], moduli[i]) != 0)
                throw ValidationError{
                    "congruence_solve: unknown order " + unknown_orders[j].get_str() +
                    " at column " + std::to_string(j) + " does not annihilate row " +
                    std::to_string(i)};

    IntMatrix full = a.hstack(IntMatrix::diagonal(moduli));  // m x (n+m)
    SmithResult sr = smith_normal_form(full);
    IntVec c = sr.u.mul_vec(b);

    bool solvable = true;
    IntVec z(n + m, Int(0));
    for (std::size_t i = 0; i < m; ++i) {
        const Int& dii = sr.d.at(i, i);
        if (dii != 0) {
            Int q, rem;
            mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), c[i].get_mpz_t(), dii.get_mpz_t());
            if (rem != 0) { solvable = false; break; }
            z[i] = q;
        } else if (c[i] != 0) {
            solvable = false;
            break;
        }
    }

    // homogeneous solutions: v columns belonging to zero diagonal entries
    std::vector<std::size_t> free_cols;
    for (std::size_t i = 0; i < m; ++i)
        if (sr.d.at(i, i) == 0) free_cols.push_back(i);
    for (std::size_t i = m; i < n + m; ++i) free_cols.push_back(i);
    IntMatrix kgen(free_cols.size(), n);
    for (std::size_t r = 0; r < free_cols.size(); ++r)
        for (std::size_t j = 0; j < n; ++j) kgen.at(r, j) = sr.v.at(j, free_cols[r]);

    SolveResult out{std::nullopt, CanonicalSubgroup::span(kgen, unknown_orders)};
    if (solvable) {
        IntVec xz = sr.v.mul_vec(z);
        IntVec x(n);
        for (std::size_t j = 0; j < n; ++j) x[j] = mod_reduce(xz[j], unknown_orders[j]);
        out.particular = out.kernel.reduce(x);
    }
    return out;
}

SolveResult howell_solve(const IntMatrix& a, const IntVec& b, const IntVec& moduli) {
    Int L = lcm_of(moduli);
    IntVec unknown_orders(a.cols(), L);
    return congruence_solve(a, b, moduli, unknown_orders);
}

}  // namespace finmod
