#pragma once

// Matrix codes over GF(2): subspaces of m×n matrices stored as RREF generators
// over the row-major vectorisation rho.

#include <vector>

#include "mrpke/bitmatrix.hpp"
#include "mrpke/errors.hpp"
#include "mrpke/rng.hpp"

namespace mrpke {

inline BitMatrix rho(const BitMatrix& m) {
    BitMatrix v(1, m.rows() * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m.get(i, j)) v.set(0, i * m.cols() + j, true);
    return v;
}

inline BitMatrix rho_inv(const BitMatrix& v, std::size_t m, std::size_t n) {
    if (v.rows() != 1 || v.cols() != m * n) throw ShapeError("rho_inv: vector length is not m*n");
    BitMatrix out(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (v.get(0, i * n + j)) out.set(i, j, true);
    return out;
}

// Row i of the result is rho(ms[i]).
inline BitMatrix vectorize(const std::vector<BitMatrix>& ms, std::size_t m, std::size_t n) {
    BitMatrix out(ms.size(), m * n);
    for (std::size_t i = 0; i < ms.size(); ++i) {
        if (ms[i].rows() != m || ms[i].cols() != n) throw ShapeError("vectorize: shape mismatch");
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < n; ++c)
                if (ms[i].get(r, c)) out.set(i, r * n + c, true);
    }
    return out;
}

inline BitMatrix row_as_matrix(const BitMatrix& rows, std::size_t i, std::size_t m, std::size_t n) {
    return rho_inv(rows.row_range(i, i + 1), m, n);
}

inline bool trace_inner(const BitMatrix& a, const BitMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("trace_inner: shape mismatch");
    BitMatrix::Word acc = 0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t w = 0; w < a.stride(); ++w) acc ^= a.row(i)[w] & b.row(i)[w];
    return std::popcount(acc) & 1;
}

class MatrixCode {
public:
    MatrixCode(std::size_t m, std::size_t n) : m_(m), n_(n), gen_(0, m * n) {}

    // Keeps an RREF basis of rowspace(generators); dependent rows are dropped.
    MatrixCode(std::size_t m, std::size_t n, const BitMatrix& generators) : m_(m), n_(n) {
        if (generators.cols() != m * n) throw ShapeError("MatrixCode: generator width must be m*n");
        gen_ = row_basis(generators);
    }

    static MatrixCode full_space(std::size_t m, std::size_t n) {
        return MatrixCode(m, n, BitMatrix::identity(m * n));
    }

    std::size_t m() const { return m_; }
    std::size_t n() const { return n_; }
    std::size_t dim() const { return gen_.rows(); }
    const BitMatrix& gen() const { return gen_; }

    BitMatrix basis_matrix(std::size_t i) const { return row_as_matrix(gen_, i, m_, n_); }

    bool contains(const BitMatrix& mat) const {
        return rank(BitMatrix::vstack(gen_, rho(mat))) == dim();
    }

    // Uniform codeword: uniform coefficients over the basis.
    BitMatrix random_codeword(Expander& rng) const {
        BitMatrix coeffs = random_matrix(1, dim(), rng);
        return rho_inv(mul(coeffs, gen_), m_, n_);
    }

    bool operator==(const MatrixCode& o) const { return m_ == o.m_ && n_ == o.n_ && gen_ == o.gen_; }

private:
    std::size_t m_, n_;
    BitMatrix gen_;
};

inline MatrixCode dual(const MatrixCode& c) { return MatrixCode(c.m(), c.n(), kernel_basis(c.gen())); }

inline MatrixCode augment(const MatrixCode& c, const BitMatrix& extra_rows) {
    return MatrixCode(c.m(), c.n(), BitMatrix::vstack(c.gen(), extra_rows));
}

inline MatrixCode sum_codes(const std::vector<MatrixCode>& codes, std::size_t m, std::size_t n) {
    BitMatrix all(0, m * n);
    for (const auto& c : codes) {
        if (c.m() != m || c.n() != n) throw ShapeError("sum_codes: shape mismatch");
        all = BitMatrix::vstack(all, c.gen());
    }
    return MatrixCode(m, n, all);
}

// Subcode whose first a matrix-columns vanish, restricted to the last n−a columns.
inline MatrixCode shorten_columns(const MatrixCode& c, std::size_t a) {
    std::size_t m = c.m(), n = c.n();
    if (a > n) throw ShapeError("shorten_columns: a exceeds n");
    BitMatrix constrained(c.dim(), m * a);
    for (std::size_t r = 0; r < c.dim(); ++r)
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < a; ++j)
                if (c.gen().get(r, i * n + j)) constrained.set(r, i * a + j, true);
    BitMatrix combos = kernel_basis(constrained.transpose());
    BitMatrix sub = mul(combos, c.gen());
    BitMatrix restricted(sub.rows(), m * (n - a));
    for (std::size_t r = 0; r < sub.rows(); ++r)
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = a; j < n; ++j)
                if (sub.get(r, i * n + j)) restricted.set(r, i * (n - a) + (j - a), true);
    return MatrixCode(m, n - a, restricted);
}

inline Subspace sample_support(std::size_t ambient_dim, std::size_t dim, Expander& rng) {
    if (dim > ambient_dim) throw std::invalid_argument("sample_support: dim exceeds ambient dimension");
    return Subspace::row_span(random_full_rank(dim, ambient_dim, rng));
}

struct SupportedError {
    Subspace support;
    BitMatrix matrix;
};

// E = V·P with V an m×r basis of S and P a uniform full-row-rank r×n matrix.
inline SupportedError sample_error_column_support(const Subspace& s, std::size_t n, Expander& rng) {
    if (s.dim() > n) throw std::invalid_argument("sample_error_column_support: dim(S) > n");
    BitMatrix p = random_full_rank(s.dim(), n, rng);
    return {s, mul(s.basis().transpose(), p)};
}

// F = Q·W with W a d×n basis of S and Q a uniform full-column-rank m×d matrix.
inline SupportedError sample_error_row_support(const Subspace& s, std::size_t m, Expander& rng) {
    if (s.dim() > m) throw std::invalid_argument("sample_error_row_support: dim(S) > m");
    BitMatrix q = random_full_rank(m, s.dim(), rng);
    return {s, mul(q, s.basis())};
}

// D(i, j) = <fs[i], es[j]>.
inline BitMatrix inner_product_matrix(const std::vector<BitMatrix>& es, const std::vector<BitMatrix>& fs) {
    BitMatrix d(fs.size(), es.size());
    for (std::size_t i = 0; i < fs.size(); ++i)
        for (std::size_t j = 0; j < es.size(); ++j)
            if (trace_inner(fs[i], es[j])) d.set(i, j, true);
    return d;
}

} // namespace mrpke
