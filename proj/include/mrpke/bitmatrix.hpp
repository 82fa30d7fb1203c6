#pragma once

// Dense GF(2) matrices, bit-packed row-major in 64-bit words. Column j of a
// row lives in word j/64 at bit j%64, which serialises to the byte layout
// "bit j of byte j/8 is (byte >> (j%8)) & 1" on any host.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrpke/bytes.hpp"
#include "mrpke/errors.hpp"
#include "mrpke/rng.hpp"

namespace mrpke {

class BitMatrix {
public:
    using Word = std::uint64_t;

    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), stride_((cols + 63) / 64), data_(rows * stride_, 0) {}

    static BitMatrix identity(std::size_t n) {
        BitMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t stride() const { return stride_; }

    bool get(std::size_t i, std::size_t j) const { return (row(i)[j >> 6] >> (j & 63)) & 1; }
    void set(std::size_t i, std::size_t j, bool v) {
        Word mask = Word(1) << (j & 63);
        if (v)
            row(i)[j >> 6] |= mask;
        else
            row(i)[j >> 6] &= ~mask;
    }
    void flip(std::size_t i, std::size_t j) { row(i)[j >> 6] ^= Word(1) << (j & 63); }

    Word* row(std::size_t i) { return data_.data() + i * stride_; }
    const Word* row(std::size_t i) const { return data_.data() + i * stride_; }

    void xor_row_into(std::size_t dst, const Word* src) {
        Word* d = row(dst);
        for (std::size_t w = 0; w < stride_; ++w) d[w] ^= src[w];
    }
    void swap_rows(std::size_t a, std::size_t b) {
        if (a != b) std::swap_ranges(row(a), row(a) + stride_, row(b));
    }
    bool row_is_zero(std::size_t i) const {
        const Word* r = row(i);
        return std::all_of(r, r + stride_, [](Word w) { return w == 0; });
    }
    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](Word w) { return w == 0; });
    }

    std::size_t popcount() const {
        std::size_t c = 0;
        for (Word w : data_) c += std::popcount(w);
        return c;
    }

    // Clears bits beyond cols in the last word of every row.
    void mask_padding() {
        if (cols_ % 64 == 0 || stride_ == 0) return;
        Word mask = (Word(1) << (cols_ % 64)) - 1;
        for (std::size_t i = 0; i < rows_; ++i) row(i)[stride_ - 1] &= mask;
    }

    BitMatrix& operator^=(const BitMatrix& o) {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeError("matrix sum: shape mismatch");
        for (std::size_t w = 0; w < data_.size(); ++w) data_[w] ^= o.data_[w];
        return *this;
    }
    friend BitMatrix operator^(BitMatrix a, const BitMatrix& b) { return a ^= b; }
    // Addition and subtraction coincide over GF(2).
    friend BitMatrix operator+(BitMatrix a, const BitMatrix& b) { return a ^= b; }
    friend BitMatrix operator-(BitMatrix a, const BitMatrix& b) { return a ^= b; }

    bool operator==(const BitMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    BitMatrix transpose() const {
        BitMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            const Word* r = row(i);
            for (std::size_t w = 0; w < stride_; ++w) {
                Word x = r[w];
                while (x) {
                    std::size_t j = w * 64 + std::countr_zero(x);
                    t.set(j, i, true);
                    x &= x - 1;
                }
            }
        }
        return t;
    }

    BitMatrix row_range(std::size_t r0, std::size_t r1) const {
        BitMatrix out(r1 - r0, cols_);
        std::copy(row(r0), row(r0) + (r1 - r0) * stride_, out.data_.begin());
        return out;
    }

    BitMatrix col_range(std::size_t c0, std::size_t c1) const {
        BitMatrix out(rows_, c1 - c0);
        for (std::size_t i = 0; i < rows_; ++i) {
            const Word* src = row(i);
            Word* dst = out.row(i);
            for (std::size_t w = 0; w < out.stride_; ++w) {
                std::size_t bit = c0 + 64 * w;
                std::size_t sw = bit >> 6, sh = bit & 63;
                Word v = src[sw] >> sh;
                if (sh && sw + 1 < stride_) v |= src[sw + 1] << (64 - sh);
                dst[w] = v;
            }
        }
        out.mask_padding();
        return out;
    }

    // Copies src into this matrix starting at column c0; target bits are overwritten.
    void paste_cols(const BitMatrix& src, std::size_t c0) {
        if (src.rows_ != rows_ || c0 + src.cols_ > cols_) throw ShapeError("paste_cols: shape mismatch");
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < src.cols_; ++j) set(i, c0 + j, src.get(i, j));
    }

    static BitMatrix hstack(const BitMatrix& a, const BitMatrix& b) {
        if (a.rows_ != b.rows_) throw ShapeError("hstack: row count mismatch");
        BitMatrix out(a.rows_, a.cols_ + b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            std::copy(a.row(i), a.row(i) + a.stride_, out.row(i));
            const Word* src = b.row(i);
            Word* dst = out.row(i);
            std::size_t sh = a.cols_ & 63, base = a.cols_ >> 6;
            for (std::size_t w = 0; w < b.stride_; ++w) {
                dst[base + w] |= src[w] << sh;
                if (sh && base + w + 1 < out.stride_) dst[base + w + 1] |= src[w] >> (64 - sh);
            }
        }
        return out;
    }

    static BitMatrix vstack(const BitMatrix& a, const BitMatrix& b) {
        if (a.cols_ != b.cols_) throw ShapeError("vstack: column count mismatch");
        BitMatrix out(a.rows_ + b.rows_, a.cols_);
        std::copy(a.data_.begin(), a.data_.end(), out.data_.begin());
        std::copy(b.data_.begin(), b.data_.end(), out.data_.begin() + a.data_.size());
        return out;
    }

    std::size_t payload_bytes() const { return rows_ * ((cols_ + 7) / 8); }

    void serialize_into(Bytes& out) const {
        put_u32le(out, static_cast<std::uint32_t>(rows_));
        put_u32le(out, static_cast<std::uint32_t>(cols_));
        std::size_t rb = (cols_ + 7) / 8;
        for (std::size_t i = 0; i < rows_; ++i) {
            const Word* r = row(i);
            for (std::size_t b = 0; b < rb; ++b)
                out.push_back(static_cast<std::uint8_t>(r[b >> 3] >> (8 * (b & 7))));
        }
    }

    Bytes serialize() const {
        Bytes out;
        out.reserve(8 + payload_bytes());
        serialize_into(out);
        return out;
    }

    static BitMatrix deserialize(ByteReader& in) {
        std::size_t rows = in.u32le(), cols = in.u32le();
        std::size_t rb = (cols + 7) / 8;
        if (rows && rb && in.remaining() / rb < rows) throw FormatError("truncated matrix payload");
        BitMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i) {
            auto bytes = in.take(rb);
            Word* r = m.row(i);
            for (std::size_t b = 0; b < rb; ++b) r[b >> 3] |= Word(bytes[b]) << (8 * (b & 7));
        }
        BitMatrix check = m;
        check.mask_padding();
        if (!(check == m)) throw FormatError("nonzero padding bits");
        return m;
    }

    static BitMatrix deserialize(std::span<const std::uint8_t> data) {
        ByteReader in(data);
        BitMatrix m = deserialize(in);
        if (in.remaining()) throw FormatError("trailing bytes after matrix");
        return m;
    }

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) s.push_back(get(i, j) ? '1' : '0');
            s.push_back('\n');
        }
        return s;
    }

    static BitMatrix from_rows(const std::vector<std::string>& rows) {
        std::size_t cols = rows.empty() ? 0 : rows[0].size();
        BitMatrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) throw ShapeError("from_rows: ragged input");
            for (std::size_t j = 0; j < cols; ++j) m.set(i, j, rows[i][j] == '1');
        }
        return m;
    }

private:
    std::size_t rows_ = 0, cols_ = 0, stride_ = 0;
    std::vector<Word> data_;
};

inline bool dot(const BitMatrix::Word* a, const BitMatrix::Word* b, std::size_t words) {
    BitMatrix::Word acc = 0;
    for (std::size_t w = 0; w < words; ++w) acc ^= a[w] & b[w];
    return std::popcount(acc) & 1;
}

inline BitMatrix mul(const BitMatrix& a, const BitMatrix& b) {
    if (a.cols() != b.rows()) throw ShapeError("mul: inner dimensions differ");
    BitMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const BitMatrix::Word* ar = a.row(i);
        for (std::size_t w = 0; w < a.stride(); ++w) {
            BitMatrix::Word x = ar[w];
            while (x) {
                out.xor_row_into(i, b.row(w * 64 + std::countr_zero(x)));
                x &= x - 1;
            }
        }
    }
    return out;
}

// a · bᵀ via row dot products; avoids materialising the transpose.
inline BitMatrix mul_transposed(const BitMatrix& a, const BitMatrix& b) {
    if (a.cols() != b.cols()) throw ShapeError("mul_transposed: column counts differ");
    BitMatrix out(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.rows(); ++j)
            if (dot(a.row(i), b.row(j), a.stride())) out.set(i, j, true);
    return out;
}

struct Rref {
    BitMatrix reduced;
    std::vector<std::size_t> pivots;
    BitMatrix transform;
};

namespace detail {

// In-place Gauss-Jordan with leftmost-pivot, topmost-row selection.
// Row operations are mirrored on `shadow` when it is non-null.
inline std::vector<std::size_t> gauss_jordan(BitMatrix& m, BitMatrix* shadow) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t w = c >> 6;
        BitMatrix::Word bit = BitMatrix::Word(1) << (c & 63);
        std::size_t p = r;
        while (p < m.rows() && !(m.row(p)[w] & bit)) ++p;
        if (p == m.rows()) continue;
        m.swap_rows(r, p);
        if (shadow) shadow->swap_rows(r, p);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i != r && (m.row(i)[w] & bit)) {
                m.xor_row_into(i, m.row(r));
                if (shadow) shadow->xor_row_into(i, shadow->row(r));
            }
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

} // namespace detail

inline Rref rref(const BitMatrix& m) {
    Rref out{m, {}, BitMatrix::identity(m.rows())};
    out.pivots = detail::gauss_jordan(out.reduced, &out.transform);
    return out;
}

inline std::size_t rank(const BitMatrix& m) {
    BitMatrix work = m;
    return detail::gauss_jordan(work, nullptr).size();
}

// RREF rows only, zero rows dropped.
inline BitMatrix row_basis(const BitMatrix& m) {
    BitMatrix work = m;
    std::size_t r = detail::gauss_jordan(work, nullptr).size();
    return work.row_range(0, r);
}

inline BitMatrix kernel_basis(const BitMatrix& m) {
    BitMatrix red = m;
    auto pivots = detail::gauss_jordan(red, nullptr);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : pivots) is_pivot[p] = true;
    BitMatrix k(m.cols() - pivots.size(), m.cols());
    std::size_t row = 0;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        k.set(row, f, true);
        for (std::size_t i = 0; i < pivots.size(); ++i)
            if (red.get(i, f)) k.set(row, pivots[i], true);
        ++row;
    }
    detail::gauss_jordan(k, nullptr);
    return k;
}

// Canonical X with X·a = b, or nullopt when some row of b is outside rowspace(a).
inline std::optional<BitMatrix> solve(const BitMatrix& a, const BitMatrix& b) {
    if (a.cols() != b.cols()) throw ShapeError("solve: column counts differ");
    Rref r = rref(a);
    std::size_t rk = r.pivots.size();
    BitMatrix coeffs(b.rows(), rk);
    for (std::size_t i = 0; i < b.rows(); ++i) {
        std::vector<BitMatrix::Word> residual(b.row(i), b.row(i) + b.stride());
        for (std::size_t p = 0; p < rk; ++p) {
            std::size_t c = r.pivots[p];
            if ((residual[c >> 6] >> (c & 63)) & 1) {
                coeffs.set(i, p, true);
                const BitMatrix::Word* src = r.reduced.row(p);
                for (std::size_t w = 0; w < b.stride(); ++w) residual[w] ^= src[w];
            }
        }
        if (!std::all_of(residual.begin(), residual.end(), [](auto w) { return w == 0; }))
            return std::nullopt;
    }
    return mul(coeffs, r.transform.row_range(0, rk));
}

inline BitMatrix random_matrix(std::size_t rows, std::size_t cols, Expander& rng) {
    BitMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t w = 0; w < m.stride(); ++w) m.row(i)[w] = rng.next_u64();
    m.mask_padding();
    return m;
}

inline constexpr int kRejectionCap = 256;

inline BitMatrix random_full_rank(std::size_t rows, std::size_t cols, Expander& rng) {
    std::size_t target = std::min(rows, cols);
    for (int attempt = 0; attempt < kRejectionCap; ++attempt) {
        BitMatrix m = random_matrix(rows, cols, rng);
        if (rank(m) == target) return m;
    }
    throw InternalError("random_full_rank: rejection cap exceeded");
}

// Subspace of F_2^ambient, stored as its canonical RREF basis.
class Subspace {
public:
    Subspace() = default;
    explicit Subspace(std::size_t ambient) : basis_(0, ambient) {}

    static Subspace row_span(const BitMatrix& m) {
        Subspace s;
        s.basis_ = row_basis(m);
        return s;
    }
    static Subspace column_span(const BitMatrix& m) { return row_span(m.transpose()); }

    std::size_t ambient_dim() const { return basis_.cols(); }
    std::size_t dim() const { return basis_.rows(); }
    const BitMatrix& basis() const { return basis_; }

    bool contains(const BitMatrix& vectors) const {
        return rank(BitMatrix::vstack(basis_, vectors)) == dim();
    }

    bool operator==(const Subspace& o) const { return basis_ == o.basis_; }

private:
    BitMatrix basis_;
};

} // namespace mrpke
