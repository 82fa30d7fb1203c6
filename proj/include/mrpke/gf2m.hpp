#pragma once

// GF(2^m) for 2 <= m <= 127 in the polynomial basis, plus linearized
// (q-)polynomials over it. Elements are unsigned __int128 with bits >= m zero.

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#if defined(__PCLMUL__)
#include <wmmintrin.h>
#endif

#include "mrpke/bitmatrix.hpp"
#include "mrpke/bytes.hpp"
#include "mrpke/errors.hpp"
#include "mrpke/rng.hpp"

namespace mrpke {

using u128 = unsigned __int128;
using FieldElement = u128;

namespace detail {

inline u128 clmul64_portable(std::uint64_t a, std::uint64_t b) {
    std::array<u128, 16> table{};
    table[1] = a;
    for (int i = 2; i < 16; ++i) table[i] = (i & 1) ? table[i - 1] ^ u128(a) : table[i >> 1] << 1;
    u128 r = 0;
    for (int s = 60; s >= 0; s -= 4) r = (r << 4) ^ table[(b >> s) & 15];
    return r;
}

inline u128 clmul64(std::uint64_t a, std::uint64_t b) {
#if defined(__PCLMUL__)
    __m128i p = _mm_clmulepi64_si128(_mm_cvtsi64_si128(static_cast<long long>(a)),
                                     _mm_cvtsi64_si128(static_cast<long long>(b)), 0);
    alignas(16) std::uint64_t out[2];
    _mm_store_si128(reinterpret_cast<__m128i*>(out), p);
    return u128(out[1]) << 64 | out[0];
#else
    return clmul64_portable(a, b);
#endif
}

constexpr bool hardware_clmul() {
#if defined(__PCLMUL__)
    return true;
#else
    return false;
#endif
}

inline int bit_length(u128 v) {
    std::uint64_t hi = static_cast<std::uint64_t>(v >> 64), lo = static_cast<std::uint64_t>(v);
    return hi ? 128 - std::countl_zero(hi) : 64 - std::countl_zero(lo);
}

inline u128 poly_mod(u128 a, u128 b) {
    int db = bit_length(b) - 1;
    for (int da = bit_length(a) - 1; da >= db; da = bit_length(a) - 1) a ^= b << (da - db);
    return a;
}

inline u128 poly_gcd(u128 a, u128 b) {
    while (b) {
        a = poly_mod(a, b);
        std::swap(a, b);
    }
    return a;
}

} // namespace detail

class Field {
public:
    // Degree m with the fixed set modulus for m in {35, 53, 75}, else the
    // lexicographically smallest minimal-weight irreducible polynomial.
    explicit Field(unsigned m) : Field(m, default_modulus(m)) {}

    Field(unsigned m, u128 modulus) : Field(m, modulus, Unchecked{}) {
        if (!is_irreducible(m, modulus)) throw std::invalid_argument("Field: modulus not irreducible");
    }

    unsigned degree() const { return m_; }
    u128 modulus() const { return modulus_; }
    std::size_t byte_len() const { return (m_ + 7) / 8; }
    u128 mask() const { return mask_; }
    FieldElement one() const { return 1; }

    static FieldElement add(FieldElement a, FieldElement b) { return a ^ b; }

    FieldElement mul(FieldElement a, FieldElement b) const {
        std::uint64_t a0 = static_cast<std::uint64_t>(a), a1 = static_cast<std::uint64_t>(a >> 64);
        std::uint64_t b0 = static_cast<std::uint64_t>(b), b1 = static_cast<std::uint64_t>(b >> 64);
        u128 lo = detail::clmul64(a0, b0);
        u128 hi = 0;
        if (a1 | b1) {
            u128 mid = detail::clmul64(a0, b1) ^ detail::clmul64(a1, b0);
            hi = detail::clmul64(a1, b1) ^ (mid >> 64);
            lo ^= mid << 64;
        }
        return reduce(hi, lo);
    }

    FieldElement sqr(FieldElement a) const { return mul(a, a); }
    FieldElement frobenius(FieldElement a) const { return sqr(a); }

    // a^(2^k) for any k >= 0.
    FieldElement frobenius_pow(FieldElement a, unsigned k) const {
        for (k %= m_; k; --k) a = sqr(a);
        return a;
    }

    // Inverse of frobenius_pow: returns b with b^(2^k) = a.
    FieldElement frobenius_root(FieldElement a, unsigned k) const {
        return frobenius_pow(a, (m_ - k % m_) % m_);
    }

    FieldElement inv(FieldElement a) const {
        if (a == 0) throw DivisionByZero();
        FieldElement r = a;
        for (unsigned i = 1; i + 1 < m_; ++i) r = mul(sqr(r), a);
        return sqr(r);
    }

    FieldElement div(FieldElement a, FieldElement b) const { return mul(a, inv(b)); }

    FieldElement random(Expander& rng) const {
        u128 lo = rng.next_u64();
        u128 hi = m_ > 64 ? u128(rng.next_u64()) << 64 : 0;
        return (hi | lo) & mask_;
    }

    void to_bytes(FieldElement e, Bytes& out) const {
        for (std::size_t i = 0; i < byte_len(); ++i) out.push_back(static_cast<std::uint8_t>(e >> (8 * i)));
    }

    FieldElement from_bytes(std::span<const std::uint8_t> in) const {
        if (in.size() != byte_len()) throw FormatError("field element: wrong byte length");
        u128 e = 0;
        for (std::size_t i = in.size(); i-- > 0;) e = e << 8 | in[i];
        if (e & ~mask_) throw FormatError("field element: bits above degree set");
        return e;
    }

    bool operator==(const Field& o) const { return m_ == o.m_ && modulus_ == o.modulus_; }

    // Ben-Or: f of degree m is irreducible iff gcd(x^(2^i) - x, f) = 1 for i <= m/2.
    static bool is_irreducible(unsigned m, u128 f) {
        if (m < 2 || m > 127 || detail::bit_length(f) != int(m) + 1 || !(f & 1)) return false;
        Field raw(m, f, Unchecked{});
        FieldElement x = 2, p = 2;
        for (unsigned i = 1; i <= m / 2; ++i) {
            p = raw.sqr(p);
            if (detail::poly_gcd(f, p ^ x) != 1) return false;
        }
        return true;
    }

    static u128 search_modulus(unsigned m) {
        u128 top = u128(1) << m;
        for (unsigned a = 1; a < m; ++a) {
            u128 f = top | (u128(1) << a) | 1;
            if (is_irreducible(m, f)) return f;
        }
        for (unsigned a = 3; a < m; ++a)
            for (unsigned b = 2; b < a; ++b)
                for (unsigned c = 1; c < b; ++c) {
                    u128 f = top | (u128(1) << a) | (u128(1) << b) | (u128(1) << c) | 1;
                    if (is_irreducible(m, f)) return f;
                }
        throw std::invalid_argument("Field: no trinomial or pentanomial modulus");
    }

    static u128 default_modulus(unsigned m) {
        switch (m) {
        case 35: return (u128(1) << 35) | (u128(1) << 2) | 1;
        case 53: return (u128(1) << 53) | (u128(1) << 6) | (u128(1) << 2) | (u128(1) << 1) | 1;
        case 75: return (u128(1) << 75) | (u128(1) << 6) | (u128(1) << 3) | (u128(1) << 1) | 1;
        default: return search_modulus(m);
        }
    }

private:
    struct Unchecked {};

    Field(unsigned m, u128 modulus, Unchecked) : m_(m), modulus_(modulus) {
        if (m < 2 || m > 127) throw std::invalid_argument("Field: degree out of range");
        mask_ = (u128(1) << m) - 1;
        for (unsigned e = 0; e < m; ++e)
            if ((modulus >> e) & 1) low_terms_.push_back(e);
    }

    // Reduces the 256-bit carry-less product (hi:lo) modulo the modulus.
    FieldElement reduce(u128 hi, u128 lo) const {
        while (hi || (lo >> m_)) {
            u128 t = (lo >> m_) | (hi << (128 - m_));
            hi = 0;
            lo &= mask_;
            for (unsigned e : low_terms_) {
                lo ^= t << e;
                if (e) hi ^= t >> (128 - e);
            }
        }
        return lo;
    }

    unsigned m_;
    u128 modulus_;
    u128 mask_;
    std::vector<unsigned> low_terms_;
};

// Row i holds the polynomial-basis expansion of v[i]; width = field degree.
inline BitMatrix vector_to_bitmatrix(const Field& f, std::span<const FieldElement> v) {
    BitMatrix out(v.size(), f.degree());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.row(i)[0] = static_cast<std::uint64_t>(v[i]);
        if (out.stride() > 1) out.row(i)[1] = static_cast<std::uint64_t>(v[i] >> 64);
    }
    return out;
}

inline std::vector<FieldElement> bitmatrix_to_vector(const Field& f, const BitMatrix& m) {
    if (m.cols() != f.degree()) throw ShapeError("bitmatrix_to_vector: width must equal field degree");
    std::vector<FieldElement> v(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        u128 e = m.row(i)[0];
        if (m.stride() > 1) e |= u128(m.row(i)[1]) << 64;
        v[i] = e;
    }
    return v;
}

inline BitMatrix element_to_bits(const Field& f, FieldElement e) {
    return vector_to_bitmatrix(f, std::span<const FieldElement>(&e, 1));
}

inline FieldElement bits_from_element(const Field& f, const BitMatrix& row) {
    if (row.rows() != 1) throw ShapeError("bits_from_element: expected a single row");
    return bitmatrix_to_vector(f, row)[0];
}

inline std::size_t rank_weight(const Field& f, std::span<const FieldElement> v) {
    return rank(vector_to_bitmatrix(f, v));
}

// P(X) = sum_i c[i] X^(2^i); the zero polynomial has no coefficients.
struct QPoly {
    std::vector<FieldElement> c;

    QPoly() = default;
    explicit QPoly(std::vector<FieldElement> coeffs) : c(std::move(coeffs)) { normalize(); }

    static QPoly identity() { return QPoly({1}); }
    static QPoly monomial(unsigned qdeg, FieldElement coef) {
        std::vector<FieldElement> v(qdeg + 1, 0);
        v[qdeg] = coef;
        return QPoly(std::move(v));
    }

    int qdeg() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    FieldElement coeff(std::size_t i) const { return i < c.size() ? c[i] : 0; }

    void normalize() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }

    bool operator==(const QPoly& o) const { return c == o.c; }
};

inline QPoly qpoly_add(const QPoly& a, const QPoly& b) {
    std::vector<FieldElement> v(std::max(a.c.size(), b.c.size()), 0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.coeff(i) ^ b.coeff(i);
    return QPoly(std::move(v));
}

inline QPoly qpoly_scale(const Field& f, FieldElement s, const QPoly& p) {
    std::vector<FieldElement> v(p.c.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.mul(s, p.c[i]);
    return QPoly(std::move(v));
}

inline FieldElement qpoly_eval(const Field& f, const QPoly& p, FieldElement x) {
    FieldElement acc = 0;
    for (std::size_t i = 0; i < p.c.size(); ++i) {
        if (i) x = f.sqr(x);
        acc ^= f.mul(p.c[i], x);
    }
    return acc;
}

// (P∘Q)(x) = P(Q(x)); coefficient s is sum_{i+j=s} p_i q_j^(2^i).
inline QPoly qpoly_compose(const Field& f, const QPoly& p, const QPoly& q) {
    if (p.is_zero() || q.is_zero()) return {};
    std::vector<FieldElement> v(p.c.size() + q.c.size() - 1, 0);
    std::vector<FieldElement> qf = q.c;
    for (std::size_t i = 0; i < p.c.size(); ++i) {
        if (i)
            for (auto& e : qf) e = f.sqr(e);
        if (p.c[i] == 0) continue;
        for (std::size_t j = 0; j < qf.size(); ++j) v[i + j] ^= f.mul(p.c[i], qf[j]);
    }
    return QPoly(std::move(v));
}

// Newton-style interpolation: keeps the annihilator of the points seen so far
// and corrects P along it, one point at a time.
inline QPoly qpoly_interpolate(const Field& f, std::span<const FieldElement> xs,
                               std::span<const FieldElement> ys) {
    if (xs.size() != ys.size()) throw ShapeError("qpoly_interpolate: point/value count mismatch");
    QPoly p, annihilator = QPoly::identity();
    for (std::size_t k = 0; k < xs.size(); ++k) {
        FieldElement v = qpoly_eval(f, annihilator, xs[k]);
        if (v == 0) throw DependentPoints();
        FieldElement c = f.div(ys[k] ^ qpoly_eval(f, p, xs[k]), v);
        p = qpoly_add(p, qpoly_scale(f, c, annihilator));
        annihilator = qpoly_compose(f, QPoly({v, 1}), annihilator);
    }
    return p;
}

// Monic subspace polynomial vanishing exactly on span(xs); xs must be independent.
inline QPoly subspace_polynomial(const Field& f, std::span<const FieldElement> xs) {
    QPoly a = QPoly::identity();
    for (FieldElement x : xs) {
        FieldElement v = qpoly_eval(f, a, x);
        if (v == 0) throw DependentPoints();
        a = qpoly_compose(f, QPoly({v, 1}), a);
    }
    return a;
}

} // namespace mrpke
