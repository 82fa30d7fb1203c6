#include <gtest/gtest.h>

#include "mrpke/gf2m.hpp"

using namespace mrpke;

namespace {

// Reference arithmetic: shift-and-add product modulo f, independent of Field.
u128 ref_mulmod(u128 a, u128 b, u128 f, unsigned m) {
    u128 r = 0;
    for (int i = int(m) - 1; i >= 0; --i) {
        r <<= 1;
        if ((r >> m) & 1) r ^= f;
        if ((b >> i) & 1) r ^= a;
    }
    return r;
}

int ref_degree(u128 v) {
    if (!v) return -1;
    std::uint64_t hi = std::uint64_t(v >> 64);
    return hi ? 127 - std::countl_zero(hi) : 63 - std::countl_zero(std::uint64_t(v));
}

u128 ref_gcd(u128 a, u128 b) {
    while (b) {
        while (a && ref_degree(a) >= ref_degree(b)) a ^= b << (ref_degree(a) - ref_degree(b));
        std::swap(a, b);
    }
    return a;
}

// Rabin: x^(2^m) = x mod f and gcd(x^(2^(m/p)) − x, f) = 1 for each prime p | m.
bool rabin_irreducible(u128 f, unsigned m) {
    auto x_pow2k = [&](unsigned k) {
        u128 r = 2;
        for (unsigned i = 0; i < k; ++i) r = ref_mulmod(r, r, f, m);
        return r;
    };
    if (x_pow2k(m) != 2) return false;
    unsigned rest = m;
    for (unsigned p = 2; p <= rest; ++p) {
        if (rest % p) continue;
        while (rest % p == 0) rest /= p;
        if (ref_gcd(f, x_pow2k(m / p) ^ 2) != 1) return false;
    }
    return true;
}

// Smallest-value trinomial, else pentanomial, accepted by the Rabin oracle.
u128 reference_modulus(unsigned m) {
    u128 top = u128(1) << m;
    for (unsigned a = 1; a < m; ++a)
        if (rabin_irreducible(top | (u128(1) << a) | 1, m)) return top | (u128(1) << a) | 1;
    for (unsigned a = 3; a < m; ++a)
        for (unsigned b = 2; b < a; ++b)
            for (unsigned c = 1; c < b; ++c) {
                u128 f = top | (u128(1) << a) | (u128(1) << b) | (u128(1) << c) | 1;
                if (rabin_irreducible(f, m)) return f;
            }
    return 0;
}

std::size_t span_dim(std::vector<u128> v) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i]) continue;
        ++d;
        u128 low = v[i] & (~v[i] + 1);
        for (std::size_t j = i + 1; j < v.size(); ++j)
            if (v[j] & low) v[j] ^= v[i];
    }
    return d;
}

} // namespace

TEST(FieldModulus, MatchesIndependentSearch) {
    for (unsigned m : {2u, 3u, 4u, 5u, 8u, 10u, 16u, 35u, 53u, 75u}) {
        EXPECT_EQ(Field(m).modulus(), reference_modulus(m)) << "m=" << m;
    }
    EXPECT_EQ(Field(8).modulus(), u128(0x11b));
    EXPECT_EQ(Field(35).modulus(), (u128(1) << 35) | 5);
}

TEST(FieldModulus, RejectsReducible) {
    EXPECT_THROW(Field(4, 0b10101), std::invalid_argument); // (x^2+x+1)^2
    EXPECT_FALSE(Field::is_irreducible(8, 0x11d ^ 0x4));
}

TEST(FieldArith, Gf4Frobenius) {
    Field f(2);
    EXPECT_EQ(f.modulus(), u128(0b111));
    EXPECT_EQ(f.frobenius(0b10), u128(0b11));
    EXPECT_EQ(Field::add(0b11, 0b11), u128(0));
}

TEST(FieldArith, AgreesWithReferenceProduct) {
    Expander rng(seed_from_u64(21));
    for (unsigned m : {2u, 7u, 8u, 31u, 35u, 53u, 64u, 65u, 75u, 100u, 127u}) {
        Field f(m);
        for (int i = 0; i < 200; ++i) {
            u128 a = f.random(rng), b = f.random(rng);
            ASSERT_EQ(f.mul(a, b), ref_mulmod(a, b, f.modulus(), m)) << "m=" << m;
        }
    }
}

TEST(FieldArith, Axioms) {
    Expander rng(seed_from_u64(22));
    for (unsigned m : {3u, 35u, 53u, 75u}) {
        Field f(m);
        for (int i = 0; i < 300; ++i) {
            u128 a = f.random(rng), b = f.random(rng), c = f.random(rng);
            EXPECT_EQ(f.mul(a, b), f.mul(b, a));
            EXPECT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            EXPECT_EQ(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c));
            EXPECT_EQ(f.frobenius(a ^ b), f.frobenius(a) ^ f.frobenius(b));
            EXPECT_EQ(f.mul(a, 1), a);
        }
    }
}

TEST(FieldArith, Inverses) {
    Expander rng(seed_from_u64(23));
    Field f(35);
    for (int i = 0; i < 1000; ++i) {
        u128 e = f.random(rng);
        if (!e) continue;
        EXPECT_EQ(f.mul(e, f.inv(e)), u128(1));
    }
    EXPECT_THROW(f.inv(0), DivisionByZero);
    EXPECT_THROW(f.div(1, 0), DivisionByZero);
}

TEST(FieldArith, FrobeniusOrderIsDegree) {
    Expander rng(seed_from_u64(24));
    for (unsigned m : {5u, 35u, 53u, 75u}) {
        Field f(m);
        u128 a = f.random(rng);
        EXPECT_EQ(f.frobenius_pow(a, m), a);
        EXPECT_EQ(f.frobenius_root(f.frobenius_pow(a, 3), 3), a);
    }
}

TEST(FieldArith, PortableClmulMatchesDispatch) {
    Expander rng(seed_from_u64(25));
    for (int i = 0; i < 2000; ++i) {
        std::uint64_t a = rng.next_u64(), b = rng.next_u64();
        ASSERT_EQ(detail::clmul64_portable(a, b), detail::clmul64(a, b));
    }
}

TEST(FieldArith, BytesRoundTrip) {
    Expander rng(seed_from_u64(26));
    Field f(75);
    u128 a = f.random(rng);
    Bytes b;
    f.to_bytes(a, b);
    EXPECT_EQ(b.size(), 10u);
    EXPECT_EQ(f.from_bytes(b), a);
}

TEST(QPolyEval, Examples) {
    Field f4(2);
    EXPECT_EQ(qpoly_eval(f4, QPoly::identity(), 0b10), u128(0b10));
    EXPECT_EQ(qpoly_eval(f4, QPoly::monomial(1, 1), 0b10), u128(0b11));

    Expander rng(seed_from_u64(27));
    Field f(35);
    for (int i = 0; i < 100; ++i) {
        QPoly p({f.random(rng), f.random(rng), f.random(rng), f.random(rng)});
        u128 a = f.random(rng), b = f.random(rng);
        EXPECT_EQ(qpoly_eval(f, p, a ^ b), qpoly_eval(f, p, a) ^ qpoly_eval(f, p, b));
    }
}

TEST(QPolyCompose, FrobeniusPowers) {
    Field f(8);
    EXPECT_EQ(qpoly_compose(f, QPoly::monomial(1, 1), QPoly::monomial(1, 1)), QPoly::monomial(2, 1));
    Expander rng(seed_from_u64(28));
    Field g(53);
    for (int i = 0; i < 50; ++i) {
        QPoly p({g.random(rng), g.random(rng), g.random(rng)}), q({g.random(rng), g.random(rng)});
        u128 x = g.random(rng);
        EXPECT_EQ(qpoly_eval(g, qpoly_compose(g, p, q), x), qpoly_eval(g, p, qpoly_eval(g, q, x)));
    }
}

TEST(QPolyInterpolate, SinglePointAndRoundTrip) {
    Field f(35);
    Expander rng(seed_from_u64(29));
    u128 g = f.random(rng) | 1, y = f.random(rng);
    std::vector<u128> xs{g}, ys{y};
    EXPECT_EQ(qpoly_interpolate(f, xs, ys), QPoly({f.div(y, g)}));

    for (int t = 0; t < 30; ++t) {
        std::vector<u128> pts, vals;
        while (pts.size() < 6) {
            u128 c = f.random(rng);
            pts.push_back(c);
            if (span_dim(pts) < pts.size()) pts.pop_back();
        }
        for (std::size_t i = 0; i < pts.size(); ++i) vals.push_back(f.random(rng));
        QPoly p = qpoly_interpolate(f, pts, vals);
        EXPECT_LT(p.qdeg(), 6);
        for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_EQ(qpoly_eval(f, p, pts[i]), vals[i]);
        // interpolate ∘ evaluate is the identity on q-degree < 6
        QPoly q({f.random(rng), f.random(rng), f.random(rng), f.random(rng), f.random(rng), f.random(rng) | 1});
        std::vector<u128> qv;
        for (auto x : pts) qv.push_back(qpoly_eval(f, q, x));
        EXPECT_EQ(qpoly_interpolate(f, pts, qv), q);
    }
    std::vector<u128> dep{5, 9, 12}, any{1, 2, 3};
    EXPECT_THROW(qpoly_interpolate(f, dep, any), DependentPoints);
}

TEST(QPolySubspace, VanishesOnSpan) {
    Field f(16);
    std::vector<u128> xs{0x1234, 0x0f0f, 0x8001};
    QPoly a = subspace_polynomial(f, xs);
    EXPECT_EQ(a.qdeg(), 3);
    for (unsigned c = 0; c < 8; ++c) {
        u128 x = ((c & 1) ? xs[0] : 0) ^ ((c & 2) ? xs[1] : 0) ^ ((c & 4) ? xs[2] : 0);
        EXPECT_EQ(qpoly_eval(f, a, x), u128(0));
    }
    EXPECT_NE(qpoly_eval(f, a, 0x0002), u128(0));
}

TEST(RankWeight, ExpansionMatchesSpan) {
    Field f(35);
    std::vector<u128> zero(7, 0), same(7, 0x1234567);
    EXPECT_EQ(rank(vector_to_bitmatrix(f, zero)), 0u);
    EXPECT_EQ(rank(vector_to_bitmatrix(f, same)), 1u);
    Expander rng(seed_from_u64(30));
    for (int t = 0; t < 100; ++t) {
        std::vector<u128> v;
        std::size_t len = 1 + rng.uniform(12);
        u128 base = f.random(rng), other = f.random(rng);
        for (std::size_t i = 0; i < len; ++i) v.push_back(rng.next_bit() ? f.random(rng) : (rng.next_bit() ? base : base ^ other));
        EXPECT_EQ(rank_weight(f, v), span_dim(v));
        EXPECT_EQ(bitmatrix_to_vector(f, vector_to_bitmatrix(f, v)), v);
    }
    u128 e = 0x5a5a5;
    EXPECT_EQ(bits_from_element(f, element_to_bits(f, e)), e);
}
