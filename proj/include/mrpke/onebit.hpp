#pragma once

// One-bit reference scheme: public key = l1 noisy codewords from independent
// random codes with errors sharing one column support; a zero is encrypted as
// dual codewords plus errors sharing one row support, a one as uniform noise.

#include <sstream>
#include <vector>

#include "mrpke/bitmatrix.hpp"
#include "mrpke/codes.hpp"
#include "mrpke/errors.hpp"
#include "mrpke/rng.hpp"

namespace mrpke {

struct OneBitParams {
    std::size_t m, n, l1, l2;
    std::vector<std::size_t> ks;
    std::size_t r, d;

    static OneBitParams uniform(std::size_t m, std::size_t n, std::size_t l1, std::size_t l2, std::size_t k,
                                std::size_t r, std::size_t d) {
        return {m, n, l1, l2, std::vector<std::size_t>(l1, k), r, d};
    }

    void validate() const {
        std::ostringstream bad;
        if (ks.size() != l1) bad << " code count != l1;";
        for (auto k : ks)
            if (k > m * n) {
                bad << " k_j > mn;";
                break;
            }
        if (!(r * d < std::min(l1, l2))) bad << " rd >= min(l1, l2);";
        if (!(m >= n && n > r && r >= d)) bad << " need m >= n > r >= d;";
        if (d == 0 || r == 0) bad << " r and d must be positive;";
        if (!bad.str().empty()) throw ValidationError("one-bit params:" + bad.str());
    }
};

struct OneBitPublicKey {
    std::vector<MatrixCode> codes;
    std::vector<BitMatrix> ys;
};

struct OneBitSecretKey {
    Subspace support;
    std::vector<BitMatrix> es;
};

struct OneBitKeyPair {
    OneBitPublicKey pk;
    OneBitSecretKey sk;
};

inline OneBitKeyPair ob_keygen(const OneBitParams& p, Expander& rng) {
    p.validate();
    OneBitKeyPair kp;
    kp.sk.support = sample_support(p.m, p.r, rng);
    for (std::size_t j = 0; j < p.l1; ++j) {
        MatrixCode code(p.m, p.n, random_matrix(p.ks[j], p.m * p.n, rng));
        BitMatrix e = sample_error_column_support(kp.sk.support, p.n, rng).matrix;
        kp.pk.ys.push_back(code.random_codeword(rng) ^ e);
        kp.pk.codes.push_back(std::move(code));
        kp.sk.es.push_back(std::move(e));
    }
    return kp;
}

struct OneBitCiphertext {
    std::vector<BitMatrix> cs;
    std::vector<BitMatrix> fs; // row-support errors for b = 0, kept for white-box tests
};

// Span of every public basis matrix and every noisy codeword.
inline MatrixCode ob_public_sum(const OneBitParams& p, const OneBitPublicKey& pk) {
    MatrixCode sum = sum_codes(pk.codes, p.m, p.n);
    return augment(sum, vectorize(pk.ys, p.m, p.n));
}

inline OneBitCiphertext ob_encrypt_detailed(const OneBitParams& p, const OneBitPublicKey& pk, bool b,
                                            Expander& rng) {
    OneBitCiphertext ct;
    if (b) {
        for (std::size_t i = 0; i < p.l2; ++i) ct.cs.push_back(random_matrix(p.m, p.n, rng));
        return ct;
    }
    MatrixCode dual_code = dual(ob_public_sum(p, pk));
    Subspace row_support = sample_support(p.n, p.d, rng);
    for (std::size_t i = 0; i < p.l2; ++i) {
        BitMatrix f = sample_error_row_support(row_support, p.m, rng).matrix;
        ct.cs.push_back(dual_code.random_codeword(rng) ^ f);
        ct.fs.push_back(std::move(f));
    }
    return ct;
}

inline std::vector<BitMatrix> ob_encrypt(const OneBitParams& p, const OneBitPublicKey& pk, bool b,
                                         Expander& rng) {
    return ob_encrypt_detailed(p, pk, b, rng).cs;
}

struct OneBitDecryption {
    bool bit;
    std::size_t rank_d;
};

inline OneBitDecryption ob_decrypt(const OneBitParams& p, const OneBitSecretKey& sk,
                                   const std::vector<BitMatrix>& ct) {
    if (ct.size() != p.l2) throw ShapeError("ob_decrypt: ciphertext must hold l2 matrices");
    std::size_t rk = rank(inner_product_matrix(sk.es, ct));
    return {rk > p.r * p.d, rk};
}

} // namespace mrpke
