#pragma once

// MinRankPKE with the compressed dual-representation public key.
//
// The public parity-check matrix is systematic, H = [A | I] with A uniform of
// shape (mn-k)×k expanded from the public seed, so that
//   G  = [I_k | Aᵀ]        is the RREF kernel basis of H,
//   T' = [0 | Y]           is the lift of a syndrome Y (T'·Hᵀ = Y),
//   S' = E[:, :k]          solves T' − E = S'·G.
// Keygen and encryption never materialise H or G.

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mrpke/bitmatrix.hpp"
#include "mrpke/bytes.hpp"
#include "mrpke/codes.hpp"
#include "mrpke/errors.hpp"
#include "mrpke/gabidulin.hpp"
#include "mrpke/gf2m.hpp"
#include "mrpke/rng.hpp"

namespace mrpke {

struct Params {
    std::string name;
    unsigned lambda;
    std::uint8_t id;
    std::size_t m, n, k, r, d, l1, l2;
    unsigned kappa = 3;

    std::size_t mn() const { return m * n; }
    std::size_t redundancy() const { return m * n - k; }
    std::size_t pk_payload_bits() const { return l1 * redundancy(); }
    std::size_t ct_payload_bits() const { return l2 * k + l2 * l1; }
    std::size_t pk_payload_bytes() const { return (pk_payload_bits() + 7) / 8; }
    std::size_t ct_payload_bytes() const { return (ct_payload_bits() + 7) / 8; }
    std::size_t message_bytes() const { return kappa * ((l1 + 7) / 8); }
};

inline const std::vector<Params>& parameter_sets() {
    static const std::vector<Params> sets = {
        {"mrpke-1", 128, 1, 81, 81, 3201, 4, 4, 35, 35, 3},
        {"mrpke-3", 192, 3, 103, 103, 5270, 5, 5, 53, 53, 3},
        {"mrpke-5", 256, 5, 115, 115, 6613, 6, 6, 75, 75, 3},
    };
    return sets;
}

inline const Params& params_by_name(std::string_view name) {
    for (const auto& p : parameter_sets())
        if (p.name == name) return p;
    throw ValidationError("unknown parameter set: " + std::string(name));
}

inline const Params& params_by_id(std::uint8_t id) {
    for (const auto& p : parameter_sets())
        if (p.id == id) return p;
    throw FormatError("unknown parameter-set id " + std::to_string(id));
}

struct ParamReport {
    double gv_radius;
    double gv_slack;
    long decoder_margin;
};

// Rank-metric Gilbert–Varshamov radius: root w of w(m+n−w) = mn−k.
inline double gv_radius(std::size_t m, std::size_t n, std::size_t k) {
    double s = double(m) + double(n), diff = double(m) - double(n);
    return (s - std::sqrt(diff * diff + 4.0 * double(k))) / 2.0;
}

inline ParamReport validate_params(const Params& p) {
    std::vector<std::string> bad;
    std::size_t rd = p.r * p.d;
    if (p.k > p.mn()) bad.push_back("k <= mn");
    if (!(rd < std::min(p.l1, p.l2))) bad.push_back("rd < min(l1, l2)");
    long radius = p.l2 >= p.kappa ? long((p.l2 - p.kappa) / 2) : -1;
    if (p.kappa > p.l2) bad.push_back("kappa <= l2");
    else if (long(rd) > radius) bad.push_back("rd <= floor((l2 - kappa)/2)");
    if (p.l2 > p.l1) bad.push_back("l2 <= l1");
    if (p.r > p.n) bad.push_back("r <= n");
    if (p.d > p.n) bad.push_back("d <= n");
    if (p.r == 0 || p.d == 0) bad.push_back("r, d >= 1");
    if (p.l1 < 2 || p.l1 > 127) bad.push_back("2 <= l1 <= 127");
    double gv = gv_radius(p.m, p.n, std::min(p.k, p.mn()));
    if (!(double(p.r) < gv)) bad.push_back("r below Gilbert-Varshamov radius");
    if (!bad.empty()) {
        std::string msg = "invalid parameters " + p.name + ", violated:";
        for (const auto& b : bad) msg += " [" + b + "]";
        throw ValidationError(msg);
    }
    return {gv, gv - double(p.r), radius - long(rd)};
}

using Message = std::vector<FieldElement>;

struct PublicKey {
    std::uint8_t set_id;
    Seed seed;
    BitMatrix syndrome; // l1 × (mn−k)
};

struct SecretKey {
    std::uint8_t set_id;
    Seed seed;
    BitMatrix s_prime; // l1 × k
};

struct Ciphertext {
    std::uint8_t set_id;
    BitMatrix u; // l2 × k
    BitMatrix v; // l2 × l1
};

inline GabidulinCode derive_gabidulin(const Params& p, const Seed& seed) {
    Expander rng(seed, domain::gabidulin);
    return GabidulinCode::from_rng(static_cast<unsigned>(p.l1), static_cast<unsigned>(p.l2), p.kappa, rng);
}

struct PublicMatrices {
    BitMatrix a; // (mn−k) × k block of H = [A | I]

    static PublicMatrices expand(const Params& p, const Seed& seed) {
        Expander rng(seed, domain::public_matrix);
        return {random_matrix(p.redundancy(), p.k, rng)};
    }

    std::size_t k() const { return a.cols(); }
    std::size_t redundancy() const { return a.rows(); }

    BitMatrix h() const { return BitMatrix::hstack(a, BitMatrix::identity(redundancy())); }
    BitMatrix g() const { return BitMatrix::hstack(BitMatrix::identity(k()), a.transpose()); }

    // x·Hᵀ for rows x of length mn.
    BitMatrix apply_ht(const BitMatrix& x) const {
        return mul_transposed(x.col_range(0, k()), a) ^ x.col_range(k(), k() + redundancy());
    }

    // x·Gᵀ for rows x of length mn.
    BitMatrix apply_gt(const BitMatrix& x) const {
        return x.col_range(0, k()) ^ mul(x.col_range(k(), k() + redundancy()), a);
    }

    BitMatrix lift(const BitMatrix& syndrome) const {
        return BitMatrix::hstack(BitMatrix(syndrome.rows(), k()), syndrome);
    }
};

struct Expanded {
    PublicMatrices mats;
    GabidulinCode gab;
};

inline Expanded expand_public(const Params& p, const Seed& seed) {
    return {PublicMatrices::expand(p, seed), derive_gabidulin(p, seed)};
}

struct KeyPair {
    PublicKey pk;
    SecretKey sk;
};

// Keygen internals exposed for white-box tests.
struct KeygenTrace {
    Subspace support;
    BitMatrix errors; // l1 × mn, row j = rho(E_j)
};

inline KeyPair keygen(const Params& p, Expander& rng, KeygenTrace* trace = nullptr) {
    validate_params(p);
    Seed seed = rng.next_seed();
    PublicMatrices mats = PublicMatrices::expand(p, seed);
    Subspace support = sample_support(p.m, p.r, rng);
    BitMatrix e(p.l1, p.mn());
    for (std::size_t j = 0; j < p.l1; ++j) {
        BitMatrix ej = rho(sample_error_column_support(support, p.n, rng).matrix);
        std::copy(ej.row(0), ej.row(0) + ej.stride(), e.row(j));
    }
    KeyPair kp{{p.id, seed, mats.apply_ht(e)}, {p.id, seed, e.col_range(0, p.k)}};
    if (trace) *trace = {support, e};
    return kp;
}

inline void check_message(const Params& p, const Message& msg) {
    if (msg.size() != p.kappa) throw ShapeError("message must hold kappa field elements");
    u128 mask = (u128(1) << p.l1) - 1;
    for (auto e : msg)
        if (e & ~mask) throw ShapeError("message element exceeds field degree");
}

// Stack of rho(F_i) for l2 errors sharing a fresh d-dimensional row support.
inline BitMatrix sample_encryption_errors(const Params& p, Expander& rng) {
    Subspace support = sample_support(p.n, p.d, rng);
    BitMatrix f(p.l2, p.mn());
    for (std::size_t i = 0; i < p.l2; ++i) {
        BitMatrix fi = rho(sample_error_row_support(support, p.m, rng).matrix);
        std::copy(fi.row(0), fi.row(0) + fi.stride(), f.row(i));
    }
    return f;
}

inline Ciphertext encrypt_with_errors(const Params& p, const PublicKey& pk, const Expanded& pub,
                                      const Message& msg, const BitMatrix& f) {
    check_message(p, msg);
    BitMatrix u = pub.mats.apply_gt(f);
    BitMatrix v = mul_transposed(f.col_range(p.k, p.mn()), pk.syndrome) ^ pub.gab.encode(msg);
    return {p.id, std::move(u), std::move(v)};
}

inline Ciphertext encrypt(const Params& p, const PublicKey& pk, const Message& msg, Expander& rng) {
    if (pk.set_id != p.id) throw ValidationError("public key belongs to another parameter set");
    Expanded pub = expand_public(p, pk.seed);
    return encrypt_with_errors(p, pk, pub, msg, sample_encryption_errors(p, rng));
}

// Reference encryptor over the uncompressed key (G, T'); same rng consumption as encrypt.
inline Ciphertext encrypt_uncompressed(const Params& p, const BitMatrix& g, const BitMatrix& t_prime,
                                       const GabidulinCode& gab, const Message& msg, Expander& rng) {
    check_message(p, msg);
    BitMatrix f = sample_encryption_errors(p, rng);
    return {p.id, mul_transposed(f, g), mul_transposed(f, t_prime) ^ gab.encode(msg)};
}

inline Message decrypt(const Params& p, const SecretKey& sk, const Ciphertext& ct) {
    if (sk.set_id != p.id || ct.set_id != p.id) throw ValidationError("key/ciphertext parameter set mismatch");
    if (ct.u.rows() != p.l2 || ct.u.cols() != p.k || ct.v.rows() != p.l2 || ct.v.cols() != p.l1)
        throw DecryptError();
    GabidulinCode gab = derive_gabidulin(p, sk.seed);
    BitMatrix w = ct.v ^ mul_transposed(ct.u, sk.s_prime);
    auto msg = gab.decode(w);
    if (!msg) throw DecryptError();
    return *msg;
}

inline Message random_message(const Params& p, Expander& rng) {
    Field f(static_cast<unsigned>(p.l1));
    Message msg(p.kappa);
    for (auto& e : msg) e = f.random(rng);
    return msg;
}

// ---- wire formats ----

inline constexpr std::uint8_t kFormatVersion = 0x01;

namespace detail {

inline void put_header(Bytes& out, const char (&magic)[5], std::uint8_t id) {
    out.insert(out.end(), magic, magic + 4);
    out.push_back(kFormatVersion);
    out.push_back(id);
}

inline const Params& read_header(ByteReader& in, const char (&magic)[5]) {
    auto mg = in.take(4);
    if (!std::equal(mg.begin(), mg.end(), magic)) throw FormatError(std::string("bad magic, expected ") + magic);
    if (in.u8() != kFormatVersion) throw FormatError("unsupported format version");
    return params_by_id(in.u8());
}

inline Seed read_seed(ByteReader& in) {
    auto s = in.take(32);
    Seed seed;
    std::copy(s.begin(), s.end(), seed.begin());
    return seed;
}

inline BitMatrix read_shaped(ByteReader& in, std::size_t rows, std::size_t cols, const char* what) {
    BitMatrix m = BitMatrix::deserialize(in);
    if (m.rows() != rows || m.cols() != cols) throw FormatError(std::string(what) + ": wrong matrix shape");
    return m;
}

inline void expect_end(const ByteReader& in) {
    if (in.remaining()) throw FormatError("trailing bytes");
}

} // namespace detail

inline Bytes serialize(const PublicKey& pk) {
    Bytes out;
    detail::put_header(out, "MRPK", pk.set_id);
    out.insert(out.end(), pk.seed.begin(), pk.seed.end());
    pk.syndrome.serialize_into(out);
    return out;
}

inline Bytes serialize(const SecretKey& sk) {
    Bytes out;
    detail::put_header(out, "MRSK", sk.set_id);
    out.insert(out.end(), sk.seed.begin(), sk.seed.end());
    sk.s_prime.serialize_into(out);
    return out;
}

inline Bytes serialize(const Ciphertext& ct) {
    Bytes out;
    detail::put_header(out, "MRCT", ct.set_id);
    ct.u.serialize_into(out);
    ct.v.serialize_into(out);
    return out;
}

inline PublicKey parse_public_key(std::span<const std::uint8_t> data) {
    ByteReader in(data);
    const Params& p = detail::read_header(in, "MRPK");
    PublicKey pk{p.id, detail::read_seed(in), {}};
    pk.syndrome = detail::read_shaped(in, p.l1, p.redundancy(), "public key");
    detail::expect_end(in);
    return pk;
}

inline SecretKey parse_secret_key(std::span<const std::uint8_t> data) {
    ByteReader in(data);
    const Params& p = detail::read_header(in, "MRSK");
    SecretKey sk{p.id, detail::read_seed(in), {}};
    sk.s_prime = detail::read_shaped(in, p.l1, p.k, "secret key");
    detail::expect_end(in);
    return sk;
}

inline Ciphertext parse_ciphertext(std::span<const std::uint8_t> data) {
    ByteReader in(data);
    const Params& p = detail::read_header(in, "MRCT");
    Ciphertext ct{p.id, {}, {}};
    ct.u = detail::read_shaped(in, p.l2, p.k, "ciphertext U");
    ct.v = detail::read_shaped(in, p.l2, p.l1, "ciphertext V");
    detail::expect_end(in);
    return ct;
}

inline Bytes serialize_message(const Params& p, const Message& msg) {
    check_message(p, msg);
    Field f(static_cast<unsigned>(p.l1));
    Bytes out;
    for (auto e : msg) f.to_bytes(e, out);
    return out;
}

inline Message parse_message(const Params& p, std::span<const std::uint8_t> data) {
    Field f(static_cast<unsigned>(p.l1));
    if (data.size() != p.message_bytes()) throw FormatError("message: wrong length");
    Message msg;
    for (std::size_t i = 0; i < p.kappa; ++i) msg.push_back(f.from_bytes(data.subspan(i * f.byte_len(), f.byte_len())));
    return msg;
}

} // namespace mrpke
