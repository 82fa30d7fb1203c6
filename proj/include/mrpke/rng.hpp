#pragma once

// Deterministic byte expander: ChaCha20 keystream keyed by a 32-byte seed,
// with a 64-bit domain tag used as the nonce. All sampling in the library
// draws from one of these; there is no ambient RNG.

#include <sodium.h>

#include <array>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>

#include "mrpke/errors.hpp"

namespace mrpke {

using Seed = std::array<std::uint8_t, 32>;

namespace domain {
inline constexpr std::uint64_t keygen = 0x4b47;        // master seed -> keygen draws
inline constexpr std::uint64_t public_matrix = 0x504d; // pk seed -> A block of H
inline constexpr std::uint64_t gabidulin = 0x4742;     // pk seed -> evaluation vector
inline constexpr std::uint64_t encrypt = 0x454e;       // KAT encryption coins
} // namespace domain

class Expander {
public:
    explicit Expander(const Seed& seed, std::uint64_t domain_tag = 0) : key_(seed) {
        for (int i = 0; i < 8; ++i)
            nonce_[i] = static_cast<std::uint8_t>(domain_tag >> (8 * i));
    }

    void fill(std::span<std::uint8_t> out) {
        std::size_t done = 0;
        while (done < out.size()) {
            if (pos_ == buf_.size()) refill();
            std::size_t take = std::min(out.size() - done, buf_.size() - pos_);
            std::memcpy(out.data() + done, buf_.data() + pos_, take);
            pos_ += take;
            done += take;
        }
    }

    std::uint64_t next_u64() {
        std::uint8_t b[8];
        fill(b);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
        return v;
    }

    bool next_bit() {
        if (bits_left_ == 0) {
            bit_pool_ = next_u64();
            bits_left_ = 64;
        }
        bool b = bit_pool_ & 1;
        bit_pool_ >>= 1;
        --bits_left_;
        return b;
    }

    // Uniform in [0, bound) by rejection; bound > 0.
    std::uint64_t uniform(std::uint64_t bound) {
        if (bound <= 1) return 0;
        std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
        for (;;) {
            std::uint64_t v = next_u64();
            if (v < limit) return v % bound;
        }
    }

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform_real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    Seed next_seed() {
        Seed s;
        fill(s);
        return s;
    }

    // Independent child stream; the parent advances by one seed.
    Expander fork(std::uint64_t domain_tag) { return Expander(next_seed(), domain_tag); }

private:
    void refill() {
        buf_.fill(0);
        crypto_stream_chacha20_xor_ic(buf_.data(), buf_.data(), buf_.size(), nonce_.data(),
                                      block_, key_.data());
        block_ += buf_.size() / 64;
        pos_ = 0;
    }

    Seed key_;
    std::array<std::uint8_t, 8> nonce_{};
    std::array<std::uint8_t, 4096> buf_{};
    std::size_t pos_ = 4096;
    std::uint64_t block_ = 0;
    std::uint64_t bit_pool_ = 0;
    int bits_left_ = 0;
};

inline Seed seed_from_u64(std::uint64_t v) {
    Seed s{};
    for (int i = 0; i < 8; ++i) s[i] = static_cast<std::uint8_t>(v >> (8 * i));
    return s;
}

// OS entropy; libsodium must be initialised.
inline Seed os_seed() {
    if (sodium_init() < 0) throw InternalError("libsodium initialisation failed");
    Seed s;
    randombytes_buf(s.data(), s.size());
    return s;
}

} // namespace mrpke
