#pragma once

// Known-answer test vectors. Entry i of a set uses seed_i drawn from a stream
// keyed by the set id; keygen, message and encryption coins are separate
// domains of seed_i.

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mrpke/bytes.hpp"
#include "mrpke/pke.hpp"

namespace mrpke {

inline constexpr std::uint64_t kKatMessageDomain = 0x4d53;

struct KatEntry {
    std::size_t count;
    Seed seed;
    Bytes pk, sk, msg, ct;
};

inline KatEntry kat_entry(const Params& p, std::size_t count, const Seed& seed) {
    Expander kg(seed, domain::keygen), mg(seed, kKatMessageDomain), eg(seed, domain::encrypt);
    KeyPair kp = keygen(p, kg);
    Message msg = random_message(p, mg);
    Ciphertext ct = encrypt(p, kp.pk, msg, eg);
    return {count, seed, serialize(kp.pk), serialize(kp.sk), serialize_message(p, msg), serialize(ct)};
}

inline std::vector<Seed> kat_seeds(const Params& p, std::size_t count) {
    Seed root{};
    const char tag[] = "MinRankPKE-KAT";
    std::copy(tag, tag + sizeof(tag) - 1, root.begin());
    root[31] = p.id;
    Expander rng(root, 0);
    std::vector<Seed> seeds;
    for (std::size_t i = 0; i < count; ++i) seeds.push_back(rng.next_seed());
    return seeds;
}

inline std::vector<KatEntry> kat_generate(const Params& p, std::size_t count = 16) {
    std::vector<KatEntry> out;
    auto seeds = kat_seeds(p, count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(kat_entry(p, i, seeds[i]));
    return out;
}

inline void kat_write(std::ostream& os, const std::vector<KatEntry>& entries) {
    for (const auto& e : entries) {
        os << "count = " << e.count << "\n";
        os << "seed = " << to_hex(e.seed) << "\n";
        os << "pk = " << to_hex(e.pk) << "\n";
        os << "sk = " << to_hex(e.sk) << "\n";
        os << "msg = " << to_hex(e.msg) << "\n";
        os << "ct = " << to_hex(e.ct) << "\n\n";
    }
}

inline std::vector<KatEntry> kat_read(std::istream& is) {
    std::vector<KatEntry> out;
    std::map<std::string, std::string> fields;
    auto flush = [&] {
        if (fields.empty()) return;
        for (const char* key : {"count", "seed", "pk", "sk", "msg", "ct"})
            if (!fields.count(key)) throw FormatError(std::string("KAT entry missing field ") + key);
        KatEntry e;
        e.count = std::stoul(fields["count"]);
        Bytes seed = from_hex(fields["seed"]);
        if (seed.size() != 32) throw FormatError("KAT seed must be 32 bytes");
        std::copy(seed.begin(), seed.end(), e.seed.begin());
        e.pk = from_hex(fields["pk"]);
        e.sk = from_hex(fields["sk"]);
        e.msg = from_hex(fields["msg"]);
        e.ct = from_hex(fields["ct"]);
        out.push_back(std::move(e));
        fields.clear();
    };
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            flush();
            continue;
        }
        auto eq = line.find(" = ");
        if (eq == std::string::npos) throw FormatError("KAT: malformed line");
        fields[line.substr(0, eq)] = line.substr(eq + 3);
    }
    flush();
    return out;
}

struct KatMismatch {
    std::size_t count;
    std::string field;
};

// Regenerates every entry from its seed, compares all fields and checks decryption.
inline std::vector<KatMismatch> kat_verify(const Params& p, const std::vector<KatEntry>& entries) {
    std::vector<KatMismatch> bad;
    for (const auto& e : entries) {
        KatEntry fresh = kat_entry(p, e.count, e.seed);
        if (fresh.pk != e.pk) bad.push_back({e.count, "pk"});
        if (fresh.sk != e.sk) bad.push_back({e.count, "sk"});
        if (fresh.msg != e.msg) bad.push_back({e.count, "msg"});
        if (fresh.ct != e.ct) bad.push_back({e.count, "ct"});
        try {
            Message m = decrypt(p, parse_secret_key(e.sk), parse_ciphertext(e.ct));
            if (serialize_message(p, m) != e.msg) bad.push_back({e.count, "decrypt"});
        } catch (const std::exception&) {
            bad.push_back({e.count, "decrypt"});
        }
    }
    return bad;
}

} // namespace mrpke
