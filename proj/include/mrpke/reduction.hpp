#pragma once

// Toy search-to-decision reduction for stationary MinRank over GF(2), in dual
// form (H_j, s_j = H_j·e_j). A distinguisher between consecutive hybrids is
// turned into a noisy predictor of e·r, which Goldreich-Levin list-decodes.

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "mrpke/attacks.hpp"
#include "mrpke/bitmatrix.hpp"
#include "mrpke/codes.hpp"
#include "mrpke/errors.hpp"
#include "mrpke/rng.hpp"

namespace mrpke::reduction {

struct ReductionParams {
    std::size_t m, n, k, t, count;

    std::size_t length() const { return m * n; }
    std::size_t syndrome_length() const { return m * n - k; }

    void validate() const {
        if (t == 0 || t > std::min(m, n)) throw ValidationError("reduction: need 0 < t <= min(m, n)");
        if (k >= m * n) throw ValidationError("reduction: need k < mn");
        if (m * n - k > 64) throw ValidationError("reduction: syndromes longer than 64 bits are out of scope");
        if (count == 0) throw ValidationError("reduction: need at least one instance");
    }
};

struct DualInstance {
    BitMatrix h; // (mn−k) × mn
    BitMatrix s; // 1 × (mn−k)
};

struct HybridSample {
    std::size_t index; // number of leading real instances
    std::vector<DualInstance> instances;
};

// Secret side of a draw, read only by calibration and final checks.
struct HybridDraw {
    HybridSample sample;
    Subspace support;
    std::vector<BitMatrix> es;
};

inline BitMatrix syndrome(const BitMatrix& h, const BitMatrix& e_vec) { return mul_transposed(e_vec, h); }

inline HybridDraw sample_hybrid(const ReductionParams& p, std::size_t index, Expander& rng) {
    p.validate();
    if (index > p.count) throw ShapeError("sample_hybrid: index exceeds N");
    HybridDraw d;
    d.sample.index = index;
    d.support = sample_support(p.m, p.t, rng);
    for (std::size_t j = 0; j < p.count; ++j) {
        BitMatrix e = sample_error_column_support(d.support, p.n, rng).matrix;
        BitMatrix h = random_matrix(p.syndrome_length(), p.length(), rng);
        BitMatrix s = j < index ? syndrome(h, rho(e)) : random_matrix(1, p.syndrome_length(), rng);
        d.sample.instances.push_back({std::move(h), std::move(s)});
        d.es.push_back(std::move(e));
    }
    return d;
}

// Primal view: Y = codeword + E in a uniform code; its dual form uses a uniform
// basis of the dual code, so s = H·rho(Y) = H·rho(E).
inline DualInstance primal_to_dual(const MatrixCode& code, const BitMatrix& y, Expander& rng) {
    BitMatrix parity = kernel_basis(code.gen());
    BitMatrix h = mul(random_full_rank(parity.rows(), parity.rows(), rng), parity);
    return {h, syndrome(h, rho(y))};
}

// ---- distinguishers ----

struct DistinguisherOracle {
    std::function<bool(const HybridSample&, Expander&)> decide; // true = "real"
    double declared_advantage;
};

inline std::vector<Subspace> enumerate_subspaces(std::size_t ambient, std::size_t dim) {
    if (ambient > 16) throw TooLarge("enumerate_subspaces: ambient dimension too large");
    std::vector<Subspace> out;
    std::set<std::vector<std::uint64_t>> seen;
    std::vector<std::uint64_t> vecs(dim, 1);
    const std::uint64_t top = std::uint64_t(1) << ambient;
    if (dim == 0) return {Subspace(ambient)};
    while (true) {
        BitMatrix b(dim, ambient);
        for (std::size_t i = 0; i < dim; ++i) b.row(i)[0] = vecs[i];
        if (rank(b) == dim) {
            Subspace s = Subspace::row_span(b);
            std::vector<std::uint64_t> key;
            for (std::size_t i = 0; i < dim; ++i) key.push_back(s.basis().row(i)[0]);
            if (seen.insert(key).second) out.push_back(std::move(s));
        }
        std::size_t pos = 0;
        while (pos < dim && ++vecs[pos] == top) vecs[pos++] = 1;
        if (pos == dim) break;
    }
    return out;
}

namespace detail {

// Columns of H as (mn−k)-bit words, plus the syndrome word.
struct PreparedInstance {
    std::vector<std::uint64_t> cols;
    std::uint64_t s;
};

inline PreparedInstance prepare(const DualInstance& inst) {
    BitMatrix ht = inst.h.transpose();
    PreparedInstance out{std::vector<std::uint64_t>(ht.rows()), inst.s.cols() ? inst.s.row(0)[0] : 0};
    for (std::size_t c = 0; c < ht.rows(); ++c) out.cols[c] = ht.cols() ? ht.row(c)[0] : 0;
    return out;
}

inline bool consistent(const ReductionParams& p, const PreparedInstance& inst, const Subspace& support) {
    std::vector<std::uint64_t> image;
    for (std::size_t v = 0; v < support.dim(); ++v) {
        const std::uint64_t basis = support.basis().row(v)[0];
        for (std::size_t b = 0; b < p.n; ++b) {
            std::uint64_t acc = 0;
            for (std::size_t a = 0; a < p.m; ++a)
                if ((basis >> a) & 1) acc ^= inst.cols[a * p.n + b];
            image.push_back(acc);
        }
    }
    std::size_t base = attack::rank_small(image);
    image.push_back(inst.s);
    return attack::rank_small(std::move(image)) == base;
}

inline std::vector<PreparedInstance> prepare_all(const HybridSample& sample) {
    std::vector<PreparedInstance> out;
    for (const auto& inst : sample.instances) out.push_back(prepare(inst));
    return out;
}

inline bool consistent_with_all(const ReductionParams& p, const std::vector<PreparedInstance>& prepared,
                                const Subspace& support) {
    for (const auto& inst : prepared)
        if (!consistent(p, inst, support)) return false;
    return true;
}

} // namespace detail

// s lies in the image of {E : colspace(E) ⊆ support} under H.
inline bool syndrome_consistent(const ReductionParams& p, const DualInstance& inst, const Subspace& support) {
    return detail::consistent(p, detail::prepare(inst), support);
}

inline bool consistent_with_all(const ReductionParams& p, const HybridSample& sample, const Subspace& support) {
    return detail::consistent_with_all(p, detail::prepare_all(sample), support);
}

// "Real" iff one t-dimensional support explains every syndrome.
inline bool rank_statistic(const ReductionParams& p, const std::vector<Subspace>& supports,
                           const HybridSample& sample) {
    auto prepared = detail::prepare_all(sample);
    for (const auto& s : supports)
        if (detail::consistent_with_all(p, prepared, s)) return true;
    return false;
}

// Uses the statistic with probability 2·eps and answers a coin otherwise.
inline DistinguisherOracle rank_oracle(const ReductionParams& p, double eps) {
    if (eps < 0 || eps > 0.5) throw ValidationError("rank_oracle: advantage must lie in [0, 1/2]");
    auto supports = std::make_shared<std::vector<Subspace>>(enumerate_subspaces(p.m, p.t));
    double mix = 2 * eps;
    return {[p, supports, mix](const HybridSample& s, Expander& rng) {
                if (rng.uniform_real() < mix) return rank_statistic(p, *supports, s);
                return rng.next_bit();
            },
            eps};
}

inline DistinguisherOracle coin_oracle() {
    return {[](const HybridSample&, Expander& rng) { return rng.next_bit(); }, 0.0};
}

// Half the gap P(1 | H_hi) − P(1 | H_lo), each side estimated from fresh draws.
inline double measure_advantage(const ReductionParams& p, const DistinguisherOracle& oracle, std::size_t lo,
                                std::size_t hi, std::size_t samples, Expander& rng) {
    std::size_t ones_lo = 0, ones_hi = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        ones_lo += oracle.decide(sample_hybrid(p, lo, rng).sample, rng);
        ones_hi += oracle.decide(sample_hybrid(p, hi, rng).sample, rng);
    }
    return 0.5 * (double(ones_hi) - double(ones_lo)) / double(samples);
}

// ---- A′ ----

// The sample's first index instances are real; instance index−1 is the target.
// Returns the predicted bit e·r: oracle "real" means the embedded bit was 0.
inline bool a_prime(const ReductionParams& p, const HybridSample& sample, const BitMatrix& r,
                    const DistinguisherOracle& oracle, Expander& rng) {
    if (sample.index == 0 || sample.index > sample.instances.size())
        throw ShapeError("a_prime: target index out of range");
    if (r.rows() != 1 || r.cols() != p.length()) throw ShapeError("a_prime: r must have length mn");
    HybridSample modified = sample;
    DualInstance& target = modified.instances[sample.index - 1];
    BitMatrix u = random_matrix(1, p.syndrome_length(), rng);
    for (std::size_t i = 0; i < p.syndrome_length(); ++i)
        if (u.get(0, i)) target.h.xor_row_into(i, r.row(0));
    return !oracle.decide(modified, rng);
}

// Keeps the first index instances and replaces later syndromes by uniform ones.
inline HybridSample truncate_hybrid(const ReductionParams& p, const HybridSample& full, std::size_t index,
                                    Expander& rng) {
    HybridSample out = full;
    out.index = index;
    for (std::size_t j = index; j < out.instances.size(); ++j)
        out.instances[j].s = random_matrix(1, p.syndrome_length(), rng);
    return out;
}

// ---- Goldreich-Levin ----

inline constexpr std::size_t kMaxGlSeeds = 12;

// Smallest k with 2^k >= len/(2·eps²), capped so the list stays <= 2^12.
inline std::size_t gl_seed_count(std::size_t len, double eps) {
    if (!(eps > 0)) return kMaxGlSeeds;
    double need = std::log2(double(len) / (2 * eps * eps));
    return std::clamp<std::size_t>(std::size_t(std::ceil(std::max(need, 1.0))), 1, kMaxGlSeeds);
}

using Predictor = std::function<bool(const BitMatrix&)>;

struct GlOutput {
    std::vector<BitMatrix> candidates;
    std::size_t queries = 0;
};

// Pairwise-independent list decoder: for k seeds and every guess of their inner
// products, bit i is the majority of pred(r_J + e_i) + guess_J over subsets J.
inline GlOutput goldreich_levin(const Predictor& predict, std::size_t len, std::size_t seeds, Expander& rng) {
    if (seeds == 0 || seeds > kMaxGlSeeds) throw ShapeError("goldreich_levin: seed count out of range");
    const std::size_t subsets = (std::size_t(1) << seeds) - 1;
    BitMatrix base = random_matrix(seeds, len, rng);
    std::vector<BitMatrix> rs(subsets + 1, BitMatrix(1, len));
    for (std::size_t j = 1; j <= subsets; ++j) {
        rs[j] = rs[j & (j - 1)];
        rs[j].xor_row_into(0, base.row(std::countr_zero(j)));
    }
    // answers[i][J] = predict(r_J + e_i)
    std::vector<std::vector<bool>> answers(len, std::vector<bool>(subsets + 1));
    GlOutput out;
    for (std::size_t i = 0; i < len; ++i)
        for (std::size_t j = 1; j <= subsets; ++j) {
            BitMatrix q = rs[j];
            q.flip(0, i);
            answers[i][j] = predict(q);
            ++out.queries;
        }
    for (std::size_t guess = 0; guess <= subsets; ++guess) {
        BitMatrix cand(1, len);
        for (std::size_t i = 0; i < len; ++i) {
            std::size_t votes = 0;
            for (std::size_t j = 1; j <= subsets; ++j)
                votes += answers[i][j] ^ bool(std::popcount(j & guess) & 1);
            if (2 * votes > subsets) cand.set(0, i, true);
        }
        out.candidates.push_back(std::move(cand));
    }
    return out;
}

// ---- full reduction ----

struct DemoResult {
    std::optional<Subspace> support;
    std::optional<BitMatrix> error;
    std::size_t index = 0; // i0 at which a candidate validated
    std::size_t queries = 0;
};

// Public check only: rank <= t, matches the target syndrome, and its support
// explains every instance.
inline std::optional<Subspace> validate_candidate(const ReductionParams& p, const HybridSample& full,
                                                  std::size_t target, const BitMatrix& cand) {
    if (cand.is_zero()) return std::nullopt;
    BitMatrix e = rho_inv(cand, p.m, p.n);
    if (attack::codeword_rank(e) > p.t) return std::nullopt;
    if (!(syndrome(full.instances[target].h, cand) == full.instances[target].s)) return std::nullopt;
    Subspace s = Subspace::column_span(e);
    if (s.dim() != p.t || !consistent_with_all(p, full, s)) return std::nullopt;
    return s;
}

// Sweeps i0 = 1..N, builds H_{i0} from the full instance, runs A′ under GL and
// validates candidates against the public syndromes.
inline DemoResult full_reduction_demo(const ReductionParams& p, const HybridSample& full,
                                      const DistinguisherOracle& oracle, double assumed_eps, Expander& rng) {
    p.validate();
    DemoResult res;
    std::size_t seeds = gl_seed_count(p.length(), assumed_eps);
    for (std::size_t i0 = 1; i0 <= p.count; ++i0) {
        HybridSample hyb = truncate_hybrid(p, full, i0, rng);
        Predictor pred = [&](const BitMatrix& r) { return a_prime(p, hyb, r, oracle, rng); };
        GlOutput gl = goldreich_levin(pred, p.length(), seeds, rng);
        res.queries += gl.queries;
        for (const auto& cand : gl.candidates)
            if (auto s = validate_candidate(p, full, i0 - 1, cand)) {
                res.support = s;
                res.error = cand;
                res.index = i0;
                return res;
            }
    }
    return res;
}

} // namespace mrpke::reduction
