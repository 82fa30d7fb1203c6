#pragma once

// Attack-cost models for MSL / MinRank in log2 bits. Counting is exact with
// big integers; conversion to log2 happens only when a cost is reported.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "mrpke/errors.hpp"
#include "mrpke/pke.hpp"

namespace mrpke::est {

using BigInt = boost::multiprecision::cpp_int;

struct MslShape {
    long q, m, n, N, k, t;
};

struct MinRankShape {
    long q, m, n, k, t;
    bool operator==(const MinRankShape&) const = default;
};

enum class Attack { Kernel, SupportMinors, Minors };

inline const char* attack_name(Attack a) {
    switch (a) {
    case Attack::Kernel: return "Kernel";
    case Attack::SupportMinors: return "SupportMinors";
    case Attack::Minors: return "Minors";
    }
    return "?";
}

struct CostReport {
    Attack attack = Attack::Kernel;
    double bits = std::numeric_limits<double>::infinity();
    long delta = 0, a = 0, l = 0, v = 0;
    long b = -1;      // Support Minors linearisation degree
    long degree = -1; // Minors: D = deg HS + 1
    MinRankShape reduced{};
    double omega = 2.8;
    std::string side;

    bool valid() const { return std::isfinite(bits); }
};

inline double log2_big(const BigInt& x) {
    if (x <= 0) return -std::numeric_limits<double>::infinity();
    std::size_t msb = boost::multiprecision::msb(x);
    if (msb < 60) return std::log2(static_cast<double>(x.convert_to<unsigned long long>()));
    BigInt top = x >> (msb - 60);
    return double(msb - 60) + std::log2(static_cast<double>(top.convert_to<unsigned long long>()));
}

inline BigInt binom(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline BigInt power(long q, long e) {
    BigInt r = 1;
    for (long i = 0; i < e; ++i) r *= q;
    return r;
}

// Number of t-dimensional subspaces of F_q^m.
inline BigInt qbinom(long m, long t, long q) {
    if (t < 0 || t > m) return 0;
    BigInt num = 1, den = 1;
    for (long i = 0; i < t; ++i) {
        num *= power(q, m - i) - 1;
        den *= power(q, i + 1) - 1;
    }
    return num / den;
}

// Number of t×n matrices of rank w over F_q.
inline BigInt rank_count(long t, long n, long w, long q) {
    if (w < 0 || w > std::min(t, n)) return 0;
    BigInt r = qbinom(n, w, q);
    BigInt qt = power(q, t);
    for (long i = 0; i < w; ++i) r *= qt - power(q, i);
    return r;
}

inline double expected_solutions(const MslShape& s) {
    double lq = std::log2(double(s.q));
    return log2_big(qbinom(s.m, s.t, s.q)) + lq * double(s.t * s.n * s.N) - lq * double(s.N * (s.m * s.n - s.k));
}

inline long residual_multiplicity(const MslShape& s, long delta, long a) {
    return s.N - delta * (s.n - s.t + delta) - a * (s.t - delta);
}

inline MinRankShape msl_reduce(const MslShape& s, long delta, long a) {
    if (delta < 0 || delta > s.t || a < 0 || a > s.n)
        throw InvalidReduction("msl_reduce: delta or a out of range");
    if (residual_multiplicity(s, delta, a) < 1)
        throw InvalidReduction("msl_reduce: need N - delta(n-t+delta) - a(t-delta) >= 1");
    long k = s.k - a * s.m + delta * (s.n - s.t + delta) + a * (s.t - delta);
    return {s.q, s.m, s.n - a, std::max(k, 0L), s.t - delta};
}

// Largest a accepted by msl_reduce for this delta, or -1 when none is.
inline long max_shortening(const MslShape& s, long delta) {
    long base = delta * (s.n - s.t + delta);
    if (s.N - base < 1) return -1;
    if (s.t == delta) return s.n;
    return std::min((s.N - 1 - base) / (s.t - delta), s.n);
}

inline double kernel_cost(const MinRankShape& s, double omega) {
    double dim = double(std::max(s.k, 1L));
    long cols = s.k > 0 ? (s.k + s.m - 1) / s.m : 0;
    return omega * std::log2(dim) + double(s.t * cols) * std::log2(double(s.q));
}

// Counts of Support Minors equations and monomials at bi-degree (1, b), generic q.
inline std::pair<BigInt, BigInt> sm_counts(const MinRankShape& s, long b) {
    BigInt nb = 0;
    for (long i = 1; i <= b; ++i) {
        BigInt term = binom(s.n, s.t + i) * binom(s.k + b - 1 - i, b - i) * binom(s.m + i - 1, i);
        if (i % 2) nb += term;
        else nb -= term;
    }
    return {nb, binom(s.k + b - 1, b) * binom(s.n, s.t)};
}

// q = 2 variant: square-free monomials, C(K, b') in place of C(K+b'-1, b').
inline std::pair<BigInt, BigInt> sm_counts_f2(const MinRankShape& s, long b) {
    BigInt nb = 0;
    for (long i = 1; i <= b; ++i) {
        BigInt term = binom(s.n, s.t + i) * binom(s.k, b - i) * binom(s.m + i - 1, i);
        if (i % 2) nb += term;
        else nb -= term;
    }
    return {nb, binom(s.k, b) * binom(s.n, s.t)};
}

struct Linearization {
    long b;
    BigInt equations, monomials;
};

// First b in [1, t+1] whose cumulative counts satisfy N_<=b >= M_<=b - 1.
inline std::optional<Linearization> sm_linearize(const MinRankShape& s) {
    if (s.t < 1 || s.k < 1) return std::nullopt;
    BigInt ns = 0, ms = 0;
    for (long b = 1; b < s.t + 2; ++b) {
        auto [nb, mb] = s.q == 2 ? sm_counts_f2(s, b) : sm_counts(s, b);
        ns += nb;
        ms += mb;
        if (ms > 0 && ns >= ms - 1) return Linearization{b, ns, ms};
    }
    return std::nullopt;
}

inline double sm_base_cost(const Linearization& lin) {
    return std::max(0.0, log2_big(lin.equations)) + log2_big(lin.monomials);
}

// ---- Minors / Hilbert series ----

namespace detail {

using Series = std::vector<BigInt>;

inline Series series_mul(const Series& a, const Series& b, std::size_t len) {
    Series r(std::min(len, a.size() + b.size() - 1), 0);
    for (std::size_t i = 0; i < a.size() && i < r.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size() && i + j < r.size(); ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

// det A(x) mod x^len, A_ij = sum_l C(m-i, l) C(n-j, l) x^l for i, j in [1, t].
// Expansion over column subsets keeps the cost at t·2^t series products.
inline Series minors_det(long m, long n, long t, std::size_t len) {
    std::vector<std::vector<Series>> a(t, std::vector<Series>(t));
    for (long i = 1; i <= t; ++i)
        for (long j = 1; j <= t; ++j) {
            long top = std::min({m - i, n - j, long(len) - 1});
            Series e;
            for (long l = 0; l <= top; ++l) e.push_back(binom(m - i, l) * binom(n - j, l));
            a[i - 1][j - 1] = e;
        }
    std::vector<Series> dp(std::size_t(1) << t);
    dp[0] = Series{1};
    for (std::size_t mask = 1; mask < dp.size(); ++mask) {
        int row = std::popcount(mask) - 1;
        Series acc(len, 0);
        for (long c = 0; c < t; ++c) {
            if (!((mask >> c) & 1)) continue;
            std::size_t rest = mask & ~(std::size_t(1) << c);
            int above = std::popcount(mask >> (c + 1));
            Series term = series_mul(a[row][c], dp[rest], len);
            for (std::size_t i = 0; i < term.size(); ++i) {
                if (above % 2) acc[i] -= term[i];
                else acc[i] += term[i];
            }
        }
        dp[mask] = std::move(acc);
    }
    return dp.back();
}

struct DetCache {
    std::map<std::tuple<long, long, long>, Series> store;

    const Series& get(long m, long n, long t, std::size_t len) {
        auto key = std::make_tuple(m, n, t);
        auto it = store.find(key);
        if (it == store.end() || it->second.size() < len) {
            store[key] = minors_det(m, n, t, len);
            it = store.find(key);
        }
        return it->second;
    }
};

} // namespace detail

// Hilbert-series degree bound D = deg[HS] + 1 for a MinRank(m, n, K, t) Minors system,
// where [·] truncates before the first non-positive coefficient.
inline long minors_degree(const MinRankShape& s, detail::DetCache* cache = nullptr) {
    if (s.t < 1) throw DegenerateSeries("minors: t must be positive");
    long e = (s.m - s.t) * (s.n - s.t) - (s.k + 1);
    if (e < 0) throw DegenerateSeries("minors: series has no non-positive coefficient (positive-dimensional)");
    long c2 = s.t * (s.t - 1) / 2;
    long det_deg = 0;
    for (long i = 1; i <= s.t; ++i) det_deg += std::min(s.m - i, s.n - i);
    long hs_len = e + det_deg - c2 + 1; // HS is a polynomial of this many coefficients
    detail::DetCache local;
    detail::DetCache& dc = cache ? *cache : local;
    for (std::size_t window = 64;; window *= 2) {
        std::size_t len = std::min<std::size_t>(window + c2, det_deg + 1);
        const detail::Series& d = dc.get(s.m, s.n - 0, s.t, len);
        long avail = long(std::min(len, d.size())) - c2;
        // (1-x)^e coefficients, generated incrementally.
        std::vector<BigInt> p;
        BigInt pj = 1;
        for (long i = 0; i < avail && i <= hs_len; ++i) {
            p.push_back(pj);
            pj = -pj * (e - i) / (i + 1);
            BigInt si = 0;
            for (long j = 0; j <= i; ++j) {
                long idx = c2 + i - j;
                if (idx < long(d.size())) si += p[j] * d[idx];
            }
            if (si <= 0) {
                if (i == 0) throw DegenerateSeries("minors: truncated Hilbert series is empty");
                return i;
            }
        }
        if (long(len) >= det_deg + 1 && avail > hs_len) return hs_len;
        if (long(len) >= det_deg + 1) return avail;
    }
}

inline double minors_base_cost(const MinRankShape& s, long degree, double omega) {
    return omega * log2_big(binom(s.k + degree, degree));
}

// ---- hybrid optimisation over (l, v) ----

namespace detail {

template <class Eval>
void hybrid_search(const MinRankShape& s, double lq, CostReport& best, Eval&& eval) {
    for (long l = 0; l <= s.n - s.t; ++l) {
        double lcost = double(l * s.t) * lq;
        if (lcost >= best.bits) break;
        for (long v = 0;; ++v) {
            long k = s.k - l * s.m - v;
            if (k < 1 && !(l == 0 && v == 0)) break;
            double base = lcost + double(v) * lq;
            if (base >= best.bits) break;
            MinRankShape h{s.q, s.m, s.n - l, std::max(k, 0L), s.t};
            eval(h, base, l, v);
        }
    }
}

} // namespace detail

inline CostReport kernel_best(const MinRankShape& s, double omega) {
    CostReport best;
    best.attack = Attack::Kernel;
    best.omega = omega;
    double lq = std::log2(double(s.q));
    detail::hybrid_search(s, lq, best, [&](const MinRankShape& h, double base, long l, long v) {
        double c = base + kernel_cost(h, omega);
        if (c < best.bits) {
            best.bits = c;
            best.l = l;
            best.v = v;
            best.reduced = s;
        }
    });
    return best;
}

inline CostReport sm_cost(const MinRankShape& s, double omega) {
    CostReport best;
    best.attack = Attack::SupportMinors;
    best.omega = omega;
    if (s.t < 1) throw NoLinearization("support minors: t must be positive");
    double lq = std::log2(double(s.q));
    detail::hybrid_search(s, lq, best, [&](const MinRankShape& h, double base, long l, long v) {
        auto lin = sm_linearize(h);
        if (!lin) return;
        double c = base + sm_base_cost(*lin);
        if (c < best.bits) {
            best.bits = c;
            best.l = l;
            best.v = v;
            best.b = lin->b;
            best.reduced = s;
        }
    });
    if (!best.valid()) throw NoLinearization("support minors: no b < t+2 linearises");
    return best;
}

inline CostReport minors_cost(const MinRankShape& s, double omega, detail::DetCache* cache = nullptr) {
    CostReport best;
    best.attack = Attack::Minors;
    best.omega = omega;
    if (s.t < 1) throw DegenerateSeries("minors: t must be positive");
    detail::DetCache local;
    detail::DetCache& dc = cache ? *cache : local;
    double lq = std::log2(double(s.q));
    detail::hybrid_search(s, lq, best, [&](const MinRankShape& h, double base, long l, long v) {
        if (h.k < 1) return;
        long deg;
        try {
            deg = minors_degree(h, &dc);
        } catch (const DegenerateSeries&) {
            return;
        }
        double c = base + minors_base_cost(h, deg, omega);
        if (c < best.bits) {
            best.bits = c;
            best.l = l;
            best.v = v;
            best.degree = deg;
            best.reduced = s;
        }
    });
    if (!best.valid()) throw DegenerateSeries("minors: no hybrid choice yields a finite series");
    return best;
}

// Best cost of one attack over all MSL reductions (delta, a) and hybrid choices.
inline CostReport best_of(Attack attack, const MslShape& s, double omega) {
    CostReport best;
    best.attack = attack;
    best.omega = omega;
    detail::DetCache cache;
    for (long delta = 0; delta <= s.t; ++delta) {
        long amax = max_shortening(s, delta);
        for (long a = 0; a <= amax; ++a) {
            MinRankShape r;
            try {
                r = msl_reduce(s, delta, a);
            } catch (const InvalidReduction&) {
                continue;
            }
            CostReport c;
            try {
                switch (attack) {
                case Attack::Kernel: c = kernel_best(r, omega); break;
                case Attack::SupportMinors: c = sm_cost(r, omega); break;
                case Attack::Minors: c = minors_cost(r, omega, &cache); break;
                }
            } catch (const NoLinearization&) {
                continue;
            } catch (const DegenerateSeries&) {
                continue;
            }
            if (c.bits < best.bits) {
                best = c;
                best.delta = delta;
                best.a = a;
            }
        }
    }
    return best;
}

inline MslShape key_side(const Params& p) {
    return {2, long(p.m), long(p.n), long(p.l1), long(p.k), long(p.r)};
}

inline MslShape ciphertext_side(const Params& p) {
    return {2, long(p.m), long(p.n), long(p.l2), long(p.mn() - p.k - p.l1), long(p.d)};
}

// Minimum over the key-recovery and ciphertext-side MSL instances.
inline CostReport best_for_params(Attack attack, const Params& p, double omega) {
    CostReport key = best_of(attack, key_side(p), omega);
    CostReport ct = best_of(attack, ciphertext_side(p), omega);
    key.side = "key";
    ct.side = "ciphertext";
    return key.bits <= ct.bits ? key : ct;
}

inline CostReport best_attack(const MslShape& s, double omega) {
    CostReport best;
    for (Attack a : {Attack::Kernel, Attack::SupportMinors, Attack::Minors}) {
        CostReport c = best_of(a, s, omega);
        if (c.bits < best.bits) best = c;
    }
    return best;
}

inline long poly_threshold(const MslShape& s) {
    long num = s.k * s.t + s.m, den = s.m - 1;
    return (num + den - 1) / den;
}

// Single-instance MinRank (one noisy codeword, no MSL reductions).
inline CostReport stationary_note(const MinRankShape& s, double omega) {
    return best_attack({s.q, s.m, s.n, 1, s.k, s.t}, omega);
}

struct TableRow {
    std::string name;
    CostReport kernel, support_minors, minors;
    std::size_t pk_bytes, ct_bytes;

    const CostReport& best() const {
        const CostReport* b = &kernel;
        if (support_minors.bits < b->bits) b = &support_minors;
        if (minors.bits < b->bits) b = &minors;
        return *b;
    }
};

inline TableRow table_row(const Params& p, double omega) {
    return {p.name,
            best_for_params(Attack::Kernel, p, omega),
            best_for_params(Attack::SupportMinors, p, omega),
            best_for_params(Attack::Minors, p, omega),
            p.pk_payload_bytes(),
            p.ct_payload_bytes()};
}

inline std::vector<TableRow> table_reproduce(double omega = 2.8) {
    std::vector<TableRow> rows;
    for (const auto& p : parameter_sets()) rows.push_back(table_row(p, omega));
    return rows;
}

} // namespace mrpke::est
