// Acceptance harness: one PASS/FAIL line per criterion, with the measured values.
// Usage: acceptance [--criterion N]...   (all criteria when none is given)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mrpke/mrpke.hpp"

using namespace mrpke;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(double v, int prec = 2) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(prec);
    os << v;
    return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- 1: sizes ----

Outcome sizes() {
    const std::size_t pk_ref[] = {14700, 35370, 62020}, ct_ref[] = {14158, 35365, 62700};
    bool ok = true;
    std::ostringstream os;
    for (std::size_t i = 0; i < 3; ++i) {
        const Params& p = parameter_sets()[i];
        bool pk_ok = p.pk_payload_bytes() == pk_ref[i], ct_ok = p.ct_payload_bytes() == ct_ref[i];
        ok &= pk_ok && ct_ok;
        os << p.name << " pk " << p.pk_payload_bytes() << (pk_ok ? "==" : "!=") << pk_ref[i] << " ct "
           << p.ct_payload_bytes() << (ct_ok ? "==" : "!=") << ct_ref[i] << "; ";
    }
    return {ok, os.str()};
}

// ---- 2: correctness ----

Outcome correctness() {
    bool ok = true;
    std::ostringstream os;
    for (const auto& p : parameter_sets()) {
        auto t0 = std::chrono::steady_clock::now();
        std::size_t fails = 0;
        const std::size_t trials = 1000;
        for (std::size_t i = 0; i < trials; ++i) {
            Seed seed = seed_from_u64(1000000 * p.id + i);
            Expander kg(seed, domain::keygen), mg(seed, kKatMessageDomain), eg(seed, domain::encrypt);
            KeyPair kp = keygen(p, kg);
            Message msg = random_message(p, mg);
            try {
                fails += decrypt(p, kp.sk, encrypt(p, kp.pk, msg, eg)) != msg;
            } catch (const DecryptError&) {
                ++fails;
            }
        }
        ok &= fails == 0;
        os << p.name << " " << fails << "/" << trials << " failures (" << fmt(seconds_since(t0), 1) << " s); ";
    }
    return {ok, os.str()};
}

// ---- 3: shared-support rank bound ----

Outcome shared_support_bound() {
    Expander rng(seed_from_u64(3003));
    std::size_t violations = 0, tight = 0;
    const std::size_t trials = 10000;
    for (std::size_t t = 0; t < trials; ++t) {
        std::size_t m = 4 + rng.uniform(13), n = 4 + rng.uniform(13);
        std::size_t r = 1 + rng.uniform(3), d = 1 + rng.uniform(3);
        std::size_t l1 = r * d + 1 + rng.uniform(6), l2 = r * d + 1 + rng.uniform(6);
        Subspace cs = sample_support(m, r, rng), rs = sample_support(n, d, rng);
        std::vector<BitMatrix> es, fs;
        for (std::size_t j = 0; j < l1; ++j) es.push_back(sample_error_column_support(cs, n, rng).matrix);
        for (std::size_t i = 0; i < l2; ++i) fs.push_back(sample_error_row_support(rs, m, rng).matrix);
        std::size_t rk = rank(inner_product_matrix(es, fs));
        std::size_t bound = std::min({r * d, l1, l2});
        violations += rk > bound;
        tight += rk == bound;
    }
    return {violations == 0, std::to_string(violations) + " violations in " + std::to_string(trials) +
                                 " instances (bound attained in " + std::to_string(tight) + ")"};
}

// ---- 4: one-bit failure rate ----

Outcome onebit_rates() {
    const std::size_t trials = 10000;
    std::vector<double> freq;
    bool ok = true;
    std::ostringstream os;
    for (std::size_t l2 = 4; l2 <= 7; ++l2) {
        OneBitParams p = OneBitParams::uniform(16, 2, 8, l2, 2, 1, 1);
        Expander rng(seed_from_u64(4000 + l2));
        std::size_t miss = 0, zero_fail = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            OneBitKeyPair kp = ob_keygen(p, rng);
            miss += !ob_decrypt(p, kp.sk, ob_encrypt(p, kp.pk, true, rng)).bit;
            if (t < 1000) zero_fail += ob_decrypt(p, kp.sk, ob_encrypt(p, kp.pk, false, rng)).bit;
        }
        double f = double(miss) / double(trials), bound = std::ldexp(1.0, int(p.r * p.d + 1) - int(l2));
        bool within = f >= bound / 4 && f <= bound * 4;
        ok &= within && zero_fail == 0;
        freq.push_back(f);
        os << "l2=" << l2 << " rate " << fmt(f, 4) << " bound " << fmt(bound, 4) << (within ? "" : " (outside x4)")
           << "; ";
        if (zero_fail) os << "enc(0) failures " << zero_fail << "; ";
    }
    for (std::size_t i = 1; i < freq.size(); ++i) {
        double ratio = freq[i - 1] > 0 ? freq[i] / freq[i - 1] : 0;
        bool halves = ratio >= 0.5 * 0.7 && ratio <= 0.5 * 1.3;
        ok &= halves;
        os << "ratio " << fmt(ratio, 3) << (halves ? "" : " (not halving)") << "; ";
    }
    return {ok, os.str()};
}

// ---- 5: estimator ----

Outcome estimator_table() {
    const double ref[3][3] = {{150, 150, 150}, {226, 207, 249}, {298, 272, 325}};
    auto t0 = std::chrono::steady_clock::now();
    auto rows = est::table_reproduce(2.8);
    bool ok = true;
    std::ostringstream os;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const est::CostReport* reps[3] = {&rows[i].kernel, &rows[i].support_minors, &rows[i].minors};
        os << rows[i].name << " ";
        for (int a = 0; a < 3; ++a) {
            bool in = std::abs(reps[a]->bits - ref[i][a]) <= 5.0;
            ok &= in;
            os << est::attack_name(reps[a]->attack) << " " << fmt(reps[a]->bits, 1) << (in ? "~" : "!~")
               << ref[i][a] << " [" << reps[a]->side << "] ";
        }
        os << "; ";
    }
    os << "(" << fmt(seconds_since(t0), 1) << " s)";
    return {ok, os.str()};
}

// ---- 6: counting oracles ----

long count_rank_exhaustive(long t, long n, long w) {
    long c = 0;
    for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << (t * n)); ++bits) {
        std::vector<std::uint64_t> rows(t);
        for (long i = 0; i < t; ++i) rows[i] = (bits >> (i * n)) & ((std::uint64_t(1) << n) - 1);
        c += long(attack::rank_small(rows)) == w;
    }
    return c;
}

// Subspaces of F_2^m as membership bitmasks, grown by closure from {0}.
std::vector<std::size_t> count_subspaces_by_closure(unsigned m) {
    std::set<std::uint64_t> seen{1};
    std::vector<std::uint64_t> frontier{1};
    while (!frontier.empty()) {
        std::vector<std::uint64_t> next;
        for (std::uint64_t s : frontier)
            for (unsigned v = 1; v < (1u << m); ++v) {
                if ((s >> v) & 1) continue;
                std::uint64_t grown = s;
                for (unsigned x = 0; x < (1u << m); ++x)
                    if ((s >> x) & 1) grown |= std::uint64_t(1) << (x ^ v);
                if (seen.insert(grown).second) next.push_back(grown);
            }
        frontier = std::move(next);
    }
    std::vector<std::size_t> by_dim(m + 1, 0);
    for (std::uint64_t s : seen) by_dim[std::countr_zero(std::uint64_t(std::popcount(s)))]++;
    return by_dim;
}

Outcome counting() {
    std::size_t checks = 0, bad = 0;
    for (long t = 1; t <= 12; ++t)
        for (long n = 1; t * n <= 12; ++n)
            for (long w = 0; w <= std::min(t, n); ++w) {
                ++checks;
                bad += est::rank_count(t, n, w, 2) != count_rank_exhaustive(t, n, w);
            }
    for (unsigned m = 1; m <= 5; ++m) {
        auto by_dim = count_subspaces_by_closure(m);
        for (unsigned t = 0; t <= m; ++t) {
            ++checks;
            bad += est::qbinom(m, t, 2) != by_dim[t];
        }
    }
    return {bad == 0, std::to_string(checks - bad) + "/" + std::to_string(checks) + " exact matches"};
}

// ---- 7: kernel-attack calibration ----

Outcome kernel_calibration() {
    struct Shape {
        std::size_t m, n, dim, t;
    };
    const Shape grid[] = {{6, 6, 6, 1}, {6, 6, 12, 1}, {8, 8, 8, 2}, {8, 8, 16, 2}, {10, 10, 10, 3}};
    double log_sum = 0;
    std::ostringstream os;
    bool ok = true;
    for (const auto& s : grid) {
        Expander rng(seed_from_u64(7000 + s.m * 100 + s.dim));
        double total = 0;
        std::size_t failures = 0;
        for (int i = 0; i < 200; ++i) {
            auto inst = attack::random_minrank_instance(s.m, s.n, s.dim, s.t, rng);
            auto res = attack::kernel_attack(inst, rng, std::size_t(1) << 16);
            failures += !res.found();
            if (res.found() && (rank(*res.solution) > s.t || !inst.code.contains(*res.solution))) ok = false;
            total += double(res.iterations);
        }
        double mean = total / 200, pred = std::ldexp(1.0, int(s.t * ((s.dim + s.m - 1) / s.m)));
        log_sum += std::log(mean / pred);
        os << "(" << s.m << "," << s.n << "," << s.dim << "," << s.t << ") mean " << fmt(mean) << " vs " << pred;
        if (failures) os << " [" << failures << " exhausted]";
        os << "; ";
    }
    double geo = std::exp(log_sum / 5);
    ok &= geo >= 0.25 && geo <= 4;
    os << "geometric ratio " << fmt(geo, 3);
    return {ok, os.str()};
}

// ---- 8: shortening and rank-reduction combinations ----

Outcome combinations() {
    bool ok = true;
    std::ostringstream os;
    struct Short {
        std::size_t m, n, N, t;
    };
    for (const auto& s : {Short{6, 6, 5, 2}, Short{6, 6, 4, 1}, Short{8, 8, 7, 3}, Short{8, 8, 9, 2}}) {
        Expander rng(seed_from_u64(8000 + s.m * 10 + s.N));
        int hits = 0;
        for (int i = 0; i < 100; ++i) hits += attack::verify_shortening(attack::sample_msl(s.m, s.n, 8, s.N, s.t, rng));
        ok &= hits == 100;
        os << "shorten(m" << s.m << " n" << s.n << " N" << s.N << " t" << s.t << " a"
           << attack::shortening_columns(s.N, s.t) << ") " << hits << "/100; ";
    }
    struct Reduce {
        std::size_t m, n, t, delta, N;
    };
    const Reduce grid[] = {{6, 6, 2, 1, 5}, {6, 6, 2, 1, 6}, {6, 6, 3, 1, 4}, {6, 6, 3, 1, 5},
                           {8, 8, 2, 1, 7}, {8, 8, 2, 1, 8}, {5, 5, 2, 1, 4}};
    for (const auto& s : grid) {
        Expander rng(seed_from_u64(8500 + s.m * 100 + s.t * 10 + s.N));
        int hits = 0;
        for (int i = 0; i < 100; ++i)
            hits += attack::verify_rank_reduction(attack::sample_msl(s.m, s.n, 8, s.N, s.t, rng), s.delta);
        std::size_t need = s.delta * (s.n - s.t + s.delta);
        ok &= hits >= 95;
        os << "rank" << (s.t - s.delta) << "(m" << s.m << " n" << s.n << " t" << s.t << " N" << s.N << ", N-"
           << need << "=" << long(s.N) - long(need) << ") " << hits << "/100; ";
    }
    return {ok, os.str()};
}

// ---- 9: Gabidulin decoder ----

Outcome gabidulin() {
    bool ok = true;
    std::ostringstream os;
    for (unsigned len : {8u, 35u}) {
        Expander rng(seed_from_u64(9000 + len));
        GabidulinCode c = GabidulinCode::from_rng(len, len, 3, rng);
        std::size_t wrong = 0, missed = 0, silent = 0, beyond = 0;
        auto msg_of = [&] {
            std::vector<FieldElement> m(3);
            for (auto& e : m) e = c.field().random(rng);
            return m;
        };
        auto error_of = [&](std::size_t w) {
            if (w == 0) return BitMatrix(len, len);
            return mul(random_full_rank(len, w, rng), random_full_rank(w, len, rng));
        };
        for (std::size_t w = 0; w <= c.radius(); ++w)
            for (int t = 0; t < 1000; ++t) {
                auto msg = msg_of();
                auto out = c.decode(c.encode(msg) ^ error_of(w));
                if (!out) ++missed;
                else if (*out != msg) ++wrong;
            }
        // past the radius: any returned message must re-encode within the radius
        for (std::size_t w = c.radius() + 1; w <= std::min<std::size_t>(c.radius() + 3, len); ++w)
            for (int t = 0; t < 1000; ++t) {
                BitMatrix y = c.encode(msg_of()) ^ error_of(w);
                auto out = c.decode(y);
                if (!out) continue;
                ++beyond;
                silent += rank(y ^ c.encode(*out)) > c.radius();
            }
        ok &= wrong == 0 && missed == 0 && silent == 0;
        os << "(" << len << ",3) radius " << c.radius() << ": " << (c.radius() + 1) * 1000 << " decodes, " << missed
           << " missed, " << wrong << " wrong; past radius " << beyond << " returns, " << silent << " unverified; ";
    }
    return {ok, os.str()};
}

// ---- 10: search-to-decision demo ----

Outcome reduction_demo() {
    using namespace reduction;
    const ReductionParams p{6, 6, 12, 1, 3};
    std::ostringstream os;
    bool ok = true;
    auto t0 = std::chrono::steady_clock::now();

    Expander rng(seed_from_u64(10010));
    auto strong = rank_oracle(p, 0.4);
    double adv = measure_advantage(p, strong, 0, p.count, 10000, rng);
    ok &= adv >= 0.2;
    os << "rank oracle advantage " << fmt(adv, 3) << "; ";

    auto run = [&](const DistinguisherOracle& oracle, double eps, int trials, std::uint64_t tag) {
        Expander r(seed_from_u64(tag));
        int hit = 0, false_hit = 0;
        for (int t = 0; t < trials; ++t) {
            HybridDraw d = sample_hybrid(p, p.count, r);
            DemoResult res = full_reduction_demo(p, d.sample, oracle, eps, r);
            if (res.support) (*res.support == d.support ? hit : false_hit)++;
        }
        return std::pair{hit, false_hit};
    };

    auto [hit, wrong] = run(strong, 0.4, 100, 10020);
    ok &= hit >= 80;
    os << "recovered " << hit << "/100 (" << wrong << " wrong); ";

    auto [coin_hit, coin_wrong] = run(coin_oracle(), 0.4, 100, 10030);
    ok &= coin_hit + coin_wrong <= 5;
    os << "coin oracle successes " << coin_hit + coin_wrong << "/100; ";

    // qualitative Ω(ε²): every rate bounded below by c·ε² with a common c > 0, and no drop as ε grows
    double c = std::numeric_limits<double>::infinity(), prev = -1;
    bool monotone = true;
    for (double eps : {0.1, 0.25, 0.5}) {
        auto [h, w] = run(rank_oracle(p, eps), eps, 20, 10040 + std::uint64_t(eps * 100));
        double rate = double(h) / 20;
        c = std::min(c, rate / (eps * eps));
        monotone &= rate + 0.1 >= prev;
        prev = rate;
        os << "eps " << eps << " rate " << fmt(rate) << "; ";
    }
    ok &= c > 0 && monotone;
    os << "fitted c " << fmt(c, 2) << " (" << fmt(seconds_since(t0), 1) << " s)";
    return {ok, os.str()};
}

// ---- 11: timing ----

Outcome performance() {
    const Params& p = params_by_name("mrpke-1");
    const std::size_t iters = 31;
    std::vector<double> kg, enc, dec;
    for (std::size_t i = 0; i < iters; ++i) {
        Seed s = seed_from_u64(11000 + i);
        Expander kr(s, domain::keygen), mr(s, kKatMessageDomain), er(s, domain::encrypt);
        auto t0 = std::chrono::steady_clock::now();
        KeyPair kp = keygen(p, kr);
        kg.push_back(seconds_since(t0) * 1e3);
        Message msg = random_message(p, mr);
        t0 = std::chrono::steady_clock::now();
        Ciphertext ct = encrypt(p, kp.pk, msg, er);
        enc.push_back(seconds_since(t0) * 1e3);
        t0 = std::chrono::steady_clock::now();
        Message out = decrypt(p, kp.sk, ct);
        dec.push_back(seconds_since(t0) * 1e3);
        if (out != msg) return {false, "round trip failed during timing"};
    }
    auto median = [](std::vector<double> v) {
        std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
        return v[v.size() / 2];
    };
    double a = median(kg), b = median(enc), c = median(dec);
    bool ok = a < 500 && b < 500 && c < 500 && c < b;
    return {ok, "median keygen " + fmt(a) + " ms, encrypt " + fmt(b) + " ms, decrypt " + fmt(c) + " ms"};
}

const std::vector<std::pair<const char*, std::function<Outcome()>>>& criteria() {
    static const std::vector<std::pair<const char*, std::function<Outcome()>>> list = {
        {"payload sizes", sizes},
        {"round-trip correctness", correctness},
        {"shared-support rank bound", shared_support_bound},
        {"one-bit failure rate", onebit_rates},
        {"estimator table", estimator_table},
        {"counting oracles", counting},
        {"kernel-attack calibration", kernel_calibration},
        {"shortening and rank-reduction combinations", combinations},
        {"Gabidulin decoder", gabidulin},
        {"search-to-decision demo", reduction_demo},
        {"performance", performance},
    };
    return list;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::size_t> selected;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            selected.push_back(std::stoul(argv[++i]));
        } else {
            std::cerr << "usage: acceptance [--criterion N]...\n";
            return 2;
        }
    }
    if (selected.empty())
        for (std::size_t i = 1; i <= criteria().size(); ++i) selected.push_back(i);

    int failed = 0;
    for (std::size_t id : selected) {
        if (id < 1 || id > criteria().size()) {
            std::cerr << "no criterion " << id << "\n";
            return 2;
        }
        const auto& [name, fn] = criteria()[id - 1];
        Outcome o = fn();
        failed += !o.pass;
        std::cout << "criterion " << id << " (" << name << "): " << (o.pass ? "PASS" : "FAIL") << ": " << o.detail
                  << std::endl;
    }
    return failed ? 1 : 0;
}
