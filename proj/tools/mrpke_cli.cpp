// mrpke command-line tool. Exit codes: 0 ok, 1 validation, 2 I/O, 3 decryption failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "mrpke/mrpke.hpp"

using namespace mrpke;
using json = nlohmann::json;

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return Bytes(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::string& path, const Bytes& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(data.data()), std::streamsize(data.size()));
    if (!out) throw IoError("short write to " + path);
}

Seed resolve_seed(const std::string& hex) {
    if (hex.empty()) {
        Seed s = os_seed();
        std::cerr << "seed: " << to_hex(s) << "\n";
        return s;
    }
    if (hex.size() != 64) throw ValidationError("--seed must be 64 hex characters");
    Bytes b;
    try {
        b = from_hex(hex);
    } catch (const FormatError&) {
        throw ValidationError("--seed is not valid hex");
    }
    Seed s;
    std::copy(b.begin(), b.end(), s.begin());
    return s;
}

const Params& lookup(const std::string& name) {
    try {
        return params_by_name(name);
    } catch (const std::exception&) {
        throw ValidationError("unknown parameter set " + name);
    }
}

std::vector<std::size_t> parse_tuple(const std::string& text, std::size_t arity, const char* what) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stoul(item));
        } catch (const std::exception&) {
            throw ValidationError(std::string(what) + ": expected comma-separated integers");
        }
    }
    if (out.size() != arity) throw ValidationError(std::string(what) + ": wrong number of fields");
    return out;
}

json report_json(const est::CostReport& c) {
    return {{"attack", est::attack_name(c.attack)}, {"bits", c.bits}, {"delta", c.delta}, {"a", c.a},
            {"l", c.l},           {"v", c.v},       {"b", c.b},         {"side", c.side}};
}

json row_json(const est::TableRow& row) {
    return {{"set", row.name},
            {"Kernel", report_json(row.kernel)},
            {"SupportMinors", report_json(row.support_minors)},
            {"Minors", report_json(row.minors)},
            {"best_bits", row.best().bits},
            {"pk_bytes", row.pk_bytes},
            {"ct_bytes", row.ct_bytes}};
}

json params_json(const Params& p) {
    ParamReport rep = validate_params(p);
    return {{"set", p.name},          {"lambda", p.lambda},
            {"m", p.m},               {"n", p.n},
            {"k", p.k},               {"r", p.r},
            {"d", p.d},               {"l1", p.l1},
            {"l2", p.l2},             {"kappa", p.kappa},
            {"pk_bytes", p.pk_payload_bytes()},
            {"ct_bytes", p.ct_payload_bytes()},
            {"gv_radius", rep.gv_radius},
            {"decoder_margin", rep.decoder_margin}};
}

template <class F>
double median_ms(std::size_t iters, F&& op) {
    std::vector<double> t;
    for (std::size_t i = 0; i < iters; ++i) {
        auto t0 = std::chrono::steady_clock::now();
        op(i);
        t.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
    }
    std::nth_element(t.begin(), t.begin() + t.size() / 2, t.end());
    return t[t.size() / 2];
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"MinRank-based public-key encryption: keys, KATs, estimators and demos"};
    app.require_subcommand(1);

    std::string set = "mrpke-1", seed_hex, pk_path, sk_path, in_path, out_path;
    bool as_json = false;

    auto* kg = app.add_subcommand("keygen", "generate a key pair");
    kg->add_option("--params", set)->capture_default_str();
    kg->add_option("--seed", seed_hex, "64 hex chars");
    kg->add_option("--pk", pk_path)->required();
    kg->add_option("--sk", sk_path)->required();

    auto* enc = app.add_subcommand("encrypt", "encrypt a message file (or a random message)");
    enc->add_option("--pk", pk_path)->required();
    enc->add_option("--in", in_path, "message file; random when absent");
    std::string msg_out;
    enc->add_option("--msg-out", msg_out, "where to store a random message");
    enc->add_option("--out", out_path)->required();
    enc->add_option("--seed", seed_hex);

    auto* dec = app.add_subcommand("decrypt", "decrypt a ciphertext file");
    dec->add_option("--sk", sk_path)->required();
    dec->add_option("--in", in_path)->required();
    dec->add_option("--out", out_path)->required();

    std::size_t kat_count = 16;
    auto* katg = app.add_subcommand("kat-gen", "write known-answer tests");
    katg->add_option("--params", set)->capture_default_str();
    katg->add_option("--count", kat_count)->capture_default_str();
    katg->add_option("--out", out_path)->required();

    auto* katv = app.add_subcommand("kat-verify", "regenerate and compare known-answer tests");
    katv->add_option("--params", set)->capture_default_str();
    katv->add_option("--in", in_path)->required();

    bool no_costs = false;
    auto* prm = app.add_subcommand("params", "print a parameter set with sizes and attack costs");
    prm->add_option("--set", set)->capture_default_str();
    prm->add_flag("--json", as_json);
    prm->add_flag("--no-costs", no_costs, "skip the estimator");

    double omega = 2.8;
    bool table = false;
    std::string est_set;
    auto* est_cmd = app.add_subcommand("estimate", "attack-cost estimates");
    est_cmd->add_option("--params", est_set, "one set; all sets when absent");
    est_cmd->add_option("--omega", omega)->capture_default_str();
    est_cmd->add_flag("--json", as_json);
    est_cmd->add_flag("--table", table, "JSON rows for every set");

    std::string shape, mode = "kernel";
    std::size_t trials = 100, budget = 1 << 16;
    auto* atk = app.add_subcommand("attack-demo", "run toy attacks, CSV per trial");
    atk->add_option("--mode", mode, "kernel: shape m,n,dim,t; msl: shape m,n,N,k,t")
        ->check(CLI::IsMember({"kernel", "msl"}))
        ->capture_default_str();
    atk->add_option("--shape", shape)->required();
    atk->add_option("--trials", trials)->capture_default_str();
    atk->add_option("--budget", budget)->capture_default_str();
    atk->add_option("--seed", seed_hex);

    std::size_t ob_m = 16, ob_n = 2, ob_l1 = 8, ob_l2 = 6, ob_k = 2, ob_r = 1, ob_d = 1;
    auto* ob = app.add_subcommand("onebit-demo", "one-bit scheme failure rates");
    ob->add_option("--m", ob_m)->capture_default_str();
    ob->add_option("--n", ob_n)->capture_default_str();
    ob->add_option("--l1", ob_l1)->capture_default_str();
    ob->add_option("--l2", ob_l2)->capture_default_str();
    ob->add_option("--k", ob_k)->capture_default_str();
    ob->add_option("--r", ob_r)->capture_default_str();
    ob->add_option("--d", ob_d)->capture_default_str();
    ob->add_option("--trials", trials)->capture_default_str();
    ob->add_option("--seed", seed_hex);

    std::string red_shape = "6,6,12,1,3", oracle_kind = "rank";
    double eps = 0.4;
    std::size_t calib = 2000;
    auto* red = app.add_subcommand("reduce-demo", "toy search-to-decision reduction");
    red->add_option("--shape", red_shape, "m,n,k,t,N")->capture_default_str();
    red->add_option("--oracle", oracle_kind)->check(CLI::IsMember({"rank", "coin"}))->capture_default_str();
    red->add_option("--eps", eps, "rank-oracle advantage, also the GL list-size target")->capture_default_str();
    red->add_option("--trials", trials)->capture_default_str();
    red->add_option("--calibration", calib, "samples per hybrid pair")->capture_default_str();
    red->add_option("--seed", seed_hex);

    std::size_t bench_iters = 31;
    auto* bn = app.add_subcommand("bench", "median wall time of keygen/encrypt/decrypt");
    bn->add_option("--params", set)->capture_default_str();
    bn->add_option("--iters", bench_iters)->capture_default_str();
    bn->add_flag("--json", as_json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*kg) {
            const Params& p = lookup(set);
            Expander rng(resolve_seed(seed_hex), domain::keygen);
            KeyPair kp = keygen(p, rng);
            write_file(pk_path, serialize(kp.pk));
            write_file(sk_path, serialize(kp.sk));
        } else if (*enc) {
            PublicKey pk = parse_public_key(read_file(pk_path));
            const Params& p = params_by_id(pk.set_id);
            Expander rng(resolve_seed(seed_hex), domain::encrypt);
            Message msg;
            if (in_path.empty()) {
                msg = random_message(p, rng);
                if (!msg_out.empty()) write_file(msg_out, serialize_message(p, msg));
            } else {
                msg = parse_message(p, read_file(in_path));
            }
            write_file(out_path, serialize(encrypt(p, pk, msg, rng)));
        } else if (*dec) {
            SecretKey sk = parse_secret_key(read_file(sk_path));
            Ciphertext ct = parse_ciphertext(read_file(in_path));
            const Params& p = params_by_id(sk.set_id);
            write_file(out_path, serialize_message(p, decrypt(p, sk, ct)));
        } else if (*katg) {
            const Params& p = lookup(set);
            std::ofstream out(out_path);
            if (!out) throw IoError("cannot write " + out_path);
            kat_write(out, kat_generate(p, kat_count));
        } else if (*katv) {
            const Params& p = lookup(set);
            std::ifstream in(in_path);
            if (!in) throw IoError("cannot open " + in_path);
            auto entries = kat_read(in);
            auto bad = kat_verify(p, entries);
            for (const auto& b : bad) std::cerr << "mismatch: count " << b.count << " field " << b.field << "\n";
            std::cout << entries.size() - std::min(entries.size(), bad.size()) << "/" << entries.size()
                      << " entries verified\n";
            if (!bad.empty()) return 1;
        } else if (*prm) {
            const Params& p = lookup(set);
            json j = params_json(p);
            if (!no_costs) j["costs"] = row_json(est::table_row(p, omega));
            if (as_json) {
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << p.name << ": lambda=" << p.lambda << " m=" << p.m << " n=" << p.n << " k=" << p.k
                          << " r=" << p.r << " d=" << p.d << " l1=" << p.l1 << " l2=" << p.l2
                          << " kappa=" << p.kappa << "\n"
                          << "  pk " << p.pk_payload_bytes() << " B, ct " << p.ct_payload_bytes() << " B\n";
                if (!no_costs)
                    for (const char* a : {"Kernel", "SupportMinors", "Minors"})
                        std::cout << "  " << a << ": 2^" << std::fixed << std::setprecision(1)
                                  << j["costs"][a]["bits"].get<double>() << "\n";
            }
        } else if (*est_cmd) {
            std::vector<Params> sets;
            if (est_set.empty() || table) sets = parameter_sets();
            else sets = {lookup(est_set)};
            json rows = json::array();
            for (const auto& p : sets) rows.push_back(row_json(est::table_row(p, omega)));
            if (as_json || table) {
                std::cout << (table || sets.size() > 1 ? rows : rows[0]).dump(2) << "\n";
            } else {
                std::cout << std::fixed << std::setprecision(1);
                std::cout << "set       Kernel  SupportMinors  Minors  pk_bytes  ct_bytes\n";
                for (const auto& r : rows)
                    std::cout << std::left << std::setw(10) << r["set"].get<std::string>() << std::right
                              << std::setw(6) << r["Kernel"]["bits"].get<double>() << std::setw(15)
                              << r["SupportMinors"]["bits"].get<double>() << std::setw(8)
                              << r["Minors"]["bits"].get<double>() << std::setw(10) << r["pk_bytes"].get<std::size_t>()
                              << std::setw(10) << r["ct_bytes"].get<std::size_t>() << "\n";
            }
        } else if (*atk) {
            Expander root(resolve_seed(seed_hex), 0x4144);
            std::cout << "seed,iterations,success\n";
            for (std::size_t i = 0; i < trials; ++i) {
                Seed s = root.next_seed();
                Expander rng(s);
                bool ok;
                std::size_t iters;
                if (mode == "kernel") {
                    auto v = parse_tuple(shape, 4, "--shape");
                    auto inst = attack::random_minrank_instance(v[0], v[1], v[2], v[3], rng);
                    auto res = attack::kernel_attack(inst, rng, budget);
                    ok = res.found();
                    iters = res.iterations;
                } else {
                    auto v = parse_tuple(shape, 5, "--shape");
                    auto msl = attack::sample_msl(v[0], v[1], v[3], v[2], v[4], rng);
                    auto res = attack::msl_attack_pipeline(msl, rng, budget);
                    ok = res.support && *res.support == msl.support;
                    iters = res.iterations;
                }
                std::cout << to_hex(s) << "," << iters << "," << (ok ? 1 : 0) << "\n";
            }
        } else if (*ob) {
            auto p = OneBitParams::uniform(ob_m, ob_n, ob_l1, ob_l2, ob_k, ob_r, ob_d);
            p.validate();
            Expander root(resolve_seed(seed_hex), 0x4f42);
            std::size_t fail1 = 0, fail0 = 0;
            std::cout << "seed,b,decrypted,rankD\n";
            for (std::size_t i = 0; i < trials; ++i) {
                Seed s = root.next_seed();
                Expander rng(s);
                auto kp = ob_keygen(p, rng);
                for (bool b : {false, true}) {
                    auto out = ob_decrypt(p, kp.sk, ob_encrypt(p, kp.pk, b, rng));
                    (b ? fail1 : fail0) += out.bit != b;
                    std::cout << to_hex(s) << "," << b << "," << out.bit << "," << out.rank_d << "\n";
                }
            }
            std::cerr << "enc(0) misdecode " << fail0 << "/" << trials << ", enc(1) misdecode " << fail1 << "/"
                      << trials << ", bound 2^" << int(ob_r * ob_d + 1) - int(ob_l2) << "\n";
        } else if (*red) {
            auto v = parse_tuple(red_shape, 5, "--shape");
            reduction::ReductionParams p{v[0], v[1], v[2], v[3], v[4]};
            p.validate();
            auto oracle = oracle_kind == "rank" ? reduction::rank_oracle(p, eps) : reduction::coin_oracle();
            Expander rng(resolve_seed(seed_hex), 0x5244);
            auto t0 = std::chrono::steady_clock::now();
            json adv = json::array();
            for (std::size_t i = 0; i < p.count; ++i)
                adv.push_back(reduction::measure_advantage(p, oracle, i, i + 1, calib, rng));
            std::size_t ok = 0, wrong = 0;
            for (std::size_t t = 0; t < trials; ++t) {
                auto draw = reduction::sample_hybrid(p, p.count, rng);
                auto res = reduction::full_reduction_demo(p, draw.sample, oracle, eps, rng);
                if (res.support) (*res.support == draw.support ? ok : wrong)++;
            }
            double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            json j = {{"oracle", oracle_kind},
                      {"declared_advantage", oracle.declared_advantage},
                      {"per_i0_advantage", adv},
                      {"trials", trials},
                      {"recovered", ok},
                      {"wrong_support", wrong},
                      {"success_rate", double(ok) / double(trials)},
                      {"wall_time_s", wall}};
            std::cout << j.dump(2) << "\n";
        } else if (*bn) {
            const Params& p = lookup(set);
            std::vector<KeyPair> keys;
            std::vector<Ciphertext> cts;
            Message msg;
            double t_kg = median_ms(bench_iters, [&](std::size_t i) {
                Expander rng(seed_from_u64(i), domain::keygen);
                keys.push_back(keygen(p, rng));
            });
            {
                Expander rng(seed_from_u64(0), kKatMessageDomain);
                msg = random_message(p, rng);
            }
            double t_enc = median_ms(bench_iters, [&](std::size_t i) {
                Expander rng(seed_from_u64(i), domain::encrypt);
                cts.push_back(encrypt(p, keys[i].pk, msg, rng));
            });
            double t_dec = median_ms(bench_iters, [&](std::size_t i) {
                if (decrypt(p, keys[i].sk, cts[i]) != msg) throw InternalError("bench: round trip failed");
            });
            if (as_json) {
                std::cout << json{{"set", p.name}, {"iters", bench_iters}, {"keygen_ms", t_kg},
                                  {"encrypt_ms", t_enc}, {"decrypt_ms", t_dec}}
                                 .dump(2)
                          << "\n";
            } else {
                std::cout << std::fixed << std::setprecision(3) << p.name << " (median of " << bench_iters
                          << "): keygen " << t_kg << " ms, encrypt " << t_enc << " ms, decrypt " << t_dec
                          << " ms\n";
            }
        }
    } catch (const DecryptError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const FormatError& e) {
        std::cerr << "error: malformed input: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        // ValidationError, ShapeError, InvalidReduction and friends
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
