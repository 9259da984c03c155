// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code is the number of
// failures. Criterion 11 drives the real CLI binary; point QKDSIM_BIN and
// QKDSIM_CONFIG_DIR at the build (ctest wires these automatically).

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qkd/adversary.hpp"
#include "qkd/crc32.hpp"
#include "qkd/otp.hpp"
#include "qkd/protocol.hpp"
#include "qkd/quantum.hpp"
#include "qkd/rng.hpp"
#include "qkd/scenario.hpp"
#include "qkd/strawman.hpp"
#include "qkd/transcript.hpp"

using namespace qkd;

namespace {

constexpr double kPi = std::numbers::pi;

struct Check {
    std::string label;
    std::function<void(std::string&)> body; // throws or appends to detail
};

int g_failures = 0;

void require(bool condition, const std::string& what) {
    if (!condition) {
        throw std::runtime_error(what);
    }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
}

ProtocolConfig standard_config(double epsilon = 0.01, int n = 256) {
    return ProtocolConfig::with_confidence(AngleSet::default_set(), epsilon, n);
}

// ---- criteria -----------------------------------------------------------

// 1. Same-angle correlation: 10^4 pairs, equal angles, exact agreement.
void criterion_same_angle(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    const AngleSet set = AngleSet::default_set();
    PairRegistry registry;
    Rng rng(1001);
    int agreements = 0;
    const int trials = 10000;
    for (int i = 0; i < trials; ++i) {
        const MeasurementAngle theta = set.at(i % set.size());
        auto [qa, qb] = registry.new_entangled_pair();
        const int a = registry.measure(qa, theta, rng);
        const int b = registry.measure(qb, theta, rng);
        agreements += a == b ? 1 : 0;
    }
    const double elapsed = seconds_since(start);
    detail = std::to_string(agreements) + "/10000 agreements in " +
             std::to_string(elapsed) + " s";
    require(agreements == trials, "agreement was not exact: " + detail);
    require(elapsed < 1.0, "runtime over 1 s: " + detail);
}

// 2. Cross-angle law: each ordered default pair, 10^5 pairs, +-0.01.
void criterion_cross_angle(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    const AngleSet set = AngleSet::default_set();
    PairRegistry registry;
    Rng rng(1002);
    const int trials = 100000;
    double worst = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i) {
        for (std::size_t j = 0; j < set.size(); ++j) {
            const MeasurementAngle a = set.at(i);
            const MeasurementAngle b = set.at(j);
            int agree = 0;
            for (int t = 0; t < trials; ++t) {
                auto [qa, qb] = registry.new_entangled_pair();
                const int bit_a = registry.measure(qa, a, rng);
                const int bit_b = registry.measure(qb, b, rng);
                agree += bit_a == bit_b ? 1 : 0;
            }
            const double freq = static_cast<double>(agree) / trials;
            const double law = agreement_probability(a, b);
            const double err = std::abs(freq - law);
            worst = std::max(worst, err);
            require(err <= 0.01, "pair (" + std::to_string(a.radians()) + ", " +
                                     std::to_string(b.radians()) +
                                     ") off by " + std::to_string(err));
        }
    }
    const double elapsed = seconds_since(start);
    detail = "16 ordered pairs x 1e5, worst |empirical - cos^2| = " +
             std::to_string(worst) + ", " + std::to_string(elapsed) + " s";
    require(elapsed < 10.0, "runtime over 10 s");
}

// 3. No-cloning / consume-once over randomized operation sequences.
void criterion_no_cloning(std::string& detail) {
    Rng rng(1003);
    PairRegistry registry;
    int clone_attempts = 0;
    const int sequences = 10000;
    for (int seq = 0; seq < sequences; ++seq) {
        std::vector<Qubit> pool;
        for (int op = 0; op < 10; ++op) {
            switch (rng.next_below(5)) {
            case 0: {
                auto [qa, qb] = registry.new_entangled_pair();
                pool.push_back(std::move(qa));
                pool.push_back(std::move(qb));
                break;
            }
            case 1:
                pool.push_back(registry.prepare(
                    MeasurementAngle::from_radians(rng.next_double() * 3.0),
                    static_cast<int>(rng.next_below(2))));
                break;
            case 2:
                if (!pool.empty()) {
                    Qubit& q = pool[rng.next_below(pool.size())];
                    if (q.alive()) {
                        (void)registry.measure(
                            q,
                            MeasurementAngle::from_radians(rng.next_double() *
                                                           3.0),
                            rng);
                    }
                }
                break;
            case 3:
                if (!pool.empty()) {
                    // transfer: the source handle must die with no survivor
                    Qubit& q = pool[rng.next_below(pool.size())];
                    Qubit moved = std::move(q);
                    const bool was_alive = moved.alive();
                    require(!q.alive(), "moved-from handle still alive");
                    if (was_alive) {
                        bool threw = false;
                        try {
                            (void)registry.measure(
                                q, MeasurementAngle::from_radians(0.5), rng);
                        } catch (const MeasuringDeadQubit&) {
                            threw = true;
                        }
                        require(threw, "dead handle accepted a measurement");
                    }
                    q = std::move(moved);
                }
                break;
            case 4:
                if (!pool.empty()) {
                    const Qubit& q = pool[rng.next_below(pool.size())];
                    ++clone_attempts;
                    bool threw = false;
                    try {
                        (void)try_clone(q);
                    } catch (const CloningForbidden&) {
                        threw = true;
                    }
                    require(threw, "try_clone returned a qubit");
                }
                break;
            }
        }
        // exactly the pool's live handles remain registered: nothing was
        // duplicated anywhere in the sequence
        std::size_t live = 0;
        std::set<std::uint64_t> ids;
        for (const Qubit& q : pool) {
            if (q.alive()) {
                ++live;
                ids.insert(q.id());
            }
        }
        require(ids.size() == live, "duplicate live handle ids");
        require(registry.live_qubits() == live,
                "registry count diverges from live handles");
        pool.clear();
        require(registry.live_qubits() == 0, "leaked handles after cleanup");
    }
    detail = std::to_string(sequences) + " sequences, " +
             std::to_string(clone_attempts) + " clone attempts, all refused";
}

// 4. Clean-session success across 100 seeds.
void criterion_clean_sessions(std::string& detail) {
    const ProtocolConfig cfg = standard_config();
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const SessionOutcome outcome = run_session(cfg, AttackSpec::none(), seed);
        require(outcome.report.established, "seed " + std::to_string(seed));
        require(outcome.report.qber == 0.0, "nonzero qber");
        require(outcome.alice_pad->size() == 256, "wrong pad length");
        require(*outcome.alice_pad == *outcome.bob_pad, "pads differ");
        require(checksum(*outcome.alice_pad) == checksum(*outcome.bob_pad),
                "CRC mismatch");
    }
    detail = "100/100 seeds, identical 256-bit pads, qber 0, CRC match";
}

// 5. Intercept-resend QBER 0.25 +- 0.02 over 10^4 key bits.
void criterion_intercept_qber(std::string& detail) {
    const ProtocolConfig cfg = standard_config();
    Transcript transcript;
    PairRegistry registry;
    Channels channels(transcript, registry);
    Rng rng(1005);
    EveState eve;
    channels.set_eve(&eve);
    const AnglePolicy uniform{AnglePolicyKind::uniform_random_per_qubit, {}};
    install_intercept_resend(channels, eve, uniform, cfg.angle_set);

    const int n = 10000;
    const auto [alice_bits, bob_bits] =
        run_key_generation(0, cfg.angle_set, n, channels, rng);
    const double qber =
        static_cast<double>(alice_bits.hamming_distance(bob_bits)) / n;
    const double closed_form = 1.0 - per_round_agreement_under_attack(
                                         cfg.angle_set.at(0), uniform,
                                         cfg.angle_set);
    detail = "measured " + std::to_string(qber) + ", closed form " +
             std::to_string(closed_form);
    require(std::abs(closed_form - 0.25) < 1e-9,
            "closed form is not 0.25: " + detail);
    require(std::abs(qber - 0.25) <= 0.02, "QBER out of band: " + detail);
}

// 6. Detection: epsilon 0.01 (m = 7), full intercept-resend, >= 99/100.
void criterion_detection(std::string& detail) {
    const ProtocolConfig cfg = standard_config(0.01);
    require(cfg.rounds_per_test == 7, "m should be 7 at epsilon 0.01");
    int detected = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const SessionOutcome outcome =
            run_session(cfg, AttackSpec::intercept_resend_uniform(), seed);
        const bool discovery_abort =
            outcome.report.aborted_reason == std::string(kAbortEavesdropperSuspected);
        const bool checksum_mismatch =
            outcome.report.shared_index.has_value() && !outcome.report.checksum_ok;
        if (discovery_abort || checksum_mismatch) {
            ++detected;
        }
    }
    detail = std::to_string(detected) + "/100 attacked sessions detected";
    require(detected >= 99, detail);
}

// 7. False-accept calibration at inflated epsilon.
void criterion_false_accept(std::string& detail) {
    const AngleSet set = AngleSet::default_set();
    const double k = static_cast<double>(set.size());
    const double eps = 0.2;
    const int base_m = required_rounds(set.p_max(), eps); // 3
    std::vector<double> rates;
    std::ostringstream note;
    for (int m = base_m; m < base_m + 3; ++m) {
        const ProtocolConfig cfg =
            ProtocolConfig::with_rounds(AngleSet::default_set(), m, 16);
        int wrong_pass = 0;
        const int trials = 1000;
        for (int t = 0; t < trials; ++t) {
            Transcript transcript;
            PairRegistry registry;
            Channels channels(transcript, registry);
            Rng rng(static_cast<std::uint64_t>(m) * 100000 +
                    static_cast<std::uint64_t>(t));
            PartyState alice{Actor::alice, static_cast<int>(rng.next_below(4)),
                             {}, {}};
            PartyState bob{Actor::bob, static_cast<int>(rng.next_below(4)),
                           {}, {}};
            const DiscoveryResult result =
                run_parameter_discovery(cfg, alice, bob, channels, rng);
            for (const int candidate : result.passed) {
                if (candidate != bob.secret_angle_index) {
                    ++wrong_pass;
                    break;
                }
            }
        }
        const double rate = wrong_pass / 1000.0;
        rates.push_back(rate);
        double bound = 1.0;
        for (int i = 0; i < m; ++i) {
            bound *= set.p_max();
        }
        note << "m=" << m << ": " << rate << " (bound k*p^m=" << k * bound
             << ") ";
        require(rate <= k * bound,
                "wrong-angle pass rate exceeds k*p_max^m at m=" +
                    std::to_string(m));
    }
    require(rates[0] <= k * eps, "rate exceeds k*epsilon");
    require(rates[0] > rates[1] && rates[1] > rates[2],
            "rates do not decrease with m");
    detail = note.str();
}

// 8. Three-pass break, exhaustive over all 2^24 8-bit triples.
void criterion_three_pass_exhaustive(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<BitVec> byte_vec;
    byte_vec.reserve(256);
    for (int v = 0; v < 256; ++v) {
        const std::uint8_t b = static_cast<std::uint8_t>(v);
        byte_vec.push_back(BitVec::from_bytes(&b, 8));
    }
    std::uint64_t recovered = 0;
    for (int m = 0; m < 256; ++m) {
        for (int a = 0; a < 256; ++a) {
            for (int b = 0; b < 256; ++b) {
                const ThreePassTranscript t = three_pass_exchange(
                    byte_vec[static_cast<std::size_t>(m)],
                    byte_vec[static_cast<std::size_t>(a)],
                    byte_vec[static_cast<std::size_t>(b)]);
                if (eve_break_three_pass(t) ==
                    byte_vec[static_cast<std::size_t>(m)]) {
                    ++recovered;
                }
            }
        }
    }
    const double elapsed = seconds_since(start);
    detail = std::to_string(recovered) + "/16777216 recovered in " +
             std::to_string(elapsed) + " s";
    require(recovered == 16777216ULL, detail);
    require(elapsed < 30.0, "runtime over 30 s: " + detail);
}

// 9. MITM dichotomy across authentication modes, structural per seed.
void criterion_mitm_dichotomy(std::string& detail) {
    const char* config_dir_env = std::getenv("QKDSIM_CONFIG_DIR");
    const std::string config_dir =
        config_dir_env != nullptr ? config_dir_env : "configs";

    const struct {
        const char* file;
        double expected;
    } cases[] = {
        {"mitm.json", 1.0},
        {"mitm_intermediary.json", 0.0},
        {"mitm_insider.json", 1.0},
    };
    for (const auto& c : cases) {
        ScenarioConfig cfg =
            ScenarioConfig::load_file(config_dir + "/" + std::string(c.file));
        for (const std::uint64_t seed : {0ULL, 1ULL, 42ULL, 31337ULL}) {
            cfg.seed = seed;
            const ScenarioOutcome outcome = run_scenario(cfg);
            require(outcome.report.established,
                    std::string(c.file) + ": session did not establish");
            require(outcome.report.eve_known_fraction == c.expected,
                    std::string(c.file) + " seed " + std::to_string(seed) +
                        ": eve fraction " +
                        std::to_string(outcome.report.eve_known_fraction));
        }
    }
    detail = "1.0 / 0.0 / 1.0 across seeds {0, 1, 42, 31337}";
}

// 10. OTP involution and one-time enforcement.
void criterion_otp(std::string& detail) {
    Rng rng(1010);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t len = 1 + rng.next_below(500);
        const BitVec pad_bits = BitVec::random(len + rng.next_below(100), rng);
        PadStore alice(pad_bits, "alice");
        PadStore bob(pad_bits, "bob");
        const BitVec message = BitVec::random(len, rng);
        require(bob.unmask(alice.mask(message)) == message,
                "round-trip failed");
    }

    int reuse_checks = 0;
    for (int trial = 0; trial < 300; ++trial) {
        PadStore pad(BitVec::random(512, rng), "alice");
        (void)pad.mask(BitVec(1 + rng.next_below(200)));
        for (int attempt = 0; attempt < 5; ++attempt) {
            const std::size_t offset = rng.next_below(pad.consumed());
            bool threw = false;
            try {
                (void)pad.mask_at(offset, BitVec(1 + rng.next_below(32)));
            } catch (const PadReuse&) {
                threw = true;
            }
            require(threw, "replayed offset was accepted");
            ++reuse_checks;
        }
    }
    detail = "1000 round-trips exact; " + std::to_string(reuse_checks) +
             " replayed offsets all refused";
}

// 11. Reproducibility: identical CLI runs produce byte-identical files.
void criterion_reproducibility(std::string& detail) {
    const char* bin_env = std::getenv("QKDSIM_BIN");
    const char* config_dir_env = std::getenv("QKDSIM_CONFIG_DIR");
    require(bin_env != nullptr,
            "QKDSIM_BIN not set (run through ctest or export it)");
    const std::string bin = bin_env;
    const std::string config =
        (config_dir_env != nullptr ? std::string(config_dir_env) : "configs") +
        "/baseline.json";

    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "qkd_acceptance_repro";
    fs::create_directories(dir);

    auto read_file = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };

    std::string events[2];
    std::string summaries[2];
    for (int run = 0; run < 2; ++run) {
        const fs::path ev = dir / ("events" + std::to_string(run) + ".jsonl");
        const fs::path su = dir / ("summary" + std::to_string(run) + ".json");
        const std::string cmd = "\"" + bin + "\" run --config \"" + config +
                                "\" --events \"" + ev.string() +
                                "\" --summary \"" + su.string() +
                                "\" > /dev/null";
        const int rc = std::system(cmd.c_str());
        require(rc == 0, "qkdsim run exited with " + std::to_string(rc));
        events[run] = read_file(ev);
        summaries[run] = read_file(su);
    }
    fs::remove_all(dir);
    require(!events[0].empty(), "events file is empty");
    require(events[0] == events[1], "events files differ between runs");
    require(summaries[0] == summaries[1], "summary files differ between runs");
    detail = "two runs, byte-identical events (" +
             std::to_string(events[0].size()) + " B) and summaries";
}

// 12. required_rounds arithmetic against direct exponentiation.
void criterion_required_rounds(std::string& detail) {
    require(required_rounds(0.5, 0.01) == 7, "(0.5, 0.01) != 7");
    require(required_rounds(0.9, 0.01) == 44, "(0.9, 0.01) != 44");
    auto power = [](double p, int m) {
        double v = 1.0;
        for (int i = 0; i < m; ++i) {
            v *= p;
        }
        return v;
    };
    require(power(0.5, 7) <= 0.01 && power(0.5, 6) > 0.01,
            "0.5 boundary wrong");
    require(power(0.9, 44) <= 0.01 && power(0.9, 43) > 0.01,
            "0.9 boundary wrong");
    detail = "m(0.5,0.01)=7, m(0.9,0.01)=44, boundaries verified";
}

} // namespace

int main() {
    const std::vector<Check> checks = {
        {" 1. same-angle correlation exact over 1e4 pairs", criterion_same_angle},
        {" 2. cross-angle law within 0.01 over 1e5 pairs/pair", criterion_cross_angle},
        {" 3. no-cloning and consume-once over 1e4 op sequences", criterion_no_cloning},
        {" 4. clean sessions: 100/100 identical pads, qber 0", criterion_clean_sessions},
        {" 5. intercept-resend key-phase QBER 0.25 +- 0.02", criterion_intercept_qber},
        {" 6. detection >= 99/100 under full intercept-resend", criterion_detection},
        {" 7. false-accept rate <= k*eps, decreasing in m", criterion_false_accept},
        {" 8. three-pass break: all 2^24 byte triples", criterion_three_pass_exhaustive},
        {" 9. MITM dichotomy 1.0 / 0.0 / 1.0", criterion_mitm_dichotomy},
        {"10. OTP involution and one-time enforcement", criterion_otp},
        {"11. reproducible CLI runs, byte-identical outputs", criterion_reproducibility},
        {"12. required_rounds pinned arithmetic", criterion_required_rounds},
    };

    for (const Check& check : checks) {
        std::string detail;
        try {
            check.body(detail);
            std::cout << "[PASS] " << check.label;
            if (!detail.empty()) {
                std::cout << " -- " << detail;
            }
            std::cout << "\n";
        } catch (const std::exception& ex) {
            ++g_failures;
            std::cout << "[FAIL] " << check.label << " -- " << ex.what() << "\n";
        }
    }
    if (g_failures != 0) {
        std::cout << g_failures << " criterion(s) failed\n";
    }
    return g_failures;
}
