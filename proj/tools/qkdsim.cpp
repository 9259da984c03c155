// qkdsim: deterministic key-establishment lab. Subcommands:
//   run    - execute one scenario config, write events/summary files
//   sweep  - rerun a scenario across parameter values and seeds, emit CSV
//   demo   - small narrated demonstrations

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qkd/crc32.hpp"
#include "qkd/errors.hpp"
#include "qkd/rng.hpp"
#include "qkd/scenario.hpp"
#include "qkd/strawman.hpp"
#include "qkd/sweep.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitProtocolAbort = 3;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw qkd::ConfigInvalid("cannot write output file: " + path);
    }
    out << content;
}

int cmd_run(const std::string& config_path, const std::optional<std::uint64_t>& seed,
            const std::string& events_path, const std::string& summary_path) {
    qkd::ScenarioConfig cfg = qkd::ScenarioConfig::load_file(config_path);
    if (seed) {
        cfg.seed = *seed;
    }
    const qkd::ScenarioOutcome outcome = qkd::run_scenario(cfg);

    if (!events_path.empty()) {
        write_file(events_path, outcome.transcript.to_jsonl());
    }
    const json report = qkd::report_to_json(outcome.report);
    if (!summary_path.empty()) {
        write_file(summary_path, report.dump(2) + "\n");
    }

    json stdout_doc;
    stdout_doc["derived"] = cfg.derived_json();
    stdout_doc["report"] = report;
    std::cout << stdout_doc.dump(2) << "\n";

    return outcome.report.established ? kExitOk : kExitProtocolAbort;
}

std::vector<std::string> split_csv(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& spec) {
    const std::size_t dots = spec.find("..");
    try {
        if (dots == std::string::npos) {
            const std::uint64_t v = std::stoull(spec);
            return {v, v};
        }
        return {std::stoull(spec.substr(0, dots)),
                std::stoull(spec.substr(dots + 2))};
    } catch (const std::exception&) {
        throw qkd::ConfigInvalid("--seeds: expected A..B, got \"" + spec + "\"");
    }
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::string& values_csv, const std::string& seeds_spec,
              const std::string& out_path) {
    std::ifstream in(config_path);
    if (!in) {
        throw qkd::ConfigInvalid("cannot open config file: " + config_path);
    }
    json base;
    try {
        in >> base;
    } catch (const json::exception& ex) {
        throw qkd::ConfigInvalid(std::string("config parse error: ") + ex.what());
    }

    const std::vector<std::string> values = split_csv(values_csv);
    if (values.empty()) {
        throw qkd::ConfigInvalid("--values: expected at least one value");
    }
    const auto [seed_begin, seed_end] = parse_seed_range(seeds_spec);

    const std::vector<qkd::SweepRow> rows =
        qkd::sweep(base, param, values, seed_begin, seed_end);

    std::ostringstream csv;
    qkd::write_sweep_csv(csv, rows);
    write_file(out_path, csv.str());
    std::cout << rows.size() << " rows -> " << out_path << "\n";
    return kExitOk;
}

// --- demos ---------------------------------------------------------------

qkd::BitVec bits_from_ascii(const std::string& text) {
    qkd::BitVec v;
    for (const char c : text) {
        for (int k = 7; k >= 0; --k) {
            v.push_back(((static_cast<unsigned char>(c) >> k) & 1) != 0);
        }
    }
    return v;
}

int demo_three_pass() {
    const std::string text = "ATTACKATDAWN";
    const qkd::BitVec message = bits_from_ascii(text);
    qkd::Rng rng(7);
    const qkd::BitVec alice_key = qkd::BitVec::random(message.size(), rng);
    const qkd::BitVec bob_key = qkd::BitVec::random(message.size(), rng);

    const qkd::ThreePassTranscript t =
        qkd::three_pass_exchange(message, alice_key, bob_key);

    std::cout << "Commuting XOR locks, three public passes:\n"
              << "  message          " << message.to_hex() << "  (\"" << text
              << "\")\n"
              << "  pass1 = m^a      " << t.pass1.to_hex() << "\n"
              << "  pass2 = m^a^b    " << t.pass2.to_hex() << "\n"
              << "  pass3 = m^b      " << t.pass3.to_hex() << "\n";

    const qkd::BitVec recovered = qkd::eve_break_three_pass(t);
    std::cout << "Eve XORs the three passes she observed:\n"
              << "  p1^p2^p3         " << recovered.to_hex() << "  -> "
              << (recovered == message ? "message recovered, every time"
                                       : "mismatch (impossible)")
              << "\n"
              << "No key material helped: commuting XOR locks leak the "
                 "message to any full observer.\n";
    return kExitOk;
}

int demo_scenario(const qkd::ScenarioConfig& cfg, const std::string& headline) {
    std::cout << headline << "\n";
    const qkd::ScenarioOutcome outcome = qkd::run_scenario(cfg);
    std::cout << qkd::report_to_json(outcome.report).dump(2) << "\n";
    return kExitOk;
}

int demo_intercept() {
    qkd::ScenarioConfig cfg;
    cfg.confidence = 0.01;
    cfg.key_length = 256;
    cfg.attack = qkd::AttackSpec::intercept_resend_uniform();
    cfg.seed = 42;
    return demo_scenario(
        cfg,
        "Intercept-resend on every qubit (uniform random basis): expect a "
        "discovery abort or a checksum mismatch.");
}

int demo_mitm() {
    qkd::ScenarioConfig cfg;
    cfg.confidence = 0.01;
    cfg.key_length = 256;
    cfg.attack = qkd::AttackSpec::mitm();
    cfg.message = qkd::BitVec::from_hex("6d656574206174206461776e"); // "meet at dawn"
    cfg.seed = 42;
    return demo_scenario(
        cfg,
        "Unauthenticated key agreement with a hidden go-between: both legs "
        "establish, and Eve reads everything (eve_known_fraction = 1).");
}

int demo_insider() {
    qkd::ScenarioConfig cfg;
    cfg.confidence = 0.01;
    cfg.attack = qkd::AttackSpec::passive_classical();
    cfg.intermediary = qkd::IntermediaryMode::on_with_insider;
    cfg.message = qkd::BitVec::from_hex("6d656574206174206461776e");
    cfg.seed = 42;
    return demo_scenario(
        cfg,
        "Trusted intermediary with a compromised employee: wire monitoring "
        "yields nothing, the insider yields everything.");
}

int demo_rsa_anecdote(const std::string& config_path) {
    json doc;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            throw qkd::ConfigInvalid("cannot open config file: " + config_path);
        }
        in >> doc;
    } else {
        doc = json::parse(R"({
          "models": [
            {"name": "as fielded, one machine",        "security_bits": 110, "ops_per_second": 1e9, "machines": 1,    "algorithmic_speedup": 1},
            {"name": "a thousand machines",            "security_bits": 110, "ops_per_second": 1e9, "machines": 1000, "algorithmic_speedup": 1},
            {"name": "plus a 1000x better algorithm",  "security_bits": 110, "ops_per_second": 1e9, "machines": 1000, "algorithmic_speedup": 1000},
            {"name": "and the parameter aged poorly",  "security_bits": 80,  "ops_per_second": 1e9, "machines": 1000, "algorithmic_speedup": 1000},
            {"name": "same resources, +1 bit",         "security_bits": 81,  "ops_per_second": 1e9, "machines": 1000, "algorithmic_speedup": 1000}
          ]
        })");
    }
    std::cout << "Work-factor estimates: resources divide the break time "
                 "linearly, each extra bit doubles it.\n";
    for (const auto& m : doc.at("models")) {
        qkd::WorkFactorModel w;
        w.security_bits = m.at("security_bits").get<int>();
        w.ops_per_second = m.at("ops_per_second").get<double>();
        w.machines = m.at("machines").get<int>();
        w.algorithmic_speedup = m.at("algorithmic_speedup").get<double>();
        std::cout << "  " << m.at("name").get<std::string>() << ": "
                  << qkd::estimate_break_years(w) << " years\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic QKD / OTP / attack simulation lab"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "execute one scenario config");
    std::string run_config;
    std::optional<std::uint64_t> run_seed;
    std::string events_path;
    std::string summary_path;
    run->add_option("--config", run_config, "scenario config (JSON)")->required();
    run->add_option("--seed", run_seed, "override the config seed");
    run->add_option("--events", events_path, "write the event log (JSON Lines)");
    run->add_option("--summary", summary_path, "write the session report (JSON)");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweep to CSV");
    std::string sweep_config;
    std::string sweep_param;
    std::string sweep_values;
    std::string sweep_seeds;
    std::string sweep_out;
    sweep_cmd->add_option("--config", sweep_config, "base scenario config")->required();
    sweep_cmd->add_option("--param", sweep_param, "dotted path of a numeric field")->required();
    sweep_cmd->add_option("--values", sweep_values, "comma-separated values")->required();
    sweep_cmd->add_option("--seeds", sweep_seeds, "seed range A..B")->required();
    sweep_cmd->add_option("--out", sweep_out, "output CSV path")->required();

    // demo
    auto* demo = app.add_subcommand("demo", "narrated demonstrations");
    std::string demo_name;
    std::string demo_config;
    demo->add_option("name", demo_name, "three-pass | mitm | insider | intercept | rsa-anecdote")
        ->required()
        ->check(CLI::IsMember({"three-pass", "mitm", "insider", "intercept", "rsa-anecdote"}));
    demo->add_option("--config", demo_config, "optional model config (rsa-anecdote)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (run->parsed()) {
            return cmd_run(run_config, run_seed, events_path, summary_path);
        }
        if (sweep_cmd->parsed()) {
            return cmd_sweep(sweep_config, sweep_param, sweep_values,
                             sweep_seeds, sweep_out);
        }
        if (demo_name == "three-pass") return demo_three_pass();
        if (demo_name == "intercept") return demo_intercept();
        if (demo_name == "mitm") return demo_mitm();
        if (demo_name == "insider") return demo_insider();
        return demo_rsa_anecdote(demo_config);
    } catch (const qkd::ConfigInvalid& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return kExitConfigError;
    } catch (const qkd::UnknownParameter& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return kExitConfigError;
    } catch (const qkd::Error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitConfigError;
    } catch (const json::exception& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return kExitConfigError;
    }
}
