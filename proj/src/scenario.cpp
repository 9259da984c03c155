#include "qkd/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "qkd/intermediary.hpp"
#include "qkd/rng.hpp"

namespace qkd {

using nlohmann::json;

namespace {

void reject_unknown_fields(const json& j, const std::set<std::string>& known,
                           const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (known.find(key) == known.end()) {
            throw ConfigInvalid(where + ": unknown field \"" + key + "\"");
        }
    }
}

AttackSpec parse_attack(const json& j) {
    if (!j.is_object()) {
        throw ConfigInvalid("attack: expected an object");
    }
    reject_unknown_fields(j, {"kind", "angle_policy", "angle"}, "attack");
    const std::string kind = j.value("kind", "none");

    if (kind != "intercept_resend" &&
        (j.contains("angle_policy") || j.contains("angle"))) {
        throw ConfigInvalid(
            "attack: angle_policy/angle apply only to intercept_resend");
    }

    if (kind == "none") {
        return AttackSpec::none();
    }
    if (kind == "passive_classical") {
        return AttackSpec::passive_classical();
    }
    if (kind == "mitm") {
        return AttackSpec::mitm();
    }
    if (kind == "intercept_resend") {
        const std::string policy =
            j.value("angle_policy", "uniform_random_per_qubit");
        if (policy == "uniform_random_per_qubit") {
            if (j.contains("angle")) {
                throw ConfigInvalid(
                    "attack: the uniform policy takes no fixed angle");
            }
            return AttackSpec::intercept_resend_uniform();
        }
        if (policy == "fixed") {
            if (!j.contains("angle") || !j.at("angle").is_number()) {
                throw ConfigInvalid(
                    "attack: fixed angle_policy requires a numeric \"angle\"");
            }
            try {
                return AttackSpec::intercept_resend_fixed(
                    MeasurementAngle::from_radians(j.at("angle").get<double>()));
            } catch (const InvalidAngle& ex) {
                throw ConfigInvalid(std::string("attack.angle: ") + ex.what());
            }
        }
        throw ConfigInvalid("attack: unknown angle_policy \"" + policy + "\"");
    }
    throw ConfigInvalid("attack: unknown kind \"" + kind + "\"");
}

} // namespace

ScenarioConfig ScenarioConfig::from_json(const json& j) {
    if (!j.is_object()) {
        throw ConfigInvalid("config: expected a JSON object");
    }
    reject_unknown_fields(j,
                          {"angle_set", "rounds_per_test", "confidence",
                           "key_length", "checksum_kind", "attack",
                           "intermediary", "message", "intermediary_pad_bits",
                           "seed"},
                          "config");

    ScenarioConfig cfg;

    if (j.contains("angle_set")) {
        if (!j.at("angle_set").is_array()) {
            throw ConfigInvalid("angle_set: expected an array of radians");
        }
        for (const auto& v : j.at("angle_set")) {
            if (!v.is_number()) {
                throw ConfigInvalid("angle_set: expected numeric radians");
            }
            cfg.angle_set_radians.push_back(v.get<double>());
        }
    }

    const bool has_m = j.contains("rounds_per_test");
    const bool has_eps = j.contains("confidence");
    if (has_m == has_eps) {
        throw ConfigInvalid(
            "config: supply exactly one of rounds_per_test / confidence");
    }
    if (has_m) {
        if (!j.at("rounds_per_test").is_number_integer() ||
            j.at("rounds_per_test").get<int>() < 1) {
            throw ConfigInvalid("rounds_per_test: expected a positive integer");
        }
        cfg.rounds_per_test = j.at("rounds_per_test").get<int>();
    } else {
        if (!j.at("confidence").is_number()) {
            throw ConfigInvalid("confidence: expected a number in (0, 1)");
        }
        const double eps = j.at("confidence").get<double>();
        if (!(eps > 0.0 && eps < 1.0)) {
            throw ConfigInvalid("confidence: expected a number in (0, 1)");
        }
        cfg.confidence = eps;
    }

    if (j.contains("key_length")) {
        if (!j.at("key_length").is_number_integer() ||
            j.at("key_length").get<int>() < 1) {
            throw ConfigInvalid("key_length: expected a positive integer");
        }
        cfg.key_length = j.at("key_length").get<int>();
    }

    if (j.contains("checksum_kind")) {
        cfg.checksum_kind = j.at("checksum_kind").get<std::string>();
    }
    if (cfg.checksum_kind != "crc32") {
        throw ConfigInvalid("checksum_kind: only \"crc32\" is supported");
    }

    if (j.contains("attack")) {
        cfg.attack = parse_attack(j.at("attack"));
    }

    if (j.contains("intermediary")) {
        const std::string mode = j.at("intermediary").get<std::string>();
        if (mode == "off") {
            cfg.intermediary = IntermediaryMode::off;
        } else if (mode == "on") {
            cfg.intermediary = IntermediaryMode::on;
        } else if (mode == "on_with_insider") {
            cfg.intermediary = IntermediaryMode::on_with_insider;
        } else {
            throw ConfigInvalid("intermediary: expected off / on / on_with_insider");
        }
    }

    if (j.contains("message")) {
        try {
            cfg.message = BitVec::from_hex(j.at("message").get<std::string>());
        } catch (const Error& ex) {
            throw ConfigInvalid(std::string("message: ") + ex.what());
        }
    }

    if (j.contains("intermediary_pad_bits")) {
        if (!j.at("intermediary_pad_bits").is_number_unsigned() ||
            j.at("intermediary_pad_bits").get<std::uint64_t>() == 0) {
            throw ConfigInvalid(
                "intermediary_pad_bits: expected a positive integer");
        }
        cfg.intermediary_pad_bits =
            j.at("intermediary_pad_bits").get<std::size_t>();
    }

    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) {
            throw ConfigInvalid("seed: expected an unsigned integer");
        }
        cfg.seed = j.at("seed").get<std::uint64_t>();
    }

    // cross-field checks
    try {
        (void)cfg.protocol_config();
    } catch (const ConfigInvalid&) {
        throw;
    } catch (const Error& ex) {
        throw ConfigInvalid(std::string("config: ") + ex.what());
    }

    if (cfg.intermediary != IntermediaryMode::off) {
        if (cfg.attack.kind == AttackKind::intercept_resend) {
            throw ConfigInvalid(
                "config: intercept_resend has no quantum channel to attack "
                "when the intermediary carries the traffic");
        }
        if (!cfg.message) {
            throw ConfigInvalid(
                "config: intermediary scenarios need a message to relay");
        }
        const std::size_t needed =
            2 * IntermediaryService::kChallengeBits + cfg.message->size();
        if (cfg.intermediary_pad_bits < needed) {
            throw ConfigInvalid(
                "intermediary_pad_bits: too small for the handshake plus "
                "message (need " +
                std::to_string(needed) + ")");
        }
    } else if (cfg.message &&
               cfg.message->size() > static_cast<std::size_t>(cfg.key_length)) {
        throw ConfigInvalid(
            "message: longer than the established pad (key_length)");
    }

    return cfg;
}

ScenarioConfig ScenarioConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigInvalid("cannot open config file: " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& ex) {
        throw ConfigInvalid(std::string("config parse error: ") + ex.what());
    }
    return from_json(j);
}

ProtocolConfig ScenarioConfig::protocol_config() const {
    std::vector<MeasurementAngle> angles;
    try {
        for (const double r : angle_set_radians) {
            angles.push_back(MeasurementAngle::from_radians(r));
        }
        AngleSet set = angle_set_radians.empty() ? AngleSet::default_set()
                                                 : AngleSet(std::move(angles));
        if (confidence) {
            return ProtocolConfig::with_confidence(std::move(set), *confidence,
                                                   key_length);
        }
        return ProtocolConfig::with_rounds(std::move(set), *rounds_per_test,
                                           key_length);
    } catch (const ConfigInvalid&) {
        throw;
    } catch (const Error& ex) {
        throw ConfigInvalid(std::string("config: ") + ex.what());
    }
}

json ScenarioConfig::derived_json() const {
    const ProtocolConfig pc = protocol_config();
    return json{{"rounds_per_test", pc.rounds_per_test},
                {"confidence", pc.confidence},
                {"p_max", pc.angle_set.p_max()}};
}

namespace {

ScenarioOutcome run_intermediary_scenario(const ScenarioConfig& cfg) {
    ScenarioOutcome out;
    PairRegistry registry;
    Rng rng(cfg.seed);
    Channels channels(out.transcript, registry);

    const bool insider = cfg.intermediary == IntermediaryMode::on_with_insider;
    EveState eve;
    const bool eve_present = insider || cfg.attack.kind != AttackKind::none;
    if (eve_present) {
        channels.set_eve(&eve);
    }

    channels.send_classical(Actor::system, event_kind::session_start,
                            std::string("intermediary=") +
                                (insider ? "on_with_insider" : "on"));

    IntermediaryService service(channels, rng, insider,
                                eve_present ? &eve : nullptr);
    CustomerRecord alice =
        service.register_customer("alice", cfg.intermediary_pad_bits);
    CustomerRecord bob =
        service.register_customer("bob", cfg.intermediary_pad_bits);

    // A man in the middle cannot produce the pad-consuming proof; the
    // insertion attempt dies at authentication, whatever the seed.
    if (cfg.attack.kind == AttackKind::mitm) {
        service.attempt_impersonation("alice");
        service.attempt_impersonation("bob");
    }

    const bool alice_ok = service.authenticate(alice);
    const bool bob_ok = service.authenticate(bob);

    const BitVec& message = *cfg.message;
    const BitVec ciphertext_in = alice.pad.mask(message);
    channels.send_classical(Actor::alice, event_kind::message_ciphertext,
                            ciphertext_in.to_hex());
    const BitVec ciphertext_out = service.relay("alice", "bob", ciphertext_in);
    const BitVec received = bob.pad.unmask(ciphertext_out);

    out.report.established = alice_ok && bob_ok && received == message;
    out.report.checksum_ok = out.report.established;
    out.report.qber = 0.0;

    // Ground truth against Eve's recovered plaintexts, not her say-so.
    std::size_t known_bits = 0;
    for (const BitVec& plaintext : eve.recovered_plaintexts) {
        if (plaintext.size() == message.size()) {
            known_bits = std::max(
                known_bits, message.size() - plaintext.hamming_distance(message));
        }
    }
    out.report.eve_known_fraction =
        message.empty() ? 0.0
                        : static_cast<double>(known_bits) /
                              static_cast<double>(message.size());

    channels.send_classical(Actor::system, event_kind::session_end,
                            out.report.established ? "established=true"
                                                   : "established=false");
    return out;
}

} // namespace

ScenarioOutcome run_scenario(const ScenarioConfig& cfg) {
    if (cfg.intermediary != IntermediaryMode::off) {
        return run_intermediary_scenario(cfg);
    }
    const ProtocolConfig pc = cfg.protocol_config();
    SessionOutcome session = run_session(pc, cfg.attack, cfg.seed, cfg.message);
    return ScenarioOutcome{session.report, std::move(session.transcript)};
}

json report_to_json(const SessionReport& report) {
    json j;
    j["established"] = report.established;
    j["shared_index"] =
        report.shared_index ? json(*report.shared_index) : json(nullptr);
    j["discovery_rounds_used"] = report.discovery_rounds_used;
    j["qber"] = report.qber;
    j["checksum_ok"] = report.checksum_ok;
    j["eve_known_fraction"] = report.eve_known_fraction;
    j["aborted_reason"] =
        report.aborted_reason ? json(*report.aborted_reason) : json(nullptr);
    return j;
}

} // namespace qkd
