#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qkd/adversary.hpp"
#include "qkd/protocol.hpp"
#include "qkd/report.hpp"
#include "qkd/transcript.hpp"

namespace qkd {

enum class IntermediaryMode { off, on, on_with_insider };

// Full experiment description. Parsed strictly: unknown fields are errors,
// exactly one of rounds_per_test / confidence must be given, and the angle
// set is validated at load.
struct ScenarioConfig {
    std::vector<double> angle_set_radians; // default set when empty
    std::optional<int> rounds_per_test;
    std::optional<double> confidence;
    int key_length = 256;
    std::string checksum_kind = "crc32";
    AttackSpec attack;
    IntermediaryMode intermediary = IntermediaryMode::off;
    std::optional<BitVec> message; // hex in the file
    std::size_t intermediary_pad_bits = 8192;
    std::uint64_t seed = 0;

    static ScenarioConfig from_json(const nlohmann::json& j);
    static ScenarioConfig load_file(const std::string& path);

    // Resolves the m/epsilon pair against the angle set.
    ProtocolConfig protocol_config() const;

    // The derived protocol numbers (m, epsilon, p_max) echoed by run output.
    nlohmann::json derived_json() const;
};

struct ScenarioOutcome {
    SessionReport report;
    Transcript transcript;
};

ScenarioOutcome run_scenario(const ScenarioConfig& cfg);

// SessionReport <-> JSON, field for field.
nlohmann::json report_to_json(const SessionReport& report);

} // namespace qkd
