#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qkd/report.hpp"

namespace qkd {

struct SweepRow {
    std::string value; // the swept value, as given on the command line
    std::uint64_t seed = 0;
    SessionReport report;
};

// Runs the base scenario once per (value, seed), with the dotted parameter
// path patched to each value and the seed column applied as the scenario
// seed, so any row reproduces via `qkdsim run --seed`. Sweeping one of
// rounds_per_test / confidence replaces the other. Throws UnknownParameter
// when the path does not address a numeric field.
std::vector<SweepRow> sweep(const nlohmann::json& base_config,
                            const std::string& param_path,
                            const std::vector<std::string>& value_tokens,
                            std::uint64_t seed_begin, std::uint64_t seed_end);

// CSV with the fixed header
// value,seed,established,discovery_rounds_used,qber,eve_known_fraction,abort_reason
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

} // namespace qkd
