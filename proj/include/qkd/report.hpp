#pragma once

#include <optional>
#include <string>

namespace qkd {

// Measured outcome of one session. eve_known_fraction comes from simulator
// ground truth (Eve's recorded bits against the real secret material),
// never from anything Eve claims.
struct SessionReport {
    bool established = false;
    std::optional<int> shared_index;
    int discovery_rounds_used = 0;
    double qber = 0.0;
    bool checksum_ok = false;
    double eve_known_fraction = 0.0;
    std::optional<std::string> aborted_reason;

    bool operator==(const SessionReport&) const = default;
};

} // namespace qkd
