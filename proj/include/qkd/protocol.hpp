#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qkd/adversary.hpp"
#include "qkd/bits.hpp"
#include "qkd/channel.hpp"
#include "qkd/otp.hpp"
#include "qkd/quantum.hpp"
#include "qkd/report.hpp"
#include "qkd/transcript.hpp"

namespace qkd {

// Least m with p_max^m <= epsilon: enough all-agree rounds that a wrong
// basis hypothesis survives with probability at most epsilon. Throws
// DegenerateBound when p_max >= 1.
int required_rounds(double p_max, double epsilon);

// Session parameters. Exactly one of m / epsilon is given by the caller;
// the factory derives the other, so p_max^m <= epsilon holds by
// construction.
struct ProtocolConfig {
    AngleSet angle_set;
    int rounds_per_test;    // m
    double confidence;      // epsilon
    int key_length;         // n, bits
    std::string checksum_kind = "crc32";

    static ProtocolConfig with_confidence(AngleSet set, double epsilon,
                                          int key_length);
    static ProtocolConfig with_rounds(AngleSet set, int rounds_per_test,
                                      int key_length);
};

// One party's private view. The secret index never travels on any channel.
struct PartyState {
    Actor role = Actor::alice;
    int secret_angle_index = 0;
    std::optional<int> discovered_index;
    std::optional<PadStore> pad;
};

struct DiscoveryResult {
    std::optional<int> accepted;   // unique passing candidate
    std::vector<int> passed;       // every candidate that reached m agreements
    int rounds_used = 0;
    std::optional<std::string> abort_reason;
};

inline constexpr const char* kAbortEavesdropperSuspected = "EavesdropperSuspected";
inline constexpr const char* kAbortChecksumMismatch = "ChecksumMismatch";

// One discovery round: a fresh entangled pair, one half measured by the
// initiator at alice_angle, the other sent (through any attack) and measured
// by the responder at bob_angle, whose bit is reported on the public
// classical channel. Both bits are discarded for key purposes.
std::pair<int, int> discovery_round(MeasurementAngle alice_angle,
                                    MeasurementAngle bob_angle,
                                    Channels& channels, Rng& rng,
                                    Actor initiator = Actor::alice,
                                    Actor responder = Actor::bob);

// The initiator tests candidates (her secret choice first, the rest in a
// seed-derived order) until each has either disagreed once or agreed m
// times; a wrong basis cannot agree forever, the right one cannot disagree.
// Acceptance requires exactly one passing candidate; zero or several abort
// the session with EavesdropperSuspected.
DiscoveryResult run_parameter_discovery(const ProtocolConfig& cfg,
                                        PartyState& alice, PartyState& bob,
                                        Channels& channels, Rng& rng);

// n entangled rounds at the shared angle. Nothing is reported on the
// classical channel in this phase, so the resulting bits are key material.
std::pair<BitVec, BitVec> run_key_generation(int shared_index,
                                             const AngleSet& set, int n_bits,
                                             Channels& channels, Rng& rng,
                                             Actor initiator = Actor::alice,
                                             Actor responder = Actor::bob);

// One complete exchange between two named endpoints on the given channels:
// publish the angle set, choose secrets, discover, generate the key, and
// compare checksums over the public channel.
struct LegResult {
    PartyState initiator;
    PartyState responder;
    DiscoveryResult discovery;
    bool checksum_ok = false;
};

LegResult run_leg(const ProtocolConfig& cfg, Channels& channels, Rng& rng,
                  Actor initiator = Actor::alice,
                  Actor responder = Actor::bob);

// A whole seeded session under the given attack. Failures are reported,
// not thrown.
struct SessionOutcome {
    SessionReport report;
    Transcript transcript;
    std::optional<BitVec> alice_pad;
    std::optional<BitVec> bob_pad;
    std::optional<EveState> eve;
};

SessionOutcome run_session(const ProtocolConfig& cfg, const AttackSpec& attack,
                           std::uint64_t seed,
                           const std::optional<BitVec>& message = std::nullopt);

} // namespace qkd
