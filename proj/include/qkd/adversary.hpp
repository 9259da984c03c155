#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qkd/bits.hpp"
#include "qkd/channel.hpp"
#include "qkd/quantum.hpp"
#include "qkd/report.hpp"
#include "qkd/transcript.hpp"

namespace qkd {

struct ProtocolConfig;

enum class AttackKind { none, passive_classical, intercept_resend, mitm };

enum class AnglePolicyKind { fixed, uniform_random_per_qubit };

// How Eve picks her measurement basis for each intercepted qubit. The
// uniform policy draws per qubit from the published angle set.
struct AnglePolicy {
    AnglePolicyKind kind = AnglePolicyKind::uniform_random_per_qubit;
    std::optional<MeasurementAngle> angle; // fixed policy only
};

struct AttackSpec {
    AttackKind kind = AttackKind::none;
    AnglePolicy policy{};

    static AttackSpec none() { return {}; }
    static AttackSpec passive_classical() {
        return {AttackKind::passive_classical, {}};
    }
    static AttackSpec intercept_resend_uniform() {
        return {AttackKind::intercept_resend,
                {AnglePolicyKind::uniform_random_per_qubit, std::nullopt}};
    }
    static AttackSpec intercept_resend_fixed(MeasurementAngle angle) {
        return {AttackKind::intercept_resend, {AnglePolicyKind::fixed, angle}};
    }
    static AttackSpec mitm() { return {AttackKind::mitm, {}}; }
};

struct InterceptRecord {
    std::uint64_t quantum_index = 0;
    double angle_radians = 0.0;
    int bit = 0;
    Phase phase = Phase::discovery;
};

// Everything Eve has seen or done in a session.
class EveState {
  public:
    void observe_classical(const Event& e) { classical_log_.push_back(e); }
    const std::vector<Event>& classical_log() const { return classical_log_; }

    std::vector<InterceptRecord> measured_bits;
    std::vector<BitVec> recovered_plaintexts;

    // MITM only: the pads Eve established with each party.
    std::optional<BitVec> pad_with_alice;
    std::optional<BitVec> pad_with_bob;

  private:
    std::vector<Event> classical_log_;
};

// Measure the transiting qubit at eve_angle and forward a fresh qubit
// prepared as (eve_angle, outcome). The original handle is consumed; no
// copy of it survives.
std::pair<int, Qubit> intercept_resend(Qubit q, MeasurementAngle eve_angle,
                                       PairRegistry& registry, Rng& rng);

// Installs the intercept-resend tap on the channels, recording every
// measurement into eve.measured_bits.
void install_intercept_resend(Channels& channels, EveState& eve,
                              const AnglePolicy& policy, const AngleSet& set);

// Closed-form probability that the parties' bits agree in one round when
// both measure at theta_ab and Eve measures-and-resends in between:
// c^2 + (1-c)^2 with c = agreement_probability(theta_ab, theta_eve); the
// uniform policy averages over the published set.
double per_round_agreement_under_attack(MeasurementAngle theta_ab,
                                        const AnglePolicy& policy,
                                        const AngleSet& set);

// Full man-in-the-middle run: Eve executes the whole protocol once with
// Alice (playing Bob) and once with Bob (playing Alice), then decrypts,
// logs, re-encrypts and forwards any subsequent traffic.
struct MitmOutcome {
    SessionReport report;   // as it stands for the legitimate parties
    BitVec alice_pad;       // pad Alice ended up sharing (with Eve)
    BitVec bob_pad;         // pad Bob ended up sharing (with Eve)
    double eve_plaintext_fraction = 0.0;
};

MitmOutcome mitm_run(const ProtocolConfig& cfg, Channels& channels,
                     EveState& eve, Rng& rng,
                     const std::optional<BitVec>& message);

} // namespace qkd
