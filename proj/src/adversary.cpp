#include "qkd/adversary.hpp"

#include "qkd/crc32.hpp"
#include "qkd/protocol.hpp"
#include "qkd/rng.hpp"

namespace qkd {

std::pair<int, Qubit> intercept_resend(Qubit q, MeasurementAngle eve_angle,
                                       PairRegistry& registry, Rng& rng) {
    const int bit = registry.measure(q, eve_angle, rng);
    Qubit resent = registry.prepare(eve_angle, bit);
    // q goes out of scope here: the intercepted handle is consumed and only
    // the freshly prepared qubit travels on.
    return {bit, std::move(resent)};
}

void install_intercept_resend(Channels& channels, EveState& eve,
                              const AnglePolicy& policy, const AngleSet& set) {
    channels.set_quantum_tap([&eve, policy, set](Qubit q, PairRegistry& registry,
                                                 Rng& rng, Phase phase,
                                                 std::uint64_t index) -> Qubit {
        MeasurementAngle angle =
            policy.kind == AnglePolicyKind::fixed
                ? *policy.angle
                : set.at(static_cast<std::size_t>(rng.next_below(set.size())));
        auto [bit, resent] = intercept_resend(std::move(q), angle, registry, rng);
        eve.measured_bits.push_back({index, angle.radians(), bit, phase});
        return std::move(resent);
    });
}

double per_round_agreement_under_attack(MeasurementAngle theta_ab,
                                        const AnglePolicy& policy,
                                        const AngleSet& set) {
    const auto one = [&](MeasurementAngle eve_angle) {
        const double c = agreement_probability(theta_ab, eve_angle);
        return c * c + (1.0 - c) * (1.0 - c);
    };
    if (policy.kind == AnglePolicyKind::fixed) {
        return one(*policy.angle);
    }
    double total = 0.0;
    for (const MeasurementAngle& eve_angle : set.angles()) {
        total += one(eve_angle);
    }
    return total / static_cast<double>(set.size());
}

MitmOutcome mitm_run(const ProtocolConfig& cfg, Channels& channels,
                     EveState& eve, Rng& rng,
                     const std::optional<BitVec>& message) {
    // Leg A: Alice runs the honest protocol against Eve posing as Bob.
    // Leg B: Eve poses as Alice against the real Bob.
    LegResult leg_a = run_leg(cfg, channels, rng, Actor::alice, Actor::eve);
    LegResult leg_b = run_leg(cfg, channels, rng, Actor::eve, Actor::bob);

    MitmOutcome out;
    out.report.established = leg_a.checksum_ok && leg_b.checksum_ok;
    out.report.checksum_ok = out.report.established;
    out.report.discovery_rounds_used =
        leg_a.discovery.rounds_used + leg_b.discovery.rounds_used;
    // There is no honest shared parameter; both legs terminate at Eve.
    out.report.shared_index = std::nullopt;

    if (!out.report.established) {
        out.report.aborted_reason = leg_a.discovery.abort_reason
                                        ? leg_a.discovery.abort_reason
                                        : leg_b.discovery.abort_reason;
        return out;
    }

    out.alice_pad = leg_a.initiator.pad->bits();
    out.bob_pad = leg_b.responder.pad->bits();
    eve.pad_with_alice = leg_a.responder.pad->bits();
    eve.pad_with_bob = leg_b.initiator.pad->bits();

    // Ground truth: the pads held by the legitimate parties are independent.
    out.report.qber =
        static_cast<double>(out.alice_pad.hamming_distance(out.bob_pad)) /
        static_cast<double>(cfg.key_length);

    // Eve owns both pads, hence every key bit and every forwarded byte.
    out.report.eve_known_fraction = 1.0;
    out.eve_plaintext_fraction = 1.0;

    if (message) {
        PadStore alice_pad(out.alice_pad, "alice");
        PadStore eve_pad_a(*eve.pad_with_alice, "eve/alice-leg");
        PadStore eve_pad_b(*eve.pad_with_bob, "eve/bob-leg");
        PadStore bob_pad(out.bob_pad, "bob");

        const BitVec ct_to_eve = alice_pad.mask(*message);
        channels.send_classical(Actor::alice, event_kind::message_ciphertext,
                                ct_to_eve.to_hex());
        const BitVec plaintext = eve_pad_a.unmask(ct_to_eve);
        eve.recovered_plaintexts.push_back(plaintext);
        const BitVec ct_to_bob = eve_pad_b.mask(plaintext);
        channels.send_classical(Actor::eve, event_kind::message_ciphertext,
                                ct_to_bob.to_hex());
        const BitVec delivered = bob_pad.unmask(ct_to_bob);
        const std::size_t matching =
            message->size() - plaintext.hamming_distance(*message);
        out.eve_plaintext_fraction = message->empty()
                                         ? 1.0
                                         : static_cast<double>(matching) /
                                               static_cast<double>(message->size());
        (void)delivered; // Bob reads the true message; the relay is invisible
    }
    return out;
}

} // namespace qkd
