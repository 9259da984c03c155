#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "qkd/crc32.hpp"
#include "qkd/protocol.hpp"
#include "qkd/rng.hpp"

using namespace qkd;

namespace {

constexpr double kPi = std::numbers::pi;

double power(double p, int m) {
    double v = 1.0;
    for (int i = 0; i < m; ++i) {
        v *= p;
    }
    return v;
}

ProtocolConfig default_config(double epsilon = 0.01, int n = 256) {
    return ProtocolConfig::with_confidence(AngleSet::default_set(), epsilon, n);
}

} // namespace

TEST_CASE("required_rounds: pinned values, verified by direct exponentiation") {
    CHECK(required_rounds(0.5, 0.5) == 1);
    CHECK(required_rounds(0.5, 0.01) == 7);
    CHECK(power(0.5, 7) <= 0.01);
    CHECK(power(0.5, 6) > 0.01);

    CHECK(required_rounds(0.9, 0.01) == 44);
    CHECK(power(0.9, 44) <= 0.01);
    CHECK(power(0.9, 43) > 0.01);

    CHECK_THROWS_AS(required_rounds(1.0, 0.01), DegenerateBound);
    CHECK_THROWS_AS(required_rounds(1.5, 0.01), DegenerateBound);
    CHECK_THROWS_AS(required_rounds(0.5, 0.0), Error);
    CHECK_THROWS_AS(required_rounds(0.5, 1.0), Error);
    CHECK(required_rounds(0.0, 0.01) == 1);
}

TEST_CASE("required_rounds: minimality property over random inputs") {
    Rng rng(3131);
    for (int trial = 0; trial < 2000; ++trial) {
        const double p = 0.02 + 0.96 * rng.next_double();
        const double eps = 0.001 + 0.5 * rng.next_double();
        const int m = required_rounds(p, eps);
        REQUIRE(m >= 1);
        REQUIRE(power(p, m) <= eps);
        if (m > 1) {
            REQUIRE(power(p, m - 1) > eps);
        }
    }
}

TEST_CASE("protocol config resolves the m/epsilon pair both ways") {
    const ProtocolConfig from_eps = default_config(0.01);
    CHECK(from_eps.rounds_per_test == 7);
    CHECK(from_eps.confidence == 0.01);

    const ProtocolConfig from_m =
        ProtocolConfig::with_rounds(AngleSet::default_set(), 7, 128);
    CHECK(from_m.confidence ==
          doctest::Approx(power(from_m.angle_set.p_max(), 7)).epsilon(1e-15));
    CHECK(from_m.confidence <= 0.01);

    CHECK_THROWS_AS(
        ProtocolConfig::with_confidence(AngleSet::default_set(), 0.01, 0),
        Error);
    CHECK_THROWS_AS(
        ProtocolConfig::with_rounds(AngleSet::default_set(), 0, 16), Error);
}

TEST_CASE("discovery rounds: agreement statistics per angle gap") {
    Transcript transcript;
    PairRegistry registry;
    Channels channels(transcript, registry);
    Rng rng(4242);

    const MeasurementAngle zero = MeasurementAngle::from_radians(0.0);
    const MeasurementAngle quarter = MeasurementAngle::from_radians(kPi / 4);
    const MeasurementAngle ortho = MeasurementAngle::from_radians(kPi / 2);

    for (int i = 0; i < 300; ++i) {
        const auto [a, b] = discovery_round(zero, zero, channels, rng);
        REQUIRE(a == b);
    }
    for (int i = 0; i < 300; ++i) {
        const auto [a, b] = discovery_round(zero, ortho, channels, rng);
        REQUIRE(a != b);
    }
    int agree = 0;
    const int trials = 10000;
    for (int i = 0; i < trials; ++i) {
        const auto [a, b] = discovery_round(zero, quarter, channels, rng);
        agree += a == b ? 1 : 0;
    }
    CHECK(static_cast<double>(agree) / trials ==
          doctest::Approx(0.5).epsilon(0.04));

    // every round put the responder's bit on the public channel
    std::size_t reported = 0;
    for (const Event& e : transcript.events()) {
        if (e.kind == event_kind::bit_reported) {
            REQUIRE(e.channel == ChannelKind::classical);
            REQUIRE((e.payload == "0" || e.payload == "1"));
            ++reported;
        }
    }
    CHECK(reported == 600 + trials);
}

TEST_CASE("clean discovery accepts the responder's index") {
    const ProtocolConfig cfg = default_config();
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Transcript transcript;
        PairRegistry registry;
        Channels channels(transcript, registry);
        Rng rng(seed);

        PartyState alice{Actor::alice, static_cast<int>(rng.next_below(4)), {}, {}};
        PartyState bob{Actor::bob, static_cast<int>(rng.next_below(4)), {}, {}};
        const int bob_secret = bob.secret_angle_index;

        const DiscoveryResult result =
            run_parameter_discovery(cfg, alice, bob, channels, rng);
        REQUIRE(result.accepted.has_value());
        CHECK(*result.accepted == bob_secret);
        CHECK(alice.discovered_index == bob_secret);
        CHECK(bob.discovered_index == bob_secret);
        CHECK(result.passed == std::vector<int>{bob_secret});
        CHECK(result.rounds_used <=
              static_cast<int>(cfg.angle_set.size()) * cfg.rounds_per_test);
    }
}

TEST_CASE("matching first guess is accepted after exactly m rounds") {
    const ProtocolConfig cfg = default_config();
    Transcript transcript;
    PairRegistry registry;
    Channels channels(transcript, registry);
    Rng rng(5);

    PartyState alice{Actor::alice, 0, {}, {}};
    PartyState bob{Actor::bob, 0, {}, {}};
    const DiscoveryResult result =
        run_parameter_discovery(cfg, alice, bob, channels, rng);
    REQUIRE(result.accepted == 0);
    // the true candidate used exactly m rounds; wrong ones fail fast but
    // cost at least one round each
    const int k = static_cast<int>(cfg.angle_set.size());
    CHECK(result.rounds_used >= cfg.rounds_per_test + (k - 1));
}

TEST_CASE("discovery aborts when two candidates both survive the test") {
    // two near-identical bases: with m = 1 the neighbor of the true basis
    // passes almost surely, and acceptance demands a unique survivor
    const AngleSet crowded({MeasurementAngle::from_radians(0.0),
                            MeasurementAngle::from_radians(0.01),
                            MeasurementAngle::from_radians(kPi / 2),
                            MeasurementAngle::from_radians(kPi / 2 + 0.01)});
    const ProtocolConfig cfg = ProtocolConfig::with_rounds(crowded, 1, 16);

    Transcript transcript;
    PairRegistry registry;
    Channels channels(transcript, registry);
    Rng rng(3);
    PartyState alice{Actor::alice, 0, {}, {}};
    PartyState bob{Actor::bob, 0, {}, {}};
    const DiscoveryResult result =
        run_parameter_discovery(cfg, alice, bob, channels, rng);
    REQUIRE(!result.accepted.has_value());
    CHECK(result.passed.size() >= 2);
    CHECK(result.abort_reason == std::string(kAbortEavesdropperSuspected));

    bool abort_event = false;
    for (const Event& e : transcript.events()) {
        if (e.kind == event_kind::discovery_abort) {
            abort_event = true;
            CHECK(e.payload.find("multiple") != std::string::npos);
        }
    }
    CHECK(abort_event);
}

TEST_CASE("key generation: identical pads without an attack") {
    const ProtocolConfig cfg = default_config();
    Transcript transcript;
    PairRegistry registry;
    Channels channels(transcript, registry);
    Rng rng(6);

    const auto [alice_bits, bob_bits] =
        run_key_generation(2, cfg.angle_set, 256, channels, rng);
    CHECK(alice_bits.size() == 256);
    CHECK(alice_bits == bob_bits);
    CHECK(checksum(alice_bits) == checksum(bob_bits));

    const auto [one_a, one_b] =
        run_key_generation(1, cfg.angle_set, 1, channels, rng);
    CHECK(one_a.size() == 1);
    CHECK(one_a == one_b);

    // nothing was reported on the classical channel during key generation
    for (const Event& e : transcript.events()) {
        REQUIRE(e.channel == ChannelKind::quantum);
    }
}

TEST_CASE("send_qubit: consume-once across the channel") {
    Transcript transcript;
    PairRegistry registry;
    Channels channels(transcript, registry);
    Rng rng(61);

    auto [kept, to_send] = registry.new_entangled_pair();
    const std::uint64_t sent_id = to_send.id();
    const auto pair = kept.pair_id();

    Qubit delivered = channels.send_qubit(Actor::alice, std::move(to_send), rng);
    // no attack: the receiver holds the original half of the original pair
    CHECK(delivered.id() == sent_id);
    CHECK(delivered.pair_id() == pair);
    CHECK(!to_send.alive());
    CHECK_THROWS_AS(
        registry.measure(to_send, MeasurementAngle::from_radians(0.0), rng),
        MeasuringDeadQubit);
    CHECK_THROWS_AS(channels.send_qubit(Actor::alice, std::move(to_send), rng),
                    SendingDeadQubit);

    // with an intercept tap, the delivered qubit is a fresh pure one
    EveState eve;
    install_intercept_resend(channels, eve,
                             {AnglePolicyKind::fixed,
                              MeasurementAngle::from_radians(0.5)},
                             AngleSet::default_set());
    auto [kept2, to_send2] = registry.new_entangled_pair();
    const std::uint64_t sent_id2 = to_send2.id();
    Qubit substituted =
        channels.send_qubit(Actor::bob, std::move(to_send2), rng);
    CHECK(substituted.id() != sent_id2);
    CHECK(!substituted.pair_id().has_value());
    CHECK(eve.measured_bits.size() == 1);
    (void)registry.measure(kept, MeasurementAngle::from_radians(0.1), rng);
    (void)registry.measure(kept2, MeasurementAngle::from_radians(0.1), rng);
    (void)registry.measure(delivered, MeasurementAngle::from_radians(0.1), rng);
    (void)registry.measure(substituted, MeasurementAngle::from_radians(0.1), rng);
}

TEST_CASE("closed channels refuse traffic") {
    Transcript transcript;
    PairRegistry registry;
    Channels channels(transcript, registry);
    Rng rng(62);

    channels.close();
    CHECK_THROWS_AS(channels.send_classical(Actor::alice, "kind", "payload"),
                    ChannelClosed);
    Qubit q = registry.prepare(MeasurementAngle::from_radians(0.1), 0);
    CHECK_THROWS_AS(channels.send_qubit(Actor::alice, std::move(q), rng),
                    ChannelClosed);
    CHECK(q.alive()); // a closed channel does not swallow the qubit
}

TEST_CASE("run_session, no attack: established with zero error") {
    const ProtocolConfig cfg = default_config();
    const SessionOutcome outcome = run_session(cfg, AttackSpec::none(), 42);
    CHECK(outcome.report.established);
    CHECK(outcome.report.checksum_ok);
    CHECK(outcome.report.qber == 0.0);
    CHECK(outcome.report.eve_known_fraction == 0.0);
    CHECK(!outcome.report.aborted_reason.has_value());
    REQUIRE(outcome.alice_pad.has_value());
    CHECK(*outcome.alice_pad == *outcome.bob_pad);
    CHECK(outcome.alice_pad->size() == 256);
    CHECK(!outcome.eve.has_value());
}

TEST_CASE("run_session is deterministic per (config, attack, seed)") {
    const ProtocolConfig cfg = default_config();
    for (const AttackSpec& attack :
         {AttackSpec::none(), AttackSpec::passive_classical(),
          AttackSpec::intercept_resend_uniform(), AttackSpec::mitm()}) {
        const SessionOutcome a = run_session(cfg, attack, 1234);
        const SessionOutcome b = run_session(cfg, attack, 1234);
        CHECK(a.transcript.to_jsonl() == b.transcript.to_jsonl());
        CHECK(a.transcript.hash() == b.transcript.hash());
        CHECK(a.report == b.report);

        const SessionOutcome c = run_session(cfg, attack, 1235);
        CHECK(a.transcript.to_jsonl() != c.transcript.to_jsonl());
    }
}

TEST_CASE("passive classical monitoring learns nothing about the pad") {
    const ProtocolConfig cfg = default_config();
    const SessionOutcome outcome =
        run_session(cfg, AttackSpec::passive_classical(), 7);
    CHECK(outcome.report.established);
    CHECK(outcome.report.eve_known_fraction == 0.0);
    REQUIRE(outcome.eve.has_value());
    CHECK(!outcome.eve->classical_log().empty());

    // Eve's log is exactly the classical slice of the transcript
    std::vector<Event> classical;
    for (const Event& e : outcome.transcript.events()) {
        if (e.channel == ChannelKind::classical) {
            classical.push_back(e);
        }
    }
    CHECK(outcome.eve->classical_log() == classical);
}

TEST_CASE("transcript discipline: secrets stay off the wire") {
    const ProtocolConfig cfg = default_config(0.01, 128);
    const SessionOutcome outcome = run_session(cfg, AttackSpec::none(), 99);
    REQUIRE(outcome.report.established);

    // Before acceptance, the only classical payloads are the session marker,
    // the published angle set, and single reported bits; none of them is
    // derived from a secret index.
    bool accepted_seen = false;
    bool keygen_payloads = false;
    for (const Event& e : outcome.transcript.events()) {
        if (e.kind == event_kind::discovery_accept) {
            accepted_seen = true;
            CHECK(e.payload.empty());
            continue;
        }
        if (e.channel != ChannelKind::classical) {
            continue;
        }
        if (!accepted_seen) {
            const bool allowed = e.kind == event_kind::session_start ||
                                 e.kind == event_kind::angle_set_published ||
                                 e.kind == event_kind::bit_reported;
            REQUIRE(allowed);
            if (e.kind == event_kind::bit_reported) {
                REQUIRE((e.payload == "0" || e.payload == "1"));
            }
        } else {
            // after acceptance: checksums and markers only, never bit values
            const bool allowed = e.kind == event_kind::checksum_sent ||
                                 e.kind == event_kind::checksum_reply ||
                                 e.kind == event_kind::session_end;
            REQUIRE(allowed);
            keygen_payloads = keygen_payloads || e.kind == event_kind::bit_reported;
        }
    }
    CHECK(accepted_seen);
    CHECK(!keygen_payloads);

    // the pad bit string appears nowhere in any classical payload
    const std::string pad_bits = outcome.alice_pad->to_string();
    const std::string pad_hex = outcome.alice_pad->to_hex();
    for (const Event& e : outcome.transcript.events()) {
        if (e.channel == ChannelKind::classical) {
            REQUIRE(e.payload.find(pad_bits) == std::string::npos);
            REQUIRE(e.payload.find(pad_hex) == std::string::npos);
        }
    }
}

TEST_CASE("clean sessions establish for every shared index") {
    // force each possible responder index via seeds until all appear
    const ProtocolConfig cfg = default_config(0.01, 64);
    std::set<int> seen;
    for (std::uint64_t seed = 0; seed < 40 && seen.size() < 4; ++seed) {
        const SessionOutcome outcome = run_session(cfg, AttackSpec::none(), seed);
        REQUIRE(outcome.report.established);
        REQUIRE(outcome.report.shared_index.has_value());
        seen.insert(*outcome.report.shared_index);
    }
    CHECK(seen.size() == 4);
}
