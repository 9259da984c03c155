#include "qkd/protocol.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "qkd/crc32.hpp"
#include "qkd/rng.hpp"

namespace qkd {

namespace {

double power(double base, int exponent) {
    double v = 1.0;
    for (int i = 0; i < exponent; ++i) {
        v *= base;
    }
    return v;
}

std::string crc_payload(std::uint32_t crc) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "crc32=0x%08X", crc);
    return buf;
}

} // namespace

int required_rounds(double p_max, double epsilon) {
    if (p_max >= 1.0) {
        throw DegenerateBound("required_rounds: p_max must be below 1");
    }
    if (p_max < 0.0 || epsilon <= 0.0 || epsilon >= 1.0) {
        throw Error("required_rounds: need 0 <= p_max < 1 and 0 < epsilon < 1");
    }
    if (p_max == 0.0) {
        return 1; // perfectly distinguishable set: one agreeing round settles it
    }
    int m = static_cast<int>(std::ceil(std::log(epsilon) / std::log(p_max)));
    if (m < 1) {
        m = 1;
    }
    // settle the boundary by direct exponentiation
    while (m > 1 && power(p_max, m - 1) <= epsilon) {
        --m;
    }
    while (power(p_max, m) > epsilon) {
        ++m;
    }
    return m;
}

ProtocolConfig ProtocolConfig::with_confidence(AngleSet set, double epsilon,
                                               int key_length) {
    if (key_length < 1) {
        throw Error("ProtocolConfig: key_length must be positive");
    }
    const int m = required_rounds(set.p_max(), epsilon);
    return ProtocolConfig{std::move(set), m, epsilon, key_length};
}

ProtocolConfig ProtocolConfig::with_rounds(AngleSet set, int rounds_per_test,
                                           int key_length) {
    if (key_length < 1) {
        throw Error("ProtocolConfig: key_length must be positive");
    }
    if (rounds_per_test < 1) {
        throw Error("ProtocolConfig: rounds_per_test must be positive");
    }
    const double epsilon = power(set.p_max(), rounds_per_test);
    return ProtocolConfig{std::move(set), rounds_per_test, epsilon, key_length};
}

std::pair<int, int> discovery_round(MeasurementAngle alice_angle,
                                    MeasurementAngle bob_angle,
                                    Channels& channels, Rng& rng,
                                    Actor initiator, Actor responder) {
    auto [kept, sent] = channels.registry().new_entangled_pair();
    const int alice_bit = channels.registry().measure(kept, alice_angle, rng);
    Qubit delivered = channels.send_qubit(initiator, std::move(sent), rng);
    const int bob_bit = channels.registry().measure(delivered, bob_angle, rng);
    channels.send_classical(responder, event_kind::bit_reported,
                            bob_bit ? "1" : "0");
    return {alice_bit, bob_bit};
}

DiscoveryResult run_parameter_discovery(const ProtocolConfig& cfg,
                                        PartyState& alice, PartyState& bob,
                                        Channels& channels, Rng& rng) {
    channels.set_phase(Phase::discovery);
    const AngleSet& set = cfg.angle_set;
    const int k = static_cast<int>(set.size());

    // Candidate order: the initiator's own secret choice first, the others
    // in a seed-derived shuffle.
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(k));
    order.push_back(alice.secret_angle_index);
    std::vector<int> rest;
    for (int i = 0; i < k; ++i) {
        if (i != alice.secret_angle_index) {
            rest.push_back(i);
        }
    }
    for (std::size_t i = rest.size(); i > 1; --i) {
        std::swap(rest[i - 1], rest[rng.next_below(i)]);
    }
    order.insert(order.end(), rest.begin(), rest.end());

    const MeasurementAngle bob_angle = set.at(
        static_cast<std::size_t>(bob.secret_angle_index));

    DiscoveryResult result;
    for (const int candidate : order) {
        bool rejected = false;
        for (int round = 0; round < cfg.rounds_per_test; ++round) {
            const auto [a_bit, b_bit] =
                discovery_round(set.at(static_cast<std::size_t>(candidate)),
                                bob_angle, channels, rng, alice.role, bob.role);
            ++result.rounds_used;
            if (a_bit != b_bit) {
                rejected = true;
                break;
            }
        }
        if (!rejected) {
            result.passed.push_back(candidate);
        }
    }

    if (result.passed.size() == 1) {
        result.accepted = result.passed.front();
        alice.discovered_index = result.accepted;
        // The responder never iterated; his own choice is the shared one as
        // far as he can know.
        bob.discovered_index = bob.secret_angle_index;
        channels.send_classical(alice.role, event_kind::discovery_accept, "");
    } else {
        result.abort_reason = kAbortEavesdropperSuspected;
        channels.send_classical(
            alice.role, event_kind::discovery_abort,
            std::string(kAbortEavesdropperSuspected) +
                (result.passed.empty() ? ": no candidate passed"
                                       : ": multiple candidates passed"));
    }
    return result;
}

namespace {

std::pair<BitVec, BitVec> generate_key_bits(int initiator_index,
                                            int responder_index,
                                            const AngleSet& set, int n_bits,
                                            Channels& channels, Rng& rng,
                                            Actor initiator) {
    channels.set_phase(Phase::keygen);
    const MeasurementAngle a_angle =
        set.at(static_cast<std::size_t>(initiator_index));
    const MeasurementAngle b_angle =
        set.at(static_cast<std::size_t>(responder_index));
    BitVec a_bits(static_cast<std::size_t>(n_bits));
    BitVec b_bits(static_cast<std::size_t>(n_bits));
    for (int i = 0; i < n_bits; ++i) {
        auto [kept, sent] = channels.registry().new_entangled_pair();
        const int a_bit = channels.registry().measure(kept, a_angle, rng);
        Qubit delivered = channels.send_qubit(initiator, std::move(sent), rng);
        const int b_bit = channels.registry().measure(delivered, b_angle, rng);
        a_bits.set(static_cast<std::size_t>(i), a_bit != 0);
        b_bits.set(static_cast<std::size_t>(i), b_bit != 0);
    }
    return {std::move(a_bits), std::move(b_bits)};
}

} // namespace

std::pair<BitVec, BitVec> run_key_generation(int shared_index,
                                             const AngleSet& set, int n_bits,
                                             Channels& channels, Rng& rng,
                                             Actor initiator, Actor responder) {
    (void)responder;
    return generate_key_bits(shared_index, shared_index, set, n_bits, channels,
                             rng, initiator);
}

LegResult run_leg(const ProtocolConfig& cfg, Channels& channels, Rng& rng,
                  Actor initiator, Actor responder) {
    LegResult leg;
    leg.initiator.role = initiator;
    leg.responder.role = responder;

    // Step 1: the parameter set is agreed in the open.
    nlohmann::json angles = nlohmann::json::array();
    for (const MeasurementAngle& a : cfg.angle_set.angles()) {
        angles.push_back(a.radians());
    }
    channels.send_classical(initiator, event_kind::angle_set_published,
                            angles.dump());

    // Step 2: secret, uncommunicated choices.
    leg.initiator.secret_angle_index =
        static_cast<int>(rng.next_below(cfg.angle_set.size()));
    leg.responder.secret_angle_index =
        static_cast<int>(rng.next_below(cfg.angle_set.size()));

    // Steps 3-4: locate the responder's parameter through perfect agreement.
    leg.discovery =
        run_parameter_discovery(cfg, leg.initiator, leg.responder, channels, rng);
    if (!leg.discovery.accepted) {
        return leg;
    }

    // Step 5: repeat the process silently to build the pad.
    auto [a_bits, b_bits] = generate_key_bits(
        *leg.initiator.discovered_index, *leg.responder.discovered_index,
        cfg.angle_set, cfg.key_length, channels, rng, initiator);

    const std::uint32_t crc_a = checksum(a_bits);
    const std::uint32_t crc_b = checksum(b_bits);
    leg.initiator.pad = PadStore(std::move(a_bits), std::string(to_string(initiator)));
    leg.responder.pad = PadStore(std::move(b_bits), std::string(to_string(responder)));

    channels.send_classical(initiator, event_kind::checksum_sent,
                            crc_payload(crc_a));
    leg.checksum_ok = crc_a == crc_b;
    channels.send_classical(responder, event_kind::checksum_reply,
                            leg.checksum_ok ? "match" : "mismatch");
    return leg;
}

SessionOutcome run_session(const ProtocolConfig& cfg, const AttackSpec& attack,
                           std::uint64_t seed,
                           const std::optional<BitVec>& message) {
    SessionOutcome out;
    PairRegistry registry;
    Rng rng(seed);
    Channels channels(out.transcript, registry);

    if (attack.kind != AttackKind::none) {
        out.eve.emplace();
        channels.set_eve(&*out.eve);
    }
    channels.send_classical(Actor::system, event_kind::session_start,
                            "k=" + std::to_string(cfg.angle_set.size()) +
                                " m=" + std::to_string(cfg.rounds_per_test) +
                                " n=" + std::to_string(cfg.key_length));

    if (attack.kind == AttackKind::mitm) {
        MitmOutcome mitm =
            mitm_run(cfg, channels, *out.eve, rng, message);
        out.report = mitm.report;
        if (out.report.established) {
            out.alice_pad = std::move(mitm.alice_pad);
            out.bob_pad = std::move(mitm.bob_pad);
        }
        channels.send_classical(Actor::system, event_kind::session_end,
                                out.report.established ? "established=true"
                                                       : "established=false");
        return out;
    }

    if (attack.kind == AttackKind::intercept_resend) {
        install_intercept_resend(channels, *out.eve, attack.policy,
                                 cfg.angle_set);
    }

    LegResult leg = run_leg(cfg, channels, rng, Actor::alice, Actor::bob);
    out.report.discovery_rounds_used = leg.discovery.rounds_used;

    if (!leg.discovery.accepted) {
        out.report.aborted_reason = leg.discovery.abort_reason;
    } else {
        out.report.shared_index = leg.discovery.accepted;
        out.report.checksum_ok = leg.checksum_ok;
        out.report.established = leg.checksum_ok;
        out.alice_pad = leg.initiator.pad->bits();
        out.bob_pad = leg.responder.pad->bits();
        out.report.qber =
            static_cast<double>(out.alice_pad->hamming_distance(*out.bob_pad)) /
            static_cast<double>(cfg.key_length);
        if (!leg.checksum_ok) {
            out.report.aborted_reason = kAbortChecksumMismatch;
        }
    }

    // Ground-truth accounting: how much of the final shared pad Eve holds.
    if (out.report.established && out.eve &&
        attack.kind == AttackKind::intercept_resend) {
        std::size_t position = 0;
        std::size_t matching = 0;
        for (const InterceptRecord& rec : out.eve->measured_bits) {
            if (rec.phase != Phase::keygen) {
                continue;
            }
            if (position < out.alice_pad->size() &&
                rec.bit == (out.alice_pad->get(position) ? 1 : 0)) {
                ++matching;
            }
            ++position;
        }
        out.report.eve_known_fraction =
            static_cast<double>(matching) / static_cast<double>(cfg.key_length);
    }

    if (message && out.report.established) {
        PadStore alice_pad(*out.alice_pad, "alice");
        PadStore bob_pad(*out.bob_pad, "bob");
        const BitVec ciphertext = alice_pad.mask(*message);
        channels.send_classical(Actor::alice, event_kind::message_ciphertext,
                                ciphertext.to_hex());
        (void)bob_pad.unmask(ciphertext);
    }

    channels.send_classical(Actor::system, event_kind::session_end,
                            out.report.established ? "established=true"
                                                   : "established=false");
    return out;
}

} // namespace qkd
