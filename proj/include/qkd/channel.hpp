#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "qkd/quantum.hpp"
#include "qkd/transcript.hpp"

namespace qkd {

class Rng;
class EveState;

// Which protocol phase quantum traffic currently belongs to; used for
// ground-truth attack accounting, never visible to the parties.
enum class Phase { discovery, keygen, message };

// The simulated classical/quantum channel pair for one session. Classical
// sends are broadcast: logged in full and teed to Eve when she is present.
// Quantum sends consume the sender's handle, pass through the attack tap if
// one is installed, and deliver whatever comes out the other side.
class Channels {
  public:
    // Called with (qubit in transit, registry, rng, phase, quantum index);
    // returns the qubit to deliver.
    using QuantumTap =
        std::function<Qubit(Qubit, PairRegistry&, Rng&, Phase, std::uint64_t)>;

    Channels(Transcript& transcript, PairRegistry& registry)
        : transcript_(transcript), registry_(registry) {}

    void set_quantum_tap(QuantumTap tap) { tap_ = std::move(tap); }
    void set_eve(EveState* eve) { eve_ = eve; }
    void set_phase(Phase phase) { phase_ = phase; }
    Phase phase() const { return phase_; }

    void close() { closed_ = true; }
    bool closed() const { return closed_; }

    const Event& send_classical(Actor from, std::string_view kind,
                                std::string payload);

    // Out-of-band exchange (physical visit, courier). Logged for the record
    // but outside Eve's reach; payloads are metadata, never secret bits.
    const Event& send_oob(Actor from, std::string_view kind,
                          std::string payload);

    // Consumes the handle on success; on error the caller keeps it.
    Qubit send_qubit(Actor from, Qubit&& q, Rng& rng);

    PairRegistry& registry() { return registry_; }
    Transcript& transcript() { return transcript_; }
    std::uint64_t quantum_sends() const { return quantum_sends_; }

  private:
    Transcript& transcript_;
    PairRegistry& registry_;
    QuantumTap tap_;
    EveState* eve_ = nullptr;
    Phase phase_ = Phase::discovery;
    bool closed_ = false;
    std::uint64_t quantum_sends_ = 0;
};

} // namespace qkd
