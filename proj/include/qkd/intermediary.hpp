#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qkd/bits.hpp"
#include "qkd/channel.hpp"
#include "qkd/otp.hpp"

namespace qkd {

class EveState;
class Rng;

// One side's view of a provisioned customer relationship. The pad arrives
// out-of-band; its bits never touch a simulated channel.
struct CustomerRecord {
    std::string customer_id;
    PadStore pad;
    std::uint64_t registered_at = 0; // transcript index of the registration
};

struct RelayEvent {
    std::string sender_id;
    std::string recipient_id;
    std::size_t bits = 0;
    std::uint64_t event_index = 0;
};

// Trusted-intermediary service: holds a pre-shared pad per customer, anchors
// authentication on pad-consuming challenges, and relays traffic by
// unmasking with the sender's pad and re-masking with the recipient's.
// Plaintext exists only transiently inside the relay - unless an insider
// hands it to Eve, which is the point of the insider flag.
class IntermediaryService {
  public:
    IntermediaryService(Channels& channels, Rng& rng, bool insider_compromised,
                        EveState* eve);

    // Out-of-band provisioning of a fresh uniform pad, both copies created
    // here; returns the customer's copy. Throws DuplicateCustomer / ZeroPad.
    CustomerRecord register_customer(const std::string& customer_id,
                                     std::size_t pad_size_bits);

    // Pad-consuming identity proof: the service sends a fresh challenge
    // masked with the next pad bits; the customer unmasks it and returns it
    // re-masked with the following bits. Consumes 2 x challenge_bits on each
    // side; no pad material is disclosed on the wire.
    bool authenticate(CustomerRecord& customer);

    // Unmask with the sender's pad, re-mask with the recipient's, forward.
    // Returns the re-masked ciphertext delivered to the recipient. Throws
    // UnknownCustomer / PadExhausted (nothing is forwarded on failure).
    BitVec relay(const std::string& sender_id, const std::string& recipient_id,
                 const BitVec& ciphertext);

    // Eve has no customer pad, so the pad-consuming proof is out of her
    // reach; the attempt is refused outright and logged.
    bool attempt_impersonation(const std::string& claimed_id);

    // Contrast mode: a short reusable password sent in the clear at login.
    // Anyone who has observed one login can replay it.
    void register_password(const std::string& customer_id,
                           const BitVec& password);
    bool login_with_password(const std::string& customer_id,
                             const BitVec& password);

    bool insider_compromised() const { return insider_; }
    const std::vector<RelayEvent>& relay_log() const { return relay_log_; }

    static constexpr std::size_t kChallengeBits = 128;

  private:
    Channels& channels_;
    Rng& rng_;
    bool insider_;
    EveState* eve_;
    std::map<std::string, CustomerRecord> customers_; // service-side copies
    std::map<std::string, BitVec> passwords_;
    std::vector<RelayEvent> relay_log_;
};

// Actor label for transcript purposes; unknown ids map to System.
Actor actor_for_customer(const std::string& customer_id);

} // namespace qkd
