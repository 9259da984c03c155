#include "qkd/intermediary.hpp"

#include "qkd/adversary.hpp"
#include "qkd/errors.hpp"
#include "qkd/rng.hpp"

namespace qkd {

Actor actor_for_customer(const std::string& customer_id) {
    if (customer_id == "alice") return Actor::alice;
    if (customer_id == "bob") return Actor::bob;
    if (customer_id == "eve") return Actor::eve;
    return Actor::system;
}

IntermediaryService::IntermediaryService(Channels& channels, Rng& rng,
                                         bool insider_compromised,
                                         EveState* eve)
    : channels_(channels), rng_(rng), insider_(insider_compromised), eve_(eve) {}

CustomerRecord IntermediaryService::register_customer(
    const std::string& customer_id, std::size_t pad_size_bits) {
    if (pad_size_bits == 0) {
        throw ZeroPad("register: pad size must be at least one bit");
    }
    if (customers_.find(customer_id) != customers_.end()) {
        throw DuplicateCustomer("register: customer already registered: " +
                                customer_id);
    }
    const BitVec pad_bits = BitVec::random(pad_size_bits, rng_);
    const Event& e = channels_.send_oob(
        Actor::al, event_kind::registration,
        "customer=" + customer_id + " bits=" + std::to_string(pad_size_bits));
    customers_.emplace(customer_id,
                       CustomerRecord{customer_id,
                                      PadStore(pad_bits, "AL/" + customer_id),
                                      e.index});
    return CustomerRecord{customer_id, PadStore(pad_bits, customer_id), e.index};
}

bool IntermediaryService::authenticate(CustomerRecord& customer) {
    const auto it = customers_.find(customer.customer_id);
    if (it == customers_.end()) {
        throw UnknownCustomer("authenticate: unknown customer: " +
                              customer.customer_id);
    }
    PadStore& service_pad = it->second.pad;

    const BitVec challenge = BitVec::random(kChallengeBits, rng_);
    const BitVec masked_challenge = service_pad.mask(challenge);
    channels_.send_classical(Actor::al, event_kind::auth_challenge,
                             "customer=" + customer.customer_id + " " +
                                 masked_challenge.to_hex());

    const BitVec recovered = customer.pad.unmask(masked_challenge);
    const BitVec response = customer.pad.mask(recovered);
    channels_.send_classical(actor_for_customer(customer.customer_id),
                             event_kind::auth_response, response.to_hex());

    const bool ok = service_pad.unmask(response) == challenge;
    channels_.send_classical(Actor::al, event_kind::auth_result,
                             "customer=" + customer.customer_id +
                                 (ok ? " ok" : " fail"));
    return ok;
}

BitVec IntermediaryService::relay(const std::string& sender_id,
                                  const std::string& recipient_id,
                                  const BitVec& ciphertext) {
    const auto sender = customers_.find(sender_id);
    if (sender == customers_.end()) {
        throw UnknownCustomer("relay: unknown sender: " + sender_id);
    }
    const auto recipient = customers_.find(recipient_id);
    if (recipient == customers_.end()) {
        throw UnknownCustomer("relay: unknown recipient: " + recipient_id);
    }

    // Plaintext lives only inside this scope.
    const BitVec plaintext = sender->second.pad.unmask(ciphertext);
    if (insider_ && eve_ != nullptr) {
        eve_->recovered_plaintexts.push_back(plaintext);
    }
    const BitVec delivered = recipient->second.pad.mask(plaintext);
    const Event& e = channels_.send_classical(
        Actor::al, event_kind::relay_deliver,
        "to=" + recipient_id + " " + delivered.to_hex());
    relay_log_.push_back(
        RelayEvent{sender_id, recipient_id, ciphertext.size(), e.index});
    return delivered;
}

bool IntermediaryService::attempt_impersonation(const std::string& claimed_id) {
    channels_.send_classical(Actor::eve, event_kind::auth_response,
                             "claimed=" + claimed_id + " (no pad)");
    channels_.send_classical(Actor::al, event_kind::impersonation_rejected,
                             "claimed=" + claimed_id +
                                 " reason=pad-proof-unavailable");
    return false;
}

void IntermediaryService::register_password(const std::string& customer_id,
                                            const BitVec& password) {
    if (passwords_.find(customer_id) != passwords_.end()) {
        throw DuplicateCustomer("register_password: already registered: " +
                                customer_id);
    }
    if (password.empty()) {
        throw ZeroPad("register_password: empty password");
    }
    channels_.send_oob(Actor::al, event_kind::registration,
                       "customer=" + customer_id + " mode=password bits=" +
                           std::to_string(password.size()));
    passwords_.emplace(customer_id, password);
}

bool IntermediaryService::login_with_password(const std::string& customer_id,
                                              const BitVec& password) {
    const auto it = passwords_.find(customer_id);
    if (it == passwords_.end()) {
        throw UnknownCustomer("login: unknown customer: " + customer_id);
    }
    // The reused secret crosses the public channel on every login.
    channels_.send_classical(actor_for_customer(customer_id),
                             event_kind::login_attempt,
                             "customer=" + customer_id + " password=" +
                                 password.to_hex());
    return it->second == password;
}

} // namespace qkd
