#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qkd {

enum class Actor { alice, bob, eve, al, system };
enum class ChannelKind { classical, quantum, oob };

std::string_view to_string(Actor a);
std::string_view to_string(ChannelKind c);
Actor actor_from_string(std::string_view s);
ChannelKind channel_from_string(std::string_view s);

// One logged message. Classical payloads are complete (they are exactly
// Eve's view); quantum payloads carry the qubit id but never hidden state;
// out-of-band payloads are metadata only and never contain pad bits.
struct Event {
    std::uint64_t index = 0;
    Actor actor = Actor::system;
    ChannelKind channel = ChannelKind::classical;
    std::string kind;
    std::string payload; // serialized as "payload_summary"

    bool operator==(const Event&) const = default;
};

// Ordered session log; indices are assigned on append and strictly increase.
class Transcript {
  public:
    const Event& append(Actor actor, ChannelKind channel, std::string kind,
                        std::string payload);

    const std::vector<Event>& events() const { return events_; }
    std::size_t size() const { return events_.size(); }

    // One JSON object per line, UTF-8, keys in fixed alphabetical order.
    std::string to_jsonl() const;
    static Transcript from_jsonl(std::string_view text);

    // FNV-1a 64 over the JSONL serialization.
    std::uint64_t hash() const;

  private:
    std::vector<Event> events_;
};

// Well-known event kinds. Plain strings so transcripts stay greppable.
namespace event_kind {
inline constexpr std::string_view session_start = "session_start";
inline constexpr std::string_view angle_set_published = "angle_set_published";
inline constexpr std::string_view qubit_sent = "qubit_sent";
inline constexpr std::string_view bit_reported = "bit_reported";
inline constexpr std::string_view discovery_accept = "discovery_accept";
inline constexpr std::string_view discovery_abort = "discovery_abort";
inline constexpr std::string_view checksum_sent = "checksum_sent";
inline constexpr std::string_view checksum_reply = "checksum_reply";
inline constexpr std::string_view message_ciphertext = "message_ciphertext";
inline constexpr std::string_view registration = "registration";
inline constexpr std::string_view auth_challenge = "auth_challenge";
inline constexpr std::string_view auth_response = "auth_response";
inline constexpr std::string_view auth_result = "auth_result";
inline constexpr std::string_view login_attempt = "login_attempt";
inline constexpr std::string_view relay_deliver = "relay_deliver";
inline constexpr std::string_view impersonation_rejected = "impersonation_rejected";
inline constexpr std::string_view session_end = "session_end";
} // namespace event_kind

} // namespace qkd
