#include "qkd/channel.hpp"

#include "qkd/adversary.hpp"
#include "qkd/errors.hpp"

namespace qkd {

const Event& Channels::send_classical(Actor from, std::string_view kind,
                                      std::string payload) {
    if (closed_) {
        throw ChannelClosed("classical channel is closed");
    }
    const Event& e = transcript_.append(from, ChannelKind::classical,
                                        std::string(kind), std::move(payload));
    if (eve_ != nullptr) {
        eve_->observe_classical(e);
    }
    return e;
}

const Event& Channels::send_oob(Actor from, std::string_view kind,
                                std::string payload) {
    if (closed_) {
        throw ChannelClosed("out-of-band channel is closed");
    }
    return transcript_.append(from, ChannelKind::oob, std::string(kind),
                              std::move(payload));
}

Qubit Channels::send_qubit(Actor from, Qubit&& q, Rng& rng) {
    if (closed_) {
        throw ChannelClosed("quantum channel is closed");
    }
    if (!q.alive()) {
        throw SendingDeadQubit("send_qubit: handle is dead");
    }
    transcript_.append(from, ChannelKind::quantum,
                       std::string(event_kind::qubit_sent),
                       "qubit=" + std::to_string(q.id()));
    const std::uint64_t index = quantum_sends_++;
    if (tap_) {
        return tap_(std::move(q), registry_, rng, phase_, index);
    }
    return std::move(q);
}

} // namespace qkd
