#include "qkd/transcript.hpp"

#include <nlohmann/json.hpp>

#include "qkd/errors.hpp"

namespace qkd {

using nlohmann::json;

std::string_view to_string(Actor a) {
    switch (a) {
    case Actor::alice: return "Alice";
    case Actor::bob: return "Bob";
    case Actor::eve: return "Eve";
    case Actor::al: return "AL";
    case Actor::system: return "System";
    }
    return "System";
}

std::string_view to_string(ChannelKind c) {
    switch (c) {
    case ChannelKind::classical: return "classical";
    case ChannelKind::quantum: return "quantum";
    case ChannelKind::oob: return "oob";
    }
    return "classical";
}

Actor actor_from_string(std::string_view s) {
    if (s == "Alice") return Actor::alice;
    if (s == "Bob") return Actor::bob;
    if (s == "Eve") return Actor::eve;
    if (s == "AL") return Actor::al;
    if (s == "System") return Actor::system;
    throw Error("unknown actor: " + std::string(s));
}

ChannelKind channel_from_string(std::string_view s) {
    if (s == "classical") return ChannelKind::classical;
    if (s == "quantum") return ChannelKind::quantum;
    if (s == "oob") return ChannelKind::oob;
    throw Error("unknown channel: " + std::string(s));
}

const Event& Transcript::append(Actor actor, ChannelKind channel,
                                std::string kind, std::string payload) {
    Event e;
    e.index = events_.size();
    e.actor = actor;
    e.channel = channel;
    e.kind = std::move(kind);
    e.payload = std::move(payload);
    events_.push_back(std::move(e));
    return events_.back();
}

std::string Transcript::to_jsonl() const {
    std::string out;
    for (const Event& e : events_) {
        // json objects keep keys sorted, so lines are byte-stable
        json line = {
            {"actor", to_string(e.actor)},
            {"channel", to_string(e.channel)},
            {"index", e.index},
            {"kind", e.kind},
            {"payload_summary", e.payload},
        };
        out += line.dump();
        out += '\n';
    }
    return out;
}

Transcript Transcript::from_jsonl(std::string_view text) {
    Transcript t;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        const std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        if (line.empty()) {
            continue;
        }
        json parsed;
        try {
            parsed = json::parse(line);
        } catch (const json::exception& ex) {
            throw Error(std::string("transcript parse error: ") + ex.what());
        }
        Event e;
        e.index = parsed.at("index").get<std::uint64_t>();
        e.actor = actor_from_string(parsed.at("actor").get<std::string>());
        e.channel = channel_from_string(parsed.at("channel").get<std::string>());
        e.kind = parsed.at("kind").get<std::string>();
        e.payload = parsed.at("payload_summary").get<std::string>();
        if (e.index != t.events_.size()) {
            throw Error("transcript parse error: event indices not contiguous");
        }
        t.events_.push_back(std::move(e));
    }
    return t;
}

std::uint64_t Transcript::hash() const {
    const std::string serialized = to_jsonl();
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const unsigned char c : serialized) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

} // namespace qkd
