#pragma once

#include "magent/core/types.hpp"

#include <json.hpp>

#include <string>

namespace magent {

/// Typed, addressed unit of communication between agents.
struct Message
{
    AgentId sender;
    AgentId receiver;
    std::string type_tag;
    std::string conversation_id;
    Bytes payload;
    VirtualTime sent_at = 0;

    bool operator==(const Message&) const = default;
};

/// Throws Errc::EmptyTypeTag when `type_tag` is empty. Self-addressed messages are legal.
Message make_message(AgentId sender, AgentId receiver, std::string type_tag, std::string conversation_id,
                     Bytes payload, VirtualTime now);

nlohmann::json to_json(const Message& msg);
Message message_from_json(const nlohmann::json& j);

/// Lower-case hex encoding used wherever raw bytes end up inside JSON.
std::string hex_encode(const Bytes& bytes);
Bytes hex_decode(std::string_view hex);

} // namespace magent
