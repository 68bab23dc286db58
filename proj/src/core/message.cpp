#include "magent/core/message.hpp"

#include "magent/core/error.hpp"

namespace magent {

Message make_message(AgentId sender, AgentId receiver, std::string type_tag, std::string conversation_id,
                     Bytes payload, VirtualTime now)
{
    if (type_tag.empty())
    {
        throw Error(Errc::EmptyTypeTag, "message type_tag must not be empty");
    }
    return Message{sender, receiver, std::move(type_tag), std::move(conversation_id), std::move(payload), now};
}

nlohmann::json to_json(const Message& msg)
{
    return nlohmann::json{{"sender", msg.sender.value},
                          {"receiver", msg.receiver.value},
                          {"type", msg.type_tag},
                          {"conversation", msg.conversation_id},
                          {"payload", hex_encode(msg.payload)},
                          {"sent_at", msg.sent_at}};
}

Message message_from_json(const nlohmann::json& j)
{
    try
    {
        return Message{AgentId{j.at("sender").get<std::uint64_t>()},
                       AgentId{j.at("receiver").get<std::uint64_t>()},
                       j.at("type").get<std::string>(),
                       j.at("conversation").get<std::string>(),
                       hex_decode(j.at("payload").get<std::string>()),
                       j.at("sent_at").get<VirtualTime>()};
    }
    catch (const nlohmann::json::exception& e)
    {
        throw Error(Errc::Serialization, std::string("message: ") + e.what());
    }
}

std::string hex_encode(const Bytes& bytes)
{
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (unsigned char c : bytes)
    {
        out.push_back(kDigits[c >> 4]);
        out.push_back(kDigits[c & 0x0f]);
    }
    return out;
}

Bytes hex_decode(std::string_view hex)
{
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    if (hex.size() % 2 != 0)
    {
        throw Error(Errc::Serialization, "odd-length hex string");
    }
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2)
    {
        const int hi = nibble(hex[i]);
        const int lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0)
        {
            throw Error(Errc::Serialization, "invalid hex digit");
        }
        out.push_back(static_cast<char>((hi << 4) | lo));
    }
    return out;
}

} // namespace magent
