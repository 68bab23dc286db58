#include "magent/core/outcome.hpp"

#include "magent/core/error.hpp"

namespace magent {

bool OnMessage::matches(const Message& msg) const noexcept
{
    if (type_filter != kAnyType && type_filter != msg.type_tag)
    {
        return false;
    }
    return conversation.empty() || conversation == msg.conversation_id;
}

nlohmann::json to_json(const WakeCondition& wake)
{
    return std::visit(
        [](const auto& w) -> nlohmann::json {
            using T = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<T, AtTime>)
                return {{"at", w.tick}};
            else if constexpr (std::is_same_v<T, OnMessage>)
                return {{"message", w.type_filter}, {"conversation", w.conversation}};
            else
                return {{"arrival", w.location.value}};
        },
        wake);
}

WakeCondition wake_from_json(const nlohmann::json& j)
{
    if (j.contains("at"))
        return AtTime{j.at("at").get<VirtualTime>()};
    if (j.contains("message"))
        return OnMessage{j.at("message").get<std::string>(), j.value("conversation", std::string{})};
    if (j.contains("arrival"))
        return OnArrival{LocationId{j.at("arrival").get<std::uint64_t>()}};
    throw Error(Errc::Serialization, "unrecognized wake condition: " + j.dump());
}

nlohmann::json to_json(const StepOutcome& outcome)
{
    switch (outcome.kind())
    {
    case StepOutcome::Kind::Running: return {{"state", "running"}};
    case StepOutcome::Kind::Done: return {{"state", "done"}};
    case StepOutcome::Kind::Blocked: break;
    }
    nlohmann::json wake = nlohmann::json::array();
    for (const auto& w : outcome.wake())
    {
        wake.push_back(to_json(w));
    }
    return {{"state", "blocked"}, {"wake", std::move(wake)}};
}

StepOutcome outcome_from_json(const nlohmann::json& j)
{
    const auto state = j.at("state").get<std::string>();
    if (state == "running")
        return StepOutcome::running();
    if (state == "done")
        return StepOutcome::done();
    if (state != "blocked")
        throw Error(Errc::Serialization, "unknown step outcome " + state);
    std::vector<WakeCondition> wake;
    for (const auto& w : j.at("wake"))
    {
        wake.push_back(wake_from_json(w));
    }
    return StepOutcome::blocked(std::move(wake));
}

} // namespace magent
