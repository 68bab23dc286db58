#pragma once

#include "magent/core/message.hpp"
#include "magent/core/types.hpp"

#include <json.hpp>

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace magent {

/// Matches every message type.
inline constexpr std::string_view kAnyType = "*";

struct AtTime
{
    VirtualTime tick = 0;
    bool operator==(const AtTime&) const = default;
};

/// Satisfied by an inbox message whose type matches `type_filter` ("*" matches all) and,
/// when `conversation` is non-empty, whose conversation_id equals it.
struct OnMessage
{
    std::string type_filter{kAnyType};
    std::string conversation;
    bool operator==(const OnMessage&) const = default;

    bool matches(const Message& msg) const noexcept;
};

struct OnArrival
{
    LocationId location;
    bool operator==(const OnArrival&) const = default;
};

using WakeCondition = std::variant<AtTime, OnMessage, OnArrival>;

/// Result of one behavior step.
///
/// Blocked carries any-of wake conditions. An empty list never wakes; that is how a
/// behavior parks itself permanently.
class StepOutcome
{
public:
    enum class Kind
    {
        Running,
        Done,
        Blocked,
    };

    static StepOutcome running() { return StepOutcome(Kind::Running, {}); }
    static StepOutcome done() { return StepOutcome(Kind::Done, {}); }
    static StepOutcome blocked(std::vector<WakeCondition> wake) { return StepOutcome(Kind::Blocked, std::move(wake)); }
    static StepOutcome blocked(WakeCondition wake) { return blocked(std::vector<WakeCondition>{std::move(wake)}); }
    static StepOutcome halted() { return blocked(std::vector<WakeCondition>{}); }

    Kind kind() const noexcept { return kind_; }
    bool is_running() const noexcept { return kind_ == Kind::Running; }
    bool is_done() const noexcept { return kind_ == Kind::Done; }
    bool is_blocked() const noexcept { return kind_ == Kind::Blocked; }
    const std::vector<WakeCondition>& wake() const noexcept { return wake_; }

    bool operator==(const StepOutcome&) const = default;

private:
    StepOutcome(Kind kind, std::vector<WakeCondition> wake) : kind_(kind), wake_(std::move(wake)) {}

    Kind kind_;
    std::vector<WakeCondition> wake_;
};

nlohmann::json to_json(const WakeCondition& wake);
WakeCondition wake_from_json(const nlohmann::json& j);
nlohmann::json to_json(const StepOutcome& outcome);
StepOutcome outcome_from_json(const nlohmann::json& j);

} // namespace magent
