#pragma once

#include "magent/core/action.hpp"
#include "magent/core/behavior.hpp"
#include "magent/core/context.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace magent {

inline constexpr std::string_view kRequestTag = "REQUEST";
inline constexpr std::string_view kAckTag = "ACK";
inline constexpr std::string_view kResultTag = "RESULT";

enum class FireMode
{
    OneShot,
    Cyclic,
};

std::string_view to_string(FireMode mode) noexcept;
FireMode fire_mode_from_string(std::string_view s);

/// One-shot: runs its action on the first step and finishes. A failing action is traced
/// and the task still finishes.
class Task final : public Behavior
{
public:
    explicit Task(ActionDescriptor action) : action_(std::move(action)) {}

    std::string_view kind() const override { return "Task"; }
    BehaviorPtr clone() const override { return std::make_unique<Task>(*this); }
    const ActionDescriptor& action() const noexcept { return action_; }

protected:
    StepOutcome do_step(AgentContext& ctx) override;
    void save_fields(nlohmann::json& out) const override;

private:
    ActionDescriptor action_;
};

/// Evaluates `trigger` every `period` ticks, counted from its first step (the first check
/// happens one period after that). When the trigger holds, `handler` runs.
class Observer final : public Behavior
{
public:
    /// Throws Errc::ZeroPeriod.
    Observer(Ticks period, ActionDescriptor trigger, ActionDescriptor handler, FireMode mode,
             std::string cancel_key = {});

    std::string_view kind() const override { return "Observer"; }
    BehaviorPtr clone() const override { return std::make_unique<Observer>(*this); }

    Ticks period() const noexcept { return period_; }
    std::optional<VirtualTime> anchor() const noexcept { return anchor_; }
    std::uint64_t firings() const noexcept { return firings_; }

    static BehaviorPtr load(const nlohmann::json& j, const LoadContext& ctx);

protected:
    StepOutcome do_step(AgentContext& ctx) override;
    void save_fields(nlohmann::json& out) const override;

private:
    Ticks period_;
    ActionDescriptor trigger_;
    ActionDescriptor handler_;
    FireMode mode_;
    std::string cancel_key_;

    std::optional<VirtualTime> anchor_;
    VirtualTime next_check_ = 0;
    std::uint64_t firings_ = 0;
};

/// Waits for a message matching `type_filter` ("*" for any), consumes it and fires every
/// callback in registration order with the message as trigger.
class Listener final : public Behavior
{
public:
    /// Throws Errc::NoCallbacks.
    Listener(std::string type_filter, std::vector<ActionDescriptor> callbacks, FireMode mode);

    std::string_view kind() const override { return "Listener"; }
    BehaviorPtr clone() const override { return std::make_unique<Listener>(*this); }
    std::uint64_t received() const noexcept { return received_; }

    static BehaviorPtr load(const nlohmann::json& j, const LoadContext& ctx);

protected:
    StepOutcome do_step(AgentContext& ctx) override;
    void save_fields(nlohmann::json& out) const override;

private:
    std::string filter_;
    std::vector<ActionDescriptor> callbacks_;
    FireMode mode_;
    std::uint64_t received_ = 0;
};

/// REQUEST payload: the task the server is asked to run plus the conversation it belongs to.
///
/// Wire form (canonical JSON, keys sorted):
///   {"conversation_id": "<id>", "task": {"name": "<action>", "params": "<utf-8 params>"}}
struct RequestEnvelope
{
    ActionDescriptor task;
    std::string conversation_id;

    bool operator==(const RequestEnvelope&) const = default;
};

Bytes encode_envelope(const RequestEnvelope& env);
/// Throws Errc::MalformedEnvelope.
RequestEnvelope decode_envelope(const Bytes& payload);

/// RESULT payload: {"ok": true, "output": "<utf-8>"} or {"ok": false, "error": "<text>"}.
struct ResultPayload
{
    bool ok = true;
    Bytes output;
    std::string error;

    bool operator==(const ResultPayload&) const = default;
};

Bytes encode_result(const ResultPayload& r);
/// Throws Errc::MalformedEnvelope.
ResultPayload decode_result(const Bytes& payload);

struct ClientTimeouts
{
    Ticks ack = 50;
    Ticks result = 500;
};

/// Request/acknowledge/result initiator. Sends REQUEST on its first step, then waits for
/// ACK (up to `ack` ticks after sending) and RESULT (up to `result` ticks after the ACK).
/// `on_result` receives the RESULT message; `on_failure` fires on either timeout.
class Client final : public Behavior
{
public:
    enum class Phase
    {
        Start,
        AwaitAck,
        AwaitResult,
    };

    /// Throws Errc::InvalidTimeout for a zero timeout.
    Client(AgentId server, RequestEnvelope request, ActionDescriptor on_result, ActionDescriptor on_failure,
           ClientTimeouts timeouts = {});

    std::string_view kind() const override { return "Client"; }
    BehaviorPtr clone() const override { return std::make_unique<Client>(*this); }

    Phase phase() const noexcept { return phase_; }
    const std::string& conversation() const noexcept { return conversation_; }

    static BehaviorPtr load(const nlohmann::json& j, const LoadContext& ctx);

protected:
    StepOutcome do_step(AgentContext& ctx) override;
    void save_fields(nlohmann::json& out) const override;

private:
    StepOutcome wait() const;
    StepOutcome fail(AgentContext& ctx, std::string_view reason);

    AgentId server_;
    RequestEnvelope request_;
    ActionDescriptor on_result_;
    ActionDescriptor on_failure_;
    ClientTimeouts timeouts_;

    Phase phase_ = Phase::Start;
    std::string conversation_;
    VirtualTime deadline_ = 0;
};

/// Cyclic request acceptor. Every valid REQUEST gets its own worker agent at the
/// server's location; the server itself goes straight back to listening. Malformed
/// requests are traced and dropped without an ACK.
class Server final : public Behavior
{
public:
    explicit Server(Ticks processing_ticks = 1) : processing_ticks_(processing_ticks) {}

    std::string_view kind() const override { return "Server"; }
    BehaviorPtr clone() const override { return std::make_unique<Server>(*this); }
    std::uint64_t accepted() const noexcept { return accepted_; }

    static BehaviorPtr load(const nlohmann::json& j, const LoadContext& ctx);

protected:
    StepOutcome do_step(AgentContext& ctx) override;
    void save_fields(nlohmann::json& out) const override;

private:
    Ticks processing_ticks_;
    std::uint64_t accepted_ = 0;
};

/// Worker spawned per request: ACK, wait `processing_ticks`, run the task, RESULT, done.
class ServerWorker final : public Behavior
{
public:
    ServerWorker(Message request, RequestEnvelope envelope, Ticks processing_ticks);

    std::string_view kind() const override { return "ServerWorker"; }
    BehaviorPtr clone() const override { return std::make_unique<ServerWorker>(*this); }

    static BehaviorPtr load(const nlohmann::json& j, const LoadContext& ctx);

protected:
    StepOutcome do_step(AgentContext& ctx) override;
    void save_fields(nlohmann::json& out) const override;

private:
    Message request_;
    RequestEnvelope envelope_;
    Ticks processing_ticks_;
    bool acked_ = false;
    VirtualTime ready_at_ = 0;
};

BehaviorPtr task(ActionDescriptor action);
BehaviorPtr observer(Ticks period, ActionDescriptor trigger, ActionDescriptor handler,
                     FireMode mode = FireMode::OneShot);
BehaviorPtr listener(std::string type_filter, std::vector<ActionDescriptor> callbacks,
                     FireMode mode = FireMode::Cyclic);
BehaviorPtr client(AgentId server, RequestEnvelope request, ActionDescriptor on_result, ActionDescriptor on_failure,
                   ClientTimeouts timeouts = {});
BehaviorPtr server(Ticks processing_ticks = 1);

void register_basic_behaviors(BehaviorCodec& codec);

/// Built-in actions: noop, fail, trace.note, send, state.set, clock.at_least, always,
/// never, state.has, self.terminate, fsm.emit.
void register_basic_actions(ActionRegistry& actions);

} // namespace magent
