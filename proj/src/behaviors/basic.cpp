#include "magent/behaviors/basic.hpp"

#include "magent/core/error.hpp"

#include <charconv>

namespace magent {

std::string_view to_string(FireMode mode) noexcept
{
    return mode == FireMode::OneShot ? "oneshot" : "cyclic";
}

FireMode fire_mode_from_string(std::string_view s)
{
    if (s == "oneshot" || s == "OneShot")
        return FireMode::OneShot;
    if (s == "cyclic" || s == "Cyclic")
        return FireMode::Cyclic;
    throw Error(Errc::Serialization, "unknown fire mode " + std::string(s));
}

namespace {

nlohmann::json actions_to_json(const std::vector<ActionDescriptor>& actions)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& a : actions)
        out.push_back(to_json(a));
    return out;
}

std::vector<ActionDescriptor> actions_from_json(const nlohmann::json& j)
{
    std::vector<ActionDescriptor> out;
    for (const auto& a : j)
        out.push_back(action_from_json(a));
    return out;
}

std::uint64_t parse_u64(std::string_view s, std::string_view what)
{
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument(std::string(what) + ": not an integer: '" + std::string(s) + "'");
    return v;
}

} // namespace

// ---------------------------------------------------------------------------- Task

StepOutcome Task::do_step(AgentContext& ctx)
{
    ctx.invoke_guarded(action_);
    return StepOutcome::done();
}

void Task::save_fields(nlohmann::json& out) const
{
    out["action"] = to_json(action_);
}

// ---------------------------------------------------------------------------- Observer

Observer::Observer(Ticks period, ActionDescriptor trigger, ActionDescriptor handler, FireMode mode,
                   std::string cancel_key)
    : period_(period), trigger_(std::move(trigger)), handler_(std::move(handler)), mode_(mode),
      cancel_key_(std::move(cancel_key))
{
    if (period_ == 0)
    {
        throw Error(Errc::ZeroPeriod, "observer period must be at least one tick");
    }
}

StepOutcome Observer::do_step(AgentContext& ctx)
{
    const VirtualTime now = ctx.now();
    if (!cancel_key_.empty() && ctx.state().contains(cancel_key_))
    {
        return StepOutcome::done();
    }
    if (!anchor_)
    {
        anchor_ = now;
        next_check_ = now + period_;
        return StepOutcome::blocked(AtTime{next_check_});
    }
    if (now < next_check_)
    {
        return StepOutcome::blocked(AtTime{next_check_});
    }
    if ((now - *anchor_) % period_ != 0)
    {
        // Woken late (e.g. after a migration); resume on the grid.
        next_check_ = now + (period_ - (now - *anchor_) % period_);
        return StepOutcome::blocked(AtTime{next_check_});
    }

    next_check_ = now + period_;
    if (truthy(ctx.invoke_guarded(trigger_)))
    {
        ++firings_;
        ctx.invoke_guarded(handler_);
        if (mode_ == FireMode::OneShot)
        {
            return StepOutcome::done();
        }
    }
    return StepOutcome::blocked(AtTime{next_check_});
}

void Observer::save_fields(nlohmann::json& out) const
{
    out["period"] = period_;
    out["trigger"] = to_json(trigger_);
    out["handler"] = to_json(handler_);
    out["mode"] = to_string(mode_);
    out["cancel_key"] = cancel_key_;
    out["anchor"] = anchor_ ? nlohmann::json(*anchor_) : nlohmann::json(nullptr);
    out["next_check"] = next_check_;
    out["firings"] = firings_;
}

BehaviorPtr Observer::load(const nlohmann::json& j, const LoadContext&)
{
    auto b = std::make_unique<Observer>(j.at("period").get<Ticks>(), action_from_json(j.at("trigger")),
                                        action_from_json(j.at("handler")),
                                        fire_mode_from_string(j.value("mode", std::string("oneshot"))),
                                        j.value("cancel_key", std::string{}));
    if (auto it = j.find("anchor"); it != j.end() && !it->is_null())
        b->anchor_ = it->get<VirtualTime>();
    b->next_check_ = j.value("next_check", VirtualTime{0});
    b->firings_ = j.value("firings", std::uint64_t{0});
    return b;
}

// ---------------------------------------------------------------------------- Listener

Listener::Listener(std::string type_filter, std::vector<ActionDescriptor> callbacks, FireMode mode)
    : filter_(std::move(type_filter)), callbacks_(std::move(callbacks)), mode_(mode)
{
    if (callbacks_.empty())
    {
        throw Error(Errc::NoCallbacks, "listener on '" + filter_ + "' has no callbacks");
    }
    if (filter_.empty())
    {
        throw Error(Errc::EmptyTypeTag, "listener type filter must not be empty");
    }
}

StepOutcome Listener::do_step(AgentContext& ctx)
{
    const OnMessage wait{filter_, {}};
    auto msg = ctx.take(wait);
    if (!msg)
    {
        return StepOutcome::blocked(wait);
    }
    ++received_;
    for (const auto& cb : callbacks_)
    {
        ctx.invoke_guarded(cb, &*msg);
    }
    if (mode_ == FireMode::OneShot)
    {
        return StepOutcome::done();
    }
    return StepOutcome::blocked(wait);
}

void Listener::save_fields(nlohmann::json& out) const
{
    out["filter"] = filter_;
    out["callbacks"] = actions_to_json(callbacks_);
    out["mode"] = to_string(mode_);
    out["received"] = received_;
}

BehaviorPtr Listener::load(const nlohmann::json& j, const LoadContext&)
{
    auto b = std::make_unique<Listener>(j.value("filter", std::string(kAnyType)), actions_from_json(j.at("callbacks")),
                                        fire_mode_from_string(j.value("mode", std::string("cyclic"))));
    b->received_ = j.value("received", std::uint64_t{0});
    return b;
}

// ---------------------------------------------------------------------------- envelopes

Bytes encode_envelope(const RequestEnvelope& env)
{
    const nlohmann::json j{{"conversation_id", env.conversation_id},
                           {"task", {{"name", env.task.name}, {"params", env.task.params}}}};
    return j.dump();
}

RequestEnvelope decode_envelope(const Bytes& payload)
{
    try
    {
        const auto j = nlohmann::json::parse(payload);
        RequestEnvelope env;
        env.conversation_id = j.at("conversation_id").get<std::string>();
        const auto& task = j.at("task");
        env.task.name = task.at("name").get<std::string>();
        env.task.params = task.at("params").get<std::string>();
        if (env.task.name.empty())
            throw Error(Errc::MalformedEnvelope, "empty task name");
        return env;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw Error(Errc::MalformedEnvelope, e.what());
    }
}

Bytes encode_result(const ResultPayload& r)
{
    nlohmann::json j{{"ok", r.ok}};
    if (r.ok)
        j["output"] = r.output;
    else
        j["error"] = r.error;
    return j.dump();
}

ResultPayload decode_result(const Bytes& payload)
{
    try
    {
        const auto j = nlohmann::json::parse(payload);
        ResultPayload r;
        r.ok = j.at("ok").get<bool>();
        if (r.ok)
            r.output = j.at("output").get<std::string>();
        else
            r.error = j.at("error").get<std::string>();
        return r;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw Error(Errc::MalformedEnvelope, e.what());
    }
}

// ---------------------------------------------------------------------------- Client

namespace {

std::string_view phase_name(Client::Phase p)
{
    switch (p)
    {
    case Client::Phase::Start: return "start";
    case Client::Phase::AwaitAck: return "await_ack";
    case Client::Phase::AwaitResult: return "await_result";
    }
    return "start";
}

Client::Phase phase_from_name(std::string_view s)
{
    if (s == "await_ack")
        return Client::Phase::AwaitAck;
    if (s == "await_result")
        return Client::Phase::AwaitResult;
    return Client::Phase::Start;
}

} // namespace

Client::Client(AgentId server, RequestEnvelope request, ActionDescriptor on_result, ActionDescriptor on_failure,
               ClientTimeouts timeouts)
    : server_(server), request_(std::move(request)), on_result_(std::move(on_result)),
      on_failure_(std::move(on_failure)), timeouts_(timeouts)
{
    if (timeouts_.ack == 0 || timeouts_.result == 0)
    {
        throw Error(Errc::InvalidTimeout, "client timeouts must be at least one tick");
    }
}

StepOutcome Client::wait() const
{
    const std::string_view tag = phase_ == Phase::AwaitAck ? kAckTag : kResultTag;
    return StepOutcome::blocked({OnMessage{std::string(tag), conversation_}, AtTime{deadline_}});
}

StepOutcome Client::fail(AgentContext& ctx, std::string_view reason)
{
    ctx.emit(TraceKind::Custom, {{"client", "failure"}, {"reason", reason}, {"conversation", conversation_}});
    ctx.invoke_guarded(on_failure_);
    return StepOutcome::done();
}

StepOutcome Client::do_step(AgentContext& ctx)
{
    const VirtualTime now = ctx.now();
    if (phase_ == Phase::Start)
    {
        conversation_ = request_.conversation_id.empty() ? ctx.new_conversation_id() : request_.conversation_id;
        RequestEnvelope env = request_;
        env.conversation_id = conversation_;
        ctx.send(server_, std::string(kRequestTag), conversation_, encode_envelope(env));
        deadline_ = saturating_add(now, timeouts_.ack);
        phase_ = Phase::AwaitAck;
        return wait();
    }
    if (phase_ == Phase::AwaitAck)
    {
        if (!ctx.take(OnMessage{std::string(kAckTag), conversation_}))
        {
            return now >= deadline_ ? fail(ctx, "ack_timeout") : wait();
        }
        deadline_ = saturating_add(now, timeouts_.result);
        phase_ = Phase::AwaitResult;
    }
    if (auto result = ctx.take(OnMessage{std::string(kResultTag), conversation_}))
    {
        ctx.invoke_guarded(on_result_, &*result);
        return StepOutcome::done();
    }
    return now >= deadline_ ? fail(ctx, "result_timeout") : wait();
}

void Client::save_fields(nlohmann::json& out) const
{
    out["server"] = server_.value;
    out["request"] = {{"task", to_json(request_.task)}, {"conversation_id", request_.conversation_id}};
    out["on_result"] = to_json(on_result_);
    out["on_failure"] = to_json(on_failure_);
    out["ack_timeout"] = timeouts_.ack;
    out["result_timeout"] = timeouts_.result;
    out["phase"] = phase_name(phase_);
    out["conversation"] = conversation_;
    out["deadline"] = deadline_;
}

BehaviorPtr Client::load(const nlohmann::json& j, const LoadContext& ctx)
{
    const auto& req = j.at("request");
    RequestEnvelope env{action_from_json(req.at("task")), req.value("conversation_id", std::string{})};
    ClientTimeouts t{j.value("ack_timeout", Ticks{50}), j.value("result_timeout", Ticks{500})};
    auto noop = nlohmann::json("noop");
    auto b = std::make_unique<Client>(ctx.agent(j.at("server")), std::move(env),
                                      action_from_json(j.value("on_result", noop)),
                                      action_from_json(j.value("on_failure", noop)), t);
    b->phase_ = phase_from_name(j.value("phase", std::string("start")));
    b->conversation_ = j.value("conversation", std::string{});
    b->deadline_ = j.value("deadline", VirtualTime{0});
    return b;
}

// ---------------------------------------------------------------------------- Server

StepOutcome Server::do_step(AgentContext& ctx)
{
    const OnMessage wait{std::string(kRequestTag), {}};
    while (auto msg = ctx.take(wait))
    {
        RequestEnvelope env;
        try
        {
            env = decode_envelope(msg->payload);
        }
        catch (const Error& e)
        {
            ctx.emit(TraceKind::Custom, {{"error", e.what()},
                                         {"server", "malformed_request"},
                                         {"from", msg->sender.value},
                                         {"conversation", msg->conversation_id}});
            continue;
        }
        ++accepted_;
        std::vector<BehaviorPtr> worker;
        worker.push_back(std::make_unique<ServerWorker>(*msg, std::move(env), processing_ticks_));
        ctx.spawn(ctx.location(), std::move(worker));
    }
    return StepOutcome::blocked(wait);
}

void Server::save_fields(nlohmann::json& out) const
{
    out["processing_ticks"] = processing_ticks_;
    out["accepted"] = accepted_;
}

BehaviorPtr Server::load(const nlohmann::json& j, const LoadContext&)
{
    auto b = std::make_unique<Server>(j.value("processing_ticks", Ticks{1}));
    b->accepted_ = j.value("accepted", std::uint64_t{0});
    return b;
}

// ---------------------------------------------------------------------------- ServerWorker

ServerWorker::ServerWorker(Message request, RequestEnvelope envelope, Ticks processing_ticks)
    : request_(std::move(request)), envelope_(std::move(envelope)), processing_ticks_(processing_ticks)
{
}

StepOutcome ServerWorker::do_step(AgentContext& ctx)
{
    if (!acked_)
    {
        ctx.send(request_.sender, std::string(kAckTag), envelope_.conversation_id);
        acked_ = true;
        ready_at_ = saturating_add(ctx.now(), processing_ticks_);
        if (ctx.now() < ready_at_)
        {
            return StepOutcome::blocked(AtTime{ready_at_});
        }
    }
    if (ctx.now() < ready_at_)
    {
        return StepOutcome::blocked(AtTime{ready_at_});
    }

    ResultPayload result;
    try
    {
        result.output = ctx.invoke(envelope_.task, &request_).value_or(Bytes{});
    }
    catch (const std::exception& e)
    {
        result.ok = false;
        result.error = e.what();
    }
    ctx.send(request_.sender, std::string(kResultTag), envelope_.conversation_id, encode_result(result));
    return StepOutcome::done();
}

void ServerWorker::save_fields(nlohmann::json& out) const
{
    out["request"] = to_json(request_);
    out["envelope"] = nlohmann::json::parse(encode_envelope(envelope_));
    out["processing_ticks"] = processing_ticks_;
    out["acked"] = acked_;
    out["ready_at"] = ready_at_;
}

BehaviorPtr ServerWorker::load(const nlohmann::json& j, const LoadContext&)
{
    auto b = std::make_unique<ServerWorker>(message_from_json(j.at("request")),
                                            decode_envelope(j.at("envelope").dump()),
                                            j.at("processing_ticks").get<Ticks>());
    b->acked_ = j.value("acked", false);
    b->ready_at_ = j.value("ready_at", VirtualTime{0});
    return b;
}

// ---------------------------------------------------------------------------- factories

BehaviorPtr task(ActionDescriptor a) { return std::make_unique<Task>(std::move(a)); }

BehaviorPtr observer(Ticks period, ActionDescriptor trigger, ActionDescriptor handler, FireMode mode)
{
    return std::make_unique<Observer>(period, std::move(trigger), std::move(handler), mode);
}

BehaviorPtr listener(std::string type_filter, std::vector<ActionDescriptor> callbacks, FireMode mode)
{
    return std::make_unique<Listener>(std::move(type_filter), std::move(callbacks), mode);
}

BehaviorPtr client(AgentId server, RequestEnvelope request, ActionDescriptor on_result, ActionDescriptor on_failure,
                   ClientTimeouts timeouts)
{
    return std::make_unique<Client>(server, std::move(request), std::move(on_result), std::move(on_failure), timeouts);
}

BehaviorPtr server(Ticks processing_ticks) { return std::make_unique<Server>(processing_ticks); }

void register_basic_behaviors(BehaviorCodec& codec)
{
    codec.add("Task", [](const nlohmann::json& j, const LoadContext&) -> BehaviorPtr {
        return task(action_from_json(j.at("action")));
    });
    codec.add("Observer", &Observer::load);
    codec.add("Listener", &Listener::load);
    codec.add("Client", &Client::load);
    codec.add("Server", &Server::load);
    codec.add("ServerWorker", &ServerWorker::load);
}

void register_basic_actions(ActionRegistry& actions)
{
    actions.add("noop", [](AgentContext&, const ActionCall&) -> std::optional<Bytes> { return std::nullopt; });
    actions.add("fail", [](AgentContext&, const ActionCall& call) -> std::optional<Bytes> {
        throw std::runtime_error(call.params.empty() ? std::string("action failed") : call.params);
    });
    actions.add("trace.note", [](AgentContext& ctx, const ActionCall& call) -> std::optional<Bytes> {
        nlohmann::json detail{{"note", call.params}};
        if (call.trigger)
        {
            detail["message_type"] = call.trigger->type_tag;
            detail["from"] = call.trigger->sender.value;
        }
        ctx.emit(TraceKind::Custom, std::move(detail));
        return std::nullopt;
    });
    // params: {"to": id, "type": tag, "payload": string, "conversation": string}
    actions.add("send", [](AgentContext& ctx, const ActionCall& call) -> std::optional<Bytes> {
        const auto j = nlohmann::json::parse(call.params);
        auto conv = j.value("conversation", std::string{});
        if (conv.empty())
            conv = ctx.new_conversation_id();
        ctx.send(AgentId{j.at("to").get<std::uint64_t>()}, j.at("type").get<std::string>(), conv,
                 j.value("payload", std::string{}));
        return std::nullopt;
    });
    actions.add("state.set", [](AgentContext& ctx, const ActionCall& call) -> std::optional<Bytes> {
        const auto j = nlohmann::json::parse(call.params);
        ctx.state()[j.at("key").get<std::string>()] = j.value("value", std::string{});
        return std::nullopt;
    });
    actions.add("state.has", [](AgentContext& ctx, const ActionCall& call) -> std::optional<Bytes> {
        return ctx.state().contains(call.params) ? "true" : "false";
    });
    actions.add("clock.at_least", [](AgentContext& ctx, const ActionCall& call) -> std::optional<Bytes> {
        return ctx.now() >= parse_u64(call.params, "clock.at_least") ? "true" : "false";
    });
    actions.add("always", [](AgentContext&, const ActionCall&) -> std::optional<Bytes> { return "true"; });
    actions.add("never", [](AgentContext&, const ActionCall&) -> std::optional<Bytes> { return "false"; });
    actions.add("self.terminate", [](AgentContext& ctx, const ActionCall&) -> std::optional<Bytes> {
        ctx.terminate_self();
        return std::nullopt;
    });
    actions.add("fsm.emit", [](AgentContext&, const ActionCall& call) -> std::optional<Bytes> {
        return call.params;
    });
}

} // namespace magent
