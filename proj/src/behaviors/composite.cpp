#include "magent/behaviors/composite.hpp"

#include "magent/core/error.hpp"

#include <algorithm>

namespace magent {

// ---------------------------------------------------------------------------- ChildSlot

ChildSlot::ChildSlot(const ChildSlot& other)
    : behavior(other.behavior ? other.behavior->clone() : nullptr), last(other.last), steps(other.steps)
{
}

ChildSlot& ChildSlot::operator=(const ChildSlot& other)
{
    if (this != &other)
    {
        behavior = other.behavior ? other.behavior->clone() : nullptr;
        last = other.last;
        steps = other.steps;
    }
    return *this;
}

StepOutcome ChildSlot::step(AgentContext& ctx)
{
    last = behavior->step(ctx);
    ++steps;
    return last;
}

nlohmann::json save_children(const std::vector<ChildSlot>& children)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& c : children)
    {
        auto j = c.behavior->save();
        j["$last"] = to_json(c.last);
        j["$steps"] = c.steps;
        out.push_back(std::move(j));
    }
    return out;
}

std::vector<ChildSlot> load_children(const nlohmann::json& j, const LoadContext& ctx)
{
    std::vector<ChildSlot> out;
    for (const auto& c : j)
    {
        ChildSlot slot(ctx.behavior(c));
        if (auto it = c.find("$last"); it != c.end())
            slot.last = outcome_from_json(*it);
        slot.steps = c.value("$steps", std::uint64_t{0});
        out.push_back(std::move(slot));
    }
    return out;
}

namespace {

std::vector<ChildSlot> wrap(std::vector<BehaviorPtr> children)
{
    std::vector<ChildSlot> out;
    out.reserve(children.size());
    for (auto& c : children)
        out.emplace_back(std::move(c));
    return out;
}

} // namespace

// ---------------------------------------------------------------------------- Sequential

Sequential::Sequential(std::vector<BehaviorPtr> children) : children_(wrap(std::move(children))) {}

void Sequential::reorder(const std::vector<std::size_t>& order)
{
    std::size_t first_pending = current_;
    if (first_pending < children_.size() &&
        (children_[first_pending].steps > 0 || children_[first_pending].finished()))
    {
        ++first_pending;
    }
    std::vector<bool> seen(children_.size(), false);
    for (std::size_t idx : order)
    {
        if (idx >= children_.size())
            throw Error(Errc::ReorderStartedChild, "child index " + std::to_string(idx) + " out of range");
        if (idx < first_pending)
            throw Error(Errc::ReorderStartedChild, "child " + std::to_string(idx) + " has already started");
        if (seen[idx])
            throw Error(Errc::ReorderStartedChild, "child " + std::to_string(idx) + " listed twice");
        seen[idx] = true;
    }
    if (order.size() != children_.size() - first_pending)
    {
        throw Error(Errc::ReorderStartedChild, "new order must list every pending child exactly once");
    }
    std::vector<ChildSlot> reordered;
    reordered.reserve(children_.size());
    for (std::size_t i = 0; i < first_pending; ++i)
        reordered.push_back(std::move(children_[i]));
    for (std::size_t idx : order)
        reordered.push_back(std::move(children_[idx]));
    children_ = std::move(reordered);
}

StepOutcome Sequential::do_step(AgentContext& ctx)
{
    while (current_ < children_.size() && children_[current_].finished())
        ++current_;
    if (current_ == children_.size())
        return StepOutcome::done();

    auto& child = children_[current_];
    if (!ctx.runnable(child.last))
        return child.last;

    const auto out = child.step(ctx);
    if (!out.is_done())
        return out;
    ++current_;
    return current_ == children_.size() ? StepOutcome::done() : StepOutcome::running();
}

void Sequential::save_fields(nlohmann::json& out) const
{
    out["children"] = save_children(children_);
    out["current"] = current_;
}

BehaviorPtr Sequential::load(const nlohmann::json& j, const LoadContext& ctx)
{
    auto b = std::make_unique<Sequential>(std::vector<BehaviorPtr>{});
    b->children_ = load_children(j.at("children"), ctx);
    b->current_ = j.value("current", std::size_t{0});
    return b;
}

// ---------------------------------------------------------------------------- Parallel

Parallel::Parallel(std::vector<BehaviorPtr> children, Completion completion)
    : children_(wrap(std::move(children))), completion_(completion)
{
}

StepOutcome Parallel::do_step(AgentContext& ctx)
{
    for (auto& child : children_)
    {
        if (!child.finished() && ctx.runnable(child.last))
            child.step(ctx);
    }

    const auto finished = static_cast<std::size_t>(
        std::count_if(children_.begin(), children_.end(), [](const ChildSlot& c) { return c.finished(); }));
    if (finished == children_.size() || (completion_ == Completion::Any && finished > 0))
        return StepOutcome::done();

    std::vector<WakeCondition> wake;
    for (const auto& child : children_)
    {
        if (child.finished())
            continue;
        if (child.last.is_running())
            return StepOutcome::running();
        wake.insert(wake.end(), child.last.wake().begin(), child.last.wake().end());
    }
    return StepOutcome::blocked(std::move(wake));
}

void Parallel::save_fields(nlohmann::json& out) const
{
    out["children"] = save_children(children_);
    out["completion"] = completion_ == Completion::All ? "all" : "any";
}

BehaviorPtr Parallel::load(const nlohmann::json& j, const LoadContext& ctx)
{
    const auto mode = j.value("completion", std::string("all"));
    if (mode != "all" && mode != "any")
        throw Error(Errc::Serialization, "parallel completion must be 'all' or 'any'");
    auto b = std::make_unique<Parallel>(std::vector<BehaviorPtr>{}, mode == "any" ? Completion::Any : Completion::All);
    b->children_ = load_children(j.at("children"), ctx);
    return b;
}

// ---------------------------------------------------------------------------- FSM

void FsmDefinition::validate() const
{
    if (states.empty())
        throw Error(Errc::InvalidFsm, "no states");
    if (!states.contains(start))
        throw Error(Errc::InvalidFsm, "start state '" + start + "' is not a state");
    for (const auto& t : terminals)
    {
        if (!states.contains(t))
            throw Error(Errc::InvalidFsm, "terminal '" + t + "' is not a state");
    }
    for (const auto& [key, to] : transitions)
    {
        const auto& [from, event] = key;
        if (event.empty())
            throw Error(Errc::InvalidFsm, "empty event label on transition from '" + from + "'");
        if (!states.contains(from))
            throw Error(Errc::InvalidFsm, "transition source '" + from + "' is not a state");
        if (!states.contains(to))
            throw Error(Errc::InvalidFsm, "transition target '" + to + "' is not a state");
    }
}

nlohmann::json to_json(const FsmDefinition& def)
{
    nlohmann::json states = nlohmann::json::object();
    for (const auto& [name, activity] : def.states)
        states[name] = to_json(activity);
    nlohmann::json transitions = nlohmann::json::array();
    for (const auto& [key, to] : def.transitions)
        transitions.push_back({{"from", key.first}, {"event", key.second}, {"to", to}});
    return {{"states", std::move(states)},
            {"transitions", std::move(transitions)},
            {"start", def.start},
            {"terminals", def.terminals}};
}

FsmDefinition fsm_definition_from_json(const nlohmann::json& j)
{
    FsmDefinition def;
    try
    {
        for (const auto& [name, activity] : j.at("states").items())
            def.states[name] = action_from_json(activity);
        for (const auto& t : j.value("transitions", nlohmann::json::array()))
        {
            auto key = std::make_pair(t.at("from").get<std::string>(), t.at("event").get<std::string>());
            if (def.transitions.contains(key))
                throw Error(Errc::InvalidFsm,
                            "two transitions for ('" + key.first + "', '" + key.second + "')");
            def.transitions.emplace(std::move(key), t.at("to").get<std::string>());
        }
        def.start = j.at("start").get<std::string>();
        for (const auto& t : j.value("terminals", nlohmann::json::array()))
            def.terminals.insert(t.get<std::string>());
    }
    catch (const nlohmann::json::exception& e)
    {
        throw Error(Errc::InvalidFsm, e.what());
    }
    def.validate();
    return def;
}

Fsm::Fsm(FsmDefinition def) : def_(std::move(def))
{
    def_.validate();
}

bool Fsm::enter(AgentContext& ctx, const std::string& state)
{
    state_ = state;
    path_.push_back(state);
    ctx.emit(TraceKind::Custom, {{"fsm", "enter"}, {"state", state}});
    auto label = ctx.invoke_guarded(def_.states.at(state));
    pending_.reset();
    if (label && !label->empty())
        pending_ = std::move(*label);
    return def_.terminals.contains(state);
}

StepOutcome Fsm::idle() const
{
    if (pending_)
        return StepOutcome::running();
    return StepOutcome::blocked(OnMessage{std::string(kFsmEventTag), {}});
}

StepOutcome Fsm::do_step(AgentContext& ctx)
{
    if (state_.empty())
    {
        return enter(ctx, def_.start) ? StepOutcome::done() : idle();
    }

    std::string event;
    if (pending_)
    {
        event = std::move(*pending_);
        pending_.reset();
    }
    else if (auto msg = ctx.take(OnMessage{std::string(kFsmEventTag), {}}))
    {
        event = msg->payload;
    }
    else
    {
        return idle();
    }

    auto it = def_.transitions.find({state_, event});
    if (it == def_.transitions.end())
    {
        ctx.emit(TraceKind::Custom, {{"error", "UndefinedTransition"}, {"fsm", "undefined"}, {"state", state_},
                                     {"event", event}});
        return idle();
    }
    return enter(ctx, it->second) ? StepOutcome::done() : idle();
}

void Fsm::save_fields(nlohmann::json& out) const
{
    out.update(to_json(def_));
    out["state"] = state_;
    out["path"] = path_;
    out["pending"] = pending_ ? nlohmann::json(*pending_) : nlohmann::json(nullptr);
}

BehaviorPtr Fsm::load(const nlohmann::json& j, const LoadContext&)
{
    auto b = std::make_unique<Fsm>(fsm_definition_from_json(j));
    b->state_ = j.value("state", std::string{});
    b->path_ = j.value("path", std::vector<std::string>{});
    if (auto it = j.find("pending"); it != j.end() && !it->is_null())
        b->pending_ = it->get<std::string>();
    return b;
}

// ---------------------------------------------------------------------------- factories

BehaviorPtr sequential(std::vector<BehaviorPtr> children) { return std::make_unique<Sequential>(std::move(children)); }

BehaviorPtr parallel(std::vector<BehaviorPtr> children, Completion completion)
{
    return std::make_unique<Parallel>(std::move(children), completion);
}

BehaviorPtr fsm(FsmDefinition def) { return std::make_unique<Fsm>(std::move(def)); }

void register_composite_behaviors(BehaviorCodec& codec)
{
    codec.add("Sequential", &Sequential::load);
    codec.add("Parallel", &Parallel::load);
    codec.add("Fsm", &Fsm::load);
}

} // namespace magent
