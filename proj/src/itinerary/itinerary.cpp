#include "magent/itinerary/itinerary.hpp"

#include "magent/core/error.hpp"

#include <algorithm>
#include <cmath>

namespace magent {

// ---------------------------------------------------------------------------- Route

void Route::validate() const
{
    if (objectives.empty())
    {
        throw Error(Errc::EmptyRoute, "route has no objectives");
    }
    for (std::size_t i = 0; i < objectives.size(); ++i)
    {
        if (objectives[i].earliest_offset > objectives[i].latest_offset)
        {
            throw Error(Errc::InvalidObjective, "objective " + std::to_string(i) + ": earliest " +
                                                    std::to_string(objectives[i].earliest_offset) + " > latest " +
                                                    std::to_string(objectives[i].latest_offset));
        }
    }
}

std::pair<VirtualTime, VirtualTime> Route::window(std::size_t i) const
{
    const auto& o = objectives.at(i);
    return {saturating_add(base_time, o.earliest_offset), saturating_add(base_time, o.latest_offset)};
}

ArrivalClass classify_arrival(VirtualTime window_start, VirtualTime window_end, VirtualTime arrival)
{
    if (arrival < window_start)
        return ArrivedEarly{window_start};
    if (arrival > window_end)
        return ArrivedLate{arrival - window_end};
    return ArrivedOnTime{};
}

// ---------------------------------------------------------------------------- DelayEstimator

DelayEstimator::DelayEstimator(double alpha, Ticks default_estimate) : default_(default_estimate)
{
    if (!(alpha >= 0.0 && alpha <= 1.0))
    {
        throw std::invalid_argument("estimator alpha must lie in [0, 1]");
    }
    alpha_fp_ = static_cast<std::int64_t>(std::llround(alpha * kScale));
}

std::int64_t DelayEstimator::raw(LocationId from, LocationId to) const
{
    auto it = links_.find({from, to});
    return it == links_.end() ? static_cast<std::int64_t>(default_) * kScale : it->second;
}

double DelayEstimator::estimate(LocationId from, LocationId to) const
{
    return static_cast<double>(raw(from, to)) / kScale;
}

Ticks DelayEstimator::estimate_ticks(LocationId from, LocationId to) const
{
    const auto r = raw(from, to);
    return static_cast<Ticks>((r + kScale - 1) / kScale);
}

void DelayEstimator::observe(LocationId from, LocationId to, Ticks observed)
{
    const __int128 prior = raw(from, to);
    const __int128 obs = static_cast<__int128>(observed) * kScale;
    const __int128 mixed = alpha_fp_ * obs + (kScale - alpha_fp_) * prior;
    links_[{from, to}] = static_cast<std::int64_t>((mixed + kScale / 2) / kScale);
}

nlohmann::json DelayEstimator::to_json() const
{
    nlohmann::json links = nlohmann::json::array();
    for (const auto& [link, value] : links_)
        links.push_back({link.first.value, link.second.value, value});
    return {{"alpha_fp", alpha_fp_}, {"default", default_}, {"links", std::move(links)}};
}

DelayEstimator DelayEstimator::from_json(const nlohmann::json& j)
{
    DelayEstimator est(0.0, j.at("default").get<Ticks>());
    est.alpha_fp_ = j.at("alpha_fp").get<std::int64_t>();
    for (const auto& l : j.at("links"))
        est.links_[{LocationId{l.at(0).get<std::uint64_t>()}, LocationId{l.at(1).get<std::uint64_t>()}}] =
            l.at(2).get<std::int64_t>();
    return est;
}

DelayEstimator observe_and_update_delay(DelayEstimator est, LocationId from, LocationId to, Ticks observed)
{
    est.observe(from, to, observed);
    return est;
}

DeparturePlan next_departure_plan(const DelayEstimator& est, LocationId current, LocationId next,
                                  VirtualTime window_start, VirtualTime window_end, VirtualTime now)
{
    const Ticks travel = est.estimate_ticks(current, next);
    const VirtualTime latest_safe = window_start > travel ? window_start - travel : 0;
    return DeparturePlan{std::max(now, latest_safe), saturating_add(now, travel) > window_end};
}

// ---------------------------------------------------------------------------- config JSON

namespace {

nlohmann::json offset_json(Ticks t)
{
    return t == kUnbounded ? nlohmann::json(nullptr) : nlohmann::json(t);
}

Ticks offset_from_json(const nlohmann::json& j)
{
    if (j.is_null() || (j.is_string() && (j == "inf" || j == "unbounded")))
        return kUnbounded;
    if (j.is_number_float())
        throw std::invalid_argument("offsets must be integer ticks");
    if (j.is_number_integer() && j.get<std::int64_t>() < 0)
        throw std::invalid_argument("offsets must be non-negative");
    return j.get<Ticks>();
}

} // namespace

nlohmann::json to_json(const ItineraryConfig& cfg)
{
    nlohmann::json objectives = nlohmann::json::array();
    for (const auto& o : cfg.route.objectives)
    {
        nlohmann::json tasks = nlohmann::json::array();
        for (const auto& t : o.stop_tasks)
            tasks.push_back(to_json(t));
        objectives.push_back({{"location", o.location.value},
                              {"earliest", o.earliest_offset},
                              {"latest", offset_json(o.latest_offset)},
                              {"tasks", std::move(tasks)}});
    }
    nlohmann::json listeners = nlohmann::json::array();
    for (const auto& l : cfg.reached_listeners)
        listeners.push_back(to_json(l));
    return {{"route", {{"base_time", cfg.route.base_time}, {"objectives", std::move(objectives)}}},
            {"reached_listeners", std::move(listeners)},
            {"missed_behavior", cfg.missed_behavior ? *cfg.missed_behavior : nlohmann::json(nullptr)},
            {"departure", cfg.departure == DeparturePolicy::Immediate ? "immediate" : "planned"},
            {"estimator", {{"alpha", cfg.estimator_alpha}, {"default", cfg.default_estimate}}}};
}

ItineraryConfig itinerary_config_from_json(const nlohmann::json& j, const LoadContext& ctx)
{
    ItineraryConfig cfg;
    const auto& route = j.at("route");
    cfg.route.base_time = route.value("base_time", VirtualTime{0});
    for (const auto& o : route.at("objectives"))
    {
        Objective obj;
        obj.location = ctx.location(o.at("location"));
        obj.earliest_offset = offset_from_json(o.value("earliest", nlohmann::json(0)));
        obj.latest_offset = offset_from_json(o.value("latest", nlohmann::json(nullptr)));
        for (const auto& t : o.value("tasks", nlohmann::json::array()))
            obj.stop_tasks.push_back(action_from_json(t));
        cfg.route.objectives.push_back(std::move(obj));
    }
    for (const auto& l : j.value("reached_listeners", nlohmann::json::array()))
        cfg.reached_listeners.push_back(action_from_json(l));
    if (auto it = j.find("missed_behavior"); it != j.end() && !it->is_null())
        cfg.missed_behavior = *it;
    const auto departure = j.value("departure", std::string("immediate"));
    if (departure != "immediate" && departure != "planned")
        throw std::invalid_argument("departure must be 'immediate' or 'planned'");
    cfg.departure = departure == "planned" ? DeparturePolicy::Planned : DeparturePolicy::Immediate;
    if (auto it = j.find("estimator"); it != j.end())
    {
        cfg.estimator_alpha = it->value("alpha", 0.5);
        cfg.default_estimate = it->value("default", Ticks{0});
    }
    return cfg;
}

// ---------------------------------------------------------------------------- Itinerary

namespace {

std::string_view phase_name(Itinerary::Phase p)
{
    switch (p)
    {
    case Itinerary::Phase::Plan: return "plan";
    case Itinerary::Phase::WaitDeparture: return "wait_departure";
    case Itinerary::Phase::Travel: return "travel";
    case Itinerary::Phase::WaitWindow: return "wait_window";
    case Itinerary::Phase::Missed: return "missed";
    case Itinerary::Phase::Halted: return "halted";
    }
    return "plan";
}

Itinerary::Phase phase_from_name(std::string_view s)
{
    for (auto p : {Itinerary::Phase::Plan, Itinerary::Phase::WaitDeparture, Itinerary::Phase::Travel,
                   Itinerary::Phase::WaitWindow, Itinerary::Phase::Missed, Itinerary::Phase::Halted})
    {
        if (phase_name(p) == s)
            return p;
    }
    throw Error(Errc::Serialization, "unknown itinerary phase " + std::string(s));
}

} // namespace

Itinerary::Itinerary(ItineraryConfig cfg)
    : cfg_(std::move(cfg)), estimator_(cfg_.estimator_alpha, cfg_.default_estimate)
{
    cfg_.route.validate();
}

Itinerary::Itinerary(const Itinerary& other)
    : Behavior(other), cfg_(other.cfg_), estimator_(other.estimator_), phase_(other.phase_), index_(other.index_),
      depart_at_(other.depart_at_), departed_(other.departed_), departed_from_(other.departed_from_),
      arrival_(other.arrival_), missed_(other.missed_ ? other.missed_->clone() : nullptr),
      missed_last_(other.missed_last_)
{
}

StepOutcome Itinerary::do_step(AgentContext& ctx)
{
    for (;;)
    {
        std::optional<StepOutcome> out;
        switch (phase_)
        {
        case Phase::Plan:
            out = plan(ctx);
            break;
        case Phase::WaitDeparture:
            out = ctx.now() < depart_at_ ? StepOutcome::blocked(AtTime{depart_at_}) : leave(ctx);
            break;
        case Phase::Travel: {
            const LocationId target = cfg_.route.objectives[index_].location;
            if (ctx.location() != target)
                return StepOutcome::blocked(OnArrival{target});
            const auto& m = ctx.last_migration();
            const VirtualTime arrival = (m && m->to == target && m->started >= departed_) ? m->ended : ctx.now();
            estimator_.observe(departed_from_, target, arrival - departed_);
            out = arrive(ctx, arrival);
            break;
        }
        case Phase::WaitWindow: {
            const VirtualTime start = cfg_.route.window(index_).first;
            if (ctx.now() < start)
                return StepOutcome::blocked(AtTime{start});
            fulfil(ctx, "early");
            break;
        }
        case Phase::Missed:
            out = step_missed(ctx);
            break;
        case Phase::Halted:
            return StepOutcome::halted();
        }
        if (out)
            return *out;
    }
}

std::optional<StepOutcome> Itinerary::plan(AgentContext& ctx)
{
    if (index_ >= cfg_.route.objectives.size())
        return StepOutcome::done();

    const auto& obj = cfg_.route.objectives[index_];
    if (ctx.location() == obj.location)
        return arrive(ctx, ctx.now());

    if (cfg_.departure == DeparturePolicy::Planned)
    {
        const auto [start, end] = cfg_.route.window(index_);
        const auto plan = next_departure_plan(estimator_, ctx.location(), obj.location, start, end, ctx.now());
        if (plan.depart_at > ctx.now())
        {
            depart_at_ = plan.depart_at;
            phase_ = Phase::WaitDeparture;
            return StepOutcome::blocked(AtTime{depart_at_});
        }
    }
    return leave(ctx);
}

StepOutcome Itinerary::leave(AgentContext& ctx)
{
    const LocationId target = cfg_.route.objectives[index_].location;
    departed_ = ctx.now();
    departed_from_ = ctx.location();
    ctx.migrate(target);
    phase_ = Phase::Travel;
    return StepOutcome::blocked(OnArrival{target});
}

std::optional<StepOutcome> Itinerary::arrive(AgentContext& ctx, VirtualTime arrival)
{
    arrival_ = arrival;
    const auto [start, end] = cfg_.route.window(index_);
    const auto cls = classify_arrival(start, end, arrival);

    if (std::holds_alternative<ArrivedOnTime>(cls))
    {
        fulfil(ctx, "on_time");
        return std::nullopt;
    }
    if (const auto* early = std::get_if<ArrivedEarly>(&cls))
    {
        if (ctx.now() >= early->wait_until)
        {
            fulfil(ctx, "early");
            return std::nullopt;
        }
        phase_ = Phase::WaitWindow;
        return StepOutcome::blocked(AtTime{early->wait_until});
    }

    const auto& late = std::get<ArrivedLate>(cls);
    const auto location = cfg_.route.objectives[index_].location;
    ctx.emit(TraceKind::ObjectiveMissed, {{"objective", index_},
                                          {"location", ctx.location_name(location)},
                                          {"arrival", arrival},
                                          {"late_by", late.by}});
    if (!cfg_.missed_behavior)
    {
        ctx.emit(TraceKind::Custom, {{"event", "AgentHalted"}, {"objective", index_}});
        phase_ = Phase::Halted;
        return StepOutcome::halted();
    }
    missed_ = ctx.codec().load(*cfg_.missed_behavior, ctx.load_context());
    missed_last_ = StepOutcome::running();
    phase_ = Phase::Missed;
    return std::nullopt;
}

void Itinerary::fulfil(AgentContext& ctx, std::string_view cls)
{
    const auto& obj = cfg_.route.objectives[index_];
    ctx.emit(TraceKind::ObjectiveReached, {{"objective", index_},
                                           {"location", ctx.location_name(obj.location)},
                                           {"arrival", arrival_},
                                           {"class", cls}});
    for (const auto& l : cfg_.reached_listeners)
        ctx.invoke_guarded(l);
    for (const auto& t : obj.stop_tasks)
        ctx.invoke_guarded(t);
    ++index_;
    phase_ = Phase::Plan;
}

std::optional<StepOutcome> Itinerary::step_missed(AgentContext& ctx)
{
    if (!ctx.runnable(missed_last_))
        return missed_last_;
    missed_last_ = missed_->step(ctx);
    if (!missed_last_.is_done())
        return missed_last_;

    missed_.reset();
    if (ctx.state().erase(std::string(kItineraryAbortKey)) > 0)
    {
        index_ = cfg_.route.objectives.size();
        phase_ = Phase::Plan;
        return StepOutcome::done();
    }
    ++index_;
    phase_ = Phase::Plan;
    return std::nullopt;
}

void Itinerary::save_fields(nlohmann::json& out) const
{
    out["config"] = to_json(cfg_);
    out["estimator_state"] = estimator_.to_json();
    out["phase"] = phase_name(phase_);
    out["index"] = index_;
    out["depart_at"] = depart_at_;
    out["departed"] = departed_;
    out["departed_from"] = departed_from_.value;
    out["arrival"] = arrival_;
    out["missed"] = missed_ ? missed_->save() : nlohmann::json(nullptr);
    out["missed_last"] = to_json(missed_last_);
}

BehaviorPtr Itinerary::load(const nlohmann::json& j, const LoadContext& ctx)
{
    // Specs may put the config fields at top level; snapshots nest them under "config".
    const auto& cfg_json = j.contains("config") ? j.at("config") : j;
    auto b = std::make_unique<Itinerary>(itinerary_config_from_json(cfg_json, ctx));
    if (auto it = j.find("estimator_state"); it != j.end())
        b->estimator_ = DelayEstimator::from_json(*it);
    b->phase_ = phase_from_name(j.value("phase", std::string("plan")));
    b->index_ = j.value("index", std::size_t{0});
    b->depart_at_ = j.value("depart_at", VirtualTime{0});
    b->departed_ = j.value("departed", VirtualTime{0});
    b->departed_from_ = LocationId{j.value("departed_from", std::uint64_t{0})};
    b->arrival_ = j.value("arrival", VirtualTime{0});
    if (auto it = j.find("missed"); it != j.end() && !it->is_null())
        b->missed_ = ctx.behavior(*it);
    if (auto it = j.find("missed_last"); it != j.end())
        b->missed_last_ = outcome_from_json(*it);
    return b;
}

BehaviorPtr itinerary(ItineraryConfig cfg) { return std::make_unique<Itinerary>(std::move(cfg)); }

void register_itinerary_behaviors(BehaviorCodec& codec)
{
    codec.add("Itinerary", &Itinerary::load);
}

void register_itinerary_actions(ActionRegistry& actions)
{
    actions.add("itinerary.skip", [](AgentContext& ctx, const ActionCall& call) -> std::optional<Bytes> {
        ctx.emit(TraceKind::Custom, {{"itinerary", "skip"},
                                     {"location", ctx.location_name(ctx.location())},
                                     {"note", call.params}});
        return std::nullopt;
    });
    actions.add("itinerary.abort", [](AgentContext& ctx, const ActionCall&) -> std::optional<Bytes> {
        ctx.state()[std::string(kItineraryAbortKey)] = "1";
        return std::nullopt;
    });
}

} // namespace magent
