#pragma once

#include "magent/core/action.hpp"
#include "magent/core/behavior.hpp"
#include "magent/core/context.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace magent {

/// One stop of a route. Offsets are relative to the route's base time; `latest_offset`
/// may be kUnbounded.
struct Objective
{
    LocationId location;
    Ticks earliest_offset = 0;
    Ticks latest_offset = kUnbounded;
    std::vector<ActionDescriptor> stop_tasks;

    bool operator==(const Objective&) const = default;
};

struct Route
{
    std::vector<Objective> objectives;
    VirtualTime base_time = 0;

    /// Throws Errc::EmptyRoute or Errc::InvalidObjective (earliest > latest).
    void validate() const;

    /// Absolute arrival window of objective `i`, bounds inclusive.
    std::pair<VirtualTime, VirtualTime> window(std::size_t i) const;

    bool operator==(const Route&) const = default;
};

struct ArrivedEarly
{
    VirtualTime wait_until = 0;
    bool operator==(const ArrivedEarly&) const = default;
};

struct ArrivedOnTime
{
    bool operator==(const ArrivedOnTime&) const = default;
};

struct ArrivedLate
{
    Ticks by = 0;
    bool operator==(const ArrivedLate&) const = default;
};

using ArrivalClass = std::variant<ArrivedEarly, ArrivedOnTime, ArrivedLate>;

/// Inclusive bounds: arrival == start and arrival == end are both on time.
ArrivalClass classify_arrival(VirtualTime window_start, VirtualTime window_end, VirtualTime arrival);

/// Per-link exponential moving average of observed migration delays.
///
/// Estimates are fixed point in 1/65536 tick units and alpha is quantized to the same
/// grid. One update computes alpha*observed + (1 - alpha)*prior, rounding half up.
class DelayEstimator
{
public:
    static constexpr std::int64_t kScale = 65536;

    explicit DelayEstimator(double alpha = 0.5, Ticks default_estimate = 0);

    /// Estimate in ticks (exact for the fixed-point value).
    double estimate(LocationId from, LocationId to) const;
    /// Estimate rounded up to whole ticks.
    Ticks estimate_ticks(LocationId from, LocationId to) const;

    void observe(LocationId from, LocationId to, Ticks observed);

    double alpha() const noexcept { return static_cast<double>(alpha_fp_) / kScale; }
    Ticks default_estimate() const noexcept { return default_; }

    nlohmann::json to_json() const;
    static DelayEstimator from_json(const nlohmann::json& j);

    bool operator==(const DelayEstimator&) const = default;

private:
    std::int64_t raw(LocationId from, LocationId to) const;

    std::int64_t alpha_fp_;
    Ticks default_;
    std::map<std::pair<LocationId, LocationId>, std::int64_t> links_;
};

/// Functional form of the update, for callers that keep estimators by value.
DelayEstimator observe_and_update_delay(DelayEstimator est, LocationId from, LocationId to, Ticks observed);

struct DeparturePlan
{
    VirtualTime depart_at = 0;
    /// now + estimate already exceeds the window end.
    bool predicted_late = false;

    bool operator==(const DeparturePlan&) const = default;
};

/// depart_at = max(now, window_start - estimate(current -> next)).
DeparturePlan next_departure_plan(const DelayEstimator& est, LocationId current, LocationId next,
                                  VirtualTime window_start, VirtualTime window_end, VirtualTime now);

enum class DeparturePolicy
{
    /// Leave for the next objective as soon as the current one is done.
    Immediate,
    /// Leave at next_departure_plan's time.
    Planned,
};

/// Frozen once the itinerary is constructed.
struct ItineraryConfig
{
    Route route;
    std::vector<ActionDescriptor> reached_listeners;
    std::optional<nlohmann::json> missed_behavior; // behavior spec, instantiated per miss
    DeparturePolicy departure = DeparturePolicy::Immediate;
    double estimator_alpha = 0.5;
    Ticks default_estimate = 0;

    bool operator==(const ItineraryConfig&) const = default;
};

nlohmann::json to_json(const ItineraryConfig& cfg);
ItineraryConfig itinerary_config_from_json(const nlohmann::json& j, const LoadContext& ctx);

/// State key a missed behavior sets to end the itinerary instead of skipping ahead.
inline constexpr std::string_view kItineraryAbortKey = "itinerary.abort";

/// Travels the route in order, honoring each objective's arrival window.
///
/// On arrival: early -> wait for the window to open; on time -> fire the reached
/// listeners, then the stop tasks, then head on; late -> ObjectiveMissed, then the missed
/// behavior (skip ahead unless it sets kItineraryAbortKey) or, without one, a permanent halt.
class Itinerary final : public Behavior
{
public:
    enum class Phase
    {
        Plan,
        WaitDeparture,
        Travel,
        WaitWindow,
        Missed,
        Halted,
    };

    /// Throws Errc::EmptyRoute, Errc::InvalidObjective.
    explicit Itinerary(ItineraryConfig cfg);
    Itinerary(const Itinerary& other);

    std::string_view kind() const override { return "Itinerary"; }
    BehaviorPtr clone() const override { return std::make_unique<Itinerary>(*this); }

    const ItineraryConfig& config() const noexcept { return cfg_; }
    const DelayEstimator& estimator() const noexcept { return estimator_; }
    Phase phase() const noexcept { return phase_; }
    std::size_t objective_index() const noexcept { return index_; }

    static BehaviorPtr load(const nlohmann::json& j, const LoadContext& ctx);

protected:
    StepOutcome do_step(AgentContext& ctx) override;
    void save_fields(nlohmann::json& out) const override;

private:
    std::optional<StepOutcome> plan(AgentContext& ctx);
    StepOutcome leave(AgentContext& ctx);
    std::optional<StepOutcome> arrive(AgentContext& ctx, VirtualTime arrival);
    void fulfil(AgentContext& ctx, std::string_view cls);
    std::optional<StepOutcome> step_missed(AgentContext& ctx);


    ItineraryConfig cfg_;
    DelayEstimator estimator_;

    Phase phase_ = Phase::Plan;
    std::size_t index_ = 0;
    VirtualTime depart_at_ = 0;
    VirtualTime departed_ = 0;
    LocationId departed_from_;
    VirtualTime arrival_ = 0;
    BehaviorPtr missed_;
    StepOutcome missed_last_ = StepOutcome::running();
};

BehaviorPtr itinerary(ItineraryConfig cfg);

void register_itinerary_behaviors(BehaviorCodec& codec);
/// itinerary.skip (log the miss and continue) and itinerary.abort.
void register_itinerary_actions(ActionRegistry& actions);

} // namespace magent
