#pragma once

#include "adapters.hpp"
#include "magent/itinerary/itinerary.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace magent::testing {

struct CheckResult
{
    bool ok = true;
    std::string why;

    void fail(std::string reason)
    {
        if (ok)
            why = std::move(reason);
        ok = false;
    }
};

/// Random clients against a live server: one ACK and one RESULT per REQUEST, ACK first,
/// one worker per conversation, every client's on_result fired once.
CheckResult protocol_live(AdapterKind kind, std::uint64_t seed);
/// Random clients against an id that is not live: every client fails at exactly
/// t_send + ack_timeout.
CheckResult protocol_absent(AdapterKind kind, std::uint64_t seed);

/// The three hand-traced itinerary runs, compared event by event.
CheckResult itinerary_examples(AdapterKind kind);

/// Brute-force oracle: some choice of departure times reaches every objective inside its
/// window when each hop takes exactly `hop` ticks and staying put is free.
bool route_feasible(const Route& route, LocationId start, VirtualTime start_tick, Ticks hop);

/// Random route, Fixed(d) migrations, estimator default d. Feasible routes must finish
/// with zero misses; under immediate departure infeasible ones must miss at least once.
/// `feasible` reports the oracle's verdict.
CheckResult itinerary_feasibility(AdapterKind kind, std::uint64_t seed, DeparturePolicy policy, bool& feasible);

/// classify_arrival against the inclusive-bounds definition for a, b <= 20 and arrivals <= 25.
CheckResult classify_exhaustive();

} // namespace magent::testing
