// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include "assessment_checks.hpp"
#include "composite_checks.hpp"
#include "determinism.hpp"
#include "scenarios.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace magent;
using namespace magent::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome
{
    bool ok = true;
    std::string detail;
};

Outcome from(const CheckResult& r, std::string summary)
{
    return {r.ok, r.ok ? std::move(summary) : r.why};
}

/// Per-run scratch directory.
struct Scratch
{
    fs::path path;
    Scratch()
    {
        path = fs::temp_directory_path() / ("magent-acceptance-" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~Scratch() { fs::remove_all(path); }
};

Outcome protocol_suite(AdapterKind kind)
{
    for (std::uint64_t seed = 0; seed < 200; ++seed)
    {
        if (auto r = protocol_live(kind, seed); !r.ok)
            return {false, "live seed " + std::to_string(seed) + ": " + r.why};
        if (auto r = protocol_absent(kind, seed); !r.ok)
            return {false, "absent seed " + std::to_string(seed) + ": " + r.why};
    }
    return {true, "200 live + 200 absent-server scenarios"};
}

Outcome windows_suite()
{
    return from(classify_exhaustive(), "all windows a,b <= 20, arrivals <= 25 agree with the oracle");
}

Outcome itinerary_suite(AdapterKind kind)
{
    if (auto r = itinerary_examples(kind); !r.ok)
        return {false, "hand-traced examples: " + r.why};
    int feasible_routes = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
        for (auto policy : {DeparturePolicy::Immediate, DeparturePolicy::Planned})
        {
            bool feasible = false;
            if (auto r = itinerary_feasibility(kind, seed, policy, feasible); !r.ok)
                return {false, "route seed " + std::to_string(seed) + ": " + r.why};
            feasible_routes += feasible && policy == DeparturePolicy::Immediate;
        }
    }
    return {true, "3 hand traces exact; 100 random routes under both departure policies (" +
                      std::to_string(feasible_routes) + " feasible, all without misses)"};
}

} // namespace

int main()
{
    Scratch scratch;
    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"determinism",
         [&] {
             const auto start = std::chrono::steady_clock::now();
             auto r = replay_determinism(1000, 20, scratch.path / "determinism");
             const double secs =
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
             std::ostringstream s;
             s.precision(2);
             s << std::fixed << "20 random scenarios run twice, byte-identical traces in " << secs << " s";
             if (r.ok && secs >= 10.0)
                 return Outcome{false, s.str() + " (limit 10 s)"};
             return from(r, s.str());
         }},
        {"client-server protocol", [] { return protocol_suite(AdapterKind::Sim); }},
        {"itinerary window semantics", [] { return windows_suite(); }},
        {"itinerary end-to-end", [] { return itinerary_suite(AdapterKind::Sim); }},
        {"grading oracle equivalence",
         [] { return from(grading_equivalence(2024, 1000), "1000 random pairs plus boundary cases, exact"); }},
        {"push scenario",
         [&] {
             return from(push_exam(AdapterKind::Sim, scratch.path / "push_results.jsonl"),
                         "2 delivered, 1 missed, 2 persisted submissions, courier terminated");
         }},
        {"pull scenario",
         [] {
             return from(pull_sessions(AdapterKind::Sim),
                         "list/test on the data channel, commands on their own, isolated sessions");
         }},
        {"adapter decoupling",
         [] {
             for (auto o : {protocol_suite(AdapterKind::InMemory), windows_suite(),
                            itinerary_suite(AdapterKind::InMemory)})
                 if (!o.ok)
                     return Outcome{false, "in-memory adapter: " + o.detail};
             return Outcome{true, "criteria 2-4 pass unchanged on the in-memory adapter"};
         }},
        {"composite suite",
         [] {
             for (auto r : {sequential_ordering(11, 500), parallel_fairness(23, 500), fsm_paths(31, 500),
                            nested_trees(41, 500), custom_composite(AdapterKind::Sim),
                            custom_composite(AdapterKind::InMemory)})
                 if (!r.ok)
                     return Outcome{false, r.why};
             return Outcome{true, "ordering, fairness, FSM paths and nesting x500 each; custom composite ok"};
         }},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        Outcome o;
        try
        {
            o = criteria[i].second();
        }
        catch (const std::exception& e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.ok;
        std::cout << (o.ok ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << o.detail
                  << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
