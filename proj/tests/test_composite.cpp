#include "magent/behaviors/basic.hpp"
#include "magent/behaviors/composite.hpp"
#include "magent/core/error.hpp"
#include "magent/registry.hpp"
#include "composite_checks.hpp"
#include "scenarios.hpp"
#include "stub_context.hpp"

#include <doctest.h>

#include <random>

using namespace magent;
using namespace magent::testing;

namespace {

SimConfig fixed1()
{
    SimConfig c;
    c.message_latency = FixedLatency{1};
    c.migration_latency = FixedLatency{1};
    return c;
}

std::vector<BehaviorPtr> list_of(BehaviorPtr a)
{
    std::vector<BehaviorPtr> v;
    v.push_back(std::move(a));
    return v;
}

template <class... B>
std::vector<BehaviorPtr> list_of(BehaviorPtr a, B&&... rest)
{
    auto v = list_of(std::move(a));
    (v.push_back(std::forward<B>(rest)), ...);
    return v;
}

BehaviorPtr note(const std::string& text)
{
    return task(action("trace.note", text));
}

template <class F>
void expect_errc(Errc code, F&& f)
{
    try
    {
        f();
        FAIL("no exception, expected " << errc_name(code));
    }
    catch (const Error& e)
    {
        CHECK(e.code() == code);
    }
}

std::vector<std::string> note_texts(const PlatformAdapter& p)
{
    std::vector<std::string> out;
    for (const auto& e : p.trace().events())
        if (e.kind == TraceKind::Custom && e.detail.contains("note"))
            out.push_back(e.detail["note"]);
    return out;
}

FsmDefinition go_def()
{
    FsmDefinition d;
    d.states = {{"S", action("trace.note", "S")}, {"T", action("trace.note", "T")}};
    d.transitions = {{{"S", "go"}, "T"}};
    d.start = "S";
    d.terminals = {"T"};
    return d;
}

} // namespace

// ---------------------------------------------------------------------------- Sequential

TEST_CASE("sequential: empty list finishes on its first step")
{
    Bench bench;
    Sequential s({});
    CHECK(bench.step(s, 0).is_done());
}

TEST_CASE("sequential: children run strictly in order, and pending ones can be reordered")
{
    for (auto kind : kAllAdapters)
    {
        auto p = make_adapter(kind, fixed1());
        const auto l1 = p->create_location("L1");
        p->spawn_agent(l1, list_of(sequential(list_of(note("A"), note("B")))));
        p->run(RunUntil::quiescent());
        CHECK(note_texts(*p) == std::vector<std::string>{"A", "B"});
    }

    Bench bench;
    Sequential s(list_of(note("A"), note("B"), note("C")));
    std::vector<std::string> seen;
    auto collect = [&] {
        for (const auto* c : bench.effects_of<TraceEffect>())
            seen.push_back(c->detail["note"]);
    };
    bench.step(s, 0);
    collect();
    s.reorder({2, 1});
    VirtualTime t = 1;
    while (!s.done())
    {
        bench.step(s, t++);
        collect();
    }
    CHECK(seen == std::vector<std::string>{"A", "C", "B"});
}

TEST_CASE("sequential: reordering a started child is refused")
{
    Bench bench;
    Sequential s(list_of(observer(5, action("always"), action("noop")), note("B"), note("C")));
    bench.step(s, 0);
    expect_errc(Errc::ReorderStartedChild, [&] { s.reorder({0, 2, 1}); });
    expect_errc(Errc::ReorderStartedChild, [&] { s.reorder({2}); });
    expect_errc(Errc::ReorderStartedChild, [&] { s.reorder({2, 2}); });
    expect_errc(Errc::ReorderStartedChild, [&] { s.reorder({2, 7}); });
    CHECK_NOTHROW(s.reorder({2, 1}));
}

TEST_CASE("sequential: effects of each child precede those of later children")
{
    const auto r = sequential_ordering(11, 500);
    CHECK_MESSAGE(r.ok, r.why);
}

// ---------------------------------------------------------------------------- Parallel

TEST_CASE("parallel: a blocked child does not hold back the others")
{
    for (auto kind : kAllAdapters)
    {
        auto p = make_adapter(kind, fixed1());
        const auto l1 = p->create_location("L1");
        const auto id = p->spawn_agent(l1, list_of(parallel(list_of(listener("X", {action("noop")}), note("A")))));
        p->run(RunUntil::at(10));
        CHECK(note_texts(*p) == std::vector<std::string>{"A"});
        const auto shell = p->inspect(id);
        REQUIRE(shell.behaviors.size() == 1);
        CHECK_FALSE(shell.behaviors[0].behavior->done());
        CHECK(shell.behaviors[0].last.is_blocked());
    }
}

TEST_CASE("parallel: completion Any finishes with the first child")
{
    Bench bench;
    Parallel par(list_of(note("A"), observer(100, action("always"), action("noop"))), Completion::Any);
    CHECK(bench.step(par, 0).is_done());
}

TEST_CASE("parallel: server and listener side by side both stay responsive")
{
    for (auto kind : kAllAdapters)
    {
        auto p = make_adapter(kind, fixed1());
        const auto l1 = p->create_location("L1");
        const auto srv = p->spawn_agent(
            l1, list_of(parallel(list_of(server(1), listener("PING", {action("trace.note", "pong")})))));
        const auto cli = p->spawn_agent(l1, list_of(client(srv, RequestEnvelope{action("noop"), ""},
                                                           action("trace.note", "result"),
                                                           action("trace.note", "failure"))));
        const auto pinger = p->spawn_agent(l1, list_of(listener("NEVER", {action("noop")})));
        p->send(make_message(pinger, srv, "PING", "p", "", 0));
        p->run(RunUntil::at(20));
        CHECK_FALSE(p->is_live(cli));
        p->send(make_message(pinger, srv, "PING", "p", "", p->now()));
        p->run(RunUntil::at(40));
        const auto texts = note_texts(*p);
        CHECK(std::count(texts.begin(), texts.end(), "pong") == 2);
        CHECK(std::count(texts.begin(), texts.end(), "result") == 1);
        CHECK(p->is_live(srv));
    }
}

TEST_CASE("parallel: running children never drift more than one step apart")
{
    const auto r = parallel_fairness(23, 500);
    CHECK_MESSAGE(r.ok, r.why);
}

// ---------------------------------------------------------------------------- FSM

TEST_CASE("fsm: a terminal start state finishes after its activity")
{
    Bench bench;
    FsmDefinition d;
    d.states = {{"S", action("trace.note", "S")}};
    d.start = "S";
    d.terminals = {"S"};
    Fsm f(d);
    CHECK(bench.step(f, 0).is_done());
    CHECK(bench.effects_of<TraceEffect>().size() == 2);
}

TEST_CASE("fsm: message-driven transition and undefined events")
{
    for (auto kind : kAllAdapters)
    {
        auto p = make_adapter(kind, fixed1());
        const auto l1 = p->create_location("L1");
        const auto id = p->spawn_agent(l1, list_of(fsm(go_def())));
        p->send(make_message(id, id, std::string(kFsmEventTag), "f", "jump", 0));
        p->run(RunUntil::at(5));
        const auto errors = custom_with(*p, "error");
        REQUIRE(errors.size() == 1);
        CHECK(errors[0].detail["error"] == "UndefinedTransition");
        CHECK(errors[0].detail["state"] == "S");
        CHECK(errors[0].detail["event"] == "jump");
        CHECK(p->is_live(id));

        p->send(make_message(id, id, std::string(kFsmEventTag), "f", "go", p->now()));
        p->run(RunUntil::quiescent());
        CHECK(note_texts(*p) == std::vector<std::string>{"S", "T"});
        CHECK_FALSE(p->is_live(id));
    }
}

TEST_CASE("fsm: an activity can drive the next transition itself")
{
    FsmDefinition d;
    d.states = {{"A", action("fsm.emit", "next")}, {"B", action("fsm.emit", "next")}, {"C", action("noop")}};
    d.transitions = {{{"A", "next"}, "B"}, {{"B", "next"}, "C"}};
    d.start = "A";
    d.terminals = {"C"};
    Bench bench;
    Fsm f(d);
    VirtualTime t = 0;
    while (!f.done() && t < 10)
        bench.step(f, t++);
    CHECK(f.done());
    CHECK(f.path() == std::vector<std::string>{"A", "B", "C"});
}

TEST_CASE("fsm: invalid definitions are rejected")
{
    auto bad = [](auto mutate) {
        auto d = go_def();
        mutate(d);
        expect_errc(Errc::InvalidFsm, [&] { Fsm f(d); });
    };
    bad([](FsmDefinition& d) { d.start = "Z"; });
    bad([](FsmDefinition& d) { d.terminals.insert("Z"); });
    bad([](FsmDefinition& d) { d.transitions[{"S", "x"}] = "Z"; });
    bad([](FsmDefinition& d) { d.transitions[{"Z", "x"}] = "S"; });
    bad([](FsmDefinition& d) { d.transitions[{"S", ""}] = "T"; });
    bad([](FsmDefinition& d) { d.states.clear(); });

    const auto dup = nlohmann::json::parse(R"({
        "states": {"S": "noop", "T": "noop"},
        "transitions": [{"from": "S", "event": "go", "to": "T"}, {"from": "S", "event": "go", "to": "S"}],
        "start": "S", "terminals": ["T"]})");
    expect_errc(Errc::InvalidFsm, [&] { fsm_definition_from_json(dup); });
    expect_errc(Errc::InvalidFsm, [] { fsm_definition_from_json(nlohmann::json::parse(R"({"states": {}})")); });
}

TEST_CASE("fsm: definitions load from JSON and round-trip")
{
    const auto j = nlohmann::json::parse(R"({
        "kind": "Fsm",
        "states": {"S": {"name": "trace.note", "params": "S"}, "T": "noop"},
        "transitions": [{"from": "S", "event": "go", "to": "T"}],
        "start": "S", "terminals": ["T"]})");
    StubServices services;
    auto b = services.load_context().behavior(j);
    auto* f = dynamic_cast<Fsm*>(b.get());
    REQUIRE(f);
    CHECK(f->definition().transitions.at({"S", "go"}) == "T");
    CHECK(fsm_definition_from_json(to_json(f->definition())) == f->definition());
}

TEST_CASE("fsm: entered states always form a walk from the start state")
{
    const auto r = fsm_paths(31, 500);
    CHECK_MESSAGE(r.ok, r.why);
}

// ---------------------------------------------------------------------------- nesting & extension


TEST_CASE("composites nest: random 3-deep trees produce one effect per leaf")
{
    const auto r = nested_trees(41, 500);
    CHECK_MESSAGE(r.ok, r.why);
}

TEST_CASE("a composite written outside the library runs and migrates like the built-in ones")
{
    for (auto kind : kAllAdapters)
    {
        const auto r = custom_composite(kind);
        CHECK_MESSAGE(r.ok, adapter_name(kind) << ": " << r.why);
    }
}
