#include "magent/cli/scenario.hpp"

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

using namespace magent;
using namespace magent::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = MAGENT_SCENARIO_DIR;

/// Fresh directory per test case, removed on exit.
struct TempDir
{
    fs::path path;

    TempDir()
    {
        static std::mt19937_64 rng(std::random_device{}());
        path = fs::temp_directory_path() / ("magent-cli-" + std::to_string(rng()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }

    fs::path write(const std::string& name, const std::string& text) const
    {
        std::ofstream(path / name, std::ios::binary) << text;
        return path / name;
    }
    fs::path write(const std::string& name, const json& doc) const { return write(name, doc.dump(2)); }
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

json minimal()
{
    return {{"format_version", 1},
            {"locations", {"A", "B"}},
            {"agents",
             {{{"name", "walker"},
               {"location", "A"},
               {"behaviors",
                {{{"kind", "Task"}, {"action", {{"name", "trace.note"}, {"params", "hello"}}}}}}}}}};
}

std::vector<std::string> pointers(const std::vector<Diagnostic>& ds)
{
    std::vector<std::string> out;
    for (const auto& d : ds)
        out.push_back(d.pointer);
    return out;
}

struct Captured
{
    int code;
    std::string out;
    std::string err;
};

Captured run(const fs::path& p, RunOptions o = {})
{
    std::ostringstream out, err;
    const int code = run_scenario(p, o, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("suggestions come from the closest candidate within reach")
{
    CHECK(edit_distance("kitten", "sitting") == 3);
    CHECK(edit_distance("", "abc") == 3);
    CHECK(suggest("Obsrver", {"Observer", "Listener", "Task"}) == "Observer");
    CHECK(suggest("zzzzzzzz", {"Observer", "Listener"}) == std::nullopt);
}

TEST_CASE("read_json_file reports missing files and parse positions")
{
    TempDir dir;
    try
    {
        (void)read_json_file(dir.path / "absent.json");
        FAIL("expected FileNotFound");
    }
    catch (const Error& e)
    {
        CHECK(e.code() == Errc::FileNotFound);
    }

    const auto bad = dir.write("bad.json", std::string("{\n  \"a\": 1,\n  \"b\": ]\n}"));
    try
    {
        (void)read_json_file(bad);
        FAIL("expected ParseError");
    }
    catch (const ParseError& e)
    {
        CHECK(e.code() == Errc::ParseError);
        CHECK(e.line() == 3);
        CHECK(e.column() == 8);
    }
}

TEST_CASE("a minimal scenario validates and runs to quiescence")
{
    TempDir dir;
    const auto p = dir.write("min.json", minimal());
    CHECK(validate_scenario(p).empty());
    RunOptions o;
    o.trace = dir.path / "out.jsonl";
    const auto r = run(p, o);
    CHECK(r.code == kExitOk);
    const auto text = slurp(dir.path / "out.jsonl");
    CHECK(text.rfind("{\"format_version\":1}\n", 0) == 0);
    CHECK(text.find("\"note\":\"hello\"") != std::string::npos);
}

TEST_CASE("diagnostics point at the offending value")
{
    TempDir dir;
    SUBCASE("missing format version")
    {
        auto doc = minimal();
        doc.erase("format_version");
        CHECK(pointers(validate_scenario(dir.write("s.json", doc))) == std::vector<std::string>{"/format_version"});
    }
    SUBCASE("wrong format version")
    {
        auto doc = minimal();
        doc["format_version"] = 2;
        CHECK(pointers(validate_scenario(dir.write("s.json", doc))) == std::vector<std::string>{"/format_version"});
    }
    SUBCASE("unknown behavior kind with suggestion")
    {
        auto doc = minimal();
        doc["agents"][0]["behaviors"][0]["kind"] = "Tsak";
        const auto ds = validate_scenario(dir.write("s.json", doc));
        REQUIRE(ds.size() == 1);
        CHECK(ds[0].pointer == "/agents/0/behaviors/0/kind");
        CHECK(ds[0].message.find("did you mean 'Task'") != std::string::npos);
    }
    SUBCASE("unknown action inside a composite")
    {
        auto doc = minimal();
        doc["agents"][0]["behaviors"][0] = {
            {"kind", "Sequential"},
            {"children", {{{"kind", "Task"}, {"action", "noop"}}, {{"kind", "Task"}, {"action", "self.terminat"}}}}};
        const auto ds = validate_scenario(dir.write("s.json", doc));
        REQUIRE(ds.size() == 1);
        CHECK(ds[0].pointer == "/agents/0/behaviors/0/children/1/action");
        CHECK(ds[0].message.find("self.terminate") != std::string::npos);
    }
    SUBCASE("unknown agent location")
    {
        auto doc = minimal();
        doc["agents"][0]["location"] = "Q";
        CHECK(pointers(validate_scenario(dir.write("s.json", doc))) == std::vector<std::string>{"/agents/0/location"});
    }
    SUBCASE("objective window names the objective")
    {
        auto doc = minimal();
        doc["agents"][0]["behaviors"][0] = {
            {"kind", "Itinerary"},
            {"route", {{"objectives", {{{"location", "B"}, {"earliest", 8}, {"latest", 2}}}}}}};
        const auto ds = validate_scenario(dir.write("s.json", doc));
        REQUIRE(ds.size() == 1);
        CHECK(ds[0].pointer == "/agents/0/behaviors/0/route/objectives/0");
        CHECK(ds[0].message.find("objective 0 (B)") != std::string::npos);
    }
    SUBCASE("latency problems")
    {
        auto doc = minimal();
        doc["config"]["message_latency"]["uniform"] = {5, 2};
        doc["config"]["migration_latency"]["per_link"]["links"] = json::array({json::array({"A", "Z", 3})});
        doc["config"]["migration_latency"]["per_link"]["fallback"] = 1;
        CHECK(pointers(validate_scenario(dir.write("s.json", doc))) ==
              std::vector<std::string>{"/config/message_latency/uniform", "/config/migration_latency/per_link/links/0/1"});
    }
    SUBCASE("duplicates")
    {
        auto doc = minimal();
        doc["locations"] = {"A", "B", "A"};
        doc["agents"].push_back(doc["agents"][0]);
        CHECK(pointers(validate_scenario(dir.write("s.json", doc))) ==
              std::vector<std::string>{"/locations/2", "/agents/1/name"});
    }
    SUBCASE("role assigned but never declared")
    {
        auto doc = minimal();
        doc["agents"][0]["behaviors"][0]["action"] = {{"name", "role.assign"},
                                                      {"params", {{"role", "pinger"}, {"targets", {1}}}}};
        CHECK(pointers(validate_scenario(dir.write("s.json", doc))) ==
              std::vector<std::string>{"/agents/0/behaviors/0/action/params/role"});
        doc["roles"] = {{"pinger", {{"kind", "Task"}, {"action", "noop"}}}};
        CHECK(validate_scenario(dir.write("s.json", doc)).empty());
    }
    SUBCASE("dry construction catches invalid definitions")
    {
        auto doc = minimal();
        doc["agents"][0]["behaviors"][0] = {{"kind", "Observer"}, {"period", 0}, {"trigger", "always"},
                                            {"handler", "noop"}};
        const auto ds = validate_scenario(dir.write("s.json", doc));
        REQUIRE(ds.size() == 1);
        CHECK(ds[0].pointer == "/agents/0/behaviors/0");
        CHECK(ds[0].message.find("ZeroPeriod") != std::string::npos);
    }
    SUBCASE("assessment actions without a repository")
    {
        auto doc = minimal();
        doc["agents"][0]["behaviors"][0]["action"] = "session.open";
        const auto ds = validate_scenario(dir.write("s.json", doc));
        REQUIRE(ds.size() == 1);
        CHECK(ds[0].message.find("test repository") != std::string::npos);
    }
}

TEST_CASE("exam plans in a scenario are checked against the repository and locations")
{
    TempDir dir;
    fs::copy_file(kScenarios / "tests.json", dir.path / "tests.json");
    auto doc = read_json_file(kScenarios / "push_exam.json");
    doc.erase("expected");
    CHECK(validate_scenario(dir.write("push.json", doc)).empty());

    auto& params = doc["agents"][0]["behaviors"][0]["handler"]["params"];
    params["clients"][1]["location"] = "LabX";
    params["test"] = "t1";
    const auto ds = validate_scenario(dir.write("push.json", doc));
    CHECK(pointers(ds) == std::vector<std::string>{
                              "/agents/0/behaviors/0/handler/params/clients/1/location",
                              "/agents/0/behaviors/0/handler/params",
                          });
}

TEST_CASE("agent references resolve by name in declaration order")
{
    TempDir dir;
    const json client = {{"kind", "Client"}, {"server", "callee"}, {"request", {{"task", "noop"}}}};
    const json server = {{"kind", "Server"}};
    json doc = {{"format_version", 1}, {"locations", {"A"}}, {"until", 10}};
    doc["agents"] = json::array({json{{"name", "caller"}, {"location", "A"}, {"behaviors", json::array({client})}},
                                 json{{"name", "callee"}, {"location", "A"}, {"behaviors", json::array({server})}}});
    std::vector<Diagnostic> diags;
    const auto scn = parse_scenario(doc, dir.path / "x.json", diags);
    REQUIRE(diags.empty());
    World w = build_world(scn, 0);
    CHECK(w.agents.at("caller") == AgentId{1});
    CHECK(w.agents.at("callee") == AgentId{2});
    w.platform->run(RunUntil::at(10));
    bool request_to_callee = false;
    for (const auto& e : w.platform->trace().of_kind(TraceKind::Send))
        if (e.agent == AgentId{1} && e.detail["to"] == 2 && e.detail["type"] == "REQUEST")
            request_to_callee = true;
    CHECK(request_to_callee);
}

TEST_CASE("exit codes")
{
    TempDir dir;
    SUBCASE("tick budget exceeded")
    {
        json doc = minimal();
        doc["config"] = {{"max_ticks", 20}};
        doc["agents"][0]["behaviors"][0] = {{"kind", "Observer"}, {"period", 1}, {"trigger", "never"},
                                            {"handler", "noop"}};
        CHECK(run(dir.write("s.json", doc)).code == kExitBudget);
    }
    SUBCASE("invalid scenario")
    {
        json doc = minimal();
        doc["agents"][0]["behaviors"][0]["kind"] = "Nope";
        const auto r = run(dir.write("s.json", doc));
        CHECK(r.code == kExitInvalid);
        CHECK(r.err.find("/agents/0/behaviors/0/kind") != std::string::npos);
    }
    SUBCASE("missing file and parse error")
    {
        CHECK(run(dir.path / "none.json").code == kExitInvalid);
        CHECK(run(dir.write("bad.json", std::string("{"))).code == kExitInvalid);
        std::ostringstream out, err;
        CHECK(validate_command(dir.path / "none.json", out, err) == kExitInvalid);
    }
}

TEST_CASE("golden traces: match, mismatch, update and seed override")
{
    TempDir dir;
    json doc = minimal();
    doc["seed"] = 4;
    doc["expected"] = "golden.jsonl";
    const auto p = dir.write("s.json", doc);

    SUBCASE("missing golden is a failure until recorded")
    {
        CHECK(run(p).code == kExitFailure);
        RunOptions o;
        o.update_expected = true;
        CHECK(run(p, o).code == kExitOk);
        CHECK(run(p).code == kExitOk);
    }
    SUBCASE("mismatch reports the first differing line")
    {
        RunOptions o;
        o.update_expected = true;
        REQUIRE(run(p, o).code == kExitOk);
        auto text = slurp(dir.path / "golden.jsonl");
        const auto at = text.find("hello");
        REQUIRE(at != std::string::npos);
        text.replace(at, 5, "howdy");
        dir.write("golden.jsonl", text);
        const auto r = run(p);
        CHECK(r.code == kExitFailure);
        CHECK(r.err.find("line 3") != std::string::npos);
        CHECK(r.err.find("howdy") != std::string::npos);
    }
    SUBCASE("a different seed skips the comparison")
    {
        dir.write("golden.jsonl", std::string("garbage\n"));
        RunOptions o;
        o.seed = 99;
        const auto r = run(p, o);
        CHECK(r.code == kExitOk);
        CHECK(r.out.find("skipped") != std::string::npos);
    }
}

TEST_CASE("first_divergence")
{
    CHECK(first_divergence("a\nb\n", "a\nb\n") == std::nullopt);
    CHECK(first_divergence("a\nb\n", "a\nc\n")->rfind("line 2", 0) == 0);
    CHECK(first_divergence("a\n", "a\nb\n")->find("<end of file>") != std::string::npos);
}

TEST_CASE("trace directory from the environment")
{
    TempDir dir;
    const auto p = dir.write("walk.json", minimal());
    ::setenv("MAGENT_TRACE_DIR", (dir.path / "traces").c_str(), 1);
    const auto r = run(p);
    ::unsetenv("MAGENT_TRACE_DIR");
    CHECK(r.code == kExitOk);
    CHECK(fs::exists(dir.path / "traces" / "walk.trace.jsonl"));
}

TEST_CASE("shipped scenarios validate and reproduce their golden traces")
{
    for (const char* name : {"push_exam", "pull_sessions", "itinerary_tour"})
    {
        CAPTURE(name);
        const auto p = kScenarios / (std::string(name) + ".json");
        CHECK(validate_scenario(p).empty());
        const auto r = run(p);
        CHECK(r.code == kExitOk);
        CHECK(r.out.find("golden: match") != std::string::npos);
    }
}

TEST_CASE("runs are byte-identical for the same seed")
{
    TempDir dir;
    const auto p = kScenarios / "pull_sessions.json";
    for (std::uint64_t seed : {1u, 7u, 12345u})
    {
        RunOptions a, b;
        a.seed = b.seed = seed;
        a.trace = dir.path / "a.jsonl";
        b.trace = dir.path / "b.jsonl";
        REQUIRE(run(p, a).code == kExitOk);
        REQUIRE(run(p, b).code == kExitOk);
        CHECK(slurp(*a.trace) == slurp(*b.trace));
    }
    // Uniform latencies make the seed matter.
    RunOptions x, y;
    x.seed = 1;
    y.seed = 2;
    x.trace = dir.path / "x.jsonl";
    y.trace = dir.path / "y.jsonl";
    REQUIRE(run(p, x).code == kExitOk);
    REQUIRE(run(p, y).code == kExitOk);
    CHECK(slurp(*x.trace) != slurp(*y.trace));
}
