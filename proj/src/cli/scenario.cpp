#include "magent/cli/scenario.hpp"

#include "magent/assessment/repository.hpp"
#include "magent/platform/sim_platform.hpp"
#include "magent/registry.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace magent::cli {

using nlohmann::json;
namespace fs = std::filesystem;

ParseError::ParseError(const std::string& file, std::size_t line, std::size_t column, const std::string& message)
    : Error(Errc::ParseError, file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line), column_(column)
{
}

json read_json_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in || fs::is_directory(path))
        throw Error(Errc::FileNotFound, path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    try
    {
        return json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        // e.byte is 1-based and points at the offending character.
        const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        std::size_t line = 1;
        std::size_t column = 1;
        for (std::size_t i = 0; i < end; ++i)
        {
            if (text[i] == '\n')
            {
                ++line;
                column = 1;
            }
            else
            {
                ++column;
            }
        }
        std::string message = e.what();
        if (auto pos = message.find(": "); pos != std::string::npos)
            message = message.substr(pos + 2);
        throw ParseError(path.string(), line, column, message);
    }
}

std::string to_string(const Diagnostic& d)
{
    return (d.pointer.empty() ? std::string("/") : d.pointer) + ": " + d.message;
}

std::size_t edit_distance(std::string_view a, std::string_view b)
{
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j)
        row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i)
    {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j)
        {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

std::optional<std::string> suggest(std::string_view word, const std::vector<std::string>& candidates)
{
    const std::size_t limit = std::max<std::size_t>(2, word.size() / 3);
    std::optional<std::string> best;
    std::size_t best_d = limit + 1;
    for (const auto& c : candidates)
    {
        const auto d = edit_distance(word, c);
        if (d < best_d)
        {
            best_d = d;
            best = c;
        }
    }
    return best;
}

std::optional<AgentId> Scenario::agent_id(std::string_view name) const
{
    for (std::size_t i = 0; i < agents.size(); ++i)
        if (agents[i].name == name)
            return AgentId{i + 1};
    return std::nullopt;
}

std::optional<LocationId> Scenario::location_id(std::string_view name) const
{
    for (std::size_t i = 0; i < locations.size(); ++i)
        if (locations[i] == name)
            return LocationId{i + 1};
    return std::nullopt;
}

namespace {

std::string in_quotes(std::string_view s)
{
    return "'" + std::string(s) + "'";
}

std::string escape_token(std::string_view s)
{
    std::string out;
    for (char c : s)
    {
        if (c == '~')
            out += "~0";
        else if (c == '/')
            out += "~1";
        else
            out += c;
    }
    return out;
}

std::string at(const std::string& ptr, std::string_view key)
{
    return ptr + "/" + escape_token(key);
}

std::string at(const std::string& ptr, std::size_t index)
{
    return ptr + "/" + std::to_string(index);
}

std::string unknown(std::string_view what, std::string_view name, const std::vector<std::string>& candidates)
{
    std::string msg = "unknown " + std::string(what) + " " + in_quotes(name);
    if (auto s = suggest(name, candidates))
        msg += "; did you mean " + in_quotes(*s) + "?";
    return msg;
}

void check_keys(const json& obj, const std::string& ptr, const std::vector<std::string>& known,
                std::vector<Diagnostic>& diags)
{
    for (const auto& [key, value] : obj.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            diags.push_back({at(ptr, key), unknown("key", key, known)});
}

bool is_tick(const json& j)
{
    return j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0);
}

std::optional<LatencyModel> parse_latency(const json& j, const std::string& ptr, const Scenario& scn,
                                          std::vector<Diagnostic>& diags)
{
    if (is_tick(j))
        return FixedLatency{j.get<Ticks>()};
    if (!j.is_object() || j.size() != 1)
    {
        diags.push_back({ptr, "latency must be {\"fixed\": n}, {\"uniform\": [lo, hi]} or {\"per_link\": {...}}"});
        return std::nullopt;
    }
    const auto& [kind, body] = *j.items().begin();
    const std::string p = at(ptr, kind);
    if (kind == "fixed")
    {
        if (!is_tick(body))
        {
            diags.push_back({p, "fixed latency must be a non-negative integer"});
            return std::nullopt;
        }
        return FixedLatency{body.get<Ticks>()};
    }
    if (kind == "uniform")
    {
        if (!body.is_array() || body.size() != 2 || !is_tick(body[0]) || !is_tick(body[1]))
        {
            diags.push_back({p, "uniform latency must be [lo, hi] with non-negative integers"});
            return std::nullopt;
        }
        UniformLatency u{body[0].get<Ticks>(), body[1].get<Ticks>()};
        if (u.lo > u.hi)
        {
            diags.push_back({p, "uniform latency has lo " + std::to_string(u.lo) + " above hi " +
                                    std::to_string(u.hi)});
            return std::nullopt;
        }
        return u;
    }
    if (kind == "per_link")
    {
        if (!body.is_object())
        {
            diags.push_back({p, "per_link latency must be an object with \"links\" and \"fallback\""});
            return std::nullopt;
        }
        check_keys(body, p, {"links", "fallback"}, diags);
        PerLinkLatency m;
        bool ok = true;
        if (auto fb = body.find("fallback"); fb != body.end())
        {
            if (is_tick(*fb))
                m.fallback = fb->get<Ticks>();
            else
            {
                diags.push_back({at(p, "fallback"), "fallback must be a non-negative integer"});
                ok = false;
            }
        }
        const json links = body.value("links", json::array());
        if (!links.is_array())
        {
            diags.push_back({at(p, "links"), "links must be an array of [from, to, ticks]"});
            return std::nullopt;
        }
        for (std::size_t i = 0; i < links.size(); ++i)
        {
            const auto& l = links[i];
            const std::string lp = at(at(p, "links"), i);
            if (!l.is_array() || l.size() != 3 || !l[0].is_string() || !l[1].is_string() || !is_tick(l[2]))
            {
                diags.push_back({lp, "link must be [from, to, ticks]"});
                ok = false;
                continue;
            }
            std::optional<LocationId> ends[2];
            for (int e = 0; e < 2; ++e)
            {
                const auto name = l[e].get<std::string>();
                ends[e] = scn.location_id(name);
                if (!ends[e])
                {
                    diags.push_back({at(lp, static_cast<std::size_t>(e)), unknown("location", name, scn.locations)});
                    ok = false;
                }
            }
            if (ends[0] && ends[1])
                m.links[{*ends[0], *ends[1]}] = l[2].get<Ticks>();
        }
        if (!ok)
            return std::nullopt;
        return m;
    }
    diags.push_back({p, unknown("latency model", kind, {"fixed", "uniform", "per_link"})});
    return std::nullopt;
}

std::optional<fs::path> path_field(const json& doc, std::string_view key, const fs::path& base,
                                   std::vector<Diagnostic>& diags)
{
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null())
        return std::nullopt;
    if (!it->is_string() || it->get<std::string>().empty())
    {
        diags.push_back({at("", key), std::string(key) + " must be a file path"});
        return std::nullopt;
    }
    fs::path p = it->get<std::string>();
    return p.is_absolute() ? p : base / p;
}

} // namespace

RunUntil parse_until(std::string_view text)
{
    if (text == "quiescent")
        return RunUntil::quiescent();
    VirtualTime t = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, t);
    if (text.empty() || ec != std::errc{} || ptr != end)
        throw std::invalid_argument("until must be 'quiescent' or a tick count, got '" + std::string(text) + "'");
    return RunUntil::at(t);
}

Scenario parse_scenario(const json& doc, const fs::path& source, std::vector<Diagnostic>& diags)
{
    Scenario scn;
    scn.source = source;
    if (!doc.is_object())
    {
        diags.push_back({"", "a scenario must be a JSON object"});
        return scn;
    }
    check_keys(doc, "",
               {"format_version", "description", "seed", "config", "locations", "roles", "agents", "tests",
                "answers", "results", "until", "expected"},
               diags);

    if (auto it = doc.find("format_version"); it == doc.end())
        diags.push_back({"/format_version", "format_version is required"});
    else if (!it->is_number_integer() || it->get<std::int64_t>() != kFormatVersion)
        diags.push_back({"/format_version", "unsupported format_version " + it->dump() + "; expected " +
                                                std::to_string(kFormatVersion)});

    if (auto it = doc.find("seed"); it != doc.end())
    {
        if (is_tick(*it))
            scn.seed = it->get<std::uint64_t>();
        else
            diags.push_back({"/seed", "seed must be a non-negative integer"});
    }

    if (auto it = doc.find("locations"); it == doc.end() || !it->is_array())
    {
        diags.push_back({"/locations", "locations must be an array of names"});
    }
    else
    {
        std::set<std::string> seen;
        for (std::size_t i = 0; i < it->size(); ++i)
        {
            const auto& l = (*it)[i];
            if (!l.is_string() || l.get<std::string>().empty())
                diags.push_back({at("/locations", i), "location name must be a non-empty string"});
            else if (!seen.insert(l.get<std::string>()).second)
                diags.push_back({at("/locations", i), "duplicate location " + in_quotes(l.get<std::string>())});
            else
                scn.locations.push_back(l.get<std::string>());
        }
    }

    if (auto it = doc.find("config"); it != doc.end())
    {
        if (!it->is_object())
        {
            diags.push_back({"/config", "config must be an object"});
        }
        else
        {
            check_keys(*it, "/config", {"message_latency", "migration_latency", "max_ticks"}, diags);
            if (auto m = it->find("message_latency"); m != it->end())
                if (auto l = parse_latency(*m, "/config/message_latency", scn, diags))
                    scn.config.message_latency = *l;
            if (auto m = it->find("migration_latency"); m != it->end())
                if (auto l = parse_latency(*m, "/config/migration_latency", scn, diags))
                    scn.config.migration_latency = *l;
            if (auto m = it->find("max_ticks"); m != it->end())
            {
                if (is_tick(*m))
                    scn.config.max_ticks = m->get<VirtualTime>();
                else
                    diags.push_back({"/config/max_ticks", "max_ticks must be a non-negative integer"});
            }
        }
    }

    if (auto it = doc.find("roles"); it != doc.end())
    {
        if (!it->is_object())
            diags.push_back({"/roles", "roles must map role names to behavior specs"});
        else
            for (const auto& [name, spec] : it->items())
                scn.roles.emplace(name, spec);
    }

    if (auto it = doc.find("agents"); it == doc.end() || !it->is_array())
    {
        diags.push_back({"/agents", "agents must be an array"});
    }
    else
    {
        std::set<std::string> seen;
        for (std::size_t i = 0; i < it->size(); ++i)
        {
            const auto& a = (*it)[i];
            const std::string p = at("/agents", i);
            if (!a.is_object())
            {
                diags.push_back({p, "agent must be an object"});
                continue;
            }
            check_keys(a, p, {"name", "location", "behaviors"}, diags);
            ScenarioAgent agent;
            if (auto n = a.find("name"); n == a.end() || !n->is_string() || n->get<std::string>().empty())
                diags.push_back({at(p, "name"), "agent name must be a non-empty string"});
            else if (!seen.insert(n->get<std::string>()).second)
                diags.push_back({at(p, "name"), "duplicate agent " + in_quotes(n->get<std::string>())});
            else
                agent.name = n->get<std::string>();
            if (auto l = a.find("location"); l == a.end() || !l->is_string())
                diags.push_back({at(p, "location"), "agent location must be a location name"});
            else if (!scn.location_id(l->get<std::string>()))
                diags.push_back({at(p, "location"), unknown("location", l->get<std::string>(), scn.locations)});
            else
                agent.location = l->get<std::string>();
            if (auto b = a.find("behaviors"); b == a.end() || !b->is_array())
                diags.push_back({at(p, "behaviors"), "behaviors must be an array of behavior specs"});
            else
                agent.behaviors = *b;
            // Keep the slot even when broken so later agents keep their ids.
            scn.agents.push_back(std::move(agent));
        }
    }

    const fs::path base = source.parent_path();
    scn.tests = path_field(doc, "tests", base, diags);
    scn.results = path_field(doc, "results", base, diags);
    scn.expected = path_field(doc, "expected", base, diags);

    if (auto it = doc.find("answers"); it != doc.end())
    {
        if (!it->is_object())
            diags.push_back({"/answers", "answers must map location -> test -> answers"});
        else
            scn.answers = *it;
    }

    if (auto it = doc.find("until"); it != doc.end())
    {
        if (is_tick(*it))
            scn.until = RunUntil::at(it->get<VirtualTime>());
        else if (*it == "quiescent")
            scn.until = RunUntil::quiescent();
        else
            diags.push_back({"/until", "until must be \"quiescent\" or a tick"});
    }
    return scn;
}

namespace {

std::shared_ptr<Registry> scenario_registry(const Scenario& scn,
                                            const std::shared_ptr<assessment::AssessmentServices>& services)
{
    auto reg = make_default_registry();
    for (const auto& [name, spec] : scn.roles)
        reg->roles.add_template(name, spec);
    if (services)
        assessment::install_assessment(*reg, services);
    return reg;
}

std::shared_ptr<assessment::AssessmentServices> scenario_services(const Scenario& scn)
{
    if (!scn.tests)
        return nullptr;
    auto services = std::make_shared<assessment::AssessmentServices>();
    for (auto& t : assessment::load_tests(*scn.tests))
        services->add_test(std::move(t));
    services->answers = assessment::AnswerBook::from_json(scn.answers);
    if (scn.results)
        services->results = std::make_shared<assessment::ResultsStore>(*scn.results);
    return services;
}

LoadContext scenario_load_context(const Scenario& scn, const BehaviorCodec& codec)
{
    LoadContext ctx;
    ctx.codec = &codec;
    ctx.resolve_location = [&scn](const json& j) {
        if (j.is_string())
            if (auto id = scn.location_id(j.get<std::string>()))
                return *id;
        throw Error(Errc::UnknownLocation, "no location named " + j.dump());
    };
    ctx.resolve_agent = [&scn](const json& j) {
        if (j.is_string())
            if (auto id = scn.agent_id(j.get<std::string>()))
                return *id;
        throw Error(Errc::UnknownAgent, "no agent named " + j.dump());
    };
    return ctx;
}

/// Walks a behavior spec and reports unknown names before anything is constructed.
class SpecChecker
{
public:
    SpecChecker(const Scenario& scn, const Registry& reg, const assessment::AssessmentServices* services,
                std::vector<Diagnostic>& diags)
        : scn_(scn), reg_(reg), services_(services), diags_(diags), kinds_(reg.behaviors.kinds()),
          actions_(reg.actions.names()), roles_(reg.roles.roles())
    {
        for (const auto& a : scn.agents)
            agent_names_.push_back(a.name);
    }

    void behavior(const json& spec, const std::string& ptr)
    {
        if (!spec.is_object())
        {
            report(ptr, "behavior spec must be an object");
            return;
        }
        auto k = spec.find("kind");
        if (k == spec.end() || !k->is_string())
        {
            report(at(ptr, "kind"), "behavior spec needs a \"kind\"");
            return;
        }
        if (!reg_.behaviors.knows(k->get<std::string>()))
        {
            report(at(ptr, "kind"), unknown("behavior kind", k->get<std::string>(), kinds_));
            return;
        }

        for (const char* key : {"action", "trigger", "handler", "on_result", "on_failure"})
            if (auto it = spec.find(key); it != spec.end())
                action(*it, at(ptr, key));
        for (const char* key : {"callbacks", "reached_listeners"})
            if (auto it = spec.find(key); it != spec.end() && it->is_array())
                for (std::size_t i = 0; i < it->size(); ++i)
                    action((*it)[i], at(at(ptr, key), i));
        if (auto it = spec.find("request"); it != spec.end() && it->is_object() && it->contains("task"))
            action(it->at("task"), at(at(ptr, "request"), "task"));
        if (auto it = spec.find("states"); it != spec.end() && it->is_object())
            for (const auto& [name, activity] : it->items())
                action(activity, at(at(ptr, "states"), name));
        if (auto it = spec.find("children"); it != spec.end() && it->is_array())
            for (std::size_t i = 0; i < it->size(); ++i)
                behavior((*it)[i], at(at(ptr, "children"), i));
        if (auto it = spec.find("missed_behavior"); it != spec.end() && !it->is_null())
            behavior(*it, at(ptr, "missed_behavior"));
        if (auto it = spec.find("server"); it != spec.end() && it->is_string())
            agent_ref(it->get<std::string>(), at(ptr, "server"));
        if (auto it = spec.find("config"); it != spec.end() && it->is_object())
            behavior_config(*it, at(ptr, "config"));
        route(spec, ptr);
    }

private:
    void report(std::string ptr, std::string msg) { diags_.push_back({std::move(ptr), std::move(msg)}); }

    void behavior_config(const json& cfg, const std::string& ptr)
    {
        if (auto it = cfg.find("reached_listeners"); it != cfg.end() && it->is_array())
            for (std::size_t i = 0; i < it->size(); ++i)
                action((*it)[i], at(at(ptr, "reached_listeners"), i));
        if (auto it = cfg.find("missed_behavior"); it != cfg.end() && !it->is_null())
            behavior(*it, at(ptr, "missed_behavior"));
        route(cfg, ptr);
    }

    void route(const json& spec, const std::string& ptr)
    {
        auto r = spec.find("route");
        if (r == spec.end() || !r->is_object())
            return;
        auto objs = r->find("objectives");
        if (objs == r->end() || !objs->is_array())
            return;
        const std::string op = at(at(ptr, "route"), "objectives");
        for (std::size_t i = 0; i < objs->size(); ++i)
        {
            const auto& o = (*objs)[i];
            const std::string p = at(op, i);
            if (!o.is_object())
                continue;
            if (auto l = o.find("location"); l != o.end() && l->is_string())
                location_ref(l->get<std::string>(), at(p, "location"));
            const auto earliest = o.value("earliest", json(0));
            const auto latest = o.value("latest", json(nullptr));
            if (is_tick(earliest) && is_tick(latest) && earliest.get<Ticks>() > latest.get<Ticks>())
            {
                const std::string label =
                    o.contains("location") && o["location"].is_string() ? o["location"].get<std::string>() : "";
                report(p, "objective " + std::to_string(i) + (label.empty() ? "" : " (" + label + ")") +
                              ": earliest " + earliest.dump() + " is after latest " + latest.dump());
            }
            if (auto t = o.find("tasks"); t != o.end() && t->is_array())
                for (std::size_t k = 0; k < t->size(); ++k)
                    action((*t)[k], at(at(p, "tasks"), k));
        }
    }

    void location_ref(const std::string& name, const std::string& ptr)
    {
        if (!scn_.location_id(name))
            report(ptr, unknown("location", name, scn_.locations));
    }

    void agent_ref(const std::string& name, const std::string& ptr)
    {
        if (!scn_.agent_id(name))
            report(ptr, unknown("agent", name, agent_names_));
    }

    void action(const json& a, const std::string& ptr)
    {
        std::string name;
        json params;
        if (a.is_string())
        {
            name = a.get<std::string>();
        }
        else if (a.is_object() && a.contains("name") && a["name"].is_string())
        {
            name = a["name"].get<std::string>();
            params = a.value("params", json(nullptr));
        }
        else
        {
            report(ptr, "action must be a name or {\"name\": ..., \"params\": ...}");
            return;
        }
        if (!reg_.actions.contains(name))
        {
            const bool assessment = name.starts_with("exam.") || name.starts_with("session.");
            if (assessment && !services_)
                report(ptr, "action " + in_quotes(name) + " needs a test repository; set \"tests\"");
            else
                report(ptr, unknown("action", name, actions_));
            return;
        }
        const std::string pp = at(ptr, "params");
        json parsed = params;
        if (params.is_string())
        {
            try
            {
                parsed = json::parse(params.get<std::string>());
            }
            catch (const json::exception&)
            {
                parsed = nullptr;
            }
        }
        if (name == "role.assign" && parsed.is_object() && parsed.contains("role") && parsed["role"].is_string())
        {
            const auto role = parsed["role"].get<std::string>();
            if (!reg_.roles.contains(role))
                report(at(pp, "role"), unknown("role", role, roles_));
        }
        if (name == "exam.launch" && parsed.is_object())
        {
            if (auto s = parsed.find("server"); s != parsed.end() && s->is_string())
                location_ref(s->get<std::string>(), at(pp, "server"));
            if (auto c = parsed.find("clients"); c != parsed.end() && c->is_array())
                for (std::size_t i = 0; i < c->size(); ++i)
                    if ((*c)[i].is_object() && (*c)[i].contains("location") && (*c)[i]["location"].is_string())
                        location_ref((*c)[i]["location"].get<std::string>(), at(at(at(pp, "clients"), i), "location"));
        }
        if (services_ && (name == "exam.launch" || name == "session.start"))
        {
            const auto problem = assessment::check_action_params(name, params, *services_);
            if (!problem.empty())
                report(pp, problem);
        }
    }

    const Scenario& scn_;
    const Registry& reg_;
    const assessment::AssessmentServices* services_;
    std::vector<Diagnostic>& diags_;
    std::vector<std::string> kinds_;
    std::vector<std::string> actions_;
    std::vector<std::string> roles_;
    std::vector<std::string> agent_names_;
};

} // namespace

World build_world(const Scenario& scn, std::uint64_t seed)
{
    World w;
    w.services = scenario_services(scn);
    auto reg = scenario_registry(scn, w.services);
    SimConfig cfg = scn.config;
    cfg.seed = seed;
    w.platform = std::make_unique<SimPlatform>(cfg, reg);

    for (const auto& name : scn.locations)
    {
        const auto id = w.platform->create_location(name);
        if (id != scn.location_id(name))
            throw Error(Errc::UnknownLocation, "location ids out of step with declaration order");
    }
    const LoadContext ctx = scenario_load_context(scn, reg->behaviors);
    for (const auto& a : scn.agents)
    {
        std::vector<BehaviorPtr> bs;
        for (const auto& spec : a.behaviors)
            bs.push_back(ctx.behavior(spec));
        const auto id = w.platform->spawn_agent(*scn.location_id(a.location), std::move(bs));
        if (id != scn.agent_id(a.name))
            throw Error(Errc::UnknownAgent, "agent ids out of step with declaration order");
        w.agents.emplace(a.name, id);
    }
    return w;
}

std::vector<Diagnostic> validate_scenario(const fs::path& path)
{
    const json doc = read_json_file(path);
    std::vector<Diagnostic> diags;
    const Scenario scn = parse_scenario(doc, path, diags);

    std::shared_ptr<assessment::AssessmentServices> services;
    if (scn.tests)
    {
        services = std::make_shared<assessment::AssessmentServices>();
        auto attempt = [&](const char* ptr, auto&& fn) {
            try
            {
                fn();
            }
            catch (const std::exception& e)
            {
                diags.push_back({ptr, e.what()});
            }
        };
        attempt("/tests", [&] {
            for (auto& t : assessment::load_tests(*scn.tests))
                services->add_test(std::move(t));
        });
        attempt("/answers", [&] { services->answers = assessment::AnswerBook::from_json(scn.answers); });
        attempt("/results", [&] {
            if (scn.results)
                assessment::ResultsStore probe(*scn.results);
        });
    }
    else if (!scn.answers.empty() || scn.results)
    {
        diags.push_back({scn.results ? "/results" : "/answers", "answers and results need a test repository; set \"tests\""});
    }
    const auto reg = scenario_registry(scn, services);

    SpecChecker checker(scn, *reg, services.get(), diags);
    for (const auto& [name, spec] : scn.roles)
        checker.behavior(spec, at("/roles", name));
    for (std::size_t i = 0; i < scn.agents.size(); ++i)
        for (std::size_t k = 0; k < scn.agents[i].behaviors.size(); ++k)
            checker.behavior(scn.agents[i].behaviors[k], at(at(at("/agents", i), "behaviors"), k));
    if (!diags.empty())
        return diags;

    // Dry construction catches what the name checks cannot: bad field types, invalid
    // definitions, unsupported values.
    const LoadContext ctx = scenario_load_context(scn, reg->behaviors);
    auto dry = [&](const json& spec, const std::string& ptr) {
        try
        {
            (void)ctx.behavior(spec);
        }
        catch (const std::exception& e)
        {
            diags.push_back({ptr, e.what()});
        }
    };
    for (const auto& [name, spec] : scn.roles)
        dry(spec, at("/roles", name));
    for (std::size_t i = 0; i < scn.agents.size(); ++i)
        for (std::size_t k = 0; k < scn.agents[i].behaviors.size(); ++k)
            dry(scn.agents[i].behaviors[k], at(at(at("/agents", i), "behaviors"), k));
    return diags;
}

} // namespace magent::cli
