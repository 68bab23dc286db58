#include "magent/assessment/scenarios.hpp"

#include "magent/behaviors/basic.hpp"
#include "magent/behaviors/composite.hpp"
#include "magent/core/context.hpp"
#include "magent/core/error.hpp"
#include "magent/itinerary/itinerary.hpp"
#include "magent/registry.hpp"

#include <algorithm>
#include <set>

namespace magent::assessment {

namespace {

using json = nlohmann::json;

// Courier state.
constexpr const char* kTestKey = "exam.test";
constexpr const char* kPlanKey = "exam.plan";
constexpr const char* kDeliveredKey = "exam.delivered";
constexpr const char* kSubmissionsKey = "exam.submissions";

// Session state (student side and worker side).
constexpr const char* kWorkerKey = "session.worker";
constexpr const char* kConversationKey = "session.conversation";
constexpr const char* kSessionTestKey = "session.test";
constexpr const char* kStudentKey = "session.student";

json parse_params(const Bytes& params)
{
    if (params.empty())
        return json::object();
    try
    {
        return json::parse(params);
    }
    catch (const json::parse_error& e)
    {
        throw Error(Errc::Serialization, std::string("action params: ") + e.what());
    }
}

json state_json(AgentContext& ctx, const char* key, json fallback)
{
    auto it = ctx.state().find(key);
    return it == ctx.state().end() ? fallback : json::parse(it->second);
}

const Message& need_trigger(const ActionCall& call, std::string_view action)
{
    if (!call.trigger)
        throw Error(Errc::Serialization, std::string(action) + " needs a triggering message");
    return *call.trigger;
}

LocationId resolve(AgentContext& ctx, const std::string& name)
{
    if (auto id = ctx.find_location(name))
        return *id;
    throw Error(Errc::UnknownLocation, "no location named '" + name + "'");
}

std::vector<BehaviorPtr> pair_of(BehaviorPtr a, BehaviorPtr b)
{
    std::vector<BehaviorPtr> v;
    v.push_back(std::move(a));
    v.push_back(std::move(b));
    return v;
}

const char* command_name(SessionCommand::Kind k)
{
    switch (k)
    {
    case SessionCommand::Kind::ListTests: return "ListTests";
    case SessionCommand::Kind::GetTest: return "GetTest";
    case SessionCommand::Kind::SubmitResults: return "SubmitResults";
    case SessionCommand::Kind::EndSession: return "EndSession";
    }
    return "?";
}

// ---------------------------------------------------------------------------- exam actions

void install_exam(ActionRegistry& actions, const std::shared_ptr<AssessmentServices>& svc)
{
    // Server side, at the scheduled time: pack the test and set off.
    actions.add("exam.launch", [svc](AgentContext& ctx, const ActionCall& call) -> std::optional<Bytes> {
        const auto plan = exam_plan_from_json(parse_params(call.params));
        const Test& test = svc->test(plan.test_id);

        ItineraryConfig cfg;
        for (const auto& c : plan.clients)
            cfg.route.objectives.push_back(Objective{resolve(ctx, c.location), c.earliest, c.latest, {}});
        cfg.route.objectives.push_back(Objective{ctx.location(), 0, kUnbounded, {}});
        cfg.reached_listeners = {action("exam.deliver")};
        cfg.missed_behavior =
            json{{"kind", "Task"}, {"action", {{"name", "itinerary.skip"}, {"params", "client unreachable"}}}};

        ctx.state()[kTestKey] = to_json(test).dump();
        ctx.state()[kPlanKey] = to_json(plan).dump();
        ctx.state()[kDeliveredKey] = "[]";
        ctx.state()[kSubmissionsKey] = "[]";

        auto collect = parallel(pair_of(listener(std::string(kSubmissionTag), {action("exam.collect")}),
                                        observer(1, action("exam.all_in"), action("exam.finalize"))),
                                Completion::Any);
        ctx.attach(ctx.self(), sequential(pair_of(itinerary(std::move(cfg)), std::move(collect))));
        ctx.emit(TraceKind::Custom, {{"exam", "launched"}, {"test", plan.test_id}, {"clients", plan.clients.size()}});
        return std::nullopt;
    });

    // Reached listener: hand the test to a fresh user agent at a client location.
    actions.add("exam.deliver", [](AgentContext& ctx, const ActionCall&) -> std::optional<Bytes> {
        const auto plan = exam_plan_from_json(state_json(ctx, kPlanKey, json::object()));
        const auto here = ctx.location_name(ctx.location());
        const bool client = std::any_of(plan.clients.begin(), plan.clients.end(),
                                        [&](const ClientWindow& c) { return c.location == here; });
        auto delivered = state_json(ctx, kDeliveredKey, json::array());
        if (!client || std::find(delivered.begin(), delivered.end(), here) != delivered.end())
            return std::nullopt;
        delivered.push_back(here);
        ctx.state()[kDeliveredKey] = delivered.dump();

        const json sit{{"courier", ctx.self().value}, {"test", state_json(ctx, kTestKey, json::object())}};
        std::vector<BehaviorPtr> bs;
        bs.push_back(task(action("exam.sit", sit.dump())));
        const auto user = ctx.spawn(ctx.location(), std::move(bs));
        ctx.emit(TraceKind::Custom, {{"exam", "delivered"}, {"location", here}, {"student", user.value}});
        return std::nullopt;
    });

    // User agent: the student sits the test, it is graded on the spot and sent back.
    actions.add("exam.sit", [svc](AgentContext& ctx, const ActionCall& call) -> std::optional<Bytes> {
        const auto p = parse_params(call.params);
        const Test test = test_from_json(p.at("test"));
        const auto here = ctx.location_name(ctx.location());
        const auto answers = svc->answers.lookup(here, test.id());
        const auto g = grade(test, answers, svc->grading);
        const Submission s{test.id(), ctx.self(), answers, g.score, g.max_score, ctx.now()};
        ctx.send(AgentId{p.at("courier").get<std::uint64_t>()}, std::string(kSubmissionTag), ctx.new_conversation_id(),
                 to_json(s).dump());
        ctx.emit(TraceKind::Custom,
                 {{"exam", "submitted"}, {"location", here}, {"score", g.score}, {"max_score", g.max_score}});
        return std::nullopt;
    });

    actions.add("exam.collect", [](AgentContext& ctx, const ActionCall& call) -> std::optional<Bytes> {
        const auto s = submission_from_json(json::parse(need_trigger(call, "exam.collect").payload));
        auto subs = state_json(ctx, kSubmissionsKey, json::array());
        subs.push_back(to_json(s));
        ctx.state()[kSubmissionsKey] = subs.dump();
        ctx.emit(TraceKind::Custom, {{"exam", "collected"}, {"student", s.student.value}});
        return std::nullopt;
    });

    actions.add("exam.all_in", [](AgentContext& ctx, const ActionCall&) -> std::optional<Bytes> {
        const auto subs = state_json(ctx, kSubmissionsKey, json::array());
        const auto delivered = state_json(ctx, kDeliveredKey, json::array());
        return subs.size() >= delivered.size() ? "true" : "false";
    });

    // Everything is in: persist the report and end the exam agent.
    actions.add("exam.finalize", [svc](AgentContext& ctx, const ActionCall&) -> std::optional<Bytes> {
        const auto plan = exam_plan_from_json(state_json(ctx, kPlanKey, json::object()));
        const auto delivered = state_json(ctx, kDeliveredKey, json::array());
        ExamReport report;
        report.test_id = plan.test_id;
        json missed_names = json::array();
        for (const auto& c : plan.clients)
        {
            const ClientRef ref{resolve(ctx, c.location), c.location};
            if (std::find(delivered.begin(), delivered.end(), c.location) != delivered.end())
                report.delivered.push_back(ref);
            else
            {
                report.missed.push_back(ref);
                missed_names.push_back(c.location);
            }
        }
        for (const auto& s : state_json(ctx, kSubmissionsKey, json::array()))
            report.submissions.push_back(submission_from_json(s));
        svc->results->add(report);
        ctx.emit(TraceKind::Custom, {{"exam", "report"},
                                     {"test", plan.test_id},
                                     {"delivered", delivered},
                                     {"missed", missed_names},
                                     {"submissions", report.submissions.size()}});
        ctx.terminate_self();
        return std::nullopt;
    });
}

// ---------------------------------------------------------------------------- session actions

BehaviorPtr data_request(AgentId worker, ActionDescriptor what, std::string kind)
{
    return client(worker, RequestEnvelope{std::move(what), ""}, action("session.received", std::move(kind)),
                  action("session.failed"));
}

BehaviorPtr command_step(AgentId worker, const SessionCommand& c)
{
    json cmd{{"cmd", command_name(c.kind)}};
    switch (c.kind)
    {
    case SessionCommand::Kind::ListTests:
        return parallel(pair_of(task(action("session.cmd", cmd.dump())),
                                data_request(worker, action("session.list"), "list")));
    case SessionCommand::Kind::GetTest:
        cmd["test"] = c.test_id;
        return parallel(pair_of(task(action("session.cmd", cmd.dump())),
                                data_request(worker, action("session.get", c.test_id), "test")));
    case SessionCommand::Kind::SubmitResults: return task(action("session.submit", json(c.answers).dump()));
    case SessionCommand::Kind::EndSession: break;
    }
    return task(action("session.cmd", cmd.dump()));
}

void send_command(AgentContext& ctx, json cmd)
{
    const AgentId worker{std::stoull(ctx.state().at(kWorkerKey))};
    ctx.send(worker, std::string(kSessionCommandTag), ctx.state().at(kConversationKey), cmd.dump());
    ctx.emit(TraceKind::Custom, {{"session", "command_sent"}, {"cmd", cmd.at("cmd")}});
}

void install_session(ActionRegistry& actions, const std::shared_ptr<AssessmentServices>& svc)
{
    // Runs in the permanent server's first worker: it becomes the session agent with a
    // data channel (Server) and a command channel (Listener).
    actions.add("session.open", [](AgentContext& ctx, const ActionCall& call) -> std::optional<Bytes> {
        const auto& req = need_trigger(call, "session.open");
        ctx.state()[kStudentKey] = std::to_string(req.sender.value);
        ctx.attach(ctx.self(), parallel(pair_of(server(1), listener(std::string(kSessionCommandTag),
                                                                    {action("session.command")}))));
        ctx.emit(TraceKind::Custom, {{"session", "opened"}, {"student", req.sender.value}});
        return std::to_string(ctx.self().value);
    });

    // Student side, once the session agent is known: play the script.
    actions.add("session.start", [](AgentContext& ctx, const ActionCall& call) -> std::optional<Bytes> {
        const auto r = decode_result(need_trigger(call, "session.start").payload);
        if (!r.ok)
        {
            ctx.emit(TraceKind::Custom, {{"session", "refused"}, {"error", r.error}});
            return std::nullopt;
        }
        const auto script = session_script_from_json(parse_params(call.params));
        validate_script(script);
        const AgentId worker{std::stoull(r.output)};
        ctx.state()[kWorkerKey] = r.output;
        ctx.state()[kConversationKey] = ctx.new_conversation_id();
        std::vector<BehaviorPtr> steps;
        for (const auto& c : script)
            steps.push_back(command_step(worker, c));
        ctx.attach(ctx.self(), sequential(std::move(steps)));
        ctx.emit(TraceKind::Custom, {{"session", "started"}, {"worker", worker.value}});
        return std::nullopt;
    });

    actions.add("session.cmd", [](AgentContext& ctx, const ActionCall& call) -> std::optional<Bytes> {
        send_command(ctx, parse_params(call.params));
        return std::nullopt;
    });

    // Results are computed on the client; only the score travels.
    actions.add("session.submit", [svc](AgentContext& ctx, const ActionCall& call) -> std::optional<Bytes> {
        const auto it = ctx.state().find(kSessionTestKey);
        if (it == ctx.state().end())
            throw Error(Errc::InvalidScript, "SubmitResults before a test was received");
        const Test test = test_from_json(json::parse(it->second));
        const auto g = grade(test, parse_params(call.params).get<Answers>(), svc->grading);
        ctx.emit(TraceKind::Custom,
                 {{"session", "graded"}, {"test", test.id()}, {"score", g.score}, {"max_score", g.max_score}});
        send_command(ctx, {{"cmd", "SubmitResults"}, {"test", test.id()}, {"score", g.score}});
        return std::nullopt;
    });

    actions.add("session.list", [svc](AgentContext&, const ActionCall&) -> std::optional<Bytes> {
        json out = json::array();
        for (const auto& [id, t] : svc->tests)
            if (!t.is_exam())
                out.push_back({{"id", id}, {"title", t.title()}});
        return out.dump();
    });

    actions.add("session.get", [svc](AgentContext&, const ActionCall& call) -> std::optional<Bytes> {
        auto it = svc->tests.find(call.params);
        if (it == svc->tests.end() || it->second.is_exam())
            throw Error(Errc::MalformedRepository, "no self-assessment test '" + call.params + "'");
        return to_json(it->second).dump();
    });

    actions.add("session.received", [](AgentContext& ctx, const ActionCall& call) -> std::optional<Bytes> {
        const auto r = decode_result(need_trigger(call, "session.received").payload);
        if (!r.ok)
        {
            ctx.emit(TraceKind::Custom, {{"session", "data_error"}, {"what", call.params}, {"error", r.error}});
            return std::nullopt;
        }
        const auto data = json::parse(r.output);
        if (call.params == "list")
        {
            json ids = json::array();
            for (const auto& t : data)
                ids.push_back(t.at("id"));
            ctx.emit(TraceKind::Custom, {{"session", "data"}, {"what", "list"}, {"tests", ids}});
        }
        else
        {
            ctx.state()[kSessionTestKey] = r.output;
            ctx.emit(TraceKind::Custom, {{"session", "data"},
                                         {"what", "test"},
                                         {"test", data.at("id")},
                                         {"questions", data.at("questions").size()}});
        }
        return std::nullopt;
    });

    actions.add("session.failed", [](AgentContext& ctx, const ActionCall&) -> std::optional<Bytes> {
        ctx.emit(TraceKind::Custom, {{"session", "timeout"}});
        return std::nullopt;
    });

    // Session agent's command channel.
    actions.add("session.command", [svc](AgentContext& ctx, const ActionCall& call) -> std::optional<Bytes> {
        const auto& msg = need_trigger(call, "session.command");
        const auto student = ctx.state().at(kStudentKey);
        auto& conv = ctx.state()[kConversationKey];
        if (conv.empty())
            conv = msg.conversation_id;
        if (std::to_string(msg.sender.value) != student || msg.conversation_id != conv)
        {
            ctx.emit(TraceKind::Custom, {{"session", "rejected"}, {"from", msg.sender.value}});
            return std::nullopt;
        }
        const auto cmd = json::parse(msg.payload);
        const auto name = cmd.at("cmd").get<std::string>();
        ctx.emit(TraceKind::Custom, {{"session", "command"}, {"cmd", name}});
        if (name == "SubmitResults")
        {
            const ProgressRecord rec{msg.sender, cmd.at("test").get<std::string>(), cmd.at("score").get<double>(),
                                     ctx.now()};
            svc->results->add(rec);
            ctx.emit(TraceKind::Custom, {{"session", "progress"}, {"test", rec.test_id}, {"score", rec.score}});
        }
        else if (name == "EndSession")
        {
            ctx.emit(TraceKind::Custom, {{"session", "closed"}, {"student", msg.sender.value}});
            ctx.terminate_self();
        }
        return std::nullopt;
    });
}

} // namespace

// ---------------------------------------------------------------------------- services

void AnswerBook::set(std::string location, std::string test_id, Answers answers)
{
    book_[std::move(location)][std::move(test_id)] = std::move(answers);
}

Answers AnswerBook::lookup(std::string_view location, std::string_view test_id) const
{
    auto loc = book_.find(location);
    if (loc == book_.end())
        return {};
    auto t = loc->second.find(std::string(test_id));
    return t == loc->second.end() ? Answers{} : t->second;
}

AnswerBook AnswerBook::from_json(const nlohmann::json& j)
{
    AnswerBook book;
    try
    {
        for (const auto& [loc, tests] : j.items())
            for (const auto& [test, answers] : tests.items())
                book.set(loc, test, answers.get<Answers>());
    }
    catch (const json::exception& e)
    {
        throw Error(Errc::Serialization, std::string("answers: ") + e.what());
    }
    return book;
}

void AssessmentServices::add_test(Test t)
{
    const auto id = t.id();
    tests.insert_or_assign(id, std::move(t));
}

const Test& AssessmentServices::test(std::string_view id) const
{
    auto it = tests.find(std::string(id));
    if (it == tests.end())
        throw Error(Errc::MalformedRepository, "no test '" + std::string(id) + "' in the repository");
    return it->second;
}

void install_assessment(Registry& registry, std::shared_ptr<AssessmentServices> services)
{
    install_exam(registry.actions, services);
    install_session(registry.actions, services);
}

// ---------------------------------------------------------------------------- push

nlohmann::json to_json(const ExamPlan& plan)
{
    json clients = json::array();
    for (const auto& c : plan.clients)
        clients.push_back({{"location", c.location},
                           {"earliest", c.earliest},
                           {"latest", c.latest == kUnbounded ? json(nullptr) : json(c.latest)}});
    return {{"test", plan.test_id}, {"server", plan.server_location}, {"clients", std::move(clients)}};
}

ExamPlan exam_plan_from_json(const nlohmann::json& j)
{
    try
    {
        ExamPlan plan;
        plan.test_id = j.at("test").get<std::string>();
        plan.server_location = j.value("server", std::string{});
        for (const auto& c : j.at("clients"))
        {
            ClientWindow w;
            w.location = c.at("location").get<std::string>();
            w.earliest = c.value("earliest", VirtualTime{0});
            if (auto it = c.find("latest"); it != c.end() && !it->is_null())
                w.latest = it->get<VirtualTime>();
            plan.clients.push_back(std::move(w));
        }
        return plan;
    }
    catch (const json::exception& e)
    {
        throw Error(Errc::Serialization, std::string("exam plan: ") + e.what());
    }
}

void validate(const ExamPlan& plan, const AssessmentServices& services)
{
    auto it = services.tests.find(plan.test_id);
    if (it == services.tests.end())
        throw Error(Errc::InvalidTest, "no test '" + plan.test_id + "' in the repository");
    if (!it->second.is_exam())
        throw Error(Errc::InvalidTest, "test '" + plan.test_id + "' is not an exam");
    if (plan.clients.empty())
        throw Error(Errc::InvalidTest, "exam '" + plan.test_id + "' has no clients");
    std::set<std::string> seen;
    for (const auto& c : plan.clients)
    {
        if (!seen.insert(c.location).second)
            throw Error(Errc::InvalidTest, "client '" + c.location + "' listed twice");
        if (c.location == plan.server_location)
            throw Error(Errc::InvalidTest, "client '" + c.location + "' is the server location");
        if (c.earliest > c.latest)
            throw Error(Errc::InvalidTest, "client '" + c.location + "': earliest after latest");
        try
        {
            grade(it->second, services.answers.lookup(c.location, plan.test_id));
        }
        catch (const Error& e)
        {
            throw Error(Errc::InvalidTest, "scripted answers at '" + c.location + "': " + e.what());
        }
    }
}

nlohmann::json exam_agent_spec(const ExamPlan& plan, const Test& test)
{
    const auto* exam = std::get_if<Exam>(&test.kind());
    const VirtualTime at = exam ? exam->scheduled_at : 0;
    return {{"kind", "Observer"},
            {"period", 1},
            {"trigger", {{"name", "clock.at_least"}, {"params", std::to_string(at)}}},
            {"handler", {{"name", "exam.launch"}, {"params", to_json(plan).dump()}}},
            {"mode", "oneshot"}};
}

PushOutcome run_exam_push(PlatformAdapter& platform, const AssessmentServices& services, const ExamPlan& plan)
{
    validate(plan, services);
    const auto server_loc = platform.find_location(plan.server_location);
    if (!server_loc)
        throw Error(Errc::UnknownLocation, "no location named '" + plan.server_location + "'");
    for (const auto& c : plan.clients)
        if (!platform.find_location(c.location))
            throw Error(Errc::UnknownLocation, "no location named '" + c.location + "'");

    std::vector<BehaviorPtr> bs;
    bs.push_back(platform.load_context().behavior(exam_agent_spec(plan, services.test(plan.test_id))));
    PushOutcome out;
    out.server = platform.spawn_agent(*server_loc, std::move(bs));
    out.run = platform.run(RunUntil::quiescent());
    const auto& reports = services.results->reports();
    for (auto it = reports.rbegin(); it != reports.rend(); ++it)
    {
        if (it->test_id == plan.test_id)
        {
            out.report = *it;
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------- pull

void validate_script(const SessionScript& script)
{
    if (script.empty())
        throw Error(Errc::InvalidScript, "empty session script");
    bool have_test = false;
    for (std::size_t i = 0; i < script.size(); ++i)
    {
        const auto& c = script[i];
        const auto where = "command " + std::to_string(i) + " (" + command_name(c.kind) + ")";
        if (c.kind == SessionCommand::Kind::EndSession && i + 1 != script.size())
            throw Error(Errc::InvalidScript, where + ": commands after EndSession");
        if (c.kind == SessionCommand::Kind::GetTest)
        {
            if (c.test_id.empty())
                throw Error(Errc::InvalidScript, where + ": missing test id");
            have_test = true;
        }
        if (c.kind == SessionCommand::Kind::SubmitResults && !have_test)
            throw Error(Errc::InvalidScript, where + ": no test retrieved yet");
    }
    if (script.back().kind != SessionCommand::Kind::EndSession)
        throw Error(Errc::InvalidScript, "session script must end with EndSession");
}

nlohmann::json to_json(const SessionScript& script)
{
    json out = json::array();
    for (const auto& c : script)
    {
        json j{{"cmd", command_name(c.kind)}};
        if (c.kind == SessionCommand::Kind::GetTest)
            j["test"] = c.test_id;
        if (c.kind == SessionCommand::Kind::SubmitResults)
            j["answers"] = c.answers;
        out.push_back(std::move(j));
    }
    return out;
}

SessionScript session_script_from_json(const nlohmann::json& j)
{
    if (!j.is_array())
        throw Error(Errc::InvalidScript, "session script must be an array");
    SessionScript out;
    for (const auto& c : j)
    {
        const auto name = c.is_string() ? c.get<std::string>() : c.value("cmd", std::string{});
        if (name == "ListTests")
            out.push_back(SessionCommand::list());
        else if (name == "GetTest")
            out.push_back(SessionCommand::get(c.is_object() ? c.value("test", std::string{}) : std::string{}));
        else if (name == "SubmitResults")
        {
            try
            {
                out.push_back(SessionCommand::submit(c.is_object() ? c.value("answers", json::object()).get<Answers>()
                                                                   : Answers{}));
            }
            catch (const json::exception& e)
            {
                throw Error(Errc::InvalidScript, std::string("SubmitResults answers: ") + e.what());
            }
        }
        else if (name == "EndSession")
            out.push_back(SessionCommand::end());
        else
            throw Error(Errc::InvalidScript, "unknown session command '" + name + "'");
    }
    return out;
}

nlohmann::json session_server_spec()
{
    return {{"kind", "Server"}, {"processing_ticks", 1}};
}

nlohmann::json session_student_spec(AgentId server, const SessionScript& script)
{
    return {{"kind", "Client"},
            {"server", server.value},
            {"request", {{"task", {{"name", "session.open"}}}}},
            {"on_result", {{"name", "session.start"}, {"params", to_json(script).dump()}}},
            {"on_failure", {{"name", "session.failed"}}}};
}

std::vector<SessionLog> session_logs(const PlatformAdapter& platform, const std::vector<AgentId>& students)
{
    std::vector<SessionLog> logs;
    for (auto s : students)
    {
        SessionLog log;
        log.student = s;
        for (const auto& e : platform.trace().events())
        {
            if (e.kind == TraceKind::Spawn && e.agent == s)
                log.location = e.detail.value("location", std::string{});
            if (e.kind != TraceKind::Custom || !e.detail.contains("session"))
                continue;
            const auto what = e.detail["session"].get<std::string>();
            if (e.agent == s)
            {
                if (what == "started")
                    log.worker = AgentId{e.detail["worker"].get<std::uint64_t>()};
                if (what == "graded")
                    log.score = e.detail["score"].get<double>();
                log.entries.push_back(e.detail);
            }
            else if (log.worker && e.agent == *log.worker)
            {
                if (what == "closed")
                    log.ended = true;
                log.entries.push_back(e.detail);
            }
        }
        logs.push_back(std::move(log));
    }
    return logs;
}

PullOutcome run_self_assessment(PlatformAdapter& platform, const PullSetup& setup)
{
    const auto server_loc = platform.find_location(setup.server_location);
    if (!server_loc)
        throw Error(Errc::UnknownLocation, "no location named '" + setup.server_location + "'");
    std::vector<LocationId> at;
    for (const auto& [loc, script] : setup.students)
    {
        validate_script(script);
        const auto id = platform.find_location(loc);
        if (!id)
            throw Error(Errc::UnknownLocation, "no location named '" + loc + "'");
        at.push_back(*id);
    }

    auto ctx = platform.load_context();
    PullOutcome out;
    std::vector<BehaviorPtr> srv;
    srv.push_back(ctx.behavior(session_server_spec()));
    out.server = platform.spawn_agent(*server_loc, std::move(srv));
    std::vector<AgentId> students;
    for (std::size_t i = 0; i < setup.students.size(); ++i)
    {
        std::vector<BehaviorPtr> bs;
        bs.push_back(ctx.behavior(session_student_spec(out.server, setup.students[i].second)));
        students.push_back(platform.spawn_agent(at[i], std::move(bs)));
    }
    out.run = platform.run(RunUntil::quiescent());
    out.sessions = session_logs(platform, students);
    return out;
}

std::string check_action_params(std::string_view action_name, const nlohmann::json& params,
                                const AssessmentServices& services)
{
    try
    {
        const json p = params.is_string() ? json::parse(params.get<std::string>()) : params;
        if (action_name == "exam.launch")
            validate(exam_plan_from_json(p), services);
        else if (action_name == "session.start")
            validate_script(session_script_from_json(p));
    }
    catch (const std::exception& e)
    {
        return e.what();
    }
    return {};
}

} // namespace magent::assessment
