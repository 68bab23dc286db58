#include "assessment_checks.hpp"

#include "grading_oracle.hpp"
#include "magent/core/error.hpp"
#include "magent/registry.hpp"

#include <charconv>
#include <map>
#include <set>
#include <sstream>

namespace magent::testing {

using namespace assessment;
using json = nlohmann::json;

namespace {

std::string shortest(double v)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

json reformatted(const Question& q, std::mt19937_64& rng)
{
    switch (q.kind)
    {
    case QuestionKind::MultipleChoice:
    {
        const auto& key = std::get<std::set<std::size_t>>(q.key);
        std::vector<std::size_t> v(key.rbegin(), key.rend());
        v.push_back(v.front()); // duplicate
        return v;
    }
    case QuestionKind::FillNumeric:
    {
        const auto s = shortest(std::get<double>(q.key));
        const bool neg = s.front() == '-';
        switch (rng() % 4)
        {
        case 0: return s.find('.') != std::string::npos ? s + "0" : s + ".00";
        case 1: return "  " + s + "\t";
        case 2: return neg ? s + "e0" : "+" + s;
        default: return s + "e0";
        }
    }
    case QuestionKind::FillText:
    {
        auto s = std::get<std::string>(q.key);
        for (auto& c : s)
            if (rng() % 2)
                c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        return " " + s + "  ";
    }
    default: return correct_answers(Test("x", "", {q}))[q.id];
    }
}

json wrong(const Question& q, std::mt19937_64& rng)
{
    switch (q.kind)
    {
    case QuestionKind::SingleChoice: return (std::get<std::size_t>(q.key) + 1 + rng() % 3) % (q.options.size() + 1);
    case QuestionKind::MultipleChoice:
    {
        auto key = std::get<std::set<std::size_t>>(q.key);
        const auto flip = rng() % q.options.size();
        if (!key.erase(flip))
            key.insert(flip);
        return key;
    }
    case QuestionKind::TrueFalse: return !std::get<bool>(q.key);
    case QuestionKind::FillNumeric: return std::get<double>(q.key) + 0.25 * (1 + rng() % 4);
    case QuestionKind::FillText: return std::get<std::string>(q.key) + "x";
    }
    return nullptr;
}

json mistyped(const Question& q, std::mt19937_64& rng)
{
    static const std::vector<json> junk{json("1"), json(1.5), json(-1), json::array({"a"}), json(nullptr),
                                        json::object(), json(true)};
    static const std::vector<std::string> bad_numbers{"inf", "nan", "0x1p3", "1e", "--3", "+-3", "", "3.5abc", ".", "e5"};
    if (q.kind == QuestionKind::FillNumeric && rng() % 2)
        return bad_numbers[rng() % bad_numbers.size()];
    auto j = junk[rng() % junk.size()];
    // A boolean is the right type for true/false, a number for numeric: keep them wrong-typed.
    if ((q.kind == QuestionKind::TrueFalse && j.is_boolean()) || (q.kind == QuestionKind::FillNumeric && j.is_number()))
        return "maybe";
    return j;
}

Question question(std::string id, QuestionKind kind, std::vector<std::string> options, AnswerKey key, double weight)
{
    Question q;
    q.id = std::move(id);
    q.kind = kind;
    q.prompt = "?";
    q.options = std::move(options);
    q.key = std::move(key);
    q.weight = weight;
    return q;
}

} // namespace

Test random_test(std::mt19937_64& rng, const std::string& id)
{
    static const std::vector<std::string> words{"Paris", "ohm", "Newton", "mitosis", "Lisbon", "entropy"};
    const std::size_t n = 1 + rng() % 8;
    std::vector<Question> qs;
    for (std::size_t i = 0; i < n; ++i)
    {
        const auto kind = static_cast<QuestionKind>(rng() % 5);
        const double weight = static_cast<double>(1 + rng() % 20) / 2.0;
        const auto qid = "q" + std::to_string(i);
        std::vector<std::string> opts;
        if (kind == QuestionKind::SingleChoice || kind == QuestionKind::MultipleChoice)
            for (std::size_t o = 0, m = 2 + rng() % 4; o < m; ++o)
                opts.push_back("opt" + std::to_string(o));
        AnswerKey key;
        switch (kind)
        {
        case QuestionKind::SingleChoice: key = std::size_t(rng() % opts.size()); break;
        case QuestionKind::MultipleChoice:
        {
            std::set<std::size_t> s{rng() % opts.size()};
            for (std::size_t o = 0; o < opts.size(); ++o)
                if (rng() % 3 == 0)
                    s.insert(o);
            key = s;
            break;
        }
        case QuestionKind::TrueFalse: key = bool(rng() % 2); break;
        case QuestionKind::FillNumeric: key = static_cast<double>(static_cast<long>(rng() % 2001) - 1000) / 4.0; break;
        case QuestionKind::FillText: key = words[rng() % words.size()]; break;
        }
        qs.push_back(question(qid, kind, std::move(opts), std::move(key), weight));
    }
    return Test(id, "random", std::move(qs));
}

Answers random_answers(const Test& test, std::mt19937_64& rng)
{
    const auto right = correct_answers(test);
    Answers a;
    for (const auto& q : test.questions())
    {
        switch (rng() % 6)
        {
        case 0: break;
        case 1: a[q.id] = right.at(q.id); break;
        case 2: a[q.id] = reformatted(q, rng); break;
        case 3: a[q.id] = wrong(q, rng); break;
        default: a[q.id] = mistyped(q, rng); break;
        }
    }
    return a;
}

CheckResult grading_equivalence(std::uint64_t seed, int cases)
{
    CheckResult r;
    std::mt19937_64 rng(seed);
    for (int c = 0; c < cases && r.ok; ++c)
    {
        const auto test = random_test(rng);
        auto answers = random_answers(test, rng);
        const bool stray = rng() % 10 == 0;
        if (stray)
            answers["nope"] = 1;

        const auto expected = oracle_score(test, answers);
        std::optional<double> got;
        try
        {
            got = grade(test, answers).score;
        }
        catch (const Error& e)
        {
            if (e.code() != Errc::UnknownQuestionId)
                r.fail("case " + std::to_string(c) + ": unexpected " + e.what());
        }
        if (got != expected)
        {
            r.fail("case " + std::to_string(c) + ": engine " + (got ? shortest(*got) : "rejected") + ", oracle " +
                   (expected ? shortest(*expected) : "rejected") + " for " + json(answers).dump());
            break;
        }
        if (got && (*got < 0 || *got > test.total_weight()))
            r.fail("case " + std::to_string(c) + ": score out of bounds");
        if (grade(test, correct_answers(test)).score != test.total_weight())
            r.fail("case " + std::to_string(c) + ": all-correct is not the total weight");
        if (oracle_score(test, correct_answers(test)) != test.total_weight())
            r.fail("case " + std::to_string(c) + ": oracle disagrees on all-correct");
        if (grade(test, {}).score != 0.0 || oracle_score(test, {}) != 0.0)
            r.fail("case " + std::to_string(c) + ": empty answers do not score 0");
    }
    return r;
}

std::shared_ptr<AssessmentServices> sample_services(const std::filesystem::path& results)
{
    auto svc = std::make_shared<AssessmentServices>();
    if (!results.empty())
        svc->results = std::make_shared<ResultsStore>(results);
    svc->add_test(Test("midterm", "Midterm",
                       {question("q1", QuestionKind::SingleChoice, {"a", "b", "c"}, std::size_t{1}, 2),
                        question("q2", QuestionKind::MultipleChoice, {"w", "x", "y", "z"}, std::set<std::size_t>{0, 2}, 3),
                        question("q3", QuestionKind::FillNumeric, {}, 3.5, 5)},
                       Exam{2}));
    svc->add_test(Test("t1", "Geography",
                       {question("q1", QuestionKind::TrueFalse, {}, true, 1),
                        question("q2", QuestionKind::FillText, {}, std::string("Paris"), 2),
                        question("q3", QuestionKind::FillNumeric, {}, 42.0, 1)}));
    svc->add_test(Test("t2", "Physics", {question("q1", QuestionKind::FillText, {}, std::string("ohm"), 1)}));
    return svc;
}

std::unique_ptr<PlatformAdapter> assessment_adapter(AdapterKind kind, SimConfig cfg,
                                                    std::shared_ptr<AssessmentServices> services)
{
    auto reg = make_default_registry();
    install_assessment(*reg, std::move(services));
    return make_adapter(kind, std::move(cfg), std::move(reg));
}

CheckResult push_exam(AdapterKind kind, const std::filesystem::path& results_file)
{
    CheckResult r;
    std::filesystem::remove(results_file);
    auto svc = sample_services(results_file);
    svc->answers.set("A", "midterm", {{"q1", 1}, {"q2", {2, 0}}, {"q3", "3.50"}});
    svc->answers.set("C", "midterm", {{"q1", 1}, {"q2", {0}}, {"q3", 4}});

    SimConfig cfg;
    cfg.message_latency = FixedLatency{1};
    cfg.migration_latency = FixedLatency{3};
    auto p = assessment_adapter(kind, cfg, svc);
    for (const auto* name : {"Server", "A", "B", "C"})
        p->create_location(name);
    // B can only be reached at 6 or later.
    const ExamPlan plan{"midterm", "Server", {{"A", 0, 20}, {"B", 0, 5}, {"C", 15, 30}}};
    const auto out = run_exam_push(*p, *svc, plan);

    if (out.run.reason != StopReason::Quiescent)
        r.fail("exam run did not reach quiescence");
    if (!out.report)
        return r.fail("no exam report stored"), r;
    const auto& rep = *out.report;
    auto names = [](const std::vector<ClientRef>& v) {
        std::vector<std::string> n;
        for (const auto& c : v)
            n.push_back(c.name);
        return n;
    };
    if (names(rep.delivered) != std::vector<std::string>{"A", "C"})
        r.fail("delivered " + json(names(rep.delivered)).dump());
    if (names(rep.missed) != std::vector<std::string>{"B"})
        r.fail("missed " + json(names(rep.missed)).dump());
    if (rep.submissions.size() != 2)
        r.fail(std::to_string(rep.submissions.size()) + " submissions");
    else
    {
        std::multiset<double> scores{rep.submissions[0].score, rep.submissions[1].score};
        if (scores != std::multiset<double>{10.0, 2.0})
            r.fail("unexpected submission scores");
    }

    const auto persisted = load_reports(results_file);
    if (persisted.size() != 1 || persisted[0] != rep)
        r.fail("persisted report differs from the in-memory one");
    else if (persisted[0].submissions.size() != 2)
        r.fail("persisted report lacks submissions");

    if (p->is_live(out.server))
        r.fail("exam agent still live");
    bool terminated = false;
    for (const auto& e : p->trace().events())
        terminated = terminated || (e.kind == TraceKind::Terminate && e.agent == out.server);
    if (!terminated)
        r.fail("exam agent Terminate not traced");

    // Client-side agents live only between the courier's arrival and their submission.
    std::map<std::string, VirtualTime> arrivals;
    std::map<AgentId, std::pair<std::string, VirtualTime>> client_agents;
    std::map<AgentId, VirtualTime> submitted, terminated_at;
    const std::set<std::string> clients{"A", "B", "C"};
    for (const auto& e : p->trace().events())
    {
        if (e.kind == TraceKind::MigrateEnd && e.agent == out.server)
            arrivals.emplace(e.detail["to"].get<std::string>(), e.tick);
        if (e.kind == TraceKind::Spawn && clients.contains(e.detail["location"].get<std::string>()))
            client_agents[e.agent] = {e.detail["location"].get<std::string>(), e.tick};
        if (e.kind == TraceKind::Send && e.detail["type"] == std::string(kSubmissionTag))
            submitted[e.agent] = e.tick;
        if (e.kind == TraceKind::Terminate)
            terminated_at[e.agent] = e.tick;
    }
    if (client_agents.size() != 2)
        r.fail(std::to_string(client_agents.size()) + " client-side agents");
    for (const auto& [id, where] : client_agents)
    {
        const auto& [loc, born] = where;
        if (!arrivals.contains(loc) || born < arrivals[loc])
            r.fail("agent at " + loc + " exists before the courier arrived");
        if (!submitted.contains(id) || !terminated_at.contains(id) || terminated_at[id] != submitted[id])
            r.fail("agent at " + loc + " outlives its submission");
    }
    return r;
}

CheckResult pull_sessions(AdapterKind kind)
{
    CheckResult r;
    auto svc = sample_services();
    SimConfig cfg;
    cfg.message_latency = UniformLatency{1, 3};
    cfg.migration_latency = FixedLatency{1};
    cfg.seed = 7;
    auto p = assessment_adapter(kind, cfg, svc);
    for (const auto* name : {"Server", "S1", "S2"})
        p->create_location(name);

    const auto t1 = svc->test("t1");
    const SessionScript full{SessionCommand::list(), SessionCommand::get("t1"),
                             SessionCommand::submit(correct_answers(t1)), SessionCommand::end()};
    const SessionScript other{SessionCommand::get("t2"), SessionCommand::get("nope"),
                              SessionCommand::submit({{"q1", "OHM "}}), SessionCommand::end()};
    const auto out = run_self_assessment(*p, PullSetup{"Server", {{"S1", full}, {"S2", other}}});

    if (out.run.reason != StopReason::Quiescent)
        r.fail("pull run did not reach quiescence");
    if (!p->is_live(out.server))
        r.fail("permanent server terminated");
    if (out.sessions.size() != 2)
        return r.fail("missing session logs"), r;

    const auto& s1 = out.sessions[0];
    const auto& s2 = out.sessions[1];
    auto entry = [](const SessionLog& log, const std::string& what, const std::string& key = {},
                    const json& value = {}) -> const json* {
        for (const auto& e : log.entries)
            if (e["session"] == what && (key.empty() || e.value(key, json()) == value))
                return &e;
        return nullptr;
    };
    const auto* listed = entry(s1, "data", "what", "list");
    if (!listed || (*listed)["tests"] != json::array({"t1", "t2"}))
        r.fail("list reply missing or wrong");
    if (!entry(s1, "data", "test", "t1"))
        r.fail("t1 payload not received");
    if (s1.score != t1.total_weight())
        r.fail("session 1 local score is not the total weight");
    if (!entry(s2, "data_error"))
        r.fail("unknown test did not produce an error reply");
    if (s2.score != 1.0)
        r.fail("session 2 local score wrong");
    if (!s1.ended || !s2.ended)
        r.fail("a session did not end");
    if (!s1.worker || !s2.worker || *s1.worker == *s2.worker)
        return r.fail("sessions do not have distinct workers"), r;
    for (const auto* s : {&s1, &s2})
        if (p->is_live(*s->worker) || p->is_live(s->student))
            r.fail("session agents outlive EndSession");

    const auto& prog = svc->results->progress();
    if (prog.size() != 2)
        r.fail(std::to_string(prog.size()) + " progress records");
    for (const auto& rec : prog)
    {
        auto j = to_json(rec);
        std::set<std::string> keys;
        for (const auto& [k, _] : j.items())
            keys.insert(k);
        if (keys != std::set<std::string>{"student", "test_id", "score", "timestamp"})
            r.fail("progress record carries more than the outcome");
    }
    const bool s1_recorded = std::any_of(prog.begin(), prog.end(), [&](const ProgressRecord& rec) {
        return rec.student == s1.student && rec.test_id == "t1" && rec.score == t1.total_weight();
    });
    if (!s1_recorded)
        r.fail("no progress record for session 1");

    // Channel separation and conversation isolation.
    std::map<AgentId, int> session_of{{s1.student, 0}, {*s1.worker, 0}, {s2.student, 1}, {*s2.worker, 1}};
    for (const auto& e : p->trace().events())
        if (e.kind == TraceKind::Spawn && e.detail.contains("parent"))
        {
            auto it = session_of.find(AgentId{e.detail["parent"].get<std::uint64_t>()});
            if (it != session_of.end())
                session_of[e.agent] = it->second;
        }
    std::map<std::string, std::set<int>> conv_sessions;
    std::set<std::string> cmd_tags, data_tags;
    for (const auto& e : p->trace().events())
    {
        if (e.kind != TraceKind::Send)
            continue;
        const auto type = e.detail["type"].get<std::string>();
        const AgentId to{e.detail["to"].get<std::uint64_t>()};
        for (auto a : {e.agent, to})
            if (auto it = session_of.find(a); it != session_of.end())
                conv_sessions[e.detail["conversation"]].insert(it->second);
        if (type == std::string(kSessionCommandTag))
        {
            cmd_tags.insert(type);
            const bool s1_cmd = e.agent == s1.student && to == *s1.worker;
            const bool s2_cmd = e.agent == s2.student && to == *s2.worker;
            if (!s1_cmd && !s2_cmd)
                r.fail("command sent outside a student-to-session-agent channel");
        }
        else
            data_tags.insert(type);
    }
    if (cmd_tags.empty() || data_tags != std::set<std::string>{"REQUEST", "ACK", "RESULT"})
        r.fail("command and data channels are not both in use");
    for (const auto& [conv, sessions] : conv_sessions)
        if (sessions.size() > 1)
            r.fail("conversation " + conv + " crosses sessions");
    return r;
}

} // namespace magent::testing
