#pragma once

#include "magent/assessment/model.hpp"
#include "magent/assessment/repository.hpp"
#include "magent/core/behavior.hpp"
#include "magent/platform/adapter.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace magent {
struct Registry;
}

namespace magent::assessment {

inline constexpr std::string_view kSubmissionTag = "SUBMISSION";
inline constexpr std::string_view kSessionCommandTag = "SA_CMD";

/// Scripted students: location name -> test id -> answers. Stands in for the people
/// sitting at the client machines.
class AnswerBook
{
public:
    void set(std::string location, std::string test_id, Answers answers);
    /// Empty answers when nothing was scripted.
    Answers lookup(std::string_view location, std::string_view test_id) const;

    static AnswerBook from_json(const nlohmann::json& j);

private:
    std::map<std::string, std::map<std::string, Answers>, std::less<>> book_;
};

/// What the assessment actions reach outside the agents: the test repository, the
/// scripted answers and the results store.
struct AssessmentServices
{
    std::map<std::string, Test> tests;
    AnswerBook answers;
    std::shared_ptr<ResultsStore> results = std::make_shared<ResultsStore>();
    GradeOptions grading;

    void add_test(Test t);
    /// Throws Errc::MalformedRepository for an unknown id.
    const Test& test(std::string_view id) const;
};

/// Registers the exam.* and session.* actions, bound to `services`.
void install_assessment(Registry& registry, std::shared_ptr<AssessmentServices> services);

// ---------------------------------------------------------------------------- push

struct ClientWindow
{
    std::string location;
    VirtualTime earliest = 0;
    VirtualTime latest = kUnbounded;

    bool operator==(const ClientWindow&) const = default;
};

/// A compulsory exam: the courier leaves the server location at the test's scheduled
/// time, visits every client within its absolute window and comes back.
struct ExamPlan
{
    std::string test_id;
    std::string server_location;
    std::vector<ClientWindow> clients;

    bool operator==(const ExamPlan&) const = default;
};

nlohmann::json to_json(const ExamPlan& plan);
/// Throws Errc::Serialization.
ExamPlan exam_plan_from_json(const nlohmann::json& j);

/// Throws Errc::InvalidTest (unknown test, not an exam, no clients, duplicate client,
/// earliest > latest).
void validate(const ExamPlan& plan, const AssessmentServices& services);

/// Behavior spec of the server-side exam agent: an Observer that launches the courier
/// at the scheduled time.
nlohmann::json exam_agent_spec(const ExamPlan& plan, const Test& test);

struct PushOutcome
{
    AgentId server;
    RunReport run;
    std::optional<ExamReport> report;
};

/// Spawns the exam agent at the plan's server location and runs to quiescence. The
/// platform's registry must have the assessment installed with `services`.
/// Throws what validate() throws and Errc::UnknownLocation.
PushOutcome run_exam_push(PlatformAdapter& platform, const AssessmentServices& services, const ExamPlan& plan);

// ---------------------------------------------------------------------------- pull

struct SessionCommand
{
    enum class Kind
    {
        ListTests,
        GetTest,
        SubmitResults,
        EndSession,
    };

    Kind kind = Kind::ListTests;
    std::string test_id;
    Answers answers;

    static SessionCommand list() { return {Kind::ListTests, {}, {}}; }
    static SessionCommand get(std::string id) { return {Kind::GetTest, std::move(id), {}}; }
    static SessionCommand submit(Answers a) { return {Kind::SubmitResults, {}, std::move(a)}; }
    static SessionCommand end() { return {Kind::EndSession, {}, {}}; }

    bool operator==(const SessionCommand&) const = default;
};

using SessionScript = std::vector<SessionCommand>;

/// Throws Errc::InvalidScript: empty, not ending with EndSession, commands after
/// EndSession, SubmitResults before any GetTest, GetTest without an id.
void validate_script(const SessionScript& script);

nlohmann::json to_json(const SessionScript& script);
/// Throws Errc::InvalidScript.
SessionScript session_script_from_json(const nlohmann::json& j);

/// The permanent self-assessment server: a cyclic Server whose first worker per client
/// turns into that client's session agent.
nlohmann::json session_server_spec();
/// Student agent: asks `server` for a session, then plays `script`.
nlohmann::json session_student_spec(AgentId server, const SessionScript& script);

struct SessionLog
{
    AgentId student;
    std::string location;
    std::optional<AgentId> worker;
    /// Custom trace details tagged "session" from the student and its worker, in order.
    std::vector<nlohmann::json> entries;
    std::optional<double> score;
    bool ended = false;
};

struct PullSetup
{
    std::string server_location;
    /// Client location name and script per student.
    std::vector<std::pair<std::string, SessionScript>> students;
};

struct PullOutcome
{
    AgentId server;
    RunReport run;
    std::vector<SessionLog> sessions;
};

/// Rebuilds per-student logs from a trace.
std::vector<SessionLog> session_logs(const PlatformAdapter& platform, const std::vector<AgentId>& students);

/// Spawns the server and one student agent per entry, runs to quiescence. The registry
/// must have the assessment installed. Throws Errc::InvalidScript, Errc::UnknownLocation.
PullOutcome run_self_assessment(PlatformAdapter& platform, const PullSetup& setup);

/// Checks the params of an assessment action used inside a scenario ("" when fine).
std::string check_action_params(std::string_view action, const nlohmann::json& params,
                                const AssessmentServices& services);

} // namespace magent::assessment
