#pragma once

#include "magent/core/types.hpp"

#include <json.hpp>

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace magent::assessment {

enum class QuestionKind
{
    SingleChoice,
    MultipleChoice,
    TrueFalse,
    FillNumeric,
    FillText,
};

std::string_view to_string(QuestionKind kind) noexcept;
/// Throws Errc::InvalidTest.
QuestionKind question_kind_from_string(std::string_view s);

/// Option index, index set, boolean, number or text; the alternative must suit the kind.
using AnswerKey = std::variant<std::size_t, std::set<std::size_t>, bool, double, std::string>;

struct Question
{
    std::string id;
    QuestionKind kind = QuestionKind::SingleChoice;
    std::string prompt;
    std::vector<std::string> options;
    AnswerKey key;
    double weight = 1.0;

    /// Throws Errc::InvalidTest naming the question.
    void validate() const;

    bool operator==(const Question&) const = default;
};

struct SelfAssessment
{
    bool operator==(const SelfAssessment&) const = default;
};

struct Exam
{
    VirtualTime scheduled_at = 0;
    bool operator==(const Exam&) const = default;
};

using TestKind = std::variant<SelfAssessment, Exam>;

/// A validated test: non-empty, unique question ids, positive weights.
class Test
{
public:
    /// Throws Errc::InvalidTest.
    Test(std::string id, std::string title, std::vector<Question> questions, TestKind kind = SelfAssessment{});

    const std::string& id() const noexcept { return id_; }
    const std::string& title() const noexcept { return title_; }
    const std::vector<Question>& questions() const noexcept { return questions_; }
    const TestKind& kind() const noexcept { return kind_; }
    bool is_exam() const noexcept { return std::holds_alternative<Exam>(kind_); }
    double total_weight() const noexcept;

    bool operator==(const Test&) const = default;

private:
    std::string id_;
    std::string title_;
    std::vector<Question> questions_;
    TestKind kind_;
};

/// Student answers by question id. Values are JSON: an index, an array of indices, a
/// boolean, a number or a string, matching the question kind.
using Answers = std::map<std::string, nlohmann::json>;

struct GradeOptions
{
    /// Allowed absolute difference for FillNumeric answers.
    double numeric_tolerance = 0.0;
};

struct QuestionGrade
{
    std::string question_id;
    double awarded = 0.0;
    bool correct = false;

    bool operator==(const QuestionGrade&) const = default;
};

struct GradeResult
{
    double score = 0.0;
    double max_score = 0.0;
    std::vector<QuestionGrade> breakdown;
};

/// All or nothing per question; unanswered or wrongly typed answers earn 0. Scores are
/// summed in question order. Throws Errc::UnknownQuestionId.
GradeResult grade(const Test& test, const Answers& answers, const GradeOptions& options = {});

/// Whether `answer` exactly matches the question's key (no weight involved).
bool answer_matches(const Question& q, const nlohmann::json& answer, const GradeOptions& options = {});

/// Answers that score full marks.
Answers correct_answers(const Test& test);

struct Submission
{
    std::string test_id;
    AgentId student;
    Answers answers;
    double score = 0.0;
    double max_score = 0.0;
    VirtualTime graded_at = 0;

    bool operator==(const Submission&) const = default;
};

struct ClientRef
{
    LocationId id;
    std::string name;

    bool operator==(const ClientRef&) const = default;
};

struct ExamReport
{
    std::string test_id;
    std::vector<ClientRef> delivered;
    std::vector<ClientRef> missed;
    std::vector<Submission> submissions;

    bool operator==(const ExamReport&) const = default;
};

/// What a self-assessment session leaves behind: no answers, only the outcome.
struct ProgressRecord
{
    AgentId student;
    std::string test_id;
    double score = 0.0;
    VirtualTime timestamp = 0;

    bool operator==(const ProgressRecord&) const = default;
};

nlohmann::json to_json(const Question& q);
nlohmann::json to_json(const Test& t);
nlohmann::json to_json(const Submission& s);
nlohmann::json to_json(const ExamReport& r);
nlohmann::json to_json(const ProgressRecord& p);

/// Throw Errc::InvalidTest on schema or invariant violations.
Question question_from_json(const nlohmann::json& j);
Test test_from_json(const nlohmann::json& j);

/// Throw Errc::Serialization.
Submission submission_from_json(const nlohmann::json& j);
ExamReport exam_report_from_json(const nlohmann::json& j);
ProgressRecord progress_from_json(const nlohmann::json& j);

} // namespace magent::assessment
