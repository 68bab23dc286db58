#include "magent/assessment/model.hpp"

#include "magent/core/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

namespace magent::assessment {

namespace {

constexpr std::array<std::pair<QuestionKind, std::string_view>, 5> kKindNames{{
    {QuestionKind::SingleChoice, "single_choice"},
    {QuestionKind::MultipleChoice, "multiple_choice"},
    {QuestionKind::TrueFalse, "true_false"},
    {QuestionKind::FillNumeric, "fill_numeric"},
    {QuestionKind::FillText, "fill_text"},
}};

std::string_view trim(std::string_view s)
{
    constexpr std::string_view ws = " \t\r\n\f\v";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::string fold(std::string_view s)
{
    std::string out(trim(s));
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c); });
    return out;
}

/// Plain decimal with optional sign and exponent; no hex, inf or nan.
std::optional<double> parse_decimal(std::string_view s)
{
    s = trim(s);
    if (!s.empty() && s.front() == '+')
    {
        s.remove_prefix(1);
        if (!s.empty() && s.front() == '-')
            return std::nullopt;
    }
    if (s.empty() || !(std::isdigit(static_cast<unsigned char>(s.back())) || s.back() == '.'))
        return std::nullopt;
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, std::chars_format::general);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
        return std::nullopt;
    return v;
}

std::optional<std::size_t> as_index(const nlohmann::json& a)
{
    if (a.is_number_unsigned())
        return a.get<std::size_t>();
    if (a.is_number_integer() && a.get<long long>() >= 0)
        return static_cast<std::size_t>(a.get<long long>());
    return std::nullopt;
}

bool key_fits(QuestionKind kind, const AnswerKey& key)
{
    switch (kind)
    {
    case QuestionKind::SingleChoice: return std::holds_alternative<std::size_t>(key);
    case QuestionKind::MultipleChoice: return std::holds_alternative<std::set<std::size_t>>(key);
    case QuestionKind::TrueFalse: return std::holds_alternative<bool>(key);
    case QuestionKind::FillNumeric: return std::holds_alternative<double>(key);
    case QuestionKind::FillText: return std::holds_alternative<std::string>(key);
    }
    return false;
}

[[noreturn]] void bad_question(const std::string& id, const std::string& why)
{
    throw Error(Errc::InvalidTest, "question '" + id + "': " + why);
}

} // namespace

std::string_view to_string(QuestionKind kind) noexcept
{
    for (const auto& [k, name] : kKindNames)
        if (k == kind)
            return name;
    return "?";
}

QuestionKind question_kind_from_string(std::string_view s)
{
    for (const auto& [k, name] : kKindNames)
        if (name == s)
            return k;
    throw Error(Errc::InvalidTest, "unknown question kind '" + std::string(s) + "'");
}

void Question::validate() const
{
    if (id.empty())
        throw Error(Errc::InvalidTest, "question with empty id");
    if (!(weight > 0) || !std::isfinite(weight))
        bad_question(id, "weight must be positive");
    if (!key_fits(kind, key))
        bad_question(id, "key does not suit a " + std::string(to_string(kind)) + " question");

    const bool choice = kind == QuestionKind::SingleChoice || kind == QuestionKind::MultipleChoice;
    if (choice && options.empty())
        bad_question(id, "choice question without options");
    if (!choice && !options.empty())
        bad_question(id, "options are only allowed on choice questions");
    if (const auto* i = std::get_if<std::size_t>(&key); i && *i >= options.size())
        bad_question(id, "key index " + std::to_string(*i) + " out of range");
    if (const auto* set = std::get_if<std::set<std::size_t>>(&key))
    {
        if (set->empty())
            bad_question(id, "multiple choice key is empty");
        if (*set->rbegin() >= options.size())
            bad_question(id, "key index " + std::to_string(*set->rbegin()) + " out of range");
    }
    if (const auto* d = std::get_if<double>(&key); d && !std::isfinite(*d))
        bad_question(id, "numeric key must be finite");
}

Test::Test(std::string id, std::string title, std::vector<Question> questions, TestKind kind)
    : id_(std::move(id)), title_(std::move(title)), questions_(std::move(questions)), kind_(kind)
{
    if (id_.empty())
        throw Error(Errc::InvalidTest, "test with empty id");
    if (questions_.empty())
        throw Error(Errc::InvalidTest, "test '" + id_ + "' has no questions");
    std::set<std::string> seen;
    for (const auto& q : questions_)
    {
        q.validate();
        if (!seen.insert(q.id).second)
            throw Error(Errc::InvalidTest, "test '" + id_ + "': duplicate question id '" + q.id + "'");
    }
}

double Test::total_weight() const noexcept
{
    double sum = 0.0;
    for (const auto& q : questions_)
        sum += q.weight;
    return sum;
}

bool answer_matches(const Question& q, const nlohmann::json& a, const GradeOptions& options)
{
    switch (q.kind)
    {
    case QuestionKind::SingleChoice:
    {
        const auto i = as_index(a);
        return i && *i == std::get<std::size_t>(q.key);
    }
    case QuestionKind::MultipleChoice:
    {
        if (!a.is_array())
            return false;
        std::set<std::size_t> given;
        for (const auto& x : a)
        {
            const auto i = as_index(x);
            if (!i)
                return false;
            given.insert(*i);
        }
        return given == std::get<std::set<std::size_t>>(q.key);
    }
    case QuestionKind::TrueFalse: return a.is_boolean() && a.get<bool>() == std::get<bool>(q.key);
    case QuestionKind::FillNumeric:
    {
        std::optional<double> v;
        if (a.is_number())
            v = a.get<double>();
        else if (a.is_string())
            v = parse_decimal(a.get_ref<const std::string&>());
        return v && std::abs(*v - std::get<double>(q.key)) <= options.numeric_tolerance;
    }
    case QuestionKind::FillText:
        return a.is_string() && fold(a.get_ref<const std::string&>()) == fold(std::get<std::string>(q.key));
    }
    return false;
}

GradeResult grade(const Test& test, const Answers& answers, const GradeOptions& options)
{
    std::map<std::string_view, const Question*> by_id;
    for (const auto& q : test.questions())
        by_id.emplace(q.id, &q);
    for (const auto& [id, _] : answers)
        if (!by_id.contains(id))
            throw Error(Errc::UnknownQuestionId, "test '" + test.id() + "' has no question '" + id + "'");

    GradeResult r;
    for (const auto& q : test.questions())
    {
        auto it = answers.find(q.id);
        const bool ok = it != answers.end() && answer_matches(q, it->second, options);
        r.breakdown.push_back({q.id, ok ? q.weight : 0.0, ok});
        r.score += ok ? q.weight : 0.0;
        r.max_score += q.weight;
    }
    return r;
}

Answers correct_answers(const Test& test)
{
    Answers out;
    for (const auto& q : test.questions())
    {
        std::visit([&](const auto& k) { out[q.id] = k; }, q.key);
    }
    return out;
}

// ---------------------------------------------------------------------------- JSON

nlohmann::json to_json(const Question& q)
{
    nlohmann::json j{{"id", q.id}, {"kind", to_string(q.kind)}, {"prompt", q.prompt}, {"weight", q.weight}};
    if (!q.options.empty())
        j["options"] = q.options;
    std::visit([&](const auto& k) { j["key"] = k; }, q.key);
    return j;
}

nlohmann::json to_json(const Test& t)
{
    nlohmann::json qs = nlohmann::json::array();
    for (const auto& q : t.questions())
        qs.push_back(to_json(q));
    nlohmann::json j{{"id", t.id()}, {"title", t.title()}, {"questions", std::move(qs)}};
    if (const auto* e = std::get_if<Exam>(&t.kind()))
    {
        j["kind"] = "exam";
        j["scheduled_at"] = e->scheduled_at;
    }
    else
    {
        j["kind"] = "self_assessment";
    }
    return j;
}

Question question_from_json(const nlohmann::json& j)
{
    if (!j.is_object())
        throw Error(Errc::InvalidTest, "question must be an object");
    Question q;
    q.id = j.value("id", std::string{});
    try
    {
        q.kind = question_kind_from_string(j.at("kind").get<std::string>());
        q.prompt = j.value("prompt", std::string{});
        q.options = j.value("options", std::vector<std::string>{});
        q.weight = j.value("weight", 1.0);
        const auto& key = j.at("key");
        switch (q.kind)
        {
        case QuestionKind::SingleChoice: q.key = key.get<std::size_t>(); break;
        case QuestionKind::MultipleChoice: q.key = key.get<std::set<std::size_t>>(); break;
        case QuestionKind::TrueFalse: q.key = key.get<bool>(); break;
        case QuestionKind::FillNumeric: q.key = key.get<double>(); break;
        case QuestionKind::FillText: q.key = key.get<std::string>(); break;
        }
    }
    catch (const nlohmann::json::exception& e)
    {
        bad_question(q.id, e.what());
    }
    catch (const Error& e)
    {
        bad_question(q.id, e.what());
    }
    q.validate();
    return q;
}

Test test_from_json(const nlohmann::json& j)
{
    if (!j.is_object())
        throw Error(Errc::InvalidTest, "test must be an object");
    const auto id = j.value("id", std::string{});
    std::vector<Question> qs;
    for (const auto& q : j.value("questions", nlohmann::json::array()))
        qs.push_back(question_from_json(q));
    TestKind kind = SelfAssessment{};
    const auto k = j.value("kind", std::string("self_assessment"));
    if (k == "exam")
        kind = Exam{j.value("scheduled_at", VirtualTime{0})};
    else if (k != "self_assessment")
        throw Error(Errc::InvalidTest, "test '" + id + "': unknown kind '" + k + "'");
    return Test(id, j.value("title", std::string{}), std::move(qs), kind);
}

nlohmann::json to_json(const Submission& s)
{
    return {{"test_id", s.test_id},     {"student", s.student.value}, {"answers", s.answers},
            {"score", s.score},         {"max_score", s.max_score},   {"graded_at", s.graded_at}};
}

nlohmann::json to_json(const ExamReport& r)
{
    auto refs = [](const std::vector<ClientRef>& v) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& c : v)
            out.push_back({{"location", c.id.value}, {"name", c.name}});
        return out;
    };
    nlohmann::json subs = nlohmann::json::array();
    for (const auto& s : r.submissions)
        subs.push_back(to_json(s));
    return {{"test_id", r.test_id}, {"delivered", refs(r.delivered)}, {"missed", refs(r.missed)},
            {"submissions", std::move(subs)}};
}

nlohmann::json to_json(const ProgressRecord& p)
{
    return {{"student", p.student.value}, {"test_id", p.test_id}, {"score", p.score}, {"timestamp", p.timestamp}};
}

Submission submission_from_json(const nlohmann::json& j)
{
    try
    {
        Submission s;
        s.test_id = j.at("test_id").get<std::string>();
        s.student = AgentId{j.at("student").get<std::uint64_t>()};
        s.answers = j.at("answers").get<Answers>();
        s.score = j.at("score").get<double>();
        s.max_score = j.at("max_score").get<double>();
        s.graded_at = j.at("graded_at").get<VirtualTime>();
        return s;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw Error(Errc::Serialization, std::string("submission: ") + e.what());
    }
}

ExamReport exam_report_from_json(const nlohmann::json& j)
{
    try
    {
        auto refs = [](const nlohmann::json& v) {
            std::vector<ClientRef> out;
            for (const auto& c : v)
                out.push_back({LocationId{c.at("location").get<std::uint64_t>()}, c.at("name").get<std::string>()});
            return out;
        };
        ExamReport r;
        r.test_id = j.at("test_id").get<std::string>();
        r.delivered = refs(j.at("delivered"));
        r.missed = refs(j.at("missed"));
        for (const auto& s : j.at("submissions"))
            r.submissions.push_back(submission_from_json(s));
        return r;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw Error(Errc::Serialization, std::string("exam report: ") + e.what());
    }
}

ProgressRecord progress_from_json(const nlohmann::json& j)
{
    try
    {
        return {AgentId{j.at("student").get<std::uint64_t>()}, j.at("test_id").get<std::string>(),
                j.at("score").get<double>(), j.at("timestamp").get<VirtualTime>()};
    }
    catch (const nlohmann::json::exception& e)
    {
        throw Error(Errc::Serialization, std::string("progress record: ") + e.what());
    }
}

} // namespace magent::assessment
