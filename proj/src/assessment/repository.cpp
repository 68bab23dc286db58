#include "magent/assessment/repository.hpp"

#include "magent/core/error.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace magent::assessment {

namespace {

std::string read_file(const std::filesystem::path& path, Errc code)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(code, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool blank(const std::string& s)
{
    return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

} // namespace

std::vector<RepositoryIssue> check_repository(const nlohmann::json& doc)
{
    std::vector<RepositoryIssue> issues;
    if (!doc.is_object())
        return {{"", "repository must be a JSON object"}};
    if (doc.contains("format_version") && doc["format_version"] != 1)
        issues.push_back({"/format_version", "unsupported format_version " + doc["format_version"].dump()});
    if (!doc.contains("tests") || !doc["tests"].is_array())
    {
        issues.push_back({"/tests", "missing 'tests' array"});
        return issues;
    }

    std::set<std::string> test_ids;
    const auto& tests = doc["tests"];
    for (std::size_t t = 0; t < tests.size(); ++t)
    {
        const std::string tp = "/tests/" + std::to_string(t);
        const auto& tj = tests[t];
        if (!tj.is_object())
        {
            issues.push_back({tp, "test must be an object"});
            continue;
        }
        const auto id = tj.value("id", std::string{});
        if (!test_ids.insert(id).second)
            issues.push_back({tp + "/id", "duplicate test id '" + id + "'"});

        const auto qs = tj.value("questions", nlohmann::json::array());
        bool question_issue = false;
        for (std::size_t q = 0; q < qs.size(); ++q)
        {
            try
            {
                question_from_json(qs[q]);
            }
            catch (const Error& e)
            {
                issues.push_back({tp + "/questions/" + std::to_string(q), e.what()});
                question_issue = true;
            }
        }
        if (question_issue)
            continue;
        try
        {
            test_from_json(tj);
        }
        catch (const Error& e)
        {
            issues.push_back({tp, e.what()});
        }
    }
    return issues;
}

std::vector<Test> parse_tests(const nlohmann::json& doc)
{
    const auto issues = check_repository(doc);
    if (!issues.empty())
    {
        std::string msg = "malformed test repository:";
        for (const auto& i : issues)
            msg += "\n  " + (i.pointer.empty() ? "/" : i.pointer) + ": " + i.message;
        throw Error(Errc::MalformedRepository, msg);
    }
    std::vector<Test> out;
    for (const auto& t : doc["tests"])
        out.push_back(test_from_json(t));
    return out;
}

std::vector<Test> load_tests(const std::filesystem::path& path)
{
    const auto text = read_file(path, Errc::MalformedRepository);
    if (blank(text))
        return {};
    nlohmann::json doc;
    try
    {
        doc = nlohmann::json::parse(text);
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw Error(Errc::MalformedRepository, path.string() + ": " + e.what());
    }
    return parse_tests(doc);
}

void save_tests(const std::vector<Test>& tests, const std::filesystem::path& path)
{
    nlohmann::json doc{{"format_version", 1}, {"tests", nlohmann::json::array()}};
    for (const auto& t : tests)
        doc["tests"].push_back(to_json(t));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(Errc::Serialization, "cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

// ---------------------------------------------------------------------------- results

ResultsStore::ResultsStore(std::filesystem::path jsonl) : path_(std::move(jsonl))
{
    if (!std::filesystem::exists(path_))
        return;
    std::istringstream in(read_file(path_, Errc::Serialization));
    std::string line;
    while (std::getline(in, line))
    {
        if (blank(line))
            continue;
        nlohmann::json j;
        try
        {
            j = nlohmann::json::parse(line);
        }
        catch (const nlohmann::json::parse_error& e)
        {
            throw Error(Errc::Serialization, path_.string() + ": " + e.what());
        }
        const auto kind = j.value("record", std::string{});
        if (kind == "exam_report")
            reports_.push_back(exam_report_from_json(j));
        else if (kind == "progress")
            progress_.push_back(progress_from_json(j));
        else
            throw Error(Errc::Serialization, path_.string() + ": unknown record '" + kind + "'");
    }
}

void ResultsStore::append_line(const nlohmann::json& line)
{
    if (path_.empty())
        return;
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out)
        throw Error(Errc::Serialization, "cannot append to " + path_.string());
    out << line.dump() << '\n';
}

void ResultsStore::add(const ExamReport& report)
{
    auto line = to_json(report);
    line["record"] = "exam_report";
    append_line(line);
    reports_.push_back(report);
}

void ResultsStore::add(const ProgressRecord& record)
{
    auto line = to_json(record);
    line["record"] = "progress";
    append_line(line);
    progress_.push_back(record);
}

void store_report(const ExamReport& report, const std::filesystem::path& path)
{
    auto line = to_json(report);
    line["record"] = "exam_report";
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out)
        throw Error(Errc::Serialization, "cannot append to " + path.string());
    out << line.dump() << '\n';
}

std::vector<ExamReport> load_reports(const std::filesystem::path& path)
{
    return ResultsStore(path).reports();
}

} // namespace magent::assessment
