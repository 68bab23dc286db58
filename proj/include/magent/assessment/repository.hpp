#pragma once

#include "magent/assessment/model.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace magent::assessment {

/// One schema problem, located by JSON pointer inside the repository document.
struct RepositoryIssue
{
    std::string pointer;
    std::string message;
};

/// Repository document: {"format_version": 1, "tests": [<test>, ...]}. A test is
/// {"id", "title", "kind": "self_assessment" | "exam", "scheduled_at"?, "questions": [...]}
/// and a question {"id", "kind", "prompt", "options"?, "key", "weight"}.
std::vector<RepositoryIssue> check_repository(const nlohmann::json& doc);

/// Throws Errc::MalformedRepository listing every issue (question ids included).
std::vector<Test> parse_tests(const nlohmann::json& doc);

/// An empty (or blank) file is an empty repository. Throws Errc::MalformedRepository,
/// also for unreadable files and invalid JSON.
std::vector<Test> load_tests(const std::filesystem::path& path);
void save_tests(const std::vector<Test>& tests, const std::filesystem::path& path);

/// Exam reports and progress records, optionally mirrored to a JSON Lines file. Each line
/// is {"record": "exam_report" | "progress", ...fields}.
class ResultsStore
{
public:
    /// In memory only.
    ResultsStore() = default;
    /// Loads what the file already holds and appends from then on.
    explicit ResultsStore(std::filesystem::path jsonl);

    void add(const ExamReport& report);
    void add(const ProgressRecord& record);

    const std::vector<ExamReport>& reports() const noexcept { return reports_; }
    const std::vector<ProgressRecord>& progress() const noexcept { return progress_; }
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    void append_line(const nlohmann::json& line);

    std::filesystem::path path_;
    std::vector<ExamReport> reports_;
    std::vector<ProgressRecord> progress_;
};

/// Appends one report line to `path`.
void store_report(const ExamReport& report, const std::filesystem::path& path);
/// Every exam report in a results file. Throws Errc::Serialization.
std::vector<ExamReport> load_reports(const std::filesystem::path& path);

} // namespace magent::assessment
