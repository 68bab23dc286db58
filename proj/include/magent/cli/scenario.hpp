#pragma once

#include "magent/assessment/scenarios.hpp"
#include "magent/core/error.hpp"
#include "magent/platform/adapter.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace magent::cli {

inline constexpr int kFormatVersion = 1;

/// JSON that failed to parse, with a 1-based position.
class ParseError : public Error
{
public:
    ParseError(const std::string& file, std::size_t line, std::size_t column, const std::string& message);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Throws Errc::FileNotFound and ParseError.
nlohmann::json read_json_file(const std::filesystem::path& path);

/// One problem in a scenario, located by a JSON pointer into the file.
struct Diagnostic
{
    std::string pointer;
    std::string message;

    bool operator==(const Diagnostic&) const = default;
};

std::string to_string(const Diagnostic& d);

std::size_t edit_distance(std::string_view a, std::string_view b);
/// Closest candidate within a small edit distance, if any.
std::optional<std::string> suggest(std::string_view word, const std::vector<std::string>& candidates);

struct ScenarioAgent
{
    std::string name;
    std::string location;
    nlohmann::json behaviors = nlohmann::json::array();
};

struct Scenario
{
    std::filesystem::path source;
    std::optional<std::uint64_t> seed;
    SimConfig config;
    std::vector<std::string> locations;
    std::map<std::string, nlohmann::json> roles;
    std::vector<ScenarioAgent> agents;
    std::optional<std::filesystem::path> tests;
    std::optional<std::filesystem::path> results;
    std::optional<std::filesystem::path> expected;
    nlohmann::json answers = nlohmann::json::object();
    RunUntil until = RunUntil::quiescent();

    /// Agents are numbered in declaration order from 1.
    std::optional<AgentId> agent_id(std::string_view name) const;
    std::optional<LocationId> location_id(std::string_view name) const;
};

/// Reads the document's structure; problems are appended to `diags` and the offending
/// parts are left out of the result. Relative paths resolve against `source`'s directory.
Scenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& source,
                        std::vector<Diagnostic>& diags);

/// A platform populated from a scenario, not yet run.
struct World
{
    std::unique_ptr<PlatformAdapter> platform;
    std::shared_ptr<assessment::AssessmentServices> services;
    std::map<std::string, AgentId> agents;
};

/// Throws Error on the first problem; run validate_scenario first for a full report.
World build_world(const Scenario& scenario, std::uint64_t seed);

/// Every problem found in the file: structure, names, parameters, and a dry build.
/// Throws Errc::FileNotFound and ParseError.
std::vector<Diagnostic> validate_scenario(const std::filesystem::path& path);

enum ExitCode : int
{
    kExitOk = 0,
    kExitFailure = 1,
    kExitBudget = 2,
    kExitInvalid = 3,
};

struct RunOptions
{
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> trace;
    std::optional<RunUntil> until;
    bool update_expected = false;
};

/// Header line plus one line per event.
std::string trace_file_contents(const TraceLog& trace);

/// First differing line between two trace files, or nothing when equal.
std::optional<std::string> first_divergence(std::string_view expected, std::string_view actual);

/// Validates, runs, writes the trace and compares it with the golden file when the
/// effective seed is the file's own. Returns an ExitCode.
int run_scenario(const std::filesystem::path& path, const RunOptions& options, std::ostream& out,
                 std::ostream& err);

/// Prints diagnostics to `err`; returns kExitOk or kExitInvalid.
int validate_command(const std::filesystem::path& path, std::ostream& out, std::ostream& err);

/// "quiescent" or a tick count. Throws std::invalid_argument.
RunUntil parse_until(std::string_view text);

} // namespace magent::cli
