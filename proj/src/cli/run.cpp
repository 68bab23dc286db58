#include "magent/cli/scenario.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace magent::cli {

namespace fs = std::filesystem;

namespace {

std::string read_text(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::FileNotFound, path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const fs::path& path, const std::string& text)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(Errc::FileNotFound, "cannot write " + path.string());
    out << text;
}

std::vector<std::string_view> lines_of(std::string_view text)
{
    std::vector<std::string_view> out;
    while (!text.empty())
    {
        const auto nl = text.find('\n');
        out.push_back(text.substr(0, nl));
        if (nl == std::string_view::npos)
            break;
        text.remove_prefix(nl + 1);
    }
    return out;
}

std::string_view reason_name(StopReason r)
{
    switch (r)
    {
    case StopReason::Quiescent: return "quiescent";
    case StopReason::ReachedUntil: return "reached until";
    case StopReason::TickBudgetExceeded: return "tick budget exceeded";
    }
    return "?";
}

bool same_until(const RunUntil& a, const RunUntil& b)
{
    return a.tick == b.tick;
}

std::optional<fs::path> trace_target(const fs::path& scenario, const RunOptions& options)
{
    if (options.trace)
        return options.trace;
    if (const char* dir = std::getenv("MAGENT_TRACE_DIR"); dir && *dir)
        return fs::path(dir) / (scenario.stem().string() + ".trace.jsonl");
    return std::nullopt;
}

} // namespace

std::string trace_file_contents(const TraceLog& trace)
{
    return "{\"format_version\":" + std::to_string(kFormatVersion) + "}\n" + trace.to_jsonl();
}

std::optional<std::string> first_divergence(std::string_view expected, std::string_view actual)
{
    const auto e = lines_of(expected);
    const auto a = lines_of(actual);
    const std::size_t n = std::max(e.size(), a.size());
    for (std::size_t i = 0; i < n; ++i)
    {
        const bool has_e = i < e.size();
        const bool has_a = i < a.size();
        if (has_e && has_a && e[i] == a[i])
            continue;
        std::string msg = "line " + std::to_string(i + 1) + "\n  expected: ";
        msg += has_e ? std::string(e[i]) : std::string("<end of file>");
        msg += "\n  actual:   ";
        msg += has_a ? std::string(a[i]) : std::string("<end of file>");
        return msg;
    }
    return std::nullopt;
}

int validate_command(const fs::path& path, std::ostream& out, std::ostream& err)
{
    try
    {
        const auto diags = validate_scenario(path);
        for (const auto& d : diags)
            err << path.string() << ": " << to_string(d) << "\n";
        if (!diags.empty())
            return kExitInvalid;
        out << path.string() << ": ok\n";
        return kExitOk;
    }
    catch (const Error& e)
    {
        err << e.what() << "\n";
        return kExitInvalid;
    }
}

int run_scenario(const fs::path& path, const RunOptions& options, std::ostream& out, std::ostream& err)
{
    Scenario scn;
    try
    {
        const auto diags = validate_scenario(path);
        if (!diags.empty())
        {
            for (const auto& d : diags)
                err << path.string() << ": " << to_string(d) << "\n";
            return kExitInvalid;
        }
        std::vector<Diagnostic> unused;
        scn = parse_scenario(read_json_file(path), path, unused);
    }
    catch (const Error& e)
    {
        err << e.what() << "\n";
        return kExitInvalid;
    }

    const std::uint64_t seed = options.seed.value_or(scn.seed.value_or(0));
    const RunUntil until = options.until.value_or(scn.until);

    std::string contents;
    RunReport report;
    try
    {
        World world = build_world(scn, seed);
        report = world.platform->run(until);
        contents = trace_file_contents(world.platform->trace());
        out << "stopped: " << reason_name(report.reason) << " at tick " << report.end_tick << ", "
            << world.platform->trace().size() << " events, seed " << seed << "\n";
    }
    catch (const std::exception& e)
    {
        err << "run failed: " << e.what() << "\n";
        return kExitFailure;
    }

    try
    {
        if (auto target = trace_target(path, options))
        {
            write_text(*target, contents);
            out << "trace: " << target->string() << "\n";
        }
    }
    catch (const std::exception& e)
    {
        err << e.what() << "\n";
        return kExitFailure;
    }

    if (scn.expected)
    {
        // A golden trace belongs to the file's own seed and stop condition.
        const bool comparable = seed == scn.seed.value_or(0) && same_until(until, scn.until);
        if (!comparable)
        {
            out << "golden: skipped, seed or stop condition differs from the scenario's\n";
        }
        else if (options.update_expected)
        {
            write_text(*scn.expected, contents);
            out << "golden: updated " << scn.expected->string() << "\n";
        }
        else
        {
            std::string golden;
            try
            {
                golden = read_text(*scn.expected);
            }
            catch (const Error& e)
            {
                err << "golden: " << e.what() << "\n";
                return kExitFailure;
            }
            if (auto diff = first_divergence(golden, contents))
            {
                err << "golden mismatch against " << scn.expected->string() << " at " << *diff << "\n";
                return kExitFailure;
            }
            out << "golden: match\n";
        }
    }

    return report.reason == StopReason::TickBudgetExceeded ? kExitBudget : kExitOk;
}

} // namespace magent::cli
