#include "magent/cli/scenario.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    using namespace magent::cli;

    CLI::App app{"Run and check mobile-agent scenarios"};
    app.require_subcommand(1);

    std::string path;
    auto* validate = app.add_subcommand("validate", "Check a scenario file without running it");
    validate->add_option("scenario", path, "Scenario JSON file")->required();

    RunOptions options;
    std::optional<std::uint64_t> seed;
    std::string trace;
    std::string until;
    auto* run = app.add_subcommand("run", "Run a scenario and write its trace");
    run->add_option("scenario", path, "Scenario JSON file")->required();
    run->add_option("--seed", seed, "Overrides the scenario seed");
    run->add_option("--trace", trace, "Trace output file (default: $MAGENT_TRACE_DIR/<name>.trace.jsonl)");
    run->add_option("--until", until, "Tick to stop at, or 'quiescent'");
    run->add_flag("--update-expected", options.update_expected, "Rewrite the golden trace instead of comparing");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    if (validate->parsed())
        return validate_command(path, std::cout, std::cerr);

    options.seed = seed;
    if (!trace.empty())
        options.trace = trace;
    if (!until.empty())
    {
        try
        {
            options.until = parse_until(until);
        }
        catch (const std::invalid_argument& e)
        {
            std::cerr << e.what() << "\n";
            return kExitInvalid;
        }
    }
    return run_scenario(path, options, std::cout, std::cerr);
}
