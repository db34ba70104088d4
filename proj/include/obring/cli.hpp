#pragma once

// Scenario-driven frontend: `obring run|explore|mc <file>`.
//
// Scenario files are JSON objects; result records are JSON Lines written to
// stdout (or output.path); human summaries go to stderr.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "obring/protocols.hpp"
#include "obring/scheduler.hpp"

namespace obring::cli {

enum ExitCode : int { Pass = 0, ConfigError = 1, JudgementFailure = 2, CapsExceeded = 3 };

/// Malformed or inconsistent scenario. `where` is "line N" or "field 'x'".
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::string where, const std::string& what)
        : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

enum class Algorithm { LogElection, ConstDirection, Randomized };

std::string_view to_string(Algorithm a) noexcept;

struct Scenario {
    Algorithm algorithm = Algorithm::LogElection;
    std::size_t n = 0;
    std::uint64_t bound = 0;                   // U
    std::optional<std::vector<std::uint64_t>> ids;  // absent: drawn per run (randomized)
    std::uint64_t d = 0;                       // log-election, or randomized override when set
    bool d_given = false;
    RandomizedParams randomized;               // randomized only
    SchedulerStrategy scheduler = SeededRandom{0};
    std::uint64_t step_cap = 10'000'000;
    std::uint64_t state_cap = 20'000'000;
    std::uint64_t repeat = 1;
    std::vector<std::size_t> n_choices;
    std::string experiment = "success";        // mc: success | scatteredness
    std::optional<std::filesystem::path> output_path;
    std::string canonical;                     // sorted-key dump of the input
    std::uint64_t hash = 0;                    // FNV-1a of `canonical`

    std::uint64_t master_seed() const;
    std::string hash_hex() const;
};

/// Throws ScenarioError.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

struct Options {
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> trace_dir;
    std::optional<int> jobs;
};

int cmd_run(const Scenario& s, const Options& opt, std::ostream& out, std::ostream& err);
int cmd_explore(const Scenario& s, const Options& opt, std::ostream& out, std::ostream& err);
int cmd_mc(const Scenario& s, const Options& opt, std::ostream& out, std::ostream& err);

/// Full command line, including argument parsing. Returns the exit code.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace obring::cli
