#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "maxrank/bellman.hpp"
#include "maxrank/spam_eval.hpp"
#include "maxrank/spam_farm.hpp"

namespace maxrank::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kUsage = 1,           // bad flags, out-of-range parameters, oversized oracle instance
    kIoError = 2,         // missing input file or unwritable output
    kInputFormat = 3,     // malformed graph, label or score file
    kNotConverged = 4,    // artifacts written, but an iteration hit its sweep bound
    kInternal = 5,
};

struct RunConfig {
    std::string subcommand;

    std::string graph_path;
    std::string labels_path;
    std::vector<std::string> score_paths;
    std::string pagerank_path;
    std::string out_path;
    std::string out_dir = ".";

    MaxRankParams maxrank;
    double cost_spam = 1.0;
    double cost_nonspam = -0.2;

    // pagerank / trustrank / antitrustrank
    double rank_eps = 1e-10;
    std::size_t rank_max_iters = 200;

    // eval
    Label target = Label::Spam;
    Direction direction = Direction::HigherIsSpam;
    bool include_train = false;

    // generate
    SpamFarmConfig farm;

    std::optional<int> threads;
    std::uint64_t rng_seed = 20121;
};

/// Parses argv-style arguments (args[0] is the program name) and runs the
/// selected subcommand. The JSON run summary goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace maxrank::cli
