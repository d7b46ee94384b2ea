#include "maxrank/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "maxrank/costs.hpp"
#include "maxrank/link_rank.hpp"
#include "maxrank/oracle.hpp"
#include "maxrank/score_io.hpp"
#include "maxrank/solver.hpp"
#include "maxrank/web_graph.hpp"

namespace maxrank::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

const std::vector<std::string> kSubcommands = {"pagerank", "trustrank", "antitrustrank", "maxrank",
                                               "eval",     "oracle",    "generate"};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_output(const fs::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

void close_output(std::ofstream& out, const fs::path& path) {
    out.close();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

template <class Writer>
void write_file(const fs::path& path, Writer&& writer) {
    auto out = open_output(path);
    writer(out);
    close_output(out, path);
}

WebGraph read_graph(const std::string& path) {
    auto in = open_input(path);
    try {
        return load_graph(in);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

CostAssignment read_labels(const RunConfig& cfg, std::size_t n) {
    if (cfg.labels_path.empty()) return CostAssignment::from_costs(std::vector<double>(n, 0.0));
    auto in = open_input(cfg.labels_path);
    try {
        return load_costs(in, n, cfg.cost_spam, cfg.cost_nonspam);
    } catch (const ParseError& e) {
        throw ParseError(cfg.labels_path + ": " + e.what());
    }
}

ScoreVector read_score_file(const std::string& path, std::size_t n) {
    auto in = open_input(path);
    try {
        return read_scores(in, n);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

const char* mode_name(SweepMode m) { return m == SweepMode::GaussSeidel ? "gauss-seidel" : "jacobi"; }
const char* label_name(Label l) { return l == Label::Spam ? "spam" : l == Label::NonSpam ? "nonspam" : "unknown"; }
const char* direction_name(Direction d) { return d == Direction::HigherIsSpam ? "higher" : "lower"; }

Json config_json(const RunConfig& cfg) {
    Json j;
    j["subcommand"] = cfg.subcommand;
    if (!cfg.graph_path.empty()) j["graph"] = cfg.graph_path;
    if (!cfg.labels_path.empty()) j["labels"] = cfg.labels_path;
    if (cfg.subcommand == "maxrank" || cfg.subcommand == "oracle") {
        j["alpha"] = cfg.maxrank.alpha;
        j["gamma"] = cfg.maxrank.gamma;
        j["teleport_fraction"] = cfg.maxrank.teleport_fraction;
        j["cost_spam"] = cfg.cost_spam;
        j["cost_nonspam"] = cfg.cost_nonspam;
        j["eps"] = cfg.maxrank.eps;
        j["max_iters"] = cfg.maxrank.max_iters;
        j["mode"] = mode_name(cfg.maxrank.mode);
        j["stationary_eps"] = cfg.maxrank.stationary_eps;
    } else if (cfg.subcommand == "pagerank" || cfg.subcommand == "trustrank" || cfg.subcommand == "antitrustrank") {
        j["alpha"] = cfg.maxrank.alpha;
        j["eps"] = cfg.rank_eps;
        j["max_iters"] = cfg.rank_max_iters;
    } else if (cfg.subcommand == "eval") {
        j["scores"] = cfg.score_paths;
        if (!cfg.pagerank_path.empty()) j["pagerank"] = cfg.pagerank_path;
        j["target"] = label_name(cfg.target);
        j["direction"] = direction_name(cfg.direction);
        j["include_train"] = cfg.include_train;
    } else if (cfg.subcommand == "generate") {
        j["nonspam_pages"] = cfg.farm.nonspam_pages;
        j["spam_pages"] = cfg.farm.spam_pages;
        j["nonspam_out_degree"] = cfg.farm.nonspam_out_degree;
        j["farms"] = cfg.farm.farms;
        j["farm_density"] = cfg.farm.farm_density;
        j["camouflage_links"] = cfg.farm.camouflage_links;
        j["hijack_probability"] = cfg.farm.hijack_probability;
        j["train_fraction"] = cfg.farm.train_fraction;
        j["rng_seed"] = cfg.rng_seed;
    }
    j["out_dir"] = cfg.out_dir;
    if (!cfg.out_path.empty()) j["out"] = cfg.out_path;
    j["threads"] = cfg.threads ? Json(*cfg.threads) : Json(nullptr);
    return j;
}

void write_policy(std::ostream& out, const MaxRankSolution& s) {
    for (std::size_t i = 0; i < s.kept_links.size(); ++i) {
        out << i << ' ' << s.kept_degree[i];
        for (PageId j : s.kept_links[i]) out << ' ' << j;
        out << '\n';
    }
}

fs::path rank_output(const RunConfig& cfg) {
    return cfg.out_path.empty() ? fs::path(cfg.out_dir) / (cfg.subcommand + ".txt") : fs::path(cfg.out_path);
}

int run_rank(const RunConfig& cfg, Json& summary) {
    const WebGraph g = read_graph(cfg.graph_path);
    const PowerIterationOptions opt{cfg.maxrank.alpha, cfg.rank_eps, cfg.rank_max_iters};
    PowerIterationResult r;
    if (cfg.subcommand == "pagerank") {
        r = pagerank(g, TeleportVector::uniform(g.num_pages()), opt);
    } else {
        if (cfg.labels_path.empty()) throw UsageError(cfg.subcommand + " needs --labels to pick its seed");
        const CostAssignment labels = read_labels(cfg, g.num_pages());
        const bool trust = cfg.subcommand == "trustrank";
        auto seed = labels.pages_with(trust ? Label::NonSpam : Label::Spam, Split::Train);
        if (seed.empty())
            throw UsageError(std::string("label file has no train ") + (trust ? "nonspam" : "spam") + " page");
        summary["seed_size"] = seed.size();
        r = trust ? trustrank(g, std::move(seed), opt) : antitrustrank(g, std::move(seed), opt);
    }
    const fs::path path = rank_output(cfg);
    write_file(path, [&](std::ostream& o) { write_scores(o, r.scores); });
    summary["pages"] = g.num_pages();
    summary["edges"] = g.num_edges();
    summary["iterations"] = r.iterations;
    summary["residual"] = r.residual;
    summary["converged"] = r.converged;
    summary["scores"] = path.string();
    return r.converged ? kOk : kNotConverged;
}

int run_maxrank(const RunConfig& cfg, Json& summary) {
    const WebGraph g = read_graph(cfg.graph_path);
    const CostAssignment costs = read_labels(cfg, g.num_pages());
    const MaxRankSolution s = value_iteration(g, costs, cfg.maxrank);

    const fs::path dir(cfg.out_dir);
    write_file(dir / "bias.txt", [&](std::ostream& o) { write_scores(o, s.bias); });
    write_file(dir / "stationary.txt", [&](std::ostream& o) { write_scores(o, s.stationary); });
    write_file(dir / "policy.txt", [&](std::ostream& o) { write_policy(o, s); });

    Json result;
    result["pages"] = g.num_pages();
    result["edges"] = g.num_edges();
    result["teleport_count"] = s.teleport_set.size();
    result["lambda"] = s.lambda;
    result["residual"] = s.residual;
    result["sweeps"] = s.sweeps;
    result["converged"] = s.converged;
    std::size_t removed = 0;
    for (PageId i = 0; i < g.num_pages(); ++i) removed += g.out_degree(i) - s.kept_degree[i];
    result["removed_links"] = removed;
    result["stationary_residual"] = s.stationary_residual;
    result["stationary_iterations"] = s.stationary_iterations;
    result["stationary_converged"] = s.stationary_converged;
    for (auto& [k, v] : result.items()) summary[k] = v;

    Json file = summary;
    file["config"] = config_json(cfg);
    write_file(dir / "summary.json", [&](std::ostream& o) { o << file.dump(2) << '\n'; });
    return s.converged && s.stationary_converged ? kOk : kNotConverged;
}

int run_eval(const RunConfig& cfg, Json& summary) {
    if (cfg.labels_path.empty()) throw UsageError("eval needs --labels");
    std::optional<ScoreVector> pr;
    std::size_t n = 0;
    if (!cfg.pagerank_path.empty()) {
        pr = read_score_file(cfg.pagerank_path, 0);
        pr->kind = ScoreKind::Distribution;
        n = pr->size();
    }

    Json curves = Json::array();
    const fs::path dir(cfg.out_dir);
    for (const std::string& path : cfg.score_paths) {
        const ScoreVector scores = read_score_file(path, n);
        const CostAssignment labels = read_labels(cfg, scores.size());
        const PrecisionRecallCurve curve =
            precision_recall(scores, labels, cfg.target, cfg.direction, cfg.include_train);

        const std::string stem = fs::path(path).stem().string();
        const fs::path csv = dir / (stem + "." + label_name(cfg.target) + ".pr.csv");
        write_file(csv, [&](std::ostream& o) { export_curve(o, curve); });

        Json entry;
        entry["scores"] = path;
        entry["curve"] = csv.string();
        entry["points"] = curve.points.size();
        entry["auc"] = trapezoid_auc(curve);
        entry["precision_at_recall_0.8"] = precision_at_recall(curve, 0.8);
        if (pr) {
            for (auto variant : {DemotionVariant::Raw, DemotionVariant::MeanNormalized}) {
                const bool raw = variant == DemotionVariant::Raw;
                const fs::path out = dir / (stem + (raw ? ".demotion.raw.csv" : ".demotion.mean.csv"));
                const DemotionTable table = demotion_table(scores, *pr, variant);
                write_file(out, [&](std::ostream& o) { export_demotion(o, table); });
                entry[raw ? "demotion_raw" : "demotion_mean"] = out.string();
            }
        }
        curves.push_back(entry);
    }
    summary["curves"] = curves;
    return kOk;
}

int run_oracle(const RunConfig& cfg, Json& summary) {
    const WebGraph g = read_graph(cfg.graph_path);
    const CostAssignment costs = read_labels(cfg, g.num_pages());
    const oracle::PolicySearchResult r = oracle::enumerate_policies(g, costs, cfg.maxrank);
    summary["best_lambda"] = r.best_lambda;
    summary["policies_evaluated"] = r.policies_evaluated;
    Json policy = Json::array();
    for (const auto& a : r.best_policy)
        policy.push_back({{"page", a.page}, {"teleport_set", a.teleport_set}, {"kept_set", a.kept_set}});
    summary["policy"] = policy;
    const MaxRankSolution s = value_iteration(g, costs, cfg.maxrank);
    summary["solver_lambda"] = s.lambda;
    return kOk;
}

int run_generate(const RunConfig& cfg, Json& summary) {
    SpamFarmConfig farm = cfg.farm;
    farm.seed = cfg.rng_seed;
    const SyntheticInstance inst = generate_spam_farm(farm, cfg.cost_spam, cfg.cost_nonspam);
    const fs::path dir(cfg.out_dir);
    write_file(dir / "graph.txt", [&](std::ostream& o) { write_graph(o, inst.graph); });
    write_file(dir / "labels.txt", [&](std::ostream& o) { write_labels(o, inst.labels); });
    summary["pages"] = inst.graph.num_pages();
    summary["edges"] = inst.graph.num_edges();
    summary["graph"] = (dir / "graph.txt").string();
    summary["labels"] = (dir / "labels.txt").string();
    return kOk;
}

/// key=value lines, '#' comments.
std::vector<std::string> config_file_args(const std::string& path) {
    auto in = open_input(path);
    std::vector<std::string> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(number, path + ": expected key=value");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(number, path + ": empty key");
        out.push_back("--" + key + "=" + value);
    }
    return out;
}

/// Pulls --config out of the argument list and splices the file's settings
/// in right after the subcommand, so explicit flags (parsed later) win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string config_path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a file argument");
            config_path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (config_path.empty()) return args;
    auto sub = std::find_if(args.begin() + 1, args.end(), [](const std::string& a) {
        return std::find(kSubcommands.begin(), kSubcommands.end(), a) != kSubcommands.end();
    });
    if (sub == args.end()) throw UsageError("--config requires a subcommand");
    const auto extra = config_file_args(config_path);
    args.insert(sub + 1, extra.begin(), extra.end());
    return args;
}

void add_maxrank_options(CLI::App& sub, RunConfig& cfg) {
    sub.add_option("--gamma", cfg.maxrank.gamma, "Link removal penalty")->capture_default_str()->check(CLI::NonNegativeNumber);
    sub.add_option("--teleport-fraction", cfg.maxrank.teleport_fraction, "Teleport set size as a fraction of n")
        ->capture_default_str()->check(CLI::Range(0.0, 1.0));
    sub.add_option("--cost-spam", cfg.cost_spam, "A-priori cost of train spam pages")->capture_default_str();
    sub.add_option("--cost-nonspam", cfg.cost_nonspam, "A-priori cost of train nonspam pages")->capture_default_str();
    sub.add_option("--eps", cfg.maxrank.eps, "Sup-norm residual tolerance")->capture_default_str()->check(CLI::PositiveNumber);
    sub.add_option("--max-iters", cfg.maxrank.max_iters, "Sweep bound")->capture_default_str()->check(CLI::PositiveNumber);
    sub.add_option("--stationary-eps", cfg.maxrank.stationary_eps, "l1 tolerance of the MaxRank vector")
        ->capture_default_str()->check(CLI::PositiveNumber);
    const std::map<std::string, SweepMode> modes{{"gauss-seidel", SweepMode::GaussSeidel}, {"jacobi", SweepMode::Jacobi}};
    sub.add_option("--mode", cfg.maxrank.mode, "Sweep order: gauss-seidel or jacobi")
        ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case))
        ->default_str("gauss-seidel");
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Link-based web ranking and MaxRank spam detection", "maxrank"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.add_option("--threads", cfg.threads, "Worker threads (default: MAXRANK_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    app.set_help_all_flag("--help-all");

    auto alpha_opt = [&](CLI::App& sub) {
        sub.add_option("--alpha", cfg.maxrank.alpha, "Damping factor")->capture_default_str()->check(CLI::Range(0.0, 0.999999999));
    };
    auto graph_opt = [&](CLI::App& sub, bool required) {
        auto* o = sub.add_option("--graph", cfg.graph_path, "Edge-list file");
        if (required) o->required();
    };
    auto out_dir_opt = [&](CLI::App& sub) {
        sub.add_option("--out-dir", cfg.out_dir, "Output directory")->capture_default_str();
    };

    for (const std::string name : {"pagerank", "trustrank", "antitrustrank"}) {
        const std::string help = name == "pagerank" ? "PageRank with uniform teleportation"
                                 : name == "trustrank" ? "PageRank seeded on train nonspam pages"
                                                       : "Reverse-graph PageRank seeded on train spam pages";
        auto* sub = app.add_subcommand(name, help);
        sub->fallthrough();
        graph_opt(*sub, true);
        alpha_opt(*sub);
        sub->add_option("--labels", cfg.labels_path, "Label file (seed source)");
        sub->add_option("--eps", cfg.rank_eps, "l1 tolerance")->capture_default_str()->check(CLI::PositiveNumber);
        sub->add_option("--max-iters", cfg.rank_max_iters, "Iteration bound")->capture_default_str()->check(CLI::PositiveNumber);
        sub->add_option("--out", cfg.out_path, "Score file (default <out-dir>/<subcommand>.txt)");
        out_dir_opt(*sub);
    }

    auto* mr = app.add_subcommand("maxrank", "Solve the MaxRank control problem");
    mr->fallthrough();
    graph_opt(*mr, true);
    alpha_opt(*mr);
    mr->add_option("--labels", cfg.labels_path, "Label file");
    add_maxrank_options(*mr, cfg);
    out_dir_opt(*mr);

    auto* ev = app.add_subcommand("eval", "Precision/recall curves and demotion tables");
    ev->fallthrough();
    ev->add_option("--scores", cfg.score_paths, "Score files")->required()->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    ev->add_option("--labels", cfg.labels_path, "Label file")->required();
    ev->add_option("--pagerank", cfg.pagerank_path, "PageRank score file; enables demotion tables");
    const std::map<std::string, Label> targets{{"spam", Label::Spam}, {"nonspam", Label::NonSpam}};
    ev->add_option("--target", cfg.target, "spam or nonspam")->transform(CLI::CheckedTransformer(targets))->default_str("spam");
    const std::map<std::string, Direction> directions{{"higher", Direction::HigherIsSpam}, {"lower", Direction::LowerIsSpam}};
    ev->add_option("--direction", cfg.direction, "Which end of the scale is spam: higher or lower")
        ->transform(CLI::CheckedTransformer(directions))
        ->default_str("higher");
    ev->add_flag("--include-train", cfg.include_train, "Evaluate train pages as well as test pages");
    out_dir_opt(*ev);

    auto* orc = app.add_subcommand("oracle", "");  // hidden: brute-force policy enumeration for debugging
    orc->fallthrough();
    graph_opt(*orc, true);
    alpha_opt(*orc);
    orc->add_option("--labels", cfg.labels_path, "Label file");
    add_maxrank_options(*orc, cfg);
    orc->group("");

    auto* gen = app.add_subcommand("generate", "Write a synthetic graph with planted spam farms");
    gen->fallthrough();
    gen->add_option("--nonspam-pages", cfg.farm.nonspam_pages)->capture_default_str();
    gen->add_option("--spam-pages", cfg.farm.spam_pages)->capture_default_str();
    gen->add_option("--nonspam-out-degree", cfg.farm.nonspam_out_degree)->capture_default_str();
    gen->add_option("--farms", cfg.farm.farms)->capture_default_str();
    gen->add_option("--farm-density", cfg.farm.farm_density)->capture_default_str()->check(CLI::Range(0.0, 1.0));
    gen->add_option("--camouflage-links", cfg.farm.camouflage_links)->capture_default_str();
    gen->add_option("--hijack-probability", cfg.farm.hijack_probability)->capture_default_str()->check(CLI::Range(0.0, 1.0));
    gen->add_option("--train-fraction", cfg.farm.train_fraction)->capture_default_str();
    gen->add_option("--cost-spam", cfg.cost_spam)->capture_default_str();
    gen->add_option("--cost-nonspam", cfg.cost_nonspam)->capture_default_str();
    out_dir_opt(*gen);

    app.add_option("--rng-seed", cfg.rng_seed, "Seed for randomised subcommands")->capture_default_str();

    try {
        std::vector<std::string> args = expand_config(raw_args);
        std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
        app.parse(std::move(rev));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputFormat;
    }

    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (!cfg.threads) {
        if (const char* env = std::getenv("MAXRANK_THREADS")) {
            char* end = nullptr;
            const long t = std::strtol(env, &end, 10);
            if (end == env || *end != '\0' || t <= 0) {
                err << "error: MAXRANK_THREADS must be a positive integer\n";
                return kUsage;
            }
            cfg.threads = static_cast<int>(t);
        }
    }
    if (cfg.threads) omp_set_num_threads(*cfg.threads);

    Json summary;
    summary["subcommand"] = cfg.subcommand;
    const auto start = std::chrono::steady_clock::now();
    int code = kOk;
    try {
        if (cfg.subcommand == "maxrank" || cfg.subcommand == "oracle") cfg.maxrank.validate();
        if (cfg.subcommand == "maxrank") code = run_maxrank(cfg, summary);
        else if (cfg.subcommand == "eval") code = run_eval(cfg, summary);
        else if (cfg.subcommand == "oracle") code = run_oracle(cfg, summary);
        else if (cfg.subcommand == "generate") code = run_generate(cfg, summary);
        else code = run_rank(cfg, summary);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputFormat;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    summary["wall_time_seconds"] = elapsed.count();
    summary["config"] = config_json(cfg);
    out << summary.dump(2) << '\n';
    if (code == kNotConverged) err << "warning: iteration stopped at its sweep bound before reaching eps\n";
    return code;
}

}  // namespace maxrank::cli
