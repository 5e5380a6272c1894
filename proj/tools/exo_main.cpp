// exo: run an experiment from a JSON config and write records, metadata and plots.
//
//   exo tabular  --config cfg.json --out runs/tab --seeds 0..19 --episodes 250
//   exo peg-demo --no-plots

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "exo/config.hpp"
#include "exo/errors.hpp"
#include "exo/experiment.hpp"
#include "exo/plot.hpp"
#include "exo/records.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct Options {
  std::string config;
  std::string out;
  std::string seeds;
  int episodes = -1;  // -1: not given
  int threads = -1;
  bool no_plots = false;
  bool timing = false;
};

exo::ExperimentConfig build_config(exo::ExperimentKind kind, const Options& opt) {
  nlohmann::json doc = nlohmann::json::object();
  if (!opt.config.empty()) {
    const std::string text = exo::read_text_file(opt.config);
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw exo::ConfigError(opt.config + ": not valid JSON: " + e.what());
    }
    if (!doc.is_object()) throw exo::ConfigError(opt.config + ": top level must be an object");
    if (doc.contains("experiment") && doc["experiment"].is_string()) {
      const auto named = exo::parse_experiment_kind(doc["experiment"].get<std::string>());
      if (named && *named != kind) {
        throw exo::ConfigError("experiment: config is for '" + doc["experiment"].get<std::string>() +
                               "' but the subcommand is '" + std::string(exo::to_string(kind)) + "'");
      }
    }
  }
  // Command-line overrides go through the same parser so derived defaults
  // (e.g. the bandit's delta = 1/K) follow the overridden values.
  doc["experiment"] = std::string(exo::to_string(kind));
  if (!opt.out.empty()) doc["output_dir"] = opt.out;
  if (!opt.seeds.empty()) doc["seeds"] = opt.seeds;
  if (opt.episodes != -1) doc["episodes"] = opt.episodes;
  if (opt.threads >= 0) doc["threads"] = opt.threads;
  if (opt.no_plots) doc["plots"] = false;
  if (opt.timing) doc["record_timing"] = true;
  return exo::parse_config(doc.dump());
}

double final_mean(const std::vector<exo::RunRecord>& records, const std::string& alg, int episode) {
  double sum = 0.0;
  int n = 0;
  for (const auto& r : records) {
    if (r.algorithm == alg && r.episode == episode) {
      sum += r.cumulative_regret;
      ++n;
    }
  }
  return n ? sum / n : 0.0;
}

int run(exo::ExperimentKind kind, const Options& opt) {
  const exo::ExperimentConfig cfg = build_config(kind, opt);
  std::filesystem::path dir(cfg.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw exo::IoError("cannot create output directory: " + ec.message(), dir.string());

  std::vector<exo::RunRecord> records;
  std::vector<std::string> notes;
  if (kind == exo::ExperimentKind::peg) {
    const auto result = exo::run_peg_experiment(cfg);
    records = result.records;
    exo::write_peg_summary(result.summary, (dir / "peg_summary.json").string());
    std::printf("peg: mean regret %.4g (se %.3g), barrier frequency %.4f vs %.4f, bound %.4g\n",
                result.summary.mean_regret, result.summary.se_regret, result.summary.barrier_frequency,
                result.summary.barrier_probability, result.summary.regret_lower_bound);
  } else {
    records = exo::run_experiment(cfg);
  }
  if (!cfg.record_timing) notes.push_back("wall_time_ms is zero unless record_timing is set");
  exo::write_csv(records, (dir / "records.csv").string());
  exo::write_metadata(cfg, (dir / "records.meta.json").string(), notes);
  if (cfg.plots && !records.empty()) exo::render_plots(records, dir.string());

  if (kind != exo::ExperimentKind::peg) {
    const int last = cfg.episodes;
    for (const auto& alg : cfg.algorithms) {
      std::printf("%s: mean cumulative regret at episode %d = %.6g\n", alg.c_str(), last,
                  final_mean(records, alg, last));
    }
  }
  std::printf("wrote %s\n", (dir / "records.csv").string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exo-MDP pure-exploitation experiments"};
  app.require_subcommand(1);

  Options opt;
  struct Sub {
    const char* name;
    exo::ExperimentKind kind;
    const char* help;
  };
  const Sub subs[] = {
      {"tabular", exo::ExperimentKind::tabular, "random tabular Exo-MDPs (pto, pto_opt, pto_lite, ftl_erm)"},
      {"storage", exo::ExperimentKind::storage, "storage control with anchored LSVI (lsvi_pe, lsvi_opt, lsvi_lite)"},
      {"bandit", exo::ExperimentKind::bandit, "full-feedback Exo-bandit (ftl, ucb)"},
      {"peg-demo", exo::ExperimentKind::peg, "pure-exploitation greedy under partial feedback"},
  };
  std::optional<exo::ExperimentKind> chosen;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--config", opt.config, "JSON config file");
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--seeds", opt.seeds, "seed range a..b (inclusive)");
    sub->add_option("--episodes", opt.episodes, "episodes K");
    sub->add_option("--threads", opt.threads, "worker threads (0: all cores)");
    sub->add_flag("--no-plots", opt.no_plots, "skip SVG output");
    sub->add_flag("--timing", opt.timing, "record wall-clock time per episode");
    sub->callback([&chosen, kind = s.kind] { chosen = kind; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    return run(*chosen, opt);
  } catch (const exo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const exo::CapacityError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const exo::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const exo::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
