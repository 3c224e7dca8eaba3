// binwatch: generate -> eval -> simulate -> report.
//
// Exit codes: 0 success, 1 configuration error, 2 data error, 3 internal error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "binwatch/config.hpp"
#include "binwatch/error.hpp"
#include "binwatch/pipeline.hpp"

namespace {

enum Exit { kOk = 0, kConfig = 1, kData = 2, kInternal = 3 };

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool verbose = false;
};

int run(const std::string& command, const Options& opt) {
  binwatch::RunConfig cfg;
  if (!opt.config.empty()) cfg = binwatch::load_config(opt.config);
  if (opt.seed) cfg.apply_seed(*opt.seed);
  cfg.validate();
  const std::filesystem::path out_dir = opt.out.empty() ? cfg.paths.output : opt.out;

  std::ostringstream quiet;
  std::ostream& log = opt.verbose ? std::cerr : static_cast<std::ostream&>(quiet);
  if (command == "generate") {
    const bool pass = binwatch::stage_generate(cfg, out_dir, log);
    if (!pass) {
      if (!opt.verbose) std::cerr << quiet.str();
      std::cerr << "calibration: band violated\n";
      if (cfg.enforce_calibration) return kData;
    }
  } else if (command == "eval") {
    binwatch::stage_eval(cfg, out_dir, log);
  } else if (command == "simulate") {
    binwatch::stage_simulate(cfg, out_dir, log);
  } else if (command == "report") {
    binwatch::stage_report(cfg, out_dir, log);
  }
  std::cout << command << ": done (" << out_dir.string() << ", config " << cfg.hash() << ")\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bin-full forecasting and notification-policy simulation"};
  app.set_version_flag("--version", std::string(binwatch::version()));
  app.require_subcommand(1, 1);

  Options opt;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "INI configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "Output directory (overrides paths.output)");
    sub->add_option("--seed", seed, "Seed for generation and fold shuffling");
    sub->add_flag("--verbose", opt.verbose, "Progress and tables on stderr");
  };
  std::vector<CLI::App*> subs{
      app.add_subcommand("generate", "Write synthetic events, weather and holidays"),
      app.add_subcommand("eval", "Cross-validate daily models and score mapped hourly forecasts"),
      app.add_subcommand("simulate", "Compare notification policies on the bin-full trace"),
      app.add_subcommand("report", "Merge stage outputs into report.json and report.txt"),
  };
  for (auto* s : subs) add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  std::string command;
  for (auto* s : subs) {
    if (s->parsed()) {
      command = s->get_name();
      if (s->count("--seed") > 0) opt.seed = seed;
    }
  }

  try {
    return run(command, opt);
  } catch (const binwatch::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const binwatch::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}
