// negsim CLI: simulate batches of personality-conditioned negotiations,
// analyze a transcript corpus, run the IPIP-50 validation, or emit the
// price/length report. Exit codes: 0 ok, 1 configuration error, 2 runtime
// failure.
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "negsim/analysis.hpp"
#include "negsim/errors.hpp"
#include "negsim/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"LLM bargaining simulation and analysis toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string corpus_path;
  std::string out_dir;
  bool force = false;
  std::size_t ipip_agents = 0;

  CLI::App* simulate = app.add_subcommand(
      "simulate", "run a batch of negotiations into a JSONL corpus");
  simulate->add_option("--config", config_path, "run config (JSON)")
      ->required();
  simulate->add_option("--out", out_dir,
                       "output directory (overrides the config)");

  CLI::App* analyze = app.add_subcommand(
      "analyze", "compute metrics, correlation grids and regressions");
  analyze->add_option("corpus", corpus_path, "transcripts.jsonl")->required();
  analyze->add_option("--out", out_dir, "output directory")->required();
  analyze->add_option("--config", config_path,
                      "run config (strategy map path, thresholds)");
  analyze->add_flag("--force", force, "accept mixed-fingerprint corpora");

  CLI::App* ipip = app.add_subcommand(
      "ipip", "administer the IPIP-50 test to sampled agents");
  ipip->add_option("--config", config_path, "run config (JSON)")->required();
  ipip->add_option("--out", out_dir, "output directory")->required();
  ipip->add_option("--agents", ipip_agents,
                   "number of agents (overrides the config)");

  CLI::App* report = app.add_subcommand(
      "report", "emit price-vs-length data series per product category");
  report->add_option("corpus", corpus_path, "transcripts.jsonl")->required();
  report->add_option("--out", out_dir, "output directory")->required();
  report->add_flag("--force", force, "accept mixed-fingerprint corpora");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      negsim::RunConfig config = negsim::load_config(config_path);
      if (!out_dir.empty()) config.output_dir = out_dir;
      const negsim::RunManifest manifest = negsim::cmd_simulate(config);
      std::cout << "simulated " << manifest.requested << " dialogue(s): "
                << manifest.completed << " succeeded, "
                << manifest.failed_deal_break + manifest.failed_max_rounds +
                       manifest.failed_backend_error
                << " failed\n"
                << "corpus: " << config.output_dir << "/transcripts.jsonl\n";
    } else if (analyze->parsed()) {
      negsim::AnalyzeOptions options;
      options.force = force;
      if (!config_path.empty()) {
        const negsim::RunConfig config = negsim::load_config(config_path);
        options.strategy_map_file = config.strategy_map_file;
        options.strategy_min_count = config.strategy_min_count;
        options.log_clamp = config.log_clamp;
      }
      negsim::cmd_analyze(corpus_path, out_dir, options);
      std::cout << "analysis written to " << out_dir << "\n";
    } else if (ipip->parsed()) {
      const negsim::RunConfig config = negsim::load_config(config_path);
      const std::size_t agents =
          ipip_agents > 0 ? ipip_agents : config.ipip_agents;
      negsim::cmd_ipip(config, out_dir, agents);
      std::cout << "IPIP grid written to " << out_dir << "\n";
    } else if (report->parsed()) {
      negsim::cmd_report(corpus_path, out_dir, force);
      std::cout << "report written to " << out_dir << "\n";
    }
  } catch (const negsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const negsim::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
