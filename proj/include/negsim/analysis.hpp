// Corpus analysis: metric rows and summary, the trait/metric Spearman grid,
// strategy regressions and trait-strategy chi-square dependence, and the
// price/length report. Every output is a pure function of the corpus bytes.
#pragma once

#include <string>
#include <vector>

#include "negsim/config.hpp"
#include "negsim/metrics.hpp"
#include "negsim/serialize.hpp"
#include "negsim/stats.hpp"

namespace negsim {

MetricsRow compute_metrics_row(const DialogueRecord& record,
                               double log_clamp = kDefaultLogClamp);

CorpusSummary summarize_corpus(const std::vector<DialogueRecord>& records);

// Table-shaped grid over the five headline metrics.
TraitMetricGrid corpus_trait_grid(const std::vector<DialogueRecord>& records,
                                  const std::vector<MetricsRow>& rows);

struct AnalyzeOptions {
  std::string strategy_map_file = "data/strategy_map.tsv";
  std::size_t strategy_min_count = 20;
  double log_clamp = kDefaultLogClamp;
  bool force = false;
};

void cmd_analyze(const std::string& corpus_path, const std::string& out_dir,
                 const AnalyzeOptions& options);

void cmd_report(const std::string& corpus_path, const std::string& out_dir,
                bool force = false);

void cmd_ipip(const RunConfig& config, const std::string& out_dir,
              std::size_t n_agents);

}  // namespace negsim
