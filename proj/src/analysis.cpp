#include "negsim/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "negsim/errors.hpp"
#include "negsim/ipip.hpp"
#include "negsim/textutil.hpp"

namespace negsim {

namespace {

std::string fmt(double v, const char* spec = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string stars_suffix(int stars) {
  return stars == 2 ? "**" : (stars == 1 ? "*" : "");
}

// Dimension column order used by the report tables.
constexpr std::array<Dimension, 5> kTableOrder = {
    Dimension::EXT, Dimension::AGR, Dimension::CON, Dimension::NEU,
    Dimension::OPE};

std::vector<TimedOffer> offers_of(const DialogueRecord& record, Role role) {
  std::vector<TimedOffer> offers;
  for (const AnnotatedTurn& turn : record.turns) {
    if (turn.utterance.speaker == role &&
        turn.state == NegotiationState::offer && turn.price) {
      offers.push_back({turn.utterance.index, *turn.price});
    }
  }
  return offers;
}

}  // namespace

MetricsRow compute_metrics_row(const DialogueRecord& record,
                               double log_clamp) {
  MetricsRow row;
  row.dialogue_id = record.id;
  row.success = record.outcome.success;
  row.rounds = record.outcome.rounds;
  row.category = record.scenario.category;
  row.product_price = record.scenario.seller_ideal.dollars();
  for (const AnnotatedTurn& turn : record.turns) {
    row.word_count += word_count(turn.utterance.text);
  }

  for (Role role : {Role::buyer, Role::seller}) {
    const auto offers = offers_of(record, role);
    if (offers.empty()) continue;
    const ConcessionRate cr =
        concession_rate(role, offers, record.scenario, log_clamp);
    if (role == Role::buyer) {
      row.buyer_concession = cr.value;
    } else {
      row.seller_concession = cr.value;
    }
  }

  if (record.outcome.success && record.outcome.deal_price) {
    const double p = record.outcome.deal_price->dollars();
    const UtilityValue us = intrinsic_utility(Role::seller, p, record.scenario);
    const UtilityValue ub = intrinsic_utility(Role::buyer, p, record.scenario);
    const UtilityValue usb = joint_utility(p, record.scenario);
    row.seller_utility = us.value;
    row.buyer_utility = ub.value;
    row.joint = usb.value;
    row.out_of_range = us.out_of_range || ub.out_of_range || usb.out_of_range;
  }
  return row;
}

CorpusSummary summarize_corpus(const std::vector<DialogueRecord>& records) {
  CorpusSummary summary;
  summary.total = records.size();
  double round_sum = 0.0;
  for (const DialogueRecord& record : records) {
    if (record.outcome.success) {
      summary.successes += 1;
      round_sum += static_cast<double>(record.outcome.rounds);
    } else if (record.outcome.reason == FailureReason::deal_break) {
      summary.failed_deal_break += 1;
    } else if (record.outcome.reason == FailureReason::max_rounds) {
      summary.failed_max_rounds += 1;
    } else {
      summary.failed_backend_error += 1;
    }
  }
  summary.nsr = summary.total == 0
                    ? 0.0
                    : static_cast<double>(summary.successes) /
                          static_cast<double>(summary.total);
  if (summary.successes > 0) {
    summary.anr = round_sum / static_cast<double>(summary.successes);
  }
  return summary;
}

TraitMetricGrid corpus_trait_grid(const std::vector<DialogueRecord>& records,
                                  const std::vector<MetricsRow>& rows) {
  MetricSeries intrinsic{"Intrinsic Utility", {}, {}};
  MetricSeries joint{"Joint Utility", {}, {}};
  MetricSeries concession{"Concession Rate", {}, {}};
  MetricSeries success{"Success Rate", {}, {}};
  MetricSeries rounds{"Negotiation Rounds", {}, {}};

  for (std::size_t i = 0; i < records.size(); ++i) {
    const DialogueRecord& record = records[i];
    const MetricsRow& row = rows[i];
    const double success_flag = row.success ? 1.0 : 0.0;
    success.buyer.values.push_back(success_flag);
    success.buyer.profiles.push_back(record.buyer_profile);
    success.seller.values.push_back(success_flag);
    success.seller.profiles.push_back(record.seller_profile);

    if (row.success) {
      intrinsic.buyer.values.push_back(*row.buyer_utility);
      intrinsic.buyer.profiles.push_back(record.buyer_profile);
      intrinsic.seller.values.push_back(*row.seller_utility);
      intrinsic.seller.profiles.push_back(record.seller_profile);
      joint.buyer.values.push_back(*row.joint);
      joint.buyer.profiles.push_back(record.buyer_profile);
      joint.seller.values.push_back(*row.joint);
      joint.seller.profiles.push_back(record.seller_profile);
      rounds.buyer.values.push_back(static_cast<double>(row.rounds));
      rounds.buyer.profiles.push_back(record.buyer_profile);
      rounds.seller.values.push_back(static_cast<double>(row.rounds));
      rounds.seller.profiles.push_back(record.seller_profile);
    }
    if (row.buyer_concession) {
      concession.buyer.values.push_back(*row.buyer_concession);
      concession.buyer.profiles.push_back(record.buyer_profile);
    }
    if (row.seller_concession) {
      concession.seller.values.push_back(*row.seller_concession);
      concession.seller.profiles.push_back(record.seller_profile);
    }
  }
  return trait_metric_table({intrinsic, joint, concession, success, rounds});
}

namespace {

struct StrategyData {
  std::map<std::string, std::size_t> counts[2];  // turn-level, per role
  std::map<std::string, std::size_t> pooled;
  // Per dialogue/role: set of categories (indicators) and the turn-level
  // category list (chi-square counts).
  std::vector<std::array<std::set<std::string>, 2>> sets;
  std::vector<std::array<std::vector<std::string>, 2>> turns;
};

StrategyData collect_strategies(const std::vector<DialogueRecord>& records,
                                const StrategyMap& map) {
  StrategyData data;
  data.sets.resize(records.size());
  data.turns.resize(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (const AnnotatedTurn& turn : records[i].turns) {
      if (!turn.strategy) continue;
      const std::string category = canonicalize_strategy(*turn.strategy, map);
      const auto role = static_cast<std::size_t>(turn.utterance.speaker);
      data.counts[role][category] += 1;
      data.pooled[category] += 1;
      data.sets[i][role].insert(category);
      data.turns[i][role].push_back(category);
    }
  }
  return data;
}

struct RegressionOutput {
  bool fitted = false;
  std::vector<std::string> terms;
  RegressionResult result;
  std::string note;
};

// Regression of a per-dialogue outcome on strategy-category indicators.
RegressionOutput regress_strategies(
    const std::vector<MetricsRow>& rows, const StrategyData& data,
    const std::set<std::string>& retained,
    const std::function<std::optional<double>(const MetricsRow&)>& outcome_of,
    const std::function<bool(const std::array<std::set<std::string>, 2>&,
                             const std::string&)>& uses) {
  RegressionOutput output;
  output.terms.assign(retained.begin(), retained.end());
  if (output.terms.empty()) {
    output.note = "no strategy category above the frequency threshold";
    return output;
  }
  std::vector<double> y;
  std::vector<std::vector<double>> columns(output.terms.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto value = outcome_of(rows[i]);
    if (!value) continue;
    y.push_back(*value);
    for (std::size_t c = 0; c < output.terms.size(); ++c) {
      columns[c].push_back(uses(data.sets[i], output.terms[c]) ? 1.0 : 0.0);
    }
  }
  if (y.size() <= output.terms.size() + 1) {
    output.note = "too few outcome dialogues for the design";
    return output;
  }
  try {
    output.result = ols_regress(columns, y, /*with_intercept=*/true);
    output.fitted = true;
  } catch (const Error& e) {
    output.note = e.what();
  }
  return output;
}

struct ChiSquareOutput {
  Dimension dimension = Dimension::OPE;
  bool defined = false;
  std::string note;
  ChiSquareResult result;
  std::vector<std::string> categories;
};

// Trait-polarity vs strategy dependence, one test per dimension: rows are
// the retained categories, columns the role's negative/positive polarity,
// counts are turn-level strategy occurrences.
std::vector<ChiSquareOutput> strategy_chi_square(
    const std::vector<DialogueRecord>& records, const StrategyData& data,
    Role role, const std::set<std::string>& retained) {
  std::vector<ChiSquareOutput> outputs;
  const std::vector<std::string> categories(retained.begin(), retained.end());
  std::map<std::string, std::size_t> category_row;
  for (std::size_t i = 0; i < categories.size(); ++i) {
    category_row[categories[i]] = i;
  }
  for (Dimension dim : kTableOrder) {
    ChiSquareOutput out;
    out.dimension = dim;
    out.categories = categories;
    if (categories.size() < 2) {
      out.note = "fewer than two retained categories";
      outputs.push_back(std::move(out));
      continue;
    }
    ContingencyTable table;
    table.row_labels = categories;
    table.col_labels = {"negative", "positive"};
    table.counts.assign(categories.size(), std::vector<double>(2, 0.0));
    for (std::size_t i = 0; i < records.size(); ++i) {
      const PersonalityProfile& profile = role == Role::buyer
                                              ? records[i].buyer_profile
                                              : records[i].seller_profile;
      const std::size_t col =
          profile[dim].polarity == Polarity::positive ? 1 : 0;
      for (const std::string& category :
           data.turns[i][static_cast<std::size_t>(role)]) {
        const auto it = category_row.find(category);
        if (it != category_row.end()) {
          table.counts[it->second][col] += 1.0;
        }
      }
    }
    try {
      out.result = chi_square(table);
      out.defined = true;
    } catch (const Error& e) {
      out.note = e.what();
    }
    outputs.push_back(std::move(out));
  }
  return outputs;
}

void write_metrics_csv(const std::string& path,
                       const std::vector<MetricsRow>& rows) {
  std::ofstream out(path);
  out << "id,success,rounds,words,category,product_price,seller_utility,"
         "buyer_utility,joint_utility,out_of_range,seller_concession,"
         "buyer_concession\n";
  auto opt = [](const std::optional<double>& v) {
    return v ? fmt(*v) : std::string();
  };
  for (const MetricsRow& row : rows) {
    out << row.dialogue_id << ',' << (row.success ? 1 : 0) << ',' << row.rounds
        << ',' << row.word_count << ',' << row.category << ','
        << fmt(row.product_price) << ',' << opt(row.seller_utility) << ','
        << opt(row.buyer_utility) << ',' << opt(row.joint) << ','
        << (row.out_of_range ? 1 : 0) << ',' << opt(row.seller_concession)
        << ',' << opt(row.buyer_concession) << "\n";
  }
}

void write_grid_csv(const std::string& path, const TraitMetricGrid& grid) {
  std::ofstream out(path);
  out << "metric,dimension,role,n,rho,p_value,stars\n";
  for (std::size_t m = 0; m < grid.metric_names.size(); ++m) {
    for (Dimension dim : kTableOrder) {
      for (Role role : {Role::buyer, Role::seller}) {
        const std::size_t d = static_cast<std::size_t>(dim);
        const TraitMetricCell& cell =
            grid.cells[m][d * 2 + static_cast<std::size_t>(role)];
        out << grid.metric_names[m] << ',' << to_string(dim) << ','
            << to_string(role) << ',' << cell.n << ',';
        if (cell.defined) {
          out << fmt(cell.rho) << ',' << fmt(cell.p_value) << ','
              << cell.stars;
        } else {
          out << ",,";
        }
        out << "\n";
      }
    }
  }
}

std::string grid_markdown(const TraitMetricGrid& grid) {
  std::ostringstream md;
  md << "| Metric |";
  for (Dimension dim : kTableOrder) {
    md << " " << to_string(dim) << " Buyer | " << to_string(dim)
       << " Seller |";
  }
  md << "\n|---|";
  for (std::size_t i = 0; i < 10; ++i) md << "---|";
  md << "\n";
  for (std::size_t m = 0; m < grid.metric_names.size(); ++m) {
    md << "| " << grid.metric_names[m] << " |";
    for (Dimension dim : kTableOrder) {
      const std::size_t d = static_cast<std::size_t>(dim);
      for (Role role : {Role::buyer, Role::seller}) {
        const TraitMetricCell& cell =
            grid.cells[m][d * 2 + static_cast<std::size_t>(role)];
        if (cell.defined) {
          md << " " << fmt(cell.rho, "%.3f") << stars_suffix(cell.stars)
             << " |";
        } else {
          md << " - |";
        }
      }
    }
    md << "\n";
  }
  return md.str();
}

nlohmann::json regression_json(const RegressionOutput& output) {
  nlohmann::json j;
  j["fitted"] = output.fitted;
  if (!output.note.empty()) j["note"] = output.note;
  if (output.fitted) {
    j["intercept"] = output.result.intercept;
    nlohmann::json betas;
    for (std::size_t i = 0; i < output.terms.size(); ++i) {
      const double b = output.result.coefficients[i];
      betas[output.terms[i]] =
          std::isnan(b) ? nlohmann::json(nullptr) : nlohmann::json(b);
    }
    j["beta"] = std::move(betas);
    j["r_squared"] = output.result.r_squared;
    j["n"] = output.result.n;
    j["dropped"] = output.result.dropped;
  }
  return j;
}

void regression_markdown(std::ostringstream& md, const std::string& title,
                         const RegressionOutput& output) {
  md << "### " << title << "\n\n";
  if (!output.fitted) {
    md << "Not fitted: " << output.note << "\n\n";
    return;
  }
  md << "| Term | Beta |\n|---|---|\n";
  md << "| (intercept) | " << fmt(output.result.intercept, "%.4f") << " |\n";
  for (std::size_t i = 0; i < output.terms.size(); ++i) {
    const double b = output.result.coefficients[i];
    md << "| " << output.terms[i] << " | "
       << (std::isnan(b) ? std::string("dropped") : fmt(b, "%.4f")) << " |\n";
  }
  md << "\nR^2 = " << fmt(output.result.r_squared, "%.4f")
     << ", n = " << output.result.n << "\n\n";
}

}  // namespace

void cmd_analyze(const std::string& corpus_path, const std::string& out_dir,
                 const AnalyzeOptions& options) {
  const Corpus corpus = load_corpus(corpus_path, options.force);
  if (corpus.records.empty()) throw EmptyCorpus("corpus has no records");
  const StrategyMap strategy_map = load_strategy_map(options.strategy_map_file);

  std::vector<MetricsRow> rows;
  rows.reserve(corpus.records.size());
  for (const DialogueRecord& record : corpus.records) {
    rows.push_back(compute_metrics_row(record, options.log_clamp));
  }
  const CorpusSummary summary = summarize_corpus(corpus.records);
  const TraitMetricGrid grid = corpus_trait_grid(corpus.records, rows);

  const StrategyData strategies =
      collect_strategies(corpus.records, strategy_map);
  const std::set<std::string> pooled_retained =
      frequency_filter(strategies.pooled, options.strategy_min_count);
  const std::set<std::string> buyer_retained = frequency_filter(
      strategies.counts[static_cast<std::size_t>(Role::buyer)],
      options.strategy_min_count);
  const std::set<std::string> seller_retained = frequency_filter(
      strategies.counts[static_cast<std::size_t>(Role::seller)],
      options.strategy_min_count);

  auto used_by_either = [](const std::array<std::set<std::string>, 2>& sets,
                           const std::string& category) {
    return sets[0].count(category) > 0 || sets[1].count(category) > 0;
  };
  auto used_by_role = [](Role role) {
    return [role](const std::array<std::set<std::string>, 2>& sets,
                  const std::string& category) {
      return sets[static_cast<std::size_t>(role)].count(category) > 0;
    };
  };

  const RegressionOutput joint_regression = regress_strategies(
      rows, strategies, pooled_retained,
      [](const MetricsRow& row) { return row.joint; }, used_by_either);
  const RegressionOutput buyer_regression = regress_strategies(
      rows, strategies, buyer_retained,
      [](const MetricsRow& row) { return row.buyer_utility; },
      used_by_role(Role::buyer));
  const RegressionOutput seller_regression = regress_strategies(
      rows, strategies, seller_retained,
      [](const MetricsRow& row) { return row.seller_utility; },
      used_by_role(Role::seller));

  const auto buyer_chisq = strategy_chi_square(corpus.records, strategies,
                                               Role::buyer, buyer_retained);
  const auto seller_chisq = strategy_chi_square(corpus.records, strategies,
                                                Role::seller, seller_retained);

  std::filesystem::create_directories(out_dir);
  write_metrics_csv(out_dir + "/metrics.csv", rows);
  write_grid_csv(out_dir + "/trait_metric_spearman.csv", grid);

  {
    nlohmann::json j;
    j["fingerprint"] = corpus.fingerprint;
    j["total"] = summary.total;
    j["successes"] = summary.successes;
    j["nsr"] = summary.nsr;
    j["anr"] = summary.anr ? nlohmann::json(*summary.anr)
                           : nlohmann::json(nullptr);
    j["failed"] = {{"deal_break", summary.failed_deal_break},
                   {"max_rounds", summary.failed_max_rounds},
                   {"backend_error", summary.failed_backend_error}};
    std::ofstream out(out_dir + "/summary.json");
    out << j.dump(2) << "\n";
  }
  {
    nlohmann::json j;
    j["joint_utility"] = regression_json(joint_regression);
    j["buyer_intrinsic"] = regression_json(buyer_regression);
    j["seller_intrinsic"] = regression_json(seller_regression);
    std::ofstream out(out_dir + "/regressions.json");
    out << j.dump(2) << "\n";
  }
  {
    std::ofstream out(out_dir + "/chisq.csv");
    out << "role,dimension,defined,statistic,dof,p_value\n";
    auto dump_role = [&](Role role, const std::vector<ChiSquareOutput>& list) {
      for (const ChiSquareOutput& cs : list) {
        out << to_string(role) << ',' << to_string(cs.dimension) << ','
            << (cs.defined ? 1 : 0) << ',';
        if (cs.defined) {
          out << fmt(cs.result.statistic) << ',' << cs.result.dof << ','
              << fmt(cs.result.p_value);
        } else {
          out << ",,";
        }
        out << "\n";
      }
    };
    dump_role(Role::buyer, buyer_chisq);
    dump_role(Role::seller, seller_chisq);
  }
  {
    std::ofstream out(out_dir + "/chisq_residuals.csv");
    out << "role,dimension,category,negative,positive\n";
    auto dump_role = [&](Role role, const std::vector<ChiSquareOutput>& list) {
      for (const ChiSquareOutput& cs : list) {
        if (!cs.defined) continue;
        for (std::size_t r = 0; r < cs.categories.size(); ++r) {
          out << to_string(role) << ',' << to_string(cs.dimension) << ','
              << cs.categories[r] << ',' << fmt(cs.result.std_residuals[r][0])
              << ',' << fmt(cs.result.std_residuals[r][1]) << "\n";
        }
      }
    };
    dump_role(Role::buyer, buyer_chisq);
    dump_role(Role::seller, seller_chisq);
  }

  std::ostringstream md;
  md << "# Negotiation corpus analysis\n\n";
  md << "- corpus: `" << corpus_path << "`\n";
  md << "- fingerprint: `" << corpus.fingerprint << "`\n";
  md << "- dialogues: " << summary.total << "\n";
  md << "- successes: " << summary.successes << " (NSR = " << fmt(summary.nsr, "%.4f")
     << ")\n";
  if (summary.anr) {
    md << "- average rounds of successful negotiations: "
       << fmt(*summary.anr, "%.4f") << "\n";
  } else {
    md << "- average rounds of successful negotiations: n/a (no successes)\n";
  }
  md << "- failures: deal_break=" << summary.failed_deal_break
     << ", max_rounds=" << summary.failed_max_rounds
     << ", backend_error=" << summary.failed_backend_error << "\n\n";

  md << "## Trait/metric correlations (Spearman)\n\n";
  md << "`*` p < 0.1, `**` p < 0.05\n\n";
  md << grid_markdown(grid) << "\n";

  md << "## Strategy regressions\n\n";
  regression_markdown(md, "Joint utility vs strategies (both roles)",
                      joint_regression);
  regression_markdown(md, "Buyer intrinsic utility vs buyer strategies",
                      buyer_regression);
  regression_markdown(md, "Seller intrinsic utility vs seller strategies",
                      seller_regression);

  md << "## Trait x strategy dependence (Pearson chi-square)\n\n";
  md << "| Role | Dimension | Statistic | dof | p |\n|---|---|---|---|---|\n";
  auto chisq_rows = [&](Role role, const std::vector<ChiSquareOutput>& list) {
    for (const ChiSquareOutput& cs : list) {
      md << "| " << to_string(role) << " | " << to_string(cs.dimension)
         << " | ";
      if (cs.defined) {
        md << fmt(cs.result.statistic, "%.4f") << " | " << cs.result.dof
           << " | " << fmt(cs.result.p_value, "%.4g") << " |\n";
      } else {
        md << "- | - | " << cs.note << " |\n";
      }
    }
  };
  chisq_rows(Role::buyer, buyer_chisq);
  chisq_rows(Role::seller, seller_chisq);
  md << "\nSigned per-cell residuals are in `chisq_residuals.csv`.\n";

  std::ofstream report(out_dir + "/report.md");
  report << md.str();
}

void cmd_report(const std::string& corpus_path, const std::string& out_dir,
                bool force) {
  const Corpus corpus = load_corpus(corpus_path, force);
  if (corpus.records.empty()) throw EmptyCorpus("corpus has no records");

  struct Entry {
    std::size_t id;
    std::string category;
    double price;
    double log10_price;
    double rounds;
    double words;
    bool success;
  };
  std::vector<Entry> entries;
  entries.reserve(corpus.records.size());
  for (const DialogueRecord& record : corpus.records) {
    Entry e;
    e.id = record.id;
    e.category = record.scenario.category.empty() ? "uncategorized"
                                                  : record.scenario.category;
    e.price = record.scenario.seller_ideal.dollars();
    e.log10_price = std::log10(e.price);
    e.rounds = static_cast<double>(record.outcome.rounds);
    std::size_t words = 0;
    for (const AnnotatedTurn& turn : record.turns) {
      words += word_count(turn.utterance.text);
    }
    e.words = static_cast<double>(words);
    e.success = record.outcome.success;
    entries.push_back(std::move(e));
  }

  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out(out_dir + "/length_series.csv");
    out << "id,category,product_price,log10_price,rounds,words,success\n";
    for (const Entry& e : entries) {
      out << e.id << ',' << e.category << ',' << fmt(e.price) << ','
          << fmt(e.log10_price) << ',' << fmt(e.rounds) << ',' << fmt(e.words)
          << ',' << (e.success ? 1 : 0) << "\n";
    }
  }

  std::map<std::string, std::vector<const Entry*>> by_category;
  for (const Entry& e : entries) by_category[e.category].push_back(&e);
  {
    std::ofstream out(out_dir + "/length_by_category.csv");
    out << "category,count,mean_price,mean_log10_price,mean_rounds,"
           "mean_words\n";
    for (const auto& [category, list] : by_category) {
      double price = 0, logp = 0, rounds = 0, words = 0;
      for (const Entry* e : list) {
        price += e->price;
        logp += e->log10_price;
        rounds += e->rounds;
        words += e->words;
      }
      const double n = static_cast<double>(list.size());
      out << category << ',' << list.size() << ',' << fmt(price / n) << ','
          << fmt(logp / n) << ',' << fmt(rounds / n) << ',' << fmt(words / n)
          << "\n";
    }
  }

  auto safe_pearson = [&](auto getter_x, auto getter_y) -> nlohmann::json {
    std::vector<double> x, y;
    for (const Entry& e : entries) {
      x.push_back(getter_x(e));
      y.push_back(getter_y(e));
    }
    try {
      return pearson(x, y);
    } catch (const Error&) {
      return nullptr;
    }
  };
  nlohmann::json j;
  j["n"] = entries.size();
  j["pearson"] = {
      {"rounds_vs_price", safe_pearson([](const Entry& e) { return e.price; },
                                       [](const Entry& e) { return e.rounds; })},
      {"rounds_vs_log10_price",
       safe_pearson([](const Entry& e) { return e.log10_price; },
                    [](const Entry& e) { return e.rounds; })},
      {"words_vs_price", safe_pearson([](const Entry& e) { return e.price; },
                                      [](const Entry& e) { return e.words; })},
      {"words_vs_log10_price",
       safe_pearson([](const Entry& e) { return e.log10_price; },
                    [](const Entry& e) { return e.words; })},
  };
  {
    std::ofstream out(out_dir + "/length_summary.json");
    out << j.dump(2) << "\n";
  }

  std::ostringstream md;
  md << "# Negotiation length report\n\n";
  md << "Word counts are whitespace-delimited tokens over every utterance of "
        "a dialogue; prices are the listing prices.\n\n";
  md << "| Pair | Pearson r |\n|---|---|\n";
  for (const auto& key :
       {"rounds_vs_price", "rounds_vs_log10_price", "words_vs_price",
        "words_vs_log10_price"}) {
    const auto& v = j["pearson"][key];
    md << "| " << key << " | "
       << (v.is_null() ? std::string("-") : fmt(v.get<double>(), "%.4f"))
       << " |\n";
  }
  md << "\nPer-category aggregates are in `length_by_category.csv`; the "
        "per-dialogue series (including log-scaled prices) is in "
        "`length_series.csv`.\n";
  std::ofstream report(out_dir + "/length_report.md");
  report << md.str();
}

void cmd_ipip(const RunConfig& config, const std::string& out_dir,
              std::size_t n_agents) {
  const auto items = load_ipip_items(config.ipip_items_file);
  const auto adjectives = load_adjective_table(config.adjective_file);

  std::unique_ptr<IpipResponder> responder;
  if (config.ipip_responder.type == "scripted") {
    responder = std::make_unique<ScriptedFaithfulResponder>();
  } else if (config.ipip_responder.type == "canned") {
    responder = std::make_unique<BackendIpipResponder>(
        std::make_shared<CannedBackend>(config.ipip_responder.replies));
  } else {
    responder = std::make_unique<BackendIpipResponder>(
        std::make_shared<HttpChatBackend>(config.ipip_responder.live));
  }

  Rng rng = make_rng(config.seed, 0x1b1b1b1bull);
  const IpipValidation validation =
      validate_profiles(*responder, items, adjectives, n_agents,
                        config.adjectives_per_dimension, rng);

  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out(out_dir + "/ipip_grid.csv");
    out << "ipip_dimension,assigned_dimension,n,rho,p_value,stars\n";
    for (std::size_t row = 0; row < 5; ++row) {
      for (std::size_t col = 0; col < 5; ++col) {
        const TraitMetricCell& cell = validation.grid[row][col];
        out << to_string(kAllDimensions[row]) << ','
            << to_string(kAllDimensions[col]) << ',' << cell.n << ',';
        if (cell.defined) {
          out << fmt(cell.rho) << ',' << fmt(cell.p_value) << ','
              << cell.stars;
        } else {
          out << ",,";
        }
        out << "\n";
      }
    }
  }
  std::ostringstream md;
  md << "# IPIP-50 validation\n\n";
  md << "Agents scored: " << validation.agents_scored
     << " (failed: " << validation.agents_failed << ")\n\n";
  md << "Spearman correlation between assigned trait levels (columns) and "
        "IPIP dimension means (rows). `*` p < 0.05\n\n";
  md << "| |";
  for (Dimension d : kAllDimensions) md << " " << to_string(d) << " |";
  md << "\n|---|---|---|---|---|---|\n";
  for (std::size_t row = 0; row < 5; ++row) {
    md << "| IPIP " << to_string(kAllDimensions[row]) << " |";
    for (std::size_t col = 0; col < 5; ++col) {
      const TraitMetricCell& cell = validation.grid[row][col];
      if (cell.defined) {
        md << " " << fmt(cell.rho, "%.2f") << (cell.stars > 0 ? "*" : "")
           << " |";
      } else {
        md << " - |";
      }
    }
    md << "\n";
  }
  std::ofstream report(out_dir + "/ipip_report.md");
  report << md.str();
}

}  // namespace negsim
