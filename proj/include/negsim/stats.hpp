// Statistical machinery for the analysis layer: rank and product-moment
// correlation with significance, Pearson chi-square dependence with signed
// residuals, indicator-variable least squares, and the canonicalization of
// free-text strategy labels. Distribution tails are computed from scratch via
// series/continued-fraction forms of the regularized gamma and beta
// functions; no external math library is linked.
#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "negsim/personality.hpp"
#include "negsim/role.hpp"

namespace negsim {

namespace special {

// Regularized incomplete gamma P(a,x) and Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

// Upper tail of Student's t with `dof` degrees of freedom.
double student_t_sf(double t, double dof);

// Upper tail of the chi-square distribution.
double chi2_sf(double x, double dof);

}  // namespace special

// Average ranks (ties share the mean of the rank positions they occupy).
std::vector<double> average_ranks(std::span<const double> values);

// Product-moment correlation; single-pass co-moment accumulation.
double pearson(std::span<const double> x, std::span<const double> y);

enum class PValueMode {
  automatic,        // exact for n <= 8, t-approximation above
  t_approximation,  // t = rho*sqrt((n-2)/(1-rho^2)), n-2 dof, two-sided
  exact_permutation
};

struct RankCorrelation {
  double rho = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  bool exact = false;  // p came from permutation enumeration
};

// Spearman correlation of average ranks. The exact p-value enumerates all
// distinct arrangements of the y-ranks and counts |rho| at least as extreme
// (inclusive); feasible for n <= 10, required for n <= 8 in automatic mode.
RankCorrelation spearman(std::span<const double> x, std::span<const double> y,
                         PValueMode mode = PValueMode::automatic);

struct ContingencyTable {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::vector<double>> counts;  // rows x cols, all >= 0
};

struct ChiSquareResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t dof = 0;
  // (observed - expected) / sqrt(expected), the signed dependence strength.
  std::vector<std::vector<double>> std_residuals;
};

ChiSquareResult chi_square(const ContingencyTable& table);

struct RegressionResult {
  bool with_intercept = true;
  double intercept = 0.0;
  std::vector<double> coefficients;  // per input column; NaN when dropped
  std::vector<std::size_t> dropped;  // input column indices removed
  double rss = 0.0;
  double r_squared = 0.0;
  std::size_t n = 0;
};

// Least squares on the given design columns via normal equations and a
// Cholesky factorization. Collinear columns are dropped (first offender
// during factorization) and reported rather than failing the fit.
RegressionResult ols_regress(const std::vector<std::vector<double>>& columns,
                             std::span<const double> outcome,
                             bool with_intercept = true);

// --- strategy canonicalization -------------------------------------------

struct StrategyRule {
  std::string phrase;    // lowercase substring to match
  std::string category;  // canonical label
};

using StrategyMap = std::vector<StrategyRule>;

inline constexpr const char* kOtherStrategy = "other";

// `phrase<TAB>category` lines; rules apply in file order, first match wins.
StrategyMap load_strategy_map(const std::string& path);

// Lowercases the text and scans rules in order; unmatched -> "other".
std::string canonicalize_strategy(std::string_view free_text,
                                  const StrategyMap& map);

// Categories occurring strictly more than min_count times.
std::set<std::string> frequency_filter(
    const std::map<std::string, std::size_t>& counts,
    std::size_t min_count = 20);

// --- trait/metric correlation grid ----------------------------------------

// One metric as seen from one role: the metric value per dialogue paired
// with that role's personality profile. Values and profiles run in parallel.
struct RoleSeries {
  std::vector<double> values;
  std::vector<PersonalityProfile> profiles;
};

struct MetricSeries {
  std::string name;
  RoleSeries buyer;
  RoleSeries seller;
};

struct TraitMetricCell {
  double rho = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  int stars = 0;  // 1: p < 0.1, 2: p < 0.05
  bool defined = false;
};

struct TraitMetricGrid {
  std::vector<std::string> metric_names;  // rows
  // Columns ordered as (dimension, role) with role buyer then seller,
  // dimensions in kAllDimensions order. cells[row][dim*2 + role].
  std::vector<std::array<TraitMetricCell, 10>> cells;
};

// Correlates each metric series against the ordinal trait level (-3..+3) of
// the role's profile: one Spearman test per (metric, dimension, role).
TraitMetricGrid trait_metric_table(const std::vector<MetricSeries>& metrics);

}  // namespace negsim
