#include "negsim/stats.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "negsim/errors.hpp"

namespace negsim {

namespace special {

namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 800;

// Series expansion of P(a,x), valid for x < a+1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a,x), valid for x >= a+1 (modified Lentz).
double gamma_q_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double beta_cf(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double gamma_p(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw Error("gamma_p requires a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw Error("gamma_q requires a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double incomplete_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) throw Error("incomplete_beta requires a, b > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_sf(double t, double dof) {
  if (dof <= 0.0) throw Error("student_t_sf requires dof > 0");
  if (std::isinf(t)) return t > 0.0 ? 0.0 : 1.0;
  const double upper =
      0.5 * incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t));
  return t >= 0.0 ? upper : 1.0 - upper;
}

double chi2_sf(double x, double dof) {
  if (dof <= 0.0) throw Error("chi2_sf requires dof > 0");
  if (x <= 0.0) return 1.0;
  return gamma_q(dof / 2.0, x / 2.0);
}

}  // namespace special

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double shared = (static_cast<double>(i) + static_cast<double>(j)) /
                              2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw LengthMismatch("pearson: size mismatch");
  if (x.size() < 2) throw LengthMismatch("pearson requires n >= 2");
  double mx = 0.0, my = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    mx += dx / k;
    my += dy / k;
    sxx += dx * (x[i] - mx);
    syy += dy * (y[i] - my);
    sxy += dx * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw ConstantSeries("pearson undefined for a constant series");
  }
  return sxy / std::sqrt(sxx * syy);
}

namespace {

double rho_of_ranks(const std::vector<double>& rx, const std::vector<double>& ry) {
  const std::size_t n = rx.size();
  const double mean = (static_cast<double>(n) + 1.0) / 2.0;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw ConstantSeries("spearman undefined for a constant series");
  }
  return sxy / std::sqrt(sxx * syy);
}

// Inclusive two-sided tail over all distinct arrangements of the y-ranks.
// With ties, every distinct arrangement arises from the same number of index
// permutations, so counting distinct arrangements is exact.
double exact_permutation_p(const std::vector<double>& rx,
                           const std::vector<double>& ry, double rho_obs) {
  const std::size_t n = rx.size();
  const double mean = (static_cast<double>(n) + 1.0) / 2.0;
  double sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  const double denom = std::sqrt(sxx * syy);
  const double threshold = std::fabs(rho_obs) - 1e-12;
  std::vector<double> perm = ry;
  std::sort(perm.begin(), perm.end());
  std::uint64_t hits = 0, total = 0;
  do {
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sxy += (rx[i] - mean) * (perm[i] - mean);
    }
    if (std::fabs(sxy / denom) >= threshold) ++hits;
    ++total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace

RankCorrelation spearman(std::span<const double> x, std::span<const double> y,
                         PValueMode mode) {
  if (x.size() != y.size()) throw LengthMismatch("spearman: size mismatch");
  if (x.size() < 3) throw LengthMismatch("spearman requires n >= 3");
  const std::size_t n = x.size();
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);

  RankCorrelation result;
  result.n = n;
  result.rho = rho_of_ranks(rx, ry);

  const bool use_exact = mode == PValueMode::exact_permutation ||
                         (mode == PValueMode::automatic && n <= 8);
  if (use_exact) {
    if (n > 10) throw Error("exact permutation p limited to n <= 10");
    result.p_value = exact_permutation_p(rx, ry, result.rho);
    result.exact = true;
  } else {
    const double r2 = result.rho * result.rho;
    if (r2 >= 1.0) {
      result.p_value = 0.0;
    } else {
      const double t = result.rho *
                       std::sqrt((static_cast<double>(n) - 2.0) / (1.0 - r2));
      result.p_value = std::clamp(
          2.0 * special::student_t_sf(std::fabs(t),
                                      static_cast<double>(n) - 2.0),
          0.0, 1.0);
    }
  }
  return result;
}

ChiSquareResult chi_square(const ContingencyTable& table) {
  const std::size_t rows = table.counts.size();
  if (rows < 2) throw Error("chi_square requires at least a 2x2 table");
  const std::size_t cols = table.counts.front().size();
  if (cols < 2) throw Error("chi_square requires at least a 2x2 table");
  for (const auto& row : table.counts) {
    if (row.size() != cols) throw LengthMismatch("ragged contingency table");
    for (double c : row) {
      if (c < 0.0) throw Error("negative count in contingency table");
    }
  }
  std::vector<double> row_sum(rows, 0.0), col_sum(cols, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      row_sum[i] += table.counts[i][j];
      col_sum[j] += table.counts[i][j];
      total += table.counts[i][j];
    }
  }
  for (double s : row_sum) {
    if (s == 0.0) throw ZeroMarginal("contingency table has an empty row");
  }
  for (double s : col_sum) {
    if (s == 0.0) throw ZeroMarginal("contingency table has an empty column");
  }

  ChiSquareResult result;
  result.std_residuals.assign(rows, std::vector<double>(cols, 0.0));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double expected = row_sum[i] * col_sum[j] / total;
      const double diff = table.counts[i][j] - expected;
      result.statistic += diff * diff / expected;
      result.std_residuals[i][j] = diff / std::sqrt(expected);
    }
  }
  result.dof = (rows - 1) * (cols - 1);
  result.p_value =
      special::chi2_sf(result.statistic, static_cast<double>(result.dof));
  return result;
}

RegressionResult ols_regress(const std::vector<std::vector<double>>& columns,
                             std::span<const double> outcome,
                             bool with_intercept) {
  const std::size_t n = outcome.size();
  const std::size_t k = columns.size();
  for (const auto& col : columns) {
    if (col.size() != n) throw LengthMismatch("design column size mismatch");
  }
  const std::size_t m = k + (with_intercept ? 1 : 0);
  if (m == 0) throw Error("ols_regress needs at least one column");
  if (n <= m) throw RankDeficient("ols_regress requires n > #columns");

  // Design accessor: column 0 is the intercept when present.
  auto at = [&](std::size_t col, std::size_t row) -> double {
    if (with_intercept) {
      return col == 0 ? 1.0 : columns[col - 1][row];
    }
    return columns[col][row];
  };

  std::vector<bool> active(m, true);
  RegressionResult result;
  result.with_intercept = with_intercept;
  result.n = n;

  // Cholesky on the normal equations of the active columns; a failed pivot
  // marks that column collinear, drops it, and restarts.
  std::vector<std::size_t> keep;
  std::vector<double> chol, rhs;
  while (true) {
    keep.clear();
    for (std::size_t j = 0; j < m; ++j) {
      if (active[j]) keep.push_back(j);
    }
    if (keep.empty()) throw RankDeficient("all design columns collinear");
    const std::size_t q = keep.size();
    std::vector<double> a(q * q, 0.0);
    rhs.assign(q, 0.0);
    for (std::size_t i = 0; i < q; ++i) {
      for (std::size_t j = i; j < q; ++j) {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r) s += at(keep[i], r) * at(keep[j], r);
        a[i * q + j] = s;
        a[j * q + i] = s;
      }
      double s = 0.0;
      for (std::size_t r = 0; r < n; ++r) s += at(keep[i], r) * outcome[r];
      rhs[i] = s;
    }
    chol.assign(q * q, 0.0);
    std::size_t failed = q;
    for (std::size_t i = 0; i < q && failed == q; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        double s = a[i * q + j];
        for (std::size_t p = 0; p < j; ++p) {
          s -= chol[i * q + p] * chol[j * q + p];
        }
        if (i == j) {
          if (s <= 1e-10 * std::max(1.0, a[i * q + i])) {
            failed = i;
            break;
          }
          chol[i * q + i] = std::sqrt(s);
        } else {
          chol[i * q + j] = s / chol[j * q + j];
        }
      }
    }
    if (failed == q) break;
    active[keep[failed]] = false;
    const std::size_t input_col =
        with_intercept ? keep[failed] - 1 : keep[failed];
    if (with_intercept && keep[failed] == 0) {
      throw RankDeficient("intercept column collinear (constant design)");
    }
    result.dropped.push_back(input_col);
  }

  // Forward/back substitution.
  const std::size_t q = keep.size();
  std::vector<double> z(q, 0.0), beta(q, 0.0);
  for (std::size_t i = 0; i < q; ++i) {
    double s = rhs[i];
    for (std::size_t p = 0; p < i; ++p) s -= chol[i * q + p] * z[p];
    z[i] = s / chol[i * q + i];
  }
  for (std::size_t ii = q; ii > 0; --ii) {
    const std::size_t i = ii - 1;
    double s = z[i];
    for (std::size_t p = i + 1; p < q; ++p) s -= chol[p * q + i] * beta[p];
    beta[i] = s / chol[i * q + i];
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  result.coefficients.assign(k, nan);
  for (std::size_t i = 0; i < q; ++i) {
    if (with_intercept && keep[i] == 0) {
      result.intercept = beta[i];
    } else {
      result.coefficients[with_intercept ? keep[i] - 1 : keep[i]] = beta[i];
    }
  }
  if (!with_intercept) result.intercept = 0.0;

  double rss = 0.0, tss = 0.0;
  double mean = 0.0;
  if (with_intercept) {
    for (double v : outcome) mean += v;
    mean /= static_cast<double>(n);
  }
  for (std::size_t r = 0; r < n; ++r) {
    double fit = 0.0;
    for (std::size_t i = 0; i < q; ++i) fit += beta[i] * at(keep[i], r);
    const double res = outcome[r] - fit;
    rss += res * res;
    const double dev = outcome[r] - mean;
    tss += dev * dev;
  }
  result.rss = rss;
  result.r_squared = tss > 0.0 ? 1.0 - rss / tss : 1.0;
  std::sort(result.dropped.begin(), result.dropped.end());
  return result;
}

StrategyMap load_strategy_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open strategy map: " + path);
  StrategyMap map;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected phrase<TAB>category");
    }
    StrategyRule rule;
    rule.phrase = line.substr(0, tab);
    rule.category = line.substr(tab + 1);
    std::transform(rule.phrase.begin(), rule.phrase.end(), rule.phrase.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    map.push_back(std::move(rule));
  }
  return map;
}

std::string canonicalize_strategy(std::string_view free_text,
                                  const StrategyMap& map) {
  std::string text(free_text);
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  for (const StrategyRule& rule : map) {
    if (text.find(rule.phrase) != std::string::npos) return rule.category;
  }
  return kOtherStrategy;
}

std::set<std::string> frequency_filter(
    const std::map<std::string, std::size_t>& counts, std::size_t min_count) {
  std::set<std::string> retained;
  for (const auto& [category, count] : counts) {
    if (count > min_count) retained.insert(category);
  }
  return retained;
}

TraitMetricGrid trait_metric_table(const std::vector<MetricSeries>& metrics) {
  TraitMetricGrid grid;
  for (const MetricSeries& series : metrics) {
    grid.metric_names.push_back(series.name);
    std::array<TraitMetricCell, 10> row{};
    for (std::size_t d = 0; d < kAllDimensions.size(); ++d) {
      for (Role role : {Role::buyer, Role::seller}) {
        const RoleSeries& rs =
            role == Role::buyer ? series.buyer : series.seller;
        if (rs.values.size() != rs.profiles.size()) {
          throw LengthMismatch("trait_metric_table: ragged role series");
        }
        TraitMetricCell cell;
        if (rs.values.size() >= 3) {
          std::vector<double> ordinals;
          ordinals.reserve(rs.profiles.size());
          for (const PersonalityProfile& profile : rs.profiles) {
            ordinals.push_back(
                static_cast<double>(profile[kAllDimensions[d]].ordinal()));
          }
          try {
            const RankCorrelation rc = spearman(ordinals, rs.values);
            cell.rho = rc.rho;
            cell.p_value = rc.p_value;
            cell.n = rc.n;
            cell.stars = rc.p_value < 0.05 ? 2 : (rc.p_value < 0.1 ? 1 : 0);
            cell.defined = true;
          } catch (const ConstantSeries&) {
            cell.defined = false;
          }
        }
        row[d * 2 + static_cast<std::size_t>(role)] = cell;
      }
    }
    grid.cells.push_back(row);
  }
  return grid;
}

}  // namespace negsim
