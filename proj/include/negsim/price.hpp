// Exact two-decimal money type. Prices are stored as integer cents so that
// transcripts and scenario files round-trip without float drift; metric
// computations convert to double at the boundary.
#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace negsim {

class Price {
 public:
  Price() = default;

  static Price from_cents(std::int64_t cents) { return Price(cents); }

  // Rounds to the nearest cent; safe for any JSON double that originated
  // from a two-decimal value.
  static Price from_double(double dollars) {
    return Price(std::llround(dollars * 100.0));
  }

  // Accepts "160", "159.99", "$47.50", " 30 ". At most two fraction digits.
  static std::optional<Price> parse(std::string_view text) {
    size_t i = 0, n = text.size();
    while (i < n && (text[i] == ' ' || text[i] == '\t')) ++i;
    if (i < n && text[i] == '$') ++i;
    bool neg = false;
    if (i < n && (text[i] == '-' || text[i] == '+')) {
      neg = text[i] == '-';
      ++i;
    }
    std::int64_t whole = 0;
    size_t digits = 0;
    while (i < n && text[i] >= '0' && text[i] <= '9') {
      whole = whole * 10 + (text[i] - '0');
      ++i;
      ++digits;
    }
    if (digits == 0) return std::nullopt;
    std::int64_t cents = whole * 100;
    if (i < n && text[i] == '.') {
      ++i;
      size_t frac_digits = 0;
      std::int64_t frac = 0;
      while (i < n && text[i] >= '0' && text[i] <= '9') {
        if (frac_digits < 2) frac = frac * 10 + (text[i] - '0');
        ++i;
        ++frac_digits;
      }
      if (frac_digits == 0 || frac_digits > 2) return std::nullopt;
      if (frac_digits == 1) frac *= 10;
      cents += frac;
    }
    while (i < n && (text[i] == ' ' || text[i] == '\t')) ++i;
    if (i != n) return std::nullopt;
    return Price(neg ? -cents : cents);
  }

  std::int64_t cents() const { return cents_; }
  double dollars() const { return static_cast<double>(cents_) / 100.0; }
  bool positive() const { return cents_ > 0; }

  // "30" for whole amounts, "40.20" otherwise. Used verbatim in prompts and
  // scripted utterances, so the format is part of the wire contract.
  std::string str() const {
    char buf[32];
    std::int64_t c = cents_;
    if (c % 100 == 0) {
      std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(c / 100));
    } else {
      bool neg = c < 0;
      std::int64_t a = neg ? -c : c;
      std::snprintf(buf, sizeof(buf), "%s%lld.%02lld", neg ? "-" : "",
                    static_cast<long long>(a / 100),
                    static_cast<long long>(a % 100));
    }
    return buf;
  }

  auto operator<=>(const Price&) const = default;

 private:
  explicit Price(std::int64_t cents) : cents_(cents) {}
  std::int64_t cents_ = 0;
};

}  // namespace negsim
