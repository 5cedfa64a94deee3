#include "negsim/textutil.hpp"

#include <cctype>

namespace negsim {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alnum(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

}  // namespace

std::optional<Price> extract_last_amount(std::string_view text) {
  std::optional<Price> last;
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    if (!is_digit(text[i])) {
      ++i;
      continue;
    }
    // Reject digits glued to a preceding word ("v2") or decimal tail.
    if (i > 0 && (is_alnum(text[i - 1]) || text[i - 1] == '.')) {
      while (i < n && (is_digit(text[i]) || text[i] == ',')) ++i;
      continue;
    }
    const std::size_t start = i;
    std::string digits;
    bool valid_groups = true;
    std::size_t group_len = 0;
    bool first_group = true;
    while (i < n && (is_digit(text[i]) || text[i] == ',')) {
      if (text[i] == ',') {
        if (i + 1 >= n || !is_digit(text[i + 1])) break;  // trailing comma
        if (!first_group && group_len != 3) valid_groups = false;
        if (first_group && (group_len == 0 || group_len > 3)) {
          valid_groups = false;
        }
        first_group = false;
        group_len = 0;
      } else {
        digits += text[i];
        ++group_len;
      }
      ++i;
    }
    if (!first_group && group_len != 3) valid_groups = false;
    std::string frac;
    if (i < n && text[i] == '.' && i + 1 < n && is_digit(text[i + 1])) {
      std::size_t j = i + 1;
      while (j < n && is_digit(text[j])) {
        frac += text[j];
        ++j;
      }
      if (frac.size() <= 2) {
        i = j;
      } else {
        // Not a money amount; skip the whole token.
        i = j;
        continue;
      }
    }
    // Reject digits glued to a following word ("5S").
    if (i < n && is_alnum(text[i])) {
      while (i < n && is_alnum(text[i])) ++i;
      continue;
    }
    if (!valid_groups || digits.empty()) continue;
    std::string token = digits;
    if (!frac.empty()) token += "." + frac;
    if (auto price = Price::parse(token); price && price->positive()) {
      last = price;
    }
    (void)start;
  }
  return last;
}

bool contains_ci(std::string_view text, std::string_view needle) {
  if (needle.empty() || needle.size() > text.size()) return false;
  auto lower = [](char c) {
    return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  };
  for (std::size_t i = 0; i + needle.size() <= text.size(); ++i) {
    std::size_t j = 0;
    while (j < needle.size() && lower(text[i + j]) == lower(needle[j])) ++j;
    if (j == needle.size()) return true;
  }
  return false;
}

std::size_t word_count(std::string_view text) {
  std::size_t count = 0;
  bool in_word = false;
  for (char c : text) {
    const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_word) ++count;
    in_word = !space;
  }
  return count;
}

TruncatedText truncate_at_sentence(std::string text, std::size_t max_chars) {
  if (text.size() <= max_chars) return {std::move(text), false};
  std::size_t cut = max_chars;
  for (std::size_t i = max_chars; i > 0; --i) {
    const char c = text[i - 1];
    if (c == '.' || c == '!' || c == '?') {
      cut = i;
      break;
    }
  }
  text.resize(cut);
  return {std::move(text), true};
}

}  // namespace negsim
