// Small text helpers shared by the scripted detector, the scripted agents,
// and the length analysis.
#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "negsim/price.hpp"

namespace negsim {

// Last standalone currency amount in the text ("$80", "80", "1,200",
// "40.20"). Digit runs glued to letters ("iPhone 5S", "16GB") and numbers
// with more than two fraction digits are not amounts. Returns amounts > 0.
std::optional<Price> extract_last_amount(std::string_view text);

// Case-insensitive substring test.
bool contains_ci(std::string_view text, std::string_view needle);

// Whitespace-delimited token count.
std::size_t word_count(std::string_view text);

struct TruncatedText {
  std::string text;
  bool truncated = false;
};

// Caps the text at max_chars, cutting at the last sentence end ('.', '!',
// '?') before the cap when one exists.
TruncatedText truncate_at_sentence(std::string text, std::size_t max_chars);

}  // namespace negsim
