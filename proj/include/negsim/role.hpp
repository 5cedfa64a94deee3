#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace negsim {

enum class Role : std::uint8_t { buyer = 0, seller = 1 };

std::string_view to_string(Role r);
std::optional<Role> role_from_string(std::string_view s);
inline Role opponent(Role r) {
  return r == Role::buyer ? Role::seller : Role::buyer;
}

}  // namespace negsim
