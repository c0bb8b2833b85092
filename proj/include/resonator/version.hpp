#pragma once

#include <string_view>

namespace resonator {

inline constexpr std::string_view version_string = "0.1.0";

}  // namespace resonator
