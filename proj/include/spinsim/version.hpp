#pragma once

#include <string_view>

namespace spinsim {

inline constexpr std::string_view kVersion = "0.1.0";

/// Version tag of the result/config JSON layout, bumped on breaking changes.
inline constexpr int kSchemaVersion = 1;

}  // namespace spinsim
