#pragma once

namespace antijam {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace antijam
