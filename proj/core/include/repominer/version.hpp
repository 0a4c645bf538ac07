#pragma once

namespace repominer {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace repominer
