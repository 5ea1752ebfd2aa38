#pragma once

namespace fairclust {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fairclust
