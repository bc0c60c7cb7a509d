#pragma once

namespace hqc {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace hqc
