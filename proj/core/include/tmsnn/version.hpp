#pragma once

namespace tmsnn {

inline constexpr const char* version = "0.1.0";

} // namespace tmsnn
