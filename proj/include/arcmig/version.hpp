#pragma once

namespace arcmig {

inline constexpr const char* version = "0.1.0";

} // namespace arcmig
