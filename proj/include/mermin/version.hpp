#pragma once

namespace mermin {

inline constexpr const char* kVersion = "0.1.0";

} // namespace mermin
