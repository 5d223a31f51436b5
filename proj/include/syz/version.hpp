#pragma once

namespace syz {
inline constexpr const char* kToolName = "syzlab";
inline constexpr const char* kVersion = "0.1.0";
} // namespace syz
