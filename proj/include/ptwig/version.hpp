#pragma once

namespace ptwig {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kGenerator = "ptwig 0.1.0";

}  // namespace ptwig
