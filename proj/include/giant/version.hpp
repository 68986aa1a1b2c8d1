// version.hpp — Toolkit version string

#pragma once

namespace giant {

inline constexpr const char* version = "0.1.0";

} // namespace giant
