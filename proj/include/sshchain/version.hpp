#pragma once

namespace sshchain {

inline constexpr const char* version = "0.1.0";

} // namespace sshchain
