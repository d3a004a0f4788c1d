#pragma once

namespace lvar {
inline constexpr const char* version = "0.1.0";
}
