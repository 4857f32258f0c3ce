#pragma once

namespace congen {

inline constexpr const char* version = "0.1.0";

}  // namespace congen
