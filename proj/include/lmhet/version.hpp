#pragma once

namespace lmhet {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace lmhet
