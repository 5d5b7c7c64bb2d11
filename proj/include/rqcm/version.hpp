#pragma once

namespace rqcm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rqcm
