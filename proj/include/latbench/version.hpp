#pragma once

namespace latbench {

inline constexpr const char* kArtifactVersion = "0.1.0";

}  // namespace latbench
