#pragma once

namespace quorum {

inline constexpr const char* kArtifactVersion = "0.1.0";

}  // namespace quorum
