#pragma once

namespace spincant {

inline constexpr const char* kVersion = "1.0.0";

// Bump when any CSV schema or the snapshot-stream layout changes.
inline constexpr int kFormatVersion = 1;

}  // namespace spincant
