#pragma once

// Binary snapshot format shared by noise dumps and solved fields.
//
//   offset  size  field
//   0       4     magic "WLNC" (noise), "WLWV" (wave field), "WLHT" (heat field)
//   4       2     format version (1)
//   6       2     kind code
//   8       8     h (wave) or dx (heat), f64
//   16      8     t_max, f64
//   24      4     m_lo (wave) or 0 (heat), i32
//   28      4     m_hi (wave) or columns - 1 (heat), i32
//   32      ...   payload, little-endian f64
//
// All multi-byte fields are little-endian regardless of host order.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace wavelab {

enum class SnapshotKind : std::uint16_t { NoiseCells = 1, WaveField = 2, HeatField = 3 };

inline constexpr std::size_t kSnapshotHeaderBytes = 32;
inline constexpr std::uint16_t kSnapshotVersion = 1;

struct SnapshotHeader {
    SnapshotKind kind;
    double h;
    double t_max;
    std::int32_t m_lo;
    std::int32_t m_hi;
};

void write_snapshot_header(std::ostream& os, SnapshotKind kind, double h, double t_max, std::int32_t m_lo,
                           std::int32_t m_hi);
void write_le_doubles(std::ostream& os, std::span<const double> values);

/// Throws Error on bad magic or truncated input.
SnapshotHeader read_snapshot_header(std::istream& is);
std::vector<double> read_le_doubles(std::istream& is);

} // namespace wavelab
