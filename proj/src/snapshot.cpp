#include "wavelab/snapshot.hpp"

#include "wavelab/error.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

namespace wavelab {

namespace {

constexpr std::array<char, 4> magic_for(SnapshotKind kind)
{
    switch (kind) {
    case SnapshotKind::NoiseCells:
        return {'W', 'L', 'N', 'C'};
    case SnapshotKind::WaveField:
        return {'W', 'L', 'W', 'V'};
    case SnapshotKind::HeatField:
        return {'W', 'L', 'H', 'T'};
    }
    return {'?', '?', '?', '?'};
}

template <class U>
void put_le(char* out, U value)
{
    for (std::size_t i = 0; i < sizeof(U); ++i)
        out[i] = static_cast<char>((value >> (8 * i)) & 0xffu);
}

template <class U>
U get_le(const char* in)
{
    U value = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i)
        value |= static_cast<U>(static_cast<unsigned char>(in[i])) << (8 * i);
    return value;
}

} // namespace

void write_snapshot_header(std::ostream& os, SnapshotKind kind, double h, double t_max, std::int32_t m_lo,
                           std::int32_t m_hi)
{
    std::array<char, kSnapshotHeaderBytes> buf{};
    const auto magic = magic_for(kind);
    std::memcpy(buf.data(), magic.data(), 4);
    put_le<std::uint16_t>(buf.data() + 4, kSnapshotVersion);
    put_le<std::uint16_t>(buf.data() + 6, static_cast<std::uint16_t>(kind));
    put_le<std::uint64_t>(buf.data() + 8, std::bit_cast<std::uint64_t>(h));
    put_le<std::uint64_t>(buf.data() + 16, std::bit_cast<std::uint64_t>(t_max));
    put_le<std::uint32_t>(buf.data() + 24, static_cast<std::uint32_t>(m_lo));
    put_le<std::uint32_t>(buf.data() + 28, static_cast<std::uint32_t>(m_hi));
    os.write(buf.data(), buf.size());
}

void write_le_doubles(std::ostream& os, std::span<const double> values)
{
    std::array<char, 8> buf{};
    for (double v : values) {
        put_le<std::uint64_t>(buf.data(), std::bit_cast<std::uint64_t>(v));
        os.write(buf.data(), 8);
    }
}

SnapshotHeader read_snapshot_header(std::istream& is)
{
    std::array<char, kSnapshotHeaderBytes> buf{};
    if (!is.read(buf.data(), buf.size()))
        throw Error("snapshot: truncated header");
    const auto kind = static_cast<SnapshotKind>(get_le<std::uint16_t>(buf.data() + 6));
    const auto magic = magic_for(kind);
    if (std::memcmp(buf.data(), magic.data(), 4) != 0 || get_le<std::uint16_t>(buf.data() + 4) != kSnapshotVersion)
        throw Error("snapshot: bad magic or version");
    return {kind, std::bit_cast<double>(get_le<std::uint64_t>(buf.data() + 8)),
            std::bit_cast<double>(get_le<std::uint64_t>(buf.data() + 16)),
            static_cast<std::int32_t>(get_le<std::uint32_t>(buf.data() + 24)),
            static_cast<std::int32_t>(get_le<std::uint32_t>(buf.data() + 28))};
}

std::vector<double> read_le_doubles(std::istream& is)
{
    std::vector<double> out;
    std::array<char, 8> buf{};
    while (is.read(buf.data(), 8))
        out.push_back(std::bit_cast<double>(get_le<std::uint64_t>(buf.data())));
    if (is.gcount() != 0)
        throw Error("snapshot: trailing partial value");
    return out;
}

} // namespace wavelab
