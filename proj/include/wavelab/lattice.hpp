#pragma once

// Light-cone lattice geometry.
//
// Field points sit at (n*h, m*h) with n + m even and n >= 0. The half-plane
// s >= 0 is tiled by two kinds of noise cells:
//   - base triangles {0 <= s <= h, |y - m h| <= h - s}, m odd, area h^2;
//   - diamonds {|y - m h| + |s - n h| < h}, n >= 1, n + m odd, area 2 h^2.
// A cell belongs to the backward cone of a field point exactly when its top
// vertex does, which makes every cone, shell and strip a union of whole cells.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <vector>

namespace wavelab {

struct LatticePoint {
    int n = 0; ///< time index, t = n h
    int m = 0; ///< space index, x = m h
    friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

enum class CellKind : std::uint8_t { BaseTriangle, Diamond };

struct NoiseCell {
    CellKind kind = CellKind::Diamond;
    int n = 0; ///< center level for diamonds, 0 for base triangles
    int m = 0; ///< center column (apex column for base triangles)

    static NoiseCell triangle(int m) { return {CellKind::BaseTriangle, 0, m}; }
    static NoiseCell diamond(int n, int m) { return {CellKind::Diamond, n, m}; }

    /// Area in units of h^2.
    int area_units() const { return kind == CellKind::Diamond ? 2 : 1; }
    LatticePoint top() const { return {n + 1, m}; }
    /// Level at which the scheme evaluates sigma for this cell.
    int bottom_level() const { return kind == CellKind::Diamond ? n - 1 : 0; }
    bool well_formed() const;

    friend auto operator<=>(const NoiseCell&, const NoiseCell&) = default;
};

/// Smallest apex level N for which the cell lies in the cone of (N, apex_m).
inline int cell_depth(const NoiseCell& c, int apex_m)
{
    return c.n + 1 + std::abs(c.m - apex_m);
}

/// Whether the cell lies in the backward cone of the apex.
inline bool in_cone(const NoiseCell& c, LatticePoint apex)
{
    return cell_depth(c, apex.m) <= apex.n;
}

/// Converts a real coordinate to an integer multiple of h, or throws AlignmentError.
int lattice_index(double value, double h, const char* what);

/// Discrete trapezoidal domain: level n spans columns [m_lo + n, m_hi - n].
class LatticeSpec {
public:
    /// Throws ConfigError unless h > 0, every extent is an integer multiple of h
    /// and the trapezoid is nonempty up to t_max.
    static LatticeSpec create(double h, double t_max, double x_base_lo, double x_base_hi);

    /// Smallest lattice whose trapezoid contains all of the given points.
    static LatticeSpec covering(double h, const std::vector<LatticePoint>& points);

    double h() const { return h_; }
    int levels() const { return levels_; }
    int m_lo() const { return m_lo_; }
    int m_hi() const { return m_hi_; }
    double t_max() const { return levels_ * h_; }
    double x_base_lo() const { return m_lo_ * h_; }
    double x_base_hi() const { return m_hi_ * h_; }

    int row_first(int n) const { return m_lo_ + n + ((m_lo_ + n + n) & 1); }
    int row_last(int n) const { return m_hi_ - n - ((m_hi_ - n + n) & 1); }
    int row_count(int n) const { return (row_last(n) - row_first(n)) / 2 + 1; }
    std::size_t row_offset(int n) const { return offsets_[static_cast<std::size_t>(n)]; }
    std::size_t point_count() const { return offsets_.back(); }

    bool contains(LatticePoint p) const;
    bool contains(const NoiseCell& c) const;

    /// Packed storage index of an in-domain field point.
    std::size_t index(LatticePoint p) const
    {
        return offsets_[static_cast<std::size_t>(p.n)] +
               static_cast<std::size_t>((p.m - row_first(p.n)) / 2);
    }

    /// Converts (t, x) to a field point; AlignmentError if off-lattice or of wrong parity.
    LatticePoint align(double t, double x) const;

    double cell_area(const NoiseCell& c) const { return c.area_units() * h_ * h_; }

    /// Every cell of the domain, ordered by (n, m).
    std::vector<NoiseCell> cells() const;

    friend bool operator==(const LatticeSpec& a, const LatticeSpec& b)
    {
        return a.h_ == b.h_ && a.levels_ == b.levels_ && a.m_lo_ == b.m_lo_ && a.m_hi_ == b.m_hi_;
    }

private:
    LatticeSpec(double h, int levels, int m_lo, int m_hi);

    double h_;
    int levels_;
    int m_lo_;
    int m_hi_;
    std::vector<std::size_t> offsets_;
};

/// Backward light cone Q(x, t) = {(s, y): 0 <= s <= t, |y - x| <= t - s}.
struct ConeRegion {
    LatticePoint apex;

    bool contains(const NoiseCell& c) const { return in_cone(c, apex); }
    double area(double h) const { return (apex.n * h) * (apex.n * h); }
    /// Cells of the cone ordered by (n, m).
    std::vector<NoiseCell> cells() const;
};

inline double cone_area(double t) { return t * t; }
inline double shell_area(double t_inner, double t_outer) { return t_outer * t_outer - t_inner * t_inner; }

} // namespace wavelab
