#include "wavelab/lattice.hpp"

#include "wavelab/error.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <sstream>

namespace wavelab {

bool NoiseCell::well_formed() const
{
    if (kind == CellKind::BaseTriangle)
        return n == 0 && (m & 1) != 0;
    return n >= 1 && ((n + m) & 1) != 0;
}

int lattice_index(double value, double h, const char* what)
{
    const double ratio = value / h;
    const double k = std::round(ratio);
    if (!std::isfinite(ratio) || std::abs(ratio - k) > 1e-9 * std::max(1.0, std::abs(ratio)) ||
        std::abs(k) > INT_MAX / 4) {
        std::ostringstream os;
        os << what << " = " << value << " is not an integer multiple of h = " << h;
        throw AlignmentError(os.str());
    }
    return static_cast<int>(k);
}

LatticeSpec::LatticeSpec(double h, int levels, int m_lo, int m_hi)
    : h_(h), levels_(levels), m_lo_(m_lo), m_hi_(m_hi)
{
    offsets_.reserve(static_cast<std::size_t>(levels) + 2);
    offsets_.push_back(0);
    for (int n = 0; n <= levels; ++n)
        offsets_.push_back(offsets_.back() + static_cast<std::size_t>(row_count(n)));
}

LatticeSpec LatticeSpec::create(double h, double t_max, double x_base_lo, double x_base_hi)
{
    if (!(h > 0) || !std::isfinite(h))
        throw ConfigError("lattice step h must be positive and finite");
    if (!(t_max > 0))
        throw ConfigError("t_max must be positive");
    int levels = 0;
    int m_lo = 0;
    int m_hi = 0;
    try {
        levels = lattice_index(t_max, h, "t_max");
        m_lo = lattice_index(x_base_lo, h, "x_base_lo");
        m_hi = lattice_index(x_base_hi, h, "x_base_hi");
    } catch (const AlignmentError& e) {
        throw ConfigError(e.what());
    }
    LatticeSpec spec(h, levels, m_lo, m_hi);
    // The top level must still hold at least one field point.
    if (m_lo + 2 * levels > m_hi || spec.row_first(levels) > spec.row_last(levels)) {
        std::ostringstream os;
        os << "empty trapezoid: base [" << x_base_lo << ", " << x_base_hi << "] is narrower than 2 t_max = "
           << 2 * t_max;
        throw ConfigError(os.str());
    }
    return spec;
}

LatticeSpec LatticeSpec::covering(double h, const std::vector<LatticePoint>& points)
{
    if (points.empty())
        throw ConfigError("covering lattice needs at least one point");
    int levels = 1;
    int lo = INT_MAX;
    int hi = INT_MIN;
    for (const auto& p : points) {
        if (((p.n + p.m) & 1) != 0 || p.n < 0)
            throw AlignmentError("covering lattice: point of wrong parity");
        levels = std::max(levels, p.n);
    }
    for (const auto& p : points) {
        lo = std::min(lo, p.m - p.n);
        hi = std::max(hi, p.m + p.n);
    }
    // Widen so the top level is reachable from the base on both sides.
    const int width = std::max(hi - lo, 2 * levels);
    hi = lo + width;
    return create(h, levels * h, lo * h, hi * h);
}

bool LatticeSpec::contains(LatticePoint p) const
{
    return p.n >= 0 && p.n <= levels_ && ((p.n + p.m) & 1) == 0 && p.m >= m_lo_ + p.n && p.m <= m_hi_ - p.n;
}

bool LatticeSpec::contains(const NoiseCell& c) const
{
    return c.well_formed() && contains(c.top());
}

LatticePoint LatticeSpec::align(double t, double x) const
{
    const LatticePoint p{lattice_index(t, h_, "t"), lattice_index(x, h_, "x")};
    if (((p.n + p.m) & 1) != 0) {
        std::ostringstream os;
        os << "(t, x) = (" << t << ", " << x << ") has odd lattice parity";
        throw AlignmentError(os.str());
    }
    return p;
}

std::vector<NoiseCell> LatticeSpec::cells() const
{
    std::vector<NoiseCell> out;
    for (int m = m_lo_ + 1; m <= m_hi_ - 1; ++m)
        if ((m & 1) != 0)
            out.push_back(NoiseCell::triangle(m));
    for (int n = 1; n < levels_; ++n)
        for (int m = m_lo_ + n + 1; m <= m_hi_ - n - 1; ++m)
            if (((n + m) & 1) != 0)
                out.push_back(NoiseCell::diamond(n, m));
    return out;
}

std::vector<NoiseCell> ConeRegion::cells() const
{
    std::vector<NoiseCell> out;
    const int top = apex.n;
    for (int m = apex.m - top + 1; m <= apex.m + top - 1; m += 2)
        out.push_back(NoiseCell::triangle(m));
    for (int n = 1; n < top; ++n) {
        const int w = top - n - 1;
        for (int m = apex.m - w; m <= apex.m + w; m += 2)
            out.push_back(NoiseCell::diamond(n, m));
    }
    return out;
}

} // namespace wavelab
