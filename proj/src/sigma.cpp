#include "wavelab/sigma.hpp"

#include "wavelab/error.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace wavelab {

namespace {

double parse_number(const std::string& s, const std::string& context)
{
    double value = 0.0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value))
        throw ConfigError("sigma: cannot parse number '" + s + "' in '" + context + "'");
    return value;
}

} // namespace

SigmaSpec SigmaSpec::parse(const std::string& text)
{
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    const std::string args = colon == std::string::npos ? std::string() : text.substr(colon + 1);
    if (name == "const" || name == "constant")
        return constant(args.empty() ? 1.0 : parse_number(args, text));
    if (name == "linear")
        return linear(args.empty() ? 1.0 : parse_number(args, text));
    if (name == "sine")
        return sine(args.empty() ? 1.0 : parse_number(args, text));
    if (name == "affine") {
        const auto comma = args.find(',');
        if (comma == std::string::npos)
            throw ConfigError("sigma: affine needs two parameters 'affine:a,b'");
        return affine(parse_number(args.substr(0, comma), text), parse_number(args.substr(comma + 1), text));
    }
    throw ConfigError("sigma: unknown variant '" + name + "' (expected const, linear, affine or sine)");
}

double SigmaSpec::lipschitz_bound() const
{
    switch (kind_) {
    case Kind::Constant:
        return 0.0;
    case Kind::Linear:
    case Kind::Sine:
        return std::abs(a_);
    case Kind::Affine:
        return std::abs(b_);
    }
    return 0.0;
}

std::string SigmaSpec::describe() const
{
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
    case Kind::Constant:
        os << "const:" << a_;
        break;
    case Kind::Linear:
        os << "linear:" << a_;
        break;
    case Kind::Affine:
        os << "affine:" << a_ << ',' << b_;
        break;
    case Kind::Sine:
        os << "sine:" << a_;
        break;
    }
    return os.str();
}

} // namespace wavelab
