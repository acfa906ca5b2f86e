#pragma once

#include <cmath>
#include <string>

namespace wavelab {

/// Globally Lipschitz nonlinearity sigma(u).
class SigmaSpec {
public:
    enum class Kind { Constant, Linear, Affine, Sine };

    /// sigma(u) = c
    static SigmaSpec constant(double c) { return {Kind::Constant, c, 0.0}; }
    /// sigma(u) = lambda u (hyperbolic Anderson model)
    static SigmaSpec linear(double lambda) { return {Kind::Linear, lambda, 0.0}; }
    /// sigma(u) = a + b u
    static SigmaSpec affine(double a, double b) { return {Kind::Affine, a, b}; }
    /// sigma(u) = a sin(u)
    static SigmaSpec sine(double a) { return {Kind::Sine, a, 0.0}; }

    /// Parses "const:c", "linear:lambda", "affine:a,b" or "sine:a". Throws ConfigError.
    static SigmaSpec parse(const std::string& text);

    double operator()(double u) const noexcept
    {
        switch (kind_) {
        case Kind::Constant:
            return a_;
        case Kind::Linear:
            return a_ * u;
        case Kind::Affine:
            return a_ + b_ * u;
        case Kind::Sine:
            return a_ * std::sin(u);
        }
        return 0.0;
    }

    Kind kind() const { return kind_; }
    double lipschitz_bound() const;
    bool is_constant() const { return kind_ == Kind::Constant || (kind_ == Kind::Affine && b_ == 0.0); }
    /// Canonical text form, accepted by parse().
    std::string describe() const;

    friend bool operator==(const SigmaSpec&, const SigmaSpec&) = default;

private:
    SigmaSpec(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

    Kind kind_;
    double a_;
    double b_;
};

} // namespace wavelab
