#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "pucci/errors.hpp"

namespace pucci {

/// Exact rational with int64 numerator/denominator, always normalized
/// (den > 0, gcd = 1). Used where set-measure comparisons must be exact:
/// densities and the covering-lemma verdict compare integer cell counts
/// against sigma by cross-multiplication, never through floating point.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
        if (den == 0) throw ContractViolation("Rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    /// Exact conversion of a short decimal literal like "0.3" or "9/10".
    static Rational parse(const std::string& text);

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
};

/// a < b exactly, via 128-bit cross multiplication.
inline bool rational_lt(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}

/// count_a * mult_a <= sigma * count_b * mult_b, exactly.
inline bool counts_leq_scaled(std::int64_t count_a, std::int64_t mult_a, const Rational& sigma,
                              std::int64_t count_b, std::int64_t mult_b) {
    const __int128 lhs = static_cast<__int128>(count_a) * mult_a * sigma.den;
    const __int128 rhs = static_cast<__int128>(count_b) * mult_b * sigma.num;
    return lhs <= rhs;
}

/// count_a > sigma * count_b, exactly (strict density test).
inline bool count_exceeds_fraction(std::int64_t count_a, const Rational& sigma, std::int64_t count_b) {
    return static_cast<__int128>(count_a) * sigma.den > static_cast<__int128>(count_b) * sigma.num;
}

}  // namespace pucci
