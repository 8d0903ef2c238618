#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "uli/error.hpp"

namespace uli {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

/// Parses "num", "num/den" or "-num/den" into a canonical rational.
inline Rational parse_rational(std::string_view text)
{
    auto parse_int = [&](std::string_view part) {
        std::size_t i = 0;
        if (!part.empty() && (part[0] == '-' || part[0] == '+'))
            i = 1;
        if (i == part.size())
            throw Error(ErrorKind::InvalidArgument, "malformed rational '" + std::string(text) + "'");
        for (std::size_t k = i; k < part.size(); ++k)
            if (part[k] < '0' || part[k] > '9')
                throw Error(ErrorKind::InvalidArgument, "malformed rational '" + std::string(text) + "'");
        std::string digits(part[0] == '+' ? part.substr(1) : part);
        return Integer(digits);
    };

    auto trimmed = text;
    while (!trimmed.empty() && trimmed.front() == ' ')
        trimmed.remove_prefix(1);
    while (!trimmed.empty() && trimmed.back() == ' ')
        trimmed.remove_suffix(1);

    const auto slash = trimmed.find('/');
    if (slash == std::string_view::npos)
        return Rational(parse_int(trimmed));
    Integer num = parse_int(trimmed.substr(0, slash));
    Integer den = parse_int(trimmed.substr(slash + 1));
    if (den == 0)
        throw Error(ErrorKind::InvalidArgument, "zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
}

/// Canonical wire form: "n" for integers, "n/d" otherwise.
inline std::string format_rational(const Rational& value)
{
    return value.str();
}

/// Splits a comma-separated list of rationals ("0,1/2,0").
inline std::vector<Rational> parse_rational_list(std::string_view text)
{
    std::vector<Rational> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find(',', start);
        if (end == std::string_view::npos)
            end = text.size();
        out.push_back(parse_rational(text.substr(start, end - start)));
        start = end + 1;
    }
    return out;
}

inline Integer binomial(std::int64_t n, std::int64_t k)
{
    if (k < 0 || n < 0 || k > n)
        return 0;
    Integer result = 1;
    k = std::min(k, n - k);
    for (std::int64_t i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;
    }
    return result;
}

inline Integer factorial(std::int64_t n)
{
    Integer result = 1;
    for (std::int64_t i = 2; i <= n; ++i)
        result *= i;
    return result;
}

/// n (n-1) ... (n-k+1); zero when k > n.
inline Integer falling_factorial(std::int64_t n, std::int64_t k)
{
    Integer result = 1;
    for (std::int64_t i = 0; i < k; ++i)
        result *= n - i;
    return result;
}

/// Integer power with 0^0 = 1.
inline Rational ipow(const Rational& base, std::int64_t exponent)
{
    Rational result = 1;
    Rational b = base;
    auto e = exponent;
    while (e > 0) {
        if (e & 1)
            result *= b;
        b *= b;
        e >>= 1;
    }
    return result;
}

inline Integer numerator(const Rational& value)
{
    return boost::multiprecision::numerator(value);
}

inline Integer denominator(const Rational& value)
{
    return boost::multiprecision::denominator(value);
}

inline Integer lcm(const Integer& a, const Integer& b)
{
    return boost::multiprecision::lcm(a, b);
}

} // namespace uli
