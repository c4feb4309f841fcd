#include "pricedisc/scalar.hpp"

#include <charconv>
#include <cmath>

#include "pricedisc/errors.hpp"

namespace pricedisc {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Exact decimal parse: [-]digits[.digits][e[-]digits]
Rational parse_decimal(std::string_view s)
{
    using Int = boost::multiprecision::cpp_int;
    if (s.empty()) throw DomainError("empty number");
    bool negative = false;
    if (s.front() == '-' || s.front() == '+') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    Int mantissa = 0;
    long long exponent = 0;
    bool seen_digit = false;
    bool after_point = false;
    size_t i = 0;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c >= '0' && c <= '9') {
            mantissa = mantissa * 10 + (c - '0');
            if (after_point) --exponent;
            seen_digit = true;
        } else if (c == '.' && !after_point) {
            after_point = true;
        } else {
            break;
        }
    }
    if (!seen_digit) throw DomainError("malformed number '" + std::string(s) + "'");
    if (i < s.size()) {
        if (s[i] != 'e' && s[i] != 'E') throw DomainError("malformed number '" + std::string(s) + "'");
        long long e = 0;
        auto tail = s.substr(i + 1);
        if (!tail.empty() && tail.front() == '+') tail.remove_prefix(1);
        auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), e);
        if (ec != std::errc() || ptr != tail.data() + tail.size())
            throw DomainError("malformed exponent in '" + std::string(s) + "'");
        exponent += e;
    }
    Rational::Impl value(mantissa);
    Int ten_power = boost::multiprecision::pow(Int(10), static_cast<unsigned>(std::llabs(exponent)));
    if (exponent >= 0)
        value *= Rational::Impl(ten_power);
    else
        value /= Rational::Impl(ten_power);
    return Rational(negative ? Rational::Impl(-value) : value);
}

} // namespace

Rational::Rational(long long num, long long den) : v_(num)
{
    if (den == 0) throw DomainError("rational with zero denominator");
    v_ /= Impl(den);
}

Rational Rational::from_double(double d)
{
    if (!std::isfinite(d)) throw DomainError("non-finite value cannot be represented exactly");
    return Rational(Impl(d));
}

std::string Rational::str() const
{
    auto num = boost::multiprecision::numerator(v_);
    auto den = boost::multiprecision::denominator(v_);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

template <>
Rational parse_scalar<Rational>(std::string_view text)
{
    auto s = trim(text);
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return parse_decimal(s);
    Rational num = parse_decimal(trim(s.substr(0, slash)));
    Rational den = parse_decimal(trim(s.substr(slash + 1)));
    if (den == Rational(0)) throw DomainError("zero denominator in '" + std::string(s) + "'");
    return num / den;
}

template <>
double parse_scalar<double>(std::string_view text)
{
    return static_cast<double>(parse_scalar<Rational>(text));
}

} // namespace pricedisc
