#pragma once

#include <compare>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>

namespace pricedisc {

/// Exact rational scalar usable inside Eigen matrices.
///
/// Thin value wrapper over boost's cpp_rational with expression templates
/// disabled; the wrapper keeps boost's generic constructors out of Eigen's
/// scalar-promotion machinery.
class Rational {
public:
    using Impl = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

    Rational() = default;
    template <std::integral I>
    Rational(I v) : v_(static_cast<long long>(v)) {}
    Rational(long long num, long long den);
    explicit Rational(const Impl& v) : v_(v) {}
    /// Exact binary value of a double.
    static Rational from_double(double d);

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(a.v_ + b.v_); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(a.v_ - b.v_); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(a.v_ * b.v_); }
    friend Rational operator/(const Rational& a, const Rational& b) { return Rational(a.v_ / b.v_); }
    Rational operator-() const { return Rational(-v_); }
    Rational& operator+=(const Rational& b) { v_ += b.v_; return *this; }
    Rational& operator-=(const Rational& b) { v_ -= b.v_; return *this; }
    Rational& operator*=(const Rational& b) { v_ *= b.v_; return *this; }
    Rational& operator/=(const Rational& b) { v_ /= b.v_; return *this; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        if (a.v_ < b.v_) return std::strong_ordering::less;
        if (a.v_ == b.v_) return std::strong_ordering::equal;
        return std::strong_ordering::greater;
    }

    explicit operator double() const { return v_.convert_to<double>(); }
    const Impl& impl() const { return v_; }
    /// "n/d" or "n" when the denominator is one.
    std::string str() const;

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    Impl v_{0};
};

inline Rational abs(const Rational& r) { return r < Rational(0) ? -r : r; }

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using Index = Eigen::Index;

/// Per-scalar comparison tolerances. Rationals compare exactly.
template <class Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    /// Revenue ties, on-grid price lookup.
    static double tie_tolerance() { return 1e-12; }
    /// Pmf / simplex normalization.
    static double sum_tolerance() { return 1e-12; }
    /// Simplex pivoting and feasibility.
    static double lp_tolerance() { return 1e-10; }
    /// Segments lighter than this are treated as absent.
    static double segment_weight_floor() { return 1e-10; }
    static double to_double(double v) { return v; }
    static double from_double(double v) { return v; }
};

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static Rational tie_tolerance() { return Rational(0); }
    static Rational sum_tolerance() { return Rational(0); }
    static Rational lp_tolerance() { return Rational(0); }
    static Rational segment_weight_floor() { return Rational(0); }
    static double to_double(const Rational& v) { return static_cast<double>(v); }
    static Rational from_double(double v) { return Rational::from_double(v); }
};

template <class Scalar>
double to_double(const Scalar& v)
{
    return ScalarTraits<Scalar>::to_double(v);
}

/// Parses "3", "-0.25", "1e-3" or "1/6". Decimal strings are parsed exactly
/// for rationals.
template <class Scalar>
Scalar parse_scalar(std::string_view text);

template <>
double parse_scalar<double>(std::string_view text);
template <>
Rational parse_scalar<Rational>(std::string_view text);

template <class To, class From>
Vector<To> cast_vector(const Vector<From>& v)
{
    Vector<To> out(v.size());
    for (Index i = 0; i < v.size(); ++i) {
        if constexpr (std::is_same_v<To, double>)
            out(i) = to_double(v(i));
        else if constexpr (std::is_same_v<From, double>)
            out(i) = ScalarTraits<To>::from_double(v(i));
        else
            out(i) = static_cast<To>(v(i));
    }
    return out;
}

template <class To, class From>
Matrix<To> cast_matrix(const Matrix<From>& m)
{
    Matrix<To> out(m.rows(), m.cols());
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) {
            if constexpr (std::is_same_v<To, double>)
                out(i, j) = to_double(m(i, j));
            else if constexpr (std::is_same_v<From, double>)
                out(i, j) = ScalarTraits<To>::from_double(m(i, j));
            else
                out(i, j) = static_cast<To>(m(i, j));
        }
    return out;
}

} // namespace pricedisc

namespace Eigen {
template <>
struct NumTraits<pricedisc::Rational> : GenericNumTraits<pricedisc::Rational> {
    using Real = pricedisc::Rational;
    using NonInteger = pricedisc::Rational;
    using Nested = pricedisc::Rational;
    using Literal = pricedisc::Rational;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 10,
        AddCost = 20,
        MulCost = 40
    };
    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline Real highest() { return Real(1000000000); }
    static inline Real lowest() { return Real(-1000000000); }
    static inline int digits10() { return 0; }
};
} // namespace Eigen
