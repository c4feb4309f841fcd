#pragma once

#include <initializer_list>
#include <vector>

#include "pricedisc/distribution.hpp"

namespace testing_helpers {

using pricedisc::Index;
using pricedisc::Rational;

inline Rational R(long long n, long long d = 1) { return Rational(n, d); }

template <class Scalar>
pricedisc::Vector<Scalar> vec(std::initializer_list<Scalar> xs)
{
    pricedisc::Vector<Scalar> v(static_cast<Index>(xs.size()));
    Index i = 0;
    for (const auto& x : xs) v(i++) = x;
    return v;
}

inline pricedisc::Vector<double> vecd(std::initializer_list<double> xs) { return vec<double>(xs); }
inline pricedisc::Vector<Rational> vecr(std::initializer_list<Rational> xs) { return vec<Rational>(xs); }

inline pricedisc::Distribution dist_on(const pricedisc::Grid& g, std::initializer_list<double> pmf)
{
    return pricedisc::Distribution(g, vecd(pmf));
}

inline pricedisc::Grid grid_of(std::initializer_list<double> values)
{
    return pricedisc::Grid::from_values(vecd(values));
}

} // namespace testing_helpers
