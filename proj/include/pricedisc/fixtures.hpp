#pragma once

#include <cstdint>
#include <random>

#include "pricedisc/market.hpp"
#include "pricedisc/mhr.hpp"

namespace pricedisc::fixtures {

/// Values {1,2,3}; type t is a pointmass at t; uniform prior.
template <class Scalar>
BasicMarket<Scalar> pointmass_123()
{
    Vector<Scalar> v(3);
    v << Scalar(1), Scalar(2), Scalar(3);
    const auto g = ValueGrid<Scalar>::from_values(v);
    std::vector<BasicDistribution<Scalar>> types;
    for (Index t = 0; t < 3; ++t) types.push_back(BasicDistribution<Scalar>::pointmass(g, t));
    return BasicMarket<Scalar>(std::move(types), Vector<Scalar>::Constant(3, Scalar(1) / Scalar(3)));
}

/// Same values; type t puts mass z on t and (1-z)/2 on each other value.
template <class Scalar>
BasicMarket<Scalar> noisy_123(const Scalar& z)
{
    Vector<Scalar> v(3);
    v << Scalar(1), Scalar(2), Scalar(3);
    const auto g = ValueGrid<Scalar>::from_values(v);
    const Scalar off = (Scalar(1) - z) / Scalar(2);
    std::vector<BasicDistribution<Scalar>> types;
    for (Index t = 0; t < 3; ++t) {
        Vector<Scalar> pmf = Vector<Scalar>::Constant(3, off);
        pmf(t) = z;
        types.emplace_back(g, std::move(pmf));
    }
    return BasicMarket<Scalar>(std::move(types), Vector<Scalar>::Constant(3, Scalar(1) / Scalar(3)));
}

/// Two types on {1,2,3}: uniform over {1,2}, and a pointmass at 3.
template <class Scalar>
BasicMarket<Scalar> two_type_line()
{
    Vector<Scalar> v(3);
    v << Scalar(1), Scalar(2), Scalar(3);
    const auto g = ValueGrid<Scalar>::from_values(v);
    Vector<Scalar> low(3);
    low << Scalar(1) / Scalar(2), Scalar(1) / Scalar(2), Scalar(0);
    std::vector<BasicDistribution<Scalar>> types{BasicDistribution<Scalar>(g, low),
                                                 BasicDistribution<Scalar>::pointmass(g, 2)};
    return BasicMarket<Scalar>(std::move(types), Vector<Scalar>::Constant(2, Scalar(1) / Scalar(2)));
}

/// Values {1/2, 1}, one type with Pr[1/2] = 1/2 + delta.
Market near_equal_revenue(double delta);

/// Scaled grid {1/T, ..., 1}; type t is a pointmass at (t+1)/T.
Market scaled_pointmass(Index T);

/// Scaled grid of size 4; a pointmass at 1/4 and a pointmass at 1. The
/// optimal consumer-surplus segment sits exactly on the tie between the two
/// prices.
Market plateau();

/// A random MHR-like distribution on the scaled grid, drawn by discretizing
/// uniform, truncated exponential and truncated normal laws (occasionally a
/// pointmass) and rejecting non-MHR-like results.
Distribution random_mhr_like(std::mt19937_64& rng, Index V, const MhrParams& params = {});

/// T random MHR-like types on a scaled grid with a uniform prior.
Market random_mhr_market(std::mt19937_64& rng, Index T, Index V);

/// Random market with arbitrary pmfs (no MHR requirement) and a random
/// interior prior.
Market random_market(std::mt19937_64& rng, Index T, Index V);

} // namespace pricedisc::fixtures
