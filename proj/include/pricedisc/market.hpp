#pragma once

#include <vector>

#include "pricedisc/distribution.hpp"

namespace pricedisc {

/// Type-conditional value distributions plus a prior over types.
template <class Scalar>
class BasicMarket {
public:
    BasicMarket() = default;

    BasicMarket(std::vector<BasicDistribution<Scalar>> types, Vector<Scalar> prior)
        : types_(std::move(types)), prior_(std::move(prior))
    {
        if (types_.empty()) throw DomainError("market needs at least one type");
        if (prior_.size() != static_cast<Index>(types_.size()))
            throw DomainError("prior length does not match the number of types");
        check_simplex(prior_, "type prior");
        grid_ = types_.front().grid();
        for (const auto& d : types_)
            if (!(d.grid() == grid_)) throw DomainError("all type distributions must share one grid");
        const Index T = num_types(), V = num_values();
        rev_.resize(T, V);
        cs_.resize(T, V);
        pmf_.resize(T, V);
        for (Index t = 0; t < T; ++t) {
            const auto& d = types_[static_cast<size_t>(t)];
            pmf_.row(t) = d.pmf().transpose();
            for (Index i = 0; i < V; ++i) {
                rev_(t, i) = revenue_at(d, i);
                cs_(t, i) = consumer_surplus_at(d, i);
            }
        }
    }

    Index num_types() const { return static_cast<Index>(types_.size()); }
    Index num_values() const { return grid_.size(); }
    const ValueGrid<Scalar>& grid() const { return grid_; }
    const std::vector<BasicDistribution<Scalar>>& types() const { return types_; }
    const BasicDistribution<Scalar>& type(Index t) const { return types_.at(static_cast<size_t>(t)); }
    const Vector<Scalar>& prior() const { return prior_; }

    /// Rev(F(t), p_i), one row per type.
    const Matrix<Scalar>& revenue_table() const { return rev_; }
    const Matrix<Scalar>& surplus_table() const { return cs_; }
    const Matrix<Scalar>& pmf_table() const { return pmf_; }

    BasicDistribution<Scalar> posterior(const Vector<Scalar>& x) const
    {
        return mixture<Scalar>(x, std::span<const BasicDistribution<Scalar>>(types_));
    }

    BasicDistribution<Scalar> prior_distribution() const { return posterior(prior_); }

    /// Revenue of every price under the posterior at x.
    Vector<Scalar> revenues_at(const Vector<Scalar>& x) const { return rev_.transpose() * x; }
    Vector<Scalar> surpluses_at(const Vector<Scalar>& x) const { return cs_.transpose() * x; }

    bool prior_is_uniform() const
    {
        using std::abs;
        const Scalar u = Scalar(1) / Scalar(num_types());
        for (Index t = 0; t < num_types(); ++t)
            if (abs(prior_(t) - u) > ScalarTraits<Scalar>::sum_tolerance()) return false;
        return true;
    }

    static void check_simplex(const Vector<Scalar>& x, const char* what)
    {
        using std::abs;
        const Scalar tol = ScalarTraits<Scalar>::sum_tolerance();
        for (Index i = 0; i < x.size(); ++i)
            if (x(i) < -tol) throw DomainError(std::string(what) + " has a negative entry");
        if (abs(x.sum() - Scalar(1)) > tol) throw DomainError(std::string(what) + " does not sum to one");
    }

private:
    ValueGrid<Scalar> grid_;
    std::vector<BasicDistribution<Scalar>> types_;
    Vector<Scalar> prior_;
    Matrix<Scalar> rev_, cs_, pmf_;
};

using Market = BasicMarket<double>;

template <class To, class From>
BasicMarket<To> cast_market(const BasicMarket<From>& m)
{
    const Vector<To> values = cast_vector<To>(m.grid().values());
    const ValueGrid<To> grid = m.grid().is_scaled() ? ValueGrid<To>::scaled(m.num_values())
                                                    : ValueGrid<To>::from_values(values);
    std::vector<BasicDistribution<To>> types;
    for (const auto& d : m.types()) {
        Vector<To> pmf = cast_vector<To>(d.pmf());
        if constexpr (ScalarTraits<To>::exact) {
            // Absorb the binary rounding of a double pmf in the last entry.
            To rest = To(1);
            for (Index i = 0; i + 1 < pmf.size(); ++i) rest -= pmf(i);
            pmf(pmf.size() - 1) = rest;
        }
        types.emplace_back(grid, std::move(pmf));
    }
    Vector<To> prior = cast_vector<To>(m.prior());
    if constexpr (ScalarTraits<To>::exact) {
        To rest = To(1);
        for (Index i = 0; i + 1 < prior.size(); ++i) rest -= prior(i);
        prior(prior.size() - 1) = rest;
    }
    return BasicMarket<To>(std::move(types), std::move(prior));
}

} // namespace pricedisc
