#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pricedisc/errors.hpp"
#include "pricedisc/scalar.hpp"

namespace pricedisc {

enum class TieBreak { low, high };

/// Ordered list of strictly positive values. A scaled grid holds exactly
/// {1/V, 2/V, ..., 1}.
template <class Scalar>
class ValueGrid {
public:
    ValueGrid() = default;

    static ValueGrid scaled(Index V)
    {
        if (V < 1) throw DomainError("scaled grid needs V >= 1");
        ValueGrid g;
        g.values_.resize(V);
        for (Index i = 0; i < V; ++i) g.values_(i) = Scalar(i + 1) / Scalar(V);
        g.scaled_ = true;
        return g;
    }

    static ValueGrid from_values(Vector<Scalar> values)
    {
        if (values.size() < 1) throw DomainError("value grid must be non-empty");
        for (Index i = 0; i < values.size(); ++i) {
            if (!(values(i) > Scalar(0))) throw DomainError("grid values must be strictly positive");
            if (i > 0 && !(values(i) > values(i - 1)))
                throw DomainError("grid values must be strictly increasing");
        }
        ValueGrid g;
        g.values_ = std::move(values);
        return g;
    }

    Index size() const { return values_.size(); }
    bool is_scaled() const { return scaled_; }
    const Vector<Scalar>& values() const { return values_; }
    const Scalar& operator[](Index i) const { return values_(i); }

    /// Index of an on-grid price; throws DomainError otherwise.
    Index index_of(const Scalar& price) const
    {
        using std::abs;
        const Scalar tol = ScalarTraits<Scalar>::tie_tolerance();
        for (Index i = 0; i < values_.size(); ++i)
            if (abs(values_(i) - price) <= tol) return i;
        throw DomainError("price " + std::to_string(to_double(price)) + " is not on the value grid");
    }

    friend bool operator==(const ValueGrid& a, const ValueGrid& b)
    {
        return a.scaled_ == b.scaled_ && a.values_.size() == b.values_.size() && a.values_ == b.values_;
    }

private:
    Vector<Scalar> values_;
    bool scaled_ = false;
};

/// Probability mass function over a value grid.
template <class Scalar>
class BasicDistribution {
public:
    BasicDistribution() = default;

    BasicDistribution(ValueGrid<Scalar> grid, Vector<Scalar> pmf) : grid_(std::move(grid)), pmf_(std::move(pmf))
    {
        if (pmf_.size() != grid_.size()) throw DomainError("pmf length does not match grid size");
        const Scalar tol = ScalarTraits<Scalar>::sum_tolerance();
        for (Index i = 0; i < pmf_.size(); ++i)
            if (pmf_(i) < -tol) throw DomainError("pmf entries must be non-negative");
        using std::abs;
        if (abs(pmf_.sum() - Scalar(1)) > tol) throw DomainError("pmf must sum to one");
        if constexpr (!ScalarTraits<Scalar>::exact) pmf_ = pmf_.cwiseMax(Scalar(0));
    }

    /// Rebuilds a pmf from quantiles q(v) = Pr[value >= v] by consecutive
    /// differences. The first quantile is forced to one; differences below
    /// -1e-12 are rejected, smaller negatives clamped and renormalized.
    static BasicDistribution from_quantiles(ValueGrid<Scalar> grid, const Vector<Scalar>& quantiles)
    {
        const Index V = grid.size();
        if (quantiles.size() != V) throw DomainError("quantile vector length does not match grid size");
        Vector<Scalar> pmf(V);
        for (Index i = 0; i < V; ++i) {
            const Scalar upper = i == 0 ? Scalar(1) : quantiles(i);
            const Scalar lower = i + 1 < V ? quantiles(i + 1) : Scalar(0);
            pmf(i) = upper - lower;
        }
        if constexpr (!ScalarTraits<Scalar>::exact) {
            for (Index i = 0; i < V; ++i) {
                if (pmf(i) < -1e-12) throw InternalError("quantiles are not monotone");
                if (pmf(i) < 0) pmf(i) = 0;
            }
            pmf /= pmf.sum();
        } else {
            for (Index i = 0; i < V; ++i)
                if (pmf(i) < Scalar(0)) throw InternalError("quantiles are not monotone");
        }
        return BasicDistribution(std::move(grid), std::move(pmf));
    }

    static BasicDistribution pointmass(ValueGrid<Scalar> grid, Index at)
    {
        Vector<Scalar> pmf = Vector<Scalar>::Zero(grid.size());
        if (at < 0 || at >= grid.size()) throw DomainError("pointmass index out of range");
        pmf(at) = Scalar(1);
        return BasicDistribution(std::move(grid), std::move(pmf));
    }

    const ValueGrid<Scalar>& grid() const { return grid_; }
    const Vector<Scalar>& pmf() const { return pmf_; }
    Index size() const { return pmf_.size(); }

    /// Pr[v >= grid[i]].
    Scalar quantile_at(Index i) const
    {
        if (i == 0) return Scalar(1);
        const Scalar q = pmf_.tail(pmf_.size() - i).sum();
        return q > Scalar(1) ? Scalar(1) : q;
    }

    Vector<Scalar> quantiles() const
    {
        Vector<Scalar> q(pmf_.size());
        Scalar acc(0);
        for (Index i = pmf_.size() - 1; i >= 0; --i) {
            acc += pmf_(i);
            q(i) = acc > Scalar(1) ? Scalar(1) : acc;
        }
        q(0) = Scalar(1);
        return q;
    }

private:
    ValueGrid<Scalar> grid_;
    Vector<Scalar> pmf_;
};

using Grid = ValueGrid<double>;
using Distribution = BasicDistribution<double>;

template <class Scalar>
Scalar quantile(const BasicDistribution<Scalar>& d, const Scalar& price)
{
    return d.quantile_at(d.grid().index_of(price));
}

template <class Scalar>
Scalar revenue_at(const BasicDistribution<Scalar>& d, Index i)
{
    return d.grid()[i] * d.quantile_at(i);
}

template <class Scalar>
Scalar consumer_surplus_at(const BasicDistribution<Scalar>& d, Index i)
{
    Scalar cs(0);
    for (Index j = i; j < d.size(); ++j) cs += d.pmf()(j) * (d.grid()[j] - d.grid()[i]);
    return cs;
}

template <class Scalar>
Scalar social_welfare_at(const BasicDistribution<Scalar>& d, Index i)
{
    return revenue_at(d, i) + consumer_surplus_at(d, i);
}

template <class Scalar>
Scalar revenue(const BasicDistribution<Scalar>& d, const Scalar& price)
{
    return revenue_at(d, d.grid().index_of(price));
}

template <class Scalar>
Scalar consumer_surplus(const BasicDistribution<Scalar>& d, const Scalar& price)
{
    return consumer_surplus_at(d, d.grid().index_of(price));
}

template <class Scalar>
Scalar social_welfare(const BasicDistribution<Scalar>& d, const Scalar& price)
{
    return social_welfare_at(d, d.grid().index_of(price));
}

template <class Scalar>
Scalar expected_value(const BasicDistribution<Scalar>& d)
{
    return d.pmf().dot(d.grid().values());
}

/// Revenue of every grid price.
template <class Scalar>
Vector<Scalar> revenues(const BasicDistribution<Scalar>& d)
{
    return d.grid().values().cwiseProduct(d.quantiles());
}

/// Argmax of a revenue vector; candidates within the scalar's tie tolerance
/// of the maximum count as tied.
template <class Scalar>
Index argmax_revenue(const Vector<Scalar>& rev, TieBreak tie = TieBreak::low)
{
    const Scalar best = rev.maxCoeff();
    const Scalar tol = ScalarTraits<Scalar>::tie_tolerance();
    if (tie == TieBreak::low) {
        for (Index i = 0; i < rev.size(); ++i)
            if (rev(i) >= best - tol) return i;
    } else {
        for (Index i = rev.size() - 1; i >= 0; --i)
            if (rev(i) >= best - tol) return i;
    }
    throw InternalError("argmax over empty revenue vector");
}

template <class Scalar>
Index monopoly_index(const BasicDistribution<Scalar>& d, TieBreak tie = TieBreak::low)
{
    return argmax_revenue<Scalar>(revenues(d), tie);
}

template <class Scalar>
Scalar monopoly_price(const BasicDistribution<Scalar>& d, TieBreak tie = TieBreak::low)
{
    return d.grid()[monopoly_index(d, tie)];
}

/// Convex combination of distributions sharing one grid.
template <class Scalar>
BasicDistribution<Scalar> mixture(const Vector<Scalar>& weights, std::span<const BasicDistribution<Scalar>> dists)
{
    if (weights.size() != static_cast<Index>(dists.size()) || dists.empty())
        throw DomainError("mixture weights do not match the number of distributions");
    const Scalar tol = ScalarTraits<Scalar>::sum_tolerance();
    using std::abs;
    for (Index t = 0; t < weights.size(); ++t)
        if (weights(t) < -tol) throw DomainError("mixture weights must be non-negative");
    if (abs(weights.sum() - Scalar(1)) > tol) throw DomainError("mixture weights must sum to one");
    const auto& grid = dists.front().grid();
    Vector<Scalar> pmf = Vector<Scalar>::Zero(grid.size());
    for (size_t t = 0; t < dists.size(); ++t) {
        if (!(dists[t].grid() == grid)) throw DomainError("mixture components use different grids");
        pmf += weights(static_cast<Index>(t)) * dists[t].pmf();
    }
    return BasicDistribution<Scalar>(grid, std::move(pmf));
}

/// Largest quantile difference over the grid.
template <class Scalar>
Scalar ks_distance(const BasicDistribution<Scalar>& a, const BasicDistribution<Scalar>& b)
{
    if (!(a.grid() == b.grid())) throw DomainError("ks_distance needs a common grid");
    return (a.quantiles() - b.quantiles()).cwiseAbs().maxCoeff();
}

template <class Scalar>
struct RevenuePoint {
    Scalar quantile;
    Scalar revenue;
    Index price_index;
};

/// (quantile, revenue) for every grid price, sorted by increasing quantile
/// (ties by increasing revenue). The origin is implicit.
template <class Scalar>
std::vector<RevenuePoint<Scalar>> revenue_curve(const BasicDistribution<Scalar>& d)
{
    const Vector<Scalar> q = d.quantiles();
    std::vector<RevenuePoint<Scalar>> pts;
    pts.reserve(static_cast<size_t>(d.size()));
    for (Index i = 0; i < d.size(); ++i) pts.push_back({q(i), d.grid()[i] * q(i), i});
    std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        if (a.quantile != b.quantile) return a.quantile < b.quantile;
        return a.revenue < b.revenue;
    });
    return pts;
}

/// Upper concave envelope of (0,0) plus the given points, as hull vertices
/// sorted by x. Used for ironing and the concavity test.
std::vector<std::pair<double, double>> upper_concave_hull(std::vector<std::pair<double, double>> points);

/// Value of a piecewise-linear hull at x (x within the hull's x-range).
double hull_value(const std::vector<std::pair<double, double>>& hull, double x);

} // namespace pricedisc
