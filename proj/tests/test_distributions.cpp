#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "helpers.hpp"
#include "pricedisc/mhr.hpp"

using namespace pricedisc;
using namespace testing_helpers;

namespace {

// Tail sum computed independently of the library.
double tail(const std::vector<double>& pmf, size_t i)
{
    double s = 0;
    for (size_t j = i; j < pmf.size(); ++j) s += pmf[j];
    return s;
}

Distribution random_dist(std::mt19937_64& rng, const Grid& g)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vector<double> pmf(g.size());
    for (Index i = 0; i < g.size(); ++i) pmf(i) = u(rng) < 0.2 ? 0.0 : u(rng);
    if (pmf.sum() == 0) pmf(0) = 1;
    pmf /= pmf.sum();
    return Distribution(g, pmf);
}

using RDist = BasicDistribution<Rational>;

RDist rdist(const ValueGrid<Rational>& g, std::initializer_list<Rational> pmf) { return RDist(g, vecr(pmf)); }

} // namespace

TEST_CASE("grids")
{
    const auto g = Grid::scaled(4);
    CHECK(g.is_scaled());
    CHECK(g[0] == 0.25);
    CHECK(g[3] == 1.0);
    CHECK(g.index_of(0.75) == 2);
    CHECK_THROWS_AS(g.index_of(0.3), DomainError);
    CHECK_THROWS_AS(Grid::from_values(vecd({1, 1})), DomainError);
    CHECK_THROWS_AS(Grid::from_values(vecd({0, 1})), DomainError);
    const auto gr = ValueGrid<Rational>::scaled(3);
    CHECK(gr[0] == R(1, 3));
    CHECK(gr[1] == R(2, 3));
}

TEST_CASE("pmf validation")
{
    const auto g = Grid::scaled(2);
    CHECK_THROWS_AS(dist_on(g, {0.6, 0.6}), DomainError);
    CHECK_THROWS_AS(dist_on(g, {1.1, -0.1}), DomainError);
    CHECK_THROWS_AS(dist_on(g, {1.0}), DomainError);
}

TEST_CASE("quantile")
{
    const auto g = ValueGrid<Rational>::from_values(vecr({R(1), R(2), R(3)}));
    const auto u = rdist(g, {R(1, 3), R(1, 3), R(1, 3)});
    CHECK(quantile(u, R(2)) == R(2, 3));
    CHECK_THROWS_AS(quantile(u, R(5, 2)), DomainError);

    const auto s = Grid::scaled(3);
    CHECK(quantile(Distribution::pointmass(s, 2), 1.0) == 1.0);
    CHECK(quantile(dist_on(s, {0.5, 0, 0.5}), s[1]) == doctest::Approx(0.5));
}

TEST_CASE("revenue and surplus")
{
    const auto g = ValueGrid<Rational>::from_values(vecr({R(1), R(2), R(3)}));
    const auto u = rdist(g, {R(1, 3), R(1, 3), R(1, 3)});
    CHECK(revenue(u, R(2)) == R(4, 3));
    CHECK(consumer_surplus(u, R(2)) == R(1, 3));
    const auto post = rdist(g, {R(1, 2), R(1, 6), R(1, 3)});
    CHECK(revenue(post, R(1)) == R(1));
    CHECK(consumer_surplus(post, R(1)) == R(5, 6));
    CHECK(social_welfare(post, R(1)) == R(11, 6));
    CHECK(expected_value(post) == R(11, 6));

    const auto s = Grid::scaled(3);
    const auto low = dist_on(s, {0.5, 0.5, 0});
    CHECK(revenue(low, 1.0) == 0.0);
    CHECK(consumer_surplus(low, 1.0) == 0.0);
}

TEST_CASE("monopoly price")
{
    const auto g = ValueGrid<Rational>::from_values(vecr({R(1), R(2), R(3)}));
    CHECK(monopoly_price(rdist(g, {R(1, 3), R(1, 3), R(1, 3)})) == R(2));
    const auto eq = rdist(g, {R(1, 2), R(1, 6), R(1, 3)});
    CHECK(monopoly_price(eq, TieBreak::low) == R(1));
    CHECK(monopoly_price(eq, TieBreak::high) == R(3));
    const auto s = Grid::scaled(5);
    for (Index i = 0; i < 5; ++i) CHECK(monopoly_index(Distribution::pointmass(s, i)) == i);
}

TEST_CASE("mixture")
{
    const auto g = ValueGrid<Rational>::from_values(vecr({R(1), R(2), R(3)}));
    std::vector<RDist> pm;
    for (Index i = 0; i < 3; ++i) pm.push_back(RDist::pointmass(g, i));
    const auto u = mixture<Rational>(vecr({R(1, 3), R(1, 3), R(1, 3)}), pm);
    CHECK(u.pmf() == vecr({R(1, 3), R(1, 3), R(1, 3)}));
    CHECK(mixture<Rational>(vecr({R(0), R(1), R(0)}), pm).pmf() == pm[1].pmf());

    // Noisy types with z = 0.8.
    std::vector<RDist> noisy;
    const Rational z(4, 5), off = (R(1) - z) / R(2);
    noisy.push_back(rdist(g, {z, off, off}));
    noisy.push_back(rdist(g, {off, z, off}));
    noisy.push_back(rdist(g, {off, off, z}));
    CHECK(mixture<Rational>(vecr({R(1), R(0), R(0)}), noisy).pmf() == vecr({R(4, 5), R(1, 10), R(1, 10)}));

    const auto other = ValueGrid<Rational>::scaled(3);
    std::vector<RDist> mixed{pm[0], RDist::pointmass(other, 0)};
    CHECK_THROWS_AS(mixture<Rational>(vecr({R(1, 2), R(1, 2)}), mixed), DomainError);
}

TEST_CASE("ks distance")
{
    const auto g = grid_of({0.5, 1.0});
    const auto a = dist_on(g, {0.6, 0.4});
    CHECK(ks_distance(a, a) == 0.0);
    CHECK(ks_distance(Distribution::pointmass(g, 1), Distribution::pointmass(g, 0)) == 1.0);
    CHECK(ks_distance(a, dist_on(g, {0.5, 0.5})) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("revenue curve")
{
    const auto s = Grid::scaled(3);
    const auto pm = revenue_curve(Distribution::pointmass(s, 2));
    // Every price sells with probability one.
    for (const auto& pt : pm) CHECK(pt.quantile == 1.0);
    CHECK(pm.back().revenue == 1.0);

    const auto g = ValueGrid<Rational>::from_values(vecr({R(1), R(2), R(3)}));
    const auto c = revenue_curve(rdist(g, {R(1, 3), R(1, 3), R(1, 3)}));
    REQUIRE(c.size() == 3);
    CHECK((c[0].quantile == R(1, 3) && c[0].revenue == R(1)));
    CHECK((c[1].quantile == R(2, 3) && c[1].revenue == R(4, 3)));
    CHECK((c[2].quantile == R(1) && c[2].revenue == R(1)));

    const auto gs = ValueGrid<Rational>::scaled(3);
    const auto d = revenue_curve(rdist(gs, {R(1, 2), R(0), R(1, 2)}));
    CHECK((d[0].quantile == R(1, 2) && d[0].revenue == R(1, 3)));
    CHECK((d[1].quantile == R(1, 2) && d[1].revenue == R(1, 2)));
    CHECK((d[2].quantile == R(1) && d[2].revenue == R(1, 3)));
}

TEST_CASE("mhr-like check")
{
    for (Index V = 1; V <= 64; ++V) {
        const auto g = Grid::scaled(V);
        for (Index i = 0; i < V; ++i) {
            const auto r = check_mhr_like(Distribution::pointmass(g, i));
            REQUIRE(r.mhr_like());
        }
    }
    const auto two = Grid::scaled(2);
    const auto u = check_mhr_like(dist_on(two, {0.5, 0.5}));
    CHECK_FALSE(u.strong_concave);
    CHECK_FALSE(u.mhr_like());

    const auto s = Grid::scaled(3);
    const auto ironed = check_mhr_like(dist_on(s, {1.0 / 3, 1.0 / 6, 0.5}));
    CHECK(ironed.concave);
    const auto dip = check_mhr_like(dist_on(s, {0.5, 0, 0.5}));
    CHECK_FALSE(dip.concave);
    CHECK(dip.worst_margins[0] < 0);

    CHECK_THROWS_AS(check_mhr_like(dist_on(grid_of({1, 2}), {0.5, 0.5})), DomainError);

    MhrParams loose;
    loose.strong_concavity = 0.0;
    CHECK(check_mhr_like(dist_on(two, {0.5, 0.5}), loose).strong_concave);
}

TEST_CASE("properties on random distributions")
{
    std::mt19937_64 rng(11);
    const auto g = Grid::scaled(6);
    for (int trial = 0; trial < 200; ++trial) {
        const auto d = random_dist(rng, g);
        std::vector<double> pmf(d.pmf().data(), d.pmf().data() + d.size());
        const auto q = d.quantiles();
        for (Index i = 0; i < g.size(); ++i) {
            CHECK(q(i) == doctest::Approx(i == 0 ? 1.0 : tail(pmf, static_cast<size_t>(i))).epsilon(1e-12));
            if (i > 0) CHECK(q(i - 1) >= q(i));
            CHECK(social_welfare_at(d, i) == revenue_at(d, i) + consumer_surplus_at(d, i));
        }
        const Index m = monopoly_index(d);
        for (Index i = 0; i < g.size(); ++i) CHECK(revenue_at(d, m) >= revenue_at(d, i));

        // Mixture linearity.
        std::vector<Distribution> comps{random_dist(rng, g), random_dist(rng, g), random_dist(rng, g)};
        Vector<double> w = Vector<double>::Random(3).cwiseAbs() + Vector<double>::Constant(3, 0.01);
        w /= w.sum();
        const auto mix = mixture<double>(w, comps);
        for (Index i = 0; i < g.size(); ++i) {
            double lin = 0;
            for (Index t = 0; t < 3; ++t) lin += w(t) * revenue_at(comps[static_cast<size_t>(t)], i);
            CHECK(std::abs(revenue_at(mix, i) - lin) <= 1e-12);
        }

        // Metric axioms.
        const auto &a = comps[0], &b = comps[1], &c = comps[2];
        CHECK(ks_distance(a, b) == ks_distance(b, a));
        CHECK(ks_distance(a, c) <= ks_distance(a, b) + ks_distance(b, c) + 1e-15);
    }
}

TEST_CASE("upper hull")
{
    const auto h = upper_concave_hull({{1.0, 1.0 / 3}, {0.5, 1.0 / 3}, {0.5, 0.5}});
    REQUIRE(h.size() == 3);
    CHECK(h[0] == std::pair(0.0, 0.0));
    CHECK(h[1] == std::pair(0.5, 0.5));
    CHECK(hull_value(h, 2.0 / 3) == doctest::Approx(0.5 - (2.0 / 3 - 0.5) / 3));
}
