#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "pricedisc/bandit.hpp"
#include "pricedisc/fixtures.hpp"

using namespace pricedisc;
using namespace testing_helpers;

namespace {

void record_n(ConfidenceState& s, Index v, Index t, int trials, int sales)
{
    for (int i = 0; i < trials; ++i) s.record(v, t, i < sales);
}

// Counts whose empirical quantiles match the market's types.
ConfidenceState planted(const Market& m, int n, double C = 2.0)
{
    ConfidenceState s(m.num_values(), m.num_types(), C);
    for (Index t = 0; t < m.num_types(); ++t)
        for (Index v = 0; v < m.num_values(); ++v)
            record_n(s, v, t, n, static_cast<int>(std::lround(m.type(t).quantile_at(v) * n)));
    return s;
}

} // namespace

TEST_CASE("confidence bounds")
{
    ConfidenceState s(3, 1, 1.0);
    const auto fresh = confidence_bounds(s, 1, 0);
    CHECK(fresh.U_raw == 1.0);
    CHECK(fresh.L_raw == 0.0);
    CHECK(confidence_bounds(s, 0, 0).L == 1.0);

    record_n(s, 1, 0, 4, 2);
    CHECK(confidence_bounds(s, 1, 0).U_raw == doctest::Approx(1.0));
    CHECK(confidence_bounds(s, 1, 0).L_raw == doctest::Approx(0.0));

    ConfidenceState big(2, 1, 1.0);
    record_n(big, 1, 0, 1000000, 500000);
    const auto b = confidence_bounds(big, 1, 0);
    CHECK(b.U_raw - b.L_raw == doctest::Approx(0.002).epsilon(1e-9));

    ConfidenceState run(3, 1, 1.0);
    record_n(run, 1, 0, 100, 30);
    record_n(run, 2, 0, 100, 60);
    CHECK(confidence_bounds(run, 1, 0).U_raw == doctest::Approx(0.4));
    CHECK(confidence_bounds(run, 2, 0).U_raw == doctest::Approx(0.7));
    CHECK(confidence_bounds(run, 2, 0).U == doctest::Approx(0.4));
    // The lower bound at 1 inherits 0.5 from value 2, then is capped by U = 0.4.
    CHECK(confidence_bounds(run, 1, 0).L == doctest::Approx(0.4));
    CHECK(confidence_bounds(run, 2, 0).L == doctest::Approx(0.4));
}

TEST_CASE("confidence bands stay monotone and contract")
{
    std::mt19937_64 rng(8);
    const double C = 2.0;
    ConfidenceState s(5, 2, C);
    std::uniform_int_distribution<Index> pv(0, 4), pt(0, 1);
    std::bernoulli_distribution coin(0.4);
    for (int step = 0; step < 3000; ++step) {
        const Index v = pv(rng), t = pt(rng);
        s.record(v, t, coin(rng));
        const QuantileBand b = type_band(s, t);
        for (Index i = 0; i < 5; ++i) {
            CHECK(b.lower(i) <= b.upper(i));
            CHECK(b.lower(i) >= 0.0);
            CHECK(b.upper(i) <= 1.0);
            if (i > 0) {
                CHECK(b.upper(i) <= b.upper(i - 1));
                CHECK(b.lower(i) <= b.lower(i - 1));
            }
        }
        if (v > 0) CHECK(b.upper(v) - b.lower(v) <= 2 * std::sqrt(C / s.trials(v, t)) + 1e-12);
    }
    CHECK_THROWS_AS(s.record(5, 0, true), DomainError);
    CHECK_THROWS_AS(ConfidenceState(3, 1, 0.0), DomainError);
}

TEST_CASE("segment bounds")
{
    ConfidenceState s(2, 2, 1.0);
    record_n(s, 1, 0, 100, 10);
    record_n(s, 1, 1, 100, 50);
    CHECK(segment_bounds(s, 1, vecd({1, 0})).U == doctest::Approx(0.2));
    CHECK(segment_bounds(s, 1, vecd({0, 1})).U == doctest::Approx(0.6));
    CHECK(segment_bounds(s, 1, vecd({0.5, 0.5})).U == doctest::Approx(0.4));
    CHECK(segment_bounds(s, 1, vecd({1, 0})).L == doctest::Approx(0.0));

    ConfidenceState same(2, 2, 1.0);
    record_n(same, 1, 0, 100, 50);
    record_n(same, 1, 1, 100, 50);
    CHECK(segment_bounds(same, 1, vecd({0.5, 0.5})).U == doctest::Approx(segment_bounds(same, 1, vecd({1, 0})).U));
}

TEST_CASE("exploit flags")
{
    const Grid g = Grid::scaled(4);
    ConfidenceState fresh(4, 1, 2.0);
    const Vector<double> x = vecd({1.0});
    CHECK(is_exploit(fresh, g, x, seller_ucb(fresh, g, x), 0.0, 0.1).exploit);
    // With every quantile bound at one only the top price maximizes p·U.
    CHECK_FALSE(is_exploit(fresh, g, x, 0, 0.0, 0.1).exploit);
    CHECK(is_exploit(fresh, g, x, 0, 0.75, 0.1).exploit);

    // Planted revenue UCB gap of 2·eps_S between prices 1/2 and 1.
    const double eps = 0.05;
    ConfidenceState s(2, 1, 1.0);
    record_n(s, 1, 0, 10000, 3000);
    const Grid g2 = Grid::scaled(2);
    const double top = confidence_bounds(s, 1, 0).U;
    CHECK(top == doctest::Approx(0.31));
    // Price 1/2 earns 1/2 for sure, price 1 at most 0.31.
    CHECK(seller_ucb(s, g2, x) == 0);
    const auto f = is_exploit(s, g2, x, 1, eps, 0.01);
    CHECK_FALSE(f.exploit);
    CHECK(f.major);
    CHECK_FALSE(is_exploit(s, g2, x, 1, eps, 0.5).major);
    CHECK(is_exploit(s, g2, x, 1, 0.5 - 0.31 + 1e-9, 0.01).exploit);
}

TEST_CASE("UCB seller")
{
    const Grid g = Grid::scaled(3);
    ConfidenceState fresh(3, 1, 2.0);
    CHECK(seller_ucb(fresh, g, vecd({1.0})) == 2);
    CHECK(seller_ucb(ConfidenceState(1, 1), Grid::scaled(1), vecd({1.0})) == 0);

    // Pointmass buyer at 2/3: UCB play converges to posting 2/3.
    ConfidenceState s(3, 1, 2.0);
    Index p = 0;
    for (int r = 0; r < 2000; ++r) {
        p = seller_ucb(s, g, vecd({1.0}));
        s.record(p, 0, p <= 1);
    }
    CHECK(p == 1);
}

TEST_CASE("ETC seller")
{
    const Grid g = Grid::scaled(4);
    ConfidenceState s(4, 1, 2.0);
    const Vector<double> x = vecd({1.0});
    std::mt19937_64 a(3), b(3);
    CHECK(seller_etc(s, g, x, 0, 100, 0.1, a) == seller_etc(s, g, x, 0, 100, 0.1, b));

    // Exploration lasts exactly ceil(eps·m) rounds.
    std::mt19937_64 rng(4);
    int explored = 0;
    const Index m = 1000;
    const double eps = 0.0371;
    for (Index r = 0; r < m; ++r) {
        std::mt19937_64 probe = rng;
        const Index p = seller_etc(s, g, x, r, m, eps, rng);
        explored += (probe != rng);
        (void)p;
    }
    CHECK(explored == static_cast<int>(std::ceil(eps * m)));

    // Only price 1/2 survives: its LCB revenue beats every other UCB.
    ConfidenceState c(4, 1, 1.0);
    record_n(c, 1, 0, 100000, 100000);
    record_n(c, 2, 0, 100000, 10000);
    record_n(c, 3, 0, 100000, 0);
    CHECK(seller_etc(c, g, x, 999, m, eps, rng) == 1);

    CHECK(etc_eps(1000, 2, 4) == doctest::Approx(0.8));
    CHECK(etc_eps(10, 3, 3) == 1.0);
}

TEST_CASE("eps_M")
{
    for (Index m : {100, 20000, 1000000})
        for (Index T : {1, 2, 3})
            for (Index V : {2, 4, 8}) {
                const auto e = epsilon_m(m, T, V);
                const double lhs = e.eps_I * static_cast<double>(m);
                const double rhs = static_cast<double>(T * V) / std::pow(e.eps_M, 3);
                CHECK(std::abs(lhs - rhs) <= 1e-9 * rhs);
                CHECK(e.eps_I == doctest::Approx(std::pow(e.eps_M, 1.0 / 6) * std::pow(T, 2.0 / 3) *
                                                 std::pow(std::log(double(V)), 1.0 / 6)));
            }
    const double expected = std::pow(std::cbrt(2.0) * 4 / (1e6 * std::pow(std::log(4.0), 1.0 / 6)), 6.0 / 19);
    CHECK(epsilon_m(1000000, 2, 4).eps_M == doctest::Approx(expected).epsilon(1e-12));
    CHECK(epsilon_m(1000000, 2, 4).eps_M == doctest::Approx(0.0222).epsilon(1e-2));
    double prev = 1e9;
    for (Index m = 10; m <= 10000000; m *= 10) {
        CHECK(epsilon_m(m, 2, 4).eps_M < prev);
        prev = epsilon_m(m, 2, 4).eps_M;
    }
    CHECK_THROWS_AS(epsilon_m(100, 2, 1), DomainError);
}

TEST_CASE("optimistic distributions")
{
    const Grid g = Grid::scaled(4);
    ConfidenceState fresh(4, 2, 2.0);
    const auto f = optimistic_distributions(fresh, g, 0.0);
    REQUIRE(f.candidates.size() == 3);
    CHECK(f.candidates[0].anchor == "ucb");
    for (const auto& d : f.candidates[0].distributions) CHECK(d.pmf() == Distribution::pointmass(g, 3).pmf());
    for (const auto& d : f.distributions) CHECK(check_mhr_like(d).mhr_like());
    CHECK(f.warnings.empty());

    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        const Market truth = fixtures::random_mhr_market(rng, 2, 6);
        const double opt = optimal_segmentation(truth, 0.0).objective;

        // Converged counts: the band is nearly a point.
        const auto conv = optimistic_distributions(planted(truth, 1000000), truth.grid(), 0.0);
        for (Index t = 0; t < 2; ++t) CHECK(ks_distance(conv.distributions[size_t(t)], truth.type(t)) <= 0.01);

        const auto st = planted(truth, 20000);
        const auto o = optimistic_distributions(st, truth.grid(), 0.0);
        for (Index t = 0; t < 2; ++t) {
            const QuantileBand b = type_band(st, t);
            const Vector<double> q = o.distributions[size_t(t)].quantiles();
            CHECK((q - b.lower).minCoeff() >= -1e-9);
            CHECK((b.upper - q).minCoeff() >= -1e-9);
            if (o.warnings.empty()) CHECK(check_mhr_like(o.distributions[size_t(t)]).mhr_like());
        }
        const Market believed(o.distributions, vecd({0.5, 0.5}));
        CHECK(optimal_segmentation(believed, 0.0).objective >= opt - 0.05);
    }
}

TEST_CASE("intermediary round")
{
    const Market pm = fixtures::scaled_pointmass(3);
    const auto first = intermediary_round(ConfidenceState(3, 3), pm.grid(), 20000);
    validate(first.believed, first.robust.robust);
    CHECK(first.schedule.eps_I == doctest::Approx(BanditConfig{}.eps_I_cap));

    const auto conv = intermediary_round(planted(pm, 1000000), pm.grid(), 20000);
    CHECK(conv.optimal.objective == doctest::Approx(2.0 / 9).epsilon(1e-3));
    const auto rep = audit_robustness(conv.believed, conv.robust, conv.schedule);
    CHECK(rep.passed());
    for (const auto& r : conv.robust.robust_types) CHECK(r.has_value());
    const double got = evaluate<double>(pm, conv.robust.robust, TrueMonopoly{}, 0.0).objective;
    CHECK(got >= 2.0 / 9 - conv.schedule.eps_I);
}

TEST_CASE("simulation bookkeeping")
{
    const Market pm = fixtures::scaled_pointmass(3);
    const auto empty = simulate(pm, SellerModel::ucb, 0, 1);
    CHECK(empty.rounds.empty());
    CHECK(empty.cumulative == 0.0);

    const auto a = simulate(pm, SellerModel::etc, 1500, 9);
    const auto b = simulate(pm, SellerModel::etc, 1500, 9);
    CHECK(rounds_csv(a) == rounds_csv(b));
    CHECK(rounds_csv(a).rfind("round,type,price,bought,exploit,major,objective_cum\n", 0) == 0);
    double cum = 0;
    for (const auto& r : a.rounds) {
        CHECK(r.price >= 0);
        CHECK(r.price < 3);
        CHECK(r.price_value == pm.grid()[r.price]);
        CHECK(r.bought == (r.value >= r.price_value));
        cum += r.objective;
        CHECK(r.objective_cum == doctest::Approx(cum));
        CHECK((r.major ? !r.exploit : true));
    }
    CHECK(a.regret == doctest::Approx(a.opt - a.cumulative / 1500));

    const Market skewed(pm.types(), vecd({0.5, 0.25, 0.25}));
    CHECK_THROWS_AS(simulate(skewed, SellerModel::ucb, 10, 1), DomainError);
}

TEST_CASE("regret on the pointmass market")
{
    const Market pm = fixtures::scaled_pointmass(3);
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto ucb = simulate(pm, SellerModel::ucb, 20000, seed);
        CHECK(ucb.regret <= 0.15);
        CHECK(ucb.non_exploit == 0);
        CHECK(ucb.major_explorations <= 10 * 9 / std::pow(ucb.eps.eps_M, 3));
        const auto etc = simulate(pm, SellerModel::etc, 20000, seed);
        CHECK(etc.non_exploit_fraction() <= etc.seller_eps);
        CHECK(etc.major_explorations <= 10 * 9 / std::pow(etc.eps.eps_M, 3));
    }

    // Recomputing every round changes little.
    BanditConfig every;
    every.recompute_every = 1;
    const double slow = simulate(pm, SellerModel::ucb, 2000, 5, every).regret;
    const double fast = simulate(pm, SellerModel::ucb, 2000, 5).regret;
    MESSAGE("regret at m=2000: every round " << slow << ", every 100 rounds " << fast);
    CHECK(std::abs(slow - fast) <= 0.05);
}
