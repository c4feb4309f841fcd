// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--expect-fail N]...
//
// Exits 0 when exactly the criteria named by --expect-fail fail.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "pricedisc/bandit.hpp"
#include "pricedisc/fixtures.hpp"
#include "pricedisc/mhr_project.hpp"
#include "pricedisc/optimal_segmentation.hpp"
#include "pricedisc/oracle.hpp"
#include "pricedisc/robustify.hpp"
#include "pricedisc/sample_pipeline.hpp"

using namespace pricedisc;

namespace {

// Tolerances and budgets.
constexpr double kFloatTol = 1e-9;
constexpr double kOracleTol = 1e-6 + 0.02;
constexpr int kOracleResolution = 60;
constexpr double kProjectionEps = 0.02;
constexpr double kProjectionKsFactor = 6.0;
constexpr double kRobustifyEpsS = 1e-6;
constexpr double kCentroidTol = 1e-9;
constexpr double kPlateauEpsS = 1e-4;
constexpr double kPlateauMinDrop = 0.1;
constexpr double kDemoFloor = 0.3;
constexpr double kDemoSweepFloor = 0.25;
constexpr double kPipelineGap = 0.05;

struct Result {
    bool passed = false;
    std::string detail;
};

using Rat = Rational;

Result golden_a1()
{
    const auto m = fixtures::pointmass_123<Rat>();
    const auto opt = optimal_segmentation(m, Rat(0));
    const auto got = evaluate<Rat>(m, opt.segmentation, IntendedPrices{}, Rat(0));
    const auto md = fixtures::pointmass_123<double>();
    const auto optd = optimal_segmentation(md, 0.0);
    const auto gotd = evaluate<double>(md, optd.segmentation, IntendedPrices{}, 0.0);
    const bool ok = opt.objective == Rat(2) / Rat(3) && got.revenue == Rat(4) / Rat(3) &&
                    std::abs(optd.objective - 2.0 / 3) <= kFloatTol && std::abs(gotd.revenue - 4.0 / 3) <= kFloatTol;
    return {ok, "rational CS " + opt.objective.str() + ", revenue " + got.revenue.str()};
}

Result noise_sweep()
{
    std::ostringstream os;
    bool ok = true;
    const auto z49 = fixtures::noisy_123<double>(0.49);
    for (double lambda : {0.0, 0.5, 1.0}) {
        const double opt = optimal_segmentation(z49, lambda).objective;
        const double base = lambda * 4.0 / 3 + (1 - lambda) / 3;
        ok = ok && std::abs(opt - base) <= kFloatTol;
        os << "z=0.49 lambda " << lambda << ": " << opt << " vs " << base << "; ";
    }
    const auto z80 = fixtures::noisy_123<double>(0.8);
    const double lp = optimal_segmentation(z80, 1.0).objective;
    const auto zr = fixtures::noisy_123<Rat>(Rat(4) / Rat(5));
    const auto rev = evaluate<Rat>(zr, full_reveal(zr), TrueMonopoly{TieBreak::low}, Rat(1));
    ok = ok && lp >= 26.0 / 15 - kFloatTol && rev.revenue == Rat(26) / Rat(15) && rev.cs == Rat(2) / Rat(15);
    os << "z=0.8 LP " << lp << ", full reveal revenue " << rev.revenue.str() << " CS " << rev.cs.str();
    return {ok, os.str()};
}

Result oracle_equivalence()
{
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<Index> pickT(1, 3), pickV(2, 4);
    std::uniform_real_distribution<double> pickL(0.0, 1.0);
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
        const Index T = pickT(rng), V = pickV(rng);
        const Market m = fixtures::random_market(rng, T, V);
        const double lambda = pickL(rng);
        const double gap =
            std::abs(optimal_segmentation(m, lambda).objective - brute_force_oracle(m, lambda, kOracleResolution).objective);
        worst = std::max(worst, gap);
    }
    return {worst <= kOracleTol, "largest gap " + std::to_string(worst) + " over 20 markets"};
}

Result mhr_projection()
{
    std::mt19937_64 rng(4);
    int mhr = 0, close = 0;
    double worst = 0;
    std::uniform_real_distribution<double> u(-kProjectionEps, kProjectionEps);
    for (int k = 0; k < 100; ++k) {
        const auto F = fixtures::random_mhr_like(rng, 8);
        Vector<double> q = F.quantiles();
        for (Index i = 1; i < q.size(); ++i) q(i) = std::clamp(q(i) + u(rng), 0.0, 1.0);
        for (Index i = 1; i < q.size(); ++i) q(i) = std::min(q(i), q(i - 1));
        const auto E = Distribution::from_quantiles(F.grid(), q);
        try {
            const auto p = project_mhr_like(E, kProjectionEps);
            mhr += check_mhr_like(p.result).mhr_like();
            const double ks = ks_distance(p.result, F);
            worst = std::max(worst, ks);
            close += ks <= kProjectionKsFactor * kProjectionEps;
        } catch (const ProjectionFailed&) {
        }
    }
    return {mhr == 100 && close == 100, std::to_string(mhr) + "/100 MHR-like, " + std::to_string(close) +
                                            "/100 within 6 eps_S (largest KS " + std::to_string(worst) + ")"};
}

Result robustify_audit()
{
    std::mt19937_64 rng(31);
    const auto sch = epsilon_schedule(kRobustifyEpsS, 3, 8);
    AuditOptions opts;
    opts.centroid_tolerance = kCentroidTol;
    int passed = 0;
    double centroid = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto m = fixtures::random_mhr_market(rng, 3, 8);
        const auto rob = robustify_segmentation(m, optimal_segmentation(m, 0.0).segmentation, {}, sch);
        const auto rep = audit_robustness(m, rob, sch, opts);
        passed += rep.passed();
        centroid = std::max(centroid, rep.centroid_error);
    }
    return {passed == 100, std::to_string(passed) + "/100 markets pass (eps_S " + std::to_string(kRobustifyEpsS) +
                               ", eps_I " + std::to_string(sch.eps_I) + ", centroid error " +
                               std::to_string(centroid) + ")"};
}

Result plateau()
{
    const auto m = fixtures::plateau();
    const auto opt = optimal_segmentation(m, 0.0);
    const auto sch = epsilon_schedule(kPlateauEpsS, m.num_types(), m.num_values());
    const auto rob = robustify_segmentation(m, opt.segmentation, {}, sch);
    const auto raw = adversarial_belief(m, kPlateauEpsS, opt.segmentation, 0.0);
    int paired = 0;
    double worst_robust = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        AdversaryOptions o;
        o.seed = seed;
        const auto a = adversarial_belief(m, kPlateauEpsS, opt.segmentation, 0.0, o);
        const auto b = adversarial_belief(m, kPlateauEpsS, rob.robust, 0.0, o);
        paired += b.drop() <= a.drop();
        worst_robust = std::max(worst_robust, b.drop());
    }
    const bool cond3 = audit_robustness(m, rob, sch).robustness_ok;
    std::ostringstream os;
    os << "raw drop " << raw.drop() << ", robust drop <= raw in " << paired << "/10 trials (largest " << worst_robust
       << "), condition 3 " << (cond3 ? "holds" : "violated");
    return {raw.drop() >= kPlateauMinDrop && paired == 10 && cond3, os.str()};
}

Result impossibility()
{
    const double p = impossibility_demo(0.001, 100);
    std::ostringstream os;
    os << "Pr[high] " << p << " at m=100";
    bool ok = p >= kDemoFloor;
    for (Index m : {Index(100), Index(10000), Index(1000000)}) {
        const double q = impossibility_demo(0.1 / static_cast<double>(m), m);
        ok = ok && q >= kDemoSweepFloor;
        os << "; m=" << m << ": " << q;
    }
    return {ok, os.str()};
}

// Criteria 8 and 9 share their runs.
struct BanditRuns {
    Result regret;
    Result accounting;
};

BanditRuns bandit_runs()
{
    const Market pm = fixtures::scaled_pointmass(3);
    const double T = 3, V = 3;
    int decreasing = 0;
    bool ucb_exploits = true, etc_within = true, accounting = true;
    std::ostringstream reg, acc;
    double worst_ratio = 0;
    const auto account = [&](const SimulationReport& r) {
        const double bound = 10 * T * V / std::pow(r.eps.eps_M, 3);
        accounting = accounting && static_cast<double>(r.major_explorations) <= bound;
        worst_ratio = std::max(worst_ratio, static_cast<double>(r.major_explorations) / bound);
    };
    for (std::uint64_t seed : {1, 2, 3}) {
        std::vector<double> regrets;
        for (Index m : {Index(200), Index(2000), Index(20000)}) {
            const auto ucb = simulate(pm, SellerModel::ucb, m, seed);
            const auto etc = simulate(pm, SellerModel::etc, m, seed);
            regrets.push_back(ucb.regret);
            ucb_exploits = ucb_exploits && ucb.non_exploit == 0;
            etc_within = etc_within && etc.non_exploit_fraction() <= etc.seller_eps;
            account(ucb);
            account(etc);
        }
        decreasing += regrets[2] < regrets[1] && regrets[1] < regrets[0];
        reg << "seed " << seed << ": " << regrets[0] << " > " << regrets[1] << " > " << regrets[2] << "; ";
    }
    reg << "UCB non-exploit " << (ucb_exploits ? "0" : "> 0") << ", ETC within eps " << (etc_within ? "yes" : "no");
    acc << "largest count / bound " << worst_ratio << " over 18 runs";
    return {{decreasing >= 2 && ucb_exploits && etc_within, reg.str()}, {accounting, acc.str()}};
}

Result pipeline()
{
    const Market pm = fixtures::scaled_pointmass(3);
    const double opt = optimal_segmentation(pm, 0.0).objective;
    int passed = 0;
    std::ostringstream os;
    for (std::uint64_t seed : {1, 2, 3}) {
        try {
            const auto r = learn_segmentation(draw_samples(pm, 100000, seed), pm.grid());
            const double got = evaluate<double>(pm, r.robust.robust, TrueMonopoly{}, 0.0).objective;
            passed += std::abs(got - opt) <= kPipelineGap;
            os << "seed " << seed << ": " << got << " vs " << opt << "; ";
        } catch (const PipelineError& e) {
            os << "seed " << seed << ": " << e.what() << "; ";
        }
    }
    return {passed == 3, std::to_string(passed) + "/3 seeds within 0.05: " + os.str()};
}

} // namespace

int main(int argc, char** argv)
{
    std::set<int> expected;
    for (int i = 1; i < argc; ++i) {
        if (std::string(argv[i]) == "--expect-fail" && i + 1 < argc) {
            expected.insert(std::atoi(argv[++i]));
        } else {
            std::cerr << "usage: acceptance [--expect-fail N]...\n";
            return 2;
        }
    }

    std::set<int> failed;
    const auto run = [&](int n, double budget, const std::function<Result()>& f) {
        const auto start = std::chrono::steady_clock::now();
        Result r = f();
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool ok = r.passed && secs < budget;
        if (!ok) failed.insert(n);
        std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << r.detail << " [" << secs << " s, budget "
                  << budget << " s]" << std::endl;
    };

    run(1, 1, golden_a1);
    run(2, 10, noise_sweep);
    run(3, 60, oracle_equivalence);
    run(4, 10, mhr_projection);
    run(5, 60, robustify_audit);
    run(6, 60, plateau);
    run(7, 1, impossibility);

    BanditRuns b;
    run(8, 300, [&] {
        b = bandit_runs();
        return b.regret;
    });
    run(9, 300, [&] { return b.accounting; });

    run(10, 120, pipeline);

    std::cout << (failed.empty() ? "all criteria pass" : std::to_string(failed.size()) + " criteria fail");
    if (!expected.empty()) std::cout << " (" << expected.size() << " expected)";
    std::cout << std::endl;
    return failed == expected ? 0 : 1;
}
