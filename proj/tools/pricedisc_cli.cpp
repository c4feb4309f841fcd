// pricedisc: command-line front end.
//
// Exit codes: 0 success, 1 a check or operation failed, 2 invalid input
// (the message names the field), 3 schedule or pipeline failure (the
// message names the stage).

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pricedisc/bandit.hpp"
#include "pricedisc/fixtures.hpp"
#include "pricedisc/io.hpp"
#include "pricedisc/oracle.hpp"
#include "pricedisc/sample_pipeline.hpp"

using namespace pricedisc;
using io::Json;

namespace {

enum Exit { kOk = 0, kFailure = 1, kInvalid = 2, kStage = 3 };

/// Raised by commands to leave with a specific exit code.
struct Abort {
    int code;
    std::string message;
};

struct Options {
    std::string scenario;
    bool json = false;
    std::string csv;
    bool rational = false;
    std::optional<double> lambda;
    std::optional<std::uint64_t> seed;
};

template <class Scalar>
io::BasicScenario<Scalar> load_scenario(const Options& o)
{
    if (o.scenario.empty()) throw Abort{kInvalid, "--scenario is required"};
    auto s = io::scenario_from<Scalar>(io::load_json(o.scenario));
    if (o.lambda) {
        if (*o.lambda < 0 || *o.lambda > 1) throw io::ScenarioError("lambda", "must lie in [0, 1]");
        s.lambda = parse_scalar<Scalar>(Json(*o.lambda).dump());
    }
    return s;
}

template <class Scalar>
std::string fmt(const Scalar& v)
{
    if constexpr (std::is_same_v<Scalar, double>) {
        std::ostringstream os;
        os.precision(12);
        os << v;
        return os.str();
    } else {
        return v.str();
    }
}

template <class Scalar>
std::string fmt(const Vector<Scalar>& v)
{
    std::string s = "(";
    for (Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v(i));
    return s + ")";
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out) throw Abort{kFailure, "cannot write " + path};
    out << text;
}

std::uint64_t require_seed(const Options& o, const io::ModelSection& model)
{
    if (o.seed) return *o.seed;
    if (model.seed) return *model.seed;
    throw Abort{kInvalid, "--seed is required for this command (or set model.seed)"};
}

template <class Scalar>
Json outcome_json(const BasicOutcome<Scalar>& o)
{
    return Json{{"objective", io::scalar_to(o.objective)},
                {"revenue", io::scalar_to(o.revenue)},
                {"consumer_surplus", io::scalar_to(o.cs)},
                {"social_welfare", io::scalar_to(o.sw)}};
}

// ---------------------------------------------------------------- solve

template <class Scalar>
int solve(const Options& o)
{
    const auto sc = load_scenario<Scalar>(o);
    const auto& m = sc.market;
    const TieBreak tie = sc.model.tie_break;
    const auto opt = optimal_segmentation(m, sc.lambda);
    const auto got = evaluate<Scalar>(m, opt.segmentation, IntendedPrices{}, sc.lambda);
    const auto base = evaluate<Scalar>(m, trivial_segmentation(m), TrueMonopoly{tie}, sc.lambda);
    const Scalar deadweight = expected_value(m.prior_distribution()) - got.sw;
    using std::abs;
    const bool useless = abs(opt.objective - base.objective) <= Scalar(ScalarTraits<Scalar>::lp_tolerance()) * Scalar(10);

    if (o.json) {
        Json j{{"lambda", io::scalar_to(sc.lambda)},
               {"outcome", outcome_json(got)},
               {"baseline", outcome_json(base)},
               {"deadweight_loss", io::scalar_to(deadweight)},
               {"segmentation_useless", useless},
               {"segmentation", io::segmentation_to(opt.segmentation, &m.grid())}};
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "objective " << fmt(opt.objective) << '\n'
                  << "revenue " << fmt(got.revenue) << '\n'
                  << "consumer_surplus " << fmt(got.cs) << '\n'
                  << "social_welfare " << fmt(got.sw) << '\n'
                  << "deadweight_loss " << fmt(deadweight) << '\n'
                  << "baseline_objective " << fmt(base.objective) << '\n'
                  << "segments " << opt.segmentation.size() << '\n';
        for (const auto& s : opt.segmentation.segments)
            std::cout << "  w=" << fmt(s.w) << " x=" << fmt(s.x) << " price=" << fmt(m.grid()[*s.price]) << '\n';
        if (useless) std::cout << "segmentation useless\n";
    }
    if (!o.csv.empty()) {
        std::ostringstream os;
        os << "segment,weight,price";
        for (Index t = 0; t < m.num_types(); ++t) os << ",x" << t;
        os << '\n';
        for (size_t i = 0; i < opt.segmentation.size(); ++i) {
            const auto& s = opt.segmentation.segments[i];
            os << i << ',' << fmt(s.w) << ',' << fmt(m.grid()[*s.price]);
            for (Index t = 0; t < m.num_types(); ++t) os << ',' << fmt(s.x(t));
            os << '\n';
        }
        write_file(o.csv, os.str());
    }
    return kOk;
}

// ---------------------------------------------------------------- robustify

EpsilonSchedule schedule_for(const Market& m, std::optional<double> eps_S, std::optional<double> eps_I)
{
    if (!eps_S) throw io::ScenarioError("model.eps_S", "missing; pass --eps-S or set it in the scenario");
    try {
        return eps_I ? explicit_schedule(*eps_S, *eps_I, m.num_types())
                     : epsilon_schedule(*eps_S, m.num_types(), m.num_values());
    } catch (const ScheduleError& e) {
        throw PipelineError("epsilon_schedule", e.what());
    } catch (const DomainError& e) {
        throw PipelineError("epsilon_schedule", e.what());
    }
}

int robustify(const Options& o, std::optional<double> eps_S, std::optional<double> eps_I, bool keep)
{
    const auto sc = load_scenario<double>(o);
    const Market& m = sc.market;
    if (!eps_S) eps_S = sc.model.eps_S;
    if (!eps_I) eps_I = sc.model.eps_I;
    const double lambda = sc.lambda;
    const auto sch = schedule_for(m, eps_S, eps_I);
    const auto opt = optimal_segmentation(m, lambda);
    RobustifiedSegmentation rob;
    try {
        rob = robustify_segmentation(m, opt.segmentation, {}, sch, RobustifyOptions{.keep_unmovable = keep});
    } catch (const NoRobustType& e) {
        throw PipelineError("robustify_segmentation", e.what());
    } catch (const DomainError& e) {
        throw PipelineError("robustify_segmentation", e.what());
    }
    const auto rep = audit_robustness(m, rob, sch);
    const auto got = evaluate<double>(m, rob.robust, IntendedPrices{}, lambda);
    if (o.json) {
        std::cout << Json{{"robustified", io::robustified_to(rob, &m.grid())},
                          {"audit", io::report_to(rep)},
                          {"optimal_objective", opt.objective},
                          {"robust_objective", got.objective}}
                         .dump(2)
                  << '\n';
    } else {
        std::cout << "eps_S " << sch.eps_S << "\neps_I " << sch.eps_I << "\neps_R " << sch.eps_R << '\n'
                  << "optimal_objective " << opt.objective << '\n'
                  << "robust_objective " << got.objective << '\n'
                  << "audit " << (rep.passed() ? "passed" : "FAILED") << '\n';
        for (size_t i = 0; i < rob.robust.size(); ++i) {
            const auto& s = rob.robust.segments[i];
            std::cout << "  w=" << fmt(s.w) << " x=" << fmt(s.x) << " price=" << m.grid()[*s.price];
            if (i < rob.base.size()) {
                std::cout << (rob.insignificant[i] ? " insignificant" : "");
                if (rob.robust_types[i]) std::cout << " robust_type=" << *rob.robust_types[i];
            } else {
                std::cout << " vertex";
            }
            std::cout << '\n';
        }
    }
    if (!o.csv.empty()) {
        std::ostringstream os;
        os << "segment,weight,price,significant,weight_ok,mixture_ok,robust_ok\n";
        for (const auto& a : rep.segments)
            os << a.index << ',' << rob.robust.segments[a.index].w << ',' << m.grid()[rob.intended_prices[a.index]]
               << ',' << a.significant << ',' << a.weight_ok << ',' << a.mixture_ok << ',' << a.robust_ok << '\n';
        write_file(o.csv, os.str());
    }
    return rep.passed() ? kOk : kFailure;
}

// ---------------------------------------------------------------- project

int project(const Options& o, std::optional<double> eps)
{
    const auto sc = load_scenario<double>(o);
    if (!eps) eps = sc.model.eps_S;
    if (!eps) throw io::ScenarioError("model.eps_S", "missing; pass --eps or set it in the scenario");
    if (!sc.market.grid().is_scaled()) throw io::ScenarioError("market.grid", "projection needs a scaled grid");
    Json out = Json::array();
    int code = kOk;
    for (Index t = 0; t < sc.market.num_types(); ++t) {
        const auto& d = sc.market.type(t);
        try {
            const auto p = project_mhr_like(d, *eps);
            const double ks = ks_distance(p.result, d);
            out.push_back(Json{{"type", t},
                               {"guess", p.guess},
                               {"ks_distance", ks},
                               {"distribution", io::distribution_to(p.result)}});
            if (!o.json)
                std::cout << "type " << t << ": guess price " << d.grid()[p.guess] << ", ks " << ks << ", pmf "
                          << fmt(p.result.pmf()) << '\n';
        } catch (const ProjectionFailed& e) {
            out.push_back(Json{{"type", t}, {"error", e.what()}});
            std::cerr << "type " << t << ": " << e.what() << '\n';
            code = kFailure;
        }
    }
    if (o.json) std::cout << out.dump(2) << '\n';
    return code;
}

// ---------------------------------------------------------------- sample-learn

struct LearnFlags {
    std::optional<Index> samples;
    std::vector<Index> sweep;
    std::optional<double> eps_S;
    std::optional<double> eps_I;
    std::optional<double> slack;
};

PipelineConfig pipeline_config(const io::BasicScenario<double>& sc, const LearnFlags& f)
{
    PipelineConfig cfg;
    cfg.lambda = sc.lambda;
    cfg.eps_S = f.eps_S ? f.eps_S : sc.model.eps_S;
    cfg.eps_I = f.eps_I ? f.eps_I : sc.model.eps_I;
    if (f.slack) cfg.belief_slack = *f.slack;
    else if (sc.model.belief_slack) cfg.belief_slack = *sc.model.belief_slack;
    return cfg;
}

int sample_learn(const Options& o, const LearnFlags& f)
{
    const auto sc = load_scenario<double>(o);
    const Market& truth = sc.market;
    const std::uint64_t seed = require_seed(o, sc.model);
    const PipelineConfig cfg = pipeline_config(sc, f);
    const double opt = optimal_segmentation(truth, sc.lambda).objective;

    if (!f.sweep.empty()) {
        std::ostringstream os;
        os << "m,objective,adversarial_objective,status\n";
        for (Index m : f.sweep) {
            try {
                const auto r = learn_segmentation(draw_samples(truth, m, seed), truth.grid(), cfg);
                const double obj = evaluate<double>(truth, r.robust.robust, TrueMonopoly{}, sc.lambda).objective;
                const double adv = adversarial_belief(truth, r.eps_S, r.robust.robust, sc.lambda).adversarial;
                os << m << ',' << obj << ',' << adv << ",ok\n";
            } catch (const PipelineError& e) {
                os << m << ",nan,nan," << e.stage() << '\n';
            }
        }
        if (o.csv.empty())
            std::cout << os.str();
        else
            write_file(o.csv, os.str());
        return kOk;
    }

    const Index m = f.samples ? *f.samples : sc.model.m.value_or(0);
    if (m < 1) throw io::ScenarioError("model.m", "missing; pass --samples or set it in the scenario");
    const auto r = learn_segmentation(draw_samples(truth, m, seed), truth.grid(), cfg);
    const double obj = evaluate<double>(truth, r.robust.robust, TrueMonopoly{}, sc.lambda).objective;
    const auto adv = adversarial_belief(truth, r.eps_S, r.robust.robust, sc.lambda);

    Json stages = Json::array();
    for (Index t = 0; t < truth.num_types(); ++t)
        stages.push_back(Json{{"type", t},
                              {"empirical_ks", ks_distance(r.empiricals[size_t(t)], truth.type(t))},
                              {"projection_guess", r.projections[size_t(t)].guess},
                              {"projected_ks", ks_distance(r.projected.type(t), truth.type(t))}});
    if (o.json) {
        std::cout << Json{{"m", m},
                          {"seed", seed},
                          {"eps_S", r.eps_S},
                          {"schedule", io::schedule_to(r.schedule)},
                          {"stages", stages},
                          {"projected_market", io::market_to(r.projected)},
                          {"pre_robust", io::segmentation_to(r.optimal.segmentation, &truth.grid())},
                          {"robustified", io::robustified_to(r.robust, &truth.grid())},
                          {"true_objective", obj},
                          {"bayesian_optimum", opt},
                          {"adversarial_objective", adv.adversarial}}
                         .dump(2)
                  << '\n';
    } else {
        std::cout << "m " << m << "\nseed " << seed << "\neps_S " << r.eps_S << "\neps_I " << r.schedule.eps_I
                  << '\n';
        for (const auto& s : stages)
            std::cout << "type " << s["type"] << ": empirical ks " << s["empirical_ks"] << ", projected ks "
                      << s["projected_ks"] << '\n';
        std::cout << "true_objective " << obj << "\nbayesian_optimum " << opt << "\nadversarial_objective "
                  << adv.adversarial << '\n';
    }
    if (!o.csv.empty()) {
        std::ostringstream os;
        os << "m,objective,adversarial_objective\n" << m << ',' << obj << ',' << adv.adversarial << '\n';
        write_file(o.csv, os.str());
    }
    return kOk;
}

// ---------------------------------------------------------------- simulate

struct SimFlags {
    std::optional<std::string> seller;
    std::optional<Index> rounds;
    std::optional<double> C;
    std::optional<Index> recompute_every;
    std::optional<double> eps_I_cap;
};

int simulate_cmd(const Options& o, const SimFlags& f)
{
    const auto sc = load_scenario<double>(o);
    const std::uint64_t seed = require_seed(o, sc.model);
    const std::string seller = f.seller.value_or(sc.model.seller);
    if (seller != "ucb" && seller != "etc") throw io::ScenarioError("model.seller", "expected ucb or etc");
    const Index m = f.rounds ? *f.rounds : sc.model.m.value_or(0);
    if (m < 0) throw io::ScenarioError("model.m", "must be non-negative");
    BanditConfig cfg;
    cfg.lambda = sc.lambda;
    cfg.C = f.C ? *f.C : sc.model.C.value_or(cfg.C);
    cfg.recompute_every = f.recompute_every ? *f.recompute_every : sc.model.recompute_every.value_or(cfg.recompute_every);
    if (f.eps_I_cap) cfg.eps_I_cap = *f.eps_I_cap;
    const auto rep = simulate(sc.market, seller == "ucb" ? SellerModel::ucb : SellerModel::etc, m, seed, cfg);
    for (const auto& w : rep.warnings) std::cerr << "warning: " << w << '\n';

    if (o.json) {
        std::cout << Json{{"seed", rep.seed},
                          {"m", rep.m},
                          {"seller", to_string(rep.seller)},
                          {"seller_eps", rep.seller_eps},
                          {"cumulative", rep.cumulative},
                          {"average", rep.average},
                          {"opt", rep.opt},
                          {"regret", rep.regret},
                          {"major_explorations", rep.major_explorations},
                          {"non_exploit_fraction", rep.non_exploit_fraction()},
                          {"eps_M", rep.eps.eps_M},
                          {"eps_I", rep.eps.eps_I}}
                         .dump(2)
                  << '\n';
    } else {
        std::cout << "seller " << to_string(rep.seller) << "\nrounds " << rep.m << "\nseed " << rep.seed
                  << "\naverage " << rep.average << "\nopt " << rep.opt << "\nregret " << rep.regret
                  << "\nmajor_explorations " << rep.major_explorations << "\nnon_exploit_fraction "
                  << rep.non_exploit_fraction() << "\neps_M " << rep.eps.eps_M << '\n';
    }
    if (!o.csv.empty()) write_file(o.csv, rounds_csv(rep));
    return kOk;
}

// ---------------------------------------------------------------- audit

int audit(const Options& o, const std::string& robustified)
{
    const auto sc = load_scenario<double>(o);
    if (robustified.empty()) throw Abort{kInvalid, "--robustified is required"};
    Json j = io::load_json(robustified);
    if (j.contains("robustified")) j = j["robustified"];
    const auto rob = io::robustified_from(j, "robustified");
    try {
        validate(sc.market, rob.robust);
        validate(sc.market, rob.base);
    } catch (const DomainError& e) {
        throw io::ScenarioError("robustified", e.what());
    }
    const auto rep = audit_robustness(sc.market, rob, rob.schedule);
    if (o.json) {
        std::cout << io::report_to(rep).dump(2) << '\n';
    } else {
        std::cout << "weights " << (rep.weights_ok ? "ok" : "FAILED") << "\nmixtures "
                  << (rep.mixtures_ok ? "ok" : "FAILED") << "\nrobustness " << (rep.robustness_ok ? "ok" : "FAILED")
                  << "\ncentroid_error " << rep.centroid_error << "\nsw_constant " << rep.sw_constant
                  << "\nrevenue_constant " << rep.revenue_constant << "\naudit "
                  << (rep.passed() ? "passed" : "FAILED") << '\n';
    }
    return rep.passed() ? kOk : kFailure;
}

// ---------------------------------------------------------------- oracle

int oracle(const Options& o, int random, int resolution)
{
    std::vector<std::pair<Market, double>> cases;
    if (random > 0) {
        if (!o.seed) throw Abort{kInvalid, "--seed is required with --random"};
        std::mt19937_64 rng(*o.seed);
        std::uniform_int_distribution<Index> pickT(1, 3), pickV(2, 4);
        std::uniform_real_distribution<double> pickL(0.0, 1.0);
        for (int i = 0; i < random; ++i) {
            const Index T = pickT(rng), V = pickV(rng);
            Market m = fixtures::random_market(rng, T, V);
            cases.emplace_back(std::move(m), o.lambda ? *o.lambda : pickL(rng));
        }
    } else {
        const auto sc = load_scenario<double>(o);
        if (sc.market.num_types() > 3) throw io::ScenarioError("market.types", "the oracle handles at most 3 types");
        if (sc.market.num_values() > 4) throw io::ScenarioError("market.grid", "the oracle handles at most 4 values");
        cases.emplace_back(sc.market, sc.lambda);
    }
    const double tol = 1e-6 + 0.02;
    int failures = 0;
    Json out = Json::array();
    for (size_t i = 0; i < cases.size(); ++i) {
        const auto& [m, lambda] = cases[i];
        const double lp = optimal_segmentation(m, lambda).objective;
        const auto orc = brute_force_oracle(m, lambda, resolution);
        const double gap = std::abs(lp - orc.objective);
        const bool ok = gap <= tol;
        failures += !ok;
        out.push_back(Json{{"instance", i},
                           {"types", m.num_types()},
                           {"values", m.num_values()},
                           {"lambda", lambda},
                           {"lp", lp},
                           {"oracle", orc.objective},
                           {"gap", gap},
                           {"agree", ok}});
        if (!o.json)
            std::cout << "instance " << i << " T=" << m.num_types() << " V=" << m.num_values() << " lambda=" << lambda
                      << " lp=" << lp << " oracle=" << orc.objective << " gap=" << gap << (ok ? " agree" : " DISAGREE")
                      << '\n';
    }
    if (o.json) std::cout << out.dump(2) << '\n';
    else std::cout << (failures == 0 ? "all instances agree" : std::to_string(failures) + " instances disagree") << '\n';
    return failures == 0 ? kOk : kFailure;
}

// ---------------------------------------------------------------- examples

using RMarket = BasicMarket<Rational>;

RMarket scaled_pointmasses(Index V, const std::vector<Index>& at)
{
    const auto g = ValueGrid<Rational>::scaled(V);
    std::vector<BasicDistribution<Rational>> types;
    for (Index i : at) types.push_back(BasicDistribution<Rational>::pointmass(g, i));
    const Index T = static_cast<Index>(at.size());
    return RMarket(std::move(types), Vector<Rational>::Constant(T, Rational(1) / Rational(T)));
}

struct Fixture {
    std::string file;
    io::BasicScenario<Rational> scenario;
};

std::vector<Fixture> builtin_fixtures()
{
    std::vector<Fixture> out;
    io::ModelSection bayes;
    out.push_back({"pointmass_123.json", {fixtures::pointmass_123<Rational>(), Rational(0), bayes}});
    out.push_back({"noisy_z049.json", {fixtures::noisy_123<Rational>(Rational(49) / Rational(100)), Rational(0), bayes}});
    out.push_back({"noisy_z080.json", {fixtures::noisy_123<Rational>(Rational(4) / Rational(5)), Rational(1), bayes}});
    out.push_back({"line.json", {fixtures::two_type_line<Rational>(), Rational(1) / Rational(2), bayes}});

    io::ModelSection sample;
    sample.mode = "sample";
    sample.m = 100;
    sample.seed = 1;
    Vector<Rational> pmf(2);
    pmf << Rational(501) / Rational(1000), Rational(499) / Rational(1000);
    RMarket a4({BasicDistribution<Rational>(ValueGrid<Rational>::scaled(2), pmf)}, Vector<Rational>::Ones(1));
    out.push_back({"near_equal_revenue.json", {a4, Rational(0), sample}});

    io::ModelSection plateau = sample;
    plateau.m.reset();
    plateau.eps_S = 1e-4;
    out.push_back({"plateau.json", {scaled_pointmasses(4, {0, 3}), Rational(0), plateau}});

    io::ModelSection bandit;
    bandit.mode = "bandit";
    bandit.m = 20000;
    bandit.seed = 1;
    bandit.C = 2.0;
    bandit.recompute_every = 100;
    out.push_back({"pointmass_scaled.json", {scaled_pointmasses(3, {0, 1, 2}), Rational(0), bandit}});
    return out;
}

class Checker {
public:
    explicit Checker(bool json) : json_(json) {}

    void check(const std::string& name, bool ok, const std::string& detail)
    {
        failures_ += !ok;
        results_.push_back(Json{{"check", name}, {"passed", ok}, {"detail", detail}});
        if (!json_) std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
    }

    int finish() const
    {
        if (json_) std::cout << results_.dump(2) << '\n';
        return failures_ == 0 ? kOk : kFailure;
    }

private:
    bool json_;
    int failures_ = 0;
    Json results_ = Json::array();
};

int examples(const Options& o, const std::string& dir, bool write)
{
    const std::filesystem::path root = dir.empty() ? std::filesystem::path(PRICEDISC_FIXTURE_DIR) : std::filesystem::path(dir);
    if (write) {
        std::filesystem::create_directories(root);
        for (const auto& f : builtin_fixtures()) write_file((root / f.file).string(), io::scenario_to(f.scenario).dump(2) + "\n");
    }
    Checker c(o.json);
    std::map<std::string, io::BasicScenario<Rational>> loaded;
    for (const auto& f : builtin_fixtures()) {
        auto s = io::scenario_from<Rational>(io::load_json(root / f.file));
        const bool same = s.market.grid() == f.scenario.market.grid() &&
                          s.market.pmf_table() == f.scenario.market.pmf_table() &&
                          s.market.prior() == f.scenario.market.prior() && s.lambda == f.scenario.lambda;
        c.check(f.file + " matches the built-in fixture", same, (root / f.file).string());
        loaded.emplace(f.file, std::move(s));
    }
    const auto R = [](long n, long d) { return Rational(n) / Rational(d); };

    {
        const auto& m = loaded.at("pointmass_123.json").market;
        const auto opt = optimal_segmentation(m, Rational(0));
        const auto got = evaluate<Rational>(m, opt.segmentation, IntendedPrices{}, Rational(0));
        const Rational dwl = expected_value(m.prior_distribution()) - got.sw;
        c.check("pointmass market optimal segmentation", got.revenue == R(4, 3) && got.cs == R(2, 3) && dwl == Rational(0),
                "revenue " + got.revenue.str() + ", CS " + got.cs.str() + ", deadweight " + dwl.str());
        BasicSegmentMap<Rational> map;
        map.G.resize(3, 3);
        map.G << Rational(1), Rational(0), Rational(0), R(1, 3), R(1, 6), R(1, 2), R(2, 3), R(1, 3), Rational(0);
        const auto seg = segmap_to_measure(m, map);
        const auto ex = evaluate<Rational>(m, seg, TrueMonopoly{TieBreak::low}, Rational(0));
        c.check("pointmass market example segment map", ex.revenue == R(4, 3) && ex.cs == R(2, 3),
                "revenue " + ex.revenue.str() + ", CS " + ex.cs.str());
        const auto base = evaluate<Rational>(m, trivial_segmentation(m), TrueMonopoly{TieBreak::low}, Rational(0));
        c.check("pointmass market unsegmented", base.revenue == R(4, 3) && base.cs == R(1, 3),
                "revenue " + base.revenue.str() + ", CS " + base.cs.str());
    }
    {
        const auto& m = loaded.at("noisy_z049.json").market;
        bool ok = true;
        std::string detail;
        for (const Rational& lambda : {Rational(0), R(1, 2), Rational(1)}) {
            const Rational opt = optimal_segmentation(m, lambda).objective;
            const Rational base =
                evaluate<Rational>(m, trivial_segmentation(m), TrueMonopoly{TieBreak::low}, lambda).objective;
            ok = ok && opt == base;
            detail += "lambda " + lambda.str() + ": " + opt.str() + " vs " + base.str() + "; ";
        }
        c.check("noisy types z=0.49 segmentation useless", ok, detail);
    }
    {
        const auto& m = loaded.at("noisy_z080.json").market;
        const auto rev = evaluate<Rational>(m, full_reveal(m), TrueMonopoly{TieBreak::low}, Rational(1));
        c.check("noisy types z=0.8 full reveal", rev.revenue == R(26, 15) && rev.cs == R(2, 15),
                "revenue " + rev.revenue.str() + ", CS " + rev.cs.str());
        const Rational opt = optimal_segmentation(m, Rational(1)).objective;
        c.check("noisy types z=0.8 revenue optimum", opt >= R(26, 15), "LP revenue " + opt.str());
    }
    {
        const auto& sc = loaded.at("line.json");
        const auto& m = sc.market;
        const Rational opt = optimal_segmentation(m, sc.lambda).objective;
        const auto rev = evaluate<Rational>(m, full_reveal(m), TrueMonopoly{TieBreak::low}, sc.lambda);
        c.check("line market: revealing types is optimal for welfare",
                opt == R(9, 8) && opt == rev.sw / Rational(2),
                "LP " + opt.str() + ", full reveal welfare " + rev.sw.str());
    }
    {
        const auto& m = loaded.at("near_equal_revenue.json").market;
        const Market md = cast_market<double>(m);
        const double p = impossibility_demo(0.001, 100);
        c.check("near equal revenue: high price posted with constant probability",
                monopoly_index(md.type(0)) == 0 && p >= 0.3,
                "true monopoly price " + fmt(md.grid()[monopoly_index(md.type(0))]) + ", Pr[high price] " + fmt(p));
    }
    {
        const auto& sc = loaded.at("plateau.json");
        const Market m = cast_market<double>(sc.market);
        const auto opt = optimal_segmentation(m, 0.0);
        const auto sch = epsilon_schedule(*sc.model.eps_S, m.num_types(), m.num_values());
        const auto rob = robustify_segmentation(m, opt.segmentation, {}, sch);
        const auto raw = adversarial_belief(m, sch.eps_S, opt.segmentation, 0.0);
        const auto safe = adversarial_belief(m, sch.eps_S, rob.robust, 0.0);
        c.check("plateau robustification",
                std::abs(opt.objective - 0.125) <= 1e-9 && audit_robustness(m, rob, sch).passed() &&
                    raw.drop() >= 0.1 && safe.drop() <= raw.drop(),
                "optimum " + fmt(opt.objective) + ", raw drop " + fmt(raw.drop()) + ", robust drop " +
                    fmt(safe.drop()));
    }
    {
        const Market m = cast_market<double>(loaded.at("pointmass_scaled.json").market);
        const double opt = optimal_segmentation(m, 0.0).objective;
        c.check("scaled pointmass optimum", std::abs(opt - 2.0 / 9) <= 1e-9, "consumer surplus " + fmt(opt));
    }
    return c.finish();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Optimal and robust market segmentation for a monopolist seller"};
    app.require_subcommand(1);
    Options o;
    const auto common = [&o](CLI::App* sub, bool scenario = true) {
        if (scenario) sub->add_option("--scenario", o.scenario, "Scenario or market JSON file");
        sub->add_flag("--json", o.json, "Machine-readable output on stdout");
        sub->add_option("--csv", o.csv, "Write tabular output to this file");
        sub->add_option("--lambda", o.lambda, "Weight on revenue; 1 - lambda on consumer surplus");
    };

    auto* solve_cmd = app.add_subcommand("solve", "Optimal segmentation by linear programming");
    common(solve_cmd);
    solve_cmd->add_flag("--rational", o.rational, "Exact rational arithmetic");

    std::optional<double> eps_S, eps_I, eps;
    bool keep = false;
    auto* rob_cmd = app.add_subcommand("robustify", "Optimal segmentation followed by robustification");
    common(rob_cmd);
    rob_cmd->add_option("--eps-S", eps_S, "Seller error");
    rob_cmd->add_option("--eps-I", eps_I, "Explicit intermediary error");
    rob_cmd->add_flag("--keep-unmovable", keep, "Keep segments without a robust type in place");

    auto* proj_cmd = app.add_subcommand("project", "Project each type onto MHR-like distributions");
    common(proj_cmd);
    proj_cmd->add_option("--eps", eps, "Projection radius");

    LearnFlags lf;
    auto* learn_cmd = app.add_subcommand("sample-learn", "Learn a robust segmentation from samples");
    common(learn_cmd);
    learn_cmd->add_option("--samples", lf.samples, "Samples per type");
    learn_cmd->add_option("--sweep", lf.sweep, "Sample counts to sweep (CSV output)")->delimiter(',');
    learn_cmd->add_option("--seed", o.seed, "Random seed (or model.seed)");
    learn_cmd->add_option("--eps-S", lf.eps_S, "Override the seller error");
    learn_cmd->add_option("--eps-I", lf.eps_I, "Override the intermediary error");
    learn_cmd->add_option("--belief-slack", lf.slack, "Multiplier on eps_S for the schedule");

    SimFlags sf;
    auto* sim_cmd = app.add_subcommand("simulate", "Repeated-interaction bandit simulation");
    common(sim_cmd);
    sim_cmd->add_option("--seller", sf.seller, "ucb or etc");
    sim_cmd->add_option("--rounds", sf.rounds, "Number of rounds");
    sim_cmd->add_option("--seed", o.seed, "Random seed (or model.seed)");
    sim_cmd->add_option("--C", sf.C, "Confidence constant");
    sim_cmd->add_option("--recompute-every", sf.recompute_every, "Rounds between segmentation updates");
    sim_cmd->add_option("--eps-I-cap", sf.eps_I_cap, "Upper limit on eps_I");

    std::string robustified;
    auto* audit_cmd = app.add_subcommand("audit", "Audit a robustified segmentation");
    common(audit_cmd);
    audit_cmd->add_option("--robustified", robustified, "Robustified segmentation JSON");

    int random = 0, resolution = 60;
    auto* oracle_cmd = app.add_subcommand("oracle", "Compare the LP with the brute-force oracle");
    common(oracle_cmd);
    oracle_cmd->add_option("--random", random, "Number of random instances instead of a scenario");
    oracle_cmd->add_option("--seed", o.seed, "Random seed (required with --random)");
    oracle_cmd->add_option("--resolution", resolution, "Simplex grid resolution");

    std::string dir;
    bool write = false;
    auto* ex_cmd = app.add_subcommand("examples", "Check the bundled example fixtures");
    common(ex_cmd, false);
    ex_cmd->add_option("--fixtures", dir, "Fixture directory");
    ex_cmd->add_flag("--write", write, "Regenerate the fixture files first");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInvalid;
    }

    try {
        if (*solve_cmd) return o.rational ? solve<Rational>(o) : solve<double>(o);
        if (*rob_cmd) return robustify(o, eps_S, eps_I, keep);
        if (*proj_cmd) return project(o, eps);
        if (*learn_cmd) return sample_learn(o, lf);
        if (*sim_cmd) return simulate_cmd(o, sf);
        if (*audit_cmd) return audit(o, robustified);
        if (*oracle_cmd) return oracle(o, random, resolution);
        if (*ex_cmd) return examples(o, dir, write);
    } catch (const Abort& a) {
        std::cerr << a.message << '\n';
        return a.code;
    } catch (const io::ScenarioError& e) {
        std::cerr << "invalid scenario: " << e.what() << '\n';
        return kInvalid;
    } catch (const PipelineError& e) {
        std::cerr << "stage failed: " << e.what() << '\n';
        return kStage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}
