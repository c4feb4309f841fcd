#include "pricedisc/sample_pipeline.hpp"

#include <cmath>
#include <random>

namespace pricedisc {

SampleSet draw_samples(const Market& market, Index m, std::uint64_t seed)
{
    if (m < 0) throw DomainError("sample count must be non-negative");
    std::mt19937_64 rng(seed);
    SampleSet out;
    for (const auto& d : market.types()) {
        std::discrete_distribution<Index> pick(d.pmf().data(), d.pmf().data() + d.size());
        std::vector<Index> s(static_cast<size_t>(m));
        for (auto& v : s) v = pick(rng);
        out.per_type.push_back(std::move(s));
    }
    return out;
}

Distribution empirical(const std::vector<Index>& samples, const Grid& grid)
{
    if (samples.empty()) throw DomainError("empirical distribution of an empty sample");
    Vector<double> counts = Vector<double>::Zero(grid.size());
    for (Index v : samples) {
        if (v < 0 || v >= grid.size()) throw DomainError("sample is off the grid");
        counts(v) += 1.0;
    }
    return Distribution(grid, counts / static_cast<double>(samples.size()));
}

double seller_eps(Index m, Index V, double constant)
{
    if (m < 1 || V < 1) throw DomainError("seller_eps needs m >= 1 and V >= 1");
    const double md = static_cast<double>(m);
    return constant * std::log(md * static_cast<double>(V)) / std::sqrt(md);
}

PipelineResult learn_segmentation(const SampleSet& samples, const Grid& grid, const PipelineConfig& config)
{
    PipelineResult out;
    const Index T = static_cast<Index>(samples.per_type.size());
    const Index V = grid.size();
    try {
        if (T < 1) throw DomainError("no types sampled");
        for (const auto& s : samples.per_type) out.empiricals.push_back(empirical(s, grid));
    } catch (const std::exception& e) {
        throw PipelineError("empirical", e.what());
    }

    out.eps_S = config.eps_S ? *config.eps_S : seller_eps(samples.samples_per_type(), V, config.eps_constant);
    try {
        std::vector<Distribution> projected;
        for (const auto& e : out.empiricals) {
            out.projections.push_back(project_mhr_like(e, out.eps_S, config.mhr));
            projected.push_back(out.projections.back().result);
        }
        out.projected = Market(std::move(projected), Vector<double>::Constant(T, 1.0 / static_cast<double>(T)));
    } catch (const std::exception& e) {
        throw PipelineError("project_mhr_like", e.what());
    }

    try {
        out.optimal = optimal_segmentation(out.projected, config.lambda);
    } catch (const std::exception& e) {
        throw PipelineError("optimal_segmentation", e.what());
    }

    try {
        const double eps = out.eps_S * config.belief_slack;
        out.schedule = config.eps_I ? explicit_schedule(eps, *config.eps_I, T) : epsilon_schedule(eps, T, V);
    } catch (const std::exception& e) {
        throw PipelineError("epsilon_schedule", e.what());
    }

    try {
        out.robust = robustify_segmentation(out.projected, out.optimal.segmentation, {}, out.schedule);
    } catch (const std::exception& e) {
        throw PipelineError("robustify_segmentation", e.what());
    }
    return out;
}

namespace {

class Adversary {
public:
    Adversary(const Market& market, double eps, const Segmentation& seg, double lambda, const AdversaryOptions& opt)
        : market_(market), eps_(eps), seg_(seg), lambda_(lambda), opt_(opt)
    {
        for (const auto& d : market.types()) truth_.push_back(d.quantiles());
        offsets_.assign(truth_.size(), Vector<double>::Zero(market.num_values()));
        for (int k = -opt.steps; k <= opt.steps; ++k) grid_.push_back(eps * k / opt.steps);
    }

    AdversarialOutcome run()
    {
        AdversarialOutcome out;
        out.truthful = evaluate<double>(market_, seg_, TrueMonopoly{opt_.tie}, lambda_).objective;
        if (opt_.seed) {
            std::mt19937_64 rng(*opt_.seed);
            std::uniform_int_distribution<size_t> pick(0, grid_.size() - 1);
            for (size_t t = 0; t < truth_.size(); ++t)
                for (Index i = 1; i < market_.num_values(); ++i) set(t, i, grid_[pick(rng)]);
        }
        double best = objective();
        for (int sweep = 0; sweep < opt_.sweeps && eps_ > 0; ++sweep) {
            for (size_t t = 0; t < truth_.size(); ++t)
                for (Index i = 1; i < market_.num_values(); ++i) {
                    const auto saved = offsets_[t];
                    Vector<double> keep = saved;
                    for (double o : grid_) {
                        offsets_[t] = saved;
                        set(t, i, o);
                        const double val = objective();
                        if (val < best - 1e-12) {
                            best = val;
                            keep = offsets_[t];
                        }
                    }
                    offsets_[t] = keep;
                }
        }
        out.belief.per_type = beliefs();
        out.adversarial = objective();
        return out;
    }

private:
    // Offset of value i for type t, with monotone repair of the neighbours.
    void set(size_t t, Index i, double o)
    {
        Vector<double> q = belief_quantiles(t);
        q(i) = std::clamp(truth_[t](i) + o, 0.0, 1.0);
        for (Index j = 1; j < i; ++j) q(j) = std::max(q(j), q(i));
        for (Index j = i + 1; j < q.size(); ++j) q(j) = std::min(q(j), q(i));
        offsets_[t] = q - truth_[t];
    }

    Vector<double> belief_quantiles(size_t t) const
    {
        Vector<double> q = (truth_[t] + offsets_[t]).cwiseMax(0.0).cwiseMin(1.0);
        q(0) = 1.0;
        return q;
    }

    std::vector<Distribution> beliefs() const
    {
        std::vector<Distribution> out;
        for (size_t t = 0; t < truth_.size(); ++t)
            out.push_back(Distribution::from_quantiles(market_.grid(), belief_quantiles(t)));
        return out;
    }

    double objective() const
    {
        return evaluate<double>(market_, seg_, BeliefMonopoly<double>{beliefs(), opt_.tie}, lambda_).objective;
    }

    const Market& market_;
    double eps_;
    const Segmentation& seg_;
    double lambda_;
    AdversaryOptions opt_;
    std::vector<Vector<double>> truth_;
    std::vector<Vector<double>> offsets_;
    std::vector<double> grid_;
};

} // namespace

AdversarialOutcome adversarial_belief(const Market& market, double eps, const Segmentation& segmentation,
                                      double lambda, const AdversaryOptions& options)
{
    if (eps < 0) throw DomainError("eps must be non-negative");
    if (options.steps < 1 || options.sweeps < 0) throw DomainError("adversary needs steps >= 1 and sweeps >= 0");
    return Adversary(market, eps, segmentation, lambda, options).run();
}

double impossibility_demo(double delta, Index m)
{
    if (delta < 0 || delta > 0.5) throw DomainError("delta must lie in [0, 1/2]");
    if (m < 0) throw DomainError("sample count must be non-negative");
    const double p = 0.5 - delta;
    if (p <= 0) return 0.0;
    // Pr[Bin(m, p) > m/2], summed in log space.
    const double md = static_cast<double>(m);
    const double lp = std::log(p), lq = std::log1p(-p);
    const double lm = std::lgamma(md + 1);
    double total = 0.0;
    for (Index k = m / 2 + 1; k <= m; ++k) {
        const double kd = static_cast<double>(k);
        total += std::exp(lm - std::lgamma(kd + 1) - std::lgamma(md - kd + 1) + kd * lp + (md - kd) * lq);
    }
    return std::min(total, 1.0);
}

} // namespace pricedisc
