#include "pricedisc/io.hpp"

#include <fstream>

namespace pricedisc::io {

namespace {

double number(const Json& j, const std::string& path)
{
    return scalar_from<double>(j, path);
}

template <class T>
std::optional<T> optional_field(const Json& j, const std::string& path, const std::string& key)
{
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    const std::string p = detail::join(path, key);
    if constexpr (std::is_same_v<T, double>) {
        return number(j[key], p);
    } else {
        if (!j[key].is_number_integer()) throw ScenarioError(p, "expected an integer");
        if (j[key].get<long long>() < 0) throw ScenarioError(p, "must be non-negative");
        return j[key].get<T>();
    }
}

std::string string_field(const Json& j, const std::string& path, const std::string& key, const std::string& fallback)
{
    if (!j.contains(key)) return fallback;
    if (!j[key].is_string()) throw ScenarioError(detail::join(path, key), "expected a string");
    return j[key].get<std::string>();
}

} // namespace

Json schedule_to(const EpsilonSchedule& s)
{
    return Json{{"eps_S", s.eps_S}, {"eps_I", s.eps_I}, {"eps_R", s.eps_R}};
}

EpsilonSchedule schedule_from(const Json& j, const std::string& path)
{
    EpsilonSchedule s;
    s.eps_S = number(detail::field(j, path, "eps_S"), detail::join(path, "eps_S"));
    s.eps_I = number(detail::field(j, path, "eps_I"), detail::join(path, "eps_I"));
    s.eps_R = number(detail::field(j, path, "eps_R"), detail::join(path, "eps_R"));
    return s;
}

Json robustified_to(const RobustifiedSegmentation& r, const Grid* grid)
{
    Json types = Json::array();
    for (const auto& t : r.robust_types) types.push_back(t ? Json(*t) : Json(nullptr));
    return Json{{"base", segmentation_to(r.base, grid)},
                {"robust", segmentation_to(r.robust, grid)},
                {"intended_prices", r.intended_prices},
                {"insignificant", r.insignificant},
                {"robust_types", types},
                {"schedule", schedule_to(r.schedule)}};
}

RobustifiedSegmentation robustified_from(const Json& j, const std::string& path)
{
    RobustifiedSegmentation r;
    r.base = segmentation_from<double>(detail::field(j, path, "base"), detail::join(path, "base"));
    r.robust = segmentation_from<double>(detail::field(j, path, "robust"), detail::join(path, "robust"));
    r.schedule = schedule_from(detail::field(j, path, "schedule"), detail::join(path, "schedule"));
    const size_t n = r.base.size();

    const std::string ppath = detail::join(path, "intended_prices");
    const Json& prices = detail::array(detail::field(j, path, "intended_prices"), ppath);
    for (size_t i = 0; i < prices.size(); ++i) r.intended_prices.push_back(index_from(prices[i], detail::at(ppath, i)));

    const std::string ipath = detail::join(path, "insignificant");
    const Json& insig = detail::array(detail::field(j, path, "insignificant"), ipath);
    for (size_t i = 0; i < insig.size(); ++i) {
        if (!insig[i].is_boolean()) throw ScenarioError(detail::at(ipath, i), "expected a boolean");
        r.insignificant.push_back(insig[i].get<bool>());
    }

    const std::string tpath = detail::join(path, "robust_types");
    const Json& types = detail::array(detail::field(j, path, "robust_types"), tpath);
    for (size_t i = 0; i < types.size(); ++i)
        r.robust_types.push_back(types[i].is_null() ? std::nullopt
                                                    : std::optional<Index>(index_from(types[i], detail::at(tpath, i))));

    if (r.intended_prices.size() != n) throw ScenarioError(ppath, "needs one entry per base segment");
    if (r.insignificant.size() != n) throw ScenarioError(ipath, "needs one entry per base segment");
    if (r.robust_types.size() != n) throw ScenarioError(tpath, "needs one entry per base segment");
    if (r.robust.size() < n) throw ScenarioError(detail::join(path, "robust"), "fewer segments than the base");
    return r;
}

Json report_to(const RobustnessReport& r)
{
    Json segs = Json::array();
    for (const auto& a : r.segments)
        segs.push_back(Json{{"index", a.index},
                            {"significant", a.significant},
                            {"weight_ok", a.weight_ok},
                            {"mixture_ok", a.mixture_ok},
                            {"robust_ok", a.robust_ok},
                            {"weight_margin", a.weight_margin},
                            {"mixture_margin", a.mixture_margin},
                            {"robust_margin", a.robust_margin}});
    return Json{{"passed", r.passed()},
                {"weights_ok", r.weights_ok},
                {"mixtures_ok", r.mixtures_ok},
                {"robustness_ok", r.robustness_ok},
                {"centroid_ok", r.centroid_ok},
                {"centroid_error", r.centroid_error},
                {"base_sw", r.base_sw},
                {"base_revenue", r.base_revenue},
                {"worst_sw", r.worst_sw},
                {"min_revenue", r.min_revenue},
                {"max_revenue", r.max_revenue},
                {"sw_constant", r.sw_constant},
                {"revenue_constant", r.revenue_constant},
                {"segments", segs}};
}

TieBreak tie_from(const Json& j, const std::string& path)
{
    if (j == "low") return TieBreak::low;
    if (j == "high") return TieBreak::high;
    throw ScenarioError(path, "expected \"low\" or \"high\"");
}

std::string to_string(TieBreak t)
{
    return t == TieBreak::low ? "low" : "high";
}

ModelSection model_from(const Json& j, const std::string& path)
{
    if (!j.is_object()) throw ScenarioError(path, "expected an object");
    ModelSection m;
    m.mode = string_field(j, path, "mode", m.mode);
    if (m.mode != "bayesian" && m.mode != "sample" && m.mode != "bandit")
        throw ScenarioError(detail::join(path, "mode"), "expected bayesian, sample or bandit");
    m.m = optional_field<Index>(j, path, "m");
    m.seed = optional_field<std::uint64_t>(j, path, "seed");
    m.eps_S = optional_field<double>(j, path, "eps_S");
    m.eps_I = optional_field<double>(j, path, "eps_I");
    m.belief_slack = optional_field<double>(j, path, "belief_slack");
    m.seller = string_field(j, path, "seller", m.seller);
    if (m.seller != "ucb" && m.seller != "etc") throw ScenarioError(detail::join(path, "seller"), "expected ucb or etc");
    if (j.contains("tie_break")) m.tie_break = tie_from(j["tie_break"], detail::join(path, "tie_break"));
    m.C = optional_field<double>(j, path, "C");
    if (m.C && !(*m.C > 0)) throw ScenarioError(detail::join(path, "C"), "must be positive");
    m.recompute_every = optional_field<Index>(j, path, "recompute_every");
    if (m.recompute_every && *m.recompute_every < 1)
        throw ScenarioError(detail::join(path, "recompute_every"), "must be at least 1");
    return m;
}

Json model_to(const ModelSection& m)
{
    Json j{{"mode", m.mode}, {"seller", m.seller}, {"tie_break", to_string(m.tie_break)}};
    if (m.m) j["m"] = *m.m;
    if (m.seed) j["seed"] = *m.seed;
    if (m.eps_S) j["eps_S"] = *m.eps_S;
    if (m.eps_I) j["eps_I"] = *m.eps_I;
    if (m.belief_slack) j["belief_slack"] = *m.belief_slack;
    if (m.C) j["C"] = *m.C;
    if (m.recompute_every) j["recompute_every"] = *m.recompute_every;
    return j;
}

Json load_json(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in) throw ScenarioError("", "cannot open " + file.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ScenarioError("", file.string() + ": " + e.what());
    }
}

} // namespace pricedisc::io
