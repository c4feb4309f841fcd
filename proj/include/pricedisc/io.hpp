#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "pricedisc/optimal_segmentation.hpp"
#include "pricedisc/robustify.hpp"

namespace pricedisc::io {

using Json = nlohmann::json;

/// Invalid input file. `path()` names the offending field, e.g.
/// "market.types[1][2]".
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::string path, const std::string& what)
        : std::runtime_error((path.empty() ? std::string("<root>") : path) + ": " + what), path_(std::move(path))
    {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

namespace detail {

inline std::string join(const std::string& path, const std::string& key)
{
    return path.empty() ? key : path + "." + key;
}

inline std::string at(const std::string& path, size_t i)
{
    return path + "[" + std::to_string(i) + "]";
}

inline const Json& field(const Json& j, const std::string& path, const std::string& key)
{
    if (!j.is_object()) throw ScenarioError(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ScenarioError(join(path, key), "missing field");
    return *it;
}

inline const Json& array(const Json& j, const std::string& path)
{
    if (!j.is_array()) throw ScenarioError(path, "expected an array");
    return j;
}

// Runs f, rewrapping domain errors with the path of the object being built.
template <class F>
auto guarded(const std::string& path, F&& f)
{
    try {
        return f();
    } catch (const DomainError& e) {
        throw ScenarioError(path, e.what());
    } catch (const InternalError& e) {
        throw ScenarioError(path, e.what());
    }
}

} // namespace detail

/// Numbers, or strings such as "1/3" and "0.25".
template <class Scalar>
Scalar scalar_from(const Json& j, const std::string& path)
{
    std::string text;
    if (j.is_number())
        text = j.dump();
    else if (j.is_string())
        text = j.get<std::string>();
    else
        throw ScenarioError(path, "expected a number or a fraction string");
    try {
        return parse_scalar<Scalar>(text);
    } catch (const std::exception& e) {
        throw ScenarioError(path, e.what());
    }
}

/// Doubles as numbers, rationals as exact strings.
template <class Scalar>
Json scalar_to(const Scalar& v)
{
    if constexpr (std::is_same_v<Scalar, double>)
        return v;
    else
        return v.str();
}

template <class Scalar>
Vector<Scalar> vector_from(const Json& j, const std::string& path)
{
    detail::array(j, path);
    Vector<Scalar> v(static_cast<Index>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = scalar_from<Scalar>(j[i], detail::at(path, i));
    return v;
}

template <class Scalar>
Json vector_to(const Vector<Scalar>& v)
{
    Json out = Json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(scalar_to(v(i)));
    return out;
}

inline Index index_from(const Json& j, const std::string& path)
{
    if (!j.is_number_integer()) throw ScenarioError(path, "expected an integer");
    return j.get<Index>();
}

/// {"scaled": V} or an explicit list of values.
template <class Scalar>
ValueGrid<Scalar> grid_from(const Json& j, const std::string& path)
{
    if (j.is_object()) {
        const Index V = index_from(detail::field(j, path, "scaled"), detail::join(path, "scaled"));
        return detail::guarded(path, [&] { return ValueGrid<Scalar>::scaled(V); });
    }
    auto values = vector_from<Scalar>(j, path);
    return detail::guarded(path, [&] { return ValueGrid<Scalar>::from_values(std::move(values)); });
}

template <class Scalar>
Json grid_to(const ValueGrid<Scalar>& g)
{
    if (g.is_scaled()) return Json{{"scaled", g.size()}};
    return vector_to(g.values());
}

template <class Scalar>
BasicDistribution<Scalar> distribution_from(const Json& j, const std::string& path)
{
    auto grid = grid_from<Scalar>(detail::field(j, path, "grid"), detail::join(path, "grid"));
    auto pmf = vector_from<Scalar>(detail::field(j, path, "pmf"), detail::join(path, "pmf"));
    return detail::guarded(detail::join(path, "pmf"),
                           [&] { return BasicDistribution<Scalar>(std::move(grid), std::move(pmf)); });
}

template <class Scalar>
Json distribution_to(const BasicDistribution<Scalar>& d)
{
    return Json{{"grid", grid_to(d.grid())}, {"pmf", vector_to(d.pmf())}};
}

/// {"grid": ..., "types": [pmf, ...], "prior": [...]}; the prior defaults to
/// uniform.
template <class Scalar>
BasicMarket<Scalar> market_from(const Json& j, const std::string& path)
{
    const auto grid = grid_from<Scalar>(detail::field(j, path, "grid"), detail::join(path, "grid"));
    const std::string tpath = detail::join(path, "types");
    const Json& types = detail::array(detail::field(j, path, "types"), tpath);
    if (types.empty()) throw ScenarioError(tpath, "market needs at least one type");
    std::vector<BasicDistribution<Scalar>> dists;
    for (size_t t = 0; t < types.size(); ++t) {
        const std::string p = detail::at(tpath, t);
        auto pmf = vector_from<Scalar>(types[t], p);
        dists.push_back(detail::guarded(p, [&] { return BasicDistribution<Scalar>(grid, std::move(pmf)); }));
    }
    const Index T = static_cast<Index>(dists.size());
    Vector<Scalar> prior = Vector<Scalar>::Constant(T, Scalar(1) / Scalar(T));
    const std::string ppath = detail::join(path, "prior");
    if (j.contains("prior")) prior = vector_from<Scalar>(j["prior"], ppath);
    return detail::guarded(ppath, [&] { return BasicMarket<Scalar>(std::move(dists), std::move(prior)); });
}

template <class Scalar>
Json market_to(const BasicMarket<Scalar>& m)
{
    Json types = Json::array();
    for (const auto& d : m.types()) types.push_back(vector_to(d.pmf()));
    return Json{{"grid", grid_to(m.grid())}, {"types", types}, {"prior", vector_to(m.prior())}};
}

template <class Scalar>
BasicSegmentation<Scalar> segmentation_from(const Json& j, const std::string& path)
{
    const std::string spath = detail::join(path, "segments");
    const Json& segs = detail::array(detail::field(j, path, "segments"), spath);
    BasicSegmentation<Scalar> out;
    for (size_t s = 0; s < segs.size(); ++s) {
        const std::string p = detail::at(spath, s);
        BasicSegment<Scalar> seg;
        seg.x = vector_from<Scalar>(detail::field(segs[s], p, "x"), detail::join(p, "x"));
        seg.w = scalar_from<Scalar>(detail::field(segs[s], p, "w"), detail::join(p, "w"));
        if (segs[s].contains("price") && !segs[s]["price"].is_null())
            seg.price = index_from(segs[s]["price"], detail::join(p, "price"));
        out.segments.push_back(std::move(seg));
    }
    return out;
}

/// Segment prices are grid indices; `price_value` is informational.
template <class Scalar>
Json segmentation_to(const BasicSegmentation<Scalar>& seg, const ValueGrid<Scalar>* grid = nullptr)
{
    Json segs = Json::array();
    for (const auto& s : seg.segments) {
        Json o{{"x", vector_to(s.x)}, {"w", scalar_to(s.w)}};
        o["price"] = s.price ? Json(*s.price) : Json(nullptr);
        if (s.price && grid) o["price_value"] = scalar_to((*grid)[*s.price]);
        segs.push_back(std::move(o));
    }
    return Json{{"segments", segs}};
}

/// Parses a segmentation and validates it against `market`.
template <class Scalar>
BasicSegmentation<Scalar> segmentation_for(const BasicMarket<Scalar>& market, const Json& j, const std::string& path)
{
    auto seg = segmentation_from<Scalar>(j, path);
    detail::guarded(path, [&] {
        validate(market, seg);
        for (const auto& s : seg.segments)
            if (s.price && (*s.price < 0 || *s.price >= market.num_values()))
                throw DomainError("segment price index is off the grid");
        return 0;
    });
    return seg;
}

template <class Scalar>
BasicSegmentMap<Scalar> segmap_from(const Json& j, const std::string& path)
{
    const std::string gpath = detail::join(path, "G");
    const Json& rows = detail::array(detail::field(j, path, "G"), gpath);
    BasicSegmentMap<Scalar> out;
    for (size_t t = 0; t < rows.size(); ++t) {
        const auto row = vector_from<Scalar>(rows[t], detail::at(gpath, t));
        if (t == 0) out.G.resize(static_cast<Index>(rows.size()), row.size());
        if (row.size() != out.G.cols()) throw ScenarioError(detail::at(gpath, t), "rows differ in length");
        out.G.row(static_cast<Index>(t)) = row.transpose();
    }
    return out;
}

template <class Scalar>
Json segmap_to(const BasicSegmentMap<Scalar>& map)
{
    Json rows = Json::array();
    for (Index t = 0; t < map.G.rows(); ++t) rows.push_back(vector_to<Scalar>(map.G.row(t).transpose()));
    return Json{{"G", rows}};
}

Json schedule_to(const EpsilonSchedule& s);
EpsilonSchedule schedule_from(const Json& j, const std::string& path);

Json robustified_to(const RobustifiedSegmentation& r, const Grid* grid = nullptr);
RobustifiedSegmentation robustified_from(const Json& j, const std::string& path);

Json report_to(const RobustnessReport& r);

TieBreak tie_from(const Json& j, const std::string& path);
std::string to_string(TieBreak t);

struct ModelSection {
    /// "bayesian", "sample" or "bandit".
    std::string mode = "bayesian";
    std::optional<Index> m;
    std::optional<std::uint64_t> seed;
    std::optional<double> eps_S;
    std::optional<double> eps_I;
    std::optional<double> belief_slack;
    /// "ucb" or "etc".
    std::string seller = "ucb";
    TieBreak tie_break = TieBreak::low;
    std::optional<double> C;
    std::optional<Index> recompute_every;
};

ModelSection model_from(const Json& j, const std::string& path);
Json model_to(const ModelSection& m);

template <class Scalar>
struct BasicScenario {
    BasicMarket<Scalar> market;
    Scalar lambda{0};
    ModelSection model;
};

/// {"market": ..., "lambda": ..., "model": {...}}. A bare market object is
/// accepted as a scenario with lambda 0.
template <class Scalar>
BasicScenario<Scalar> scenario_from(const Json& j)
{
    if (!j.is_object()) throw ScenarioError("", "expected an object");
    BasicScenario<Scalar> s;
    if (!j.contains("market")) {
        s.market = market_from<Scalar>(j, "");
        return s;
    }
    s.market = market_from<Scalar>(j["market"], "market");
    if (j.contains("lambda")) {
        s.lambda = scalar_from<Scalar>(j["lambda"], "lambda");
        if (s.lambda < Scalar(0) || s.lambda > Scalar(1)) throw ScenarioError("lambda", "must lie in [0, 1]");
    }
    if (j.contains("model")) s.model = model_from(j["model"], "model");
    return s;
}

template <class Scalar>
Json scenario_to(const BasicScenario<Scalar>& s)
{
    return Json{{"market", market_to(s.market)}, {"lambda", scalar_to(s.lambda)}, {"model", model_to(s.model)}};
}

/// Reads and parses a JSON file; syntax errors become ScenarioError.
Json load_json(const std::filesystem::path& file);

} // namespace pricedisc::io
