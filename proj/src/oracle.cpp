#include "pricedisc/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

namespace pricedisc {

namespace {

double best_objective(const Market& market, const Vector<double>& x, double lambda)
{
    const Vector<double> rev = market.revenues_at(x);
    const Vector<double> cs = market.surpluses_at(x);
    const double top = rev.maxCoeff();
    double best = -std::numeric_limits<double>::infinity();
    for (Index i = 0; i < rev.size(); ++i)
        if (rev(i) >= top - 1e-12) best = std::max(best, lambda * rev(i) + (1 - lambda) * cs(i));
    return best;
}

// Minimizes a convex function of one variable on [lo, hi].
double golden_min(const std::function<double(double)>& f, double lo, double hi, int iters = 120)
{
    const double r = (std::sqrt(5.0) - 1) / 2;
    double a = lo, b = hi;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    for (int k = 0; k < iters; ++k) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return std::min({fc, fd, f(lo), f(hi)});
}

} // namespace

OracleResult brute_force_oracle(const Market& market, double lambda, int resolution)
{
    const Index T = market.num_types();
    if (T < 1 || T > 3) throw DomainError("brute-force oracle supports 1 to 3 types");
    if (resolution < 1) throw DomainError("oracle resolution must be positive");
    const Vector<double>& tau = market.prior();
    const double n = resolution;

    OracleResult out;
    if (T == 1) {
        out.objective = best_objective(market, Vector<double>::Ones(1), lambda);
        out.candidates = 1;
        return out;
    }

    if (T == 2) {
        std::vector<std::pair<double, double>> pts;
        for (int k = 0; k <= resolution; ++k) {
            Vector<double> x(2);
            x << k / n, 1 - k / n;
            pts.emplace_back(k / n, best_objective(market, x, lambda));
        }
        out.candidates = static_cast<Index>(pts.size());
        // Concave envelope over [0,1] by a direct scan of point pairs.
        const double a = tau(0);
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& [xi, fi] : pts)
            for (const auto& [xj, fj] : pts) {
                if (xi > a || xj < a) continue;
                const double v = xi == xj ? fi : fi + (fj - fi) * (a - xi) / (xj - xi);
                best = std::max(best, v);
            }
        out.objective = best;
        return out;
    }

    // T == 3: the envelope value equals min over (u, v) of
    // max_i f_i + u (tau_0 - x_i0) + v (tau_1 - x_i1).
    std::vector<std::array<double, 3>> pts;
    for (int i = 0; i <= resolution; ++i)
        for (int j = 0; i + j <= resolution; ++j) {
            Vector<double> x(3);
            x << i / n, j / n, 1 - (i + j) / n;
            pts.push_back({i / n, j / n, best_objective(market, x, lambda)});
        }
    out.candidates = static_cast<Index>(pts.size());
    double fmax = 0;
    for (const auto& p : pts) fmax = std::max(fmax, std::abs(p[2]));
    const double tmin = std::max(1e-6, std::min({tau(0), tau(1), tau(2)}));
    const double bound = 4 * (fmax + 1) / tmin;
    const auto g = [&](double u, double v) {
        double m = -std::numeric_limits<double>::infinity();
        for (const auto& p : pts) m = std::max(m, p[2] + u * (tau(0) - p[0]) + v * (tau(1) - p[1]));
        return m;
    };
    out.objective = golden_min(
        [&](double u) { return golden_min([&](double v) { return g(u, v); }, -bound, bound, 90); }, -bound, bound, 90);
    return out;
}

} // namespace pricedisc
