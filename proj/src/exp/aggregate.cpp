#include "macroforge/exp/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

#include "macroforge/errors.hpp"

namespace macroforge::exp {

double t_quantile_975(int df) {
    if (df < 1) throw InvalidArgumentError("t quantile needs at least 1 degree of freedom");
    const boost::math::students_t dist(static_cast<double>(df));
    return boost::math::quantile(dist, 0.975);
}

double mean_of(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

double ci_halfwidth_95(const std::vector<double>& xs) {
    const std::size_t n = xs.size();
    if (n < 2) throw InvalidArgumentError("confidence interval needs at least two samples");
    const double m = mean_of(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    return t_quantile_975(static_cast<int>(n) - 1) * sd / std::sqrt(static_cast<double>(n));
}

AggregatedCurve aggregate_curves(const std::vector<learn::LearningCurve>& curves,
                                 int buckets, std::int64_t budget) {
    if (curves.size() < 2)
        throw InvalidArgumentError("curve aggregation needs at least two seeds "
                                   "(confidence interval undefined otherwise)");
    if (buckets < 1) throw InvalidArgumentError("bucket count must be positive");
    if (budget <= 0)
        for (const auto& c : curves)
            if (!c.points.empty()) budget = std::max(budget, c.points.back().timestep);
    if (budget <= 0) throw InvalidArgumentError("cannot infer a budget from empty curves");

    const double width = static_cast<double>(budget) / buckets;
    const std::size_t n_seeds = curves.size();
    const std::size_t nb = static_cast<std::size_t>(buckets);

    // Per-seed bucket means with carry.
    std::vector<std::vector<double>> series(n_seeds, std::vector<double>(nb, 0.0));
    for (std::size_t s = 0; s < n_seeds; ++s) {
        std::vector<double> sum(nb, 0.0);
        std::vector<int> cnt(nb, 0);
        for (const learn::CurvePoint& p : curves[s].points) {
            const auto raw = static_cast<std::int64_t>(
                static_cast<double>(std::max<std::int64_t>(p.timestep, 1) - 1) / width);
            const std::size_t b = static_cast<std::size_t>(
                std::min<std::int64_t>(raw, static_cast<std::int64_t>(nb) - 1));
            sum[b] += p.episode_return;
            ++cnt[b];
        }
        if (std::all_of(cnt.begin(), cnt.end(), [](int c) { return c == 0; }))
            throw InvalidArgumentError("a curve has no recorded episodes");
        // forward carry, then backfill the leading gap with the first value
        double carry = 0.0;
        bool seen = false;
        for (std::size_t b = 0; b < nb; ++b) {
            if (cnt[b] > 0) {
                carry = sum[b] / cnt[b];
                seen = true;
            } else if (!seen) {
                series[s][b] = std::numeric_limits<double>::quiet_NaN();
                continue;
            }
            series[s][b] = carry;
        }
        for (std::size_t b = nb - 1; b-- > 0;) {
            if (std::isnan(series[s][b]))
                series[s][b] = series[s][b + 1];
        }
    }

    AggregatedCurve out;
    out.timestep.reserve(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        out.timestep.push_back(static_cast<std::int64_t>(std::llround(width * (b + 1))));
        std::vector<double> samples;
        samples.reserve(n_seeds);
        for (std::size_t s = 0; s < n_seeds; ++s) samples.push_back(series[s][b]);
        const double m = mean_of(samples);
        const double hw = ci_halfwidth_95(samples);
        out.mean.push_back(m);
        out.ci_lo.push_back(m - hw);
        out.ci_hi.push_back(m + hw);
    }
    return out;
}

double auc(const std::vector<std::int64_t>& t, const std::vector<double>& y) {
    if (t.size() != y.size() || t.size() < 2)
        throw InvalidArgumentError("auc needs at least two aligned points");
    double area = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i)
        area += 0.5 * (y[i] + y[i - 1]) * static_cast<double>(t[i] - t[i - 1]);
    const double range = static_cast<double>(t.back() - t.front());
    if (range <= 0.0) throw InvalidArgumentError("auc needs an increasing timestep axis");
    return area / range;
}

double curve_auc(const learn::LearningCurve& curve) {
    if (curve.points.size() == 1) return curve.points.front().episode_return;
    std::vector<std::int64_t> t;
    std::vector<double> y;
    t.reserve(curve.points.size());
    y.reserve(curve.points.size());
    for (const learn::CurvePoint& p : curve.points) {
        t.push_back(p.timestep);
        y.push_back(p.episode_return);
    }
    return auc(t, y);
}

} // namespace macroforge::exp
