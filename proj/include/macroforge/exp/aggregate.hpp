#pragma once

#include <cstdint>
#include <vector>

#include "macroforge/learn/curve.hpp"

namespace macroforge::exp {

/// Across-seed mean and 95% confidence band per timestep bucket.
struct AggregatedCurve {
    std::vector<std::int64_t> timestep; // bucket end
    std::vector<double> mean;
    std::vector<double> ci_lo;
    std::vector<double> ci_hi;
};

/// Two-sided 0.975 Student-t quantile for the given degrees of freedom.
double t_quantile_975(int df);

/// Sample mean and 95% t-interval half-width (n-1 degrees of freedom).
double mean_of(const std::vector<double>& xs);
double ci_halfwidth_95(const std::vector<double>& xs);

/// Buckets the timestep axis of each per-seed curve into `buckets` equal
/// bins over [0, budget], averages episode returns per (seed, bucket),
/// carries a seed's previous value through its empty buckets (and its first
/// value backward over leading empties), then reports the across-seed mean
/// with a 95% t-interval. Requires at least two curves.
AggregatedCurve aggregate_curves(const std::vector<learn::LearningCurve>& curves,
                                 int buckets, std::int64_t budget);

/// Normalized trapezoidal area under (t, y): integral divided by the
/// timestep range. Needs at least two points.
double auc(const std::vector<std::int64_t>& t, const std::vector<double>& y);

/// Normalized AUC of one raw learning curve.
double curve_auc(const learn::LearningCurve& curve);

} // namespace macroforge::exp
