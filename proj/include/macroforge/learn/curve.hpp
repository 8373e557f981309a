#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace macroforge::learn {

struct CurvePoint {
    std::int64_t timestep = 0;     // cumulative primitive steps at episode end
    double episode_return = 0.0;   // extrinsic return only
};

/// Episode returns of one training run, recorded at episode boundaries.
struct LearningCurve {
    std::vector<CurvePoint> points;
    std::uint64_t seed = 0;
    std::string method;
    std::string action_set;
};

/// CSV with header `timestep,episode_return,seed,method,action_set`.
void write_curve_csv(std::ostream& out, const LearningCurve& curve);
std::string curve_to_csv(const LearningCurve& curve);

} // namespace macroforge::learn
