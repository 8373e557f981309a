#include "macroforge/learn/curve.hpp"

#include <ostream>
#include <sstream>

namespace macroforge::learn {

namespace {

// Shortest round-trip formatting keeps curve files byte-stable across runs.
std::string format_double(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    std::string s = out.str();
    // prefer the shortest representation that round-trips
    for (int prec = 1; prec < 17; ++prec) {
        std::ostringstream trial;
        trial.precision(prec);
        trial << v;
        if (std::stod(trial.str()) == v) return trial.str();
    }
    return s;
}

} // namespace

void write_curve_csv(std::ostream& out, const LearningCurve& curve) {
    out << "timestep,episode_return,seed,method,action_set\n";
    for (const CurvePoint& p : curve.points)
        out << p.timestep << ',' << format_double(p.episode_return) << ',' << curve.seed
            << ',' << curve.method << ',' << curve.action_set << '\n';
}

std::string curve_to_csv(const LearningCurve& curve) {
    std::ostringstream out;
    write_curve_csv(out, curve);
    return out.str();
}

} // namespace macroforge::learn
