#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

namespace levylab {

// Crossing primitives shared by the path engines.

// Exact crossing time of a linear segment started at value0 against a level
// above it: (level - value0)/slope when the slope points up, none otherwise.
inline std::optional<double> linear_crossing(double value0, double slope, double level) {
    if (value0 >= level) throw std::invalid_argument("linear_crossing: start value already at or above level");
    if (slope <= 0.0) return std::nullopt;
    return (level - value0) / slope;
}

// Query for the probability that a Brownian bridge over a step of length dt
// with endpoint distances gap_start, gap_end below a barrier touches the
// barrier in between. Non-positive gaps mean the crossing was already
// detected at an endpoint and are rejected.
struct BridgeQuery {
    double sigma;      // > 0
    double dt;         // > 0
    double gap_start;  // >= 0, level minus value at segment start
    double gap_end;    // >= 0, level minus value at segment end
};

inline double bridge_crossing_prob(const BridgeQuery& q) {
    if (!(q.sigma > 0.0)) throw std::invalid_argument("bridge_crossing_prob: sigma must be positive");
    if (!(q.dt > 0.0)) throw std::invalid_argument("bridge_crossing_prob: dt must be positive");
    if (q.gap_start < 0.0 || q.gap_end < 0.0) throw std::invalid_argument("bridge_crossing_prob: negative gap");
    return std::exp(-2.0 * q.gap_start * q.gap_end / (q.sigma * q.sigma * q.dt));
}

}  // namespace levylab
