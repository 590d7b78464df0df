#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trf/matrix.hpp"

namespace trf {

// Ensemble of curves on a shared j-grid, with optional per-point
// availability (conditional-probability curves can have missing points).
struct CurveEnsemble {
    Matrix curves;            // n_curves x n_points
    std::vector<char> avail;  // same shape row-major; empty means complete

    bool complete() const { return avail.empty(); }
    bool is_avail(std::size_t i, std::size_t t) const {
        return avail.empty() || avail[i * curves.cols() + t] != 0;
    }
};

struct DepthResult {
    std::vector<double> depth;            // NaN where undefined
    std::vector<std::uint64_t> contained; // complete data: integer contained-pair
                                          // tallies, comparable across algorithms
    std::vector<char> defined;
    std::vector<std::string> warnings;
};

// Modified band depth with J=2: depth(f) = average over unordered curve
// pairs {g,h} of the fraction of points with min(g,h) <= f <= max(g,h),
// the fraction taken over points where f, g, h are all available (pairs
// with no such point are excluded from the average).  Complete data uses
// the O(n log n)-per-point rank algorithm; masked data falls back to pair
// enumeration.  Curves with zero available points get no depth.
DepthResult modified_band_depth(const CurveEnsemble& ensemble);

// Direct pair enumeration; the oracle the fast path is checked against.
DepthResult modified_band_depth_naive(const CurveEnsemble& ensemble);

struct FBoxSummary {
    std::vector<double> depth;
    std::size_t median_index = 0;          // argmax depth, ties to lower index
    std::vector<double> c50_lo, c50_hi;    // 50% central region
    std::vector<double> env_lo, env_hi;    // whisker envelope
    std::vector<char> point_defined;       // any curve available at this point
};

// Central region from the ceil(n/2) deepest curves (depth descending,
// index ascending on ties); envelope from all defined curves.
FBoxSummary fbox_summary(const CurveEnsemble& ensemble);

} // namespace trf
