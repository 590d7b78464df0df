#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "trf/gauge.hpp"
#include "trf/matrix.hpp"

namespace trf {

// Conditional dry/wet probabilities phi(i,j) = P(site i dry/wet | its j
// nearest neighbors all dry/wet), j = 0..p-1, with phi(i,0) the marginal.
// An entry is available iff its conditioning set was nonempty; unavailable
// entries carry NaN and count 0 — never a fabricated 0.
struct CondProbTable {
    Matrix phi_d, phi_r;     // sites x p; NaN where unavailable
    Matrix counts_d, counts_r; // conditioning-set sizes (integers)

    bool available_d(std::size_t i, std::size_t j) const { return counts_d(i, j) > 0; }
    bool available_r(std::size_t i, std::size_t j) const { return counts_r(i, j) > 0; }
    std::size_t n_sites() const { return phi_d.rows(); }
};

struct SimultaneousRainPMF {
    std::vector<double> psi; // j = 0..p
};

struct SpellSummary {
    // histogram per site: run length -> count of maximal runs
    std::vector<std::map<std::size_t, std::size_t>> dry_runs;
    std::vector<std::map<std::size_t, std::size_t>> wet_runs;
};

CondProbTable cond_prob_table(const OccurrenceField& occ, const GaugeNetwork& network);

SimultaneousRainPMF simultaneous_rain_pmf(const OccurrenceField& occ);

// The displayed indicator correlations:
//   corr_dry  = (p_DD - p_D) / (1 - p_D)
//   corr_rain = (p_RR - (1 - p_D)) / p_D
std::pair<double, double> indicator_correlations(double p_d, double p_dd, double p_rr);

SpellSummary spell_summary(const OccurrenceField& occ);

enum class CondKind { dry, rain };

// Median across sites of the available phi values at each j; even counts
// average the two central order statistics.  Points with zero available
// sites are flagged undefined.
struct MedianCurve {
    std::vector<double> value;   // NaN where undefined
    std::vector<char> defined;
    std::vector<int> n_available; // sites contributing at each j
};

MedianCurve median_curve(const CondProbTable& table, CondKind kind);

} // namespace trf
