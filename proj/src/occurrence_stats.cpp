#include "trf/occurrence_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace trf {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

} // namespace

CondProbTable cond_prob_table(const OccurrenceField& occ, const GaugeNetwork& network) {
    const std::size_t p = occ.n_sites;
    const std::size_t n = occ.n_steps;
    if (p < 2) throw std::invalid_argument("cond_prob_table: need at least 2 sites");
    if (network.size() != p) {
        throw std::invalid_argument("cond_prob_table: network size mismatch");
    }

    CondProbTable table;
    table.phi_d = Matrix(p, p, nan);
    table.phi_r = Matrix(p, p, nan);
    table.counts_d = Matrix(p, p, 0.0);
    table.counts_r = Matrix(p, p, 0.0);

    // Per time step, the length of the all-dry (all-wet) prefix of the
    // neighbor ordering decides which conditioning sets the step joins:
    // {first j neighbors dry} holds iff prefix >= j.  Tally by exact prefix
    // length, then suffix-sum, which is O(n + p) per site.
    std::vector<std::size_t> cnt_d(p), cnt_r(p), num_d(p), num_r(p);
    for (std::size_t i = 0; i < p; ++i) {
        const auto& order = network.nn_order[i];
        std::fill(cnt_d.begin(), cnt_d.end(), 0);
        std::fill(cnt_r.begin(), cnt_r.end(), 0);
        std::fill(num_d.begin(), num_d.end(), 0);
        std::fill(num_r.begin(), num_r.end(), 0);
        std::size_t marg_dry = 0;

        for (std::size_t t = 0; t < n; ++t) {
            std::size_t run_d = 0;
            while (run_d < order.size() &&
                   occ.at(static_cast<std::size_t>(order[run_d]), t) == 0) {
                ++run_d;
            }
            std::size_t run_r = 0;
            while (run_r < order.size() &&
                   occ.at(static_cast<std::size_t>(order[run_r]), t) == 1) {
                ++run_r;
            }
            const bool dry_i = occ.at(i, t) == 0;
            marg_dry += dry_i ? 1 : 0;
            if (run_d > 0) {
                ++cnt_d[run_d - 1];
                if (dry_i) ++num_d[run_d - 1];
            }
            if (run_r > 0) {
                ++cnt_r[run_r - 1];
                if (!dry_i) ++num_r[run_r - 1];
            }
        }

        table.counts_d(i, 0) = static_cast<double>(n);
        table.counts_r(i, 0) = static_cast<double>(n);
        if (n > 0) {
            table.phi_d(i, 0) = static_cast<double>(marg_dry) / static_cast<double>(n);
            table.phi_r(i, 0) = static_cast<double>(n - marg_dry) / static_cast<double>(n);
        }

        std::size_t acc_cd = 0, acc_cr = 0, acc_nd = 0, acc_nr = 0;
        for (std::size_t j = p - 1; j >= 1; --j) {
            acc_cd += cnt_d[j - 1];
            acc_nd += num_d[j - 1];
            acc_cr += cnt_r[j - 1];
            acc_nr += num_r[j - 1];
            table.counts_d(i, j) = static_cast<double>(acc_cd);
            table.counts_r(i, j) = static_cast<double>(acc_cr);
            if (acc_cd > 0) {
                table.phi_d(i, j) = static_cast<double>(acc_nd) / static_cast<double>(acc_cd);
            }
            if (acc_cr > 0) {
                table.phi_r(i, j) = static_cast<double>(acc_nr) / static_cast<double>(acc_cr);
            }
        }
    }
    return table;
}

SimultaneousRainPMF simultaneous_rain_pmf(const OccurrenceField& occ) {
    SimultaneousRainPMF pmf;
    pmf.psi.assign(occ.n_sites + 1, 0.0);
    if (occ.n_steps == 0) return pmf;
    for (std::size_t t = 0; t < occ.n_steps; ++t) {
        std::size_t wet = 0;
        for (std::size_t i = 0; i < occ.n_sites; ++i) wet += occ.at(i, t);
        pmf.psi[wet] += 1.0;
    }
    for (auto& v : pmf.psi) v /= static_cast<double>(occ.n_steps);
    return pmf;
}

std::pair<double, double> indicator_correlations(double p_d, double p_dd, double p_rr) {
    if (!(p_d > 0.0) || !(p_d < 1.0)) {
        throw std::invalid_argument("indicator_correlations: degenerate marginal p_D");
    }
    if (p_dd < 0.0 || p_dd > 1.0 || p_rr < 0.0 || p_rr > 1.0) {
        throw std::invalid_argument("indicator_correlations: probabilities must lie in [0,1]");
    }
    const double corr_dry = (p_dd - p_d) / (1.0 - p_d);
    const double corr_rain = (p_rr - (1.0 - p_d)) / p_d;
    return {corr_dry, corr_rain};
}

SpellSummary spell_summary(const OccurrenceField& occ) {
    SpellSummary s;
    s.dry_runs.resize(occ.n_sites);
    s.wet_runs.resize(occ.n_sites);
    for (std::size_t i = 0; i < occ.n_sites; ++i) {
        std::size_t t = 0;
        while (t < occ.n_steps) {
            const std::uint8_t state = occ.at(i, t);
            std::size_t len = 0;
            while (t < occ.n_steps && occ.at(i, t) == state) {
                ++len;
                ++t;
            }
            auto& hist = state ? s.wet_runs[i] : s.dry_runs[i];
            ++hist[len];
        }
    }
    return s;
}

MedianCurve median_curve(const CondProbTable& table, CondKind kind) {
    const std::size_t p = table.n_sites();
    const Matrix& phi = kind == CondKind::dry ? table.phi_d : table.phi_r;
    const Matrix& counts = kind == CondKind::dry ? table.counts_d : table.counts_r;

    MedianCurve curve;
    curve.value.assign(p, nan);
    curve.defined.assign(p, 0);
    curve.n_available.assign(p, 0);
    std::vector<double> vals;
    for (std::size_t j = 0; j < p; ++j) {
        vals.clear();
        for (std::size_t i = 0; i < p; ++i) {
            if (counts(i, j) > 0) vals.push_back(phi(i, j));
        }
        curve.n_available[j] = static_cast<int>(vals.size());
        if (vals.empty()) continue;
        std::sort(vals.begin(), vals.end());
        const std::size_t m = vals.size();
        curve.value[j] = (m % 2 == 1)
            ? vals[m / 2]
            : 0.5 * (vals[m / 2 - 1] + vals[m / 2]);
        curve.defined[j] = 1;
    }
    return curve;
}

} // namespace trf
