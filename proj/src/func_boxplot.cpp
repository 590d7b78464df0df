#include "trf/func_boxplot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace trf {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

void check_ensemble(const CurveEnsemble& e) {
    if (e.curves.rows() < 3) {
        throw std::invalid_argument("modified_band_depth: need at least 3 curves");
    }
    if (!e.avail.empty() && e.avail.size() != e.curves.rows() * e.curves.cols()) {
        throw std::invalid_argument("modified_band_depth: availability mask shape mismatch");
    }
}

std::vector<char> curve_defined(const CurveEnsemble& e, DepthResult& res) {
    const std::size_t n = e.curves.rows();
    const std::size_t m = e.curves.cols();
    std::vector<char> defined(n, 1);
    if (!e.complete()) {
        for (std::size_t i = 0; i < n; ++i) {
            bool any = false;
            for (std::size_t t = 0; t < m; ++t) {
                if (e.is_avail(i, t)) {
                    any = true;
                    break;
                }
            }
            if (!any) {
                defined[i] = 0;
                res.warnings.push_back("curve " + std::to_string(i) +
                                       " has no available points; depth undefined");
            }
        }
    }
    return defined;
}

// Complete-data fast path: per point, the number of pairs whose band
// contains curve i is C(n,2) - C(below_i,2) - C(above_i,2), with ties
// counting as contained.  Everything stays in integers, so the tally is
// bit-comparable with naive enumeration.
DepthResult mbd_complete_fast(const CurveEnsemble& e) {
    const std::size_t n = e.curves.rows();
    const std::size_t m = e.curves.cols();
    DepthResult res;
    res.contained.assign(n, 0);
    res.defined.assign(n, 1);

    std::vector<std::size_t> idx(n);
    for (std::size_t t = 0; t < m; ++t) {
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return e.curves(a, t) < e.curves(b, t);
        });
        std::size_t r = 0;
        while (r < n) {
            std::size_t r2 = r;
            while (r2 + 1 < n &&
                   e.curves(idx[r2 + 1], t) == e.curves(idx[r], t)) {
                ++r2;
            }
            const std::uint64_t below = r;           // strictly smaller values
            const std::uint64_t above = n - 1 - r2;  // strictly larger values
            const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
            const std::uint64_t cont =
                total - below * (below - 1) / 2 - above * (above - 1) / 2;
            for (std::size_t q = r; q <= r2; ++q) res.contained[idx[q]] += cont;
            r = r2 + 1;
        }
    }

    const double denom = static_cast<double>(m) *
        (static_cast<double>(n) * (n - 1) / 2.0);
    res.depth.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        res.depth[i] = static_cast<double>(res.contained[i]) / denom;
    }
    return res;
}

// Pair enumeration honoring availability: per pair {g,h}, the fraction is
// over points where f, g, h are all available; empty pairs are dropped
// from f's average.
DepthResult mbd_enumerate(const CurveEnsemble& e, DepthResult res,
                          const std::vector<char>& defined) {
    const std::size_t n = e.curves.rows();
    const std::size_t m = e.curves.cols();
    res.depth.assign(n, nan);
    res.defined = defined;

    for (std::size_t f = 0; f < n; ++f) {
        if (!defined[f]) continue;
        double sum = 0.0;
        std::size_t pairs = 0;
        for (std::size_t g = 0; g < n; ++g) {
            if (g == f) continue;
            for (std::size_t h = g + 1; h < n; ++h) {
                if (h == f) continue;
                std::size_t inside = 0, pts = 0;
                for (std::size_t t = 0; t < m; ++t) {
                    if (!e.is_avail(f, t) || !e.is_avail(g, t) || !e.is_avail(h, t)) continue;
                    ++pts;
                    const double lo = std::min(e.curves(g, t), e.curves(h, t));
                    const double hi = std::max(e.curves(g, t), e.curves(h, t));
                    if (lo <= e.curves(f, t) && e.curves(f, t) <= hi) ++inside;
                }
                if (pts > 0) {
                    sum += static_cast<double>(inside) / static_cast<double>(pts);
                    ++pairs;
                }
            }
        }
        // Pairs {f, g} that include f always contain it, at full weight
        // whenever they share at least one available point.
        for (std::size_t g = 0; g < n; ++g) {
            if (g == f) continue;
            bool shared = false;
            for (std::size_t t = 0; t < m && !shared; ++t) {
                shared = e.is_avail(f, t) && e.is_avail(g, t);
            }
            if (shared) {
                sum += 1.0;
                ++pairs;
            }
        }
        if (pairs > 0) res.depth[f] = sum / static_cast<double>(pairs);
    }
    return res;
}

// Naive integer tally over all pairs (self-pairs included) for complete
// data; the bitwise oracle counterpart of mbd_complete_fast.
DepthResult mbd_complete_naive(const CurveEnsemble& e) {
    const std::size_t n = e.curves.rows();
    const std::size_t m = e.curves.cols();
    DepthResult res;
    res.contained.assign(n, 0);
    res.defined.assign(n, 1);

    for (std::size_t f = 0; f < n; ++f) {
        for (std::size_t g = 0; g < n; ++g) {
            for (std::size_t h = g + 1; h < n; ++h) {
                for (std::size_t t = 0; t < m; ++t) {
                    if (g == f || h == f) {
                        ++res.contained[f];
                        continue;
                    }
                    const double lo = std::min(e.curves(g, t), e.curves(h, t));
                    const double hi = std::max(e.curves(g, t), e.curves(h, t));
                    if (lo <= e.curves(f, t) && e.curves(f, t) <= hi) ++res.contained[f];
                }
            }
        }
    }
    const double denom = static_cast<double>(m) *
        (static_cast<double>(n) * (n - 1) / 2.0);
    res.depth.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        res.depth[i] = static_cast<double>(res.contained[i]) / denom;
    }
    return res;
}

} // namespace

DepthResult modified_band_depth(const CurveEnsemble& ensemble) {
    check_ensemble(ensemble);
    if (ensemble.complete()) return mbd_complete_fast(ensemble);
    DepthResult res;
    const std::vector<char> defined = curve_defined(ensemble, res);
    return mbd_enumerate(ensemble, std::move(res), defined);
}

DepthResult modified_band_depth_naive(const CurveEnsemble& ensemble) {
    check_ensemble(ensemble);
    if (ensemble.complete()) return mbd_complete_naive(ensemble);
    DepthResult res;
    const std::vector<char> defined = curve_defined(ensemble, res);
    return mbd_enumerate(ensemble, std::move(res), defined);
}

FBoxSummary fbox_summary(const CurveEnsemble& ensemble) {
    const DepthResult depth = modified_band_depth(ensemble);
    const std::size_t n = ensemble.curves.rows();
    const std::size_t m = ensemble.curves.cols();

    FBoxSummary s;
    s.depth = depth.depth;
    s.median_index = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (depth.defined[i] && depth.depth[i] > best) {
            best = depth.depth[i];
            s.median_index = i;
        }
    }

    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < n; ++i) {
        if (depth.defined[i]) order.push_back(i);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (depth.depth[a] != depth.depth[b]) return depth.depth[a] > depth.depth[b];
        return a < b;
    });
    const std::size_t n_central = (order.size() + 1) / 2;

    s.c50_lo.assign(m, nan);
    s.c50_hi.assign(m, nan);
    s.env_lo.assign(m, nan);
    s.env_hi.assign(m, nan);
    s.point_defined.assign(m, 0);

    for (std::size_t t = 0; t < m; ++t) {
        for (std::size_t r = 0; r < order.size(); ++r) {
            const std::size_t i = order[r];
            if (!ensemble.is_avail(i, t)) continue;
            const double v = ensemble.curves(i, t);
            s.point_defined[t] = 1;
            if (r < n_central) {
                if (std::isnan(s.c50_lo[t]) || v < s.c50_lo[t]) s.c50_lo[t] = v;
                if (std::isnan(s.c50_hi[t]) || v > s.c50_hi[t]) s.c50_hi[t] = v;
            }
            if (std::isnan(s.env_lo[t]) || v < s.env_lo[t]) s.env_lo[t] = v;
            if (std::isnan(s.env_hi[t]) || v > s.env_hi[t]) s.env_hi[t] = v;
        }
    }
    return s;
}

} // namespace trf
