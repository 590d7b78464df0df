#pragma once

#include <functional>
#include <vector>

namespace trf {

// Nelder-Mead over the unit box [0,1]^d (callers map to physical bounds).
// Out-of-box proposals are reflected back inside and counted, matching the
// fitting contract of reflect-with-log rather than hard clamping.
struct NelderMeadOptions {
    double diameter_tol = 1e-3; // stop when simplex diameter < tol (inf-norm)
    int max_evals = 500;
    double init_step = 0.25;    // initial simplex edge along each axis
};

struct NelderMeadResult {
    std::vector<double> x;
    double fx = 0.0;
    int evals = 0;
    bool converged = false;           // by diameter (false: eval budget hit)
    int reflections_into_bounds = 0;
};

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0,
                             const NelderMeadOptions& opt = {});

// Deterministic golden-section minimization on [lo, hi].
struct GoldenResult {
    double x = 0.0;
    double fx = 0.0;
    int evals = 0;
};

GoldenResult golden_minimize(const std::function<double(double)>& f, double lo,
                             double hi, double x_tol, int max_evals = 200);

} // namespace trf
