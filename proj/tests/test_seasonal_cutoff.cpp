#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <stdexcept>
#include <vector>

#include "trf/seasonal_cutoff.hpp"
#include "trf/simulation.hpp"
#include "trf/special.hpp"

using namespace trf;

namespace {

// Occurrence field with exactly `wet[i][h-1]` wet quarters out of 40 in
// each (site, hour) cell: 10 days of 15-minute steps starting at midnight.
OccurrenceField grouped_field(const std::vector<std::vector<int>>& wet) {
    const std::size_t p = wet.size();
    OccurrenceField f;
    f.n_sites = p;
    f.n_steps = 960; // 10 days * 96 quarter hours
    f.step_minutes = 15;
    f.origin = 0;
    f.occ.assign(p * f.n_steps, 0);
    for (std::size_t i = 0; i < p; ++i)
        for (int d = 0; d < 10; ++d)
            for (int h = 1; h <= 24; ++h)
                for (int q = 0; q < 4; ++q) {
                    const std::size_t t = static_cast<std::size_t>(d) * 96 +
                                          static_cast<std::size_t>(h - 1) * 4 +
                                          static_cast<std::size_t>(q);
                    if (d * 4 + q < wet[i][h - 1]) f.occ[i * f.n_steps + t] = 1;
                }
    return f;
}

const std::vector<std::vector<int>> oracle_wet = {
    {3, 7, 4, 5, 7, 3, 3, 0, 1, 2, 3, 3, 2, 1, 2, 6, 3, 5, 9, 2, 7, 11, 5, 7},
    {15, 7, 9, 10, 8, 6, 4, 5, 4, 4, 4, 7, 7, 5, 7, 6, 8, 9, 12, 11, 12, 15, 12, 16},
};

} // namespace

TEST_CASE("logistic harmonics reproduce an independently fitted MLE") {
    // grouped binomial MLE computed by Newton iteration on the same counts
    const OccurrenceField occ = grouped_field(oracle_wet);
    const LogisticFit fit = fit_logistic_harmonics(occ, 1);

    CHECK(fit.model.alpha[0] == doctest::Approx(-2.23771618069888).epsilon(1e-7));
    CHECK(fit.model.alpha[1] == doctest::Approx(-1.38772135645695).epsilon(1e-7));
    CHECK(fit.model.beta1[0] == doctest::Approx(0.654670062282963).epsilon(1e-7));
    CHECK(fit.model.beta2[0] == doctest::Approx(-0.269575843858284).epsilon(1e-7));
    CHECK(fit.loglik == doctest::Approx(-788.778396338168).epsilon(1e-10));
    CHECK_FALSE(fit.ridged);

    REQUIRE(fit.se.size() == 4);
    CHECK(fit.se[0] == doctest::Approx(0.109412180422298).epsilon(1e-6));
    CHECK(fit.se[1] == doctest::Approx(0.0828532784225119).epsilon(1e-6));
    CHECK(fit.se[2] == doctest::Approx(0.0948491951970208).epsilon(1e-6));
    CHECK(fit.se[3] == doctest::Approx(0.0919355387801775).epsilon(1e-6));
}

TEST_CASE("H = 0 intercepts are the empirical logits") {
    const OccurrenceField occ = grouped_field(oracle_wet);
    const LogisticFit fit = fit_logistic_harmonics(occ, 0);
    for (std::size_t i = 0; i < 2; ++i) {
        double wet_total = 0.0;
        for (int v : oracle_wet[i]) wet_total += v;
        const double q = wet_total / 960.0;
        CHECK(fit.model.alpha[i] == doctest::Approx(std::log(q / (1.0 - q))).epsilon(1e-9));
    }
}

TEST_CASE("perfect separation is diagnosed") {
    std::vector<std::vector<int>> wet = oracle_wet;
    for (auto& v : wet[0]) v = 0; // site 0 all dry
    CHECK_THROWS_WITH_AS(fit_logistic_harmonics(grouped_field(wet), 1),
                         doctest::Contains("separation"), std::runtime_error);
    for (auto& v : wet[0]) v = 40; // all wet
    CHECK_THROWS_AS(fit_logistic_harmonics(grouped_field(wet), 1), std::runtime_error);
}

TEST_CASE("aic model selection") {
    // strong first harmonic in the truth
    std::vector<std::vector<int>> wet(2, std::vector<int>(24, 0));
    for (int h = 1; h <= 24; ++h) {
        const double mu = 0.25 + 0.18 * std::cos(2.0 * M_PI * h / 24.0);
        wet[0][h - 1] = static_cast<int>(std::lround(40.0 * mu));
        wet[1][h - 1] = static_cast<int>(std::lround(40.0 * (mu - 0.05)));
    }
    const HSelection sel = select_H(grouped_field(wet), 3);
    CHECK(sel.H >= 1);
    REQUIRE(sel.tried.size() == 4);
    CHECK(sel.aic[1] < sel.aic[0]);
    // reported AIC is 2k - 2 loglik with k = #sites + 2H
    const LogisticFit h1 = fit_logistic_harmonics(grouped_field(wet), 1);
    CHECK(sel.aic[1] == doctest::Approx(2.0 * (2 + 2) - 2.0 * h1.loglik).epsilon(1e-9));

    // hour-invariant data: every extra harmonic is pure penalty
    std::vector<std::vector<int>> flat(2, std::vector<int>(24, 10));
    flat[1].assign(24, 14);
    const HSelection sel0 = select_H(grouped_field(flat), 2);
    CHECK(sel0.H == 0);
}

TEST_CASE("fitted probabilities and the cutoff surface") {
    CutoffModel model;
    model.alpha = {-2.0, -1.5};
    model.beta1 = {0.5};
    model.beta2 = {-0.2};
    model.H = 1;

    for (std::size_t i : {std::size_t{0}, std::size_t{1}}) {
        for (int h : {1, 7, 13, 24}) {
            const double eta = model.alpha[i] + 0.5 * std::cos(2.0 * M_PI * h / 24.0) -
                               0.2 * std::sin(2.0 * M_PI * h / 24.0);
            const double want = 1.0 / (1.0 + std::exp(-eta));
            CHECK(fitted_prob(model, i, h) == doctest::Approx(want).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(fitted_prob(model, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(fitted_prob(model, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(fitted_prob(model, 0, 25), std::invalid_argument);

    // surface: c(x, t) = t-quantile(1 - p_hat) at the hour label of t
    const double nu = 3.0;
    const CutoffSurface surf = cutoff_surface(model, 200, 15, 0, nu);
    REQUIRE(surf.c.rows() == 2);
    REQUIRE(surf.c.cols() == 200);
    for (std::size_t t : {std::size_t{0}, std::size_t{5}, std::size_t{97}, std::size_t{150}}) {
        const int hour = static_cast<int>((t / 4) % 24) + 1;
        for (std::size_t i = 0; i < 2; ++i) {
            const double want = student_t_quantile(1.0 - fitted_prob(model, i, hour), nu);
            CHECK(surf.c(i, t) == doctest::Approx(want).epsilon(1e-12));
        }
    }
    // infinite nu switches to the normal quantile
    const CutoffSurface surfn =
        cutoff_surface(model, 8, 15, 0, std::numeric_limits<double>::infinity());
    CHECK(surfn.c(0, 0) ==
          doctest::Approx(normal_quantile(1.0 - fitted_prob(model, 0, 1))).epsilon(1e-12));

    // quarter-hour steps within one hour share the cutoff
    CHECK(surf.c(0, 0) == surf.c(0, 3));
    CHECK(surf.c(0, 4) != surf.c(0, 3));
}

TEST_CASE("cutoff model json round trip") {
    CutoffModel model;
    model.alpha = {-2.0, -1.5, -1.0};
    model.beta1 = {0.5, 0.01};
    model.beta2 = {-0.2, 0.03};
    model.H = 2;
    model.nu_ref = std::numeric_limits<double>::infinity();

    const std::string path =
        (std::filesystem::temp_directory_path() / "trf_cutoff_test.json").string();
    write_cutoff_model_json(path, model, {"a", "b", "c"}, -123.5, {"prov"});
    std::vector<std::string> ids;
    const CutoffModel back = read_cutoff_model_json(path, &ids);
    CHECK(back.alpha == model.alpha);
    CHECK(back.beta1 == model.beta1);
    CHECK(back.beta2 == model.beta2);
    CHECK(back.H == 2);
    CHECK(std::isinf(back.nu_ref));
    REQUIRE(ids.size() == 3);
    CHECK(ids[2] == "c");

    model.nu_ref = 4.0;
    write_cutoff_model_json(path, model, {"a", "b", "c"}, -123.5, {"prov"});
    CHECK(read_cutoff_model_json(path).nu_ref == doctest::Approx(4.0));
    std::filesystem::remove(path);
}

TEST_CASE("thresholding by the surface reproduces the fitted probabilities") {
    // iid standard t draws against the per-hour cutoffs: the wet frequency
    // in each hour bin should track p_hat(x, h)
    CutoffModel model;
    model.alpha = {-1.2};
    model.beta1 = {0.7};
    model.beta2 = {0.0};
    model.H = 1;
    const double nu = 5.0;
    const std::size_t n_steps = 96 * 400;
    const CutoffSurface surf = cutoff_surface(model, n_steps, 15, 0, nu);

    RngStream rng(909);
    std::vector<double> wet(24, 0.0), tot(24, 0.0);
    for (std::size_t t = 0; t < n_steps; ++t) {
        // standard t via normal over sqrt(chi2/nu)
        double chi = 0.0;
        for (int j = 0; j < 5; ++j) {
            const double g = rng.normal();
            chi += g * g;
        }
        const double y = rng.normal() / std::sqrt(chi / nu);
        const int hour = static_cast<int>((t / 4) % 24);
        tot[hour] += 1.0;
        if (y > surf.c(0, t)) wet[hour] += 1.0;
    }
    for (int h = 1; h <= 24; ++h) {
        const double p_hat = fitted_prob(model, 0, h);
        const double se = std::sqrt(p_hat * (1.0 - p_hat) / tot[h - 1]);
        CHECK(std::abs(wet[h - 1] / tot[h - 1] - p_hat) < 4.0 * se);
    }
}
