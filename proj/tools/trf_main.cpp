// Command-line front end: ingest -> cutoff -> fit -> simulate -> stats ->
// fbplot, individually or as one pipeline run driven by a JSON config.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "trf/covariance.hpp"
#include "trf/csv.hpp"
#include "trf/fitting.hpp"
#include "trf/func_boxplot.hpp"
#include "trf/gauge.hpp"
#include "trf/occurrence_stats.hpp"
#include "trf/pipeline.hpp"
#include "trf/seasonal_cutoff.hpp"
#include "trf/simulation.hpp"
#include "trf/timeutil.hpp"
#include "trf/version.hpp"

namespace {

double parse_nu(const std::string& s) {
    if (s == "inf" || s == "Inf" || s == "INF")
        return std::numeric_limits<double>::infinity();
    return trf::parse_double(s, "nu");
}

std::string nu_string(double nu) {
    if (std::isinf(nu)) return "inf";
    std::ostringstream os;
    os << nu;
    return os.str();
}

trf::RunConfig base_config(std::uint64_t seed, int threads, const std::string& out_dir) {
    trf::RunConfig c;
    c.seed = seed;
    c.threads = threads;
    c.out_dir = out_dir;
    return c;
}

// Numeric matrix with optional header row and empty cells for missing points.
trf::CurveEnsemble read_curves_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::vector<std::vector<char>> masks;
    std::string line;
    bool any_missing = false;
    bool first_data = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto fields = trf::split_csv_line(line);
        std::vector<double> vals;
        std::vector<char> mask;
        bool parse_failed = false;
        for (const auto& f : fields) {
            if (f.empty()) {
                vals.push_back(std::numeric_limits<double>::quiet_NaN());
                mask.push_back(0);
                any_missing = true;
                continue;
            }
            char* end = nullptr;
            const double v = std::strtod(f.c_str(), &end);
            if (end == f.c_str() || *end != '\0') {
                parse_failed = true;
                break;
            }
            vals.push_back(v);
            mask.push_back(1);
        }
        if (parse_failed) {
            if (first_data) { // header row of labels
                first_data = false;
                continue;
            }
            throw std::runtime_error("non-numeric cell in " + path + ": " + line);
        }
        first_data = false;
        if (!rows.empty() && vals.size() != rows.front().size())
            throw std::runtime_error("ragged rows in " + path);
        rows.push_back(std::move(vals));
        masks.push_back(std::move(mask));
    }
    if (rows.empty()) throw std::runtime_error("no curves in " + path);
    trf::CurveEnsemble ens;
    ens.curves = trf::Matrix(rows.size(), rows.front().size());
    if (any_missing) ens.avail.assign(rows.size() * rows.front().size(), 0);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.front().size(); ++j) {
            ens.curves(i, j) = rows[i][j];
            if (any_missing) ens.avail[i * rows.front().size() + j] = masks[i][j];
        }
    return ens;
}

void write_occurrence_any(const std::string& path, const trf::OccurrenceField& occ,
                          const std::vector<std::string>& ids,
                          const std::string& provenance) {
    if (path.size() > 4 && path.compare(path.size() - 4, 4, ".bin") == 0)
        trf::write_occurrence_binary(path, occ);
    else
        trf::write_occurrence_csv(path, occ, ids, {provenance});
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"threshold t random field toolkit for precipitation occurrence"};
    app.set_version_flag("--version", std::string("trf ") + trf::version_string);
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    int threads = 1;
    std::string out_dir = "out";
    app.add_option("--seed", seed, "base RNG seed")->capture_default_str();
    app.add_option("--threads", threads, "worker threads (identical output for any value)")
        ->capture_default_str();
    app.add_option("--out-dir", out_dir, "output directory for pipeline runs")
        ->capture_default_str();

    // --- ingest ---
    auto* c_ingest = app.add_subcommand("ingest", "tip records -> occurrence field");
    std::string in_tips, in_network, in_from, in_to, in_out;
    int in_step = 15;
    c_ingest->add_option("--tips", in_tips, "tip CSV (site_id,timestamp)")->required();
    c_ingest->add_option("--network", in_network, "site CSV (site_id,lat,lon)")->required();
    c_ingest->add_option("--step", in_step, "step length, minutes")->capture_default_str();
    c_ingest->add_option("--from", in_from, "window start, ISO-8601")->required();
    c_ingest->add_option("--to", in_to, "window end (exclusive), ISO-8601")->required();
    c_ingest->add_option("--out", in_out, "occurrence output (.csv or .bin)")->required();

    // --- cutoff ---
    auto* c_cutoff = app.add_subcommand("cutoff", "fit the seasonal cutoff model");
    std::string cu_occ, cu_from, cu_to, cu_out, cu_nu = "inf";
    int cu_hmax = 2;
    c_cutoff->add_option("--occ", cu_occ, "occurrence CSV")->required();
    c_cutoff->add_option("--h-max", cu_hmax, "largest harmonic order tried")
        ->capture_default_str();
    c_cutoff->add_option("--nu", cu_nu, "reference df for quantiles (number or inf)")
        ->capture_default_str();
    c_cutoff->add_option("--from", cu_from, "optional window start");
    c_cutoff->add_option("--to", cu_to, "optional window end");
    c_cutoff->add_option("--out", cu_out, "model JSON output")->required();

    // --- simulate ---
    auto* c_sim = app.add_subcommand("simulate", "draw occurrence fields from the model");
    std::string s_network, s_out, s_nu = "3", s_cutoff_model;
    std::vector<int> s_grid;
    double s_spacing = 5.0, s_alpha = 0.5, s_eta = 1.0, s_beta = 0.0, s_alpha_u = 0.2,
           s_pdry = 0.975;
    std::vector<double> s_a, s_c;
    std::size_t s_steps = 96, s_reps = 1;
    c_sim->add_option("--network", s_network, "site CSV (alternative to --grid)");
    c_sim->add_option("--grid", s_grid, "regular grid: WIDTH HEIGHT")->expected(2);
    c_sim->add_option("--spacing", s_spacing, "grid spacing, km")->capture_default_str();
    c_sim->add_option("--steps", s_steps, "time steps")->capture_default_str();
    c_sim->add_option("--alpha", s_alpha, "spatial range, fraction of d_max")
        ->capture_default_str();
    c_sim->add_option("--eta", s_eta, "Matern smoothness")->capture_default_str();
    c_sim->add_option("--beta", s_beta, "temporal long-range exponent")->capture_default_str();
    c_sim->add_option("--a", s_a, "log-gamma cosine coefficients a_0..a_L");
    c_sim->add_option("--c", s_c, "log-spectrum cosine coefficients c_0..c_L");
    c_sim->add_option("--alpha-u", s_alpha_u, "scaling range, fraction of steps")
        ->capture_default_str();
    c_sim->add_option("--nu", s_nu, "degrees of freedom (integer or inf)")
        ->capture_default_str();
    c_sim->add_option("--p-dry", s_pdry, "flat dry probability for the cutoff")
        ->capture_default_str();
    c_sim->add_option("--cutoff-model", s_cutoff_model, "seasonal cutoff JSON (overrides --p-dry)");
    c_sim->add_option("--reps", s_reps, "replications")->capture_default_str();
    c_sim->add_option("--out", s_out, "output stem (.csv or .bin)")->required();

    // --- stats ---
    auto* c_stats = app.add_subcommand("stats", "occurrence statistics tables");
    std::string st_occ, st_network, st_prefix = "stats";
    int st_aggregate = 1;
    bool st_plot = false;
    c_stats->add_option("--occ", st_occ, "occurrence CSV or binary")->required();
    c_stats->add_option("--network", st_network, "site CSV")->required();
    c_stats->add_option("--prefix", st_prefix, "output path prefix")->capture_default_str();
    c_stats->add_option("--aggregate", st_aggregate, "OR-aggregate factor before stats")
        ->capture_default_str();
    c_stats->add_flag("--plot-data", st_plot, "also write per-site curve tables");

    // --- fit ---
    auto* c_fit = app.add_subcommand("fit", "simulation-based parameter fit");
    std::string f_occ, f_network, f_cutoff_model, f_model = "trf", f_out;
    std::vector<int> f_nu_grid{2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::size_t f_M = 20, f_steps = 0;
    double f_pdry = 0.975, f_eta = 1.0;
    std::vector<double> f_balpha{0.1, 1.5}, f_bbeta{0.0, 0.9}, f_bau{0.02, 0.6};
    c_fit->add_option("--occ", f_occ, "observed occurrence CSV or binary")->required();
    c_fit->add_option("--network", f_network, "site CSV")->required();
    c_fit->add_option("--cutoff-model", f_cutoff_model, "seasonal cutoff JSON");
    c_fit->add_option("--p-dry", f_pdry, "flat dry probability when no cutoff model")
        ->capture_default_str();
    c_fit->add_option("--model", f_model, "trf or grf")->capture_default_str();
    c_fit->add_option("--nu-grid", f_nu_grid, "candidate df values");
    c_fit->add_option("--M", f_M, "replications per criterion evaluation")
        ->capture_default_str();
    c_fit->add_option("--steps", f_steps, "simulated steps (0: length of obs)")
        ->capture_default_str();
    c_fit->add_option("--eta", f_eta, "Matern smoothness")->capture_default_str();
    c_fit->add_option("--bounds-alpha", f_balpha, "alpha bounds LO HI")->expected(2);
    c_fit->add_option("--bounds-beta", f_bbeta, "beta bounds LO HI")->expected(2);
    c_fit->add_option("--bounds-alpha-u", f_bau, "alpha_u bounds LO HI")->expected(2);
    c_fit->add_option("--out", f_out, "fit result JSON")->required();

    // --- match-range ---
    auto* c_match = app.add_subcommand("match-range",
                                       "match a GRF's range to a tRF's psi(0), psi(p)");
    std::string m_network, m_nu = "3", m_out;
    double m_alpha = 0.5, m_eta = 1.0, m_pdry = 0.975, m_alpha_lo = 0.1, m_alpha_hi = 3.0;
    std::size_t m_budget = 10000;
    c_match->add_option("--network", m_network, "site CSV")->required();
    c_match->add_option("--alpha", m_alpha, "tRF spatial range")->capture_default_str();
    c_match->add_option("--nu", m_nu, "tRF degrees of freedom")->capture_default_str();
    c_match->add_option("--eta", m_eta, "Matern smoothness")->capture_default_str();
    c_match->add_option("--p-dry", m_pdry, "dry probability")->capture_default_str();
    c_match->add_option("--budget", m_budget, "MC replications per evaluation")
        ->capture_default_str();
    c_match->add_option("--alpha-lo", m_alpha_lo, "search lower bound")->capture_default_str();
    c_match->add_option("--alpha-hi", m_alpha_hi, "search upper bound")->capture_default_str();
    c_match->add_option("--out", m_out, "result JSON");

    // --- fbplot ---
    auto* c_fb = app.add_subcommand("fbplot", "functional boxplot summary of curves");
    std::string fb_curves, fb_obs, fb_out;
    c_fb->add_option("--curves", fb_curves, "curve matrix CSV, one curve per row")->required();
    c_fb->add_option("--obs", fb_obs, "optional single observed curve CSV");
    c_fb->add_option("--out", fb_out, "summary CSV")->required();

    // --- run ---
    auto* c_run = app.add_subcommand("run", "full pipeline from a JSON config");
    std::string r_config;
    bool r_dry = false;
    c_run->add_option("--config", r_config, "run configuration JSON")->required();
    c_run->add_flag("--dry-run", r_dry, "print the stage plan and exit");

    CLI11_PARSE(app, argc, argv);

    try {
        const trf::RunConfig pc = base_config(seed, threads, out_dir);
        const std::string prov = trf::provenance_line(pc);

        if (*c_ingest) {
            auto network = trf::network_from_coords(trf::read_network_csv(in_network));
            auto records = trf::read_tips_csv(in_tips);
            auto report = trf::ingest_tips(records, in_step, trf::parse_iso8601(in_from),
                                           trf::parse_iso8601(in_to), network);
            auto occ = trf::to_occurrence(report.rates);
            std::vector<std::string> ids;
            for (const auto& s : network.sites) ids.push_back(s.id);
            write_occurrence_any(in_out, occ, ids, prov);
            std::cout << "ingested " << report.n_tips_used << " tips ("
                      << report.n_tips_outside_span << " outside window) -> " << in_out
                      << " [" << occ.n_sites << " sites x " << occ.n_steps << " steps]\n";
        } else if (*c_cutoff) {
            std::vector<std::string> ids;
            auto occ = trf::read_occurrence_csv(cu_occ, &ids);
            if (!cu_from.empty() || !cu_to.empty()) {
                const std::int64_t t0 = cu_from.empty()
                                            ? std::numeric_limits<std::int64_t>::min()
                                            : trf::parse_iso8601(cu_from);
                const std::int64_t t1 = cu_to.empty()
                                            ? std::numeric_limits<std::int64_t>::max()
                                            : trf::parse_iso8601(cu_to);
                occ = trf::slice_occurrence(occ, t0, t1);
            }
            auto sel = trf::select_H(occ, cu_hmax);
            sel.best.model.nu_ref = parse_nu(cu_nu);
            trf::write_cutoff_model_json(cu_out, sel.best.model, ids, sel.best.loglik,
                                         {prov});
            std::cout << "selected H=" << sel.H << " (loglik " << sel.best.loglik << ")\n";
            for (std::size_t i = 0; i < sel.tried.size(); ++i)
                std::cout << "  H=" << sel.tried[i] << "  AIC=" << sel.aic[i] << '\n';
            for (const auto& w : sel.warnings) std::cout << "  warning: " << w << '\n';
            std::cout << "wrote " << cu_out << '\n';
        } else if (*c_sim) {
            trf::GaugeNetwork network;
            std::vector<std::string> ids;
            if (!s_grid.empty()) {
                network = trf::make_grid_network(s_grid[0], s_grid[1], s_spacing);
            } else if (!s_network.empty()) {
                network = trf::network_from_coords(trf::read_network_csv(s_network));
            } else {
                throw std::runtime_error("simulate: give --network or --grid");
            }
            for (const auto& s : network.sites) ids.push_back(s.id);

            trf::SimConfig sim;
            sim.network = network;
            sim.n_steps = s_steps;
            sim.cov.matern.eta = s_eta;
            sim.cov.matern.range = s_alpha;
            sim.cov.beta = s_beta;
            if (!s_a.empty()) {
                sim.cov.a = s_a;
                sim.cov.L = static_cast<int>(s_a.size()) - 1;
            }
            if (!s_c.empty()) {
                sim.cov.c = s_c;
                if (static_cast<int>(s_c.size()) - 1 > sim.cov.L)
                    sim.cov.L = static_cast<int>(s_c.size()) - 1;
            }
            sim.cov.a.resize(static_cast<std::size_t>(sim.cov.L) + 1, 0.0);
            sim.cov.c.resize(static_cast<std::size_t>(sim.cov.L) + 1, 0.0);
            sim.alpha_u = s_alpha_u;
            sim.nu = parse_nu(s_nu);
            sim.seed = seed;

            std::optional<trf::CutoffSurface> surface;
            if (!s_cutoff_model.empty()) {
                auto model = trf::read_cutoff_model_json(s_cutoff_model);
                if (model.alpha.size() != network.size())
                    throw std::runtime_error("cutoff model site count mismatch");
                surface = trf::cutoff_surface(model, s_steps, 15, 0, sim.nu);
            }
            const double flat_cut = trf::marginal_cutoff(s_pdry, sim.nu);

            for (std::size_t rep = 0; rep < s_reps; ++rep) {
                auto field = trf::simulate_trf(sim, rep);
                auto occ = surface ? trf::threshold_occurrence(field, *surface)
                                   : trf::threshold_occurrence(field, flat_cut);
                std::string path = s_out;
                if (s_reps > 1) {
                    const auto dot = path.rfind('.');
                    path = path.substr(0, dot) + "_" + std::to_string(rep) +
                           (dot == std::string::npos ? "" : path.substr(dot));
                }
                write_occurrence_any(path, occ, ids, prov);
                if (rep == 0)
                    std::cout << "wrote " << path << " [" << occ.n_sites << " x "
                              << occ.n_steps << "]"
                              << (s_reps > 1 ? " (+ more replications)" : "") << '\n';
            }
        } else if (*c_stats) {
            auto network = trf::network_from_coords(trf::read_network_csv(st_network));
            std::vector<std::string> ids;
            for (const auto& s : network.sites) ids.push_back(s.id);
            trf::OccurrenceField occ;
            if (st_occ.size() > 4 && st_occ.compare(st_occ.size() - 4, 4, ".bin") == 0)
                occ = trf::read_occurrence_binary(st_occ);
            else
                occ = trf::read_occurrence_csv(st_occ);
            if (occ.n_sites != network.size())
                throw std::runtime_error("occurrence/network site count mismatch");
            if (st_aggregate > 1) occ = trf::aggregate_occurrence(occ, st_aggregate);
            const auto table = trf::cond_prob_table(occ, network);
            trf::write_cond_prob_csv(st_prefix + "_cond_prob.csv", table, ids, prov);
            trf::write_psi_csv(st_prefix + "_psi.csv", trf::simultaneous_rain_pmf(occ), prov);
            trf::write_spells_csv(st_prefix + "_spells.csv", trf::spell_summary(occ), ids,
                                  prov);
            std::cout << "wrote " << st_prefix << "_{cond_prob,psi,spells}.csv\n";
            if (st_plot) {
                trf::write_plot_data_csv(st_prefix + "_plot_dry.csv", table,
                                         trf::CondKind::dry, ids, prov);
                trf::write_plot_data_csv(st_prefix + "_plot_rain.csv", table,
                                         trf::CondKind::rain, ids, prov);
                std::cout << "wrote " << st_prefix << "_plot_{dry,rain}.csv\n";
            }
        } else if (*c_fit) {
            auto network = trf::network_from_coords(trf::read_network_csv(f_network));
            trf::OccurrenceField occ;
            if (f_occ.size() > 4 && f_occ.compare(f_occ.size() - 4, 4, ".bin") == 0)
                occ = trf::read_occurrence_binary(f_occ);
            else
                occ = trf::read_occurrence_csv(f_occ);
            if (occ.n_sites != network.size())
                throw std::runtime_error("occurrence/network site count mismatch");

            trf::FitContext ctx;
            ctx.network = network;
            ctx.cov_template.matern.eta = f_eta;
            ctx.n_steps = (f_steps > 0) ? f_steps : occ.n_steps;
            if (!f_cutoff_model.empty())
                ctx.cutoff_model = trf::read_cutoff_model_json(f_cutoff_model);
            ctx.flat_p_dry = f_pdry;
            ctx.step_minutes = occ.step_minutes;
            ctx.origin = occ.origin;
            ctx.threads = threads;

            trf::CriterionSpec spec;
            spec.M = f_M;
            spec.obs = trf::cond_prob_table(occ, network);
            spec.seed_base = seed;

            trf::FitOptions opt;
            opt.nu_grid = f_nu_grid;
            opt.alpha = {f_balpha[0], f_balpha[1]};
            opt.beta = {f_bbeta[0], f_bbeta[1]};
            opt.alpha_u = {f_bau[0], f_bau[1]};

            const auto kind = (f_model == "grf") ? trf::ModelKind::grf : trf::ModelKind::trf;
            const auto fitres = trf::fit(ctx, spec, kind, opt);

            nlohmann::json out;
            out["meta"] = {{"tool", "trf"},
                           {"version", trf::version_string},
                           {"seed", seed},
                           {"config", "none"}};
            out["model"] = f_model;
            out["theta"] = {{"alpha", fitres.theta.alpha},
                            {"beta", fitres.theta.beta},
                            {"alpha_u", fitres.theta.alpha_u},
                            {"nu", nu_string(fitres.theta.nu)}};
            out["value"] = fitres.value;
            out["total_evals"] = fitres.total_evals;
            std::ofstream fo(f_out);
            if (!fo) throw std::runtime_error("cannot open " + f_out);
            fo << out.dump(2) << '\n';
            std::cout << "fitted " << f_model << ": alpha=" << fitres.theta.alpha
                      << " beta=" << fitres.theta.beta << " alpha_u=" << fitres.theta.alpha_u
                      << " nu=" << nu_string(fitres.theta.nu) << "  value=" << fitres.value
                      << " (" << fitres.total_evals << " evals)\n";
        } else if (*c_match) {
            auto network = trf::network_from_coords(trf::read_network_csv(m_network));
            const double nu = parse_nu(m_nu);
            trf::MaternSpec matern;
            matern.eta = m_eta;
            matern.range = m_alpha;

            // MC targets: all-dry and all-wet probabilities under the tRF
            auto field = trf::simulate_spatial_trf(network, matern, nu, m_budget, seed);
            const double cut = trf::marginal_cutoff(m_pdry, nu);
            std::size_t all_dry = 0, all_wet = 0;
            const std::size_t p = network.size();
            for (std::size_t r = 0; r < m_budget; ++r) {
                std::size_t dry = 0;
                for (std::size_t i = 0; i < p; ++i)
                    if (field.y(i, r) > cut) ++dry;
                if (dry == p) ++all_dry;
                if (dry == 0) ++all_wet;
            }
            trf::MatchTargets targets;
            targets.psi0 = static_cast<double>(all_wet) / static_cast<double>(m_budget);
            targets.psip = static_cast<double>(all_dry) / static_cast<double>(m_budget);
            auto se = [&](double q) {
                return std::sqrt(std::max(q * (1.0 - q), 1e-12) /
                                 static_cast<double>(m_budget));
            };
            targets.se0 = se(targets.psi0);
            targets.sep = se(targets.psip);

            const auto res = trf::match_grf_range(network, m_eta, m_pdry, targets, m_budget,
                                                  seed, {m_alpha_lo, m_alpha_hi});
            std::cout << "targets psi(0)=" << targets.psi0 << " psi(p)=" << targets.psip
                      << "\nmatched alpha=" << res.alpha_matched
                      << "  achieved psi(0)=" << res.psi0_achieved
                      << " psi(p)=" << res.psip_achieved << "  evals=" << res.evals
                      << (res.boundary_warning ? "  [warning: at search boundary]" : "")
                      << '\n';
            if (!m_out.empty()) {
                nlohmann::json out;
                out["alpha_matched"] = res.alpha_matched;
                out["psi0_target"] = targets.psi0;
                out["psip_target"] = targets.psip;
                out["psi0_achieved"] = res.psi0_achieved;
                out["psip_achieved"] = res.psip_achieved;
                out["boundary_warning"] = res.boundary_warning;
                std::ofstream fo(m_out);
                if (!fo) throw std::runtime_error("cannot open " + m_out);
                fo << out.dump(2) << '\n';
            }
        } else if (*c_fb) {
            const auto ens = read_curves_csv(fb_curves);
            std::vector<double> obs_vals;
            const std::vector<double>* obs_ptr = nullptr;
            if (!fb_obs.empty()) {
                const auto obs_ens = read_curves_csv(fb_obs);
                if (obs_ens.curves.rows() != 1)
                    throw std::runtime_error("--obs must contain exactly one curve");
                obs_vals.resize(obs_ens.curves.cols());
                for (std::size_t j = 0; j < obs_vals.size(); ++j)
                    obs_vals[j] = obs_ens.is_avail(0, j)
                                      ? obs_ens.curves(0, j)
                                      : std::numeric_limits<double>::quiet_NaN();
                obs_ptr = &obs_vals;
            }
            trf::write_fbplot_csv(fb_out, ens, obs_ptr, prov);
            std::cout << "wrote " << fb_out << " (" << ens.curves.rows() << " curves x "
                      << ens.curves.cols() << " points)\n";
        } else if (*c_run) {
            auto config = trf::load_run_config(r_config);
            if (app.count("--seed")) config.seed = seed;
            if (app.count("--threads")) config.threads = threads;
            if (app.count("--out-dir")) config.out_dir = out_dir;
            const auto res = trf::run_pipeline(config, r_dry);
            if (!r_dry) {
                for (const auto& a : res.artifacts) std::cout << "wrote " << a << '\n';
                std::cout << "wrote " << res.manifest_path << '\n';
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
