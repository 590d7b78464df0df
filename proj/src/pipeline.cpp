#include "trf/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "trf/func_boxplot.hpp"
#include "trf/rng.hpp"
#include "trf/seasonal_cutoff.hpp"
#include "trf/simulation.hpp"
#include "trf/timeutil.hpp"
#include "trf/version.hpp"

namespace trf {

using json = nlohmann::json;

std::uint64_t fnv1a64(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for hashing: " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 14];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        auto got = static_cast<std::size_t>(in.gcount());
        for (std::size_t i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ULL;
        }
    }
    return h;
}

namespace {

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

double get_num(const json& j, const char* key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
}

} // namespace

std::string provenance_line(const RunConfig& config) {
    std::ostringstream os;
    os << "trf " << version_string << " seed=" << config.seed
       << " config=" << (config.config_hash.empty() ? "none" : config.config_hash);
    return os.str();
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();

    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw std::runtime_error("config parse error in " + path + ": " + e.what());
    }

    static const char* known[] = {
        "seed",      "threads",     "out_dir",   "tips_csv",   "occurrence_csv",
        "network_csv", "from",      "to",        "step_minutes", "aggregate_factor",
        "h_max",     "model",       "nu_grid",   "fit_M",      "eta",
        "cov_L",     "cov_a",       "cov_c",     "bounds_alpha", "bounds_beta",
        "bounds_alpha_u", "val_reps", "fb_aggregate", "fb_kind"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) { ok = true; break; }
        if (!ok) throw std::runtime_error("config: unknown key \"" + it.key() + "\"");
    }

    RunConfig c;
    c.seed = static_cast<std::uint64_t>(get_num(j, "seed", 0));
    c.threads = static_cast<int>(get_num(j, "threads", 1));
    if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("tips_csv")) c.tips_csv = j.at("tips_csv").get<std::string>();
    if (j.contains("occurrence_csv")) c.occurrence_csv = j.at("occurrence_csv").get<std::string>();
    if (j.contains("network_csv")) c.network_csv = j.at("network_csv").get<std::string>();
    if (j.contains("from")) c.from = j.at("from").get<std::string>();
    if (j.contains("to")) c.to = j.at("to").get<std::string>();
    c.step_minutes = static_cast<int>(get_num(j, "step_minutes", 15));
    c.aggregate_factor = static_cast<int>(get_num(j, "aggregate_factor", 1));
    c.h_max = static_cast<int>(get_num(j, "h_max", 2));
    if (j.contains("model")) c.model = j.at("model").get<std::string>();
    if (c.model != "trf" && c.model != "grf")
        throw std::runtime_error("config: model must be \"trf\" or \"grf\"");
    if (j.contains("nu_grid")) {
        c.nu_grid.clear();
        for (const auto& v : j.at("nu_grid")) c.nu_grid.push_back(v.get<int>());
        if (c.nu_grid.empty()) throw std::runtime_error("config: nu_grid is empty");
    }
    c.fit_M = static_cast<std::size_t>(get_num(j, "fit_M", 20));
    c.eta = get_num(j, "eta", 1.0);
    c.cov_L = static_cast<int>(get_num(j, "cov_L", 2));
    auto read_vec = [&](const char* key, std::vector<double>& out) {
        if (!j.contains(key)) return;
        out.clear();
        for (const auto& v : j.at(key)) out.push_back(v.get<double>());
    };
    read_vec("cov_a", c.cov_a);
    read_vec("cov_c", c.cov_c);
    auto read_bounds = [&](const char* key, FitBounds& b) {
        if (!j.contains(key)) return;
        const auto& arr = j.at(key);
        if (!arr.is_array() || arr.size() != 2)
            throw std::runtime_error(std::string("config: ") + key + " must be [lo, hi]");
        b.lo = arr[0].get<double>();
        b.hi = arr[1].get<double>();
        if (!(b.lo < b.hi))
            throw std::runtime_error(std::string("config: ") + key + " has lo >= hi");
    };
    read_bounds("bounds_alpha", c.bounds_alpha);
    read_bounds("bounds_beta", c.bounds_beta);
    read_bounds("bounds_alpha_u", c.bounds_alpha_u);
    c.val_reps = static_cast<std::size_t>(get_num(j, "val_reps", 200));
    c.fb_aggregate = static_cast<int>(get_num(j, "fb_aggregate", 1));
    if (j.contains("fb_kind")) c.fb_kind = j.at("fb_kind").get<std::string>();
    if (c.fb_kind != "dry" && c.fb_kind != "rain")
        throw std::runtime_error("config: fb_kind must be \"dry\" or \"rain\"");

    if (c.network_csv.empty())
        throw std::runtime_error("config: network_csv is required");
    if (c.tips_csv.empty() && c.occurrence_csv.empty())
        throw std::runtime_error("config: one of tips_csv / occurrence_csv is required");
    if (!c.tips_csv.empty() && (c.from.empty() || c.to.empty()))
        throw std::runtime_error("config: tips ingestion needs from/to timestamps");
    if (c.aggregate_factor < 1 || c.fb_aggregate < 1)
        throw std::runtime_error("config: aggregation factors must be >= 1");
    if (c.threads < 1) throw std::runtime_error("config: threads must be >= 1");

    c.config_hash = hex64(fnv1a64(text.data(), text.size()));
    return c;
}

// --- artifact helper ------------------------------------------------------

Artifact::Artifact(std::string final_path)
    : final_(std::move(final_path)), temp_(final_ + ".partial") {}

Artifact::~Artifact() = default; // an uncommitted .partial file stays behind

void Artifact::commit() {
    std::error_code ec;
    std::filesystem::rename(temp_, final_, ec);
    if (ec)
        throw std::runtime_error("cannot finalize " + final_ + ": " + ec.message());
    committed_ = true;
}

// --- observed-data loading ------------------------------------------------

namespace {

OccurrenceField truncate_and_aggregate(const OccurrenceField& occ, int factor) {
    if (factor <= 1) return occ;
    const std::size_t keep = (occ.n_steps / factor) * factor;
    if (keep == 0)
        throw std::runtime_error("aggregation: series shorter than one block");
    if (keep == occ.n_steps) return aggregate_occurrence(occ, factor);
    OccurrenceField trimmed;
    trimmed.n_sites = occ.n_sites;
    trimmed.n_steps = keep;
    trimmed.step_minutes = occ.step_minutes;
    trimmed.origin = occ.origin;
    trimmed.occ.resize(occ.n_sites * keep);
    for (std::size_t i = 0; i < occ.n_sites; ++i)
        for (std::size_t t = 0; t < keep; ++t)
            trimmed.occ[i * keep + t] = occ.at(i, t);
    return aggregate_occurrence(trimmed, factor);
}

} // namespace

ObservedData load_observed(const RunConfig& config) {
    ObservedData data;
    data.network = network_from_coords(read_network_csv(config.network_csv));
    for (const auto& s : data.network.sites) data.site_ids.push_back(s.id);

    if (!config.occurrence_csv.empty()) {
        std::vector<std::string> file_ids;
        OccurrenceField raw = read_occurrence_csv(config.occurrence_csv, &file_ids);
        if (raw.n_sites != data.network.size())
            throw std::runtime_error("occurrence file has " + std::to_string(raw.n_sites) +
                                     " sites, network has " +
                                     std::to_string(data.network.size()));
        // reorder rows into network order by id
        std::unordered_map<std::string, std::size_t> pos;
        for (std::size_t i = 0; i < file_ids.size(); ++i) pos[file_ids[i]] = i;
        OccurrenceField ordered = raw;
        for (std::size_t i = 0; i < data.site_ids.size(); ++i) {
            auto it = pos.find(data.site_ids[i]);
            if (it == pos.end())
                throw std::runtime_error("site " + data.site_ids[i] +
                                         " missing from occurrence file");
            for (std::size_t t = 0; t < raw.n_steps; ++t)
                ordered.at(i, t) = raw.at(it->second, t);
        }
        data.occ = std::move(ordered);
    } else {
        auto records = read_tips_csv(config.tips_csv);
        const std::int64_t t0 = parse_iso8601(config.from);
        const std::int64_t t1 = parse_iso8601(config.to);
        auto report = ingest_tips(records, config.step_minutes, t0, t1, data.network);
        data.occ = to_occurrence(report.rates);
    }
    data.occ = truncate_and_aggregate(data.occ, config.aggregate_factor);
    return data;
}

OccurrenceField slice_occurrence(const OccurrenceField& occ, std::int64_t from,
                                 std::int64_t to) {
    const std::int64_t step_s = static_cast<std::int64_t>(occ.step_minutes) * 60;
    std::size_t k0 = occ.n_steps, k1 = 0;
    for (std::size_t k = 0; k < occ.n_steps; ++k) {
        const std::int64_t t = occ.origin + static_cast<std::int64_t>(k) * step_s;
        if (t >= from && t < to) {
            if (k < k0) k0 = k;
            k1 = k + 1;
        }
    }
    if (k0 >= k1) throw std::runtime_error("slice_occurrence: empty window");
    OccurrenceField out;
    out.n_sites = occ.n_sites;
    out.n_steps = k1 - k0;
    out.step_minutes = occ.step_minutes;
    out.origin = occ.origin + static_cast<std::int64_t>(k0) * step_s;
    out.occ.resize(out.n_sites * out.n_steps);
    for (std::size_t i = 0; i < occ.n_sites; ++i)
        for (std::size_t t = 0; t < out.n_steps; ++t)
            out.at(i, t) = occ.at(i, k0 + t);
    return out;
}

// --- CSV artifact writers -------------------------------------------------

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

void write_cell(std::ofstream& out, double v) {
    if (std::isnan(v)) return; // empty cell
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    out << buf;
}

} // namespace

void write_cond_prob_csv(const std::string& path, const CondProbTable& table,
                         const std::vector<std::string>& site_ids,
                         const std::string& provenance) {
    auto out = open_out(path);
    out << "# " << provenance << "\n";
    out << "site,j,phi_d,count_d,phi_r,count_r\n";
    const std::size_t p = table.n_sites();
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            out << site_ids[i] << ',' << j << ',';
            write_cell(out, table.phi_d(i, j));
            out << ',' << static_cast<long long>(table.counts_d(i, j)) << ',';
            write_cell(out, table.phi_r(i, j));
            out << ',' << static_cast<long long>(table.counts_r(i, j)) << '\n';
        }
    }
}

void write_psi_csv(const std::string& path, const SimultaneousRainPMF& pmf,
                   const std::string& provenance) {
    auto out = open_out(path);
    out << "# " << provenance << "\n";
    out << "j,psi\n";
    for (std::size_t j = 0; j < pmf.psi.size(); ++j) {
        out << j << ',';
        write_cell(out, pmf.psi[j]);
        out << '\n';
    }
}

void write_spells_csv(const std::string& path, const SpellSummary& spells,
                      const std::vector<std::string>& site_ids,
                      const std::string& provenance) {
    auto out = open_out(path);
    out << "# " << provenance << "\n";
    out << "site,kind,length,count\n";
    for (std::size_t i = 0; i < site_ids.size(); ++i) {
        for (const auto& [len, cnt] : spells.dry_runs[i])
            out << site_ids[i] << ",dry," << len << ',' << cnt << '\n';
        for (const auto& [len, cnt] : spells.wet_runs[i])
            out << site_ids[i] << ",wet," << len << ',' << cnt << '\n';
    }
}

void write_plot_data_csv(const std::string& path, const CondProbTable& table,
                         CondKind kind, const std::vector<std::string>& site_ids,
                         const std::string& provenance) {
    auto out = open_out(path);
    out << "# " << provenance << "\n";
    out << "j";
    for (const auto& id : site_ids) out << ',' << id;
    out << ",median,n_available\n";
    const auto med = median_curve(table, kind);
    const std::size_t p = table.n_sites();
    const Matrix& phi = (kind == CondKind::dry) ? table.phi_d : table.phi_r;
    for (std::size_t j = 0; j < p; ++j) {
        out << j;
        for (std::size_t i = 0; i < p; ++i) {
            out << ',';
            const bool ok = (kind == CondKind::dry) ? table.available_d(i, j)
                                                    : table.available_r(i, j);
            if (ok) write_cell(out, phi(i, j));
        }
        out << ',';
        if (med.defined[j]) write_cell(out, med.value[j]);
        out << ',' << med.n_available[j] << '\n';
    }
}

void write_fbplot_csv(const std::string& path, const CurveEnsemble& ensemble,
                      const std::vector<double>* obs_curve,
                      const std::string& provenance) {
    const FBoxSummary box = fbox_summary(ensemble);
    auto out = open_out(path);
    out << "# " << provenance << "\n";
    out << "j,median,c50_lo,c50_hi,env_lo,env_hi";
    if (obs_curve) out << ",obs,obs_in_c50";
    out << '\n';
    const std::size_t m = ensemble.curves.cols();
    const std::size_t med = box.median_index;
    for (std::size_t j = 0; j < m; ++j) {
        out << j << ',';
        if (ensemble.is_avail(med, j)) write_cell(out, ensemble.curves(med, j));
        out << ',';
        write_cell(out, box.c50_lo[j]);
        out << ',';
        write_cell(out, box.c50_hi[j]);
        out << ',';
        write_cell(out, box.env_lo[j]);
        out << ',';
        write_cell(out, box.env_hi[j]);
        if (obs_curve) {
            out << ',';
            const double o = (j < obs_curve->size()) ? (*obs_curve)[j]
                                                     : std::numeric_limits<double>::quiet_NaN();
            write_cell(out, o);
            out << ',';
            if (!std::isnan(o) && !std::isnan(box.c50_lo[j]) && !std::isnan(box.c50_hi[j]))
                out << ((box.c50_lo[j] <= o && o <= box.c50_hi[j]) ? 1 : 0);
        }
        out << '\n';
    }
}

// --- the pipeline ---------------------------------------------------------

namespace {

json theta_json(const Theta& th) {
    json t;
    t["alpha"] = th.alpha;
    t["beta"] = th.beta;
    t["alpha_u"] = th.alpha_u;
    if (std::isinf(th.nu))
        t["nu"] = "inf";
    else
        t["nu"] = th.nu;
    return t;
}

json meta_json(const RunConfig& config) {
    json m;
    m["tool"] = "trf";
    m["version"] = version_string;
    m["seed"] = config.seed;
    m["config"] = config.config_hash.empty() ? "none" : config.config_hash;
    return m;
}

std::vector<double> curve_values(const MedianCurve& med) {
    std::vector<double> v(med.value.size());
    for (std::size_t j = 0; j < v.size(); ++j)
        v[j] = med.defined[j] ? med.value[j] : std::numeric_limits<double>::quiet_NaN();
    return v;
}

} // namespace

PipelineResult run_pipeline(const RunConfig& config, bool dry_run) {
    namespace fs = std::filesystem;
    PipelineResult result;
    const fs::path out_dir(config.out_dir);

    const std::string occ_path = (out_dir / "occurrence.csv").string();
    const std::string cutoff_path = (out_dir / "cutoff_model.json").string();
    const std::string fit_path = (out_dir / "fit.json").string();
    const std::string sim_path = (out_dir / "sim_rep0.bin").string();
    const std::string cond_path = (out_dir / "cond_prob.csv").string();
    const std::string psi_path = (out_dir / "psi.csv").string();
    const std::string spells_path = (out_dir / "spells.csv").string();
    const std::string plot_dry_path = (out_dir / "plot_data_dry.csv").string();
    const std::string plot_rain_path = (out_dir / "plot_data_rain.csv").string();
    const std::string fb_path = (out_dir / "fbplot.csv").string();
    const std::string manifest_path = (out_dir / "manifest.json").string();

    if (dry_run) {
        std::printf("plan (seed=%llu, threads=%d):\n",
                    static_cast<unsigned long long>(config.seed), config.threads);
        std::printf("  1 ingest    %s -> %s\n",
                    config.occurrence_csv.empty() ? config.tips_csv.c_str()
                                                  : config.occurrence_csv.c_str(),
                    occ_path.c_str());
        std::printf("  2 cutoff    H in 0..%d -> %s\n", config.h_max, cutoff_path.c_str());
        std::printf("  3 fit       model=%s M=%zu -> %s\n", config.model.c_str(),
                    config.fit_M, fit_path.c_str());
        std::printf("  4 simulate  %zu validation replications -> %s\n",
                    config.val_reps, sim_path.c_str());
        std::printf("  5 stats     -> %s, %s, %s\n", cond_path.c_str(), psi_path.c_str(),
                    spells_path.c_str());
        std::printf("  6 fbplot    kind=%s aggregate=%d -> %s\n", config.fb_kind.c_str(),
                    config.fb_aggregate, fb_path.c_str());
        std::printf("  7 manifest  -> %s\n", manifest_path.c_str());
        return result;
    }

    fs::create_directories(out_dir);
    const std::string prov = provenance_line(config);
    auto add = [&result](const std::string& p) { result.artifacts.push_back(p); };

    auto stage = [](const char* name, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            throw std::runtime_error(std::string("stage ") + name + " failed: " + e.what());
        }
    };

    // 1: observed data
    ObservedData obs;
    stage("ingest", [&] {
        obs = load_observed(config);
        Artifact a(occ_path);
        write_occurrence_csv(a.temp_path(), obs.occ, obs.site_ids, {prov});
        a.commit();
        add(occ_path);
    });

    // 2: seasonal cutoff
    HSelection sel;
    stage("cutoff", [&] {
        sel = select_H(obs.occ, config.h_max);
        Artifact a(cutoff_path);
        write_cutoff_model_json(a.temp_path(), sel.best.model, obs.site_ids,
                                sel.best.loglik, {prov});
        a.commit();
        add(cutoff_path);
    });

    // 3: simulation-based fit
    FitResult fitted;
    SpaceTimeCovSpec cov_template;
    stage("fit", [&] {
        cov_template.matern.eta = config.eta;
        cov_template.L = config.cov_L;
        cov_template.a.assign(static_cast<std::size_t>(config.cov_L) + 1, 0.0);
        cov_template.c.assign(static_cast<std::size_t>(config.cov_L) + 1, 0.0);
        for (std::size_t k = 0; k < config.cov_a.size() && k < cov_template.a.size(); ++k)
            cov_template.a[k] = config.cov_a[k];
        for (std::size_t k = 0; k < config.cov_c.size() && k < cov_template.c.size(); ++k)
            cov_template.c[k] = config.cov_c[k];

        FitContext ctx;
        ctx.network = obs.network;
        ctx.cov_template = cov_template;
        ctx.n_steps = obs.occ.n_steps;
        ctx.cutoff_model = sel.best.model;
        ctx.step_minutes = obs.occ.step_minutes;
        ctx.origin = obs.occ.origin;
        ctx.threads = config.threads;

        CriterionSpec spec;
        spec.M = config.fit_M;
        spec.obs = cond_prob_table(obs.occ, obs.network);
        spec.seed_base = config.seed;

        FitOptions opt;
        opt.nu_grid = config.nu_grid;
        opt.alpha = config.bounds_alpha;
        opt.beta = config.bounds_beta;
        opt.alpha_u = config.bounds_alpha_u;
        opt.nm = config.nm;

        const ModelKind kind = (config.model == "grf") ? ModelKind::grf : ModelKind::trf;
        fitted = fit(ctx, spec, kind, opt);

        json out;
        out["meta"] = meta_json(config);
        out["model"] = config.model;
        out["theta"] = theta_json(fitted.theta);
        out["value"] = fitted.value;
        out["total_evals"] = fitted.total_evals;
        out["reflections_into_bounds"] = fitted.reflections_into_bounds;
        out["degenerate_replications"] = fitted.degenerate_replications;
        json trace = json::array();
        for (const auto& tr : fitted.trace) {
            json t;
            t["nu"] = std::isinf(tr.nu) ? json("inf") : json(tr.nu);
            t["theta"] = theta_json(tr.theta);
            t["value"] = tr.value;
            t["evals"] = tr.evals;
            t["converged"] = tr.converged;
            trace.push_back(t);
        }
        out["trace"] = trace;

        Artifact a(fit_path);
        auto f = open_out(a.temp_path());
        f << out.dump(2) << '\n';
        f.close();
        a.commit();
        add(fit_path);
    });

    // 4: validation simulations -> median-curve ensemble
    CurveEnsemble ensemble;
    stage("simulate", [&] {
        if (config.val_reps < 3)
            throw std::runtime_error("val_reps must be >= 3 for the boxplot");
        SimConfig sim;
        sim.network = obs.network;
        sim.n_steps = obs.occ.n_steps;
        sim.cov = cov_template;
        sim.cov.matern.range = fitted.theta.alpha;
        sim.cov.beta = fitted.theta.beta;
        sim.alpha_u = fitted.theta.alpha_u;
        sim.nu = fitted.theta.nu;
        sim.seed = mix64(config.seed ^ 0x76616c69646174ULL); // validation namespace

        const CutoffSurface surface =
            cutoff_surface(sel.best.model, obs.occ.n_steps, obs.occ.step_minutes,
                           obs.occ.origin, fitted.theta.nu);
        const CondKind kind = (config.fb_kind == "dry") ? CondKind::dry : CondKind::rain;

        const std::size_t p = obs.network.size();
        ensemble.curves = Matrix(config.val_reps, p);
        ensemble.avail.assign(config.val_reps * p, 0);

        for (std::size_t rep = 0; rep < config.val_reps; ++rep) {
            LatentField field = simulate_trf(sim, rep);
            OccurrenceField occ = threshold_occurrence(field, surface,
                                                       obs.occ.step_minutes,
                                                       obs.occ.origin);
            occ = truncate_and_aggregate(occ, config.fb_aggregate);
            const auto table = cond_prob_table(occ, obs.network);
            const auto med = median_curve(table, kind);
            for (std::size_t jj = 0; jj < p; ++jj) {
                ensemble.curves(rep, jj) = med.defined[jj]
                                               ? med.value[jj]
                                               : std::numeric_limits<double>::quiet_NaN();
                ensemble.avail[rep * p + jj] = med.defined[jj] ? 1 : 0;
            }
            if (rep == 0) {
                Artifact a(sim_path);
                write_occurrence_binary(a.temp_path(), occ);
                a.commit();
                add(sim_path);
            }
        }
    });

    // 5: observed statistics
    CondProbTable obs_table;
    stage("stats", [&] {
        const OccurrenceField occ_fb = truncate_and_aggregate(obs.occ, config.fb_aggregate);
        obs_table = cond_prob_table(occ_fb, obs.network);
        const auto full_table = cond_prob_table(obs.occ, obs.network);
        {
            Artifact a(cond_path);
            write_cond_prob_csv(a.temp_path(), full_table, obs.site_ids, prov);
            a.commit();
            add(cond_path);
        }
        {
            Artifact a(psi_path);
            write_psi_csv(a.temp_path(), simultaneous_rain_pmf(obs.occ), prov);
            a.commit();
            add(psi_path);
        }
        {
            Artifact a(spells_path);
            write_spells_csv(a.temp_path(), spell_summary(obs.occ), obs.site_ids, prov);
            a.commit();
            add(spells_path);
        }
        {
            Artifact a(plot_dry_path);
            write_plot_data_csv(a.temp_path(), full_table, CondKind::dry, obs.site_ids, prov);
            a.commit();
            add(plot_dry_path);
        }
        {
            Artifact a(plot_rain_path);
            write_plot_data_csv(a.temp_path(), full_table, CondKind::rain, obs.site_ids, prov);
            a.commit();
            add(plot_rain_path);
        }
    });

    // 6: functional boxplot summary
    stage("fbplot", [&] {
        const CondKind kind = (config.fb_kind == "dry") ? CondKind::dry : CondKind::rain;
        const auto obs_med = curve_values(median_curve(obs_table, kind));
        Artifact a(fb_path);
        write_fbplot_csv(a.temp_path(), ensemble, &obs_med, prov);
        a.commit();
        add(fb_path);
    });

    // 7: manifest
    stage("manifest", [&] {
        json m;
        m["meta"] = meta_json(config);
        json arts = json::array();
        for (const auto& p : result.artifacts) {
            json a;
            a["path"] = fs::path(p).filename().string();
            a["fnv1a64"] = hex64(fnv1a64_file(p));
            arts.push_back(a);
        }
        m["artifacts"] = arts;
        Artifact a(manifest_path);
        auto f = open_out(a.temp_path());
        f << m.dump(2) << '\n';
        f.close();
        a.commit();
    });
    result.manifest_path = manifest_path;
    return result;
}

} // namespace trf
