#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trf/fitting.hpp"
#include "trf/func_boxplot.hpp"
#include "trf/gauge.hpp"
#include "trf/occurrence_stats.hpp"

namespace trf {

// End-to-end run description.  Loaded from a JSON config file; every CLI
// flag overrides the matching key.  Either `tips_csv` + time window or
// `occurrence_csv` must be given, plus `network_csv` in both cases.
struct RunConfig {
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out_dir = "out";

    std::string tips_csv;
    std::string occurrence_csv;
    std::string network_csv;
    std::string from, to;      // ISO-8601, used with tips ingestion
    int step_minutes = 15;
    int aggregate_factor = 1;  // OR-aggregation applied to the observed field

    int h_max = 2;             // cutoff harmonic search bound

    std::string model = "trf"; // "trf" or "grf"
    std::vector<int> nu_grid{2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::size_t fit_M = 20;
    double eta = 1.0;
    int cov_L = 2;
    std::vector<double> cov_a, cov_c; // default zeros of length cov_L+1
    FitBounds bounds_alpha{0.1, 1.5};
    FitBounds bounds_beta{0.0, 0.9};
    FitBounds bounds_alpha_u{0.02, 0.6};
    NelderMeadOptions nm{};

    std::size_t val_reps = 200; // validation simulations for the boxplot
    int fb_aggregate = 1;       // aggregation before median curves
    std::string fb_kind = "dry";

    std::string config_hash; // hex FNV-1a of the config source, set on load
};

RunConfig load_run_config(const std::string& path);

// Provenance header shared by every artifact: tool version, seed, config hash.
std::string provenance_line(const RunConfig& config);

std::uint64_t fnv1a64(const void* data, std::size_t n);
std::uint64_t fnv1a64_file(const std::string& path);

struct PipelineResult {
    std::vector<std::string> artifacts; // paths in creation order
    std::string manifest_path;
};

// ingest/read -> cutoff -> fit -> validation simulations -> stats -> fbplot
// -> manifest.  Fails atomically per artifact: unfinished files keep a
// .partial suffix.  dry_run prints the stage plan and writes nothing.
PipelineResult run_pipeline(const RunConfig& config, bool dry_run = false);

// --- stage helpers shared with the CLI subcommands ------------------------

struct ObservedData {
    GaugeNetwork network;
    std::vector<std::string> site_ids;
    OccurrenceField occ;
};

ObservedData load_observed(const RunConfig& config);

OccurrenceField slice_occurrence(const OccurrenceField& occ, std::int64_t from,
                                 std::int64_t to);

void write_cond_prob_csv(const std::string& path, const CondProbTable& table,
                         const std::vector<std::string>& site_ids,
                         const std::string& provenance);
void write_psi_csv(const std::string& path, const SimultaneousRainPMF& pmf,
                   const std::string& provenance);
void write_spells_csv(const std::string& path, const SpellSummary& spells,
                      const std::vector<std::string>& site_ids,
                      const std::string& provenance);
void write_plot_data_csv(const std::string& path, const CondProbTable& table,
                         CondKind kind, const std::vector<std::string>& site_ids,
                         const std::string& provenance);

// Functional boxplot summary CSV: j, median, c50_lo, c50_hi, env_lo,
// env_hi[, obs, obs_in_c50].  Curves with undefined points leave cells empty.
void write_fbplot_csv(const std::string& path, const CurveEnsemble& ensemble,
                      const std::vector<double>* obs_curve,
                      const std::string& provenance);

// Write-then-rename helper honoring the .partial contract.
class Artifact {
  public:
    explicit Artifact(std::string final_path);
    ~Artifact();
    const std::string& temp_path() const { return temp_; }
    void commit();

  private:
    std::string final_;
    std::string temp_;
    bool committed_ = false;
};

} // namespace trf
