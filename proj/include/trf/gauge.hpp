#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "trf/matrix.hpp"

namespace trf {

struct Site {
    std::string id;
    double lat = 0.0; // degrees
    double lon = 0.0; // degrees
};

struct TipRecord {
    std::string site_id;
    std::int64_t tip_time = 0; // UTC seconds
};

// Site geometry: great-circle distances (haversine, Earth radius 6371 km),
// the maximum pairwise distance d_max, and per-site nearest-neighbor
// orderings with ties broken by ascending site index.
struct GaugeNetwork {
    std::vector<Site> sites;
    Matrix dist;       // km, symmetric, zero diagonal
    double d_max = 0.0;
    std::vector<std::vector<int>> nn_order; // nn_order[i] = other sites by distance
    std::vector<std::pair<int, int>> coincident_pairs; // zero-distance pairs, flagged

    std::size_t size() const { return sites.size(); }
};

struct RateSeries {
    Matrix values;          // sites x timesteps, mm/hr
    int step_minutes = 0;
    std::int64_t origin = 0;
};

struct OccurrenceField {
    std::vector<std::uint8_t> occ; // row-major sites x timesteps, entries 0/1
    std::size_t n_sites = 0;
    std::size_t n_steps = 0;
    int step_minutes = 0;
    std::int64_t origin = 0;

    std::uint8_t at(std::size_t i, std::size_t t) const { return occ[i * n_steps + t]; }
    std::uint8_t& at(std::size_t i, std::size_t t) { return occ[i * n_steps + t]; }
};

double haversine_km(double lat1, double lon1, double lat2, double lon2);

// Builds geometry from site coordinates.  Duplicate site ids are an error;
// coincident coordinates are allowed but reported in coincident_pairs.
GaugeNetwork network_from_coords(const std::vector<Site>& sites);

struct IngestReport {
    RateSeries rates;
    std::size_t n_tips_used = 0;
    std::size_t n_tips_outside_span = 0; // skipped, not an error
};

// Counts tips per half-open interval [t_k, t_k+step) and converts to mm/hr
// at 0.254 mm per tip.  Records with unknown site ids are an error; tips
// outside [t_start, t_end) are skipped and counted in the report.
IngestReport ingest_tips(const std::vector<TipRecord>& records,
                         int step_minutes,
                         std::int64_t t_start, std::int64_t t_end,
                         const GaugeNetwork& network);

OccurrenceField to_occurrence(const RateSeries& rates);

// ORs each group of `factor` consecutive steps; the step count must be
// divisible by factor.
OccurrenceField aggregate_occurrence(const OccurrenceField& occ, int factor);

// --- file I/O -------------------------------------------------------------

std::vector<Site> read_network_csv(const std::string& path);         // site_id,lat,lon
std::vector<TipRecord> read_tips_csv(const std::string& path);        // site_id,timestamp

// Occurrence CSV: '#' provenance comments, then a header row
// "site,<t0>,<t1>,..." of ISO timestamps and one 0/1 row per site.
void write_occurrence_csv(const std::string& path, const OccurrenceField& occ,
                          const std::vector<std::string>& site_ids,
                          const std::vector<std::string>& provenance);
OccurrenceField read_occurrence_csv(const std::string& path,
                                    std::vector<std::string>* site_ids = nullptr);

// Compact binary occurrence: header (magic "TRFO", version u32, p u32,
// n u64, step-minutes u32, origin i64) followed by one bit-packed row per
// site, each padded to a byte boundary.
void write_occurrence_binary(const std::string& path, const OccurrenceField& occ);
OccurrenceField read_occurrence_binary(const std::string& path);

} // namespace trf
