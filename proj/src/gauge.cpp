#include "trf/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "trf/csv.hpp"
#include "trf/timeutil.hpp"

namespace trf {

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
    constexpr double earth_radius_km = 6371.0;
    constexpr double deg = std::numbers::pi / 180.0;
    const double dlat = (lat2 - lat1) * deg;
    const double dlon = (lon2 - lon1) * deg;
    const double s1 = std::sin(0.5 * dlat);
    const double s2 = std::sin(0.5 * dlon);
    const double a = s1 * s1 + std::cos(lat1 * deg) * std::cos(lat2 * deg) * s2 * s2;
    return 2.0 * earth_radius_km * std::asin(std::min(1.0, std::sqrt(a)));
}

GaugeNetwork network_from_coords(const std::vector<Site>& sites) {
    if (sites.size() < 2) {
        throw std::invalid_argument("network_from_coords: need at least 2 sites");
    }
    std::set<std::string> seen;
    for (const auto& s : sites) {
        if (!seen.insert(s.id).second) {
            throw std::invalid_argument("network_from_coords: duplicate site id '" + s.id + "'");
        }
        if (std::fabs(s.lat) > 90.0 || std::fabs(s.lon) > 360.0) {
            throw std::invalid_argument("network_from_coords: invalid coordinates for '" + s.id + "'");
        }
    }

    GaugeNetwork net;
    net.sites = sites;
    const std::size_t p = sites.size();
    net.dist = Matrix(p, p);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) {
            const double d = haversine_km(sites[i].lat, sites[i].lon,
                                          sites[j].lat, sites[j].lon);
            net.dist(i, j) = d;
            net.dist(j, i) = d;
            net.d_max = std::max(net.d_max, d);
            if (d == 0.0) net.coincident_pairs.emplace_back(static_cast<int>(i),
                                                            static_cast<int>(j));
        }
    }

    net.nn_order.resize(p);
    for (std::size_t i = 0; i < p; ++i) {
        auto& order = net.nn_order[i];
        for (std::size_t j = 0; j < p; ++j) {
            if (j != i) order.push_back(static_cast<int>(j));
        }
        // Ties broken by ascending site index; stable_sort keeps the
        // index-sorted initial order within equal distances.
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return net.dist(i, a) < net.dist(i, b);
        });
    }
    return net;
}

IngestReport ingest_tips(const std::vector<TipRecord>& records,
                         int step_minutes,
                         std::int64_t t_start, std::int64_t t_end,
                         const GaugeNetwork& network) {
    if (step_minutes <= 0) throw std::invalid_argument("ingest_tips: step must be positive");
    const std::int64_t step_sec = std::int64_t{60} * step_minutes;
    const std::int64_t span = t_end - t_start;
    if (span <= 0 || span % step_sec != 0) {
        throw std::invalid_argument("ingest_tips: span is not a positive multiple of the step");
    }
    const std::size_t n_steps = static_cast<std::size_t>(span / step_sec);
    const std::size_t p = network.size();

    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < p; ++i) index[network.sites[i].id] = i;

    IngestReport rep;
    rep.rates.values = Matrix(p, n_steps);
    rep.rates.step_minutes = step_minutes;
    rep.rates.origin = t_start;

    // mm per tip over the interval length in hours.
    const double rate_per_tip = 0.254 / (step_minutes / 60.0);

    for (const auto& r : records) {
        const auto it = index.find(r.site_id);
        if (it == index.end()) {
            throw std::runtime_error("ingest_tips: unknown site id '" + r.site_id + "'");
        }
        if (r.tip_time < t_start || r.tip_time >= t_end) {
            ++rep.n_tips_outside_span;
            continue;
        }
        const std::size_t t = static_cast<std::size_t>((r.tip_time - t_start) / step_sec);
        rep.rates.values(it->second, t) += rate_per_tip;
        ++rep.n_tips_used;
    }
    return rep;
}

OccurrenceField to_occurrence(const RateSeries& rates) {
    OccurrenceField occ;
    occ.n_sites = rates.values.rows();
    occ.n_steps = rates.values.cols();
    occ.step_minutes = rates.step_minutes;
    occ.origin = rates.origin;
    occ.occ.resize(occ.n_sites * occ.n_steps);
    for (std::size_t i = 0; i < occ.n_sites; ++i) {
        for (std::size_t t = 0; t < occ.n_steps; ++t) {
            occ.at(i, t) = rates.values(i, t) > 0.0 ? 1 : 0;
        }
    }
    return occ;
}

OccurrenceField aggregate_occurrence(const OccurrenceField& occ, int factor) {
    if (factor <= 0) throw std::invalid_argument("aggregate_occurrence: factor must be positive");
    if (occ.n_steps % static_cast<std::size_t>(factor) != 0) {
        throw std::invalid_argument("aggregate_occurrence: " + std::to_string(occ.n_steps) +
                                    " steps not divisible by " + std::to_string(factor) +
                                    " (remainder " + std::to_string(occ.n_steps % factor) + ")");
    }
    OccurrenceField out;
    out.n_sites = occ.n_sites;
    out.n_steps = occ.n_steps / factor;
    out.step_minutes = occ.step_minutes * factor;
    out.origin = occ.origin;
    out.occ.resize(out.n_sites * out.n_steps);
    for (std::size_t i = 0; i < occ.n_sites; ++i) {
        for (std::size_t T = 0; T < out.n_steps; ++T) {
            std::uint8_t any = 0;
            for (int k = 0; k < factor; ++k) {
                any |= occ.at(i, T * factor + k);
            }
            out.at(i, T) = any;
        }
    }
    return out;
}

std::vector<Site> read_network_csv(const std::string& path) {
    const CsvTable t = read_csv(path);
    const std::size_t ci = column_index(t, "site_id");
    const std::size_t cla = column_index(t, "lat");
    const std::size_t clo = column_index(t, "lon");
    std::vector<Site> sites;
    for (const auto& row : t.rows) {
        sites.push_back({row[ci], parse_double(row[cla], "lat"),
                         parse_double(row[clo], "lon")});
    }
    return sites;
}

std::vector<TipRecord> read_tips_csv(const std::string& path) {
    const CsvTable t = read_csv(path);
    const std::size_t ci = column_index(t, "site_id");
    const std::size_t ct = column_index(t, "timestamp");
    std::vector<TipRecord> recs;
    for (const auto& row : t.rows) {
        recs.push_back({row[ci], parse_iso8601(row[ct])});
    }
    return recs;
}

void write_occurrence_csv(const std::string& path, const OccurrenceField& occ,
                          const std::vector<std::string>& site_ids,
                          const std::vector<std::string>& provenance) {
    if (site_ids.size() != occ.n_sites) {
        throw std::invalid_argument("write_occurrence_csv: site id count mismatch");
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    for (const auto& line : provenance) out << "# " << line << "\n";
    out << "site";
    const std::int64_t step_sec = std::int64_t{60} * occ.step_minutes;
    for (std::size_t t = 0; t < occ.n_steps; ++t) {
        out << ',' << format_iso8601(occ.origin + static_cast<std::int64_t>(t) * step_sec);
    }
    out << '\n';
    for (std::size_t i = 0; i < occ.n_sites; ++i) {
        out << site_ids[i];
        for (std::size_t t = 0; t < occ.n_steps; ++t) out << ',' << int(occ.at(i, t));
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

OccurrenceField read_occurrence_csv(const std::string& path,
                                    std::vector<std::string>* site_ids) {
    const CsvTable t = read_csv(path);
    if (t.header.size() < 2 || t.header[0] != "site") {
        throw std::runtime_error("'" + path + "': not an occurrence CSV");
    }
    OccurrenceField occ;
    occ.n_sites = t.rows.size();
    occ.n_steps = t.header.size() - 1;
    occ.origin = parse_iso8601(t.header[1]);
    if (occ.n_steps >= 2) {
        const std::int64_t second = parse_iso8601(t.header[2]);
        occ.step_minutes = static_cast<int>((second - occ.origin) / 60);
    }
    occ.occ.resize(occ.n_sites * occ.n_steps);
    if (site_ids) site_ids->clear();
    for (std::size_t i = 0; i < occ.n_sites; ++i) {
        if (site_ids) site_ids->push_back(t.rows[i][0]);
        for (std::size_t tt = 0; tt < occ.n_steps; ++tt) {
            const auto& cell = t.rows[i][tt + 1];
            if (cell != "0" && cell != "1") {
                throw std::runtime_error("'" + path + "': occurrence entry '" + cell +
                                         "' is not 0/1");
            }
            occ.at(i, tt) = cell == "1" ? 1 : 0;
        }
    }
    return occ;
}

namespace {

constexpr char occ_magic[4] = {'T', 'R', 'F', 'O'};
constexpr std::uint32_t occ_version = 1;

template <typename T>
void write_pod(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T read_pod(std::ifstream& in, const std::string& path) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw std::runtime_error("'" + path + "': truncated occurrence binary");
    return v;
}

} // namespace

void write_occurrence_binary(const std::string& path, const OccurrenceField& occ) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out.write(occ_magic, 4);
    write_pod(out, occ_version);
    write_pod(out, static_cast<std::uint32_t>(occ.n_sites));
    write_pod(out, static_cast<std::uint64_t>(occ.n_steps));
    write_pod(out, static_cast<std::uint32_t>(occ.step_minutes));
    write_pod(out, static_cast<std::int64_t>(occ.origin));
    const std::size_t row_bytes = (occ.n_steps + 7) / 8;
    std::vector<std::uint8_t> row(row_bytes);
    for (std::size_t i = 0; i < occ.n_sites; ++i) {
        std::fill(row.begin(), row.end(), 0);
        for (std::size_t t = 0; t < occ.n_steps; ++t) {
            if (occ.at(i, t)) row[t / 8] |= static_cast<std::uint8_t>(1u << (t % 8));
        }
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row_bytes));
    }
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

OccurrenceField read_occurrence_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, occ_magic, 4) != 0) {
        throw std::runtime_error("'" + path + "': not an occurrence binary (bad magic)");
    }
    const auto version = read_pod<std::uint32_t>(in, path);
    if (version != occ_version) {
        throw std::runtime_error("'" + path + "': unsupported version " +
                                 std::to_string(version));
    }
    OccurrenceField occ;
    occ.n_sites = read_pod<std::uint32_t>(in, path);
    occ.n_steps = read_pod<std::uint64_t>(in, path);
    occ.step_minutes = static_cast<int>(read_pod<std::uint32_t>(in, path));
    occ.origin = read_pod<std::int64_t>(in, path);
    occ.occ.resize(occ.n_sites * occ.n_steps);
    const std::size_t row_bytes = (occ.n_steps + 7) / 8;
    std::vector<std::uint8_t> row(row_bytes);
    for (std::size_t i = 0; i < occ.n_sites; ++i) {
        in.read(reinterpret_cast<char*>(row.data()),
                static_cast<std::streamsize>(row_bytes));
        if (!in) throw std::runtime_error("'" + path + "': truncated occurrence binary");
        for (std::size_t t = 0; t < occ.n_steps; ++t) {
            occ.at(i, t) = (row[t / 8] >> (t % 8)) & 1u;
        }
    }
    return occ;
}

} // namespace trf
