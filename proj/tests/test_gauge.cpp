#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "trf/gauge.hpp"
#include "trf/timeutil.hpp"

using namespace trf;

namespace {

std::string temp_file(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

OccurrenceField make_field(std::size_t p, std::size_t n, int step = 15,
                           std::int64_t origin = 0) {
    OccurrenceField f;
    f.n_sites = p;
    f.n_steps = n;
    f.step_minutes = step;
    f.origin = origin;
    f.occ.assign(p * n, 0);
    return f;
}

} // namespace

TEST_CASE("haversine distances") {
    CHECK(haversine_km(10.0, 20.0, 10.0, 20.0) == 0.0);
    // one degree of longitude on the equator
    CHECK(haversine_km(0, 0, 0, 1) == doctest::Approx(111.194926644559).epsilon(1e-10));
    CHECK(haversine_km(35.0, -97.0, 35.1, -97.2) ==
          doctest::Approx(21.333077817464).epsilon(1e-10));
    // antipodal points: half the circumference
    CHECK(haversine_km(0, 0, 0, 180) == doctest::Approx(M_PI * 6371.0).epsilon(1e-12));
    // symmetry
    CHECK(haversine_km(12.3, 45.6, -7.8, 90.1) ==
          doctest::Approx(haversine_km(-7.8, 90.1, 12.3, 45.6)).epsilon(1e-14));
}

TEST_CASE("network geometry") {
    std::vector<Site> sites = {
        {"a", 0.0, 0.0}, {"b", 0.0, 0.1}, {"c", 0.0, 0.35}, {"d", 0.1, 0.0}};
    const GaugeNetwork net = network_from_coords(sites);
    REQUIRE(net.size() == 4);
    CHECK(net.dist(0, 0) == 0.0);
    CHECK(net.dist(0, 1) == doctest::Approx(net.dist(1, 0)));
    CHECK(net.dist(0, 1) == doctest::Approx(11.1194926644559).epsilon(1e-9));
    CHECK(net.d_max == doctest::Approx(net.dist(3, 2)).epsilon(1e-12));

    // nearest-neighbor order from site a: b (11.1), d (11.1), c (38.9) —
    // b and d tie in distance, ascending index breaks it
    REQUIRE(net.nn_order[0].size() == 3);
    CHECK(net.nn_order[0][0] == 1);
    CHECK(net.nn_order[0][1] == 3);
    CHECK(net.nn_order[0][2] == 2);
    CHECK(net.coincident_pairs.empty());

    std::vector<Site> dup = {{"a", 0, 0}, {"a", 1, 1}};
    CHECK_THROWS_AS(network_from_coords(dup), std::invalid_argument);
    std::vector<Site> one = {{"a", 0, 0}};
    CHECK_THROWS_AS(network_from_coords(one), std::invalid_argument);

    std::vector<Site> coincident = {{"a", 5, 5}, {"b", 5, 5}, {"c", 5, 6}};
    const GaugeNetwork net2 = network_from_coords(coincident);
    REQUIRE(net2.coincident_pairs.size() == 1);
    CHECK(net2.coincident_pairs[0].first == 0);
    CHECK(net2.coincident_pairs[0].second == 1);
}

TEST_CASE("tip ingestion") {
    std::vector<Site> sites = {{"g1", 0, 0}, {"g2", 0, 0.1}};
    const GaugeNetwork net = network_from_coords(sites);
    std::vector<TipRecord> tips = {
        {"g1", 0},      // step 0
        {"g1", 600},    // step 0
        {"g1", 900},    // step 1 (boundary goes right)
        {"g2", 1799},   // step 1
        {"g1", -5},     // before the span
        {"g2", 3600},   // at the end: outside [0, 3600)
    };
    const IngestReport rep = ingest_tips(tips, 15, 0, 3600, net);
    CHECK(rep.n_tips_used == 4);
    CHECK(rep.n_tips_outside_span == 2);
    REQUIRE(rep.rates.values.rows() == 2);
    REQUIRE(rep.rates.values.cols() == 4);
    // 2 tips in 15 minutes: 2 * 0.254 mm / 0.25 h = 2.032 mm/hr
    CHECK(rep.rates.values(0, 0) == doctest::Approx(2.032).epsilon(1e-12));
    CHECK(rep.rates.values(0, 1) == doctest::Approx(1.016).epsilon(1e-12));
    CHECK(rep.rates.values(1, 1) == doctest::Approx(1.016).epsilon(1e-12));
    CHECK(rep.rates.values(1, 0) == 0.0);

    std::vector<TipRecord> bad = {{"nope", 100}};
    CHECK_THROWS_AS(ingest_tips(bad, 15, 0, 3600, net), std::runtime_error);
    CHECK_THROWS_AS(ingest_tips(tips, 14, 0, 3600, net), std::invalid_argument); // 3600 s not divisible

    const OccurrenceField occ = to_occurrence(rep.rates);
    CHECK(occ.at(0, 0) == 1);
    CHECK(occ.at(0, 2) == 0);
    CHECK(occ.at(1, 1) == 1);
    CHECK(occ.step_minutes == 15);
}

TEST_CASE("occurrence aggregation") {
    OccurrenceField f = make_field(2, 8);
    // site 0: 1 0 0 0 | 0 0 0 0 ; site 1: 0 1 0 1 | 0 0 1 0
    f.at(0, 0) = 1;
    f.at(1, 1) = 1;
    f.at(1, 3) = 1;
    f.at(1, 6) = 1;

    const OccurrenceField a4 = aggregate_occurrence(f, 4);
    REQUIRE(a4.n_steps == 2);
    CHECK(a4.step_minutes == 60);
    CHECK(a4.at(0, 0) == 1);
    CHECK(a4.at(0, 1) == 0);
    CHECK(a4.at(1, 0) == 1);
    CHECK(a4.at(1, 1) == 1);

    // aggregating by 2 twice equals aggregating by 4
    const OccurrenceField a22 = aggregate_occurrence(aggregate_occurrence(f, 2), 2);
    CHECK(a22.occ == a4.occ);
    CHECK(a22.step_minutes == a4.step_minutes);

    CHECK_THROWS_AS(aggregate_occurrence(f, 3), std::invalid_argument);
    const OccurrenceField a1 = aggregate_occurrence(f, 1);
    CHECK(a1.occ == f.occ);
}

TEST_CASE("occurrence csv round trip") {
    OccurrenceField f = make_field(2, 5, 15, parse_iso8601("2026-08-23T10:30:00Z"));
    f.at(0, 0) = 1;
    f.at(0, 4) = 1;
    f.at(1, 2) = 1;
    const std::string path = temp_file("trf_occ_test.csv");
    write_occurrence_csv(path, f, {"g1", "g2"}, {"provenance line"});

    std::vector<std::string> ids;
    const OccurrenceField g = read_occurrence_csv(path, &ids);
    CHECK(g.occ == f.occ);
    CHECK(g.n_sites == 2);
    CHECK(g.n_steps == 5);
    CHECK(g.step_minutes == 15);
    CHECK(g.origin == f.origin);
    REQUIRE(ids.size() == 2);
    CHECK(ids[0] == "g1");
    CHECK(ids[1] == "g2");

    // comment made it into the file
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    CHECK(first.find("provenance line") != std::string::npos);
    in.close();
    std::filesystem::remove(path);
}

TEST_CASE("occurrence csv rejects non-binary cells") {
    const std::string path = temp_file("trf_occ_bad.csv");
    {
        std::ofstream out(path);
        out << "site,1970-01-01T00:00:00Z,1970-01-01T00:15:00Z\n";
        out << "a,0,2\n";
    }
    CHECK_THROWS_AS(read_occurrence_csv(path), std::runtime_error);
    std::filesystem::remove(path);
}

TEST_CASE("occurrence binary round trip and truncation") {
    OccurrenceField f = make_field(3, 37, 5, 123456789);
    // deterministic, irregular pattern crossing byte boundaries
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t t = 0; t < 37; ++t)
            f.at(i, t) = static_cast<std::uint8_t>(((i * 37 + t) * 2654435761u >> 7) & 1u);
    const std::string path = temp_file("trf_occ_test.bin");
    write_occurrence_binary(path, f);
    const OccurrenceField g = read_occurrence_binary(path);
    CHECK(g.occ == f.occ);
    CHECK(g.n_sites == f.n_sites);
    CHECK(g.n_steps == f.n_steps);
    CHECK(g.step_minutes == f.step_minutes);
    CHECK(g.origin == f.origin);

    // truncated payload is an error, not a silent short read
    const auto full = std::filesystem::file_size(path);
    std::filesystem::resize_file(path, full - 2);
    CHECK_THROWS_AS(read_occurrence_binary(path), std::runtime_error);
    // mangled magic
    {
        std::fstream io(path, std::ios::in | std::ios::out | std::ios::binary);
        io.seekp(0);
        io.write("XXXX", 4);
    }
    CHECK_THROWS_AS(read_occurrence_binary(path), std::runtime_error);
    std::filesystem::remove(path);
}

TEST_CASE("network csv reader") {
    const std::string path = temp_file("trf_net_test.csv");
    {
        std::ofstream out(path);
        out << "# comment\nsite_id,lat,lon\n";
        out << "a,35.2,-97.4\n";
        out << "b,35.3,-97.5\n";
    }
    const auto sites = read_network_csv(path);
    REQUIRE(sites.size() == 2);
    CHECK(sites[0].id == "a");
    CHECK(sites[1].lat == doctest::Approx(35.3));
    std::filesystem::remove(path);

    {
        std::ofstream out(path);
        out << "site_id,lat,lon\na,95.0,0.0\nb,10.0,0.0\n"; // latitude out of range
    }
    CHECK_THROWS_AS(network_from_coords(read_network_csv(path)), std::invalid_argument);
    std::filesystem::remove(path);
}

TEST_CASE("tips csv reader") {
    const std::string path = temp_file("trf_tips_test.csv");
    {
        std::ofstream out(path);
        out << "site_id,timestamp\n";
        out << "a,2026-08-23T10:30:00Z\n";
        out << "b,2026-08-23T10:31:30Z\n";
    }
    const auto tips = read_tips_csv(path);
    REQUIRE(tips.size() == 2);
    CHECK(tips[0].site_id == "a");
    CHECK(tips[0].tip_time == 1787481000);
    CHECK(tips[1].tip_time == 1787481090);
    std::filesystem::remove(path);
}
