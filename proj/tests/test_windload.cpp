#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "bladeprog/errors.hpp"
#include "bladeprog/specfun.hpp"
#include "bladeprog/windload.hpp"

using bladeprog::ValidationError;
namespace wind = bladeprog::wind;

namespace {

const wind::WindConfig kPaperConfig{1.29, 2.0};

std::vector<wind::WindSample> make_samples(const std::vector<double>& speeds) {
    std::vector<wind::WindSample> samples;
    for (std::size_t i = 0; i < speeds.size(); ++i) {
        samples.push_back({static_cast<std::int64_t>(i) * 300, speeds[i]});
    }
    return samples;
}

}  // namespace

TEST_CASE("wind_pressure evaluates 0.5 rho V^2 Cp") {
    CHECK(wind::wind_pressure(0.0, kPaperConfig) == 0.0);
    CHECK(wind::wind_pressure(10.0, kPaperConfig) == doctest::Approx(129.0).epsilon(1e-14));
    CHECK(wind::wind_pressure(25.0, kPaperConfig) == doctest::Approx(806.25).epsilon(1e-14));
}

TEST_CASE("wind_pressure scales exactly quadratically") {
    bladeprog::specfun::SplitMix64 rng(bladeprog::specfun::RandomStream{23, 0});
    for (int i = 0; i < 500; ++i) {
        const double v = 30.0 * rng.next_unit();
        CHECK(wind::wind_pressure(2.0 * v, kPaperConfig) ==
              4.0 * wind::wind_pressure(v, kPaperConfig));
    }
    CHECK(wind::wind_pressure(5.0, kPaperConfig) < wind::wind_pressure(6.0, kPaperConfig));
}

TEST_CASE("wind_pressure rejects bad input") {
    CHECK_THROWS_AS(wind::wind_pressure(-1.0, kPaperConfig), ValidationError);
    CHECK_THROWS_AS(wind::wind_pressure(std::nan(""), kPaperConfig), ValidationError);
    CHECK_THROWS_AS(wind::wind_pressure(10.0, wind::WindConfig{-1.0, 2.0}), ValidationError);
}

TEST_CASE("calibrate_transfer reproduces the reference stress") {
    // Identity calibration: 129 MPa at the speed that gives 129 Pa.
    const auto identity = wind::calibrate_transfer(10.0, 129.0, kPaperConfig);
    CHECK(identity.mpa_per_pa == doctest::Approx(1.0).epsilon(1e-14));

    // The reference point maps back exactly.
    const auto transfer = wind::calibrate_transfer(25.0, 718.0, kPaperConfig);
    const double peak = transfer.mpa_per_pa * wind::wind_pressure(25.0, kPaperConfig);
    CHECK(peak == doctest::Approx(718.0).epsilon(1e-14));

    // Linearity in sigma_ref.
    const auto doubled = wind::calibrate_transfer(25.0, 2.0 * 718.0, kPaperConfig);
    CHECK(doubled.mpa_per_pa == 2.0 * transfer.mpa_per_pa);

    CHECK_THROWS_AS(wind::calibrate_transfer(0.0, 718.0, kPaperConfig), ValidationError);
    CHECK_THROWS_AS(wind::calibrate_transfer(25.0, -1.0, kPaperConfig), ValidationError);
}

TEST_CASE("ingest_wind_csv parses and validates") {
    SUBCASE("minimal record") {
        std::istringstream in("timestamp,speed_ms\n0,10.0\n");
        const auto samples = wind::ingest_wind_csv(in);
        REQUIRE(samples.size() == 1);
        CHECK(samples[0].timestamp == 0);
        CHECK(samples[0].speed == 10.0);
    }
    SUBCASE("crlf and blank trailing line") {
        std::istringstream in("timestamp,speed_ms\r\n0,10.0\r\n300,11.5\r\n\r\n");
        CHECK(wind::ingest_wind_csv(in).size() == 2);
    }
    SUBCASE("negative speed names the line") {
        std::istringstream in("timestamp,speed_ms\n0,10.0\n300,-3\n");
        CHECK_THROWS_WITH_AS(wind::ingest_wind_csv(in),
                             doctest::Contains("line 3"), ValidationError);
    }
    SUBCASE("garbage number") {
        std::istringstream in("timestamp,speed_ms\n0,fast\n");
        CHECK_THROWS_AS(wind::ingest_wind_csv(in), ValidationError);
    }
    SUBCASE("nan speed is rejected") {
        std::istringstream in("timestamp,speed_ms\n0,nan\n");
        CHECK_THROWS_AS(wind::ingest_wind_csv(in), ValidationError);
    }
    SUBCASE("wrong header") {
        std::istringstream in("time,speed\n0,10.0\n");
        CHECK_THROWS_AS(wind::ingest_wind_csv(in), ValidationError);
    }
    SUBCASE("empty input") {
        std::istringstream in("");
        CHECK_THROWS_AS(wind::ingest_wind_csv(in), ValidationError);
    }
    SUBCASE("header only") {
        std::istringstream in("timestamp,speed_ms\n");
        CHECK_THROWS_AS(wind::ingest_wind_csv(in), ValidationError);
    }
    SUBCASE("duplicate timestamps") {
        std::istringstream in("timestamp,speed_ms\n0,10.0\n0,11.0\n");
        CHECK_THROWS_WITH_AS(wind::ingest_wind_csv(in),
                             doctest::Contains("duplicate"), ValidationError);
    }
    SUBCASE("out-of-order input is re-sorted with a warning") {
        std::istringstream shuffled("timestamp,speed_ms\n600,12.0\n0,10.0\n300,11.0\n");
        std::vector<std::string> warnings;
        const auto sorted = wind::ingest_wind_csv(shuffled, &warnings);
        REQUIRE(warnings.size() == 1);
        REQUIRE(sorted.size() == 3);
        CHECK(sorted[0].timestamp == 0);
        CHECK(sorted[2].timestamp == 600);

        std::istringstream ordered("timestamp,speed_ms\n0,10.0\n300,11.0\n600,12.0\n");
        std::vector<std::string> no_warnings;
        const auto reference = wind::ingest_wind_csv(ordered, &no_warnings);
        CHECK(no_warnings.empty());
        REQUIRE(reference.size() == sorted.size());
        for (std::size_t i = 0; i < reference.size(); ++i) {
            CHECK(reference[i].timestamp == sorted[i].timestamp);
            CHECK(reference[i].speed == sorted[i].speed);
        }
    }
}

TEST_CASE("build_spectrum bins amplitudes and conserves cycles") {
    const wind::StressTransfer unit{1.0};

    SUBCASE("single sample gives one exact block") {
        const auto samples = make_samples({10.0});
        const auto spectrum = wind::build_spectrum(samples, unit, kPaperConfig, 12.0, 50);
        REQUIRE(spectrum.blocks.size() == 1);
        CHECK(spectrum.blocks[0].stress_amplitude == doctest::Approx(129.0).epsilon(1e-14));
        CHECK(spectrum.blocks[0].cycles == doctest::Approx(60.0).epsilon(1e-14));
        CHECK(spectrum.duration_s == 300.0);
    }
    SUBCASE("constant-speed record collapses to one bin for any n_bins") {
        const auto samples = make_samples(std::vector<double>(100, 8.0));
        for (const int n_bins : {1, 7, 50}) {
            const auto spectrum = wind::build_spectrum(samples, unit, kPaperConfig, 12.0, n_bins);
            REQUIRE(spectrum.blocks.size() == 1);
            CHECK(spectrum.blocks[0].stress_amplitude ==
                  wind::wind_pressure(8.0, kPaperConfig));
            CHECK(spectrum.blocks[0].cycles == doctest::Approx(6000.0).epsilon(1e-12));
        }
    }
    SUBCASE("n_bins = 1 puts everything at the midpoint of [0, max]") {
        const auto samples = make_samples({5.0, 10.0});
        const auto spectrum = wind::build_spectrum(samples, unit, kPaperConfig, 12.0, 1);
        REQUIRE(spectrum.blocks.size() == 1);
        const double max_amp = wind::wind_pressure(10.0, kPaperConfig);
        CHECK(spectrum.blocks[0].stress_amplitude == doctest::Approx(max_amp / 2.0));
        CHECK(spectrum.blocks[0].cycles == doctest::Approx(120.0).epsilon(1e-12));
    }
    SUBCASE("cycles conserved and peak bin near the maximum amplitude") {
        bladeprog::specfun::SplitMix64 rng(bladeprog::specfun::RandomStream{31, 0});
        std::vector<double> speeds;
        for (int i = 0; i < 1000; ++i) speeds.push_back(3.0 + 22.0 * rng.next_unit());
        const auto samples = make_samples(speeds);
        const int n_bins = 40;
        const auto spectrum = wind::build_spectrum(samples, unit, kPaperConfig, 12.0, n_bins);

        const double expected_total = 1000.0 * 12.0 * 5.0;
        CHECK(std::fabs(spectrum.total_cycles() - expected_total) <= 1e-9 * expected_total);

        const double max_speed = *std::max_element(speeds.begin(), speeds.end());
        const double max_amp = wind::wind_pressure(max_speed, kPaperConfig);
        const double half_width = max_amp / n_bins / 2.0;
        const double top_block = spectrum.blocks.back().stress_amplitude;
        CHECK(top_block <= max_amp);
        CHECK(top_block >= max_amp - half_width * 1.0000001);
    }
    SUBCASE("rejects bad arguments") {
        const auto samples = make_samples({10.0});
        CHECK_THROWS_AS(
            wind::build_spectrum({}, unit, kPaperConfig, 12.0, 50), ValidationError);
        CHECK_THROWS_AS(
            wind::build_spectrum(samples, unit, kPaperConfig, 0.0, 50), ValidationError);
        CHECK_THROWS_AS(
            wind::build_spectrum(samples, unit, kPaperConfig, 12.0, 0), ValidationError);
        CHECK_THROWS_AS(
            wind::build_spectrum(samples, wind::StressTransfer{0.0}, kPaperConfig, 12.0, 50),
            ValidationError);
    }
}

TEST_CASE("ingest then build_spectrum is invariant to sample order") {
    std::string ordered_csv = "timestamp,speed_ms\n";
    std::string shuffled_csv = "timestamp,speed_ms\n";
    std::vector<std::string> rows;
    bladeprog::specfun::SplitMix64 rng(bladeprog::specfun::RandomStream{37, 0});
    for (int i = 0; i < 200; ++i) {
        const double speed = 25.0 * rng.next_unit();
        rows.push_back(std::to_string(i * 300) + "," + std::to_string(speed) + "\n");
    }
    for (const auto& row : rows) ordered_csv += row;
    std::vector<std::string> shuffled = rows;
    for (std::size_t i = shuffled.size(); i > 1; --i) {
        std::swap(shuffled[i - 1], shuffled[static_cast<std::size_t>(rng.next_u64() % i)]);
    }
    for (const auto& row : shuffled) shuffled_csv += row;

    std::istringstream in_a(ordered_csv);
    std::istringstream in_b(shuffled_csv);
    const auto samples_a = wind::ingest_wind_csv(in_a);
    const auto samples_b = wind::ingest_wind_csv(in_b);
    const wind::StressTransfer unit{1.0};
    const auto spec_a = wind::build_spectrum(samples_a, unit, kPaperConfig, 12.0, 30);
    const auto spec_b = wind::build_spectrum(samples_b, unit, kPaperConfig, 12.0, 30);

    REQUIRE(spec_a.blocks.size() == spec_b.blocks.size());
    for (std::size_t i = 0; i < spec_a.blocks.size(); ++i) {
        CHECK(spec_a.blocks[i].stress_amplitude == spec_b.blocks[i].stress_amplitude);
        CHECK(spec_a.blocks[i].cycles == spec_b.blocks[i].cycles);
    }
}

TEST_CASE("tile_schedule rescales to annual cycles") {
    wind::LoadSpectrum half_year;
    half_year.duration_s = wind::kSecondsPerYear / 2.0;
    half_year.blocks = {{100.0, 1000.0}, {200.0, 10.0}};

    SUBCASE("half-year record doubles, horizon 2 gives two entries") {
        const auto schedule = wind::tile_schedule(half_year, 2.0);
        REQUIRE(schedule.size() == 2);
        for (const auto& year : schedule) {
            REQUIRE(year.blocks.size() == 2);
            CHECK(year.blocks[0].stress_amplitude == 100.0);
            CHECK(year.blocks[1].stress_amplitude == 200.0);
            CHECK(year.blocks[0].cycles == doctest::Approx(2000.0).epsilon(1e-14));
            CHECK(year.blocks[1].cycles == doctest::Approx(20.0).epsilon(1e-14));
        }
    }
    SUBCASE("25-year horizon gives 25 entries") {
        CHECK(wind::tile_schedule(half_year, 25.0).size() == 25);
    }
    SUBCASE("rejects non-positive horizon") {
        CHECK_THROWS_AS(wind::tile_schedule(half_year, 0.0), ValidationError);
        CHECK_THROWS_AS(wind::tile_schedule(half_year, -1.0), ValidationError);
    }
}

TEST_CASE("spectrum CSV round trip is stable") {
    wind::LoadSpectrum spectrum;
    spectrum.duration_s = wind::kSecondsPerYear;
    spectrum.blocks = {{12.3456789012345, 1e6 / 3.0}, {645.0, 42.0}};

    std::ostringstream first;
    wind::write_spectrum_csv(first, spectrum);
    std::istringstream back(first.str());
    const auto parsed = wind::read_spectrum_csv(back);
    std::ostringstream second;
    wind::write_spectrum_csv(second, parsed);
    CHECK(first.str() == second.str());

    std::istringstream header_only("stress_mpa,cycles\n");
    CHECK(wind::read_spectrum_csv(header_only).blocks.empty());
}
