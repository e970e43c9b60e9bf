#include "bladeprog/windload.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include "bladeprog/csvio.hpp"
#include "bladeprog/errors.hpp"

namespace bladeprog::wind {

namespace {

void check_config(const WindConfig& cfg) {
    if (!std::isfinite(cfg.rho) || cfg.rho <= 0.0) {
        throw ValidationError("wind config: rho must be > 0, got " + std::to_string(cfg.rho));
    }
    if (!std::isfinite(cfg.cp) || cfg.cp <= 0.0) {
        throw ValidationError("wind config: cp must be > 0, got " + std::to_string(cfg.cp));
    }
}

}  // namespace

double LoadSpectrum::total_cycles() const {
    double total = 0.0;
    for (const LoadBlock& block : blocks) total += block.cycles;
    return total;
}

double wind_pressure(double speed, const WindConfig& cfg) {
    check_config(cfg);
    if (!std::isfinite(speed) || speed < 0.0) {
        throw ValidationError("wind_pressure: speed must be finite and >= 0, got " +
                              std::to_string(speed));
    }
    return (0.5 * cfg.rho) * (speed * speed) * cfg.cp;
}

StressTransfer calibrate_transfer(double v_ref, double sigma_ref_mpa, const WindConfig& cfg) {
    if (!std::isfinite(v_ref) || v_ref <= 0.0) {
        throw ValidationError("calibrate_transfer: v_ref must be > 0, got " +
                              std::to_string(v_ref));
    }
    if (!std::isfinite(sigma_ref_mpa) || sigma_ref_mpa <= 0.0) {
        throw ValidationError("calibrate_transfer: sigma_ref must be > 0, got " +
                              std::to_string(sigma_ref_mpa));
    }
    const double pressure = wind_pressure(v_ref, cfg);
    if (pressure <= 0.0) {
        throw ValidationError("calibrate_transfer: reference pressure is zero");
    }
    return StressTransfer{sigma_ref_mpa / pressure};
}

std::vector<WindSample> ingest_wind_csv(std::istream& in, std::vector<std::string>* warnings) {
    csvio::LineReader reader(in);
    csvio::expect_header(reader, "timestamp,speed_ms");

    std::vector<WindSample> samples;
    std::string line;
    while (reader.next(line)) {
        if (line.empty()) continue;
        const auto fields = csvio::split_fields(line);
        if (fields.size() != 2) {
            throw ValidationError("line " + std::to_string(reader.line_number()) +
                                  ": expected 2 fields, got " + std::to_string(fields.size()));
        }
        WindSample sample;
        sample.timestamp = csvio::parse_int(fields[0], reader.line_number(), "timestamp");
        sample.speed = csvio::parse_double(fields[1], reader.line_number(), "speed_ms");
        if (!std::isfinite(sample.speed) || sample.speed < 0.0) {
            throw ValidationError("line " + std::to_string(reader.line_number()) +
                                  ": speed_ms must be finite and >= 0, got " +
                                  std::string(fields[1]));
        }
        samples.push_back(sample);
    }
    if (samples.empty()) {
        throw ValidationError("wind record contains no samples");
    }

    const bool sorted = std::is_sorted(samples.begin(), samples.end(),
                                       [](const WindSample& a, const WindSample& b) {
                                           return a.timestamp < b.timestamp;
                                       });
    if (!sorted) {
        std::stable_sort(samples.begin(), samples.end(),
                         [](const WindSample& a, const WindSample& b) {
                             return a.timestamp < b.timestamp;
                         });
        if (warnings) {
            warnings->push_back("input timestamps were out of order; samples re-sorted");
        }
    }
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (samples[i].timestamp == samples[i - 1].timestamp) {
            throw ValidationError("duplicate timestamp " +
                                  std::to_string(samples[i].timestamp) +
                                  "; timestamps must be strictly increasing");
        }
    }
    return samples;
}

LoadSpectrum build_spectrum(std::span<const WindSample> samples, StressTransfer transfer,
                            const WindConfig& cfg, double rotor_rpm, int n_bins) {
    check_config(cfg);
    if (samples.empty()) {
        throw ValidationError("build_spectrum: empty sample set");
    }
    if (!std::isfinite(rotor_rpm) || rotor_rpm <= 0.0) {
        throw ValidationError("build_spectrum: rotor_rpm must be > 0, got " +
                              std::to_string(rotor_rpm));
    }
    if (n_bins < 1) {
        throw ValidationError("build_spectrum: n_bins must be >= 1, got " +
                              std::to_string(n_bins));
    }
    if (!std::isfinite(transfer.mpa_per_pa) || transfer.mpa_per_pa <= 0.0) {
        throw ValidationError("build_spectrum: stress transfer must be > 0");
    }

    const double cycles_per_sample = rotor_rpm * kSecondsPerSample / 60.0;

    std::vector<double> amplitudes;
    amplitudes.reserve(samples.size());
    double max_amp = 0.0;
    double min_amp = std::numeric_limits<double>::infinity();
    for (const WindSample& sample : samples) {
        const double amp = transfer.mpa_per_pa * wind_pressure(sample.speed, cfg);
        amplitudes.push_back(amp);
        max_amp = std::max(max_amp, amp);
        min_amp = std::min(min_amp, amp);
    }

    LoadSpectrum spectrum;
    spectrum.duration_s = static_cast<double>(samples.size()) * kSecondsPerSample;

    if (min_amp == max_amp) {
        // Zero spread: a single exact block preserves the amplitude.
        spectrum.blocks.push_back(
            {max_amp, cycles_per_sample * static_cast<double>(samples.size())});
        return spectrum;
    }

    const double width = max_amp / static_cast<double>(n_bins);
    std::vector<double> bin_cycles(static_cast<std::size_t>(n_bins), 0.0);
    for (const double amp : amplitudes) {
        auto index = static_cast<std::size_t>(amp / width);
        index = std::min(index, static_cast<std::size_t>(n_bins) - 1);
        bin_cycles[index] += cycles_per_sample;
    }
    for (std::size_t i = 0; i < bin_cycles.size(); ++i) {
        if (bin_cycles[i] > 0.0) {
            const double midpoint = (static_cast<double>(i) + 0.5) * width;
            spectrum.blocks.push_back({midpoint, bin_cycles[i]});
        }
    }
    return spectrum;
}

std::vector<LoadSpectrum> tile_schedule(const LoadSpectrum& spectrum, double horizon_years) {
    if (!std::isfinite(horizon_years) || horizon_years <= 0.0) {
        throw ValidationError("tile_schedule: horizon must be > 0 years, got " +
                              std::to_string(horizon_years));
    }
    if (!(spectrum.duration_s > 0.0)) {
        throw ValidationError("tile_schedule: spectrum duration must be > 0");
    }

    const double scale = kSecondsPerYear / spectrum.duration_s;
    LoadSpectrum annual;
    annual.duration_s = kSecondsPerYear;
    annual.blocks.reserve(spectrum.blocks.size());
    for (const LoadBlock& block : spectrum.blocks) {
        annual.blocks.push_back({block.stress_amplitude, block.cycles * scale});
    }

    const auto years = static_cast<std::size_t>(std::ceil(horizon_years - 1e-12));
    return std::vector<LoadSpectrum>(years, annual);
}

void write_spectrum_csv(std::ostream& out, const LoadSpectrum& spectrum) {
    out << "stress_mpa,cycles\n";
    for (const LoadBlock& block : spectrum.blocks) {
        out << csvio::format_number(block.stress_amplitude) << ','
            << csvio::format_number(block.cycles) << '\n';
    }
}

LoadSpectrum read_spectrum_csv(std::istream& in) {
    csvio::LineReader reader(in);
    csvio::expect_header(reader, "stress_mpa,cycles");

    LoadSpectrum spectrum;
    spectrum.duration_s = kSecondsPerYear;
    std::string line;
    while (reader.next(line)) {
        if (line.empty()) continue;
        const auto fields = csvio::split_fields(line);
        if (fields.size() != 2) {
            throw ValidationError("line " + std::to_string(reader.line_number()) +
                                  ": expected 2 fields, got " + std::to_string(fields.size()));
        }
        LoadBlock block;
        block.stress_amplitude = csvio::parse_double(fields[0], reader.line_number(), "stress_mpa");
        block.cycles = csvio::parse_double(fields[1], reader.line_number(), "cycles");
        if (!std::isfinite(block.stress_amplitude) || block.stress_amplitude < 0.0) {
            throw ValidationError("line " + std::to_string(reader.line_number()) +
                                  ": stress_mpa must be >= 0");
        }
        if (!std::isfinite(block.cycles) || block.cycles < 0.0) {
            throw ValidationError("line " + std::to_string(reader.line_number()) +
                                  ": cycles must be >= 0");
        }
        spectrum.blocks.push_back(block);
    }
    return spectrum;
}

}  // namespace bladeprog::wind
