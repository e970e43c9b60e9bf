#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace bladeprog::wind {

/// Air density [kg/m^3] and pressure coefficient [-] of the surface-pressure
/// model P = rho V^2 C_p / 2.
struct WindConfig {
    double rho = 1.29;
    double cp = 2.0;
};

/// One 5-minute mean wind speed record.
struct WindSample {
    std::int64_t timestamp = 0;  // seconds since epoch
    double speed = 0.0;          // m/s
};

/// Linear surrogate for the pressure-to-peak-stress map: stress [MPa] per
/// unit surface pressure [Pa].
struct StressTransfer {
    double mpa_per_pa = 0.0;
};

struct LoadBlock {
    double stress_amplitude = 0.0;  // MPa
    double cycles = 0.0;
};

struct LoadSpectrum {
    std::vector<LoadBlock> blocks;
    double duration_s = 0.0;

    double total_cycles() const;
};

/// Every sample covers one 5-minute averaging window.
inline constexpr double kSecondsPerSample = 300.0;
/// Julian year.
inline constexpr double kSecondsPerYear = 365.25 * 86400.0;

/// Surface pressure [Pa] at the given wind speed.
double wind_pressure(double speed, const WindConfig& cfg);

/// Transfer coefficient such that the reference speed reproduces the
/// reference peak stress: k = sigma_ref / wind_pressure(v_ref).
StressTransfer calibrate_transfer(double v_ref, double sigma_ref_mpa, const WindConfig& cfg);

/// Parses `timestamp,speed_ms` records. Samples arriving out of order are
/// re-sorted with a note appended to `warnings`; duplicate timestamps,
/// negative or non-finite speeds, and empty inputs are errors.
std::vector<WindSample> ingest_wind_csv(std::istream& in,
                                        std::vector<std::string>* warnings = nullptr);

/// Converts samples to stress amplitudes (one cycle per rotor revolution,
/// rotor_rpm * 5 cycles per sample) and bins them into n_bins equal-width
/// bins over [0, max amplitude], each represented by its midpoint. A record
/// whose amplitudes are all identical collapses to a single exact block.
LoadSpectrum build_spectrum(std::span<const WindSample> samples, StressTransfer transfer,
                            const WindConfig& cfg, double rotor_rpm, int n_bins);

/// Rescales the measured spectrum to a one-year duration (cycle counts
/// scaled by year/duration) and repeats it for each year of the horizon.
std::vector<LoadSpectrum> tile_schedule(const LoadSpectrum& spectrum, double horizon_years);

void write_spectrum_csv(std::ostream& out, const LoadSpectrum& spectrum);

/// Reads a `stress_mpa,cycles` file written by write_spectrum_csv. Spectrum
/// CSVs exchanged between pipeline stages are annualized, so the result
/// carries a one-year duration. A header-only file yields an empty spectrum.
LoadSpectrum read_spectrum_csv(std::istream& in);

}  // namespace bladeprog::wind
