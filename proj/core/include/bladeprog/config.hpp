#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bladeprog {

/// Pipeline configuration, read from a flat `key = value` file with `#`
/// comments. Every key is optional; defaults reproduce the reference
/// composite-blade setup.
struct ToolConfig {
    // Wind pressure model
    double rho = 1.29;  // kg/m^3
    double cp = 2.0;

    // S-N curve
    double sigma_ult = 1548.0;  // MPa
    double sn_a = 1.816;
    double sn_b = 8.097;
    double sn_m = 1.0;

    // Damage law (A derived from B unless damage_a is set explicitly)
    double damage_b = 0.1;
    double damage_p = 0.67;
    double damage_q = 0.44;
    double damage_a = 0.0;  // 0 = derive from B

    // Stress transfer calibration
    double v_ref = 25.0;       // m/s
    double sigma_ref = 718.0;  // MPa

    // Spectrum
    double rotor_rpm = 12.0;
    int n_bins = 50;

    // Prognosis
    double horizon_years = 25.0;
    double grid_step_years = 0.25;
    std::vector<double> d_cr_list = {0.7, 0.8, 0.9, 0.95};
    double cov_ref = 0.1;
    double u = 0.0;           // 0 = derive the rate from cov_ref
    double t_ref_years = 0.0; // 0 = end of the damage trajectory

    // Monte Carlo
    std::uint64_t seed = 12345;
    std::size_t n_paths = 100000;

    // synth-wind generator (Weibull 5-minute means)
    double wind_shape = 2.0;
    double wind_scale = 8.0;  // m/s
    std::size_t wind_samples = 8640;

    bool cov_ref_set = false;
    bool u_set = false;

    static ToolConfig load(std::istream& in);
    static ToolConfig load_file(const std::string& path);

    void validate() const;

    /// Number of trajectory sub-steps per year implied by grid_step_years.
    int steps_per_year() const;
};

}  // namespace bladeprog
