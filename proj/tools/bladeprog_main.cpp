// bladeprog: wind-to-failure-probability fatigue prognosis pipeline.
//
// Subcommands map one-to-one onto pipeline stages; every stage reads and
// writes plot-ready CSV so stages can be chained or inspected in isolation.

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bladeprog/config.hpp"
#include "bladeprog/csvio.hpp"
#include "bladeprog/errors.hpp"
#include "bladeprog/fatigue.hpp"
#include "bladeprog/gproc.hpp"
#include "bladeprog/specfun.hpp"
#include "bladeprog/windload.hpp"

namespace {

using bladeprog::ToolConfig;
using bladeprog::ValidationError;

ToolConfig load_config(const std::string& path) {
    if (path.empty()) return ToolConfig{};
    return ToolConfig::load_file(path);
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open input file '" + path + "'");
    }
    return in;
}

class OutputTarget {
public:
    explicit OutputTarget(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) {
                throw ValidationError("cannot open output file '" + path + "'");
            }
        }
    }

    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

bladeprog::fatigue::SNCurve sn_curve_from(const ToolConfig& config) {
    return {config.sn_a, config.sn_b, config.sn_m, config.sigma_ult};
}

bladeprog::fatigue::DamageParams damage_params_from(const ToolConfig& config) {
    if (config.damage_a > 0.0) {
        bladeprog::fatigue::DamageParams params;
        params.A = config.damage_a;
        params.B = config.damage_b;
        params.p = config.damage_p;
        params.q = config.damage_q;
        return params;
    }
    return bladeprog::fatigue::DamageParams::from_exponent_b(config.damage_b, config.damage_p,
                                                             config.damage_q);
}

double reference_time(const ToolConfig& config, const bladeprog::fatigue::DamageTrajectory& t) {
    if (config.t_ref_years > 0.0) return config.t_ref_years;
    return t.grid.back().t_years;
}

bladeprog::gproc::GammaProcessModel model_from(const ToolConfig& config,
                                               const bladeprog::fatigue::DamageTrajectory& t) {
    const double t_ref = reference_time(config, t);
    if (config.u_set) {
        return bladeprog::gproc::calibrate_shape(t, config.u, t_ref);
    }
    return bladeprog::gproc::calibrate_from_cov(t, config.cov_ref, t_ref);
}

void cmd_synth_wind(const ToolConfig& config, const std::string& out_path) {
    OutputTarget out(out_path);
    bladeprog::specfun::SplitMix64 rng(bladeprog::specfun::RandomStream{config.seed, 0});
    out.stream() << "timestamp,speed_ms\n";
    for (std::size_t i = 0; i < config.wind_samples; ++i) {
        const double quantile = -std::log1p(-rng.next_unit());
        const double speed = config.wind_scale * std::pow(quantile, 1.0 / config.wind_shape);
        out.stream() << i * 300 << ',' << bladeprog::csvio::format_number(speed) << '\n';
    }
}

void cmd_spectrum(const ToolConfig& config, const std::string& wind_path,
                  const std::string& out_path) {
    std::ifstream in = open_input(wind_path);
    std::vector<std::string> warnings;
    const auto samples = bladeprog::wind::ingest_wind_csv(in, &warnings);
    for (const std::string& warning : warnings) {
        std::cerr << "warning: " << warning << '\n';
    }

    const bladeprog::wind::WindConfig wind_cfg{config.rho, config.cp};
    const auto transfer =
        bladeprog::wind::calibrate_transfer(config.v_ref, config.sigma_ref, wind_cfg);

    double max_speed = 0.0;
    for (const auto& sample : samples) max_speed = std::max(max_speed, sample.speed);
    const double peak_stress =
        transfer.mpa_per_pa * bladeprog::wind::wind_pressure(max_speed, wind_cfg);
    std::cerr << "stress transfer k = " << bladeprog::csvio::format_number(transfer.mpa_per_pa)
              << " MPa/Pa\n"
              << "peak stress = " << bladeprog::csvio::format_number(peak_stress)
              << " MPa at max speed " << bladeprog::csvio::format_number(max_speed) << " m/s\n";

    const auto measured = bladeprog::wind::build_spectrum(samples, transfer, wind_cfg,
                                                          config.rotor_rpm, config.n_bins);
    // The spectrum file carries per-year cycle counts.
    const auto annual = bladeprog::wind::tile_schedule(measured, 1.0).front();
    OutputTarget out(out_path);
    bladeprog::wind::write_spectrum_csv(out.stream(), annual);
}

void cmd_damage(const ToolConfig& config, const std::string& spectrum_path,
                const std::string& out_path) {
    std::ifstream in = open_input(spectrum_path);
    const auto annual = bladeprog::wind::read_spectrum_csv(in);
    const auto schedule = bladeprog::wind::tile_schedule(annual, config.horizon_years);

    const auto trajectory = bladeprog::fatigue::damage_trajectory(
        schedule, sn_curve_from(config), damage_params_from(config), config.steps_per_year());
    if (trajectory.reached_failure) {
        std::cerr << "damage reached 1 at t = "
                  << bladeprog::csvio::format_number(trajectory.grid.back().t_years)
                  << " years\n";
    }
    OutputTarget out(out_path);
    bladeprog::fatigue::write_trajectory_csv(out.stream(), trajectory);
}

void cmd_prognosis(const ToolConfig& config, const std::string& trajectory_path,
                   const std::string& out_path) {
    std::ifstream in = open_input(trajectory_path);
    const auto trajectory = bladeprog::fatigue::read_trajectory_csv(in);
    const auto model = model_from(config, trajectory);
    const auto result = bladeprog::gproc::make_prognosis(
        model, config.d_cr_list, config.horizon_years, config.grid_step_years);
    OutputTarget out(out_path);
    bladeprog::gproc::write_prognosis_csv(out.stream(), result);
}

void cmd_fit(const ToolConfig& config, const std::string& inspections_path,
             const std::string& trajectory_path, const std::string& method,
             const std::string& out_path) {
    std::ifstream insp_in = open_input(inspections_path);
    const auto inspections = bladeprog::gproc::read_inspections_csv(insp_in);
    std::ifstream traj_in = open_input(trajectory_path);
    const auto trajectory = bladeprog::fatigue::read_trajectory_csv(traj_in);
    const double t_ref = reference_time(config, trajectory);
    const auto basis = bladeprog::gproc::ShapeBasis::from_trajectory(trajectory, t_ref);

    OutputTarget out(out_path);
    std::ostream& os = out.stream();
    os << "method = " << method << '\n';
    if (method == "mom") {
        const auto estimate = bladeprog::gproc::estimate_mom(inspections, basis);
        if (estimate.status == bladeprog::gproc::RateStatus::degenerate) {
            throw ValidationError(
                "degenerate inspection data: increments carry no variance, u not estimable");
        }
        if (estimate.status == bladeprog::gproc::RateStatus::unidentifiable) {
            throw ValidationError(
                "u is unidentifiable from two inspections; mean ratio c/u = " +
                bladeprog::csvio::format_number(estimate.mean_ratio));
        }
        os << "c = " << bladeprog::csvio::format_number(estimate.c) << '\n'
           << "u = " << bladeprog::csvio::format_number(estimate.u) << '\n'
           << "mean_ratio = " << bladeprog::csvio::format_number(estimate.mean_ratio) << '\n'
           << "cov_at_t_ref = " << bladeprog::csvio::format_number(1.0 / std::sqrt(estimate.c))
           << '\n';
    } else {
        const auto estimate = bladeprog::gproc::estimate_mle(inspections, basis);
        os << "c = " << bladeprog::csvio::format_number(estimate.c) << '\n'
           << "u = " << bladeprog::csvio::format_number(estimate.u) << '\n'
           << "log_likelihood = " << bladeprog::csvio::format_number(estimate.log_likelihood)
           << '\n'
           << "cov_at_t_ref = " << bladeprog::csvio::format_number(1.0 / std::sqrt(estimate.c))
           << '\n';
    }
}

void cmd_simulate(const ToolConfig& config, const std::string& trajectory_path,
                  const std::string& out_path) {
    std::ifstream in = open_input(trajectory_path);
    const auto trajectory = bladeprog::fatigue::read_trajectory_csv(in);
    const auto model = model_from(config, trajectory);

    std::vector<double> grid;
    const auto n_steps = static_cast<std::size_t>(
        std::floor(config.horizon_years / config.grid_step_years + 1e-9));
    for (std::size_t i = 0; i <= n_steps; ++i) {
        grid.push_back(static_cast<double>(i) * config.grid_step_years);
    }

    const auto table = bladeprog::gproc::simulate_paths(model, grid, config.d_cr_list,
                                                        config.n_paths, config.seed);

    OutputTarget out(out_path);
    std::ostream& os = out.stream();
    os << "t_years";
    for (const double threshold : table.thresholds) {
        const int label = static_cast<int>(std::lround(threshold * 100.0));
        os << ",F_" << label << ",emp_" << label;
    }
    os << '\n';
    for (std::size_t i = 0; i < table.times.size(); ++i) {
        os << bladeprog::csvio::format_number(table.times[i]);
        for (std::size_t k = 0; k < table.thresholds.size(); ++k) {
            const double analytic =
                bladeprog::gproc::failure_probability(model, table.thresholds[k], table.times[i]);
            os << ',' << bladeprog::csvio::format_number(analytic) << ','
               << bladeprog::csvio::format_number(table.exceedance[i][k]);
        }
        os << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fatigue damage prognosis for wind turbine blades"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string wind_path;
    std::string spectrum_path;
    std::string trajectory_path;
    std::string inspections_path;
    std::string method = "mom";

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Configuration file (key = value lines)");
        cmd->add_option("--out", out_path, "Output path (default: stdout)");
    };

    CLI::App* synth = app.add_subcommand("synth-wind", "Generate a Weibull 5-min wind record");
    add_common(synth);

    CLI::App* spectrum = app.add_subcommand("spectrum", "Wind record to annual load spectrum");
    spectrum->add_option("wind_csv", wind_path, "Input wind record (timestamp,speed_ms)")
        ->required();
    add_common(spectrum);

    CLI::App* damage = app.add_subcommand("damage", "Load spectrum to damage trajectory");
    damage->add_option("spectrum_csv", spectrum_path, "Input spectrum (stress_mpa,cycles)")
        ->required();
    add_common(damage);

    CLI::App* prognosis =
        app.add_subcommand("prognosis", "Damage trajectory to failure probabilities");
    prognosis->add_option("trajectory_csv", trajectory_path, "Input trajectory (t_years,damage)")
        ->required();
    add_common(prognosis);

    CLI::App* fit = app.add_subcommand("fit", "Estimate (c, u) from inspection data");
    fit->add_option("inspections_csv", inspections_path, "Inspection record (t_years,damage)")
        ->required();
    fit->add_option("trajectory_csv", trajectory_path, "Reference trajectory (t_years,damage)")
        ->required();
    fit->add_option("--method", method, "Estimator: mom or mle")
        ->check(CLI::IsMember({"mom", "mle"}));
    add_common(fit);

    CLI::App* simulate =
        app.add_subcommand("simulate", "Monte Carlo exceedance check of the prognosis");
    simulate->add_option("trajectory_csv", trajectory_path, "Input trajectory (t_years,damage)")
        ->required();
    add_common(simulate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const ToolConfig config = load_config(config_path);
        if (synth->parsed()) cmd_synth_wind(config, out_path);
        else if (spectrum->parsed()) cmd_spectrum(config, wind_path, out_path);
        else if (damage->parsed()) cmd_damage(config, spectrum_path, out_path);
        else if (prognosis->parsed()) cmd_prognosis(config, trajectory_path, out_path);
        else if (fit->parsed()) cmd_fit(config, inspections_path, trajectory_path, method, out_path);
        else if (simulate->parsed()) cmd_simulate(config, trajectory_path, out_path);
    } catch (const bladeprog::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
