#include "bladeprog/fatigue.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "bladeprog/csvio.hpp"
#include "bladeprog/errors.hpp"

namespace bladeprog::fatigue {

namespace {

constexpr double kMaxLgLife = 60.0;
constexpr double kLgTolerance = 1e-10;

void check_curve(const SNCurve& curve) {
    if (!(curve.a > 0.0) || !(curve.b > 0.0) || !(curve.m > 0.0) || !(curve.sigma_ult > 0.0)) {
        throw ValidationError("S-N curve parameters must all be > 0");
    }
}

void check_params(const DamageParams& params) {
    if (!(params.A > 0.0) || !(params.B > 0.0)) {
        throw ValidationError("damage parameters A and B must be > 0");
    }
}

// Model ratio as a function of lg N; strictly decreasing for m > 0. Written
// as (1 - m) + m exp(...) so tiny ratios near the asymptote survive rounding.
double ratio_at_lg(double lg_n, const SNCurve& curve) {
    return (1.0 - curve.m) + curve.m * std::exp(-std::pow(lg_n / curve.b, curve.a));
}

}  // namespace

DamageParams DamageParams::from_exponent_b(double B, double p, double q) {
    DamageParams params;
    params.B = B;
    params.p = p;
    params.q = q;
    params.A = param_a(B, p, q);
    return params;
}

double sn_ratio(double n_cycles, const SNCurve& curve) {
    check_curve(curve);
    if (!std::isfinite(n_cycles) || n_cycles < 1.0) {
        throw ValidationError("sn_ratio: life must be >= 1 cycle, got " +
                              std::to_string(n_cycles));
    }
    return ratio_at_lg(std::log10(n_cycles), curve);
}

double cycles_to_failure(double sigma_max, const SNCurve& curve) {
    check_curve(curve);
    if (!std::isfinite(sigma_max) || sigma_max <= 0.0) {
        throw ValidationError("cycles_to_failure: stress must be > 0, got " +
                              std::to_string(sigma_max));
    }
    const double ratio = sigma_max / curve.sigma_ult;
    if (ratio >= 1.0) return 1.0;

    const double floor_ratio = ratio_at_lg(kMaxLgLife, curve);
    if (ratio <= floor_ratio) {
        throw ValidationError(
            "cycles_to_failure: stress ratio " + std::to_string(ratio) +
            " is at or below the S-N asymptote; no finite life");
    }

    double lo = 0.0;   // ratio_at_lg(lo) = 1 >= ratio
    double hi = kMaxLgLife;
    long iterations = 0;
    while (hi - lo > kLgTolerance) {
        if (++iterations > 200) {
            throw ConvergenceError("cycles_to_failure: bisection stalled", iterations);
        }
        const double mid = 0.5 * (lo + hi);
        if (ratio_at_lg(mid, curve) >= ratio) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return std::pow(10.0, 0.5 * (lo + hi));
}

double param_a(double B, double p, double q) {
    if (!std::isfinite(B) || B <= 0.0) {
        throw ValidationError("param_a: B must be > 0, got " + std::to_string(B));
    }
    const double A = p * B + q;
    if (!std::isfinite(A) || A <= 0.0) {
        throw ValidationError("param_a: derived A = " + std::to_string(A) +
                              " must be > 0");
    }
    return A;
}

double damage_fraction(double n, double N, const DamageParams& params) {
    check_params(params);
    if (!std::isfinite(N) || N < 1.0) {
        throw ValidationError("damage_fraction: life must be >= 1, got " + std::to_string(N));
    }
    if (!std::isfinite(n) || n < 0.0 || n > N) {
        throw ValidationError("damage_fraction: cycles must lie in [0, N], got " +
                              std::to_string(n));
    }
    const double base = 1.0 - std::pow(n / N, params.B);
    const double damage = 1.0 - std::pow(std::max(base, 0.0), params.A);
    return std::clamp(damage, 0.0, 1.0);
}

double equivalent_cycles(double damage, double N, const DamageParams& params) {
    check_params(params);
    if (!std::isfinite(N) || N < 1.0) {
        throw ValidationError("equivalent_cycles: life must be >= 1, got " + std::to_string(N));
    }
    if (!std::isfinite(damage) || damage < 0.0 || damage >= 1.0) {
        throw ValidationError("equivalent_cycles: damage must lie in [0, 1), got " +
                              std::to_string(damage));
    }
    const double inner = 1.0 - std::pow(1.0 - damage, 1.0 / params.A);
    return N * std::pow(std::max(inner, 0.0), 1.0 / params.B);
}

DamageState accumulate_block(DamageState state, const wind::LoadBlock& block,
                             const SNCurve& curve, const DamageParams& params) {
    check_curve(curve);
    check_params(params);
    if (state.damage >= 1.0) {
        throw ValidationError("accumulate_block: state already at failure");
    }
    if (!std::isfinite(block.cycles) || block.cycles < 0.0) {
        throw ValidationError("accumulate_block: block cycles must be >= 0");
    }
    if (block.cycles == 0.0) return state;

    const double ratio = block.stress_amplitude / curve.sigma_ult;
    if (ratio <= ratio_at_lg(kMaxLgLife, curve)) {
        return state;  // endurance regime, no damage
    }

    const double N = cycles_to_failure(block.stress_amplitude, curve);
    const double n_eq = equivalent_cycles(state.damage, N, params);
    const double n_new = std::min(n_eq + block.cycles, N);
    state.damage = damage_fraction(n_new, N, params);
    return state;
}

DamageTrajectory damage_trajectory(std::span<const wind::LoadSpectrum> schedule,
                                   const SNCurve& curve, const DamageParams& params,
                                   int steps_per_year) {
    if (schedule.empty()) {
        throw ValidationError("damage_trajectory: schedule is empty");
    }
    if (steps_per_year < 1) {
        throw ValidationError("damage_trajectory: steps_per_year must be >= 1");
    }

    DamageTrajectory trajectory;
    trajectory.grid.push_back({0.0, 0.0});

    DamageState state;
    const double step_years = 1.0 / static_cast<double>(steps_per_year);
    std::size_t step_index = 0;

    for (std::size_t year = 0; year < schedule.size(); ++year) {
        std::vector<wind::LoadBlock> step_blocks = schedule[year].blocks;
        for (wind::LoadBlock& block : step_blocks) {
            block.cycles /= static_cast<double>(steps_per_year);
        }
        for (int step = 0; step < steps_per_year; ++step) {
            for (const wind::LoadBlock& block : step_blocks) {
                state = accumulate_block(state, block, curve, params);
                if (state.damage >= 1.0) break;
            }
            ++step_index;
            const double t = static_cast<double>(step_index) * step_years;
            state.elapsed_years = t;
            trajectory.grid.push_back({t, state.damage});
            if (state.damage >= 1.0) {
                trajectory.reached_failure = true;
                return trajectory;
            }
        }
    }
    return trajectory;
}

void write_trajectory_csv(std::ostream& out, const DamageTrajectory& trajectory) {
    out << "t_years,damage\n";
    for (const TrajectoryPoint& point : trajectory.grid) {
        out << csvio::format_number(point.t_years) << ','
            << csvio::format_number(point.damage) << '\n';
    }
}

DamageTrajectory read_trajectory_csv(std::istream& in) {
    csvio::LineReader reader(in);
    csvio::expect_header(reader, "t_years,damage");

    DamageTrajectory trajectory;
    std::string line;
    while (reader.next(line)) {
        if (line.empty()) continue;
        const auto fields = csvio::split_fields(line);
        if (fields.size() != 2) {
            throw ValidationError("line " + std::to_string(reader.line_number()) +
                                  ": expected 2 fields, got " + std::to_string(fields.size()));
        }
        TrajectoryPoint point;
        point.t_years = csvio::parse_double(fields[0], reader.line_number(), "t_years");
        point.damage = csvio::parse_double(fields[1], reader.line_number(), "damage");
        if (!std::isfinite(point.damage) || point.damage < 0.0 || point.damage > 1.0) {
            throw ValidationError("line " + std::to_string(reader.line_number()) +
                                  ": damage must lie in [0, 1]");
        }
        if (!trajectory.grid.empty() && point.t_years <= trajectory.grid.back().t_years) {
            throw ValidationError("line " + std::to_string(reader.line_number()) +
                                  ": t_years must be strictly increasing");
        }
        if (!trajectory.grid.empty() && point.damage < trajectory.grid.back().damage) {
            throw ValidationError("line " + std::to_string(reader.line_number()) +
                                  ": damage must be non-decreasing");
        }
        trajectory.grid.push_back(point);
    }
    if (trajectory.grid.empty()) {
        throw ValidationError("trajectory contains no points");
    }
    trajectory.reached_failure = trajectory.grid.back().damage >= 1.0;
    return trajectory;
}

}  // namespace bladeprog::fatigue
