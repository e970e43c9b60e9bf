#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "bladeprog/windload.hpp"

namespace bladeprog::fatigue {

/// S-N life model sigma_max/sigma_ult = 1 + m (exp(-(lg N / b)^a) - 1).
struct SNCurve {
    double a = 1.816;
    double b = 8.097;
    double m = 1.0;
    double sigma_ult = 1548.0;  // MPa
};

/// Parameters of the nonlinear damage law D = 1 - (1 - (n/N)^B)^A, with the
/// linear closure A = p B + q.
struct DamageParams {
    double A = 0.0;
    double B = 0.0;
    double p = 0.67;
    double q = 0.44;

    /// Builds params with A derived from B through A = p B + q.
    static DamageParams from_exponent_b(double B, double p = 0.67, double q = 0.44);
};

struct DamageState {
    double damage = 0.0;         // D in [0, 1]
    double elapsed_years = 0.0;
};

struct TrajectoryPoint {
    double t_years = 0.0;
    double damage = 0.0;
};

struct DamageTrajectory {
    std::vector<TrajectoryPoint> grid;
    bool reached_failure = false;
};

/// Predicted stress ratio sigma_max/sigma_ult at life N (N >= 1).
double sn_ratio(double n_cycles, const SNCurve& curve);

/// Inverts the S-N model: life N with sn_ratio(N) = sigma_max/sigma_ult,
/// by bisection on lg N over [0, 60] to |delta lg N| <= 1e-10. Ratios at or
/// above 1 clamp to N = 1 (single-cycle failure); ratios at or below the
/// model asymptote 1 - m are an error (endurance regime, infinite life).
double cycles_to_failure(double sigma_max, const SNCurve& curve);

/// A = p B + q; errors when the result is not positive.
double param_a(double B, double p, double q);

/// D(n) = 1 - (1 - (n/N)^B)^A, clamped to [0, 1] against rounding.
double damage_fraction(double n, double N, const DamageParams& params);

/// Inverse of damage_fraction at fixed N: the cycle count reproducing damage
/// D < 1. D = 1 is the infinite-life boundary and rejected.
double equivalent_cycles(double damage, double N, const DamageParams& params);

/// Applies one load block through equivalent-cycle transfer: the current
/// damage is converted to cycles at the block's amplitude, the block's
/// cycles are added, and the new damage read off. Blocks at or below the
/// S-N asymptote contribute nothing; reaching N pins damage at 1.
DamageState accumulate_block(DamageState state, const wind::LoadBlock& block,
                             const SNCurve& curve, const DamageParams& params);

/// Folds every block of every yearly spectrum in order, spreading each year
/// uniformly over steps_per_year sub-steps, and samples the damage mean at
/// each sub-step boundary. Truncates (with flag) once damage reaches 1.
DamageTrajectory damage_trajectory(std::span<const wind::LoadSpectrum> schedule,
                                   const SNCurve& curve, const DamageParams& params,
                                   int steps_per_year);

void write_trajectory_csv(std::ostream& out, const DamageTrajectory& trajectory);
DamageTrajectory read_trajectory_csv(std::istream& in);

}  // namespace bladeprog::fatigue
