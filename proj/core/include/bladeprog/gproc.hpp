#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "bladeprog/fatigue.hpp"

namespace bladeprog::gproc {

/// Piecewise-linear shape basis g(t): non-decreasing, g(0) = 0, normalized
/// so g(t_ref) = 1. Evaluation clamps flat beyond the last knot.
class ShapeBasis {
public:
    ShapeBasis() = default;

    /// Normalizes the trajectory by its (interpolated) value at t_ref.
    static ShapeBasis from_trajectory(const fatigue::DamageTrajectory& trajectory, double t_ref);

    double value(double t) const;
    double end_time() const;
    const std::vector<fatigue::TrajectoryPoint>& knots() const { return knots_; }

private:
    std::vector<fatigue::TrajectoryPoint> knots_;
};

/// Gamma process X(t) with shape function v(t) = c g(t) and rate u:
/// E[X(t)] = v(t)/u, Var[X(t)] = v(t)/u^2.
struct GammaProcessModel {
    double shape_scale = 0.0;  // c
    double rate = 0.0;         // u
    ShapeBasis basis;
    double t_ref = 0.0;

    double shape(double t) const { return shape_scale * basis.value(t); }
};

struct InspectionRecord {
    double t_years = 0.0;
    double damage = 0.0;
};

enum class RateStatus {
    ok,
    unidentifiable,  // too few inspections to separate c from u
    degenerate,      // zero sample variance in the increments
};

struct MomEstimate {
    double mean_ratio = 0.0;  // c/u, available whenever the data are valid
    double c = 0.0;
    double u = 0.0;
    RateStatus status = RateStatus::ok;
};

struct MleEstimate {
    double c = 0.0;
    double u = 0.0;
    double log_likelihood = 0.0;
};

struct ExceedanceTable {
    std::vector<double> times;
    std::vector<double> thresholds;
    std::vector<std::vector<double>> exceedance;  // [time][threshold]
    std::vector<double> mean;                     // ensemble mean per time
    std::vector<double> variance;                 // unbiased sample variance per time
    std::size_t n_paths = 0;
};

struct PrognosisResult {
    std::vector<double> thresholds;
    struct Row {
        double t = 0.0;
        double damage_mean = 0.0;
        std::vector<double> failure_prob;   // F(t) per threshold
        std::vector<double> interval_prob;  // p_i per threshold
    };
    std::vector<Row> rows;
};

/// Mean-matches the process to a deterministic trajectory: g = D/D(t_ref),
/// c = u D(t_ref), so E[X(t)] = D(t) for every t.
GammaProcessModel calibrate_shape(const fatigue::DamageTrajectory& trajectory, double u,
                                  double t_ref);

/// As calibrate_shape, with the rate chosen so the coefficient of variation
/// of X(t_ref) equals cov_ref: u = 1 / (cov_ref^2 D(t_ref)).
GammaProcessModel calibrate_from_cov(const fatigue::DamageTrajectory& trajectory, double cov_ref,
                                     double t_ref);

/// F(t) = P(X(t) >= d_cr) = Q(v(t), u d_cr). By convention F = 0 when
/// v(t) = 0 and F = 1 for the degenerate threshold d_cr = 0.
double failure_probability(const GammaProcessModel& model, double d_cr, double t);

/// Per-interval failure mass over a strictly increasing grid:
/// p_0 = F(t_0), p_i = F(t_i) - F(t_{i-1}); partial sums telescope to F.
std::vector<double> interval_failure_probability(const GammaProcessModel& model, double d_cr,
                                                 std::span<const double> grid);

/// Gamma density of X(t) at damage level d, evaluated through logs.
double damage_pdf(const GammaProcessModel& model, double t, double d);

/// Method-of-moments estimate of (c, u) from inspection data against a fixed
/// basis. The increment sequence is anchored at X(0) = 0. Exactly two
/// inspections leave u unidentifiable; zero increment variance is flagged
/// degenerate. In both cases only mean_ratio is meaningful.
MomEstimate estimate_mom(std::span<const InspectionRecord> inspections, const ShapeBasis& basis);

/// Maximum-likelihood estimate: u is profiled analytically as c g(t_n)/x_n
/// and c maximized by a bracketed 1-D search. All increments must be > 0.
MleEstimate estimate_mle(std::span<const InspectionRecord> inspections, const ShapeBasis& basis);

/// Simulates independent-increment sample paths on the grid and tabulates
/// the fraction of paths at or above each threshold, plus ensemble mean and
/// variance. Path p draws from RandomStream{seed, p}, and per-chunk partial
/// sums are reduced in a fixed order, so the result is bit-identical for any
/// worker count. n_workers = 0 picks a hardware-based default.
ExceedanceTable simulate_paths(const GammaProcessModel& model, std::span<const double> grid,
                               std::span<const double> thresholds, std::size_t n_paths,
                               std::uint64_t seed, unsigned n_workers = 0);

/// Evaluates F and p per threshold on the grid t = 0, step, ..., horizon.
PrognosisResult make_prognosis(const GammaProcessModel& model,
                               std::span<const double> thresholds, double horizon_years,
                               double grid_step_years);

/// Header `t_years,damage_mean,F_<pc>...,p_<pc>...` with thresholds rendered
/// as integer percent.
void write_prognosis_csv(std::ostream& out, const PrognosisResult& result);

std::vector<InspectionRecord> read_inspections_csv(std::istream& in);

}  // namespace bladeprog::gproc
