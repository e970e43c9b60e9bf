#include "bladeprog/gproc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <thread>

#include "bladeprog/csvio.hpp"
#include "bladeprog/errors.hpp"
#include "bladeprog/specfun.hpp"

namespace bladeprog::gproc {

namespace {

double interpolate(const std::vector<fatigue::TrajectoryPoint>& knots, double t) {
    if (knots.empty()) {
        throw ValidationError("shape basis has no knots");
    }
    if (t <= knots.front().t_years) return knots.front().damage;
    if (t >= knots.back().t_years) return knots.back().damage;
    const auto upper = std::upper_bound(
        knots.begin(), knots.end(), t,
        [](double value, const fatigue::TrajectoryPoint& p) { return value < p.t_years; });
    const auto lower = upper - 1;
    const double span = upper->t_years - lower->t_years;
    const double frac = (t - lower->t_years) / span;
    return lower->damage + frac * (upper->damage - lower->damage);
}

void check_model(const GammaProcessModel& model) {
    if (!(model.shape_scale > 0.0) || !(model.rate > 0.0)) {
        throw ValidationError("gamma process model: c and u must be > 0");
    }
}

struct IncrementData {
    std::vector<double> delta;  // damage increments, anchored at X(0) = 0
    std::vector<double> w;      // basis increments
    double x_total = 0.0;
    double g_total = 0.0;
};

IncrementData make_increments(std::span<const InspectionRecord> inspections,
                              const ShapeBasis& basis) {
    if (inspections.size() < 2) {
        throw ValidationError("estimation needs at least 2 inspections, got " +
                              std::to_string(inspections.size()));
    }
    IncrementData data;
    double prev_t = 0.0;
    double prev_x = 0.0;
    double prev_g = 0.0;
    for (const InspectionRecord& record : inspections) {
        if (!(record.t_years > prev_t)) {
            throw ValidationError("inspection times must be strictly increasing and > 0");
        }
        // The estimators fit a generic monotone gamma process; the damage
        // range [0, 1) is enforced where pipeline data enters (CSV ingestion).
        if (!std::isfinite(record.damage) || record.damage < prev_x) {
            throw ValidationError("observed values must be finite and non-decreasing");
        }
        const double g = basis.value(record.t_years);
        if (!(g > prev_g)) {
            throw ValidationError("shape basis must be strictly increasing across inspections");
        }
        data.delta.push_back(record.damage - prev_x);
        data.w.push_back(g - prev_g);
        prev_t = record.t_years;
        prev_x = record.damage;
        prev_g = g;
    }
    data.x_total = prev_x;
    data.g_total = prev_g;
    return data;
}

// Full gamma-increment log-likelihood at (c, u).
double increment_log_likelihood(const IncrementData& data, double c, double u) {
    double ll = c * data.g_total * std::log(u) - u * data.x_total;
    for (std::size_t i = 0; i < data.delta.size(); ++i) {
        const double shape = c * data.w[i];
        ll += (shape - 1.0) * std::log(data.delta[i]) - specfun::ln_gamma(shape);
    }
    return ll;
}

}  // namespace

ShapeBasis ShapeBasis::from_trajectory(const fatigue::DamageTrajectory& trajectory,
                                       double t_ref) {
    if (trajectory.grid.empty()) {
        throw ValidationError("shape basis: trajectory is empty");
    }
    if (!(t_ref > 0.0)) {
        throw ValidationError("shape basis: t_ref must be > 0");
    }
    const double d_ref = interpolate(trajectory.grid, t_ref);
    if (!(d_ref > 0.0)) {
        throw ValidationError("shape basis: trajectory is degenerate at the reference time");
    }
    ShapeBasis basis;
    basis.knots_.reserve(trajectory.grid.size());
    for (const fatigue::TrajectoryPoint& point : trajectory.grid) {
        basis.knots_.push_back({point.t_years, point.damage / d_ref});
    }
    return basis;
}

double ShapeBasis::value(double t) const {
    if (!(t >= 0.0)) {
        throw ValidationError("shape basis: time must be >= 0");
    }
    if (knots_.empty()) {
        throw ValidationError("shape basis is empty");
    }
    if (knots_.front().t_years > 0.0 && t < knots_.front().t_years) {
        // Basis is anchored at g(0) = 0 even when the first knot sits later.
        const double frac = t / knots_.front().t_years;
        return frac * knots_.front().damage;
    }
    return interpolate(knots_, t);
}

double ShapeBasis::end_time() const {
    if (knots_.empty()) {
        throw ValidationError("shape basis is empty");
    }
    return knots_.back().t_years;
}

GammaProcessModel calibrate_shape(const fatigue::DamageTrajectory& trajectory, double u,
                                  double t_ref) {
    if (!(u > 0.0) || !std::isfinite(u)) {
        throw ValidationError("calibrate_shape: rate u must be > 0");
    }
    const double d_ref = interpolate(trajectory.grid, t_ref);
    if (!(d_ref > 0.0)) {
        throw ValidationError("calibrate_shape: trajectory value at t_ref must be > 0");
    }
    GammaProcessModel model;
    model.basis = ShapeBasis::from_trajectory(trajectory, t_ref);
    model.rate = u;
    model.shape_scale = u * d_ref;
    model.t_ref = t_ref;
    return model;
}

GammaProcessModel calibrate_from_cov(const fatigue::DamageTrajectory& trajectory, double cov_ref,
                                     double t_ref) {
    if (!(cov_ref > 0.0) || !std::isfinite(cov_ref)) {
        throw ValidationError("calibrate_from_cov: cov_ref must be > 0");
    }
    const double d_ref = interpolate(trajectory.grid, t_ref);
    if (!(d_ref > 0.0)) {
        throw ValidationError("calibrate_from_cov: trajectory value at t_ref must be > 0");
    }
    return calibrate_shape(trajectory, 1.0 / (cov_ref * cov_ref * d_ref), t_ref);
}

double failure_probability(const GammaProcessModel& model, double d_cr, double t) {
    check_model(model);
    if (!(t >= 0.0)) {
        throw ValidationError("failure_probability: time must be >= 0");
    }
    if (!std::isfinite(d_cr) || d_cr < 0.0 || d_cr > 1.0) {
        throw ValidationError("failure_probability: threshold must lie in (0, 1]");
    }
    const double v = model.shape(t);
    if (v == 0.0) return 0.0;
    const double x = model.rate * d_cr;
    if (x == 0.0) return 1.0;
    return specfun::reg_gamma_q(v, x);
}

std::vector<double> interval_failure_probability(const GammaProcessModel& model, double d_cr,
                                                 std::span<const double> grid) {
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw ValidationError("interval_failure_probability: grid must be strictly increasing");
        }
    }
    std::vector<double> intervals;
    intervals.reserve(grid.size());
    double prev = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double current = failure_probability(model, d_cr, grid[i]);
        intervals.push_back(i == 0 ? current : current - prev);
        prev = current;
    }
    return intervals;
}

double damage_pdf(const GammaProcessModel& model, double t, double d) {
    check_model(model);
    if (!(d > 0.0)) {
        throw ValidationError("damage_pdf: damage level must be > 0");
    }
    const double v = model.shape(t);
    if (!(v > 0.0)) {
        throw ValidationError("damage_pdf: shape v(t) must be > 0");
    }
    const double u = model.rate;
    const double log_pdf =
        v * std::log(u) + (v - 1.0) * std::log(d) - u * d - specfun::ln_gamma(v);
    return std::exp(log_pdf);
}

MomEstimate estimate_mom(std::span<const InspectionRecord> inspections, const ShapeBasis& basis) {
    const IncrementData data = make_increments(inspections, basis);

    MomEstimate estimate;
    if (!(data.x_total > 0.0)) {
        estimate.status = RateStatus::degenerate;
        return estimate;
    }
    estimate.mean_ratio = data.x_total / data.g_total;

    if (inspections.size() == 2) {
        estimate.status = RateStatus::unidentifiable;
        return estimate;
    }

    double ss = 0.0;
    double w_sq = 0.0;
    for (std::size_t i = 0; i < data.delta.size(); ++i) {
        const double residual = data.delta[i] - estimate.mean_ratio * data.w[i];
        ss += residual * residual;
        w_sq += data.w[i] * data.w[i];
    }
    if (ss <= 1e-20 * data.x_total * data.x_total) {
        estimate.status = RateStatus::degenerate;
        return estimate;
    }
    const double dof_factor = 1.0 - w_sq / (data.g_total * data.g_total);
    estimate.u = estimate.mean_ratio * data.g_total * dof_factor / ss;
    estimate.c = estimate.u * estimate.mean_ratio;
    return estimate;
}

MleEstimate estimate_mle(std::span<const InspectionRecord> inspections, const ShapeBasis& basis) {
    const IncrementData data = make_increments(inspections, basis);
    if (data.delta.size() < 2) {
        throw ValidationError("estimate_mle: a single increment cannot identify c");
    }
    for (const double delta : data.delta) {
        if (!(delta > 0.0)) {
            throw ValidationError(
                "estimate_mle: zero damage increment; the gamma likelihood is unbounded, "
                "use estimate_mom or merge inspections");
        }
    }

    // Profiled likelihood: u(c) = c G / x_n, so
    // l(c) = c G (ln(c G / x_n) - 1) + sum[(c w_i - 1) ln d_i - ln Gamma(c w_i)].
    const double G = data.g_total;
    const double x_total = data.x_total;
    const auto profiled = [&](double c) {
        double ll = c * G * (std::log(c * G / x_total) - 1.0);
        for (std::size_t i = 0; i < data.delta.size(); ++i) {
            const double shape = c * data.w[i];
            ll += (shape - 1.0) * std::log(data.delta[i]) - specfun::ln_gamma(shape);
        }
        return ll;
    };

    // Coarse log-grid scan, then golden-section refinement of the bracket.
    constexpr double kLogLo = -6.0 * 2.302585092994046;  // ln 1e-6
    constexpr double kLogHi = 6.0 * 2.302585092994046;   // ln 1e6
    constexpr int kGridPoints = 97;
    int best = -1;
    double best_value = -std::numeric_limits<double>::infinity();
    const double step = (kLogHi - kLogLo) / (kGridPoints - 1);
    for (int i = 0; i < kGridPoints; ++i) {
        const double value = profiled(std::exp(kLogLo + i * step));
        if (value > best_value) {
            best_value = value;
            best = i;
        }
    }
    if (best == 0 || best == kGridPoints - 1) {
        throw ConvergenceError("estimate_mle: likelihood maximum at parameter search bound",
                               kGridPoints);
    }

    double lo = kLogLo + (best - 1) * step;
    double hi = kLogLo + (best + 1) * step;
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = profiled(std::exp(x1));
    double f2 = profiled(std::exp(x2));
    long iterations = 0;
    while (hi - lo > 1e-9) {
        if (++iterations > 200) {
            throw ConvergenceError("estimate_mle: golden-section search stalled", iterations);
        }
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = profiled(std::exp(x2));
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = profiled(std::exp(x1));
        }
    }

    MleEstimate estimate;
    estimate.c = std::exp(0.5 * (lo + hi));
    estimate.u = estimate.c * G / x_total;
    estimate.log_likelihood = increment_log_likelihood(data, estimate.c, estimate.u);
    return estimate;
}

ExceedanceTable simulate_paths(const GammaProcessModel& model, std::span<const double> grid,
                               std::span<const double> thresholds, std::size_t n_paths,
                               std::uint64_t seed, unsigned n_workers) {
    check_model(model);
    if (grid.empty()) {
        throw ValidationError("simulate_paths: grid is empty");
    }
    if (!(grid.front() >= 0.0)) {
        throw ValidationError("simulate_paths: grid times must be >= 0");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw ValidationError("simulate_paths: grid must be strictly increasing");
        }
    }
    if (n_paths < 1) {
        throw ValidationError("simulate_paths: n_paths must be >= 1");
    }
    for (const double threshold : thresholds) {
        if (!(threshold > 0.0)) {
            throw ValidationError("simulate_paths: thresholds must be > 0");
        }
    }

    const std::size_t nt = grid.size();
    const std::size_t nthr = thresholds.size();

    std::vector<double> shape_increment(nt);
    double prev_shape = 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
        const double v = model.shape(grid[i]);
        if (v < prev_shape) {
            throw ValidationError("simulate_paths: shape function must be non-decreasing");
        }
        shape_increment[i] = v - prev_shape;
        prev_shape = v;
    }

    // Paths are processed in fixed chunks whose partial sums are reduced in
    // chunk order, so results do not depend on the worker count.
    constexpr std::size_t kChunk = 1024;
    const std::size_t n_chunks = (n_paths + kChunk - 1) / kChunk;

    struct ChunkAccumulator {
        std::vector<std::uint64_t> exceed_count;
        std::vector<double> sum;
        std::vector<double> sum_sq;
    };
    std::vector<ChunkAccumulator> chunks(n_chunks);

    const auto run_chunk = [&](std::size_t chunk_index) {
        ChunkAccumulator acc;
        acc.exceed_count.assign(nt * nthr, 0);
        acc.sum.assign(nt, 0.0);
        acc.sum_sq.assign(nt, 0.0);
        const std::size_t begin = chunk_index * kChunk;
        const std::size_t end = std::min(begin + kChunk, n_paths);
        for (std::size_t path = begin; path < end; ++path) {
            specfun::SplitMix64 rng(specfun::RandomStream{seed, path});
            double x = 0.0;
            for (std::size_t i = 0; i < nt; ++i) {
                if (shape_increment[i] > 0.0) {
                    x += specfun::gamma_variate(shape_increment[i], model.rate, rng);
                }
                acc.sum[i] += x;
                acc.sum_sq[i] += x * x;
                for (std::size_t k = 0; k < nthr; ++k) {
                    acc.exceed_count[i * nthr + k] += (x >= thresholds[k]) ? 1 : 0;
                }
            }
        }
        chunks[chunk_index] = std::move(acc);
    };

    unsigned workers = n_workers;
    if (workers == 0) {
        workers = std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_chunks));

    if (workers <= 1) {
        for (std::size_t i = 0; i < n_chunks; ++i) run_chunk(i);
    } else {
        std::atomic<std::size_t> next_chunk{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&]() {
                for (;;) {
                    const std::size_t chunk = next_chunk.fetch_add(1);
                    if (chunk >= n_chunks) return;
                    run_chunk(chunk);
                }
            });
        }
        for (std::thread& thread : pool) thread.join();
    }

    ExceedanceTable table;
    table.times.assign(grid.begin(), grid.end());
    table.thresholds.assign(thresholds.begin(), thresholds.end());
    table.n_paths = n_paths;
    table.exceedance.assign(nt, std::vector<double>(nthr, 0.0));
    table.mean.assign(nt, 0.0);
    table.variance.assign(nt, 0.0);

    std::vector<std::uint64_t> counts(nt * nthr, 0);
    std::vector<double> sums(nt, 0.0);
    std::vector<double> sums_sq(nt, 0.0);
    for (const ChunkAccumulator& acc : chunks) {
        for (std::size_t j = 0; j < nt * nthr; ++j) counts[j] += acc.exceed_count[j];
        for (std::size_t i = 0; i < nt; ++i) {
            sums[i] += acc.sum[i];
            sums_sq[i] += acc.sum_sq[i];
        }
    }

    const double n = static_cast<double>(n_paths);
    for (std::size_t i = 0; i < nt; ++i) {
        table.mean[i] = sums[i] / n;
        if (n_paths > 1) {
            table.variance[i] =
                std::max(0.0, (sums_sq[i] - n * table.mean[i] * table.mean[i]) / (n - 1.0));
        }
        for (std::size_t k = 0; k < nthr; ++k) {
            table.exceedance[i][k] = static_cast<double>(counts[i * nthr + k]) / n;
        }
    }
    return table;
}

PrognosisResult make_prognosis(const GammaProcessModel& model,
                               std::span<const double> thresholds, double horizon_years,
                               double grid_step_years) {
    check_model(model);
    if (!(horizon_years > 0.0) || !(grid_step_years > 0.0)) {
        throw ValidationError("prognosis: horizon and grid step must be > 0");
    }
    PrognosisResult result;
    result.thresholds.assign(thresholds.begin(), thresholds.end());

    const auto n_steps =
        static_cast<std::size_t>(std::floor(horizon_years / grid_step_years + 1e-9));
    std::vector<double> grid;
    grid.reserve(n_steps + 1);
    for (std::size_t i = 0; i <= n_steps; ++i) {
        grid.push_back(static_cast<double>(i) * grid_step_years);
    }

    std::vector<std::vector<double>> intervals;
    intervals.reserve(thresholds.size());
    for (const double threshold : thresholds) {
        intervals.push_back(interval_failure_probability(model, threshold, grid));
    }

    result.rows.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        PrognosisResult::Row row;
        row.t = grid[i];
        row.damage_mean = model.shape(grid[i]) / model.rate;
        for (std::size_t k = 0; k < thresholds.size(); ++k) {
            row.failure_prob.push_back(failure_probability(model, thresholds[k], grid[i]));
            row.interval_prob.push_back(intervals[k][i]);
        }
        result.rows.push_back(std::move(row));
    }
    return result;
}

void write_prognosis_csv(std::ostream& out, const PrognosisResult& result) {
    out << "t_years,damage_mean";
    for (const double threshold : result.thresholds) {
        out << ",F_" << static_cast<int>(std::lround(threshold * 100.0));
    }
    for (const double threshold : result.thresholds) {
        out << ",p_" << static_cast<int>(std::lround(threshold * 100.0));
    }
    out << '\n';
    for (const PrognosisResult::Row& row : result.rows) {
        out << csvio::format_number(row.t) << ',' << csvio::format_number(row.damage_mean);
        for (const double f : row.failure_prob) out << ',' << csvio::format_number(f);
        for (const double p : row.interval_prob) out << ',' << csvio::format_number(p);
        out << '\n';
    }
}

std::vector<InspectionRecord> read_inspections_csv(std::istream& in) {
    csvio::LineReader reader(in);
    csvio::expect_header(reader, "t_years,damage");

    std::vector<InspectionRecord> records;
    std::string line;
    while (reader.next(line)) {
        if (line.empty()) continue;
        const auto fields = csvio::split_fields(line);
        if (fields.size() != 2) {
            throw ValidationError("line " + std::to_string(reader.line_number()) +
                                  ": expected 2 fields, got " + std::to_string(fields.size()));
        }
        InspectionRecord record;
        record.t_years = csvio::parse_double(fields[0], reader.line_number(), "t_years");
        record.damage = csvio::parse_double(fields[1], reader.line_number(), "damage");
        if (!std::isfinite(record.damage) || record.damage < 0.0 || record.damage >= 1.0) {
            throw ValidationError("line " + std::to_string(reader.line_number()) +
                                  ": observed damage must lie in [0, 1)");
        }
        records.push_back(record);
    }
    if (records.empty()) {
        throw ValidationError("inspection record contains no rows");
    }
    return records;
}

}  // namespace bladeprog::gproc
