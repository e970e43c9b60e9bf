#pragma once

#include <cstdint>

namespace bladeprog::specfun {

/// Immutable descriptor of an independent random substream. Two streams with
/// equal (seed, stream_index) produce identical sequences; distinct
/// stream_index values give statistically independent sequences, so per-path
/// streams can be consumed in any scheduling order.
struct RandomStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_index = 0;
};

/// Counter-based generator (splitmix64 output function over a stream-derived
/// key). Cheap to construct, no shared state, safe to hold per worker.
class SplitMix64 {
public:
    explicit SplitMix64(RandomStream stream);

    std::uint64_t next_u64();

    /// Uniform in [0, 1) with 53-bit resolution.
    double next_unit();

    /// Standard normal via Box-Muller; consumes exactly two uniforms.
    double next_normal();

private:
    std::uint64_t state_;
};

/// ln Gamma(v) for v > 0 (Lanczos approximation).
double ln_gamma(double v);

/// Regularized lower incomplete gamma P(v, x) = gamma(v, x) / Gamma(v).
/// Series evaluation for x < v + 1, continued fraction otherwise; the
/// complement is formed from whichever route is well conditioned, so
/// P + Q = 1 holds exactly.
double reg_gamma_p(double v, double x);

/// Regularized upper incomplete gamma Q(v, x) = Gamma(v, x) / Gamma(v).
double reg_gamma_q(double v, double x);

/// One draw from Gamma(shape, rate), mean shape/rate, advancing `rng`.
/// Marsaglia-Tsang squeeze for shape >= 1; shape < 1 is boosted through
/// Gamma(shape + 1) times U^(1/shape).
double gamma_variate(double shape, double rate, SplitMix64& rng);

/// One draw from Gamma(shape, rate) fully determined by the stream
/// descriptor: the same (seed, stream_index) always yields the same value.
double gamma_sample(double shape, double rate, RandomStream stream);

}  // namespace bladeprog::specfun
