#pragma once

#include <cstdint>
#include <string_view>

#include "detectlab/categorical.hpp"
#include "detectlab/source.hpp"

namespace detectlab {

enum class DivergenceMethod { exact, enumerated, monte_carlo };

std::string_view to_string(DivergenceMethod m);

// TV and KL between a distribution pair, together with the Pinsker bound
// sqrt(kl/2) and the Bayes error 0.5*(1-tv). For Monte Carlo reports the
// tv/kl fields are estimates with standard errors; the raw tv estimate may
// fall outside [0,1] and bayes_error is computed from it clamped. kl is
// clamped at 0 and +inf is an in-band value (q gave zero probability to a
// p-positive outcome); q_zero_samples flags how many samples hit that.
struct DivergenceReport {
    double tv = 0.0;
    double kl = 0.0;
    double pinsker_bound = 0.0;
    double bayes_error = 0.5;
    DivergenceMethod method = DivergenceMethod::exact;
    std::uint64_t n_samples = 0;
    double stderr_tv = 0.0;
    double stderr_kl = 0.0;
    std::uint64_t q_zero_samples = 0;
};

// Exact sequence spaces larger than this are refused; use Monte Carlo.
inline constexpr std::uint64_t kEnumerationCap = 1'000'000;

// 0.5 * sum_j |p_j - q_j|.
double tv_exact(const Categorical& p, const Categorical& q);

// sum_{j: p_j > 0} p_j ln(p_j / q_j), in nats; +inf when q misses p's support.
double kl_exact(const Categorical& p, const Categorical& q);

// sqrt(kl / 2). The bound is vacuous above 1 but still reported.
double pinsker_bound(double kl);

// 0.5 * (1 - tv): the minimum misclassification error under equal priors.
double bayes_error(double tv);

DivergenceReport divergence_exact(const Categorical& p, const Categorical& q);

// Exact TV/KL between the length-T sequence distributions of two sources,
// by summing over all V^T sequences. Throws EnumerationCapError when
// V^T > kEnumerationCap.
DivergenceReport seq_divergence_enumerated(const Source& p, const Source& q,
                                           std::size_t length);

// Monte Carlo estimates from n >= 100 samples x ~ p:
//   KL-hat = mean[ln p(x) - ln q(x)]      (clamped at 0)
//   TV-hat = mean[0.5 * |1 - q(x)/p(x)|]
// with standard errors; deterministic given the seed (sample i draws the
// substream derive_stream(seed, i)).
DivergenceReport seq_divergence_mc(const Source& p, const Source& q,
                                   std::size_t length, std::size_t n_samples,
                                   std::uint64_t seed);

}  // namespace detectlab
