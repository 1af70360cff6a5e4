#pragma once

#include <vector>

#include "detectlab/markov.hpp"

namespace detectlab {

// One temperature point of the style/content trade-off measurement.
//
// delta_s and delta_c are declared proxies, not intrinsic quantities:
// delta_s is the expected per-token next-distribution entropy under
// generation at temperature tau (style variability), delta_c the per-token
// KL from the reference source to the tau-scaled model (content
// infidelity). Both in nats.
struct UncertaintyPoint {
    double tau = 0.0;
    double delta_s = 0.0;
    double delta_c = 0.0;
    double product = 0.0;
};

// Temperature sweep ordered by tau; k_hat is the minimum product over the
// grid, an empirical floor for this configuration rather than a constant.
struct UncertaintyCurve {
    std::vector<UncertaintyPoint> points;
    double k_hat = 0.0;
};

// Monte Carlo mean of entropy(next distribution) over the positions of n
// generated length-T sequences at temperature tau. Deterministic in seed.
double delta_s(const MarkovSource& m, double tau, std::size_t length,
               std::size_t n_samples, std::uint64_t seed);

// KL(ref || m at temperature tau) / T in per-token nats, estimated with
// seq_divergence_mc. +inf is in-band when ref escapes m's support.
double delta_c(const MarkovSource& ref, const MarkovSource& m, double tau,
               std::size_t length, std::size_t n_samples, std::uint64_t seed);

// One point per grid value; the grid must be strictly increasing and
// positive. Point i derives its substreams from (seed, i), so the curve is
// reproducible regardless of evaluation order.
UncertaintyCurve sweep(const MarkovSource& ref, const MarkovSource& m,
                       const std::vector<double>& tau_grid, std::size_t length,
                       std::size_t n_samples, std::uint64_t seed);

}  // namespace detectlab
