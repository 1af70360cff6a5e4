#include "detectlab/uncertainty.hpp"

#include <limits>
#include <stdexcept>

#include "detectlab/divergence.hpp"
#include "detectlab/rng.hpp"

namespace detectlab {

double delta_s(const MarkovSource& m, double tau, std::size_t length,
               std::size_t n_samples, std::uint64_t seed) {
    if (length == 0 || n_samples == 0) {
        throw std::invalid_argument("delta_s needs length > 0 and n_samples > 0");
    }
    const MarkovSource m_tau = with_temperature(m, tau);
    const std::size_t v = m_tau.vocab().size();

    double total = 0.0;
    std::vector<double> probs;
    for (std::size_t i = 0; i < n_samples; ++i) {
        Rng rng(derive_stream(seed, i));
        ContextWindow w(m_tau.order(), v);
        for (std::size_t t = 0; t < length; ++t) {
            m_tau.next_probs(w.view(), probs);
            total += detail::entropy_row(probs);
            const TokenId tok = static_cast<TokenId>(rng.next_index(probs));
            w.push(tok);
        }
    }
    return total / static_cast<double>(n_samples * length);
}

double delta_c(const MarkovSource& ref, const MarkovSource& m, double tau,
               std::size_t length, std::size_t n_samples, std::uint64_t seed) {
    if (length == 0) {
        throw std::invalid_argument("delta_c needs length > 0");
    }
    const MarkovSource m_tau = with_temperature(m, tau);
    const DivergenceReport rep =
        seq_divergence_mc(ref, m_tau, length, n_samples, seed);
    return rep.kl / static_cast<double>(length);
}

UncertaintyCurve sweep(const MarkovSource& ref, const MarkovSource& m,
                       const std::vector<double>& tau_grid, std::size_t length,
                       std::size_t n_samples, std::uint64_t seed) {
    if (tau_grid.empty()) {
        throw std::invalid_argument("sweep needs a non-empty temperature grid");
    }
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
        if (!(tau_grid[i] > 0.0)) {
            throw std::invalid_argument("sweep temperatures must be positive");
        }
        if (i > 0 && !(tau_grid[i] > tau_grid[i - 1])) {
            throw std::invalid_argument("sweep grid must be strictly increasing");
        }
    }

    UncertaintyCurve curve;
    curve.points.reserve(tau_grid.size());
    curve.k_hat = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
        const std::uint64_t point_seed = derive_stream(seed, i);
        UncertaintyPoint pt;
        pt.tau = tau_grid[i];
        pt.delta_s = delta_s(m, pt.tau, length, n_samples, derive_stream(point_seed, 0));
        pt.delta_c = delta_c(ref, m, pt.tau, length, n_samples, derive_stream(point_seed, 1));
        pt.product = pt.delta_s * pt.delta_c;
        curve.k_hat = std::min(curve.k_hat, pt.product);
        curve.points.push_back(pt);
    }
    return curve;
}

}  // namespace detectlab
