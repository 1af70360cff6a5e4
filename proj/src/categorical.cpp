#include "detectlab/categorical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace detectlab {

Categorical::Categorical(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) {
        throw std::invalid_argument("categorical must be non-empty");
    }
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0) || p > 1.0 + 1e-12) {
            throw std::invalid_argument("categorical entry outside [0,1]");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("categorical entries do not sum to 1");
    }
}

Categorical softmax(const Logits& z, double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw std::domain_error("softmax temperature must be positive and finite");
    }
    if (z.values.empty()) {
        throw std::invalid_argument("softmax over empty logits");
    }
    for (double v : z.values) {
        if (!std::isfinite(v)) {
            throw std::domain_error("softmax logit must be finite");
        }
    }
    std::vector<double> out(z.values.size());
    detail::softmax_row(z.values, tau, out);
    return Categorical(std::move(out));
}

double entropy(const Categorical& p) {
    return detail::entropy_row(p.probs());
}

namespace detail {

void softmax_row(std::span<const double> logits, double tau, std::span<double> out) {
    const double zmax = *std::max_element(logits.begin(), logits.end());
    double denom = 0.0;
    for (std::size_t j = 0; j < logits.size(); ++j) {
        const double e = std::exp((logits[j] - zmax) / tau);
        out[j] = e;
        denom += e;
    }
    for (std::size_t j = 0; j < logits.size(); ++j) {
        out[j] /= denom;
    }
}

double entropy_row(std::span<const double> probs) {
    double h = 0.0;
    for (double p : probs) {
        if (p > 0.0) h -= p * std::log(p);
    }
    // tiny negative results from rounding collapse to the exact bound
    return h < 0.0 ? 0.0 : h;
}

}  // namespace detail
}  // namespace detectlab
