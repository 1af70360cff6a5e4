#pragma once

#include <span>
#include <vector>

namespace detectlab {

// Unnormalized scores over the vocabulary. Entries must be finite.
struct Logits {
    std::vector<double> values;
};

// A probability vector over the vocabulary: entries in [0,1], summing to 1
// within 1e-9. Construct through make_categorical or softmax so the
// invariant is checked once at the boundary.
class Categorical {
public:
    explicit Categorical(std::vector<double> probs);

    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t j) const { return probs_[j]; }
    const std::vector<double>& probs() const { return probs_; }

private:
    std::vector<double> probs_;
};

// softmax(z, tau)_j = exp(z_j/tau) / sum_k exp(z_k/tau), computed with
// max-subtraction so large logits cannot overflow.
Categorical softmax(const Logits& z, double tau);

// Shannon entropy in nats, with 0 * ln 0 = 0. Always in [0, ln V].
double entropy(const Categorical& p);

namespace detail {

// Row-level softmax shared by the source machinery. Unlike the public
// operation it accepts -inf entries (log of a zero probability); at least
// one entry must be finite and none may be NaN or +inf.
void softmax_row(std::span<const double> logits, double tau, std::span<double> out);

double entropy_row(std::span<const double> probs);

}  // namespace detail
}  // namespace detectlab
