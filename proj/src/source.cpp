#include "detectlab/source.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "detectlab/errors.hpp"
#include "detectlab/rng.hpp"

namespace detectlab {

namespace {

void check_tokens(const Source& m, const Sequence& x) {
    for (TokenId t : x.tokens) {
        if (!m.vocab().valid_token(t)) {
            throw std::invalid_argument("sequence token out of vocabulary range");
        }
    }
}

}  // namespace

bool Source::try_next_logprobs(std::span<const TokenId> window,
                               std::vector<double>& out) const {
    if (!try_next_probs(window, out)) return false;
    for (double& p : out) {
        p = p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
    }
    return true;
}

void Source::next_probs(std::span<const TokenId> window, std::vector<double>& out) const {
    if (!try_next_probs(window, out)) {
        throw MissingContextError("no transition entry for context");
    }
}

void Source::next_logprobs(std::span<const TokenId> window, std::vector<double>& out) const {
    if (!try_next_logprobs(window, out)) {
        throw MissingContextError("no transition entry for context");
    }
}

Categorical next_distribution(const Source& m, const Sequence& prefix) {
    check_tokens(m, prefix);
    ContextWindow w(m.order(), m.vocab().size());
    const std::size_t k = m.order();
    const std::size_t start = prefix.length() > k ? prefix.length() - k : 0;
    for (std::size_t i = start; i < prefix.length(); ++i) {
        w.push(prefix.tokens[i]);
    }
    std::vector<double> probs;
    m.next_probs(w.view(), probs);
    return Categorical(std::move(probs));
}

Sequence generate(const Source& m, std::size_t length, std::uint64_t seed) {
    Rng rng(seed);
    ContextWindow w(m.order(), m.vocab().size());
    Sequence x;
    x.tokens.reserve(length);
    std::vector<double> probs;
    for (std::size_t t = 0; t < length; ++t) {
        m.next_probs(w.view(), probs);
        const TokenId tok = static_cast<TokenId>(rng.next_index(probs));
        x.tokens.push_back(tok);
        w.push(tok);
    }
    return x;
}

double sequence_logprob(const Source& m, const Sequence& x) {
    check_tokens(m, x);
    ContextWindow w(m.order(), m.vocab().size());
    std::vector<double> logprobs;
    double total = 0.0;
    for (TokenId tok : x.tokens) {
        if (!m.try_next_logprobs(w.view(), logprobs)) {
            return -std::numeric_limits<double>::infinity();
        }
        total += logprobs[tok];
        w.push(tok);
    }
    return total;
}

}  // namespace detectlab
