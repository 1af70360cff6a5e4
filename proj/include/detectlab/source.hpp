#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "detectlab/categorical.hpp"
#include "detectlab/sequence.hpp"
#include "detectlab/vocabulary.hpp"

namespace detectlab {

// Rolling context of the last `order` extended tokens. Positions before the
// first token hold the begin-of-sequence padding index, so the distribution
// of every position, including the first, is well defined.
class ContextWindow {
public:
    ContextWindow(std::size_t order, std::size_t vocab_size)
        : buf_(order, bos_token(vocab_size)), bos_(bos_token(vocab_size)) {}

    void reset() { std::fill(buf_.begin(), buf_.end(), bos_); }

    void push(TokenId t) {
        if (buf_.empty()) return;
        for (std::size_t i = 0; i + 1 < buf_.size(); ++i) buf_[i] = buf_[i + 1];
        buf_.back() = t;
    }

    std::span<const TokenId> view() const { return buf_; }

private:
    std::vector<TokenId> buf_;
    TokenId bos_;
};

// An autoregressive generative source over a finite vocabulary. The window
// passed to the accessors has exactly order() entries over the extended
// alphabet (token ids plus the BOS padding index).
//
// Sources are immutable after construction; every accessor is const and safe
// to call concurrently.
class Source {
public:
    virtual ~Source() = default;

    virtual const Vocabulary& vocab() const = 0;
    virtual std::size_t order() const = 0;

    // Fills `out` with the next-token probabilities at `window`. Returns
    // false when the source defines no distribution there; such contexts are
    // unreachable under the source itself, so scoring treats every
    // continuation as probability zero while sampling treats it as an error.
    virtual bool try_next_probs(std::span<const TokenId> window,
                                std::vector<double>& out) const = 0;

    // Log-probability variant. The default takes logs of try_next_probs;
    // sources with cached log rows override it.
    virtual bool try_next_logprobs(std::span<const TokenId> window,
                                   std::vector<double>& out) const;

    // Stable content tag. Sampling operations fold it into their seed so a
    // source draws the same substream wherever it appears in an evaluation.
    virtual std::uint64_t stream_tag() const = 0;

    // Throwing wrappers: MissingContextError when the context has no entry.
    void next_probs(std::span<const TokenId> window, std::vector<double>& out) const;
    void next_logprobs(std::span<const TokenId> window, std::vector<double>& out) const;
};

// Next-token distribution after an observed prefix (the last order() tokens
// are used, BOS-padded when the prefix is shorter than the order).
Categorical next_distribution(const Source& m, const Sequence& prefix);

// Samples a length-T sequence autoregressively. Deterministic in (m, T, seed).
Sequence generate(const Source& m, std::size_t length, std::uint64_t seed);

// ln P(x) = sum_t ln P(x_t | x_<t). Returns -inf when any factor is zero.
double sequence_logprob(const Source& m, const Sequence& x);

}  // namespace detectlab
