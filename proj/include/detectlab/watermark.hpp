#pragma once

#include <memory>
#include <string>

#include "detectlab/divergence.hpp"
#include "detectlab/markov.hpp"

namespace detectlab {

// Keyed greenlist bias. gamma is the green fraction of the vocabulary,
// delta the logit bonus green tokens receive during sampling.
struct WatermarkConfig {
    std::uint64_t key = 0;
    double gamma = 0.5;
    double delta = 0.0;
};

void validate(const WatermarkConfig& cfg);

// Deterministic keyed partition: seeds a stream with (key, prev_token),
// draws a partial Fisher-Yates shuffle of the token indices and keeps the
// first round(gamma*V) as green. Returned sorted. The same (key, prev,
// V, gamma) always produces the same set.
std::vector<TokenId> greenlist(TokenId prev_token, const WatermarkConfig& cfg,
                               const Vocabulary& vocab);

// Source that adds delta to the green tokens' logits before the base
// source's temperature softmax. The first position (no previous token) is
// left unbiased, matching the detector, which cannot score it.
class WatermarkedSource final : public Source {
public:
    WatermarkedSource(std::shared_ptr<const MarkovSource> base, WatermarkConfig cfg);

    const Vocabulary& vocab() const override { return base_->vocab(); }
    std::size_t order() const override { return base_->order(); }
    bool try_next_probs(std::span<const TokenId> window,
                        std::vector<double>& out) const override;
    std::uint64_t stream_tag() const override { return tag_; }

    const WatermarkConfig& config() const { return cfg_; }

private:
    std::shared_ptr<const MarkovSource> base_;
    WatermarkConfig cfg_;
    std::vector<char> green_;  // V*V mask, row = prev token
    double weight_;            // exp(delta / base temperature)
    std::uint64_t tag_;
};

// Requires order >= 1: the greenlist is keyed by the previous token.
WatermarkedSource apply_watermark(std::shared_ptr<const MarkovSource> base,
                                  const WatermarkConfig& cfg);
WatermarkedSource apply_watermark(const MarkovSource& base, const WatermarkConfig& cfg);

// Green-token count test. Positions 2..T are scored against the greenlist
// of their predecessor; z = (g - gamma*n) / sqrt(n*gamma*(1-gamma)).
struct WatermarkVerdict {
    std::uint64_t scored_positions = 0;
    std::uint64_t green_count = 0;
    double z_score = 0.0;
    std::string p_value_note = "one-sided upper tail";
};

WatermarkVerdict detect_watermark(const Sequence& x, const WatermarkConfig& cfg,
                                  const Vocabulary& vocab);

// Distribution shift the watermark induces: divergence between the base and
// watermarked length-T sequence distributions, enumerated when the space is
// small enough and Monte Carlo estimated otherwise.
DivergenceReport watermark_shift(const MarkovSource& m, const WatermarkConfig& cfg,
                                 std::size_t length, std::size_t n_samples,
                                 std::uint64_t seed);

}  // namespace detectlab
