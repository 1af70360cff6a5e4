#pragma once

#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "detectlab/source.hpp"

namespace detectlab {

// Order-k Markov source: a transition table mapping each length-k context
// window to a logit row, plus a sampling temperature. Probability rows are
// the temperature softmax of the logits; they are cached at construction
// together with their logs, so lookups on hot paths copy precomputed rows.
//
// Logit rows may contain -inf entries (zero-probability continuations, as
// produced by unsmoothed fitting); NaN and +inf are rejected, and each row
// needs at least one finite entry.
class MarkovSource final : public Source {
public:
    struct Row {
        std::vector<TokenId> context;  // length k over tokens + BOS
        std::vector<double> logits;    // length V
    };

    MarkovSource(Vocabulary vocab, std::size_t order, double temperature,
                 std::vector<Row> rows,
                 std::optional<std::vector<double>> default_logits = std::nullopt);

    const Vocabulary& vocab() const override { return vocab_; }
    std::size_t order() const override { return order_; }
    double temperature() const { return temperature_; }

    bool try_next_probs(std::span<const TokenId> window,
                        std::vector<double>& out) const override;
    bool try_next_logprobs(std::span<const TokenId> window,
                           std::vector<double>& out) const override;
    std::uint64_t stream_tag() const override { return tag_; }

    std::size_t row_count() const { return ctx_codes_.size(); }
    const std::optional<std::vector<double>>& default_logits() const {
        return default_logits_;
    }

    // Iterates rows in deterministic (encoded-context) order:
    // fn(context, logits).
    template <typename Fn>
    void for_each_row(Fn&& fn) const {
        const std::size_t v = vocab_.size();
        for (std::size_t i = 0; i < ctx_codes_.size(); ++i) {
            fn(decode_context(ctx_codes_[i]),
               std::span<const double>(logits_flat_.data() + i * v, v));
        }
    }

    std::vector<TokenId> decode_context(std::uint64_t code) const;

private:
    friend MarkovSource with_temperature(const MarkovSource& m, double tau);

    std::uint64_t encode(std::span<const TokenId> window) const;
    const double* row_ptr(const std::vector<double>& flat, std::uint64_t code) const;
    void build_caches();

    Vocabulary vocab_;
    std::size_t order_;
    double temperature_;
    std::vector<std::uint64_t> ctx_codes_;        // sorted
    std::vector<double> logits_flat_;             // row-major, row i = ctx_codes_[i]
    std::vector<double> probs_flat_;
    std::vector<double> logprobs_flat_;
    std::optional<std::vector<double>> default_logits_;
    std::vector<double> default_probs_;
    std::vector<double> default_logprobs_;
    std::vector<std::int32_t> dense_;             // code -> row, small context spaces
    std::unordered_map<std::uint64_t, std::uint32_t> index_;
    std::uint64_t tag_ = 0;
};

// Same transition logits at a different sampling temperature.
MarkovSource with_temperature(const MarkovSource& m, double tau);

// Maximum-likelihood fit with additive (pseudo-count) smoothing.
// Transition logits are ln((count + alpha) / (context_total + alpha*V)).
// With alpha > 0, contexts never seen in the corpus fall back to a uniform
// default row, so the fitted source assigns positive probability to every
// sequence. With alpha = 0 the fit may contain zero-probability
// continuations or miss contexts entirely; the flag reports that.
struct FitResult {
    MarkovSource source;
    bool zero_probability_flagged;
};

FitResult fit_mle(const Corpus& corpus, std::size_t order, double alpha);

// Per-context convex combination of two sources' next-token distributions:
// (1-lambda)*base + lambda*target, mixing probabilities rather than logits.
// lambda = 1 reproduces the target's rows exactly.
std::shared_ptr<const Source> mixture(std::shared_ptr<const Source> base,
                                      std::shared_ptr<const Source> target,
                                      double lambda);

}  // namespace detectlab
