#include "detectlab/watermark.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <stdexcept>

#include "detectlab/rng.hpp"

namespace detectlab {

namespace {

std::uint64_t green_count_for(double gamma, std::size_t v) {
    return static_cast<std::uint64_t>(
        std::llround(gamma * static_cast<double>(v)));
}

}  // namespace

void validate(const WatermarkConfig& cfg) {
    if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0)) {
        throw std::invalid_argument("watermark gamma must lie in (0,1)");
    }
    if (!(cfg.delta >= 0.0) || !std::isfinite(cfg.delta)) {
        throw std::invalid_argument("watermark delta must be >= 0 and finite");
    }
}

std::vector<TokenId> greenlist(TokenId prev_token, const WatermarkConfig& cfg,
                               const Vocabulary& vocab) {
    validate(cfg);
    if (!vocab.valid_token(prev_token)) {
        throw std::invalid_argument("greenlist: previous token out of range");
    }
    const std::size_t v = vocab.size();
    const std::uint64_t g = green_count_for(cfg.gamma, v);

    std::vector<TokenId> perm(v);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(derive_stream(cfg.key, prev_token));
    // partial Fisher-Yates: only the first g slots are needed
    for (std::uint64_t i = 0; i < g; ++i) {
        const std::uint64_t j = i + rng.next_below(v - i);
        std::swap(perm[i], perm[j]);
    }
    perm.resize(g);
    std::sort(perm.begin(), perm.end());
    return perm;
}

WatermarkedSource::WatermarkedSource(std::shared_ptr<const MarkovSource> base,
                                     WatermarkConfig cfg)
    : base_(std::move(base)), cfg_(cfg) {
    if (!base_) {
        throw std::invalid_argument("apply_watermark: base source is null");
    }
    validate(cfg_);
    if (base_->order() < 1) {
        throw std::invalid_argument(
            "apply_watermark: unsupported order 0 (needs a previous token)");
    }
    const std::size_t v = base_->vocab().size();
    weight_ = std::exp(cfg_.delta / base_->temperature());
    green_.assign(v * v, 0);
    for (TokenId prev = 0; prev < v; ++prev) {
        for (TokenId t : greenlist(prev, cfg_, base_->vocab())) {
            green_[static_cast<std::size_t>(prev) * v + t] = 1;
        }
    }

    std::uint64_t h = base_->stream_tag() ^ 0x77617465726d6172ull;
    h ^= cfg_.key + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(double));
    std::memcpy(&bits, &cfg_.gamma, sizeof(bits));
    h ^= bits + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    std::memcpy(&bits, &cfg_.delta, sizeof(bits));
    h ^= bits + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    tag_ = h;
}

bool WatermarkedSource::try_next_probs(std::span<const TokenId> window,
                                       std::vector<double>& out) const {
    if (!base_->try_next_probs(window, out)) return false;

    const std::size_t v = out.size();
    const TokenId prev = window.back();
    // unbiased cases: no bonus, no previous token yet, or a degenerate
    // green fraction (a uniform logit shift cancels in the softmax)
    if (cfg_.delta == 0.0 || prev == bos_token(v)) return true;
    const std::uint64_t g = green_count_for(cfg_.gamma, v);
    if (g == 0 || g == v) return true;

    const char* mask = green_.data() + static_cast<std::size_t>(prev) * v;
    double sum = 0.0;
    for (std::size_t j = 0; j < v; ++j) {
        if (mask[j]) out[j] *= weight_;
        sum += out[j];
    }
    for (std::size_t j = 0; j < v; ++j) out[j] /= sum;
    return true;
}

WatermarkedSource apply_watermark(std::shared_ptr<const MarkovSource> base,
                                  const WatermarkConfig& cfg) {
    return WatermarkedSource(std::move(base), cfg);
}

WatermarkedSource apply_watermark(const MarkovSource& base, const WatermarkConfig& cfg) {
    return WatermarkedSource(std::make_shared<MarkovSource>(base), cfg);
}

WatermarkVerdict detect_watermark(const Sequence& x, const WatermarkConfig& cfg,
                                  const Vocabulary& vocab) {
    validate(cfg);
    if (x.length() < 2) {
        throw std::invalid_argument("detect_watermark needs length >= 2");
    }
    for (TokenId t : x.tokens) {
        if (!vocab.valid_token(t)) {
            throw std::invalid_argument("sequence token out of vocabulary range");
        }
    }

    // greenlists recur per previous token; cache them for the scan
    std::vector<std::vector<TokenId>> cache(vocab.size());
    std::vector<char> cached(vocab.size(), 0);

    WatermarkVerdict verdict;
    verdict.scored_positions = x.length() - 1;
    for (std::size_t i = 1; i < x.length(); ++i) {
        const TokenId prev = x.tokens[i - 1];
        if (!cached[prev]) {
            cache[prev] = greenlist(prev, cfg, vocab);
            cached[prev] = 1;
        }
        const auto& green = cache[prev];
        if (std::binary_search(green.begin(), green.end(), x.tokens[i])) {
            ++verdict.green_count;
        }
    }

    const double n = static_cast<double>(verdict.scored_positions);
    const double g = static_cast<double>(verdict.green_count);
    verdict.z_score = (g - cfg.gamma * n) /
                      std::sqrt(n * cfg.gamma * (1.0 - cfg.gamma));
    return verdict;
}

DivergenceReport watermark_shift(const MarkovSource& m, const WatermarkConfig& cfg,
                                 std::size_t length, std::size_t n_samples,
                                 std::uint64_t seed) {
    const WatermarkedSource wm = apply_watermark(m, cfg);
    std::uint64_t space = 1;
    bool small = true;
    for (std::size_t i = 0; i < length && small; ++i) {
        if (space > kEnumerationCap / m.vocab().size()) small = false;
        space *= m.vocab().size();
    }
    if (small && space <= kEnumerationCap) {
        return seq_divergence_enumerated(m, wm, length);
    }
    return seq_divergence_mc(m, wm, length, n_samples, seed);
}

}  // namespace detectlab
