#include "detectlab/markov.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <stdexcept>

#include "detectlab/errors.hpp"

namespace detectlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Context spaces up to this size get a flat code->row lookup table.
constexpr std::uint64_t kDenseLookupCap = 65536;

std::uint64_t checked_context_space(std::size_t base, std::size_t order) {
    std::uint64_t space = 1;
    for (std::size_t i = 0; i < order; ++i) {
        if (space > std::numeric_limits<std::uint64_t>::max() / base) {
            throw std::invalid_argument("context space does not fit in 64 bits");
        }
        space *= base;
    }
    return space;
}

void check_logit_row(const std::vector<double>& logits, std::size_t v) {
    if (logits.size() != v) {
        throw std::invalid_argument("logit row length must equal vocabulary size");
    }
    bool any_finite = false;
    for (double z : logits) {
        if (std::isnan(z) || z == std::numeric_limits<double>::infinity()) {
            throw std::invalid_argument("logit must not be NaN or +inf");
        }
        any_finite |= std::isfinite(z);
    }
    if (!any_finite) {
        throw std::invalid_argument("logit row needs at least one finite entry");
    }
}

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t hash_double(std::uint64_t h, double x) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof(bits));
    return fnv1a(h, &bits, sizeof(bits));
}

std::uint64_t hash_u64(std::uint64_t h, std::uint64_t x) {
    return fnv1a(h, &x, sizeof(x));
}

// Contexts are stored oldest-token-first; the oldest entry is the least
// significant digit of the code, so encode and decode round-trip.
std::uint64_t encode_window(std::span<const TokenId> window, std::uint64_t base) {
    std::uint64_t code = 0;
    for (std::size_t i = window.size(); i-- > 0;) {
        code = code * base + window[i];
    }
    return code;
}

std::vector<TokenId> decode_window(std::uint64_t code, std::uint64_t base,
                                   std::size_t order) {
    std::vector<TokenId> ctx(order);
    for (std::size_t i = 0; i < order; ++i) {
        ctx[i] = static_cast<TokenId>(code % base);
        code /= base;
    }
    return ctx;
}

}  // namespace

MarkovSource::MarkovSource(Vocabulary vocab, std::size_t order, double temperature,
                           std::vector<Row> rows,
                           std::optional<std::vector<double>> default_logits)
    : vocab_(std::move(vocab)),
      order_(order),
      temperature_(temperature),
      default_logits_(std::move(default_logits)) {
    if (!(temperature_ > 0.0) || !std::isfinite(temperature_)) {
        throw std::domain_error("temperature must be positive and finite");
    }
    const std::size_t v = vocab_.size();
    checked_context_space(v + 1, order_);

    std::map<std::uint64_t, const std::vector<double>*> by_code;
    for (const auto& row : rows) {
        if (row.context.size() != order_) {
            throw std::invalid_argument("context length must equal source order");
        }
        for (TokenId t : row.context) {
            if (t > v) {
                throw std::invalid_argument("context entry outside extended alphabet");
            }
        }
        check_logit_row(row.logits, v);
        if (!by_code.emplace(encode(row.context), &row.logits).second) {
            throw std::invalid_argument("duplicate transition context");
        }
    }
    if (by_code.empty() && !default_logits_) {
        throw std::invalid_argument("source needs at least one transition row");
    }
    if (default_logits_) {
        check_logit_row(*default_logits_, v);
    }

    ctx_codes_.reserve(by_code.size());
    logits_flat_.reserve(by_code.size() * v);
    for (const auto& [code, logits] : by_code) {
        ctx_codes_.push_back(code);
        logits_flat_.insert(logits_flat_.end(), logits->begin(), logits->end());
    }
    build_caches();
}

void MarkovSource::build_caches() {
    const std::size_t v = vocab_.size();
    const std::size_t n = ctx_codes_.size();
    probs_flat_.resize(n * v);
    logprobs_flat_.resize(n * v);
    for (std::size_t i = 0; i < n; ++i) {
        std::span<const double> z(logits_flat_.data() + i * v, v);
        std::span<double> p(probs_flat_.data() + i * v, v);
        detail::softmax_row(z, temperature_, p);
        for (std::size_t j = 0; j < v; ++j) {
            logprobs_flat_[i * v + j] = p[j] > 0.0 ? std::log(p[j]) : kNegInf;
        }
    }
    if (default_logits_) {
        default_probs_.resize(v);
        detail::softmax_row(*default_logits_, temperature_, default_probs_);
        default_logprobs_.resize(v);
        for (std::size_t j = 0; j < v; ++j) {
            default_logprobs_[j] =
                default_probs_[j] > 0.0 ? std::log(default_probs_[j]) : kNegInf;
        }
    }

    const std::uint64_t space = checked_context_space(v + 1, order_);
    if (space <= kDenseLookupCap) {
        dense_.assign(space, -1);
        for (std::size_t i = 0; i < n; ++i) {
            dense_[ctx_codes_[i]] = static_cast<std::int32_t>(i);
        }
    } else {
        index_.reserve(n * 2);
        for (std::size_t i = 0; i < n; ++i) {
            index_.emplace(ctx_codes_[i], static_cast<std::uint32_t>(i));
        }
    }

    std::uint64_t h = 0xcbf29ce484222325ull;
    h = hash_u64(h, v);
    for (const auto& name : vocab_.tokens()) {
        h = fnv1a(h, name.data(), name.size());
    }
    h = hash_u64(h, vocab_.delimiter() ? *vocab_.delimiter() + 1 : 0);
    for (TokenId f : vocab_.function_tokens()) h = hash_u64(h, f);
    h = hash_u64(h, order_);
    h = hash_double(h, temperature_);
    for (std::size_t i = 0; i < n; ++i) {
        h = hash_u64(h, ctx_codes_[i]);
        for (std::size_t j = 0; j < v; ++j) {
            h = hash_double(h, logits_flat_[i * v + j]);
        }
    }
    if (default_logits_) {
        for (double z : *default_logits_) h = hash_double(h, z);
    }
    tag_ = h;
}

std::uint64_t MarkovSource::encode(std::span<const TokenId> window) const {
    return encode_window(window, vocab_.size() + 1);
}

std::vector<TokenId> MarkovSource::decode_context(std::uint64_t code) const {
    return decode_window(code, vocab_.size() + 1, order_);
}

const double* MarkovSource::row_ptr(const std::vector<double>& flat,
                                    std::uint64_t code) const {
    if (!dense_.empty()) {
        const std::int32_t i = code < dense_.size() ? dense_[code] : -1;
        return i >= 0 ? flat.data() + static_cast<std::size_t>(i) * vocab_.size()
                      : nullptr;
    }
    const auto it = index_.find(code);
    return it != index_.end() ? flat.data() + static_cast<std::size_t>(it->second) * vocab_.size()
                              : nullptr;
}

bool MarkovSource::try_next_probs(std::span<const TokenId> window,
                                  std::vector<double>& out) const {
    const double* row = row_ptr(probs_flat_, encode(window));
    if (!row) {
        if (default_probs_.empty()) return false;
        row = default_probs_.data();
    }
    out.assign(row, row + vocab_.size());
    return true;
}

bool MarkovSource::try_next_logprobs(std::span<const TokenId> window,
                                     std::vector<double>& out) const {
    const double* row = row_ptr(logprobs_flat_, encode(window));
    if (!row) {
        if (default_logprobs_.empty()) return false;
        row = default_logprobs_.data();
    }
    out.assign(row, row + vocab_.size());
    return true;
}

MarkovSource with_temperature(const MarkovSource& m, double tau) {
    MarkovSource out = m;
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw std::domain_error("temperature must be positive and finite");
    }
    out.temperature_ = tau;
    out.build_caches();
    return out;
}

FitResult fit_mle(const Corpus& corpus, std::size_t order, double alpha) {
    if (corpus.sequences.empty() || corpus.total_tokens() == 0) {
        throw std::invalid_argument("cannot fit on an empty corpus");
    }
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("smoothing pseudo-count must be >= 0 and finite");
    }
    const std::size_t v = corpus.vocab.size();
    const std::uint64_t space = checked_context_space(v + 1, order);

    std::map<std::uint64_t, std::vector<std::uint64_t>> counts;
    ContextWindow w(order, v);
    for (const auto& seq : corpus.sequences) {
        w.reset();
        for (TokenId t : seq.tokens) {
            if (t >= v) {
                throw std::invalid_argument("corpus token out of vocabulary range");
            }
            auto& row = counts[encode_window(w.view(), v + 1)];
            if (row.empty()) row.resize(v, 0);
            ++row[t];
            w.push(t);
        }
    }

    bool zero_flag = false;
    std::vector<MarkovSource::Row> rows;
    rows.reserve(counts.size());
    for (const auto& [code, c] : counts) {
        std::uint64_t total = 0;
        for (std::uint64_t n : c) total += n;
        std::vector<double> logits(v);
        for (std::size_t j = 0; j < v; ++j) {
            const double p = (static_cast<double>(c[j]) + alpha) /
                             (static_cast<double>(total) + alpha * static_cast<double>(v));
            logits[j] = p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
            if (c[j] == 0 && alpha == 0.0) zero_flag = true;
        }
        rows.push_back({decode_window(code, v + 1, order), std::move(logits)});
    }

    std::optional<std::vector<double>> default_logits;
    if (alpha > 0.0) {
        // unseen context: counts are all zero, so the smoothed row is uniform
        default_logits = std::vector<double>(v, std::log(1.0 / static_cast<double>(v)));
    } else {
        // reachable contexts the corpus never visited stay uncovered
        std::uint64_t reachable = 0;
        std::uint64_t tokens_ctx = 1;
        bool overflow = false;
        for (std::size_t i = 0; i <= order && !overflow; ++i) {
            if (reachable > space) overflow = true;
            reachable += tokens_ctx;
            if (i < order) {
                if (tokens_ctx > space / (v ? v : 1)) overflow = true;
                tokens_ctx *= v;
            }
        }
        if (overflow || counts.size() < reachable) zero_flag = true;
    }

    MarkovSource fitted(corpus.vocab, order, 1.0, std::move(rows),
                        std::move(default_logits));
    return FitResult{std::move(fitted), zero_flag};
}

namespace {

class MixtureSource final : public Source {
public:
    MixtureSource(std::shared_ptr<const Source> base,
                  std::shared_ptr<const Source> target, double lambda)
        : base_(std::move(base)), target_(std::move(target)), lambda_(lambda) {
        std::uint64_t h = 0x6d69787475726531ull;
        h = hash_u64(h, base_->stream_tag());
        h = hash_u64(h, target_->stream_tag());
        tag_ = hash_double(h, lambda_);
    }

    const Vocabulary& vocab() const override { return base_->vocab(); }
    std::size_t order() const override { return base_->order(); }
    std::uint64_t stream_tag() const override { return tag_; }

    bool try_next_probs(std::span<const TokenId> window,
                        std::vector<double>& out) const override {
        if (lambda_ == 0.0) return base_->try_next_probs(window, out);
        if (lambda_ == 1.0) return target_->try_next_probs(window, out);
        std::vector<double> target_probs;
        if (!base_->try_next_probs(window, out) ||
            !target_->try_next_probs(window, target_probs)) {
            return false;
        }
        for (std::size_t j = 0; j < out.size(); ++j) {
            out[j] = (1.0 - lambda_) * out[j] + lambda_ * target_probs[j];
        }
        return true;
    }

private:
    std::shared_ptr<const Source> base_;
    std::shared_ptr<const Source> target_;
    double lambda_;
    std::uint64_t tag_;
};

}  // namespace

std::shared_ptr<const Source> mixture(std::shared_ptr<const Source> base,
                                      std::shared_ptr<const Source> target,
                                      double lambda) {
    if (!base || !target) {
        throw std::invalid_argument("mixture components must be non-null");
    }
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("mixture weight must lie in [0,1]");
    }
    if (base->vocab() != target->vocab()) {
        throw std::invalid_argument("mixture components need the same vocabulary");
    }
    if (base->order() != target->order()) {
        throw std::invalid_argument("mixture components need the same order");
    }
    return std::make_shared<MixtureSource>(std::move(base), std::move(target), lambda);
}

}  // namespace detectlab
