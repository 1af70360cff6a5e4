#include "detectlab/detection.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "detectlab/rng.hpp"

namespace detectlab {

namespace {

// variance threshold below which a feature counts as constant
constexpr double kVarianceFloor = 1e-24;

double binomial_ci95(double error_rate, std::uint64_t n_total) {
    if (n_total == 0) return 0.0;
    return 1.96 * std::sqrt(error_rate * (1.0 - error_rate) /
                            static_cast<double>(n_total));
}

}  // namespace

std::string_view to_string(DetectorKind k) {
    switch (k) {
        case DetectorKind::bayes_oracle: return "bayes-oracle";
        case DetectorKind::plugin: return "plug-in";
        case DetectorKind::stylometric: return "stylometric";
    }
    return "unknown";
}

Label bayes_classify(const Sequence& x, const Source& h, const Source& a) {
    const double lh = sequence_logprob(h, x);
    const double la = sequence_logprob(a, x);
    return la > lh ? Label::ai : Label::human;
}

BayesOracleDetector::BayesOracleDetector(std::shared_ptr<const Source> h,
                                         std::shared_ptr<const Source> a)
    : h_(std::move(h)), a_(std::move(a)) {
    if (!h_ || !a_) {
        throw std::invalid_argument("oracle detector needs both sources");
    }
}

Label BayesOracleDetector::classify(const Sequence& x) const {
    return bayes_classify(x, *h_, *a_);
}

DetectorEval empirical_error(const Detector& det, const Source& h, const Source& a,
                             std::size_t length, std::size_t n_per_class,
                             std::uint64_t seed) {
    if (n_per_class < 100) {
        throw std::invalid_argument("empirical_error needs n_per_class >= 100");
    }
    DetectorEval eval;
    eval.n_human = n_per_class;
    eval.n_ai = n_per_class;

    const std::uint64_t h_seed = seed ^ h.stream_tag();
    const std::uint64_t a_seed = seed ^ a.stream_tag();
    for (std::size_t i = 0; i < n_per_class; ++i) {
        const Sequence xh = generate(h, length, derive_stream(h_seed, i));
        if (det.classify(xh) == Label::ai) ++eval.false_positive;
        const Sequence xa = generate(a, length, derive_stream(a_seed, i));
        if (det.classify(xa) == Label::human) ++eval.false_negative;
    }

    const std::uint64_t n_total = eval.n_human + eval.n_ai;
    eval.error_rate =
        static_cast<double>(eval.false_positive + eval.false_negative) /
        static_cast<double>(n_total);
    eval.ci95_halfwidth = binomial_ci95(eval.error_rate, n_total);
    return eval;
}

PluginDetector::PluginDetector(FitResult h_fit, FitResult a_fit)
    : h_fit_(std::move(h_fit.source)), a_fit_(std::move(a_fit.source)) {}

Label PluginDetector::classify(const Sequence& x) const {
    return bayes_classify(x, h_fit_, a_fit_);
}

PluginDetector fit_plugin(const Corpus& h_corpus, const Corpus& a_corpus,
                          std::size_t order, double alpha) {
    if (h_corpus.sequences.empty() || a_corpus.sequences.empty()) {
        throw std::invalid_argument("fit_plugin needs non-empty corpora");
    }
    return PluginDetector(fit_mle(h_corpus, order, alpha),
                          fit_mle(a_corpus, order, alpha));
}

StyleFeatures extract_features(const Sequence& x, const Vocabulary& vocab,
                               const Source& ref) {
    if (x.length() == 0) {
        throw std::invalid_argument("extract_features needs a non-empty sequence");
    }
    if (!vocab.delimiter() || vocab.function_tokens().empty()) {
        throw std::invalid_argument(
            "extract_features needs a vocabulary with delimiter and function tokens");
    }
    for (TokenId t : x.tokens) {
        if (!vocab.valid_token(t)) {
            throw std::invalid_argument("sequence token out of vocabulary range");
        }
    }

    StyleFeatures f;

    std::unordered_set<TokenId> distinct(x.tokens.begin(), x.tokens.end());
    f.type_token_ratio =
        static_cast<double>(distinct.size()) / static_cast<double>(x.length());

    const TokenId delim = *vocab.delimiter();
    std::vector<double> sentence_lengths;
    std::size_t run = 0;
    for (TokenId t : x.tokens) {
        if (t == delim) {
            if (run > 0) sentence_lengths.push_back(static_cast<double>(run));
            run = 0;
        } else {
            ++run;
        }
    }
    if (run > 0) sentence_lengths.push_back(static_cast<double>(run));

    if (!sentence_lengths.empty()) {
        double sum = 0.0;
        for (double s : sentence_lengths) sum += s;
        f.mean_sentence_length = sum / static_cast<double>(sentence_lengths.size());
        double ss = 0.0;
        for (double s : sentence_lengths) {
            const double d = s - f.mean_sentence_length;
            ss += d * d;
        }
        f.sentence_length_std =
            std::sqrt(ss / static_cast<double>(sentence_lengths.size()));
    }

    f.function_token_freq.reserve(vocab.function_tokens().size());
    for (TokenId ft : vocab.function_tokens()) {
        std::size_t c = 0;
        for (TokenId t : x.tokens) c += (t == ft);
        f.function_token_freq.push_back(static_cast<double>(c) /
                                        static_cast<double>(x.length()));
    }

    f.mean_token_logprob = sequence_logprob(ref, x) / static_cast<double>(x.length());
    return f;
}

std::vector<double> feature_vector(const StyleFeatures& f) {
    std::vector<double> v;
    v.reserve(4 + f.function_token_freq.size());
    v.push_back(f.type_token_ratio);
    v.push_back(f.mean_sentence_length);
    v.push_back(f.sentence_length_std);
    v.insert(v.end(), f.function_token_freq.begin(), f.function_token_freq.end());
    v.push_back(f.mean_token_logprob);
    return v;
}

StylometricDetector::StylometricDetector(Vocabulary vocab,
                                         std::shared_ptr<const Source> ref,
                                         std::vector<double> mean,
                                         std::vector<double> scale,
                                         std::vector<double> centroid_h,
                                         std::vector<double> centroid_a,
                                         std::vector<std::size_t> excluded)
    : vocab_(std::move(vocab)),
      ref_(std::move(ref)),
      mean_(std::move(mean)),
      scale_(std::move(scale)),
      centroid_h_(std::move(centroid_h)),
      centroid_a_(std::move(centroid_a)),
      excluded_(std::move(excluded)) {}

Label StylometricDetector::classify(const Sequence& x) const {
    const std::vector<double> raw = feature_vector(extract_features(x, vocab_, *ref_));
    double dh = 0.0;
    double da = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (scale_[i] == 0.0) continue;  // excluded feature
        const double z = (raw[i] - mean_[i]) / scale_[i];
        const double eh = z - centroid_h_[i];
        const double ea = z - centroid_a_[i];
        dh += eh * eh;
        da += ea * ea;
    }
    return da < dh ? Label::ai : Label::human;
}

StylometricDetector fit_stylometric(const std::vector<Sequence>& h_samples,
                                    const std::vector<Sequence>& a_samples,
                                    const Vocabulary& vocab,
                                    std::shared_ptr<const Source> ref) {
    if (h_samples.size() < 30 || a_samples.size() < 30) {
        throw std::invalid_argument("fit_stylometric needs >= 30 samples per class");
    }
    if (!ref) {
        throw std::invalid_argument("fit_stylometric needs a reference source");
    }

    std::vector<std::vector<double>> fh, fa;
    fh.reserve(h_samples.size());
    fa.reserve(a_samples.size());
    for (const auto& x : h_samples) {
        fh.push_back(feature_vector(extract_features(x, vocab, *ref)));
    }
    for (const auto& x : a_samples) {
        fa.push_back(feature_vector(extract_features(x, vocab, *ref)));
    }

    const std::size_t dim = fh.front().size();
    const double n_pooled = static_cast<double>(fh.size() + fa.size());

    std::vector<double> mean(dim, 0.0);
    for (const auto& v : fh) {
        for (std::size_t i = 0; i < dim; ++i) mean[i] += v[i];
    }
    for (const auto& v : fa) {
        for (std::size_t i = 0; i < dim; ++i) mean[i] += v[i];
    }
    for (double& m : mean) m /= n_pooled;

    std::vector<double> var(dim, 0.0);
    auto accumulate_var = [&](const std::vector<std::vector<double>>& fs) {
        for (const auto& v : fs) {
            for (std::size_t i = 0; i < dim; ++i) {
                const double d = v[i] - mean[i];
                var[i] += d * d;
            }
        }
    };
    accumulate_var(fh);
    accumulate_var(fa);
    for (double& s : var) s /= n_pooled;

    std::vector<double> scale(dim, 0.0);
    std::vector<std::size_t> excluded;
    for (std::size_t i = 0; i < dim; ++i) {
        if (var[i] > kVarianceFloor) {
            scale[i] = std::sqrt(var[i]);
        } else {
            excluded.push_back(i);
        }
    }

    auto centroid = [&](const std::vector<std::vector<double>>& fs) {
        std::vector<double> c(dim, 0.0);
        for (const auto& v : fs) {
            for (std::size_t i = 0; i < dim; ++i) {
                if (scale[i] == 0.0) continue;
                c[i] += (v[i] - mean[i]) / scale[i];
            }
        }
        for (double& x : c) x /= static_cast<double>(fs.size());
        return c;
    };

    return StylometricDetector(vocab, std::move(ref), std::move(mean),
                               std::move(scale), centroid(fh), centroid(fa),
                               std::move(excluded));
}

}  // namespace detectlab
