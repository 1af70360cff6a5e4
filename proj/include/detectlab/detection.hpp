#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include "detectlab/markov.hpp"
#include "detectlab/source.hpp"

namespace detectlab {

enum class Label { human, ai };
enum class DetectorKind { bayes_oracle, plugin, stylometric };

std::string_view to_string(DetectorKind k);

// Binary classifier for the hypothesis test "was x drawn from h or from a".
// Classification is deterministic given the fitted state.
class Detector {
public:
    virtual ~Detector() = default;
    virtual Label classify(const Sequence& x) const = 0;
    virtual DetectorKind kind() const = 0;
};

// Likelihood-ratio decision with both true sources in hand: ai iff
// ln P_a(x) > ln P_h(x). Ties go to human. No detector has lower expected
// error against (h, a).
Label bayes_classify(const Sequence& x, const Source& h, const Source& a);

class BayesOracleDetector final : public Detector {
public:
    BayesOracleDetector(std::shared_ptr<const Source> h, std::shared_ptr<const Source> a);
    Label classify(const Sequence& x) const override;
    DetectorKind kind() const override { return DetectorKind::bayes_oracle; }

private:
    std::shared_ptr<const Source> h_;
    std::shared_ptr<const Source> a_;
};

// Confusion counts from a balanced evaluation run. false_positive counts
// human-drawn samples labeled ai; false_negative counts ai-drawn samples
// labeled human. ci95_halfwidth is the normal-approximation binomial
// half-width 1.96*sqrt(e(1-e)/N).
struct DetectorEval {
    std::uint64_t n_human = 0;
    std::uint64_t n_ai = 0;
    std::uint64_t false_positive = 0;
    std::uint64_t false_negative = 0;
    double error_rate = 0.0;
    double ci95_halfwidth = 0.0;
};

// Samples n_per_class length-T sequences from each source, classifies them,
// and returns the balanced error rate. Each source draws the substream
// derive_stream(seed ^ stream_tag(), i), so the same (source, seed) pair
// yields the same sample set in any evaluation; swapping (h, a) therefore
// flips the confusion counts exactly.
DetectorEval empirical_error(const Detector& det, const Source& h, const Source& a,
                             std::size_t length, std::size_t n_per_class,
                             std::uint64_t seed);

// Likelihood-ratio detector over per-class MLE fits: a stand-in for trained
// classifiers that only sees samples, never the true sources.
class PluginDetector final : public Detector {
public:
    PluginDetector(FitResult h_fit, FitResult a_fit);
    Label classify(const Sequence& x) const override;
    DetectorKind kind() const override { return DetectorKind::plugin; }

    const MarkovSource& fitted_human() const { return h_fit_; }
    const MarkovSource& fitted_ai() const { return a_fit_; }

private:
    MarkovSource h_fit_;
    MarkovSource a_fit_;
};

PluginDetector fit_plugin(const Corpus& h_corpus, const Corpus& a_corpus,
                          std::size_t order, double alpha);

// Surface statistics of one sequence. Sentences are the maximal
// delimiter-free runs; a sequence without the delimiter is one sentence.
// mean_token_logprob is ln P_ref(x) / T under a fixed reference source.
struct StyleFeatures {
    double type_token_ratio = 0.0;
    double mean_sentence_length = 0.0;
    double sentence_length_std = 0.0;
    std::vector<double> function_token_freq;
    double mean_token_logprob = 0.0;
};

StyleFeatures extract_features(const Sequence& x, const Vocabulary& vocab,
                               const Source& ref);

// Flat layout: [ttr, mean_sentence_length, sentence_length_std,
//               function_token_freq..., mean_token_logprob].
std::vector<double> feature_vector(const StyleFeatures& f);

// Nearest-centroid classifier over z-scored style features. Features are
// standardized with the pooled mean/std of both training classes;
// zero-variance features are excluded from the distance and reported.
class StylometricDetector final : public Detector {
public:
    StylometricDetector(Vocabulary vocab, std::shared_ptr<const Source> ref,
                        std::vector<double> mean, std::vector<double> scale,
                        std::vector<double> centroid_h, std::vector<double> centroid_a,
                        std::vector<std::size_t> excluded);

    Label classify(const Sequence& x) const override;
    DetectorKind kind() const override { return DetectorKind::stylometric; }

    const std::vector<std::size_t>& excluded_features() const { return excluded_; }

private:
    Vocabulary vocab_;
    std::shared_ptr<const Source> ref_;
    std::vector<double> mean_;
    std::vector<double> scale_;
    std::vector<double> centroid_h_;
    std::vector<double> centroid_a_;
    std::vector<std::size_t> excluded_;
};

// Requires at least 30 samples per class.
StylometricDetector fit_stylometric(const std::vector<Sequence>& h_samples,
                                    const std::vector<Sequence>& a_samples,
                                    const Vocabulary& vocab,
                                    std::shared_ptr<const Source> ref);

}  // namespace detectlab
