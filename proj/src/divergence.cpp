#include "detectlab/divergence.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "detectlab/errors.hpp"
#include "detectlab/rng.hpp"

namespace detectlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Neumaier-compensated accumulator; the enumerators add up to 10^6 terms.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }

    double value() const { return sum + comp; }
};

// Running mean/variance (Welford).
struct RunningStats {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }

    double stderr_of_mean() const {
        if (n < 2) return 0.0;
        const double var = m2 / static_cast<double>(n - 1);
        return std::sqrt(var / static_cast<double>(n));
    }
};

void check_same_vocab(const Source& p, const Source& q) {
    if (p.vocab() != q.vocab()) {
        throw std::invalid_argument("sources must share a vocabulary");
    }
}

std::uint64_t checked_pow(std::uint64_t base, std::size_t exp, std::uint64_t cap) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (r > cap / base) return cap + 1;
        r *= base;
    }
    return r;
}

// Log-probability row for scoring; contexts without an entry contribute
// probability zero to every continuation.
void score_row(const Source& m, std::span<const TokenId> window,
               std::vector<double>& out, std::size_t v) {
    if (!m.try_next_logprobs(window, out)) {
        out.assign(v, -kInf);
    }
}

void shift_window(const std::vector<TokenId>& parent, TokenId tok,
                  std::vector<TokenId>& child) {
    child.assign(parent.begin(), parent.end());
    if (child.empty()) return;
    for (std::size_t i = 0; i + 1 < child.size(); ++i) child[i] = child[i + 1];
    child.back() = tok;
}

double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

}  // namespace

std::string_view to_string(DivergenceMethod m) {
    switch (m) {
        case DivergenceMethod::exact: return "exact";
        case DivergenceMethod::enumerated: return "enumerated";
        case DivergenceMethod::monte_carlo: return "monte-carlo";
    }
    return "unknown";
}

double tv_exact(const Categorical& p, const Categorical& q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("tv_exact: dimension mismatch");
    }
    CompensatedSum s;
    for (std::size_t j = 0; j < p.size(); ++j) {
        s.add(std::abs(p[j] - q[j]));
    }
    return 0.5 * s.value();
}

double kl_exact(const Categorical& p, const Categorical& q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("kl_exact: dimension mismatch");
    }
    CompensatedSum s;
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (p[j] > 0.0) {
            if (q[j] <= 0.0) return kInf;
            s.add(p[j] * std::log(p[j] / q[j]));
        }
    }
    const double kl = s.value();
    return kl < 0.0 ? 0.0 : kl;
}

double pinsker_bound(double kl) {
    if (std::isnan(kl) || kl < 0.0) {
        throw std::domain_error("pinsker_bound: kl must be >= 0");
    }
    return std::sqrt(kl / 2.0);
}

double bayes_error(double tv) {
    if (std::isnan(tv) || tv < -1e-12 || tv > 1.0 + 1e-12) {
        throw std::domain_error("bayes_error: tv must lie in [0,1]");
    }
    return 0.5 * (1.0 - clamp01(tv));
}

DivergenceReport divergence_exact(const Categorical& p, const Categorical& q) {
    DivergenceReport r;
    r.method = DivergenceMethod::exact;
    r.tv = tv_exact(p, q);
    r.kl = kl_exact(p, q);
    r.pinsker_bound = pinsker_bound(r.kl);
    r.bayes_error = bayes_error(r.tv);
    return r;
}

DivergenceReport seq_divergence_enumerated(const Source& p, const Source& q,
                                           std::size_t length) {
    check_same_vocab(p, q);
    const std::size_t v = p.vocab().size();
    if (checked_pow(v, length, kEnumerationCap) > kEnumerationCap) {
        throw EnumerationCapError(
            "sequence space exceeds the enumeration cap; use seq_divergence_mc");
    }

    // per-depth scratch so the recursion never reallocates
    std::vector<std::vector<TokenId>> wins_p(length + 1), wins_q(length + 1);
    std::vector<std::vector<double>> rows_p(length + 1), rows_q(length + 1);
    wins_p[0].assign(p.order(), bos_token(v));
    wins_q[0].assign(q.order(), bos_token(v));

    CompensatedSum tv_sum;
    CompensatedSum kl_sum;
    bool kl_infinite = false;

    auto walk = [&](auto&& self, std::size_t t, double lp, double lq) -> void {
        if (t == length) {
            const double pp = std::exp(lp);
            const double qq = std::exp(lq);
            tv_sum.add(std::abs(pp - qq));
            if (pp > 0.0) {
                if (lq == -kInf) {
                    kl_infinite = true;
                } else {
                    kl_sum.add(pp * (lp - lq));
                }
            }
            return;
        }
        score_row(p, wins_p[t], rows_p[t], v);
        score_row(q, wins_q[t], rows_q[t], v);
        for (TokenId j = 0; j < v; ++j) {
            shift_window(wins_p[t], j, wins_p[t + 1]);
            shift_window(wins_q[t], j, wins_q[t + 1]);
            self(self, t + 1, lp + rows_p[t][j], lq + rows_q[t][j]);
        }
    };
    walk(walk, 0, 0.0, 0.0);

    DivergenceReport r;
    r.method = DivergenceMethod::enumerated;
    r.tv = clamp01(0.5 * tv_sum.value());
    const double kl = kl_sum.value();
    r.kl = kl_infinite ? kInf : (kl < 0.0 ? 0.0 : kl);
    r.pinsker_bound = pinsker_bound(r.kl);
    r.bayes_error = bayes_error(r.tv);
    return r;
}

DivergenceReport seq_divergence_mc(const Source& p, const Source& q,
                                   std::size_t length, std::size_t n_samples,
                                   std::uint64_t seed) {
    check_same_vocab(p, q);
    if (n_samples < 100) {
        throw std::invalid_argument("seq_divergence_mc needs at least 100 samples");
    }

    RunningStats kl_stats;
    RunningStats tv_stats;
    std::uint64_t q_zero = 0;

    for (std::size_t i = 0; i < n_samples; ++i) {
        const Sequence x = generate(p, length, derive_stream(seed, i));
        const double lp = sequence_logprob(p, x);
        const double lq = sequence_logprob(q, x);
        // lp is finite: every sampled token had positive probability under p
        tv_stats.add(0.5 * std::abs(1.0 - std::exp(lq - lp)));
        if (lq == -kInf) {
            ++q_zero;
        } else {
            kl_stats.add(lp - lq);
        }
    }

    DivergenceReport r;
    r.method = DivergenceMethod::monte_carlo;
    r.n_samples = n_samples;
    r.q_zero_samples = q_zero;
    r.tv = tv_stats.mean;
    r.stderr_tv = tv_stats.stderr_of_mean();
    if (q_zero > 0) {
        r.kl = kInf;
        r.stderr_kl = kInf;
    } else {
        r.kl = kl_stats.mean < 0.0 ? 0.0 : kl_stats.mean;
        r.stderr_kl = kl_stats.stderr_of_mean();
    }
    r.pinsker_bound = pinsker_bound(r.kl);
    r.bayes_error = bayes_error(clamp01(r.tv));
    return r;
}

}  // namespace detectlab
