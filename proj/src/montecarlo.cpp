#include "photocount/montecarlo.hpp"

#include "photocount/error.hpp"
#include "photocount/summation.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

namespace photocount {

namespace {

constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;
constexpr std::size_t max_inverted_trials = 64;
constexpr std::uint64_t block_size = 1 << 16;

constexpr std::uint64_t splitmix_finalize(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Per-trial machinery shared read-only across workers.
class Sampler {
  public:
    Sampler(Pmf const& p, double eta) : eta_(eta) {
        CompensatedSum<double> acc;
        cdf_.reserve(p.size());
        for (double v : p.probs()) {
            acc += v;
            cdf_.push_back(acc.value());
        }
        std::size_t const tables = std::min(p.size(), max_inverted_trials + 1);
        binomial_cdf_.resize(tables);
        for (std::size_t n = 0; n < tables; ++n) binomial_cdf_[n] = binomial_cdf(n);
    }

    std::size_t photocount(TrialStream& stream) const {
        double const u = stream.uniform();
        auto const it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        std::size_t const n =
            it == cdf_.end() ? cdf_.size() - 1 : static_cast<std::size_t>(it - cdf_.begin());
        return thin(n, stream);
    }

  private:
    std::vector<double> binomial_cdf(std::size_t n) const {
        std::vector<double> cdf(n + 1);
        CompensatedSum<double> acc;
        double const log_eta = std::log(eta_);
        double const log_loss = std::log1p(-eta_);
        for (std::size_t k = 0; k <= n; ++k) {
            double const log_w = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                                 std::lgamma(double(n - k) + 1.0) + double(k) * log_eta +
                                 (k < n ? double(n - k) * log_loss : 0.0);
            acc += std::exp(log_w);
            cdf[k] = acc.value();
        }
        return cdf;
    }

    std::size_t thin(std::size_t n, TrialStream& stream) const {
        if (eta_ == 1.0 || n == 0) return n;
        if (n < binomial_cdf_.size()) {
            auto const& cdf = binomial_cdf_[n];
            double const u = stream.uniform();
            auto const it = std::upper_bound(cdf.begin(), cdf.end(), u);
            return it == cdf.end() ? n : static_cast<std::size_t>(it - cdf.begin());
        }
        std::size_t kept = 0;
        for (std::size_t i = 0; i < n; ++i) kept += stream.uniform() < eta_ ? 1 : 0;
        return kept;
    }

    double eta_;
    std::vector<double> cdf_;
    std::vector<std::vector<double>> binomial_cdf_;
};

void run_trials(Sampler const& sampler, std::uint64_t seed, std::uint64_t begin,
                std::uint64_t end, std::vector<std::uint64_t>& counts) {
    for (std::uint64_t trial = begin; trial < end; ++trial) {
        TrialStream stream(seed, trial);
        std::size_t const m = sampler.photocount(stream);
        if (m >= counts.size()) counts.resize(m + 1, 0);
        ++counts[m];
    }
}

} // namespace

TrialStream::TrialStream(std::uint64_t seed, std::uint64_t trial_index) noexcept
    : state_(splitmix_finalize(seed + golden_gamma) ^
             splitmix_finalize(trial_index * golden_gamma + 0x632BE59BD9B4E019ULL)) {}

std::uint64_t TrialStream::next() noexcept {
    state_ += golden_gamma;
    return splitmix_finalize(state_);
}

double TrialStream::uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

SimulationRun simulate(Pmf const& p, double eta, std::uint64_t samples, std::uint64_t seed,
                       SimulationOptions options) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "detection efficiency outside (0, 1]");
    }
    if (samples == 0) throw Error(ErrorCode::InvalidArgument, "samples must be at least 1");

    Sampler const sampler(p, eta);
    unsigned workers = options.threads ? options.threads : std::thread::hardware_concurrency();
    std::uint64_t const blocks = (samples + block_size - 1) / block_size;
    workers = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, blocks));

    std::vector<std::vector<std::uint64_t>> partial(workers);
    auto work = [&](unsigned w) {
        for (std::uint64_t b = w; b < blocks; b += workers) {
            run_trials(sampler, seed, b * block_size, std::min(samples, (b + 1) * block_size),
                       partial[w]);
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }

    std::vector<std::uint64_t> counts;
    for (auto const& part : partial) {
        if (part.size() > counts.size()) counts.resize(part.size(), 0);
        for (std::size_t m = 0; m < part.size(); ++m) counts[m] += part[m];
    }

    std::vector<double> probs(counts.size());
    double const total = static_cast<double>(samples);
    for (std::size_t m = 0; m < counts.size(); ++m) probs[m] = static_cast<double>(counts[m]) / total;
    Pmf empirical(std::move(probs), 0.0, Origin::empirical);

    Pmf const analytic = forward(p, TransformSpec(eta, p.size()));
    CompensatedSum<double> l1;
    for (std::size_t m = 0; m < std::max(analytic.size(), empirical.size()); ++m) {
        l1 += std::abs(empirical.at_or_zero(m) - analytic.at_or_zero(m));
    }

    return SimulationRun{seed, samples, eta, std::move(counts), std::move(empirical), l1.value()};
}

double reconstruction_error(Pmf const& p_true, SimulationRun const& run,
                            TransformSpec const& spec) {
    if (spec.eta() != run.eta) {
        throw Error(ErrorCode::InvalidArgument, "transform efficiency differs from the run's");
    }
    if (spec.dim() > p_true.size()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "dim " + std::to_string(spec.dim()) + " exceeds the reference support of " +
                        std::to_string(p_true.size()));
    }
    SignedDistribution const rec = inverse(run.empirical_q.probs(), spec);
    CompensatedSum<double> l1;
    for (std::size_t n = 0; n < spec.dim(); ++n) l1 += std::abs(rec.values[n] - p_true[n]);
    return l1.value();
}

} // namespace photocount
