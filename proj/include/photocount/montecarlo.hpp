#pragma once

#include "photocount/distributions.hpp"
#include "photocount/transform.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace photocount {

/*!
 * Counter-based random stream.
 *
 * Each trial owns the stream keyed by (seed, trial_index): the state is
 * initialised by SplitMix64-mixing both words, and draws are successive
 * SplitMix64 outputs. Trials therefore never share state and the result of a
 * simulation does not depend on how trials are scheduled across threads.
 */
class TrialStream {
  public:
    TrialStream(std::uint64_t seed, std::uint64_t trial_index) noexcept;

    std::uint64_t next() noexcept;

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept;

  private:
    std::uint64_t state_;
};

struct SimulationRun {
    std::uint64_t seed;
    std::uint64_t samples;
    double eta;
    std::vector<std::uint64_t> counts; ///< histogram of photocounts, length max m + 1
    Pmf empirical_q;                   ///< counts / samples, origin empirical
    std::optional<double> l1_to_analytic;
};

struct SimulationOptions {
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

/*!
 * Draws n from p by inverse CDF, thins it binomially at `eta`, and
 * histograms the photocounts. Binomial draws use exact CDF inversion for
 * n <= 64 and per-photon Bernoulli trials above that. l1_to_analytic is the
 * L1 distance to forward(p).
 *
 * Throws Error{InvalidArgument} unless 0 < eta <= 1 and samples >= 1.
 */
SimulationRun simulate(Pmf const& p, double eta, std::uint64_t samples, std::uint64_t seed,
                       SimulationOptions options = {});

/// L1 distance over indices 0..spec.dim()-1 between inverse(run.empirical_q)
/// and p_true. Throws Error{DimensionMismatch} if spec.dim() exceeds p_true's
/// support and Error{InvalidArgument} if spec.eta() != run.eta.
double reconstruction_error(Pmf const& p_true, SimulationRun const& run,
                            TransformSpec const& spec);

} // namespace photocount
