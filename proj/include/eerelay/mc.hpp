// Monte-Carlo link-level simulation: channel sampling, MMSE estimates, ZF
// transceivers, and sample-statistic SINR/rate/EE estimators.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>

#include "eerelay/analytic.hpp"
#include "eerelay/config.hpp"
#include "eerelay/topology.hpp"

namespace eerelay {

struct ChannelRealization {
    Eigen::MatrixXcd g_s;      // M x K, source -> relay
    Eigen::MatrixXcd g_d;      // K x M, relay -> destination
    Eigen::MatrixXcd g_s_hat;  // MMSE estimates
    Eigen::MatrixXcd g_d_hat;
    Eigen::MatrixXcd g_s_err;  // estimation errors, G = Ghat + Gerr
    Eigen::MatrixXcd g_d_err;
    Eigen::MatrixXcd f1;  // K x M ZF receive filter, F1 * Ghat_S = I
    Eigen::MatrixXcd f2;  // M x K ZF precoder,       Ghat_D * F2 = I
};

/// Draws one channel realization. Estimate and error columns are independent
/// complex Gaussians with per-entry variances beta' and beta - beta'
/// (MMSE orthogonality); the ZF matrices come from a rank-revealing QR of the
/// estimates. A rank-deficient estimate (probability-zero event) is resampled
/// with an incremented seed and a warning on stderr.
ChannelRealization sample_channels(const LsfProfile& profile, int num_antennas,
                                   std::uint64_t rng_seed);

/// Sample-statistic estimates of the use-and-forget SINRs and rates over
/// num_trials independent realizations. Requires num_trials >= 2 (variance
/// terms). Bit-reproducible for fixed (seed, num_trials): per-trial seeds are
/// derived independently and reduced with a fixed pairwise tree, so trials
/// may be computed in any order or in parallel.
RateReport estimate_rates_mc(const LsfProfile& profile, int num_antennas,
                             const PowerAllocation& alloc, const SystemConfig& config,
                             int num_trials, std::uint64_t rng_seed);

/// Monte-Carlo EE: rates from estimate_rates_mc, power from total_power at the
/// empirical relay transmit power.
EEResult estimate_ee_mc(const LsfProfile& profile, int num_antennas,
                        const PowerAllocation& alloc, const SystemConfig& config, int num_trials,
                        std::uint64_t rng_seed);

/// Debug dump: for each trial a little-endian header {u32 M, u32 K, u32 trial}
/// followed by G_S then G_D as row-major complex doubles (re, im).
void dump_realizations(std::ostream& out, const LsfProfile& profile, int num_antennas,
                       int num_trials, std::uint64_t rng_seed);

/// Deterministic per-trial seed derivation (splitmix64 over seed and index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace eerelay
