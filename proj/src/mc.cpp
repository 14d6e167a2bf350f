#include "eerelay/mc.hpp"

#include <complex>
#include <iostream>
#include <ostream>
#include <random>
#include <vector>

namespace eerelay {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 over the combined state
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

using cplx = std::complex<double>;

// Fills a matrix with i.i.d. CN(0, var_per_col[j]) entries (column-wise
// variances). Row-major variance uses the transposed call site.
void fill_gaussian_cols(Eigen::MatrixXcd& m, const std::vector<double>& var,
                        std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double s = std::sqrt(var[static_cast<std::size_t>(j)] / 2.0);
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            m(i, j) = cplx(s * n(rng), s * n(rng));
    }
}

Eigen::MatrixXcd left_pseudo_inverse(const Eigen::MatrixXcd& a, bool& ok) {
    // (A^H A)^-1 A^H through a rank-revealing QR; avoids forming the Gram
    // inverse explicitly.
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
    ok = qr.rank() == a.cols();
    if (!ok) return {};
    return qr.solve(Eigen::MatrixXcd::Identity(a.rows(), a.rows()));
}

}  // namespace

ChannelRealization sample_channels(const LsfProfile& profile, int num_antennas,
                                   std::uint64_t rng_seed) {
    const int k = profile.num_pairs();
    if (num_antennas <= k) throw domain_error("sample_channels: need M > K");

    std::vector<double> bh_src(profile.beta_hat.begin(), profile.beta_hat.begin() + k);
    std::vector<double> bt_src(profile.beta_tilde.begin(), profile.beta_tilde.begin() + k);
    std::vector<double> bh_dst(profile.beta_hat.begin() + k, profile.beta_hat.end());
    std::vector<double> bt_dst(profile.beta_tilde.begin() + k, profile.beta_tilde.end());

    for (std::uint64_t attempt = 0;; ++attempt) {
        std::mt19937_64 rng(rng_seed + attempt);
        ChannelRealization ch;
        ch.g_s_hat.resize(num_antennas, k);
        ch.g_s_err.resize(num_antennas, k);
        fill_gaussian_cols(ch.g_s_hat, bh_src, rng);
        fill_gaussian_cols(ch.g_s_err, bt_src, rng);
        ch.g_s = ch.g_s_hat + ch.g_s_err;

        Eigen::MatrixXcd d_hat_t(num_antennas, k), d_err_t(num_antennas, k);
        fill_gaussian_cols(d_hat_t, bh_dst, rng);
        fill_gaussian_cols(d_err_t, bt_dst, rng);
        ch.g_d_hat = d_hat_t.transpose();
        ch.g_d_err = d_err_t.transpose();
        ch.g_d = ch.g_d_hat + ch.g_d_err;

        bool ok1 = false, ok2 = false;
        ch.f1 = left_pseudo_inverse(ch.g_s_hat, ok1);
        // F2 = Ghat_D^H (Ghat_D Ghat_D^H)^-1 = (pinv(Ghat_D^H))^H
        Eigen::MatrixXcd pinv_dh = left_pseudo_inverse(ch.g_d_hat.adjoint(), ok2);
        if (ok1 && ok2) {
            ch.f2 = pinv_dh.adjoint();
            return ch;
        }
        std::cerr << "eerelay: singular channel estimate, resampling with seed offset "
                  << attempt + 1 << "\n";
    }
}

namespace {

// Per-trial statistics flattened for pairwise reduction: for each k
// [re z, im z, |z|^2, interf, fnorm1, re w, im w, |w|^2, interf2, fnorm2]
// followed by one slot for the relay transmit power.
Eigen::ArrayXd trial_stats(const ChannelRealization& ch, const PowerAllocation& alloc) {
    const int k = static_cast<int>(ch.f1.rows());
    Eigen::ArrayXd s(10 * k + 1);
    double relay_power = 0;
    for (int i = 0; i < k; ++i) {
        const Eigen::RowVectorXcd f1k = ch.f1.row(i);
        const cplx z = f1k * ch.g_s.col(i);
        double interf = 0;
        for (int j = 0; j < k; ++j) {
            if (j == i) continue;
            interf += std::norm(cplx(f1k * ch.g_s.col(j)));
        }
        const double fn1 = f1k.squaredNorm();

        const Eigen::RowVectorXcd gdk = ch.g_d.row(i);
        const cplx w = gdk * ch.f2.col(i);
        double interf2 = 0;
        for (int j = 0; j < k; ++j) {
            if (j == i) continue;
            interf2 += alloc.p[j] * std::norm(cplx(gdk * ch.f2.col(j)));
        }
        const double fn2 = ch.f2.col(i).squaredNorm();
        relay_power += alloc.p[i] * fn2;

        s.segment(10 * i, 10) << z.real(), z.imag(), std::norm(z), interf, fn1, w.real(),
            w.imag(), std::norm(w), interf2, fn2;
    }
    s(10 * k) = relay_power;
    return s;
}

// Order-independent pairwise tree sum over [begin, end).
Eigen::ArrayXd pairwise_sum(const std::vector<Eigen::ArrayXd>& v, std::size_t begin,
                            std::size_t end) {
    if (end - begin == 1) return v[begin];
    const std::size_t mid = begin + (end - begin) / 2;
    return pairwise_sum(v, begin, mid) + pairwise_sum(v, mid, end);
}

}  // namespace

RateReport estimate_rates_mc(const LsfProfile& profile, int num_antennas,
                             const PowerAllocation& alloc, const SystemConfig& config,
                             int num_trials, std::uint64_t rng_seed) {
    const int k = profile.num_pairs();
    if (num_trials < 2)
        throw domain_error("estimate_rates_mc: num_trials must be >= 2 to estimate variances");
    if (static_cast<int>(alloc.p.size()) != k)
        throw domain_error("estimate_rates_mc: allocation size mismatch");

    std::vector<Eigen::ArrayXd> per_trial;
    per_trial.reserve(static_cast<std::size_t>(num_trials));
    for (int t = 0; t < num_trials; ++t) {
        const ChannelRealization ch =
            sample_channels(profile, num_antennas, derive_seed(rng_seed, t));
        per_trial.push_back(trial_stats(ch, alloc));
    }
    const Eigen::ArrayXd mean = pairwise_sum(per_trial, 0, per_trial.size()) / num_trials;

    const double sr2 = config.noise_relay();
    const double sd2 = config.noise_dest();
    RateReport r;
    r.sinr_hop1.resize(k);
    r.sinr_hop2.resize(k);
    r.rate_per_pair.resize(k);
    double sum = 0;
    for (int i = 0; i < k; ++i) {
        const auto s = mean.segment(10 * i, 10);
        const double ptxd = config.device_tx_power_ptxd;
        const cplx ez(s[0], s[1]);
        const double var1 = std::max(0.0, s[2] - std::norm(ez));
        r.sinr_hop1[i] =
            ptxd * std::norm(ez) / (ptxd * var1 + ptxd * s[3] + sr2 * s[4]);
        const cplx ew(s[5], s[6]);
        const double var2 = std::max(0.0, s[7] - std::norm(ew));
        const double pk = alloc.p[i];
        r.sinr_hop2[i] = pk * std::norm(ew) / (pk * var2 + s[8] + sd2);
        r.rate_per_pair[i] =
            std::min(std::log2(1.0 + r.sinr_hop1[i]), std::log2(1.0 + r.sinr_hop2[i]));
        sum += r.rate_per_pair[i];
    }
    r.sum_rate = rate_prelog(config, k) * config.bandwidth_b / 2.0 * sum;
    r.relay_tx_power = mean(10 * k);
    return r;
}

EEResult estimate_ee_mc(const LsfProfile& profile, int num_antennas,
                        const PowerAllocation& alloc, const SystemConfig& config, int num_trials,
                        std::uint64_t rng_seed) {
    const RateReport rates =
        estimate_rates_mc(profile, num_antennas, alloc, config, num_trials, rng_seed);
    const int k = profile.num_pairs();
    EEResult out;
    out.power = total_power(config, k, num_antennas, rates.relay_tx_power);
    out.sum_rate = rates.sum_rate;
    out.ee = out.sum_rate == 0 ? 0.0 : out.sum_rate / out.power.p_tot;
    double h1 = 0, h2 = 0;
    for (int i = 0; i < k; ++i) {
        h1 += std::log2(1.0 + rates.sinr_hop1[i]);
        h2 += std::log2(1.0 + rates.sinr_hop2[i]);
    }
    out.rate_hop1 = h1 / k;
    out.rate_hop2 = h2 / k;
    out.p_tx_relay = rates.relay_tx_power;
    out.num_pairs = k;
    out.num_antennas = num_antennas;
    out.device_density_rho_ue = device_density(config, k);
    return out;
}

void dump_realizations(std::ostream& out, const LsfProfile& profile, int num_antennas,
                       int num_trials, std::uint64_t rng_seed) {
    const auto put_u32 = [&](std::uint32_t v) {
        unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 24)};
        out.write(reinterpret_cast<const char*>(b), 4);
    };
    const auto put_matrix_row_major = [&](const Eigen::MatrixXcd& m) {
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) {
                const double re = m(i, j).real(), im = m(i, j).imag();
                out.write(reinterpret_cast<const char*>(&re), sizeof re);
                out.write(reinterpret_cast<const char*>(&im), sizeof im);
            }
    };
    for (int t = 0; t < num_trials; ++t) {
        const ChannelRealization ch =
            sample_channels(profile, num_antennas, derive_seed(rng_seed, t));
        put_u32(static_cast<std::uint32_t>(num_antennas));
        put_u32(static_cast<std::uint32_t>(profile.num_pairs()));
        put_u32(static_cast<std::uint32_t>(t));
        put_matrix_row_major(ch.g_s);
        put_matrix_row_major(ch.g_d);
    }
}

}  // namespace eerelay
