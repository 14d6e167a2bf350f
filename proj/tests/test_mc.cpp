#include <doctest.h>

#include <cmath>
#include <sstream>

#include "eerelay/mc.hpp"

using namespace eerelay;

namespace {

SystemConfig table_config() { return SystemConfig{}; }

}  // namespace

TEST_CASE("estimate plus error reconstructs the channel exactly") {
    SystemConfig cfg = table_config();
    const LsfProfile p = sample_topology(cfg, 6, 17);
    const ChannelRealization ch = sample_channels(p, 32, 99);
    CHECK((ch.g_s - ch.g_s_hat - ch.g_s_err).norm() == doctest::Approx(0.0));
    CHECK((ch.g_d - ch.g_d_hat - ch.g_d_err).norm() == doctest::Approx(0.0));
}

TEST_CASE("ZF property holds on every realization") {
    SystemConfig cfg = table_config();
    const LsfProfile p = sample_topology(cfg, 8, 21);
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
        const ChannelRealization ch = sample_channels(p, 64, seed);
        const Eigen::MatrixXcd i1 = ch.f1 * ch.g_s_hat;
        const Eigen::MatrixXcd i2 = ch.g_d_hat * ch.f2;
        CHECK((i1 - Eigen::MatrixXcd::Identity(8, 8)).norm() < 1e-8);
        CHECK((i2 - Eigen::MatrixXcd::Identity(8, 8)).norm() < 1e-8);
    }
}

TEST_CASE("perfect CSI: zero error matrices and exact ZF on the true channel") {
    SystemConfig cfg = table_config();
    cfg.pilot_snr_rho_r = 1e25;
    const LsfProfile p = sample_topology(cfg, 4, 5);
    const ChannelRealization ch = sample_channels(p, 24, 7);
    CHECK(ch.g_s_err.norm() < 1e-8 * ch.g_s.norm());
    CHECK((ch.f1 * ch.g_s - Eigen::MatrixXcd::Identity(4, 4)).norm() < 1e-7);
}

TEST_CASE("rank-1 pseudo-inverse matches the explicit formula") {
    SystemConfig cfg = table_config();
    const LsfProfile p = sample_topology(cfg, 1, 3);
    const ChannelRealization ch = sample_channels(p, 2, 11);
    const Eigen::VectorXcd g = ch.g_s_hat.col(0);
    const Eigen::RowVectorXcd expect = g.adjoint() / g.squaredNorm();
    CHECK((ch.f1 - expect).norm() < 1e-12 * expect.norm());
}

TEST_CASE("estimate entries carry variance beta_hat per column") {
    SystemConfig cfg = table_config();
    const LsfProfile p = sample_topology(cfg, 2, 77);
    const int m = 16, draws = 2000;
    Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(2);
    for (int t = 0; t < draws; ++t) {
        const ChannelRealization ch = sample_channels(p, m, derive_seed(5, t));
        for (int k = 0; k < 2; ++k) acc[k] += ch.g_s_hat.col(k).squaredNorm();
    }
    for (int k = 0; k < 2; ++k) {
        const double n = static_cast<double>(m) * draws;
        const double var = acc[k] / n;
        const double se = p.beta_hat[k] / std::sqrt(n);  // |g|^2 is exponential
        CHECK(std::abs(var - p.beta_hat[k]) < 3.0 * se);
    }
}

TEST_CASE("MMSE orthogonality: estimate/error sample correlation vanishes") {
    SystemConfig cfg = table_config();
    const LsfProfile p = sample_topology(cfg, 2, 13);
    const int m = 32;
    double sxy_re = 0, sxx = 0, syy = 0;
    long long n = 0;
    for (int t = 0; t < 200; ++t) {
        const ChannelRealization ch = sample_channels(p, m, derive_seed(99, t));
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < m; ++i) {
                const auto a = ch.g_s_hat(i, k);
                const auto b = ch.g_s_err(i, k);
                sxy_re += (std::conj(a) * b).real();
                sxx += std::norm(a);
                syy += std::norm(b);
                ++n;
            }
    }
    const double r = sxy_re / std::sqrt(sxx * syy);
    CHECK(std::abs(r) < 0.02);  // 1.28e4 complex samples
}

TEST_CASE("filter norm converges to the closed limit (M=256, K=8)") {
    SystemConfig cfg = table_config();
    const LsfProfile p = sample_topology(cfg, 8, 1);
    const int m = 256, draws = 2500;
    Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(8);
    double relay_acc = 0;
    const PowerAllocation alloc = equal_power_allocation(p, m, 2.0);
    for (int t = 0; t < draws; ++t) {
        const ChannelRealization ch = sample_channels(p, m, derive_seed(17, t));
        for (int k = 0; k < 8; ++k) acc[k] += ch.f1.row(k).squaredNorm();
        for (int k = 0; k < 8; ++k) relay_acc += alloc.p[k] * ch.f2.col(k).squaredNorm();
    }
    for (int k = 0; k < 8; ++k) {
        const double limit = 1.0 / (p.beta_hat[k] * (m - 8));
        CHECK(acc[k] / draws == doctest::Approx(limit).epsilon(0.03));
    }
    // empirical relay power against sum p_k / beta'_{k+K} / (M-K) (= 2 W here)
    CHECK(relay_acc / draws == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("no signal means zero SINR and zero rates") {
    SystemConfig cfg = table_config();
    cfg.device_tx_power_ptxd = 0.0;
    const LsfProfile p = sample_topology(cfg, 3, 8);
    PowerAllocation alloc;
    alloc.p = {0.0, 0.0, 0.0};
    const RateReport r = estimate_rates_mc(p, 16, alloc, cfg, 50, 4);
    for (int k = 0; k < 3; ++k) {
        CHECK(r.sinr_hop1[k] == doctest::Approx(0.0));
        CHECK(r.sinr_hop2[k] == doctest::Approx(0.0));
        CHECK(r.rate_per_pair[k] == doctest::Approx(0.0));
    }
    CHECK(r.sum_rate == doctest::Approx(0.0));
}

TEST_CASE("minimal antenna headroom stays finite and nonnegative") {
    SystemConfig cfg = table_config();
    const LsfProfile p = sample_topology(cfg, 4, 6);
    const PowerAllocation alloc = equal_power_allocation(p, 5, 1.0);
    const RateReport r = estimate_rates_mc(p, 5, alloc, cfg, 200, 5);
    for (int k = 0; k < 4; ++k) {
        CHECK(std::isfinite(r.rate_per_pair[k]));
        CHECK(r.rate_per_pair[k] >= 0.0);
    }
}

TEST_CASE("trials argument validated") {
    SystemConfig cfg = table_config();
    const LsfProfile p = sample_topology(cfg, 2, 6);
    const PowerAllocation alloc = equal_power_allocation(p, 8, 1.0);
    CHECK_THROWS_AS(estimate_rates_mc(p, 8, alloc, cfg, 1, 5), domain_error);
}

TEST_CASE("MC rates match the deterministic equivalents within 5%") {
    SystemConfig cfg = table_config();
    for (double rho : {0.1, 100.0}) {
        cfg.pilot_snr_rho_r = rho;
        const LsfProfile p = sample_topology(cfg, 8, 42);
        const int m = 128;
        const PowerAllocation alloc = equal_power_allocation(p, m, 1.0);
        const RateReport mc = estimate_rates_mc(p, m, alloc, cfg, 2000, 7);
        const RateReport t1 = theorem1_rates(p, m, alloc, cfg);
        for (int k = 0; k < 8; ++k)
            CHECK(mc.rate_per_pair[k] ==
                  doctest::Approx(t1.rate_per_pair[k]).epsilon(0.05));
        CHECK(mc.relay_tx_power == doctest::Approx(t1.relay_tx_power).epsilon(0.05));
    }
}

TEST_CASE("MC EE matches corollary1 and reacts to fixed power") {
    SystemConfig cfg = table_config();
    const LsfProfile p = sample_topology(cfg, 8, 12);
    const int m = 128;
    const PowerAllocation alloc = equal_power_allocation(p, m, 1.0);
    const EEResult mc = estimate_ee_mc(p, m, alloc, cfg, 2000, 3);
    const EEResult c1 = corollary1_ee(p, m, 1.0, cfg);
    CHECK(mc.ee == doctest::Approx(c1.ee).epsilon(0.05));

    SystemConfig expensive = cfg;
    expensive.p_fix *= 2.0;
    const EEResult mc2 = estimate_ee_mc(p, m, alloc, expensive, 500, 3);
    const EEResult mc2_base = estimate_ee_mc(p, m, alloc, cfg, 500, 3);
    CHECK(mc2.ee < mc2_base.ee);
}

TEST_CASE("bit-reproducible for a fixed seed") {
    SystemConfig cfg = table_config();
    const LsfProfile p = sample_topology(cfg, 4, 9);
    const PowerAllocation alloc = equal_power_allocation(p, 24, 1.0);
    const RateReport a = estimate_rates_mc(p, 24, alloc, cfg, 64, 123);
    const RateReport b = estimate_rates_mc(p, 24, alloc, cfg, 64, 123);
    CHECK(a.sum_rate == b.sum_rate);
    CHECK(a.relay_tx_power == b.relay_tx_power);
    for (int k = 0; k < 4; ++k) CHECK(a.rate_per_pair[k] == b.rate_per_pair[k]);
    const RateReport c = estimate_rates_mc(p, 24, alloc, cfg, 64, 124);
    CHECK(a.sum_rate != c.sum_rate);
}

TEST_CASE("realization dump layout") {
    SystemConfig cfg = table_config();
    const LsfProfile p = sample_topology(cfg, 2, 9);
    std::ostringstream buf(std::ios::binary);
    dump_realizations(buf, p, 4, 3, 55);
    const std::string bytes = buf.str();
    // per trial: 12-byte header + (M*K + K*M) complex doubles
    const std::size_t per_trial = 12 + 2 * (4 * 2) * 16;
    REQUIRE(bytes.size() == 3 * per_trial);
    auto u32_at = [&](std::size_t off) {
        return static_cast<unsigned>(static_cast<unsigned char>(bytes[off])) |
               static_cast<unsigned>(static_cast<unsigned char>(bytes[off + 1])) << 8 |
               static_cast<unsigned>(static_cast<unsigned char>(bytes[off + 2])) << 16 |
               static_cast<unsigned>(static_cast<unsigned char>(bytes[off + 3])) << 24;
    };
    for (unsigned t = 0; t < 3; ++t) {
        CHECK(u32_at(t * per_trial) == 4u);       // M
        CHECK(u32_at(t * per_trial + 4) == 2u);   // K
        CHECK(u32_at(t * per_trial + 8) == t);    // trial index
    }
}
