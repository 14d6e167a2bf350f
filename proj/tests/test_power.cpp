#include <doctest.h>

#include "eerelay/power.hpp"

using namespace eerelay;

TEST_CASE("frozen hand-evaluated total at K=32, M=128, 1 W") {
    SystemConfig cfg;
    const PowerBreakdown pb = total_power(cfg, 32, 128, 1.0);
    // independently evaluated term by term at 30 decimal digits
    CHECK(pb.p_pa == doctest::Approx(95.756407977207977).epsilon(1e-9));
    CHECK(pb.p_tc == doctest::Approx(159.486).epsilon(1e-9));
    CHECK(pb.p_sig == doctest::Approx(25.95437037037037).epsilon(1e-9));
    CHECK(pb.p_fix == doctest::Approx(18.0));
    CHECK(pb.p_tot == doctest::Approx(299.19677834757835).epsilon(1e-9));
    CHECK(pb.p_tot ==
          doctest::Approx(pb.p_pa + pb.p_fix + pb.p_tc + pb.p_sig).epsilon(1e-14));
}

TEST_CASE("prelog zero leaves only the pilot PA term") {
    SystemConfig cfg;
    cfg.coherence_bandwidth_bc = 64.0;  // T = Bc*Tc = 0.64... pick T = 2K
    cfg.coherence_time_tc = 1.0;        // T = 64 symbols, K = 32 -> 2K = T
    const PowerBreakdown pb = total_power(cfg, 32, 128, 5.0);
    const double pilot_only =
        (2.0 * 32 * 64.0 / 64.0) * cfg.pilot_power_w / cfg.pa_eff_device_eta;
    CHECK(pb.p_pa == doctest::Approx(pilot_only).epsilon(1e-12));
}

TEST_CASE("antenna increment costs exactly P_R") {
    SystemConfig cfg;
    for (int m : {64, 100, 127}) {
        const double d = total_power(cfg, 32, m + 1, 2.0).p_tc - total_power(cfg, 32, m, 2.0).p_tc;
        CHECK(d == doctest::Approx(cfg.p_relay_per_antenna).epsilon(1e-12));
    }
}

TEST_CASE("P_tot strictly increasing in M with slope at least P_R") {
    SystemConfig cfg;
    int prev_m = 17;
    double prev = total_power(cfg, 16, prev_m, 1.0).p_tot;
    for (int m = 18; m <= 128; m += 5) {
        const double cur = total_power(cfg, 16, m, 1.0).p_tot;
        CHECK(cur - prev >= cfg.p_relay_per_antenna * (m - prev_m) - 1e-9);
        prev = cur;
        prev_m = m;
    }
}

TEST_CASE("P_tot affine in relay power with the PA slope") {
    SystemConfig cfg;
    const int k = 24, m = 96;
    const double slope = 0.5 / cfg.pa_eff_relay_eta * rate_prelog(cfg, k);
    const double base = total_power(cfg, k, m, 0.0).p_tot;
    for (double p : {0.5, 2.0, 20.0, 90.0}) {
        CHECK(total_power(cfg, k, m, p).p_tot == doctest::Approx(base + slope * p).epsilon(1e-12));
    }
}

TEST_CASE("P_TC and P_SIG polynomial in M: second difference vanishes") {
    SystemConfig cfg;
    for (int m : {40, 80, 120}) {
        const double a = total_power(cfg, 20, m - 1, 1.0).p_sig;
        const double b = total_power(cfg, 20, m, 1.0).p_sig;
        const double c = total_power(cfg, 20, m + 1, 1.0).p_sig;
        CHECK(a + c - 2 * b == doctest::Approx(0.0).epsilon(1e-9));
    }
}

TEST_CASE("affine-in-M split matches total_power exactly") {
    SystemConfig cfg;
    const auto [p_fixm, p_cm] = power_affine_in_m(cfg, 31, 4.57);
    for (int m : {32, 81, 128})
        CHECK(total_power(cfg, 31, m, 4.57).p_tot ==
              doctest::Approx(p_fixm + p_cm * m).epsilon(1e-13));
}

TEST_CASE("domain errors") {
    SystemConfig cfg;
    CHECK_THROWS_AS(total_power(cfg, 32, 31, 1.0), domain_error);  // M < K
    CHECK_THROWS_AS(total_power(cfg, 16, 32, -1.0), domain_error);
    cfg.coherence_bandwidth_bc = 30.0;  // T = 30 < 2K
    cfg.coherence_time_tc = 1.0;
    CHECK_THROWS_AS(total_power(cfg, 32, 64, 1.0), domain_error);
}
