#include <cmath>

#include "doctest.h"
#include "eocavity/errors.hpp"
#include "eocavity/noise.hpp"

using namespace eocavity;

TEST_CASE("thermal occupation at room temperature") {
    const double n = thermal_occupation(300.0, 9.44e9);
    CHECK(n > 655.0);
    CHECK(n < 670.0);
    // Rayleigh-Jeans scaling in both arguments.
    CHECK(thermal_occupation(150.0, 9.44e9) == doctest::Approx(n / 2.0).epsilon(1e-12));
    CHECK(thermal_occupation(300.0, 2.0 * 9.44e9) == doctest::Approx(n / 2.0).epsilon(1e-12));
    CHECK_THROWS_AS(thermal_occupation(-1.0, 9.44e9), ConfigError);
    CHECK_THROWS_AS(thermal_occupation(300.0, 0.0), ConfigError);
}

TEST_CASE("thermal peak clears the shot-noise floor by about 15 dB") {
    const double db = thermal_to_shot_ratio_db(0.017, 660.0, 0.683);
    CHECK(db > 14.0);
    CHECK(db < 16.0);
    CHECK(db ==
          doctest::Approx(10.0 * std::log10(4.0 * 0.017 * 660.0 * 0.683)).epsilon(1e-12));
}

TEST_CASE("added noise referred to the input") {
    const double eta = 0.00606, ratio = 7.16 / 50.0, n_th = 660.0;
    const auto [n_qu, n_thermal] = added_noise(eta, ratio, n_th);
    CHECK(n_qu == doctest::Approx(1.0 / eta).epsilon(1e-12));
    CHECK(n_thermal == doctest::Approx(ratio * n_th).epsilon(1e-12));
    CHECK_THROWS_AS(added_noise(0.0, ratio, n_th), ModelError);
}

TEST_CASE("noise temperature and figure definitions") {
    const auto [t_n, nf] = noise_temperature(300.0, 165.0, 94.5, 660.0);
    CHECK(t_n == doctest::Approx(300.0 * (165.0 + 94.5) / 660.0).epsilon(1e-12));
    CHECK(nf == doctest::Approx(10.0 * std::log10(1.0 + t_n / 290.0)).epsilon(1e-12));
}

TEST_CASE("antenna coupling optimum reproduces the device operating point") {
    // Characterized device rates.
    const double N_p = 6.5e10, g0 = 1.5, kappa_o = 4.1e6, kappa_o_ext = 2.8e6;
    const double kappa_m_int = 9.302e9 / 1300.0;
    const auto opt = optimize_antenna_coupling(N_p, g0, kappa_o, kappa_o_ext,
                                               kappa_m_int, 300.0, 9.302e9);
    CHECK(opt.kappa_m_ext > 35e6);
    CHECK(opt.kappa_m_ext < 65e6);
    CHECK(opt.T_n > 90.0);
    CHECK(opt.T_n < 135.0);
    CHECK(opt.noise_figure_db > 1.1);
    CHECK(opt.noise_figure_db < 1.7);

    // Local optimality: nudging the coupling either way raises T_n.
    const double n_th = thermal_occupation(300.0, 9.302e9);
    auto t_n_of = [&](double ke) {
        const double km = kappa_m_int + ke;
        const double C = 4.0 * N_p * g0 * g0 / (kappa_o * km);
        const double eta = 4.0 * C / ((1.0 + C) * (1.0 + C)) * (kappa_o_ext / kappa_o) *
                           (ke / km);
        const auto [nq, nt] = added_noise(eta, kappa_m_int / ke, n_th);
        return noise_temperature(300.0, nq, nt, n_th).first;
    };
    CHECK(t_n_of(opt.kappa_m_ext) == doctest::Approx(opt.T_n).epsilon(1e-9));
    CHECK(t_n_of(opt.kappa_m_ext * 1.02) > opt.T_n);
    CHECK(t_n_of(opt.kappa_m_ext / 1.02) > opt.T_n);

    // At the optimum the two added-noise channels are comparable.
    CHECK(std::abs(std::log10(opt.n_added_qu / opt.n_added_th)) < 0.5);
}

TEST_CASE("full budget assembly is internally consistent") {
    const double C = 0.017, eta = 0.00716;
    const double kappa_o = 4.1e6, kappa_o_ext = 2.8e6;
    const double kappa_m_int = 7.156e6, kappa_m_ext = 1.385e6;
    const auto b = noise_budget(C, eta, kappa_o_ext, kappa_o, kappa_m_int,
                                kappa_m_ext, 300.0, 9.302e9);
    CHECK(b.n_th == doctest::Approx(thermal_occupation(300.0, 9.302e9)).epsilon(1e-12));
    CHECK(b.snr_db ==
          doctest::Approx(thermal_to_shot_ratio_db(C, b.n_th, kappa_o_ext / kappa_o))
              .epsilon(1e-12));
    CHECK(b.n_added_qu == doctest::Approx(1.0 / eta).epsilon(1e-12));
    CHECK(b.n_added_th ==
          doctest::Approx(kappa_m_int / kappa_m_ext * b.n_th).epsilon(1e-12));
    const auto [t_n, nf] = noise_temperature(300.0, b.n_added_qu, b.n_added_th, b.n_th);
    CHECK(b.T_n == doctest::Approx(t_n).epsilon(1e-12));
    CHECK(b.noise_figure_db == doctest::Approx(nf).epsilon(1e-12));
}
