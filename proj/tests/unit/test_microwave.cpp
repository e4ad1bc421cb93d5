#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "eocavity/constants.hpp"
#include "eocavity/device.hpp"
#include "eocavity/errors.hpp"
#include "eocavity/microwave.hpp"

using namespace eocavity;

TEST_CASE("fundamental dielectric-resonator frequencies land near the device band") {
    const DeviceFixture d = reference_device();
    const double f131 = mode_frequency(d.slab, d.material, 1, 3, 1);
    const double f111 = mode_frequency(d.slab, d.material, 1, 1, 1);
    CHECK(f131 > 0.8 * 9.44e9);
    CHECK(f131 < 1.2 * 9.44e9);
    CHECK(f111 > 0.75 * 6e9);
    CHECK(f111 < 1.25 * 6e9);
    CHECK(f111 < f131);
}

TEST_CASE("mode frequency grows with every antinode count") {
    const DeviceFixture d = reference_device();
    const double base = mode_frequency(d.slab, d.material, 1, 1, 1);
    CHECK(mode_frequency(d.slab, d.material, 2, 1, 1) > base);
    CHECK(mode_frequency(d.slab, d.material, 1, 2, 1) > base);
    CHECK(mode_frequency(d.slab, d.material, 1, 1, 2) > base);
}

TEST_CASE("scalar effective permittivity override reproduces the isotropic formula") {
    const DeviceFixture d = reference_device();
    const double eps = 28.0;
    const double f = mode_frequency(d.slab, d.material, 1, 3, 1, eps);
    const double kx = 1.0 / d.slab.len_x;
    const double ky = 3.0 / d.slab.len_y;
    const double kz = 1.0 / d.slab.len_z;
    const double expected =
        constants.c / 2.0 * std::sqrt((kx * kx + ky * ky + kz * kz) / eps);
    CHECK(f == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("mode volume sits in the device's tens-of-mm^3 range and shrinks with m") {
    const DeviceFixture d = reference_device();
    const double v131 = mode_volume(d.slab, d.material, 1, 3, 1);
    CHECK(v131 > 50e-9);
    CHECK(v131 < 200e-9);
    double prev = mode_volume(d.slab, d.material, 1, 1, 1);
    for (int m = 2; m <= 5; ++m) {
        const double v = mode_volume(d.slab, d.material, 1, m, 1);
        CHECK(v < prev);
        prev = v;
    }
    // Bounded below by V/8 (fully asymmetric) and above by V/4 (degenerate).
    const double V = d.slab.volume();
    CHECK(v131 >= V / 8.0);
    CHECK(v131 <= V / 4.0);
}

TEST_CASE("axial profile peaks at one for a centered beam and vanishes on a node") {
    const DeviceFixture d = reference_device();
    const double yc = d.slab.len_y / 2.0, zc = d.slab.len_z / 2.0;
    const auto prof = axial_profile(d.slab, 1, 3, 1, yc, zc, 4097);
    REQUIRE(prof.size() == 4097);
    double peak = 0.0;
    for (double v : prof) peak = std::max(peak, std::abs(v));
    CHECK(peak == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(prof.front() == doctest::Approx(0.0));
    CHECK(prof.back() == doctest::Approx(0.0).epsilon(1e-9));

    // Transverse node of the m = 3 pattern: y0 = Ly/3.
    const auto node = axial_profile(d.slab, 1, 3, 1, d.slab.len_y / 3.0, zc, 257);
    double mx = 0.0;
    for (double v : node) mx = std::max(mx, std::abs(v));
    CHECK(mx < 1e-9);

    // Off-center beam couples more weakly than the centered one.
    const auto off = axial_profile(d.slab, 1, 3, 1, yc + d.slab.len_y / 8.0, zc, 257);
    double mo = 0.0;
    for (double v : off) mo = std::max(mo, std::abs(v));
    CHECK(mo < 1.0);
    CHECK(mo > 0.0);
}

TEST_CASE("linewidths split into intrinsic and antenna parts") {
    const auto lw = linewidths(9.44e9, 1300.0, 1.38e6);
    CHECK(lw.kappa_m_int == doctest::Approx(9.44e9 / 1300.0));
    CHECK(lw.kappa_m == doctest::Approx(lw.kappa_m_int + 1.38e6));
}

TEST_CASE("full mode record is self-consistent") {
    const DeviceFixture d = reference_device();
    const auto m = make_microwave_mode(d, 1, 3, 1);
    CHECK(m.indices[0] == 1);
    CHECK(m.indices[1] == 3);
    CHECK(m.indices[2] == 1);
    CHECK(m.freq == doctest::Approx(mode_frequency(d.slab, d.material, 1, 3, 1)));
    CHECK(m.V_m == doctest::Approx(mode_volume(d.slab, d.material, 1, 3, 1)));
    CHECK(m.kappa_m_int == doctest::Approx(m.freq / d.q_int));
    CHECK(m.kappa_m == doctest::Approx(m.kappa_m_int + d.kappa_m_ext));
    CHECK(m.psi_axial.size() == 4097);
}

TEST_CASE("invalid microwave inputs are rejected") {
    const DeviceFixture d = reference_device();
    CHECK_THROWS_AS(make_microwave_mode(d, 0, 1, 1), ConfigError);
    CHECK_THROWS_AS(make_microwave_mode(d, 1, -3, 1), ConfigError);
    CHECK_THROWS_AS(axial_profile(d.slab, 1, 1, 1, -1e-3, d.slab.len_z / 2), ConfigError);
    CHECK_THROWS_AS(axial_profile(d.slab, 1, 1, 1, d.slab.len_y / 2, 2.0), ConfigError);
    CHECK_THROWS_AS(axial_profile(d.slab, 1, 1, 1, 1e-3, 1e-3, 1), ConfigError);
    CHECK_THROWS_AS(linewidths(9e9, 0.0, 1e6), ConfigError);
}
