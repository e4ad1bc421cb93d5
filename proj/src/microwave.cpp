#include "eocavity/microwave.hpp"

#include <algorithm>
#include <cmath>

#include "eocavity/constants.hpp"
#include "eocavity/errors.hpp"

namespace eocavity {

double mode_frequency(const SlabGeometry& geometry, const Material& material,
                      int l, int m, int p, std::optional<double> eps_eff) {
    geometry.validate();
    if (!(l >= 1 && m >= 1 && p >= 1))
        throw ConfigError("mode_frequency: antinode counts must be >= 1");
    const double fx = static_cast<double>(l) / geometry.len_x;
    const double fy = static_cast<double>(m) / geometry.len_y;
    const double fz = static_cast<double>(p) / geometry.len_z;
    double wx, wy, wz;
    if (eps_eff) {
        if (!(*eps_eff >= 1.0)) throw ConfigError("mode_frequency: eps_eff must be >= 1");
        wx = wy = wz = *eps_eff;
    } else {
        wx = material.eps_x;
        wy = material.eps_z;  // y-variation generates the z-polarized component
        wz = material.eps_y;  // z-variation generates the y-polarized component
    }
    return 0.5 * constants.c * std::sqrt(fx * fx / wx + fy * fy / wy + fz * fz / wz);
}

double mode_volume(const SlabGeometry& geometry, const Material& material,
                   int l, int m, int p) {
    geometry.validate();
    if (!(l >= 1 && m >= 1 && p >= 1))
        throw ConfigError("mode_volume: antinode counts must be >= 1");
    const double ky = static_cast<double>(m) * pi / geometry.len_y;
    const double kz = static_cast<double>(p) * pi / geometry.len_z;
    // Energy weights of the two transverse E components of the ansatz
    // (E_z ~ ky/eps_z, E_y ~ kz/eps_y; energy density eps |E|^2).
    const double a = ky * ky / material.eps_z;
    const double b = kz * kz / material.eps_y;
    const double lo = std::min(a, b), hi = std::max(a, b);
    return geometry.volume() / 8.0 * (1.0 + lo / hi);
}

std::vector<double> axial_profile(const SlabGeometry& geometry, int l, int m, int p,
                                  double y0, double z0, int samples) {
    geometry.validate();
    if (!(l >= 1 && m >= 1 && p >= 1))
        throw ConfigError("axial_profile: antinode counts must be >= 1");
    if (!(y0 >= 0.0 && y0 <= geometry.len_y && z0 >= 0.0 && z0 <= geometry.len_z))
        throw ConfigError("axial_profile: beam position outside the slab cross-section");
    if (samples < 2) throw ConfigError("axial_profile: need at least 2 samples");
    const double transverse = std::sin(static_cast<double>(m) * pi * y0 / geometry.len_y) *
                              std::sin(static_cast<double>(p) * pi * z0 / geometry.len_z);
    std::vector<double> psi(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(samples - 1);
        psi[static_cast<std::size_t>(i)] =
            transverse * std::sin(static_cast<double>(l) * pi * x);
    }
    return psi;
}

MicrowaveLinewidths linewidths(double freq, double q_int, double kappa_m_ext) {
    if (!(q_int > 0.0)) throw ConfigError("linewidths: Q_int must be positive");
    if (!(kappa_m_ext >= 0.0)) throw ConfigError("linewidths: kappa_m_ext must be >= 0");
    MicrowaveLinewidths lw;
    lw.kappa_m_int = freq / q_int;
    lw.kappa_m = lw.kappa_m_int + kappa_m_ext;
    return lw;
}

MicrowaveMode make_microwave_mode(const DeviceFixture& device, int l, int m, int p,
                                  std::optional<double> eps_eff, int samples) {
    MicrowaveMode mode;
    mode.indices = {l, m, p};
    mode.freq = mode_frequency(device.slab, device.material, l, m, p, eps_eff);
    mode.V_m = mode_volume(device.slab, device.material, l, m, p);
    mode.Q_int = device.q_int;
    const MicrowaveLinewidths lw = linewidths(mode.freq, device.q_int, device.kappa_m_ext);
    mode.kappa_m = lw.kappa_m;
    mode.kappa_m_int = lw.kappa_m_int;
    mode.kappa_m_ext = device.kappa_m_ext;
    mode.psi_axial = axial_profile(device.slab, l, m, p, device.beam_y, device.beam_z, samples);
    return mode;
}

}  // namespace eocavity
