#pragma once

#include <array>
#include <optional>
#include <vector>

#include "eocavity/device.hpp"

namespace eocavity {

// Microwave slab mode under the separable magnetic-wall ansatz. indices are
// antinode counts (l, m, p) along (x, y, z); psi_axial samples the dominant
// (z) field component along the optical path, normalized to the mode's unit
// 3-D peak.
struct MicrowaveMode {
    std::array<int, 3> indices{1, 1, 1};
    double freq = 0.0;        // Hz
    double V_m = 0.0;         // m^3
    double Q_int = 0.0;
    double kappa_m = 0.0;     // Hz total
    double kappa_m_int = 0.0; // Hz
    double kappa_m_ext = 0.0; // Hz
    std::vector<double> psi_axial;  // uniform samples over [0, len_x]
};

// Resonance frequency of the separable anisotropic ansatz:
//   f = (c/2) * sqrt((l/Lx)^2/eps_x + (m/Ly)^2/eps_z + (p/Lz)^2/eps_y).
// Derivatives along y generate the z-polarized field component and vice
// versa, so the y and z wave-vector components are weighted by eps_z and
// eps_y; the propagation axis x is weighted by the ordinary eps_x. An
// explicit scalar eps_eff overrides the tensor weighting for calibration.
double mode_frequency(const SlabGeometry& geometry, const Material& material,
                      int l, int m, int p,
                      std::optional<double> eps_eff = std::nullopt);

// V_m = integral of eps|E|^2 over the slab divided by its peak density.
// Closed form for the ansatz: (V/8) * (1 + min(a,b)/max(a,b)) with
// a = (m*pi/Ly)^2/eps_z and b = (p*pi/Lz)^2/eps_y.
double mode_volume(const SlabGeometry& geometry, const Material& material,
                   int l, int m, int p);

// Dominant field component along the optical path at transverse beam position
// (y0, z0), sampled uniformly on [0, len_x] (both endpoints included),
// normalized to the mode's unit peak over the whole slab:
//   psi(x) = sin(l*pi*x/Lx) * sin(m*pi*y0/Ly) * sin(p*pi*z0/Lz).
std::vector<double> axial_profile(const SlabGeometry& geometry, int l, int m, int p,
                                  double y0, double z0, int samples = 4097);

struct MicrowaveLinewidths {
    double kappa_m = 0.0;      // Hz
    double kappa_m_int = 0.0;  // Hz
};

// kappa_m_int = freq / Q_int; kappa_m = kappa_m_int + kappa_m_ext.
MicrowaveLinewidths linewidths(double freq, double q_int, double kappa_m_ext);

// Assembles the full mode record for a device fixture.
MicrowaveMode make_microwave_mode(const DeviceFixture& device, int l, int m, int p,
                                  std::optional<double> eps_eff = std::nullopt,
                                  int samples = 4097);

}  // namespace eocavity
