#pragma once

#include <vector>

#include "eocavity/device.hpp"
#include "eocavity/microwave.hpp"
#include "eocavity/optical_cavity.hpp"

namespace eocavity {

struct CouplingInput {
    Material material;
    MicrowaveMode microwave_mode;
    OpticalMode pump_mode;
    OpticalMode output_mode;
    double L_LN = 0.0;   // m
    double L_air = 0.0;  // m
};

struct CouplingResult {
    double g0 = 0.0;                // Hz (magnitude)
    double overlap_integral = 0.0;  // m, signed value of the axial integral
    double phase_mismatch = 0.0;    // rad, n * dk * L_LN
};

// Quasi-1-D coupling rate:
//   g0 = r33 (n^2/sqrt(eps_z)) sqrt(hbar w_m w_p w_o / (8 eps0 V_m Lp_eff Lo_eff))
//        * integral over [0, L_LN] of psi_m(x) * cos(n dk x)/2 dx,
// with dk the vacuum wave-vector difference w_m/c and x = 0 at the back
// (high-reflectivity) face anchoring the optical standing wave. The integral
// runs adaptive Simpson on the linearly interpolated psi_m samples to 1e-10
// relative.
CouplingResult g0_quasi_1d(const CouplingInput& input);

// Scalar field sampled on a uniform 3-D grid over a box, x fastest axis last
// (values[(ix*ny + iy)*nz + iz]).
struct SampledField {
    int nx = 0, ny = 0, nz = 0;
    double x0 = 0, x1 = 0, y0 = 0, y1 = 0, z0 = 0, z1 = 0;
    std::vector<double> values;

    void validate() const;
    bool congruent(const SampledField& other) const;
};

// General triple-overlap coupling rate on congruent grids:
//   g0 = r33 (n^2/sqrt(eps_z)) sqrt(hbar w_m w_p w_o / (8 eps0 V_m V_p V_o))
//        * integral of psi_m psi_p psi_o dV      (trapezoid quadrature)
// Each psi is normalized to unit peak; the r33-based prefactor is shared with
// g0_quasi_1d so both forms use one conversion constant.
double g0_general(const Material& material,
                  const SampledField& psi_m, const SampledField& psi_p,
                  const SampledField& psi_o,
                  double f_m, double f_p, double f_o,
                  double V_m, double V_p, double V_o);

// g0 = delta_nms / (2 sqrt(n_m)): inverts the normal-mode splitting of a
// strongly driven microwave mode into the single-photon rate.
double calibrate_g0_from_nms(double delta_nms, double n_m);

}  // namespace eocavity
