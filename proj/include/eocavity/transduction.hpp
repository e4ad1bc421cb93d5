#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eocavity/device.hpp"
#include "eocavity/microwave.hpp"

namespace eocavity {

// Rates in ordinary Hz; every expression below is a ratio of rates, so the
// frequency convention cancels.
struct TransductionParams {
    double N_p = 0.0;          // pump photon occupation
    double g0 = 0.0;           // Hz
    double kappa_o = 0.0;      // Hz
    double kappa_o_ext = 0.0;  // Hz
    double kappa_m = 0.0;      // Hz
    double kappa_m_ext = 0.0;  // Hz
    double omega_m = 0.0;      // Hz, microwave mode frequency
    double delta_op = 0.0;     // Hz, pump-to-output mode spacing
};

struct NmsParams {
    double n_m = 0.0;      // microwave drive photon count
    double g0 = 0.0;       // Hz
    double kappa_o = 0.0;  // Hz
    double delta = 0.0;    // Hz, detuning of delta_op from omega_m
};

// Long-form map: magnitude[i*axis2.size() + j] belongs to
// (axis1[i], axis2[j]). flagged marks axis points where the optical solve
// failed (magnitudes there are zero).
struct SweepResult {
    std::vector<double> axis1;
    std::vector<double> axis2;
    std::vector<double> magnitude;
    std::vector<std::uint8_t> flagged;
    std::string axis1_name;
    std::string axis2_name;
};

enum class SweepAxis { air_gap, wavelength };

// C = 4 N_p g0^2 / (kappa_o kappa_m).
double cooperativity(double N_p, double g0, double kappa_o, double kappa_m);

// eta_peak = 4C/(1+C)^2 * (kappa_o_ext/kappa_o) * (kappa_m_ext/kappa_m).
double peak_efficiency(double C, double ratio_o, double ratio_m);

// eta(w) = eta_peak (1+C)^2 / |C + (1 + 2i(delta_op - w)/kappa_o)
//                                 (1 + 2i(omega_m - w)/kappa_m)|^2.
std::vector<double> efficiency_spectrum(const TransductionParams& params,
                                        const std::vector<double>& omega_hz);
double efficiency_at(const TransductionParams& params, double omega_hz);

// Steady-state pump occupation from incident power:
// N_p = 4 k_ext (mode_match P) / (hbar w_p (k_o^2 + 4 delta^2)), rates angular.
double pump_occupation(double P_in, double mode_match, double kappa_o,
                       double kappa_o_ext, double omega_p_hz, double detuning_hz);

// Hybridized-mode transmission: two Lorentzians of width kappa_o at
// +-sqrt(delta^2 + 4 n_m g0^2)/2 around the mean, weighted by the squared
// eigenvector components of the 2x2 coupled-mode matrix.
std::vector<double> nms_spectrum(const NmsParams& params,
                                 const std::vector<double>& detuning_hz);
double nms_splitting(const NmsParams& params);
// Eigenvector weights (low-frequency peak, high-frequency peak).
std::pair<double, double> nms_weights(const NmsParams& params);

// Transduction amplitude map over an axis (air gap or laser wavelength) and a
// drive-frequency range. At each axis point the pump lock is emulated, the
// two adjacent longitudinal neighbors provide delta_op branches, and each
// (neighbor, microwave mode) pair contributes sqrt(eta) from the coupled-mode
// lineshape. Columns are independent; via threads they are computed in
// parallel with a deterministic assembly. The convenience overload models the
// device's two standard microwave modes (1,1,1) and (1,3,1).
SweepResult sweep_triple_resonance(const DeviceFixture& device,
                                   const std::vector<MicrowaveMode>& mw_modes,
                                   SweepAxis axis,
                                   double axis_lo, double axis_hi, int axis_points,
                                   double drive_lo, double drive_hi, int drive_points,
                                   int threads = 1);
SweepResult sweep_triple_resonance(const DeviceFixture& device, SweepAxis axis,
                                   double axis_lo, double axis_hi, int axis_points,
                                   double drive_lo, double drive_hi, int drive_points,
                                   int threads = 1);

// Air gap at which the locked pump mode's upper-neighbor spacing equals the
// target microwave mode frequency to better than 1 kHz. Stage 1 bisects the
// locked-manifold spacing staircase; stage 2 polishes with an unlocked secant
// iteration inside the final lock branch.
double tune_triple_resonance(const DeviceFixture& device, const MicrowaveMode& target);

// Pump-lock manifold spacing at a given air gap: locks the pump to the laser,
// returns (locked air gap, pump frequency, spacing to upper neighbor).
struct LockedSpacing {
    double air_gap = 0.0;
    double pump_freq = 0.0;
    double delta_up = 0.0;
    double delta_down = 0.0;
};
LockedSpacing locked_spacing(const DeviceFixture& device, double air_gap);

}  // namespace eocavity
