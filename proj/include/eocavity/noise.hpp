#pragma once

#include <utility>

namespace eocavity {

struct NoiseBudget {
    double n_th = 0.0;             // thermal photons in the microwave mode
    double snr_db = 0.0;           // thermal peak to shot-noise floor, dB
    double n_added_qu = 0.0;       // shot-noise photons referred to input
    double n_added_th = 0.0;       // internal thermal photons referred to input
    double T_n = 0.0;              // K
    double noise_figure_db = 0.0;  // dB re 290 K
};

// n_th = k_B T / (hbar * 2*pi*f_m): Rayleigh-Jeans occupation.
double thermal_occupation(double T, double f_m_hz);

// 10*log10(4 C n_th kappa_o_ext/kappa_o).
double thermal_to_shot_ratio_db(double C, double n_th, double ratio_o);

// (n_added_qu, n_added_th) = (1/eta, (kappa_m_int/kappa_m_ext) * n_th).
std::pair<double, double> added_noise(double eta, double ratio_int_ext, double n_th);

// T_n = T (n_added_qu + n_added_th) / n_th; NF = 10*log10(1 + T_n/290).
std::pair<double, double> noise_temperature(double T, double n_added_qu,
                                            double n_added_th, double n_th);

struct CouplingOptimum {
    double kappa_m_ext = 0.0;  // Hz
    double T_n = 0.0;          // K
    double noise_figure_db = 0.0;
    double C = 0.0;
    double eta_peak = 0.0;
    double n_added_qu = 0.0;
    double n_added_th = 0.0;
};

// Minimizes the receiver noise temperature over the antenna coupling
// kappa_m_ext (holding N_p, g0, kappa_o fixed; C and the peak efficiency
// recompute at each trial). Golden-section search on log kappa_m_ext over
// [kappa_m_int/100, 1e4*kappa_m_int] to 1e-6 relative, with a local-optimality
// check on the result (both neighbors higher); a failed check raises with the
// bracket.
CouplingOptimum optimize_antenna_coupling(double N_p, double g0, double kappa_o,
                                          double kappa_o_ext, double kappa_m_int,
                                          double T, double f_m_hz);

// Full budget at an explicit operating point.
NoiseBudget noise_budget(double C, double eta, double kappa_o_ext, double kappa_o,
                         double kappa_m_int, double kappa_m_ext, double T, double f_m_hz);

}  // namespace eocavity
