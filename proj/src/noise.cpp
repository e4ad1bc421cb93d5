#include "eocavity/noise.hpp"

#include <cmath>
#include <sstream>

#include "eocavity/constants.hpp"
#include "eocavity/errors.hpp"
#include "eocavity/transduction.hpp"

namespace eocavity {

double thermal_occupation(double T, double f_m_hz) {
    if (!(T > 0.0 && f_m_hz > 0.0))
        throw ConfigError("thermal_occupation: temperature and frequency must be positive");
    return constants.k_B * T / (constants.hbar * to_angular(f_m_hz));
}

double thermal_to_shot_ratio_db(double C, double n_th, double ratio_o) {
    if (!(C >= 0.0 && n_th >= 0.0 && ratio_o >= 0.0))
        throw ConfigError("thermal_to_shot_ratio: inputs must be >= 0");
    const double arg = 4.0 * C * n_th * ratio_o;
    if (!(arg > 0.0)) throw ModelError("thermal_to_shot_ratio: ratio is zero, undefined in dB");
    return 10.0 * std::log10(arg);
}

std::pair<double, double> added_noise(double eta, double ratio_int_ext, double n_th) {
    if (!(eta > 0.0)) throw ModelError("added_noise: efficiency must be positive");
    if (!(ratio_int_ext >= 0.0 && n_th >= 0.0))
        throw ConfigError("added_noise: ratio and occupation must be >= 0");
    return {1.0 / eta, ratio_int_ext * n_th};
}

std::pair<double, double> noise_temperature(double T, double n_added_qu,
                                            double n_added_th, double n_th) {
    if (!(n_th > 0.0)) throw ConfigError("noise_temperature: n_th must be positive");
    const double T_n = T * (n_added_qu + n_added_th) / n_th;
    const double nf = 10.0 * std::log10(1.0 + T_n / 290.0);
    return {T_n, nf};
}

namespace {

struct NoisePoint {
    double T_n = 0.0;
    double C = 0.0;
    double eta = 0.0;
    double n_qu = 0.0;
    double n_th_add = 0.0;
};

NoisePoint evaluate_point(double N_p, double g0, double kappa_o, double kappa_o_ext,
                          double kappa_m_int, double T, double n_th,
                          double kappa_m_ext) {
    NoisePoint pt;
    const double kappa_m = kappa_m_int + kappa_m_ext;
    pt.C = cooperativity(N_p, g0, kappa_o, kappa_m);
    pt.eta = peak_efficiency(pt.C, kappa_o_ext / kappa_o, kappa_m_ext / kappa_m);
    const auto [n_qu, n_th_add] = added_noise(pt.eta, kappa_m_int / kappa_m_ext, n_th);
    pt.n_qu = n_qu;
    pt.n_th_add = n_th_add;
    pt.T_n = noise_temperature(T, n_qu, n_th_add, n_th).first;
    return pt;
}

}  // namespace

CouplingOptimum optimize_antenna_coupling(double N_p, double g0, double kappa_o,
                                          double kappa_o_ext, double kappa_m_int,
                                          double T, double f_m_hz) {
    if (!(N_p > 0.0 && g0 > 0.0 && kappa_o > 0.0 && kappa_o_ext > 0.0 &&
          kappa_m_int > 0.0 && T > 0.0 && f_m_hz > 0.0))
        throw ConfigError("optimize_antenna_coupling: all base parameters must be positive");

    const double n_th = thermal_occupation(T, f_m_hz);
    auto objective = [&](double log_k) {
        return evaluate_point(N_p, g0, kappa_o, kappa_o_ext, kappa_m_int, T, n_th,
                              std::exp(log_k))
            .T_n;
    };

    // Golden-section on log kappa_m_ext over [kappa_m_int/100, 1e4 kappa_m_int].
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = std::log(kappa_m_int / 100.0);
    double b = std::log(kappa_m_int * 1e4);
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    for (int it = 0; it < 400 && (b - a) > 1e-6; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
        }
    }
    const double log_opt = 0.5 * (a + b);
    const double k_opt = std::exp(log_opt);

    // Local-optimality check: both log-space neighbors must be higher.
    const double f_opt = objective(log_opt);
    const double step = 1e-4;
    if (!(objective(log_opt - step) >= f_opt && objective(log_opt + step) >= f_opt)) {
        std::ostringstream msg;
        msg << "optimize_antenna_coupling: result failed the local-optimality check in "
            << "kappa_m_ext bracket [" << std::exp(a) << ", " << std::exp(b) << "] Hz";
        throw ModelError(msg.str());
    }

    const NoisePoint pt = evaluate_point(N_p, g0, kappa_o, kappa_o_ext, kappa_m_int, T,
                                         n_th, k_opt);
    CouplingOptimum out;
    out.kappa_m_ext = k_opt;
    out.T_n = pt.T_n;
    out.noise_figure_db = noise_temperature(T, pt.n_qu, pt.n_th_add, n_th).second;
    out.C = pt.C;
    out.eta_peak = pt.eta;
    out.n_added_qu = pt.n_qu;
    out.n_added_th = pt.n_th_add;
    return out;
}

NoiseBudget noise_budget(double C, double eta, double kappa_o_ext, double kappa_o,
                         double kappa_m_int, double kappa_m_ext, double T, double f_m_hz) {
    NoiseBudget nb;
    nb.n_th = thermal_occupation(T, f_m_hz);
    nb.snr_db = thermal_to_shot_ratio_db(C, nb.n_th, kappa_o_ext / kappa_o);
    const auto [n_qu, n_th_add] = added_noise(eta, kappa_m_int / kappa_m_ext, nb.n_th);
    nb.n_added_qu = n_qu;
    nb.n_added_th = n_th_add;
    const auto [t_n, nf] = noise_temperature(T, n_qu, n_th_add, nb.n_th);
    nb.T_n = t_n;
    nb.noise_figure_db = nf;
    return nb;
}

}  // namespace eocavity
