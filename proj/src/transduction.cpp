#include "eocavity/transduction.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <thread>

#include "eocavity/constants.hpp"
#include "eocavity/eo_coupling.hpp"
#include "eocavity/errors.hpp"
#include "eocavity/optical_cavity.hpp"

namespace eocavity {

double cooperativity(double N_p, double g0, double kappa_o, double kappa_m) {
    if (!(kappa_o > 0.0 && kappa_m > 0.0))
        throw ConfigError("cooperativity: linewidths must be positive");
    if (!(N_p >= 0.0)) throw ConfigError("cooperativity: N_p must be >= 0");
    return 4.0 * N_p * g0 * g0 / (kappa_o * kappa_m);
}

double peak_efficiency(double C, double ratio_o, double ratio_m) {
    if (!(ratio_o >= 0.0 && ratio_o <= 1.0 && ratio_m >= 0.0 && ratio_m <= 1.0))
        throw ConfigError("peak_efficiency: coupling ratios must lie in [0, 1]");
    const double onepc = 1.0 + C;
    return 4.0 * C / (onepc * onepc) * ratio_o * ratio_m;
}

double efficiency_at(const TransductionParams& p, double omega_hz) {
    const double C = cooperativity(p.N_p, p.g0, p.kappa_o, p.kappa_m);
    const double eta_peak =
        peak_efficiency(C, p.kappa_o_ext / p.kappa_o, p.kappa_m_ext / p.kappa_m);
    const std::complex<double> bracket_o(1.0, 2.0 * (p.delta_op - omega_hz) / p.kappa_o);
    const std::complex<double> bracket_m(1.0, 2.0 * (p.omega_m - omega_hz) / p.kappa_m);
    const double onepc = 1.0 + C;
    const double denom = std::norm(C + bracket_o * bracket_m);
    return eta_peak * onepc * onepc / denom;
}

std::vector<double> efficiency_spectrum(const TransductionParams& params,
                                        const std::vector<double>& omega_hz) {
    if (omega_hz.empty()) throw ConfigError("efficiency_spectrum: empty frequency grid");
    std::vector<double> eta(omega_hz.size());
    for (std::size_t i = 0; i < omega_hz.size(); ++i) eta[i] = efficiency_at(params, omega_hz[i]);
    return eta;
}

double pump_occupation(double P_in, double mode_match, double kappa_o,
                       double kappa_o_ext, double omega_p_hz, double detuning_hz) {
    if (!(P_in >= 0.0)) throw ConfigError("pump_occupation: power must be >= 0");
    if (!(mode_match >= 0.0 && mode_match <= 1.0))
        throw ConfigError("pump_occupation: mode_match must lie in [0, 1]");
    if (!(kappa_o > 0.0 && kappa_o_ext > 0.0 && omega_p_hz > 0.0))
        throw ConfigError("pump_occupation: rates and pump frequency must be positive");
    // Photon flux and decay rates are physical here, so the formula needs
    // angular rates; the result is a pure occupation number.
    const double k_o = to_angular(kappa_o);
    const double k_ext = to_angular(kappa_o_ext);
    const double delta = to_angular(detuning_hz);
    const double w_p = to_angular(omega_p_hz);
    const double flux = mode_match * P_in / (constants.hbar * w_p);
    return 4.0 * k_ext * flux / (k_o * k_o + 4.0 * delta * delta);
}

double nms_splitting(const NmsParams& p) {
    if (!(p.n_m >= 0.0)) throw ConfigError("nms: n_m must be >= 0");
    return std::sqrt(p.delta * p.delta + 4.0 * p.n_m * p.g0 * p.g0);
}

std::pair<double, double> nms_weights(const NmsParams& p) {
    // 2x2 coupled-mode eigenvectors: mixing angle tan(2theta) = 2 sqrt(n_m) g0 / delta.
    const double coupling = 2.0 * std::sqrt(std::max(p.n_m, 0.0)) * p.g0;
    if (coupling == 0.0 && p.delta == 0.0) return {0.5, 0.5};
    const double theta = 0.5 * std::atan2(coupling, p.delta);
    const double s = std::sin(theta), c = std::cos(theta);
    return {c * c, s * s};  // (low-frequency peak, high-frequency peak)
}

std::vector<double> nms_spectrum(const NmsParams& params,
                                 const std::vector<double>& detuning_hz) {
    if (detuning_hz.empty()) throw ConfigError("nms_spectrum: empty detuning grid");
    const double split = nms_splitting(params);
    const auto [w_lo, w_hi] = nms_weights(params);
    const double half = params.kappa_o / 2.0;
    std::vector<double> out(detuning_hz.size());
    for (std::size_t i = 0; i < detuning_hz.size(); ++i) {
        const double d = detuning_hz[i];
        const double dl = d + split / 2.0;
        const double dh = d - split / 2.0;
        out[i] = w_lo * half * half / (dl * dl + half * half) +
                 w_hi * half * half / (dh * dh + half * half);
    }
    return out;
}

LockedSpacing locked_spacing(const DeviceFixture& device, double air_gap) {
    const double f_laser = constants.c / device.laser_wavelength;
    LockedSpacing out;
    out.air_gap = lock_pump_mode(device, air_gap, f_laser);
    const LayerStack stack = device_stack(device, out.air_gap);
    const double fsr_est = constants.c / (2.0 * stack.optical_path_length());
    const std::vector<OpticalMode> modes = find_resonances(
        stack, device.material, f_laser - 1.6 * fsr_est, f_laser + 1.6 * fsr_est,
        InputSide::back, 0);
    if (modes.size() < 3) throw ModelError("locked_spacing: fewer than three modes around the pump");
    std::size_t pump = 0;
    for (std::size_t i = 1; i < modes.size(); ++i)
        if (std::abs(modes[i].freq - f_laser) < std::abs(modes[pump].freq - f_laser)) pump = i;
    if (pump == 0 || pump + 1 >= modes.size())
        throw ModelError("locked_spacing: pump mode lacks a neighbor in the solve window");
    out.pump_freq = modes[pump].freq;
    out.delta_up = modes[pump + 1].freq - modes[pump].freq;
    out.delta_down = modes[pump].freq - modes[pump - 1].freq;
    return out;
}

namespace {

// Upper-neighbor spacing without locking: pump = nearest mode to the laser.
double unlocked_delta_up(const DeviceFixture& device, double air_gap) {
    const double f_laser = constants.c / device.laser_wavelength;
    const LayerStack stack = device_stack(device, air_gap);
    const double fsr_est = constants.c / (2.0 * stack.optical_path_length());
    const std::vector<OpticalMode> modes = find_resonances(
        stack, device.material, f_laser - 1.6 * fsr_est, f_laser + 1.6 * fsr_est,
        InputSide::back, 0);
    if (modes.size() < 2) throw ModelError("tune: too few modes around the pump");
    std::size_t pump = 0;
    for (std::size_t i = 1; i < modes.size(); ++i)
        if (std::abs(modes[i].freq - f_laser) < std::abs(modes[pump].freq - f_laser)) pump = i;
    if (pump + 1 >= modes.size()) throw ModelError("tune: pump mode lacks an upper neighbor");
    return modes[pump + 1].freq - modes[pump].freq;
}

}  // namespace

double tune_triple_resonance(const DeviceFixture& device, const MicrowaveMode& target) {
    const double f_m = target.freq;
    if (!(f_m > 0.0)) throw ModelError("tune: target frequency must be positive (no bracket exists)");
    // Total optical length sets the mean mode spacing; the air gap bringing
    // the spacing to f_m is near c/(2 f_m) - n L_LN.
    const double g_est = constants.c / (2.0 * f_m) - device.material.n_opt * device.slab.len_x;
    if (!(g_est > 0.0))
        throw ModelError("tune: target frequency implies a non-positive air gap (no bracket)");

    // Stage 1: bisection on the locked-manifold spacing. Locking quantizes
    // the spacing into a staircase (one ~0.5 MHz step per ~0.8 um lock
    // branch), so the bisection runs down to sub-branch bracket width and
    // then picks whichever endpoint branch has the smaller residual: that
    // branch is guaranteed to contain the unlocked root, at most half a
    // branch width from its center.
    auto h_locked = [&](double g) { return locked_spacing(device, g).delta_up - f_m; };
    double g_lo = std::max(0.25 * g_est, 0.2e-3);
    double g_hi = 2.0 * g_est + 1e-3;
    double h_lo = h_locked(g_lo);
    double h_hi = h_locked(g_hi);
    if (!(h_lo > 0.0 && h_hi < 0.0)) {
        std::ostringstream msg;
        msg << "tune: no sign change of the spacing error over the gap bracket ["
            << g_lo * 1e3 << ", " << g_hi * 1e3 << "] mm";
        throw ModelError(msg.str());
    }
    for (int it = 0; it < 200 && g_hi - g_lo >= 2e-10; ++it) {
        const double g_mid = 0.5 * (g_lo + g_hi);
        const double h_mid = h_locked(g_mid);
        if (h_mid > 0.0) {
            g_lo = g_mid;
            h_lo = h_mid;
        } else {
            g_hi = g_mid;
            h_hi = h_mid;
        }
    }
    const double g_branch = std::abs(h_lo) <= std::abs(h_hi) ? g_lo : g_hi;

    // Stage 2: secant polish inside that lock branch, unlocked (the locked
    // staircase is quantized well above the 1 kHz goal). The locked gap is
    // the branch center; the correction stays within half a branch width.
    double g0 = locked_spacing(device, g_branch).air_gap;
    double g1 = g0 + 5e-9;
    double h0 = unlocked_delta_up(device, g0) - f_m;
    double h1 = unlocked_delta_up(device, g1) - f_m;
    for (int it = 0; it < 60; ++it) {
        if (std::abs(h1) < 500.0) return g1;
        if (h1 == h0) break;
        double g2 = g1 - h1 * (g1 - g0) / (h1 - h0);
        const double max_step = 50e-9;
        g2 = std::clamp(g2, g1 - max_step, g1 + max_step);
        g0 = g1, h0 = h1;
        g1 = g2;
        h1 = unlocked_delta_up(device, g1) - f_m;
    }
    if (std::abs(h1) < 1e3) return g1;
    throw ModelError("tune: secant polish did not reach the 1 kHz residual");
}

namespace {

struct SweepColumn {
    std::vector<double> magnitude;
    bool failed = false;
};

SweepColumn sweep_column(const DeviceFixture& device,
                         const std::vector<MicrowaveMode>& mw_modes, SweepAxis axis,
                         double axis_value, const std::vector<double>& drive) {
    SweepColumn col;
    col.magnitude.assign(drive.size(), 0.0);
    try {
        DeviceFixture dev = device;
        double gap = device.air_gap;
        if (axis == SweepAxis::air_gap)
            gap = axis_value;
        else
            dev.laser_wavelength = axis_value;
        const double f_laser = constants.c / dev.laser_wavelength;
        gap = lock_pump_mode(dev, gap, f_laser);
        const LayerStack stack = device_stack(dev, gap);
        const double fsr_est = constants.c / (2.0 * stack.optical_path_length());
        const std::vector<OpticalMode> modes = find_resonances(
            stack, dev.material, f_laser - 1.6 * fsr_est, f_laser + 1.6 * fsr_est,
            InputSide::back, 0);
        if (modes.size() < 3) throw ModelError("sweep: too few optical modes");
        std::size_t pump = 0;
        for (std::size_t i = 1; i < modes.size(); ++i)
            if (std::abs(modes[i].freq - f_laser) < std::abs(modes[pump].freq - f_laser))
                pump = i;
        if (pump == 0 || pump + 1 >= modes.size())
            throw ModelError("sweep: pump lacks neighbors");

        const OpticalMode& pump_mode = modes[pump];
        const double N_p = pump_occupation(dev.laser_power, dev.mode_match,
                                           pump_mode.kappa_o, pump_mode.kappa_o_ext,
                                           f_laser, 0.0);
        // Each adjacent longitudinal neighbor is a candidate output mode with
        // its own pump-output spacing.
        const std::array<std::size_t, 2> neighbors{pump - 1, pump + 1};
        for (std::size_t ni : neighbors) {
            const OpticalMode& out_mode = modes[ni];
            const double delta_op = std::abs(out_mode.freq - pump_mode.freq);
            for (const MicrowaveMode& mw : mw_modes) {
                CouplingInput cin;
                cin.material = dev.material;
                cin.microwave_mode = mw;
                cin.pump_mode = pump_mode;
                cin.output_mode = out_mode;
                cin.L_LN = dev.slab.len_x;
                cin.L_air = gap;
                const CouplingResult cres = g0_quasi_1d(cin);
                TransductionParams tp;
                tp.N_p = N_p;
                tp.g0 = cres.g0;
                tp.kappa_o = pump_mode.kappa_o;
                tp.kappa_o_ext = pump_mode.kappa_o_ext;
                tp.kappa_m = mw.kappa_m;
                tp.kappa_m_ext = mw.kappa_m_ext;
                tp.omega_m = mw.freq;
                tp.delta_op = delta_op;
                for (std::size_t j = 0; j < drive.size(); ++j)
                    col.magnitude[j] += std::sqrt(efficiency_at(tp, drive[j]));
            }
        }
    } catch (const ModelError&) {
        col.failed = true;
        std::fill(col.magnitude.begin(), col.magnitude.end(), 0.0);
    }
    return col;
}

}  // namespace

SweepResult sweep_triple_resonance(const DeviceFixture& device,
                                   const std::vector<MicrowaveMode>& mw_modes,
                                   SweepAxis axis,
                                   double axis_lo, double axis_hi, int axis_points,
                                   double drive_lo, double drive_hi, int drive_points,
                                   int threads) {
    if (axis_points < 2 || drive_points < 2)
        throw ConfigError("sweep: need at least 2 points per axis");
    if (!(axis_hi > axis_lo && drive_hi > drive_lo))
        throw ConfigError("sweep: ranges must be increasing");

    SweepResult result;
    result.axis1_name = axis == SweepAxis::air_gap ? "air_gap_m" : "wavelength_m";
    result.axis2_name = "drive_hz";
    result.axis1.resize(static_cast<std::size_t>(axis_points));
    for (int i = 0; i < axis_points; ++i)
        result.axis1[static_cast<std::size_t>(i)] =
            axis_lo + (axis_hi - axis_lo) * static_cast<double>(i) / (axis_points - 1);
    result.axis2.resize(static_cast<std::size_t>(drive_points));
    for (int j = 0; j < drive_points; ++j)
        result.axis2[static_cast<std::size_t>(j)] =
            drive_lo + (drive_hi - drive_lo) * static_cast<double>(j) / (drive_points - 1);

    result.magnitude.assign(result.axis1.size() * result.axis2.size(), 0.0);
    result.flagged.assign(result.axis1.size(), 0);

    const int nthreads = std::max(1, threads);
    std::vector<SweepColumn> columns(result.axis1.size());
    auto worker = [&](int tid) {
        for (std::size_t i = static_cast<std::size_t>(tid); i < result.axis1.size();
             i += static_cast<std::size_t>(nthreads))
            columns[i] = sweep_column(device, mw_modes, axis, result.axis1[i], result.axis2);
    };
    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
        result.flagged[i] = columns[i].failed ? 1 : 0;
        std::copy(columns[i].magnitude.begin(), columns[i].magnitude.end(),
                  result.magnitude.begin() + static_cast<std::ptrdiff_t>(i * result.axis2.size()));
    }
    return result;
}

SweepResult sweep_triple_resonance(const DeviceFixture& device, SweepAxis axis,
                                   double axis_lo, double axis_hi, int axis_points,
                                   double drive_lo, double drive_hi, int drive_points,
                                   int threads) {
    std::vector<MicrowaveMode> mw_modes;
    mw_modes.push_back(make_microwave_mode(device, 1, 1, 1));
    mw_modes.push_back(make_microwave_mode(device, 1, 3, 1));
    return sweep_triple_resonance(device, mw_modes, axis, axis_lo, axis_hi, axis_points,
                                  drive_lo, drive_hi, drive_points, threads);
}

}  // namespace eocavity
