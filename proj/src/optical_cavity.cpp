#include "eocavity/optical_cavity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "eocavity/constants.hpp"
#include "eocavity/errors.hpp"

namespace eocavity {

void LayerStack::validate() const {
    if (layers.empty()) throw ConfigError("stack: at least one layer required");
    for (const auto& l : layers) {
        if (!(l.index >= 1.0)) throw ConfigError("stack: layer index must be >= 1");
        if (!(l.thickness >= 0.0)) throw ConfigError("stack: layer thickness must be >= 0");
    }
    if (!(back_mirror_T > 0.0 && back_mirror_T < 1.0 && front_mirror_T > 0.0 &&
          front_mirror_T < 1.0))
        throw ConfigError("stack: mirror transmissions must lie in (0, 1)");
    if (!(excess_loss >= 0.0 && excess_loss < 1.0))
        throw ConfigError("stack: excess loss must lie in [0, 1)");
}

double LayerStack::optical_path_length() const {
    double s = 0.0;
    for (const auto& l : layers) s += l.index * l.thickness;
    return s;
}

double LayerStack::total_thickness() const {
    double s = 0.0;
    for (const auto& l : layers) s += l.thickness;
    return s;
}

double fresnel_reflectivity(double n1, double n2) {
    if (!(n1 >= 1.0 && n2 >= 1.0)) throw ConfigError("fresnel: indices must be >= 1");
    const double r = (n1 - n2) / (n1 + n2);
    return r * r;
}

StackReflection stack_reflectivity(const LayerStack& stack, double wavelength) {
    if (!(wavelength > 0.0)) throw ConfigError("stack_reflectivity: wavelength must be positive");
    if (stack.layers.empty()) throw ConfigError("stack_reflectivity: empty stack");
    const double n_in = stack.layers.front().index;
    const double n_out = stack.layers.back().index;
    using cd = std::complex<double>;
    // Characteristic matrix of the interior films; the first and last layers
    // are the semi-infinite incidence and exit media.
    cd m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;
    for (std::size_t i = 1; i + 1 < stack.layers.size(); ++i) {
        const double n = stack.layers[i].index;
        const double delta = two_pi * n * stack.layers[i].thickness / wavelength;
        const cd a = std::cos(delta);
        const cd b = cd(0.0, std::sin(delta) / n);
        const cd c = cd(0.0, n * std::sin(delta));
        const cd n11 = m11 * a + m12 * c;
        const cd n12 = m11 * b + m12 * a;
        const cd n21 = m21 * a + m22 * c;
        const cd n22 = m21 * b + m22 * a;
        m11 = n11, m12 = n12, m21 = n21, m22 = n22;
    }
    const cd B = m11 + m12 * n_out;
    const cd C = m21 + m22 * n_out;
    const cd r = (n_in * B - C) / (n_in * B + C);
    return StackReflection{r, std::norm(r)};
}

namespace {

// Standing-wave field propagated from the back mirror: E = 0, E' = 1 there;
// (E, E') carried across each interface (both continuous at normal
// incidence). A resonance is E = 0 at the front mirror too.
struct FieldState {
    double E = 0.0;
    double dE = 1.0;
};

FieldState propagate_to_front(const LayerStack& stack, double freq) {
    const double w = to_angular(freq);
    FieldState s;
    for (const auto& layer : stack.layers) {
        const double k = layer.index * w / constants.c;
        const double kd = k * layer.thickness;
        const double c = std::cos(kd);
        const double sn = std::sin(kd);
        const double E = s.E * c + s.dE * sn / k;
        const double dE = -s.E * k * sn + s.dE * c;
        s.E = E;
        s.dE = dE;
    }
    return s;
}

double front_field(const LayerStack& stack, double freq) {
    return propagate_to_front(stack, freq).E;
}

// Constant within each uniform layer: the amplitude of the sinusoidal
// standing wave there.
std::vector<double> layer_envelopes(const LayerStack& stack, double freq) {
    const double w = to_angular(freq);
    std::vector<double> env;
    env.reserve(stack.layers.size());
    FieldState s;
    for (const auto& layer : stack.layers) {
        const double k = layer.index * w / constants.c;
        env.push_back(std::hypot(s.E, s.dE / k));
        const double kd = k * layer.thickness;
        const double c = std::cos(kd);
        const double sn = std::sin(kd);
        const double E = s.E * c + s.dE * sn / k;
        const double dE = -s.E * k * sn + s.dE * c;
        s.E = E;
        s.dE = dE;
    }
    return env;
}

double bisect_resonance(const LayerStack& stack, double f_lo, double f_hi) {
    double g_lo = front_field(stack, f_lo);
    double g_hi = front_field(stack, f_hi);
    if (g_lo == 0.0) return f_lo;
    if (g_hi == 0.0) return f_hi;
    if ((g_lo > 0.0) == (g_hi > 0.0)) {
        std::ostringstream msg;
        msg << "resonance root lost its bracket [" << f_lo << ", " << f_hi << "] Hz";
        throw ModelError(msg.str());
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (f_lo + f_hi);
        if (f_hi - f_lo <= 1e-12 * mid) break;
        const double g_mid = front_field(stack, mid);
        if (g_mid == 0.0) return mid;
        if ((g_mid > 0.0) == (g_lo > 0.0)) {
            f_lo = mid;
            g_lo = g_mid;
        } else {
            f_hi = mid;
            g_hi = g_mid;
        }
    }
    // Secant polish: the bisection bracket is ~1e-12 relative; a few secant
    // steps push the root to machine precision, which the pump lock (1 Hz on
    // a 193 THz carrier) depends on.
    double a = f_lo, b = f_hi;
    double ga = front_field(stack, a), gb = front_field(stack, b);
    for (int it = 0; it < 8 && ga != gb; ++it) {
        const double c = b - gb * (b - a) / (gb - ga);
        if (!(c > 0.0) || !std::isfinite(c)) break;
        const double gc = front_field(stack, c);
        a = b, ga = gb;
        b = c, gb = gc;
        if (gc == 0.0 || std::abs(b - a) < 1e-4) break;
    }
    return b;
}

// All resonance frequencies in [f_lo, f_hi], no decoration.
std::vector<double> resonance_freqs(const LayerStack& stack, double f_lo, double f_hi) {
    const double fsr_est = constants.c / (2.0 * stack.optical_path_length());
    const double step = fsr_est / 20.0;
    std::vector<double> roots;
    double f_prev = f_lo;
    double g_prev = front_field(stack, f_prev);
    const long nsteps = static_cast<long>(std::ceil((f_hi - f_lo) / step));
    for (long i = 1; i <= nsteps; ++i) {
        const double f = std::min(f_lo + static_cast<double>(i) * step, f_hi);
        const double g = front_field(stack, f);
        if (g == 0.0) {
            roots.push_back(f);
        } else if ((g > 0.0) != (g_prev > 0.0)) {
            roots.push_back(bisect_resonance(stack, f_prev, f));
        }
        f_prev = f;
        g_prev = g;
    }
    return roots;
}

std::vector<FieldSample> sample_profile(const LayerStack& stack, double freq, int samples) {
    const double w = to_angular(freq);
    const double total = stack.total_thickness();
    std::vector<FieldSample> profile(static_cast<std::size_t>(samples));
    // Segment-local closed form: E(x) inside a layer follows from the state
    // at the layer entry.
    FieldState s;
    std::size_t layer_i = 0;
    double layer_x0 = 0.0;
    double layer_x1 = stack.layers[0].thickness;
    double peak = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double x = total * static_cast<double>(i) / static_cast<double>(samples - 1);
        while (x > layer_x1 + 1e-18 && layer_i + 1 < stack.layers.size()) {
            const double k = stack.layers[layer_i].index * w / constants.c;
            const double kd = k * stack.layers[layer_i].thickness;
            const double c = std::cos(kd);
            const double sn = std::sin(kd);
            const double E = s.E * c + s.dE * sn / k;
            const double dE = -s.E * k * sn + s.dE * c;
            s.E = E;
            s.dE = dE;
            ++layer_i;
            layer_x0 = layer_x1;
            layer_x1 += stack.layers[layer_i].thickness;
        }
        const double k = stack.layers[layer_i].index * w / constants.c;
        const double t = x - layer_x0;
        const double E = s.E * std::cos(k * t) + s.dE * std::sin(k * t) / k;
        profile[static_cast<std::size_t>(i)] = FieldSample{x, E};
        peak = std::max(peak, std::abs(E));
    }
    if (peak > 0.0)
        for (auto& p : profile) p.amplitude /= peak;
    return profile;
}

}  // namespace

double effective_length(double A, double L_LN, double L_air, double n) {
    return 0.5 * L_LN + (A * A / (2.0 * n * n)) * L_air;
}

Linewidths linewidth_from_losses(const LayerStack& stack, double fsr_local, InputSide input) {
    const double total = stack.back_mirror_T + stack.front_mirror_T + stack.excess_loss;
    if (total >= 0.5)
        throw ModelError("linewidth_from_losses: round-trip loss too large for the small-loss finesse formula");
    const double T_in = input == InputSide::back ? stack.back_mirror_T : stack.front_mirror_T;
    Linewidths lw;
    lw.finesse = two_pi / total;
    lw.kappa_o = fsr_local / lw.finesse;
    lw.kappa_o_ext = (T_in / total) * lw.kappa_o;
    return lw;
}

std::vector<OpticalMode> find_resonances(const LayerStack& stack, const Material& material,
                                         double f_lo, double f_hi, InputSide input,
                                         int profile_samples) {
    stack.validate();
    if (!(f_lo > 0.0 && f_hi > f_lo)) throw ConfigError("find_resonances: bad frequency window");
    const double opl = stack.optical_path_length();
    const double fsr_est = constants.c / (2.0 * opl);
    // Pad by two estimated FSRs so every in-window mode has both neighbors
    // available for its local FSR (spacings vary by up to ~30% of the mean).
    const double pad = 2.0 * fsr_est;
    const double scan_lo = std::max(f_lo - pad, 0.25 * fsr_est);
    const std::vector<double> roots = resonance_freqs(stack, scan_lo, f_hi + pad);

    const bool multi = stack.layers.size() > 1;
    const double L_first = stack.layers.front().thickness;
    const double L_last = multi ? stack.layers.back().thickness : 0.0;
    const double n_first = stack.layers.front().index;

    std::vector<OpticalMode> modes;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const double f = roots[i];
        if (f < f_lo || f > f_hi) continue;
        OpticalMode mode;
        mode.freq = f;
        mode.longitudinal_index = std::lround(2.0 * opl * f / constants.c);
        const std::vector<double> env = layer_envelopes(stack, f);
        mode.A = env.back() / env.front();
        mode.L_eff = effective_length(mode.A, L_first, L_last, n_first);
        double spacing_sum = 0.0;
        int spacing_n = 0;
        if (i > 0) {
            spacing_sum += f - roots[i - 1];
            ++spacing_n;
        }
        if (i + 1 < roots.size()) {
            spacing_sum += roots[i + 1] - f;
            ++spacing_n;
        }
        mode.fsr_local = spacing_n > 0 ? spacing_sum / spacing_n : fsr_est;
        const Linewidths lw = linewidth_from_losses(stack, mode.fsr_local, input);
        mode.kappa_o = lw.kappa_o;
        mode.kappa_o_ext = lw.kappa_o_ext;
        if (profile_samples > 1) mode.field_profile = sample_profile(stack, f, profile_samples);
        modes.push_back(std::move(mode));
    }
    (void)material;
    return modes;
}

LayerStack device_stack(const DeviceFixture& device, double air_gap) {
    LayerStack stack;
    stack.layers.push_back(Layer{device.material.n_opt, device.slab.len_x});
    if (device.ar_thickness > 0.0)
        stack.layers.push_back(Layer{device.ar_index, device.ar_thickness});
    if (air_gap > 0.0) stack.layers.push_back(Layer{1.0, air_gap});
    stack.back_mirror_T = device.losses.back_mirror_T;
    stack.front_mirror_T = device.losses.front_mirror_T;
    stack.excess_loss = device.losses.excess_loss;
    return stack;
}

double lock_pump_mode(const DeviceFixture& device, double air_gap, double laser_freq) {
    if (!(laser_freq > 0.0)) throw ConfigError("lock_pump_mode: laser frequency must be positive");
    double g = air_gap;
    for (int it = 0; it < 60; ++it) {
        const LayerStack stack = device_stack(device, g);
        const double fsr_est = constants.c / (2.0 * stack.optical_path_length());
        const std::vector<double> roots =
            resonance_freqs(stack, laser_freq - 0.75 * fsr_est, laser_freq + 0.75 * fsr_est);
        if (roots.empty()) throw ModelError("lock_pump_mode: no resonance near the laser");
        double f_pump = roots.front();
        for (double r : roots)
            if (std::abs(r - laser_freq) < std::abs(f_pump - laser_freq)) f_pump = r;
        const double delta = f_pump - laser_freq;
        if (std::abs(delta) < 1.0) return g;
        // Stretching the gap by dg lowers every mode by roughly f * dg / OPL.
        const double slope = -f_pump / stack.optical_path_length();
        g += delta / (-slope);
        if (!(g > 0.0)) throw ModelError("lock_pump_mode: lock drove the air gap negative");
    }
    throw ModelError("lock_pump_mode: no convergence to 1 Hz in 60 iterations");
}

}  // namespace eocavity
