#include "eocavity/eo_coupling.hpp"

#include <cmath>
#include <functional>

#include "eocavity/constants.hpp"
#include "eocavity/errors.hpp"

namespace eocavity {

namespace {

// Linear interpolation over uniform samples on [0, L].
double interp_uniform(const std::vector<double>& samples, double L, double x) {
    const double t = x / L * static_cast<double>(samples.size() - 1);
    const double fl = std::floor(t);
    std::size_t i = static_cast<std::size_t>(fl);
    if (i >= samples.size() - 1) return samples.back();
    const double w = t - fl;
    return samples[i] * (1.0 - w) + samples[i + 1] * w;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// Adaptive Simpson to 1e-10 relative (against a scale estimate built from a
// coarse pass). The integrand interpolates uniform samples, so the panels are
// aligned with the sample intervals: inside each panel the integrand is
// smooth and the panel budgets sum to the requested total.
double integrate(const std::function<double(double)>& f, double a, double b,
                 std::size_t sample_intervals) {
    const int coarse = 64;
    double scale = 0.0;
    for (int i = 0; i <= coarse; ++i) {
        const double x = a + (b - a) * static_cast<double>(i) / coarse;
        scale = std::max(scale, std::abs(f(x)));
    }
    const double tol_total = std::max(scale * (b - a), 1e-300) * 1e-10;
    const std::size_t panels = std::max<std::size_t>(sample_intervals, 1);
    const double tol = tol_total / static_cast<double>(panels);
    double sum = 0.0;
    double x_prev = a;
    double f_prev = f(a);
    for (std::size_t i = 1; i <= panels; ++i) {
        const double x = a + (b - a) * static_cast<double>(i) / static_cast<double>(panels);
        const double m = 0.5 * (x_prev + x);
        const double fm = f(m), fx = f(x);
        const double whole = (x - x_prev) / 6.0 * (f_prev + 4.0 * fm + fx);
        sum += adaptive_simpson(f, x_prev, x, f_prev, fm, fx, whole, tol, 12);
        x_prev = x;
        f_prev = fx;
    }
    return sum;
}

double shared_prefactor(const Material& material, double f_m, double f_p, double f_o,
                        double norm_product) {
    const double w_m = to_angular(f_m), w_p = to_angular(f_p), w_o = to_angular(f_o);
    return material.r33 * material.n_opt * material.n_opt / std::sqrt(material.eps_z) *
           std::sqrt(constants.hbar * w_m * w_p * w_o /
                     (8.0 * constants.eps0 * norm_product));
}

}  // namespace

CouplingResult g0_quasi_1d(const CouplingInput& input) {
    input.material.validate();
    if (!(input.L_LN > 0.0)) throw ConfigError("g0_quasi_1d: L_LN must be positive");
    if (input.microwave_mode.psi_axial.size() < 2)
        throw ConfigError("g0_quasi_1d: microwave axial profile missing");
    if (!(input.microwave_mode.V_m > 0.0 && input.pump_mode.L_eff > 0.0 &&
          input.output_mode.L_eff > 0.0))
        throw ConfigError("g0_quasi_1d: volumes and effective lengths must be positive");

    const double n = input.material.n_opt;
    const double L = input.L_LN;
    const double dk = to_angular(input.microwave_mode.freq) / constants.c;
    const auto& psi = input.microwave_mode.psi_axial;
    const auto integrand = [&](double x) {
        return interp_uniform(psi, L, x) * 0.5 * std::cos(n * dk * x);
    };

    CouplingResult result;
    result.overlap_integral = integrate(integrand, 0.0, L, psi.size() - 1);
    result.phase_mismatch = n * dk * L;
    const double pref = shared_prefactor(
        input.material, input.microwave_mode.freq, input.pump_mode.freq,
        input.output_mode.freq,
        input.microwave_mode.V_m * input.pump_mode.L_eff * input.output_mode.L_eff);
    // The prefactor carries angular frequencies; report the rate in ordinary Hz.
    result.g0 = std::abs(pref * result.overlap_integral) / two_pi;
    return result;
}

void SampledField::validate() const {
    if (nx < 2 || ny < 2 || nz < 2) throw ConfigError("sampled field: need >= 2 points per axis");
    if (values.size() != static_cast<std::size_t>(nx) * ny * nz)
        throw ConfigError("sampled field: value count does not match the grid");
    if (!(x1 > x0 && y1 > y0 && z1 > z0)) throw ConfigError("sampled field: degenerate box");
}

bool SampledField::congruent(const SampledField& o) const {
    return nx == o.nx && ny == o.ny && nz == o.nz && x0 == o.x0 && x1 == o.x1 &&
           y0 == o.y0 && y1 == o.y1 && z0 == o.z0 && z1 == o.z1;
}

double g0_general(const Material& material, const SampledField& psi_m,
                  const SampledField& psi_p, const SampledField& psi_o,
                  double f_m, double f_p, double f_o,
                  double V_m, double V_p, double V_o) {
    material.validate();
    psi_m.validate();
    if (!psi_m.congruent(psi_p) || !psi_m.congruent(psi_o))
        throw ConfigError("g0_general: mode grids are not congruent");
    if (!(V_m > 0.0 && V_p > 0.0 && V_o > 0.0))
        throw ConfigError("g0_general: mode volumes must be positive");

    const double hx = (psi_m.x1 - psi_m.x0) / (psi_m.nx - 1);
    const double hy = (psi_m.y1 - psi_m.y0) / (psi_m.ny - 1);
    const double hz = (psi_m.z1 - psi_m.z0) / (psi_m.nz - 1);
    double sum = 0.0;
    for (int ix = 0; ix < psi_m.nx; ++ix) {
        const double wx = (ix == 0 || ix == psi_m.nx - 1) ? 0.5 : 1.0;
        for (int iy = 0; iy < psi_m.ny; ++iy) {
            const double wy = (iy == 0 || iy == psi_m.ny - 1) ? 0.5 : 1.0;
            double row = 0.0;
            const std::size_t base = (static_cast<std::size_t>(ix) * psi_m.ny + iy) *
                                     static_cast<std::size_t>(psi_m.nz);
            for (int iz = 0; iz < psi_m.nz; ++iz) {
                const double wz = (iz == 0 || iz == psi_m.nz - 1) ? 0.5 : 1.0;
                row += wz * psi_m.values[base + iz] * psi_p.values[base + iz] *
                       psi_o.values[base + iz];
            }
            sum += wx * wy * row;
        }
    }
    const double integral = sum * hx * hy * hz;
    const double pref = shared_prefactor(material, f_m, f_p, f_o, V_m * V_p * V_o);
    return std::abs(pref * integral) / two_pi;
}

double calibrate_g0_from_nms(double delta_nms, double n_m) {
    if (!(n_m > 0.0)) throw ConfigError("calibrate_g0_from_nms: n_m must be positive");
    if (!(delta_nms >= 0.0))
        throw ConfigError("calibrate_g0_from_nms: splitting must be >= 0");
    return delta_nms / (2.0 * std::sqrt(n_m));
}

}  // namespace eocavity
