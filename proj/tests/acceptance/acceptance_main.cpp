// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Each check is self-contained and runs from the reference device.
#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eocavity/constants.hpp"
#include "eocavity/device.hpp"
#include "eocavity/eo_coupling.hpp"
#include "eocavity/errors.hpp"
#include "eocavity/fitting.hpp"
#include "eocavity/microwave.hpp"
#include "eocavity/noise.hpp"
#include "eocavity/optical_cavity.hpp"
#include "eocavity/transduction.hpp"

using namespace eocavity;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
    std::printf("%s  criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", id, what.c_str(),
                detail.c_str());
    if (!pass) ++g_failures;
}

void run_criterion(int id, const std::string& what,
                   const std::function<std::pair<bool, std::string>()>& body) {
    try {
        const auto [pass, detail] = body();
        report(id, pass, what, detail);
    } catch (const std::exception& e) {
        report(id, false, what, std::string("exception: ") + e.what());
    }
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

struct DeviceModes {
    OpticalMode pump;
    OpticalMode output;
};

DeviceModes modes_at_gap(const DeviceFixture& d, double gap) {
    const double laser = constants.c / d.laser_wavelength;
    const auto modes = find_resonances(device_stack(d, gap), d.material,
                                       laser - 40e9, laser + 40e9);
    if (modes.size() < 3) throw ModelError("too few optical modes in the window");
    std::size_t ip = 0;
    for (std::size_t i = 1; i < modes.size(); ++i)
        if (std::abs(modes[i].freq - laser) < std::abs(modes[ip].freq - laser)) ip = i;
    if (ip + 1 >= modes.size()) throw ModelError("pump has no upper neighbor");
    return {modes[ip], modes[ip + 1]};
}

double lineshape_model(double gain, double C, double ko, double km, double wm,
                       double dop, double w) {
    const double xo = 2.0 * (dop - w) / ko;
    const double xm = 2.0 * (wm - w) / km;
    const double re = C + 1.0 - xo * xm;
    const double im = xo + xm;
    return gain * 4.0 * C / (re * re + im * im);
}

std::string run_cli_capture(const std::string& args, int& exit_code) {
    const std::string cmd = std::string(EOCAVITY_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        exit_code = -1;
        return "";
    }
    std::string out;
    char buf[4096];
    while (std::size_t got = fread(buf, 1, sizeof buf, pipe)) out.append(buf, got);
    const int status = pclose(pipe);
    exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main() {
    const DeviceFixture dev = reference_device();

    run_criterion(1, "antireflection coating cuts the interface reflection", [&] {
        LayerStack bare;
        bare.layers = {{dev.material.n_opt, 0.0}, {1.0, 0.0}};
        const double r_bare = stack_reflectivity(bare, 1.55e-6).power;
        LayerStack coated;
        coated.layers = {{dev.material.n_opt, 0.0},
                         {1.444, 300e-9},
                         {1.0, 0.0}};
        const double r_coat = stack_reflectivity(coated, 1.55e-6).power;
        const bool ok = r_coat >= 0.004 && r_coat <= 0.007 && r_bare >= 0.125 &&
                        r_bare <= 0.145;
        return std::make_pair(ok, "coated R=" + fmt(r_coat) + ", bare R=" + fmt(r_bare));
    });

    run_criterion(2, "loss budget reproduces the measured finesse and linewidth", [&] {
        const auto stack = device_stack(dev, dev.air_gap);
        const auto pair = modes_at_gap(dev, dev.air_gap);
        const auto lw = linewidth_from_losses(stack, pair.pump.fsr_local, InputSide::back);
        const bool ok = lw.finesse >= 2100.0 && lw.finesse <= 2350.0 &&
                        lw.kappa_o >= 3.7e6 && lw.kappa_o <= 4.7e6;
        return std::make_pair(ok, "finesse=" + fmt(lw.finesse) +
                                      ", kappa_o=" + fmt(lw.kappa_o / 1e6) + " MHz");
    });

    run_criterion(3, "microwave mode frequencies and mode volume", [&] {
        const double f131 = mode_frequency(dev.slab, dev.material, 1, 3, 1);
        const double f111 = mode_frequency(dev.slab, dev.material, 1, 1, 1);
        const double vm = mode_volume(dev.slab, dev.material, 1, 3, 1);
        const bool ok = std::abs(f131 / 9.44e9 - 1.0) <= 0.20 &&
                        std::abs(f111 / 6e9 - 1.0) <= 0.25 && f111 < f131 &&
                        vm >= 50e-9 && vm <= 200e-9;
        return std::make_pair(ok, "f131=" + fmt(f131 / 1e9) + " GHz, f111=" +
                                      fmt(f111 / 1e9) + " GHz, V_m=" + fmt(vm * 1e9) +
                                      " mm^3");
    });

    run_criterion(4, "coupling rate at the tuned gap; monolithic cancellation", [&] {
        const auto mw = make_microwave_mode(dev, 1, 3, 1);
        const double gap = tune_triple_resonance(dev, mw);
        const auto pair = modes_at_gap(dev, gap);
        CouplingInput in;
        in.material = dev.material;
        in.microwave_mode = mw;
        in.pump_mode = pair.pump;
        in.output_mode = pair.output;
        in.L_LN = dev.slab.len_x;
        in.L_air = gap;
        const auto res = g0_quasi_1d(in);

        // Monolithic limit: no gap, neighbors one slab FSR apart.
        LayerStack slab_only;
        slab_only.layers = {{dev.material.n_opt, dev.slab.len_x}};
        slab_only.back_mirror_T = dev.losses.back_mirror_T;
        slab_only.front_mirror_T = dev.losses.front_mirror_T;
        slab_only.excess_loss = dev.losses.excess_loss;
        const double laser = constants.c / dev.laser_wavelength;
        const auto mono =
            find_resonances(slab_only, dev.material, laser - 60e9, laser + 60e9);
        if (mono.size() < 2) throw ModelError("monolithic window too narrow");
        CouplingInput min;
        min.material = dev.material;
        auto mw0 = mw;
        mw0.freq = mono[1].freq - mono[0].freq;
        min.microwave_mode = mw0;
        min.pump_mode = mono[0];
        min.output_mode = mono[1];
        min.L_LN = dev.slab.len_x;
        min.L_air = 0.0;
        const auto res0 = g0_quasi_1d(min);

        const bool ok = res.g0 >= 1.3 && res.g0 <= 2.1 &&
                        std::abs(res0.overlap_integral) < 1e-6 * dev.slab.len_x;
        return std::make_pair(ok, "g0=" + fmt(res.g0) + " Hz at gap=" + fmt(gap * 1e3) +
                                      " mm; |monolithic overlap|=" +
                                      fmt(std::abs(res0.overlap_integral)) + " m");
    });

    run_criterion(5, "general and quasi-1-D coupling forms agree on separable modes", [&] {
        const Material mat = default_ln_material();
        const double L = 4e-3, wy = 1e-3, wz = 1e-3, Sw = wy * wz;
        const double f_m = constants.c / (2.0 * mat.n_opt * L) * 0.9;
        const double dk = two_pi * f_m / constants.c;
        const double kp = 24.0 * pi / L;
        const double ko = kp + mat.n_opt * dk;
        const int nx = 4097, ny = 9, nz = 9;
        SampledField fm, fp, fo;
        for (SampledField* f : {&fm, &fp, &fo}) {
            f->nx = nx;
            f->ny = ny;
            f->nz = nz;
            f->x1 = L;
            f->y1 = wy;
            f->z1 = wz;
            f->values.resize(static_cast<std::size_t>(nx) * ny * nz);
        }
        for (int ix = 0; ix < nx; ++ix) {
            const double x = L * ix / (nx - 1);
            const double vm = std::sin(pi * x / L);
            const double vp = std::sin(kp * x);
            const double vo = std::sin(ko * x);
            for (int iy = 0; iy < ny; ++iy)
                for (int iz = 0; iz < nz; ++iz) {
                    const std::size_t idx =
                        (static_cast<std::size_t>(ix) * ny + iy) * nz + iz;
                    fm.values[idx] = vm;
                    fp.values[idx] = vp;
                    fo.values[idx] = vo;
                }
        }
        const double g3 = g0_general(mat, fm, fp, fo, f_m, 1.9e14, 1.9e14, Sw * L / 2.0,
                                     Sw * L / 2.0, Sw * L / 2.0);
        MicrowaveMode mw;
        mw.freq = f_m;
        mw.V_m = Sw * L / 2.0;
        mw.psi_axial.resize(nx);
        for (int ix = 0; ix < nx; ++ix)
            mw.psi_axial[ix] = std::sin(pi * (L * ix / (nx - 1)) / L);
        CouplingInput in;
        in.material = mat;
        in.microwave_mode = mw;
        in.pump_mode.freq = 1.9e14;
        in.pump_mode.L_eff = L / 2.0;
        in.output_mode.freq = 1.9e14;
        in.output_mode.L_eff = L / 2.0;
        in.L_LN = L;
        const double g4 = g0_quasi_1d(in).g0;
        const double rel = std::abs(g3 / g4 - 1.0);
        return std::make_pair(rel <= 0.01, "rel diff=" + fmt(rel));
    });

    run_criterion(6, "splitting calibration lands in the characterized band", [&] {
        const double g0 = calibrate_g0_from_nms(103e6, 1.3e15);
        return std::make_pair(g0 >= 1.42 && g0 <= 1.44, "g0=" + fmt(g0) + " Hz");
    });

    run_criterion(7, "cooperativity and peak efficiency arithmetic", [&] {
        const double C = cooperativity(6.5e10, 1.5, 4.1e6, 8.54e6);
        const double eta = peak_efficiency(C, 0.683, 0.16218);
        const bool ok = std::abs(C - 0.0167) <= 1e-4 && eta >= 0.005 && eta <= 0.010;
        return std::make_pair(ok, "C=" + fmt(C) + ", eta_peak=" + fmt(eta));
    });

    run_criterion(8, "lineshape peaks exactly at the triply resonant point", [&] {
        TransductionParams p;
        p.N_p = 6.5e10;
        p.g0 = 1.5;
        p.kappa_o = 4.1e6;
        p.kappa_o_ext = 2.8e6;
        p.kappa_m = 8.54e6;
        p.kappa_m_ext = 1.385e6;
        p.omega_m = 9.302e9;
        p.delta_op = 9.302e9;
        const double C = cooperativity(p.N_p, p.g0, p.kappa_o, p.kappa_m);
        const double eta_peak =
            peak_efficiency(C, p.kappa_o_ext / p.kappa_o, p.kappa_m_ext / p.kappa_m);
        const double center_rel = std::abs(efficiency_at(p, p.omega_m) / eta_peak - 1.0);
        std::vector<double> grid(10000);
        for (std::size_t i = 0; i < grid.size(); ++i)
            grid[i] = p.omega_m - 200e6 + 400e6 * static_cast<double>(i) / (grid.size() - 1);
        const auto spec = efficiency_spectrum(p, grid);
        double worst = 0.0;
        for (double v : spec) worst = std::max(worst, v / eta_peak - 1.0);
        const bool ok = center_rel <= 1e-12 && worst <= 1e-12;
        return std::make_pair(ok, "center rel err=" + fmt(center_rel) +
                                      ", max grid excess=" + fmt(worst));
    });

    run_criterion(9, "sweep map shows two fixed and two moving ridges", [&] {
        const auto mw131 = make_microwave_mode(dev, 1, 3, 1);
        const auto mw111 = make_microwave_mode(dev, 1, 1, 1);
        const std::vector<MicrowaveMode> mws{mw111, mw131};
        const int n_gap = 61, n_w = 2551;
        const double g_lo = 6.2e-3, g_hi = 8.0e-3;
        const double w_lo = 5.5e9, w_hi = 10.6e9;
        const auto sweep = sweep_triple_resonance(dev, mws, SweepAxis::air_gap, g_lo,
                                                  g_hi, n_gap, w_lo, w_hi, n_w, 8);

        auto mag = [&](int i, int j) {
            return sweep.magnitude[static_cast<std::size_t>(i) * n_w + j];
        };

        // Axis-independent ridges: peaks of the column-wise minimum profile.
        std::vector<double> vert(n_w, 1e300);
        for (int i = 0; i < n_gap; ++i)
            for (int j = 0; j < n_w; ++j) vert[j] = std::min(vert[j], mag(i, j));
        std::vector<double> sorted_vert = vert;
        std::nth_element(sorted_vert.begin(), sorted_vert.begin() + n_w / 2,
                         sorted_vert.end());
        const double med = sorted_vert[n_w / 2];
        std::vector<double> vridges;
        for (int j = 1; j + 1 < n_w; ++j) {
            if (vert[j] > vert[j - 1] && vert[j] >= vert[j + 1] && vert[j] > 6.0 * med) {
                const double w = sweep.axis2[j];
                if (!vridges.empty() && w - vridges.back() < 50e6)
                    vridges.back() = 0.5 * (vridges.back() + w);
                else
                    vridges.push_back(w);
            }
        }
        const bool two_fixed =
            vridges.size() == 2 && std::abs(vridges[0] - mw111.freq) < 30e6 &&
            std::abs(vridges[1] - mw131.freq) < 30e6;

        // Axis-dependent ridges: per-column peaks away from the fixed ones,
        // tracking the longitudinal neighbor spacings.
        std::vector<double> dup(n_gap), ddn(n_gap);
        for (int i = 0; i < n_gap; ++i) {
            const double gap = g_lo + (g_hi - g_lo) * i / (n_gap - 1);
            const auto sp = locked_spacing(dev, gap);
            dup[i] = sp.delta_up;
            ddn[i] = sp.delta_down;
        }
        bool spacings_move = true;
        for (int i = 1; i < n_gap; ++i)
            if (dup[i] >= dup[i - 1] || ddn[i] >= ddn[i - 1]) spacings_move = false;

        int cols_two = 0, cols_matched = 0;
        for (int i = 0; i < n_gap; ++i) {
            std::vector<double> row(n_w);
            for (int j = 0; j < n_w; ++j) row[j] = mag(i, j);
            std::vector<double> srow = row;
            std::nth_element(srow.begin(), srow.begin() + n_w / 2, srow.end());
            const double rmed = srow[n_w / 2];
            std::vector<double> peaks;
            for (int j = 1; j + 1 < n_w; ++j) {
                if (row[j] > row[j - 1] && row[j] >= row[j + 1] && row[j] > 6.0 * rmed) {
                    const double w = sweep.axis2[j];
                    bool near_fixed = false;
                    for (double v : vridges)
                        if (std::abs(w - v) < 60e6) near_fixed = true;
                    if (!near_fixed) peaks.push_back(w);
                }
            }
            if (peaks.size() == 2) {
                ++cols_two;
                const bool m0 = std::min(std::abs(peaks[0] - dup[i]),
                                         std::abs(peaks[0] - ddn[i])) < 30e6;
                const bool m1 = std::min(std::abs(peaks[1] - dup[i]),
                                         std::abs(peaks[1] - ddn[i])) < 30e6;
                if (m0 && m1) ++cols_matched;
            }
        }
        const bool two_moving = cols_two >= (3 * n_gap) / 4 && cols_matched == cols_two;

        // Global maximum sits where a fixed ridge meets a moving one.
        std::size_t imax = 0;
        for (std::size_t k = 1; k < sweep.magnitude.size(); ++k)
            if (sweep.magnitude[k] > sweep.magnitude[imax]) imax = k;
        const int gi = static_cast<int>(imax) / n_w;
        const double wmax = sweep.axis2[imax % n_w];
        double dist_fixed = 1e300;
        for (double v : vridges) dist_fixed = std::min(dist_fixed, std::abs(wmax - v));
        const double dist_moving =
            std::min(std::abs(wmax - dup[gi]), std::abs(wmax - ddn[gi]));
        const bool max_at_crossing = dist_fixed < 30e6 && dist_moving < 30e6;

        const bool ok = two_fixed && spacings_move && two_moving && max_at_crossing;
        return std::make_pair(
            ok, "fixed ridges=" + std::to_string(vridges.size()) + ", columns 2-peak=" +
                    std::to_string(cols_two) + "/" + std::to_string(n_gap) +
                    ", global max at w=" + fmt(wmax / 1e9) + " GHz, gap=" +
                    fmt((g_lo + (g_hi - g_lo) * gi / (n_gap - 1)) * 1e3) + " mm");
    });

    run_criterion(10, "noise budget and optimal antenna coupling", [&] {
        const double n_th = thermal_occupation(300.0, 9.44e9);
        const double ratio = thermal_to_shot_ratio_db(0.017, 660.0, 0.683);
        const auto opt = optimize_antenna_coupling(6.5e10, 1.5, 4.1e6, 2.8e6,
                                                   9.302e9 / 1300.0, 300.0, 9.302e9);
        const bool ok = n_th >= 655.0 && n_th <= 670.0 && ratio >= 14.0 && ratio <= 16.0 &&
                        opt.kappa_m_ext >= 35e6 && opt.kappa_m_ext <= 65e6 &&
                        opt.T_n >= 90.0 && opt.T_n <= 135.0 &&
                        opt.noise_figure_db >= 1.1 && opt.noise_figure_db <= 1.7;
        return std::make_pair(ok, "n_th=" + fmt(n_th) + ", ratio=" + fmt(ratio) +
                                      " dB, kappa*=" + fmt(opt.kappa_m_ext / 1e6) +
                                      " MHz, T_n=" + fmt(opt.T_n) + " K, NF=" +
                                      fmt(opt.noise_figure_db) + " dB");
    });

    run_criterion(11, "fit round trips", [&] {
        const double tg = 0.33, tC = 0.017, tko = 4.10e6, tkm = 8.54e6;
        const double twm = 9.302e9, tdop = 9.302e9;
        const double K = tC * tko * tkm;

        auto make_trace = [&](int n, double half) {
            Trace tr;
            tr.freq.resize(n);
            tr.value.resize(n);
            for (int i = 0; i < n; ++i) {
                tr.freq[i] = twm - half + 2.0 * half * i / (n - 1);
                tr.value[i] =
                    lineshape_model(tg, tC, tko, tkm, twm, tdop, tr.freq[i]);
            }
            return tr;
        };

        // Noiseless ensemble: 200 seeded +-20% perturbed starts.
        const Trace clean = make_trace(401, 60e6);
        std::mt19937_64 rng(20260819ull);
        std::uniform_real_distribution<double> u(-0.2, 0.2);
        int ok_clean = 0;
        for (int trial = 0; trial < 200; ++trial) {
            LineshapeGuess g;
            g.gain = tg * (1.0 + u(rng));
            g.kappa_o = tko * (1.0 + u(rng));
            g.kappa_m = tkm * (1.0 + u(rng));
            g.omega_m = twm + u(rng) * tkm;
            g.delta_op = tdop + u(rng) * tko;
            try {
                const FitResult r = fit_lineshape(clean, g, {}, K);
                const bool good =
                    std::abs(r.param("gain") / tg - 1.0) < 1e-6 &&
                    std::abs(r.param("C") / tC - 1.0) < 1e-6 &&
                    std::abs(r.param("kappa_o") / tko - 1.0) < 1e-6 &&
                    std::abs(r.param("kappa_m") / tkm - 1.0) < 1e-6 &&
                    std::abs(r.param("omega_m") / twm - 1.0) < 1e-6 &&
                    std::abs(r.param("delta_op") / tdop - 1.0) < 1e-6;
                if (good) ++ok_clean;
            } catch (const ModelError&) {
            }
        }

        // 1% multiplicative noise: the linewidths stay within 2%.
        const Trace dense = make_trace(2001, 60e6);
        std::mt19937_64 nrng(424242ull);
        std::normal_distribution<double> n01(0.0, 1.0);
        std::uniform_real_distribution<double> up(-0.2, 0.2);
        int ok_noise = 0;
        std::vector<double> err_ko, err_km;
        const int noise_trials = 50;
        for (int trial = 0; trial < noise_trials; ++trial) {
            Trace noisy = dense;
            for (auto& v : noisy.value) v *= 1.0 + 0.01 * n01(nrng);
            LineshapeGuess g;
            g.gain = tg * (1.0 + up(nrng));
            g.kappa_o = tko * (1.0 + up(nrng));
            g.kappa_m = tkm * (1.0 + up(nrng));
            g.omega_m = twm + up(nrng) * tkm;
            g.delta_op = tdop + up(nrng) * tko;
            try {
                const FitResult r = fit_lineshape(noisy, g, {}, K);
                const double eo = std::abs(r.param("kappa_o") / tko - 1.0);
                const double em = std::abs(r.param("kappa_m") / tkm - 1.0);
                err_ko.push_back(eo);
                err_km.push_back(em);
                if (eo < 0.02 && em < 0.02) ++ok_noise;
            } catch (const ModelError&) {
                err_ko.push_back(1.0);
                err_km.push_back(1.0);
            }
        }
        auto median = [](std::vector<double> v) {
            std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
            return v[v.size() / 2];
        };
        const double med_ko = median(err_ko), med_km = median(err_km);

        // NMS separation round trip from trace-derived initials.
        NmsParams np;
        np.n_m = 1.3e15;
        np.g0 = calibrate_g0_from_nms(103e6, np.n_m);
        np.kappa_o = 4.1e6;
        np.delta = 0.0;
        Trace nms_tr;
        const int N = 2001;
        nms_tr.freq.resize(N);
        std::vector<double> det(N);
        for (int i = 0; i < N; ++i) {
            det[i] = -200e6 + 400e6 * i / (N - 1);
            nms_tr.freq[i] = 9.302e9 + det[i];
        }
        nms_tr.value = nms_spectrum(np, det);
        const FitResult nr = fit_nms(nms_tr, nms_guess_from_trace(nms_tr));
        const double split_rel =
            std::abs(nr.param("splitting") / nms_splitting(np) - 1.0);

        const bool ok = ok_clean >= 190 && med_ko <= 0.02 && med_km <= 0.02 &&
                        ok_noise >= (noise_trials * 3) / 5 && split_rel <= 1e-3;
        return std::make_pair(
            ok, "noiseless " + std::to_string(ok_clean) + "/200, noisy-kappa medians " +
                    fmt(med_ko * 100) + "%/" + fmt(med_km * 100) + "% (" +
                    std::to_string(ok_noise) + "/" + std::to_string(noise_trials) +
                    " within 2%), NMS split rel err=" + fmt(split_rel));
    });

    run_criterion(12, "sweep output is byte identical across thread counts", [&] {
        const std::string cfg =
            std::string(EOCAVITY_CONFIG_DIR) + "/reference_device.json";
        const fs::path out1 = fs::temp_directory_path() / "eocavity_acc_t1";
        const fs::path out8 = fs::temp_directory_path() / "eocavity_acc_t8";
        fs::remove_all(out1);
        fs::remove_all(out8);
        int c1 = 0, c8 = 0;
        run_cli_capture("sweep --config " + cfg + " --out " + out1.string() +
                            " --threads 1",
                        c1);
        run_cli_capture("sweep --config " + cfg + " --out " + out8.string() +
                            " --threads 8",
                        c8);
        if (c1 != 0 || c8 != 0)
            return std::make_pair(false, "sweep exit codes " + std::to_string(c1) + "/" +
                                             std::to_string(c8));
        const std::string a = slurp(out1 / "sweep.csv");
        const std::string b = slurp(out8 / "sweep.csv");
        const bool ok = !a.empty() && a == b;
        const auto detail = "bytes=" + std::to_string(a.size()) +
                            (ok ? ", identical" : ", MISMATCH");
        fs::remove_all(out1);
        fs::remove_all(out8);
        return std::make_pair(ok, detail);
    });

    if (g_failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
}
