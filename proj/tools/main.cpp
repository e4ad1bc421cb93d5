// eocavity: config-driven front end for the cavity electro-optic transducer
// toolkit. Every command reads one JSON config, computes in memory, then
// writes its artifacts plus run.json (resolved config echo) and manifest.json
// (list of every emitted file). Exit codes: 0 success, 2 invalid config,
// 3 numerical failure, 4 I/O failure.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "eocavity/constants.hpp"
#include "eocavity/device.hpp"
#include "eocavity/eo_coupling.hpp"
#include "eocavity/errors.hpp"
#include "eocavity/fitting.hpp"
#include "eocavity/io.hpp"
#include "eocavity/microwave.hpp"
#include "eocavity/noise.hpp"
#include "eocavity/optical_cavity.hpp"
#include "eocavity/transduction.hpp"

namespace {

using eocavity::ConfigError;
using eocavity::IoError;
using eocavity::JsonWriter;
using eocavity::ModelError;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Config plumbing
// ---------------------------------------------------------------------------

struct ConfigSource {
    std::string path;
    std::string raw;
};

// 1-based line of the first occurrence of "key" (quoted) in the raw text, so
// schema errors point at the offending line.
int line_of_key(const ConfigSource& src, const std::string& key) {
    const std::string needle = '"' + key + '"';
    const std::size_t pos = src.raw.find(needle);
    if (pos == std::string::npos) return 1;
    return 1 + static_cast<int>(std::count(src.raw.begin(), src.raw.begin() + pos, '\n'));
}

[[noreturn]] void config_fail(const ConfigSource& src, const std::string& key,
                              const std::string& msg) {
    throw ConfigError(src.path + ":" + std::to_string(line_of_key(src, key)) + ": " + msg);
}

json parse_config(const ConfigSource& src) {
    try {
        return json::parse(src.raw);
    } catch (const json::parse_error& e) {
        throw ConfigError(src.path + ": " + e.what());
    }
}

void check_keys(const ConfigSource& src, const json& obj, const std::string& section,
                const std::set<std::string>& allowed) {
    if (!obj.is_object())
        config_fail(src, section, "section '" + section + "' must be a JSON object");
    for (const auto& item : obj.items())
        if (!allowed.count(item.key()))
            config_fail(src, item.key(),
                        "unknown key '" + item.key() + "' in section '" + section + "'");
}

double get_num(const ConfigSource& src, const json& obj, const std::string& key,
               double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) config_fail(src, key, "'" + key + "' must be a number");
    return v.get<double>();
}

int get_int(const ConfigSource& src, const json& obj, const std::string& key,
            int fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) config_fail(src, key, "'" + key + "' must be an integer");
    return v.get<int>();
}

std::string get_str(const ConfigSource& src, const json& obj, const std::string& key,
                    const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) config_fail(src, key, "'" + key + "' must be a string");
    return v.get<std::string>();
}

std::optional<double> get_num_opt(const ConfigSource& src, const json& obj,
                                  const std::string& key) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_number()) config_fail(src, key, "'" + key + "' must be a number");
    return v.get<double>();
}

const json& section(const json& root, const std::string& name) {
    static const json empty = json::object();
    if (!root.contains(name)) return empty;
    return root.at(name);
}

// ---------------------------------------------------------------------------
// Resolved fixture assembly (defaults come from the reference device)
// ---------------------------------------------------------------------------

struct MicrowaveSelection {
    int l = 1, m = 3, p = 1;
    std::optional<double> eps_eff;
};

struct Rates {
    double N_p = 6.5e10;
    double g0 = 1.5;               // Hz
    double kappa_o = 4.1e6;        // Hz
    double kappa_o_ext = 2.8e6;    // Hz
    double kappa_m = 8.54e6;       // Hz
    double kappa_m_ext = 1.385e6;  // Hz
    double omega_m = 9.302e9;      // Hz
    double delta_op = 9.302e9;     // Hz
};

struct Resolved {
    eocavity::DeviceFixture device;
    MicrowaveSelection mw;
    Rates rates;
};

Resolved resolve_fixture(const ConfigSource& src, const json& root) {
    Resolved r;
    r.device = eocavity::reference_device();
    auto& dev = r.device;

    const json& jdev = section(root, "device");
    check_keys(src, jdev, "device",
               {"material", "slab", "losses", "ar_index", "ar_thickness_m", "air_gap_m",
                "temperature_k"});
    {
        const json& jm = section(jdev, "material");
        check_keys(src, jm, "device.material",
                   {"name", "n_opt", "eps_x", "eps_y", "eps_z", "r33_m_per_v"});
        auto& mat = dev.material;
        mat.name = get_str(src, jm, "name", mat.name);
        mat.n_opt = get_num(src, jm, "n_opt", mat.n_opt);
        mat.eps_x = get_num(src, jm, "eps_x", mat.eps_x);
        mat.eps_y = get_num(src, jm, "eps_y", mat.eps_y);
        mat.eps_z = get_num(src, jm, "eps_z", mat.eps_z);
        mat.r33 = get_num(src, jm, "r33_m_per_v", mat.r33);
    }
    {
        const json& js = section(jdev, "slab");
        check_keys(src, js, "device.slab", {"len_x_m", "len_y_m", "len_z_m"});
        dev.slab.len_x = get_num(src, js, "len_x_m", dev.slab.len_x);
        dev.slab.len_y = get_num(src, js, "len_y_m", dev.slab.len_y);
        dev.slab.len_z = get_num(src, js, "len_z_m", dev.slab.len_z);
    }
    {
        const json& jl = section(jdev, "losses");
        check_keys(src, jl, "device.losses", {"back_mirror_T", "front_mirror_T", "excess"});
        dev.losses.back_mirror_T = get_num(src, jl, "back_mirror_T", dev.losses.back_mirror_T);
        dev.losses.front_mirror_T =
            get_num(src, jl, "front_mirror_T", dev.losses.front_mirror_T);
        dev.losses.excess_loss = get_num(src, jl, "excess", dev.losses.excess_loss);
    }
    dev.ar_index = get_num(src, jdev, "ar_index", dev.ar_index);
    dev.ar_thickness = get_num(src, jdev, "ar_thickness_m", dev.ar_thickness);
    dev.air_gap = get_num(src, jdev, "air_gap_m", dev.air_gap);
    dev.temperature = get_num(src, jdev, "temperature_k", dev.temperature);

    const json& jlas = section(root, "laser");
    check_keys(src, jlas, "laser", {"wavelength_m", "power_w", "mode_match"});
    dev.laser_wavelength = get_num(src, jlas, "wavelength_m", dev.laser_wavelength);
    dev.laser_power = get_num(src, jlas, "power_w", dev.laser_power);
    dev.mode_match = get_num(src, jlas, "mode_match", dev.mode_match);

    const json& jmw = section(root, "microwave");
    check_keys(src, jmw, "microwave",
               {"l", "m", "p", "q_int", "kappa_m_ext_hz", "eps_eff", "beam_y_m",
                "beam_z_m"});
    r.mw.l = get_int(src, jmw, "l", r.mw.l);
    r.mw.m = get_int(src, jmw, "m", r.mw.m);
    r.mw.p = get_int(src, jmw, "p", r.mw.p);
    if (r.mw.l < 1) config_fail(src, "l", "mode index l must be >= 1");
    if (r.mw.m < 1) config_fail(src, "m", "mode index m must be >= 1");
    if (r.mw.p < 1) config_fail(src, "p", "mode index p must be >= 1");
    r.mw.eps_eff = get_num_opt(src, jmw, "eps_eff");
    dev.q_int = get_num(src, jmw, "q_int", dev.q_int);
    dev.kappa_m_ext = get_num(src, jmw, "kappa_m_ext_hz", dev.kappa_m_ext);
    dev.beam_y = get_num(src, jmw, "beam_y_m", dev.slab.len_y / 2.0);
    dev.beam_z = get_num(src, jmw, "beam_z_m", dev.slab.len_z / 2.0);

    const json& jr = section(root, "rates");
    check_keys(src, jr, "rates",
               {"N_p", "g0_hz", "kappa_o_hz", "kappa_o_ext_hz", "kappa_m_hz",
                "kappa_m_ext_hz", "omega_m_hz", "delta_op_hz"});
    r.rates.N_p = get_num(src, jr, "N_p", r.rates.N_p);
    r.rates.g0 = get_num(src, jr, "g0_hz", r.rates.g0);
    r.rates.kappa_o = get_num(src, jr, "kappa_o_hz", r.rates.kappa_o);
    r.rates.kappa_o_ext = get_num(src, jr, "kappa_o_ext_hz", r.rates.kappa_o_ext);
    r.rates.kappa_m = get_num(src, jr, "kappa_m_hz", r.rates.kappa_m);
    r.rates.kappa_m_ext = get_num(src, jr, "kappa_m_ext_hz", r.rates.kappa_m_ext);
    r.rates.omega_m = get_num(src, jr, "omega_m_hz", r.rates.omega_m);
    r.rates.delta_op = get_num(src, jr, "delta_op_hz", r.rates.delta_op);

    // Value validation (anchored where a specific key is identifiable).
    try {
        dev.material.validate();
        dev.slab.validate();
    } catch (const std::exception& e) {
        throw ConfigError(src.path + ": " + e.what());
    }
    if (dev.air_gap < 0.0) config_fail(src, "air_gap_m", "air gap must be >= 0");
    if (dev.ar_thickness < 0.0)
        config_fail(src, "ar_thickness_m", "AR thickness must be >= 0");
    if (dev.ar_thickness > 0.0 && dev.ar_index < 1.0)
        config_fail(src, "ar_index", "AR index must be >= 1");
    if (!(dev.laser_wavelength > 0.0))
        config_fail(src, "wavelength_m", "laser wavelength must be > 0");
    if (dev.laser_power < 0.0) config_fail(src, "power_w", "laser power must be >= 0");
    if (!(dev.mode_match > 0.0 && dev.mode_match <= 1.0))
        config_fail(src, "mode_match", "mode_match must be in (0, 1]");
    if (!(dev.q_int > 0.0)) config_fail(src, "q_int", "q_int must be > 0");
    if (dev.kappa_m_ext < 0.0)
        config_fail(src, "kappa_m_ext_hz", "kappa_m_ext_hz must be >= 0");
    if (dev.temperature < 0.0)
        config_fail(src, "temperature_k", "temperature must be >= 0");
    if (!(r.rates.N_p > 0.0)) config_fail(src, "N_p", "N_p must be > 0");
    if (!(r.rates.kappa_o > 0.0)) config_fail(src, "kappa_o_hz", "kappa_o_hz must be > 0");
    if (!(r.rates.kappa_m > 0.0)) config_fail(src, "kappa_m_hz", "kappa_m_hz must be > 0");
    if (r.rates.kappa_o_ext < 0.0 || r.rates.kappa_o_ext > r.rates.kappa_o)
        config_fail(src, "kappa_o_ext_hz", "kappa_o_ext_hz must be in [0, kappa_o_hz]");
    if (r.rates.kappa_m_ext < 0.0 || r.rates.kappa_m_ext > r.rates.kappa_m)
        config_fail(src, "kappa_m_ext_hz", "kappa_m_ext_hz must be in [0, kappa_m_hz]");
    return r;
}

// ---------------------------------------------------------------------------
// Resolved-config echo (all numbers at 17 significant digits, keys sorted)
// ---------------------------------------------------------------------------

void echo_resolved(JsonWriter& w, const Resolved& r) {
    const auto& d = r.device;
    w.begin_object("config");
    w.begin_object("device");
    w.field("air_gap_m", d.air_gap);
    w.field("ar_index", d.ar_index);
    w.field("ar_thickness_m", d.ar_thickness);
    w.begin_object("losses");
    w.field("back_mirror_T", d.losses.back_mirror_T);
    w.field("excess", d.losses.excess_loss);
    w.field("front_mirror_T", d.losses.front_mirror_T);
    w.end_object();
    w.begin_object("material");
    w.field("eps_x", d.material.eps_x);
    w.field("eps_y", d.material.eps_y);
    w.field("eps_z", d.material.eps_z);
    w.field("n_opt", d.material.n_opt);
    w.field("name", d.material.name);
    w.field("r33_m_per_v", d.material.r33);
    w.end_object();
    w.begin_object("slab");
    w.field("len_x_m", d.slab.len_x);
    w.field("len_y_m", d.slab.len_y);
    w.field("len_z_m", d.slab.len_z);
    w.end_object();
    w.field("temperature_k", d.temperature);
    w.end_object();
    w.begin_object("laser");
    w.field("mode_match", d.mode_match);
    w.field("power_w", d.laser_power);
    w.field("wavelength_m", d.laser_wavelength);
    w.end_object();
    w.begin_object("microwave");
    w.field("beam_y_m", d.beam_y);
    w.field("beam_z_m", d.beam_z);
    if (r.mw.eps_eff) w.field("eps_eff", *r.mw.eps_eff);
    w.field("kappa_m_ext_hz", d.kappa_m_ext);
    w.field("l", r.mw.l);
    w.field("m", r.mw.m);
    w.field("p", r.mw.p);
    w.field("q_int", d.q_int);
    w.end_object();
    w.begin_object("rates");
    w.field("N_p", r.rates.N_p);
    w.field("delta_op_hz", r.rates.delta_op);
    w.field("g0_hz", r.rates.g0);
    w.field("kappa_m_ext_hz", r.rates.kappa_m_ext);
    w.field("kappa_m_hz", r.rates.kappa_m);
    w.field("kappa_o_ext_hz", r.rates.kappa_o_ext);
    w.field("kappa_o_hz", r.rates.kappa_o);
    w.field("omega_m_hz", r.rates.omega_m);
    w.end_object();
    // command section echo is appended by each command before end_object
}

// ---------------------------------------------------------------------------
// Artifact collection: compute first, write everything at the end
// ---------------------------------------------------------------------------

struct ArtifactSet {
    std::string out_dir;
    std::vector<std::pair<std::string, std::string>> files;

    void add(const std::string& name, const std::string& content) {
        files.emplace_back(name, content);
    }

    void flush() {
        namespace fs = std::filesystem;
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec) throw IoError("cannot create output directory '" + out_dir + "': " +
                              ec.message());
        std::vector<std::string> names;
        for (const auto& [name, content] : files) {
            eocavity::write_file_atomic((fs::path(out_dir) / name).string(), content);
            names.push_back(name);
        }
        names.push_back("manifest.json");
        std::sort(names.begin(), names.end());
        JsonWriter w;
        w.begin_object();
        w.begin_array("files");
        for (const auto& n : names) w.element(n);
        w.end_array();
        w.end_object();
        eocavity::write_file_atomic((fs::path(out_dir) / "manifest.json").string(),
                                    w.str());
    }
};

std::string run_json(const std::string& command, const Resolved& r,
                     const std::function<void(JsonWriter&)>& command_echo) {
    JsonWriter w;
    w.begin_object();
    w.field("command", command);
    w.field("version", EOCAVITY_VERSION);
    echo_resolved(w, r);
    if (command_echo) command_echo(w);
    w.end_object();  // config
    w.end_object();
    return w.str();
}

// ---------------------------------------------------------------------------
// Shared model helpers
// ---------------------------------------------------------------------------

struct ModePair {
    eocavity::OpticalMode pump;
    eocavity::OpticalMode output;
};

// Pump (nearest resonance to the laser) and its upper longitudinal neighbor
// at exactly the given gap; no lock adjustment.
ModePair modes_at_gap(const eocavity::DeviceFixture& dev, double air_gap) {
    const double f_laser = eocavity::constants.c / dev.laser_wavelength;
    auto stack = eocavity::device_stack(dev, air_gap);
    const double fsr_est = eocavity::constants.c / (2.0 * stack.optical_path_length());
    auto modes = eocavity::find_resonances(stack, dev.material, f_laser - 4.0 * fsr_est,
                                           f_laser + 4.0 * fsr_est);
    if (modes.size() < 2) throw ModelError("fewer than two resonances near the laser");
    const eocavity::OpticalMode* pump = nullptr;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& m : modes) {
        const double d = std::abs(m.freq - f_laser);
        if (d < best) {
            best = d;
            pump = &m;
        }
    }
    const eocavity::OpticalMode* out = nullptr;
    for (const auto& m : modes)
        if (m.longitudinal_index == pump->longitudinal_index + 1) out = &m;
    if (!out) throw ModelError("no upper neighbor mode found next to the pump");
    return {*pump, *out};
}

std::string g0_report_json(const eocavity::DeviceFixture& dev,
                           const eocavity::MicrowaveMode& mw, double air_gap,
                           bool include_gap_as_tuned, double tune_residual) {
    ModePair pair = modes_at_gap(dev, air_gap);
    eocavity::CouplingInput ci{dev.material, mw, pair.pump, pair.output,
                               dev.slab.len_x, air_gap};
    auto res = eocavity::g0_quasi_1d(ci);
    JsonWriter w;
    w.begin_object();
    if (include_gap_as_tuned) {
        w.field("air_gap_m", air_gap);
        w.field("residual_hz", tune_residual);
    } else {
        w.field("air_gap_m", air_gap);
    }
    w.field("g0_hz", res.g0);
    w.field("overlap_integral_m", res.overlap_integral);
    w.field("phase_mismatch_rad", res.phase_mismatch);
    w.field("pump_freq_hz", pair.pump.freq);
    w.field("output_freq_hz", pair.output.freq);
    w.field("delta_op_hz", pair.output.freq - pair.pump.freq);
    w.field("microwave_freq_hz", mw.freq);
    w.field("detuning_residual_hz", pair.output.freq - pair.pump.freq - mw.freq);
    w.field("pump_kappa_o_hz", pair.pump.kappa_o);
    w.field("output_kappa_o_hz", pair.output.kappa_o);
    w.field("pump_A", pair.pump.A);
    w.field("output_A", pair.output.A);
    w.end_object();
    return w.str();
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

struct CommandContext {
    ConfigSource src;
    json root;
    Resolved resolved;
    ArtifactSet artifacts;
    std::string format = "csv";
    int threads = 0;
};

void cmd_modes_optical(CommandContext& ctx) {
    const json& jc = section(ctx.root, "modes_optical");
    check_keys(ctx.src, jc, "modes_optical", {"f_lo_hz", "f_hi_hz"});
    const auto& dev = ctx.resolved.device;
    const double f_laser = eocavity::constants.c / dev.laser_wavelength;
    const double f_lo = get_num(ctx.src, jc, "f_lo_hz", f_laser - 40e9);
    const double f_hi = get_num(ctx.src, jc, "f_hi_hz", f_laser + 40e9);
    if (!(f_hi > f_lo)) config_fail(ctx.src, "f_hi_hz", "f_hi_hz must exceed f_lo_hz");

    auto stack = eocavity::device_stack(dev, dev.air_gap);
    auto modes = eocavity::find_resonances(stack, dev.material, f_lo, f_hi);
    if (ctx.format == "csv") {
        ctx.artifacts.add("modes_optical.csv", eocavity::optical_modes_csv(modes));
    } else {
        JsonWriter w;
        w.begin_object();
        w.begin_array("modes");
        for (const auto& m : modes) {
            w.begin_object();
            w.field("index", static_cast<long long>(m.longitudinal_index));
            w.field("freq_hz", m.freq);
            w.field("A", m.A);
            w.field("L_eff_m", m.L_eff);
            w.field("kappa_o_hz", m.kappa_o);
            w.field("kappa_o_ext_hz", m.kappa_o_ext);
            w.end_object();
        }
        w.end_array();
        w.end_object();
        ctx.artifacts.add("modes_optical.json", w.str());
    }
    ctx.artifacts.add("run.json",
                      run_json("modes-optical", ctx.resolved, [&](JsonWriter& w) {
                          w.begin_object("modes_optical");
                          w.field("f_hi_hz", f_hi);
                          w.field("f_lo_hz", f_lo);
                          w.end_object();
                      }));
}

void cmd_modes_microwave(CommandContext& ctx) {
    const json& jc = section(ctx.root, "modes_microwave");
    check_keys(ctx.src, jc, "modes_microwave", {"max_l", "max_m", "max_p"});
    const int max_l = get_int(ctx.src, jc, "max_l", 1);
    const int max_m = get_int(ctx.src, jc, "max_m", 3);
    const int max_p = get_int(ctx.src, jc, "max_p", 1);
    if (max_l < 1 || max_m < 1 || max_p < 1)
        config_fail(ctx.src, "modes_microwave", "mode index limits must be >= 1");

    std::vector<eocavity::MicrowaveMode> modes;
    for (int l = 1; l <= max_l; ++l)
        for (int m = 1; m <= max_m; ++m)
            for (int p = 1; p <= max_p; ++p)
                modes.push_back(eocavity::make_microwave_mode(ctx.resolved.device, l, m, p,
                                                              ctx.resolved.mw.eps_eff, 33));
    std::sort(modes.begin(), modes.end(),
              [](const auto& a, const auto& b) { return a.freq < b.freq; });
    if (ctx.format == "csv") {
        ctx.artifacts.add("modes_microwave.csv", eocavity::microwave_modes_csv(modes));
    } else {
        JsonWriter w;
        w.begin_object();
        w.begin_array("modes");
        for (const auto& m : modes) {
            w.begin_object();
            w.field("l", m.indices[0]);
            w.field("m", m.indices[1]);
            w.field("p", m.indices[2]);
            w.field("freq_hz", m.freq);
            w.field("V_m_mm3", m.V_m * 1e9);
            w.field("kappa_m_hz", m.kappa_m);
            w.end_object();
        }
        w.end_array();
        w.end_object();
        ctx.artifacts.add("modes_microwave.json", w.str());
    }
    ctx.artifacts.add("run.json",
                      run_json("modes-microwave", ctx.resolved, [&](JsonWriter& w) {
                          w.begin_object("modes_microwave");
                          w.field("max_l", max_l);
                          w.field("max_m", max_m);
                          w.field("max_p", max_p);
                          w.end_object();
                      }));
}

void cmd_g0(CommandContext& ctx) {
    const auto& r = ctx.resolved;
    auto mw = eocavity::make_microwave_mode(r.device, r.mw.l, r.mw.m, r.mw.p, r.mw.eps_eff);
    ctx.artifacts.add("g0.json", g0_report_json(r.device, mw, r.device.air_gap, false, 0.0));
    ctx.artifacts.add("run.json", run_json("g0", r, nullptr));
}

void cmd_tune(CommandContext& ctx) {
    const auto& r = ctx.resolved;
    auto mw = eocavity::make_microwave_mode(r.device, r.mw.l, r.mw.m, r.mw.p, r.mw.eps_eff);
    const double g_star = eocavity::tune_triple_resonance(r.device, mw);
    ModePair pair = modes_at_gap(r.device, g_star);
    const double residual = pair.output.freq - pair.pump.freq - mw.freq;
    ctx.artifacts.add("tune.json", g0_report_json(r.device, mw, g_star, true, residual));
    ctx.artifacts.add("run.json", run_json("tune", r, nullptr));
}

void cmd_sweep(CommandContext& ctx) {
    const json& jc = section(ctx.root, "sweep");
    check_keys(ctx.src, jc, "sweep",
               {"axis", "axis_lo", "axis_hi", "axis_points", "drive_lo_hz", "drive_hi_hz",
                "drive_points", "modes"});
    const auto& dev = ctx.resolved.device;
    const std::string axis_name = get_str(ctx.src, jc, "axis", "air_gap");
    eocavity::SweepAxis axis;
    double def_lo = 0.0, def_hi = 0.0;
    if (axis_name == "air_gap") {
        axis = eocavity::SweepAxis::air_gap;
        def_lo = dev.air_gap - 0.1e-3;
        def_hi = dev.air_gap + 0.1e-3;
    } else if (axis_name == "wavelength") {
        axis = eocavity::SweepAxis::wavelength;
        def_lo = dev.laser_wavelength * (1.0 - 2e-4);
        def_hi = dev.laser_wavelength * (1.0 + 2e-4);
    } else {
        config_fail(ctx.src, "axis", "axis must be \"air_gap\" or \"wavelength\"");
    }
    const double axis_lo = get_num(ctx.src, jc, "axis_lo", def_lo);
    const double axis_hi = get_num(ctx.src, jc, "axis_hi", def_hi);
    const int axis_points = get_int(ctx.src, jc, "axis_points", 41);
    const double drive_lo = get_num(ctx.src, jc, "drive_lo_hz", 6.0e9);
    const double drive_hi = get_num(ctx.src, jc, "drive_hi_hz", 10.5e9);
    const int drive_points = get_int(ctx.src, jc, "drive_points", 301);
    if (!(axis_hi > axis_lo)) config_fail(ctx.src, "axis_hi", "axis_hi must exceed axis_lo");
    if (axis_points < 2 || drive_points < 2)
        config_fail(ctx.src, "axis_points", "sweep grids need at least 2 points per axis");
    if (!(drive_hi > drive_lo))
        config_fail(ctx.src, "drive_hi_hz", "drive_hi_hz must exceed drive_lo_hz");

    std::vector<std::array<int, 3>> mode_indices = {{1, 1, 1}, {1, 3, 1}};
    if (jc.contains("modes")) {
        const json& jm = jc.at("modes");
        if (!jm.is_array()) config_fail(ctx.src, "modes", "'modes' must be an array");
        mode_indices.clear();
        for (const auto& e : jm) {
            if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
                !e[1].is_number_integer() || !e[2].is_number_integer())
                config_fail(ctx.src, "modes", "each mode must be an [l, m, p] triple");
            mode_indices.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<int>()});
        }
    }
    std::vector<eocavity::MicrowaveMode> mw_modes;
    for (const auto& idx : mode_indices)
        mw_modes.push_back(eocavity::make_microwave_mode(dev, idx[0], idx[1], idx[2],
                                                         ctx.resolved.mw.eps_eff));

    auto sweep = eocavity::sweep_triple_resonance(dev, mw_modes, axis, axis_lo, axis_hi,
                                                  axis_points, drive_lo, drive_hi,
                                                  drive_points, ctx.threads);

    if (ctx.format == "csv") {
        ctx.artifacts.add("sweep.csv", eocavity::sweep_csv(sweep));
    } else {
        JsonWriter w;
        w.begin_object();
        w.field("axis1_name", sweep.axis1_name);
        w.field("axis2_name", sweep.axis2_name);
        w.field("axis1", sweep.axis1);
        w.field("axis2", sweep.axis2);
        w.field("magnitude", sweep.magnitude);
        w.end_object();
        ctx.artifacts.add("sweep.json", w.str());
    }

    auto command_echo = [&](JsonWriter& w) {
        w.begin_object("sweep");
        w.field("axis", axis_name);
        w.field("axis_hi", axis_hi);
        w.field("axis_lo", axis_lo);
        w.field("axis_points", axis_points);
        w.field("drive_hi_hz", drive_hi);
        w.field("drive_lo_hz", drive_lo);
        w.field("drive_points", drive_points);
        w.begin_array("modes");
        for (const auto& idx : mode_indices) {
            w.begin_array();
            w.element(static_cast<long long>(idx[0]));
            w.element(static_cast<long long>(idx[1]));
            w.element(static_cast<long long>(idx[2]));
            w.end_array();
        }
        w.end_array();
        w.end_object();
    };
    const std::string run = run_json("sweep", ctx.resolved, command_echo);

    JsonWriter meta;
    meta.begin_object();
    meta.field("axis1_name", sweep.axis1_name);
    meta.field("axis1_unit", axis == eocavity::SweepAxis::air_gap ? "m" : "m");
    meta.field("axis2_name", sweep.axis2_name);
    meta.field("axis2_unit", "Hz");
    meta.field("value_name", "magnitude");
    meta.field("value_unit", "sqrt(efficiency), dimensionless");
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(eocavity::fnv1a_hash(run)));
    meta.field("fixture_hash", hash);
    meta.begin_array("flagged_axis1_indices");
    for (std::size_t i = 0; i < sweep.flagged.size(); ++i)
        if (sweep.flagged[i]) meta.element(static_cast<long long>(i));
    meta.end_array();
    meta.end_object();
    ctx.artifacts.add("sweep_meta.json", meta.str());
    ctx.artifacts.add("run.json", run);
}

eocavity::TransductionParams params_from_rates(const Rates& r) {
    eocavity::TransductionParams p;
    p.N_p = r.N_p;
    p.g0 = r.g0;
    p.kappa_o = r.kappa_o;
    p.kappa_o_ext = r.kappa_o_ext;
    p.kappa_m = r.kappa_m;
    p.kappa_m_ext = r.kappa_m_ext;
    p.omega_m = r.omega_m;
    p.delta_op = r.delta_op;
    return p;
}

void cmd_spectrum(CommandContext& ctx) {
    const json& jc = section(ctx.root, "spectrum");
    check_keys(ctx.src, jc, "spectrum", {"freq_lo_hz", "freq_hi_hz", "points"});
    const Rates& rr = ctx.resolved.rates;
    const double f_lo = get_num(ctx.src, jc, "freq_lo_hz", rr.omega_m - 50e6);
    const double f_hi = get_num(ctx.src, jc, "freq_hi_hz", rr.omega_m + 50e6);
    const int points = get_int(ctx.src, jc, "points", 2001);
    if (!(f_hi > f_lo)) config_fail(ctx.src, "freq_hi_hz", "freq_hi_hz must exceed freq_lo_hz");
    if (points < 2) config_fail(ctx.src, "points", "points must be >= 2");

    auto params = params_from_rates(rr);
    std::vector<double> freq(points);
    for (int i = 0; i < points; ++i)
        freq[i] = f_lo + (f_hi - f_lo) * static_cast<double>(i) /
                             static_cast<double>(points - 1);
    auto eta = eocavity::efficiency_spectrum(params, freq);

    const double C =
        eocavity::cooperativity(params.N_p, params.g0, params.kappa_o, params.kappa_m);
    const double eta_peak = eocavity::peak_efficiency(
        C, params.kappa_o_ext / params.kappa_o, params.kappa_m_ext / params.kappa_m);

    if (ctx.format == "csv") {
        ctx.artifacts.add("spectrum.csv", eocavity::spectrum_csv(freq, eta, "efficiency"));
    } else {
        JsonWriter w;
        w.begin_object();
        w.field("freq_hz", freq);
        w.field("efficiency", eta);
        w.end_object();
        ctx.artifacts.add("spectrum.json", w.str());
    }
    JsonWriter s;
    s.begin_object();
    s.field("C", C);
    s.field("eta_peak", eta_peak);
    s.field("eta_max_on_grid", *std::max_element(eta.begin(), eta.end()));
    s.end_object();
    ctx.artifacts.add("spectrum_summary.json", s.str());
    ctx.artifacts.add("run.json", run_json("spectrum", ctx.resolved, [&](JsonWriter& w) {
                          w.begin_object("spectrum");
                          w.field("freq_hi_hz", f_hi);
                          w.field("freq_lo_hz", f_lo);
                          w.field("points", points);
                          w.end_object();
                      }));
}

void cmd_nms(CommandContext& ctx) {
    const json& jc = section(ctx.root, "nms");
    check_keys(ctx.src, jc, "nms",
               {"n_m", "delta_hz", "freq_lo_hz", "freq_hi_hz", "points"});
    const Rates& rr = ctx.resolved.rates;
    const double n_m = get_num(ctx.src, jc, "n_m", 1.3e15);
    const double delta = get_num(ctx.src, jc, "delta_hz", 0.0);
    const double f_lo = get_num(ctx.src, jc, "freq_lo_hz", -150e6);
    const double f_hi = get_num(ctx.src, jc, "freq_hi_hz", 150e6);
    const int points = get_int(ctx.src, jc, "points", 4001);
    if (!(n_m > 0.0)) config_fail(ctx.src, "n_m", "n_m must be > 0");
    if (!(f_hi > f_lo)) config_fail(ctx.src, "freq_hi_hz", "freq_hi_hz must exceed freq_lo_hz");
    if (points < 2) config_fail(ctx.src, "points", "points must be >= 2");

    eocavity::NmsParams params{n_m, rr.g0, rr.kappa_o, delta};
    std::vector<double> freq(points);
    for (int i = 0; i < points; ++i)
        freq[i] = f_lo + (f_hi - f_lo) * static_cast<double>(i) /
                             static_cast<double>(points - 1);
    auto mag = eocavity::nms_spectrum(params, freq);
    const double splitting = eocavity::nms_splitting(params);
    const auto weights = eocavity::nms_weights(params);

    if (ctx.format == "csv") {
        ctx.artifacts.add("nms.csv", eocavity::spectrum_csv(freq, mag, "magnitude"));
    } else {
        JsonWriter w;
        w.begin_object();
        w.field("detuning_hz", freq);
        w.field("magnitude", mag);
        w.end_object();
        ctx.artifacts.add("nms.json", w.str());
    }
    JsonWriter s;
    s.begin_object();
    s.field("splitting_hz", splitting);
    s.field("weight_low", weights.first);
    s.field("weight_high", weights.second);
    s.end_object();
    ctx.artifacts.add("nms_summary.json", s.str());
    ctx.artifacts.add("run.json", run_json("nms", ctx.resolved, [&](JsonWriter& w) {
                          w.begin_object("nms");
                          w.field("delta_hz", delta);
                          w.field("freq_hi_hz", f_hi);
                          w.field("freq_lo_hz", f_lo);
                          w.field("n_m", n_m);
                          w.field("points", points);
                          w.end_object();
                      }));
}

void cmd_noise(CommandContext& ctx) {
    const Rates& rr = ctx.resolved.rates;
    const double C = eocavity::cooperativity(rr.N_p, rr.g0, rr.kappa_o, rr.kappa_m);
    const double eta = eocavity::peak_efficiency(C, rr.kappa_o_ext / rr.kappa_o,
                                                 rr.kappa_m_ext / rr.kappa_m);
    const double kappa_m_int = rr.kappa_m - rr.kappa_m_ext;
    auto budget = eocavity::noise_budget(C, eta, rr.kappa_o_ext, rr.kappa_o, kappa_m_int,
                                         rr.kappa_m_ext, ctx.resolved.device.temperature,
                                         rr.omega_m);
    JsonWriter w;
    w.begin_object();
    w.field("C", C);
    w.field("eta_peak", eta);
    w.field("kappa_m_int_hz", kappa_m_int);
    w.field("n_th", budget.n_th);
    w.field("snr_db", budget.snr_db);
    w.field("n_added_qu", budget.n_added_qu);
    w.field("n_added_th", budget.n_added_th);
    w.field("T_n_k", budget.T_n);
    w.field("noise_figure_db", budget.noise_figure_db);
    w.field("temperature_k", ctx.resolved.device.temperature);
    w.field("omega_m_hz", rr.omega_m);
    w.end_object();
    ctx.artifacts.add("noise.json", w.str());
    ctx.artifacts.add("run.json", run_json("noise", ctx.resolved, nullptr));
}

void cmd_optimize_coupling(CommandContext& ctx) {
    const Rates& rr = ctx.resolved.rates;
    const double kappa_m_int = rr.kappa_m - rr.kappa_m_ext;
    auto opt = eocavity::optimize_antenna_coupling(rr.N_p, rr.g0, rr.kappa_o,
                                                   rr.kappa_o_ext, kappa_m_int,
                                                   ctx.resolved.device.temperature,
                                                   rr.omega_m);
    JsonWriter w;
    w.begin_object();
    w.field("kappa_m_ext_hz", opt.kappa_m_ext);
    w.field("T_n_k", opt.T_n);
    w.field("noise_figure_db", opt.noise_figure_db);
    w.field("C", opt.C);
    w.field("eta_peak", opt.eta_peak);
    w.field("n_added_qu", opt.n_added_qu);
    w.field("n_added_th", opt.n_added_th);
    w.field("kappa_m_int_hz", kappa_m_int);
    w.end_object();
    ctx.artifacts.add("optimize_coupling.json", w.str());
    ctx.artifacts.add("run.json", run_json("optimize-coupling", ctx.resolved, nullptr));
}

void cmd_fit(CommandContext& ctx) {
    const json& jc = section(ctx.root, "fit");
    check_keys(ctx.src, jc, "fit", {"trace_csv", "model", "coupling_scale", "initial",
                                    "bounds"});
    if (!jc.contains("trace_csv"))
        config_fail(ctx.src, "fit", "fit requires 'trace_csv' in the fit section");
    std::string trace_path = get_str(ctx.src, jc, "trace_csv", "");
    const std::string model = get_str(ctx.src, jc, "model", "lineshape");
    if (model != "lineshape" && model != "nms")
        config_fail(ctx.src, "model", "model must be \"lineshape\" or \"nms\"");

    // Relative trace paths are resolved against the config file's directory,
    // so a config and its companion trace can be shipped together.
    {
        std::filesystem::path tp(trace_path);
        if (tp.is_relative()) {
            std::filesystem::path base = std::filesystem::path(ctx.src.path).parent_path();
            if (!base.empty()) trace_path = (base / tp).string();
        }
    }
    const std::string content = eocavity::read_file(trace_path);
    eocavity::Trace trace = eocavity::read_trace_csv(content, trace_path);

    eocavity::FitResult result;
    if (model == "lineshape") {
        const json& ji = section(jc, "initial");
        check_keys(ctx.src, ji, "fit.initial",
                   {"gain", "C", "kappa_o_hz", "kappa_m_hz", "omega_m_hz", "delta_op_hz"});
        // Rough defaults from the trace when a guess is not supplied: both
        // locations at the peak, widths a tenth of the window.
        std::size_t imax = 0;
        for (std::size_t i = 1; i < trace.value.size(); ++i)
            if (trace.value[i] > trace.value[imax]) imax = i;
        const double span = trace.freq.back() - trace.freq.front();
        eocavity::LineshapeGuess guess;
        guess.C = get_num(ctx.src, ji, "C", 0.02);
        guess.gain = get_num(ctx.src, ji, "gain",
                             trace.value[imax] / (4.0 * guess.C) * (1.0 + guess.C) *
                                 (1.0 + guess.C));
        guess.kappa_o = get_num(ctx.src, ji, "kappa_o_hz", span / 10.0);
        guess.kappa_m = get_num(ctx.src, ji, "kappa_m_hz", span / 10.0);
        guess.omega_m = get_num(ctx.src, ji, "omega_m_hz", trace.freq[imax]);
        guess.delta_op = get_num(ctx.src, ji, "delta_op_hz", trace.freq[imax]);

        const json& jb = section(jc, "bounds");
        check_keys(ctx.src, jb, "fit.bounds", {"scale_lo", "scale_hi", "location_pad_hz"});
        eocavity::LineshapeBounds bounds;
        bounds.scale_lo = get_num(ctx.src, jb, "scale_lo", bounds.scale_lo);
        bounds.scale_hi = get_num(ctx.src, jb, "scale_hi", bounds.scale_hi);
        bounds.location_pad = get_num(ctx.src, jb, "location_pad_hz", bounds.location_pad);

        std::optional<double> coupling_scale;
        if (jc.contains("coupling_scale")) {
            if (!jc.at("coupling_scale").is_number())
                config_fail(ctx.src, "coupling_scale", "'coupling_scale' must be a number");
            coupling_scale = jc.at("coupling_scale").get<double>();
        }
        result = eocavity::fit_lineshape(trace, guess, bounds, coupling_scale);
    } else {
        const json& ji = section(jc, "initial");
        check_keys(ctx.src, ji, "fit.initial",
                   {"center_hz", "splitting_hz", "kappa_hz", "weight_low", "weight_high"});
        eocavity::NmsGuess guess = eocavity::nms_guess_from_trace(trace);
        guess.center = get_num(ctx.src, ji, "center_hz", guess.center);
        guess.splitting = get_num(ctx.src, ji, "splitting_hz", guess.splitting);
        guess.kappa = get_num(ctx.src, ji, "kappa_hz", guess.kappa);
        guess.weight_low = get_num(ctx.src, ji, "weight_low", guess.weight_low);
        guess.weight_high = get_num(ctx.src, ji, "weight_high", guess.weight_high);
        result = eocavity::fit_nms(trace, guess);
    }
    ctx.artifacts.add("fit.json", eocavity::fit_result_json(result));
    ctx.artifacts.add("run.json", run_json("fit", ctx.resolved, [&](JsonWriter& w) {
                          w.begin_object("fit");
                          w.field("model", model);
                          w.field("trace_csv", trace_path);
                          w.end_object();
                      }));
}

// ---------------------------------------------------------------------------

int run_cli(int argc, char** argv) {
    CLI::App app{"Triply resonant cavity electro-optic transducer design toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::string format = "csv";
    int threads = 0;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"modes-optical", "Table of optical cavity resonances"},
        {"modes-microwave", "Table of microwave slab modes"},
        {"g0", "Single-photon coupling rate at the configured air gap"},
        {"tune", "Find the triple-resonance air gap, then report g0 there"},
        {"sweep", "Transduction magnitude map over an axis and drive frequency"},
        {"spectrum", "Conversion efficiency lineshape from characterized rates"},
        {"nms", "Normal-mode-splitting spectrum under strong microwave drive"},
        {"noise", "Noise budget at the configured operating point"},
        {"optimize-coupling", "Antenna coupling minimizing receiver noise temperature"},
        {"fit", "Fit a measured trace (lineshape or NMS model)"},
    };
    for (const auto& [name, desc] : commands) {
        auto* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--out", out_dir, "Output directory (default: current)");
        sub->add_option("--threads", threads,
                        "Worker threads for sweeps (default: available parallelism)")
            ->envname("EOCAVITY_THREADS");
        sub->add_option("--format", format, "Table output format")
            ->check(CLI::IsMember({"csv", "json"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    CommandContext ctx;
    ctx.src.path = config_path;
    ctx.src.raw = eocavity::read_file(config_path);
    ctx.root = parse_config(ctx.src);
    check_keys(ctx.src, ctx.root, "(top level)",
               {"device", "laser", "microwave", "rates", "modes_optical",
                "modes_microwave", "sweep", "spectrum", "nms", "fit"});
    ctx.resolved = resolve_fixture(ctx.src, ctx.root);
    ctx.artifacts.out_dir = out_dir;
    ctx.format = format;
    if (threads <= 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        threads = hw > 0 ? static_cast<int>(hw) : 1;
    }
    ctx.threads = threads;

    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "modes-optical")
        cmd_modes_optical(ctx);
    else if (cmd == "modes-microwave")
        cmd_modes_microwave(ctx);
    else if (cmd == "g0")
        cmd_g0(ctx);
    else if (cmd == "tune")
        cmd_tune(ctx);
    else if (cmd == "sweep")
        cmd_sweep(ctx);
    else if (cmd == "spectrum")
        cmd_spectrum(ctx);
    else if (cmd == "nms")
        cmd_nms(ctx);
    else if (cmd == "noise")
        cmd_noise(ctx);
    else if (cmd == "optimize-coupling")
        cmd_optimize_coupling(ctx);
    else if (cmd == "fit")
        cmd_fit(ctx);

    ctx.artifacts.flush();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ModelError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
