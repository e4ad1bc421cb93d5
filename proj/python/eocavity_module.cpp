#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "eocavity/constants.hpp"
#include "eocavity/device.hpp"
#include "eocavity/eo_coupling.hpp"
#include "eocavity/errors.hpp"
#include "eocavity/fitting.hpp"
#include "eocavity/microwave.hpp"
#include "eocavity/noise.hpp"
#include "eocavity/optical_cavity.hpp"
#include "eocavity/transduction.hpp"

namespace py = pybind11;
using namespace eocavity;

PYBIND11_MODULE(_eocavity, m) {
    m.doc() = "Triply resonant cavity electro-optic transducer model";
    m.attr("__version__") = EOCAVITY_VERSION;
    m.attr("SPEED_OF_LIGHT") = constants.c;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ModelError>(m, "ModelError", PyExc_RuntimeError);
    py::register_exception<IoError>(m, "IoError", PyExc_IOError);

    // device
    py::class_<Material>(m, "Material")
        .def(py::init<>())
        .def_readwrite("n_opt", &Material::n_opt)
        .def_readwrite("eps_x", &Material::eps_x)
        .def_readwrite("eps_y", &Material::eps_y)
        .def_readwrite("eps_z", &Material::eps_z)
        .def_readwrite("r33", &Material::r33)
        .def_readwrite("name", &Material::name);
    py::class_<SlabGeometry>(m, "SlabGeometry")
        .def(py::init<>())
        .def_readwrite("len_x", &SlabGeometry::len_x)
        .def_readwrite("len_y", &SlabGeometry::len_y)
        .def_readwrite("len_z", &SlabGeometry::len_z)
        .def("volume", &SlabGeometry::volume);
    py::class_<LossBudget>(m, "LossBudget")
        .def(py::init<>())
        .def_readwrite("back_mirror_T", &LossBudget::back_mirror_T)
        .def_readwrite("front_mirror_T", &LossBudget::front_mirror_T)
        .def_readwrite("excess_loss", &LossBudget::excess_loss);
    py::class_<DeviceFixture>(m, "DeviceFixture")
        .def(py::init<>())
        .def_readwrite("material", &DeviceFixture::material)
        .def_readwrite("slab", &DeviceFixture::slab)
        .def_readwrite("losses", &DeviceFixture::losses)
        .def_readwrite("ar_index", &DeviceFixture::ar_index)
        .def_readwrite("ar_thickness", &DeviceFixture::ar_thickness)
        .def_readwrite("air_gap", &DeviceFixture::air_gap)
        .def_readwrite("laser_wavelength", &DeviceFixture::laser_wavelength)
        .def_readwrite("laser_power", &DeviceFixture::laser_power)
        .def_readwrite("mode_match", &DeviceFixture::mode_match)
        .def_readwrite("q_int", &DeviceFixture::q_int)
        .def_readwrite("kappa_m_ext", &DeviceFixture::kappa_m_ext)
        .def_readwrite("beam_y", &DeviceFixture::beam_y)
        .def_readwrite("beam_z", &DeviceFixture::beam_z)
        .def_readwrite("temperature", &DeviceFixture::temperature);
    m.def("default_ln_material", &default_ln_material);
    m.def("reference_device", &reference_device);

    // optical cavity
    py::class_<Layer>(m, "Layer")
        .def(py::init<>())
        .def(py::init([](double index, double thickness) {
                 return Layer{index, thickness};
             }),
             py::arg("index"), py::arg("thickness"))
        .def_readwrite("index", &Layer::index)
        .def_readwrite("thickness", &Layer::thickness);
    py::class_<LayerStack>(m, "LayerStack")
        .def(py::init<>())
        .def_readwrite("layers", &LayerStack::layers)
        .def_readwrite("back_mirror_T", &LayerStack::back_mirror_T)
        .def_readwrite("front_mirror_T", &LayerStack::front_mirror_T)
        .def_readwrite("excess_loss", &LayerStack::excess_loss)
        .def("optical_path_length", &LayerStack::optical_path_length)
        .def("total_thickness", &LayerStack::total_thickness);
    py::class_<FieldSample>(m, "FieldSample")
        .def_readonly("x", &FieldSample::x)
        .def_readonly("amplitude", &FieldSample::amplitude);
    py::class_<OpticalMode>(m, "OpticalMode")
        .def_readonly("freq", &OpticalMode::freq)
        .def_readonly("longitudinal_index", &OpticalMode::longitudinal_index)
        .def_readonly("A", &OpticalMode::A)
        .def_readonly("L_eff", &OpticalMode::L_eff)
        .def_readonly("kappa_o", &OpticalMode::kappa_o)
        .def_readonly("kappa_o_ext", &OpticalMode::kappa_o_ext)
        .def_readonly("fsr_local", &OpticalMode::fsr_local)
        .def_readonly("field_profile", &OpticalMode::field_profile);
    py::class_<StackReflection>(m, "StackReflection")
        .def_readonly("amplitude", &StackReflection::amplitude)
        .def_readonly("power", &StackReflection::power);
    py::enum_<InputSide>(m, "InputSide")
        .value("back", InputSide::back)
        .value("front", InputSide::front);
    py::class_<Linewidths>(m, "Linewidths")
        .def_readonly("finesse", &Linewidths::finesse)
        .def_readonly("kappa_o", &Linewidths::kappa_o)
        .def_readonly("kappa_o_ext", &Linewidths::kappa_o_ext);
    m.def("fresnel_reflectivity", &fresnel_reflectivity, py::arg("n1"), py::arg("n2"));
    m.def("stack_reflectivity", &stack_reflectivity, py::arg("stack"),
          py::arg("wavelength"));
    m.def("find_resonances", &find_resonances, py::arg("stack"), py::arg("material"),
          py::arg("f_lo"), py::arg("f_hi"), py::arg("input") = InputSide::back,
          py::arg("profile_samples") = 513);
    m.def("effective_length", &effective_length, py::arg("A"), py::arg("L_LN"),
          py::arg("L_air"), py::arg("n"));
    m.def("linewidth_from_losses", &linewidth_from_losses, py::arg("stack"),
          py::arg("fsr_local"), py::arg("input") = InputSide::back);
    m.def("device_stack", &device_stack, py::arg("device"), py::arg("air_gap"));
    m.def("lock_pump_mode", &lock_pump_mode, py::arg("device"), py::arg("air_gap"),
          py::arg("laser_freq"));

    // microwave
    py::class_<MicrowaveMode>(m, "MicrowaveMode")
        .def(py::init<>())
        .def_readwrite("indices", &MicrowaveMode::indices)
        .def_readwrite("freq", &MicrowaveMode::freq)
        .def_readwrite("V_m", &MicrowaveMode::V_m)
        .def_readwrite("Q_int", &MicrowaveMode::Q_int)
        .def_readwrite("kappa_m", &MicrowaveMode::kappa_m)
        .def_readwrite("kappa_m_int", &MicrowaveMode::kappa_m_int)
        .def_readwrite("kappa_m_ext", &MicrowaveMode::kappa_m_ext)
        .def_readwrite("psi_axial", &MicrowaveMode::psi_axial);
    m.def("mode_frequency", &mode_frequency, py::arg("geometry"), py::arg("material"),
          py::arg("l"), py::arg("m"), py::arg("p"),
          py::arg("eps_eff") = std::optional<double>());
    m.def("mode_volume", &mode_volume, py::arg("geometry"), py::arg("material"),
          py::arg("l"), py::arg("m"), py::arg("p"));
    m.def("axial_profile", &axial_profile, py::arg("geometry"), py::arg("l"), py::arg("m"),
          py::arg("p"), py::arg("y0"), py::arg("z0"), py::arg("samples") = 4097);
    m.def("make_microwave_mode", &make_microwave_mode, py::arg("device"), py::arg("l"),
          py::arg("m"), py::arg("p"), py::arg("eps_eff") = std::optional<double>(),
          py::arg("samples") = 4097);

    // electro-optic coupling
    py::class_<CouplingInput>(m, "CouplingInput")
        .def(py::init<>())
        .def_readwrite("material", &CouplingInput::material)
        .def_readwrite("microwave_mode", &CouplingInput::microwave_mode)
        .def_readwrite("pump_mode", &CouplingInput::pump_mode)
        .def_readwrite("output_mode", &CouplingInput::output_mode)
        .def_readwrite("L_LN", &CouplingInput::L_LN)
        .def_readwrite("L_air", &CouplingInput::L_air);
    py::class_<CouplingResult>(m, "CouplingResult")
        .def_readonly("g0", &CouplingResult::g0)
        .def_readonly("overlap_integral", &CouplingResult::overlap_integral)
        .def_readonly("phase_mismatch", &CouplingResult::phase_mismatch);
    py::class_<SampledField>(m, "SampledField")
        .def(py::init<>())
        .def_readwrite("nx", &SampledField::nx)
        .def_readwrite("ny", &SampledField::ny)
        .def_readwrite("nz", &SampledField::nz)
        .def_readwrite("x0", &SampledField::x0)
        .def_readwrite("x1", &SampledField::x1)
        .def_readwrite("y0", &SampledField::y0)
        .def_readwrite("y1", &SampledField::y1)
        .def_readwrite("z0", &SampledField::z0)
        .def_readwrite("z1", &SampledField::z1)
        .def_readwrite("values", &SampledField::values);
    m.def("g0_quasi_1d", &g0_quasi_1d, py::arg("input"));
    m.def("g0_general", &g0_general, py::arg("material"), py::arg("psi_m"),
          py::arg("psi_p"), py::arg("psi_o"), py::arg("f_m"), py::arg("f_p"),
          py::arg("f_o"), py::arg("V_m"), py::arg("V_p"), py::arg("V_o"));
    m.def("calibrate_g0_from_nms", &calibrate_g0_from_nms, py::arg("delta_nms"),
          py::arg("n_m"));

    // transduction
    py::class_<TransductionParams>(m, "TransductionParams")
        .def(py::init<>())
        .def_readwrite("N_p", &TransductionParams::N_p)
        .def_readwrite("g0", &TransductionParams::g0)
        .def_readwrite("kappa_o", &TransductionParams::kappa_o)
        .def_readwrite("kappa_o_ext", &TransductionParams::kappa_o_ext)
        .def_readwrite("kappa_m", &TransductionParams::kappa_m)
        .def_readwrite("kappa_m_ext", &TransductionParams::kappa_m_ext)
        .def_readwrite("omega_m", &TransductionParams::omega_m)
        .def_readwrite("delta_op", &TransductionParams::delta_op);
    py::class_<NmsParams>(m, "NmsParams")
        .def(py::init<>())
        .def_readwrite("n_m", &NmsParams::n_m)
        .def_readwrite("g0", &NmsParams::g0)
        .def_readwrite("kappa_o", &NmsParams::kappa_o)
        .def_readwrite("delta", &NmsParams::delta);
    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("axis1", &SweepResult::axis1)
        .def_readonly("axis2", &SweepResult::axis2)
        .def_readonly("magnitude", &SweepResult::magnitude)
        .def_readonly("flagged", &SweepResult::flagged)
        .def_readonly("axis1_name", &SweepResult::axis1_name)
        .def_readonly("axis2_name", &SweepResult::axis2_name);
    py::enum_<SweepAxis>(m, "SweepAxis")
        .value("air_gap", SweepAxis::air_gap)
        .value("wavelength", SweepAxis::wavelength);
    py::class_<LockedSpacing>(m, "LockedSpacing")
        .def_readonly("air_gap", &LockedSpacing::air_gap)
        .def_readonly("pump_freq", &LockedSpacing::pump_freq)
        .def_readonly("delta_up", &LockedSpacing::delta_up)
        .def_readonly("delta_down", &LockedSpacing::delta_down);
    m.def("cooperativity", &cooperativity, py::arg("N_p"), py::arg("g0"),
          py::arg("kappa_o"), py::arg("kappa_m"));
    m.def("peak_efficiency", &peak_efficiency, py::arg("C"), py::arg("ratio_o"),
          py::arg("ratio_m"));
    m.def("efficiency_spectrum", &efficiency_spectrum, py::arg("params"),
          py::arg("omega_hz"));
    m.def("efficiency_at", &efficiency_at, py::arg("params"), py::arg("omega_hz"));
    m.def("pump_occupation", &pump_occupation, py::arg("P_in"), py::arg("mode_match"),
          py::arg("kappa_o"), py::arg("kappa_o_ext"), py::arg("omega_p_hz"),
          py::arg("detuning_hz"));
    m.def("nms_spectrum", &nms_spectrum, py::arg("params"), py::arg("detuning_hz"));
    m.def("nms_splitting", &nms_splitting, py::arg("params"));
    m.def("nms_weights", &nms_weights, py::arg("params"));
    m.def("sweep_triple_resonance",
          py::overload_cast<const DeviceFixture&, const std::vector<MicrowaveMode>&,
                            SweepAxis, double, double, int, double, double, int, int>(
              &sweep_triple_resonance),
          py::arg("device"), py::arg("mw_modes"), py::arg("axis"), py::arg("axis_lo"),
          py::arg("axis_hi"), py::arg("axis_points"), py::arg("drive_lo"),
          py::arg("drive_hi"), py::arg("drive_points"), py::arg("threads") = 1);
    m.def("sweep_triple_resonance",
          py::overload_cast<const DeviceFixture&, SweepAxis, double, double, int, double,
                            double, int, int>(&sweep_triple_resonance),
          py::arg("device"), py::arg("axis"), py::arg("axis_lo"), py::arg("axis_hi"),
          py::arg("axis_points"), py::arg("drive_lo"), py::arg("drive_hi"),
          py::arg("drive_points"), py::arg("threads") = 1);
    m.def("tune_triple_resonance", &tune_triple_resonance, py::arg("device"),
          py::arg("target"));
    m.def("locked_spacing", &locked_spacing, py::arg("device"), py::arg("air_gap"));

    // noise
    py::class_<NoiseBudget>(m, "NoiseBudget")
        .def_readonly("n_th", &NoiseBudget::n_th)
        .def_readonly("snr_db", &NoiseBudget::snr_db)
        .def_readonly("n_added_qu", &NoiseBudget::n_added_qu)
        .def_readonly("n_added_th", &NoiseBudget::n_added_th)
        .def_readonly("T_n", &NoiseBudget::T_n)
        .def_readonly("noise_figure_db", &NoiseBudget::noise_figure_db);
    py::class_<CouplingOptimum>(m, "CouplingOptimum")
        .def_readonly("kappa_m_ext", &CouplingOptimum::kappa_m_ext)
        .def_readonly("T_n", &CouplingOptimum::T_n)
        .def_readonly("noise_figure_db", &CouplingOptimum::noise_figure_db)
        .def_readonly("C", &CouplingOptimum::C)
        .def_readonly("eta_peak", &CouplingOptimum::eta_peak)
        .def_readonly("n_added_qu", &CouplingOptimum::n_added_qu)
        .def_readonly("n_added_th", &CouplingOptimum::n_added_th);
    m.def("thermal_occupation", &thermal_occupation, py::arg("T"), py::arg("f_m_hz"));
    m.def("thermal_to_shot_ratio_db", &thermal_to_shot_ratio_db, py::arg("C"),
          py::arg("n_th"), py::arg("ratio_o"));
    m.def("added_noise", &added_noise, py::arg("eta"), py::arg("ratio_int_ext"),
          py::arg("n_th"));
    m.def("noise_temperature", &noise_temperature, py::arg("T"), py::arg("n_added_qu"),
          py::arg("n_added_th"), py::arg("n_th"));
    m.def("optimize_antenna_coupling", &optimize_antenna_coupling, py::arg("N_p"),
          py::arg("g0"), py::arg("kappa_o"), py::arg("kappa_o_ext"),
          py::arg("kappa_m_int"), py::arg("T"), py::arg("f_m_hz"));
    m.def("noise_budget", &noise_budget, py::arg("C"), py::arg("eta"),
          py::arg("kappa_o_ext"), py::arg("kappa_o"), py::arg("kappa_m_int"),
          py::arg("kappa_m_ext"), py::arg("T"), py::arg("f_m_hz"));

    // fitting
    py::class_<Trace>(m, "Trace")
        .def(py::init<>())
        .def_readwrite("freq", &Trace::freq)
        .def_readwrite("value", &Trace::value)
        .def_readwrite("label", &Trace::label)
        .def("validate", &Trace::validate);
    py::class_<FitResult>(m, "FitResult")
        .def_readonly("param_names", &FitResult::param_names)
        .def_readonly("params", &FitResult::params)
        .def_readonly("covariance", &FitResult::covariance)
        .def_readonly("residual_norm", &FitResult::residual_norm)
        .def_readonly("converged", &FitResult::converged)
        .def_readonly("iterations", &FitResult::iterations)
        .def_readonly("condition_number", &FitResult::condition_number)
        .def_readonly("message", &FitResult::message)
        .def("param", &FitResult::param, py::arg("name"));
    py::class_<LineshapeGuess>(m, "LineshapeGuess")
        .def(py::init<>())
        .def_readwrite("gain", &LineshapeGuess::gain)
        .def_readwrite("C", &LineshapeGuess::C)
        .def_readwrite("kappa_o", &LineshapeGuess::kappa_o)
        .def_readwrite("kappa_m", &LineshapeGuess::kappa_m)
        .def_readwrite("omega_m", &LineshapeGuess::omega_m)
        .def_readwrite("delta_op", &LineshapeGuess::delta_op);
    py::class_<LineshapeBounds>(m, "LineshapeBounds")
        .def(py::init<>())
        .def_readwrite("scale_lo", &LineshapeBounds::scale_lo)
        .def_readwrite("scale_hi", &LineshapeBounds::scale_hi)
        .def_readwrite("location_pad", &LineshapeBounds::location_pad);
    py::class_<NmsGuess>(m, "NmsGuess")
        .def(py::init<>())
        .def_readwrite("center", &NmsGuess::center)
        .def_readwrite("splitting", &NmsGuess::splitting)
        .def_readwrite("kappa", &NmsGuess::kappa)
        .def_readwrite("weight_low", &NmsGuess::weight_low)
        .def_readwrite("weight_high", &NmsGuess::weight_high);
    m.def("fit_lineshape", &fit_lineshape, py::arg("trace"), py::arg("initial"),
          py::arg("bounds") = LineshapeBounds{},
          py::arg("coupling_scale") = std::optional<double>());
    m.def("fit_nms", &fit_nms, py::arg("trace"), py::arg("initial"));
    m.def("nms_guess_from_trace", &nms_guess_from_trace, py::arg("trace"));
}
