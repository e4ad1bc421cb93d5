#pragma once

#include <complex>
#include <vector>

#include "eocavity/device.hpp"

namespace eocavity {

struct Layer {
    double index = 1.0;      // real refractive index, >= 1
    double thickness = 0.0;  // m, >= 0
};

// Cavity contents ordered from the back mirror (crystal side) to the front
// mirror, plus the loss budget used for linewidths. Mirrors are lossless
// hard reflectors (field node at each mirror) with the given power
// transmissions.
struct LayerStack {
    std::vector<Layer> layers;
    double back_mirror_T = 0.0;
    double front_mirror_T = 0.0;
    double excess_loss = 0.0;

    void validate() const;
    double optical_path_length() const;  // sum of n_i * d_i
    double total_thickness() const;
};

struct FieldSample {
    double x = 0.0;          // m from the back mirror
    double amplitude = 0.0;  // standing-wave field, unit peak
};

struct OpticalMode {
    double freq = 0.0;           // Hz
    long longitudinal_index = 0;
    double A = 1.0;              // air-gap / crystal peak-amplitude ratio
    double L_eff = 0.0;          // m
    double kappa_o = 0.0;        // Hz, total linewidth
    double kappa_o_ext = 0.0;    // Hz, external coupling through the input mirror
    double fsr_local = 0.0;      // Hz, mean spacing to the two neighbors
    std::vector<FieldSample> field_profile;
};

struct StackReflection {
    std::complex<double> amplitude;
    double power = 0.0;
};

enum class InputSide { back, front };

// ((n1-n2)/(n1+n2))^2 for a single interface at normal incidence.
double fresnel_reflectivity(double n1, double n2);

// Normal-incidence reflection of the bare layered interface (no mirrors):
// characteristic-matrix method, entering from the first layer's medium and
// exiting into the last's.
StackReflection stack_reflectivity(const LayerStack& stack, double wavelength);

// All standing-wave resonances with freq in [f_lo, f_hi], ordered by
// frequency. Roots of the two-point boundary condition (field zero at both
// mirrors) located by scanning at expected-FSR/20 and bisecting to 1e-12
// relative. Each mode carries A, L_eff, the sampled field profile, and
// linewidths computed from the stack's loss budget at the local FSR.
std::vector<OpticalMode> find_resonances(const LayerStack& stack, const Material& material,
                                         double f_lo, double f_hi,
                                         InputSide input = InputSide::back,
                                         int profile_samples = 513);

// L_eff = L_LN/2 + (A^2 / (2 n^2)) * L_air.
double effective_length(double A, double L_LN, double L_air, double n);

struct Linewidths {
    double finesse = 0.0;
    double kappa_o = 0.0;      // Hz
    double kappa_o_ext = 0.0;  // Hz
};

// finesse = 2*pi / total round-trip loss; kappa_o = local FSR / finesse;
// kappa_o_ext is the input mirror's share of the loss budget.
Linewidths linewidth_from_losses(const LayerStack& stack, double fsr_local, InputSide input);

// The cavity stack of a device at a given air gap: crystal | AR layer | air.
LayerStack device_stack(const DeviceFixture& device, double air_gap);

// Fine-adjusts the air gap so the resonance nearest the laser lands on it to
// within 1 Hz, emulating the experiment's length feedback. Returns the
// adjusted gap.
double lock_pump_mode(const DeviceFixture& device, double air_gap, double laser_freq);

}  // namespace eocavity
