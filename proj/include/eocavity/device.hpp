#pragma once

#include <array>
#include <string>

namespace eocavity {

// Crystal description at the single operating wavelength. n_opt is the
// extraordinary index seen by the (z-polarized) optical field; eps_* are the
// relative microwave permittivities along the crystallographic axes.
struct Material {
    double n_opt = 1.0;
    double eps_x = 1.0;
    double eps_y = 1.0;
    double eps_z = 1.0;
    double r33 = 0.0;  // electro-optic coefficient, m/V
    std::string name;

    void validate() const;
};

// Rectangular slab dimensions along the crystallographic axes; the optical
// beam propagates along x.
struct SlabGeometry {
    double len_x = 0.0;  // m
    double len_y = 0.0;  // m
    double len_z = 0.0;  // m

    void validate() const;
    double volume() const { return len_x * len_y * len_z; }
};

// Loss budget of the two-mirror cavity: power transmissions of the back
// (crystal-side, high-reflectivity) and front (curved) mirrors plus excess
// round-trip loss lumping scatter and absorption.
struct LossBudget {
    double back_mirror_T = 0.0;
    double front_mirror_T = 0.0;
    double excess_loss = 0.0;
};

// Complete device fixture: slab, coatings, loss budget, laser drive, and
// microwave resonator parameters. Pure value type, immutable in practice.
struct DeviceFixture {
    Material material;
    SlabGeometry slab;
    LossBudget losses;
    double ar_index = 1.0;      // antireflection layer on the slab's front face
    double ar_thickness = 0.0;  // m (0 disables the layer)
    double air_gap = 0.0;       // m, crystal front face to curved mirror
    double laser_wavelength = 0.0;  // m
    double laser_power = 0.0;       // W incident
    double mode_match = 1.0;        // fraction of incident power in the cavity mode
    double q_int = 0.0;             // microwave intrinsic quality factor
    double kappa_m_ext = 0.0;       // Hz, microwave external (antenna) coupling
    double beam_y = 0.0;            // m, beam transverse position in the slab
    double beam_z = 0.0;            // m
    double temperature = 0.0;       // K
};

// Congruent lithium niobate constants at 1550 nm with the extraordinary index
// frozen from the standard Sellmeier evaluation.
Material default_ln_material();

// The upgraded device this toolkit models: 4 x 12 x 8 mm slab, HR back mirror
// (T = 0.0016), curved front mirror (T = 0.0002), 0.001 excess round-trip
// loss, 300 nm index-1.444 antireflection layer, 50 mW of 1550 nm drive at
// 90% mode match, microwave Q_int = 1300 with a 1.38 MHz antenna coupling,
// centered beam, 300 K. The air gap stores the triple-resonance value that
// tune_triple_resonance derives for the TM131-modeled frequency.
DeviceFixture reference_device();

}  // namespace eocavity
