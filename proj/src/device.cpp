#include "eocavity/device.hpp"

#include "eocavity/errors.hpp"

namespace eocavity {

void Material::validate() const {
    if (!(n_opt > 1.0)) throw ConfigError("material: n_opt must exceed 1");
    if (!(eps_x >= 1.0 && eps_y >= 1.0 && eps_z >= 1.0))
        throw ConfigError("material: relative permittivities must be >= 1");
    if (!(r33 >= 0.0)) throw ConfigError("material: r33 must be >= 0");
}

void SlabGeometry::validate() const {
    if (!(len_x > 0.0 && len_y > 0.0 && len_z > 0.0))
        throw ConfigError("slab: all dimensions must be positive");
}

Material default_ln_material() {
    Material m;
    m.n_opt = 2.138;  // extraordinary index at 1550 nm, frozen from Sellmeier
    m.eps_x = 45.0;
    m.eps_y = 45.0;
    m.eps_z = 25.0;
    m.r33 = 31e-12;
    m.name = "LN";
    return m;
}

DeviceFixture reference_device() {
    DeviceFixture d;
    d.material = default_ln_material();
    d.slab = SlabGeometry{4e-3, 12e-3, 8e-3};
    d.losses = LossBudget{0.0016, 0.0002, 0.001};
    d.ar_index = 1.444;
    d.ar_thickness = 300e-9;
    // Air gap putting the locked pump's upper-neighbor spacing on the modeled
    // TM131 frequency (see tune_triple_resonance); re-derived in tests.
    d.air_gap = 0.0074404488396882084;
    d.laser_wavelength = 1550e-9;
    d.laser_power = 50e-3;
    d.mode_match = 0.9;
    d.q_int = 1300.0;
    d.kappa_m_ext = 1.38e6;
    d.beam_y = d.slab.len_y / 2.0;
    d.beam_z = d.slab.len_z / 2.0;
    d.temperature = 300.0;
    return d;
}

}  // namespace eocavity
