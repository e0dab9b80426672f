#pragma once
// cpw.hpp — coplanar waveguide resonator model.
//
// Cross-section (primed frame, x' across the structure, y' < 0 on the air
// side, z' along the resonator):
//
//        ground   gap   strip   gap   ground
//      |---w----|--W--|---S---|--W--|---w---|        y' = 0 plane
//                substrate (eps_r), thickness h below (0 <= y' <= h)
//
// Everything downstream uses the half width b = S/2 + W + w and the slot
// fractions delta = W/b, delta_bar = (S+W)/b.
//
// The model provides
//   * conformal-mapping characteristics: moduli k0, k1, effective
//     permittivity and capacitance per unit length,
//   * the half-wave mode descriptor (guided wavelength, length L = lambda_g/2,
//     single-photon slot voltage),
//   * the quasi-static magnetic field of the fundamental longitudinal mode as
//     a coupled-slot series (odd transverse excitations, amplitudes s_n),
//     valid for transverse dimensions much smaller than the wavelength,
//   * mode volume (closed form L b^2 / pi and numeric |B|^2 integration) and
//     the single-photon field estimates.
//
// Conventions that matter:
//   * The series prefactor p carries -i (the magnetic field is in time
//     quadrature with the electric field).  Components are complex; the
//     physical amplitude at the temporal field maximum is the component-wise
//     modulus, FieldVector::magnitude_peak().
//   * The numeric mode volume normalizes |B|^2 by |p|^2, i.e. |B_max| is the
//     slot-field amplitude scale.  This is the normalization under which the
//     closed form V_c ~ L b^2 / pi holds (the series Sum s_n^2/n is within a
//     few percent of 1 for realistic slot fractions).

#include <complex>
#include <stdexcept>

#include "becsense/constants.hpp"
#include "becsense/quadrature.hpp"

namespace becsense::cpw {

struct CpwGeometry {
    double strip_width = 0.0;          // S [m]
    double gap = 0.0;                  // W [m]
    double ground_width = 0.0;         // w [m]
    double substrate_thickness = 0.0;  // h [m]
    double eps_r = 1.0;

    double half_width() const { return 0.5 * strip_width + gap + ground_width; }  // b
    double slot_fraction() const { return gap / half_width(); }                   // delta
    double strip_fraction() const {
        return (strip_width + gap) / half_width();  // delta_bar
    }

    void validate() const {
        if (!(strip_width > 0.0 && gap > 0.0 && ground_width > 0.0 &&
              substrate_thickness > 0.0))
            throw std::invalid_argument("CpwGeometry: S, W, w, h must all be > 0");
        if (!(eps_r >= 1.0))
            throw std::invalid_argument("CpwGeometry: eps_r must be >= 1");
    }
};

struct ConformalModuli {
    double k0, k1;    // moduli
    double k0p, k1p;  // complementary moduli sqrt(1-k^2)
};

struct CpwMode {
    double omega = 0.0;          // angular frequency [rad/s]
    double lambda_free = 0.0;    // free-space wavelength [m]
    double eps_eff = 1.0;        // effective permittivity
    double lambda_guided = 0.0;  // lambda_free / sqrt(eps_eff) [m]
    double length = 0.0;         // resonator length L = lambda_guided/2 [m]
    int n_transverse = 1;        // transverse mode index
    double quality_q = 0.0;
    double v0_volts = 0.0;  // single-photon slot voltage sqrt(hbar w / C) [V]

    double wave_ratio() const { return lambda_free / lambda_guided; }  // sqrt(eps_eff)
    double v_param() const { return std::sqrt(wave_ratio() * wave_ratio() - 1.0); }
    double q_param() const { return 1.0 - wave_ratio() * wave_ratio(); }
    double linewidth() const { return omega / quality_q; }
};

/// Complex magnetic field components in the primed CPW frame [T].
struct FieldVector {
    std::complex<double> bx{}, by{}, bz{};
    bool quasistatic_warning = false;

    /// |B| at the temporal maximum of the magnetic field.
    double magnitude_peak() const {
        return std::sqrt(std::norm(bx) + std::norm(by) + std::norm(bz));
    }
};

struct ModeVolume {
    double closed_form = 0.0;  // L b^2 / (n pi)
    double numeric = 0.0;      // integral of |B|^2 / |p|^2 over both half-spaces
    quad::IntegralResult detail{};
};

ConformalModuli conformal_moduli(const CpwGeometry& geom);
double effective_permittivity(const CpwGeometry& geom);
double capacitance_per_length(const CpwGeometry& geom);  // [F/m]

CpwMode make_mode(const CpwGeometry& geom, double omega, double quality_q,
                  int n_transverse = 1);

FieldVector field_air_side(const CpwGeometry& geom, const CpwMode& mode, double x, double y,
                           double z, double v0);
FieldVector field_substrate_side(const CpwGeometry& geom, const CpwMode& mode, double x,
                                 double y, double z, double v0);

ModeVolume mode_volume(const CpwGeometry& geom, const CpwMode& mode,
                       const quad::QuadratureSpec& spec = {});

double b_max_single_photon(const CpwGeometry& geom, const CpwMode& mode);  // Eq-(4) style
double b_max_cqed(const CpwGeometry& geom, const CpwMode& mode);           // circuit-QED route
double b_at_condensate(const CpwGeometry& geom, const CpwMode& mode, double distance);

}  // namespace becsense::cpw
