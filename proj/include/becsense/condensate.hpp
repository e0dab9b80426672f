#pragma once
// condensate.hpp — Thomas-Fermi condensate and its spectral resolution
// function.
//
// The condensate acts as the frequency-selective element of the sensing
// chain: a microwave magnetic field outcouples trapped atoms into an
// untrapped state that falls under gravity, and the density of outcoupled
// atoms below the cloud is proportional to the spectral resolution function
//
//     D(w, r) = (M g l0)^2 |F(w, r)|^2,        [1/volume]
//
// where F is a triple integral over the cloud built from Airy functions of
// the free-fall problem, the outgoing-wave combination Ci = Bi + i*Ai, and a
// transverse Bessel kernel.  Dimensionless coordinates: vertical lengths in
// units of the Airy length l0 = (hbar^2 / 2 M^2 g)^(1/3), transverse lengths
// in units of the cloud radius a, transverse wavenumber kbar = a * k_perp.
// This is the only assignment that keeps every Airy argument dimensionless
// against the energy scale M g l0.
//
// Two evaluation routes are provided:
//   * spectral_amplitude_F — the literal nested quadrature, innermost y',
//     then r'_perp, then the semi-infinite kbar integral (inner tolerances
//     10x tighter per level).  Reference path.
//   * SpectralKernel — observes that the detection point enters only through
//     the outer kernel J0(kbar rbar) Ci(...), so the heavy inner double
//     integral W(kbar) can be tabulated once per detuning as piecewise
//     Chebyshev interpolants and reused across detection points.  The table
//     builder collapses the inner radial integral in closed form,
//     int_0^R r J0(k r) sqrt(R^2 - r^2) dr = (sin kR - kR cos kR)/k^3,
//     which the tests cross-check against the literal nesting.
//
// Chemical potential convention: mu = 5 N0 g_s / (2 V_BEC) (the atom-number
// route).  The trap-radius relation mu = M w_y^2 a^2 / 2 is enforced as a
// consistency check when both inputs are supplied.  Storing the atom-number
// value makes the two atom-rate routes of the sensing module agree to
// rounding, not merely to model accuracy.

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <vector>

#include "becsense/constants.hpp"
#include "becsense/quadrature.hpp"

namespace becsense::condensate {

struct CondensateParams {
    double atom_number = 0.0;               // N0
    std::optional<double> tf_radius;        // a [m]
    std::optional<double> trap_omega_y;     // omega_y [rad/s], spherical trap
    double b_offset = 0.0;                  // offset field [T]
};

struct CondensateDerived {
    double atom_number = 0.0;
    double tf_radius = 0.0;       // a [m]
    double omega_y = 0.0;         // trap frequency [rad/s]
    double g_s = 0.0;             // interaction strength [J m^3]
    double mu = 0.0;              // chemical potential [J] (atom-number route)
    double mu_trap_route = 0.0;   // M w_y^2 a^2 / 2 [J], consistency companion
    double v_bec = 0.0;           // (4/3) pi a^3 [m^3]
    double l0 = 0.0;              // Airy length [m]
    double y0_sag = 0.0;          // gravitational sag -g/w_y^2 [m]
    double omega0 = 0.0;          // Zeeman splitting [rad/s]
    double omega_larmor = 0.0;    // full transition frequency [rad/s]
    double eta_per_tesla = 0.0;   // outcoupling amplitude per field [rad/s/T]
    bool degenerate_cloud = false;  // a <= l0: spectral shape statements break

    double abar() const { return tf_radius / l0; }
    double airy_energy() const;  // M g l0 [J]
    double mu_over_n_gs() const { return mu / (atom_number * g_s); }  // [1/m^3]
};

CondensateDerived derive(const CondensateParams& params,
                         const PhysicalConstants& consts = constants);

/// Thomas-Fermi amplitude sqrt(mu/(N0 g_s)) * sqrt(1 - (r^2+y^2)/a^2), zero
/// outside the cloud.  Integrates to 1 in |Phi|^2 over all space.
double tf_profile(const CondensateDerived& d, double r_perp, double y);

struct ComplexResult {
    std::complex<double> value{};
    double error = 0.0;
    std::int64_t evaluations = 0;
    bool converged = false;
};

struct SpectralPoint {
    double omega_minus_delta = 0.0;  // [rad/s]
    double r_perp = 0.0;             // [m]
    double y = 0.0;                  // [m]
    double d_value = 0.0;            // D [1/m^3]
    double d_bar = 0.0;              // D / (mu/(N0 g_s)), dimensionless
    double error = 0.0;              // propagated quadrature error on D
    bool converged = false;
};

/// Literal nested evaluation of the complex amplitude F(w-D, r).
ComplexResult spectral_amplitude_F(const CondensateDerived& d, double omega_minus_delta,
                                   double r_perp, double y,
                                   const quad::QuadratureSpec& spec);

/// Cached radial kernel W(kbar) for one condensate and one detuning.
/// Thread-safe: concurrent evaluations may lazily extend the table.
class SpectralKernel {
  public:
    SpectralKernel(const CondensateDerived& d, double omega_minus_delta,
                   const quad::QuadratureSpec& inner_spec);

    double radial_kernel(double kbar) const;        // tabulated W(kbar)
    double radial_kernel_direct(double kbar) const; // un-cached, for tests

    ComplexResult amplitude(double r_perp, double y, const quad::QuadratureSpec& spec) const;

    const CondensateDerived& cloud() const { return cloud_; }
    double omega_minus_delta() const { return omega_minus_delta_; }

  private:
    struct ChebSegment {
        double a, b;
        std::vector<double> coeffs;
    };
    void build_panel(int index) const;
    static double eval_segment(const ChebSegment& seg, double x);

    CondensateDerived cloud_;
    double omega_minus_delta_ = 0.0;
    double wbar_ = 0.0;  // hbar (w-D) / (M g l0)
    quad::QuadratureSpec inner_spec_;
    double panel_width_ = 0.0;
    mutable std::map<int, std::vector<ChebSegment>> panels_;
    mutable double scale_ = 0.0;  // running max |W| for absolute floors
    mutable std::shared_mutex mutex_;
};

/// D via the literal nested route.
SpectralPoint spectral_resolution_D(const CondensateDerived& d, double omega_minus_delta,
                                    double r_perp, double y,
                                    const quad::QuadratureSpec& spec);

/// D via a prebuilt kernel (fast path for sweeps and volume integrals).
SpectralPoint spectral_resolution_D(const SpectralKernel& kernel, double r_perp, double y,
                                    const quad::QuadratureSpec& spec);

}  // namespace becsense::condensate
