#include "becsense/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace becsense::sensing {

double outcoupling_eta(double b_x, double atom_number, const PhysicalConstants& consts) {
    if (b_x < 0.0) throw std::domain_error("outcoupling_eta: field must be >= 0");
    return std::sqrt(3.0) * consts.mu_bohr * b_x * std::sqrt(atom_number) /
           (4.0 * std::sqrt(2.0) * consts.hbar);
}

namespace {

double density_from_point(const condensate::CondensateDerived& d, double eta,
                          const condensate::SpectralPoint& p) {
    const double coupling = constants.hbar * eta / d.airy_energy();
    return coupling * coupling * p.d_value;
}

}  // namespace

double atom_density(const condensate::CondensateDerived& d, double eta, double delta,
                    double r_perp, double y, const quad::QuadratureSpec& spec) {
    const auto p = condensate::spectral_resolution_D(d, 0.0 - delta, r_perp, y, spec);
    return density_from_point(d, eta, p);
}

double atom_density(const condensate::CondensateDerived& d, double eta,
                    const condensate::SpectralKernel& kernel, double r_perp, double y,
                    const quad::QuadratureSpec& spec) {
    const auto p = condensate::spectral_resolution_D(kernel, r_perp, y, spec);
    return density_from_point(d, eta, p);
}

SensingResult atom_rate(const condensate::CondensateDerived& d, const cpw::CpwGeometry& geom,
                        const cpw::CpwMode& mode, double distance, const DetectionVolume& vol,
                        const quad::QuadratureSpec& spec, int threads,
                        bool primary_is_attenuated) {
    vol.validate(d.tf_radius);
    if (!(distance >= kMinSurfaceDistance + d.tf_radius)) {
        std::ostringstream msg;
        msg << "atom_rate: surface distance " << distance
            << " m violates d >= d0 + a = " << kMinSurfaceDistance + d.tf_radius << " m";
        throw std::invalid_argument(msg.str());
    }

    SensingResult res;
    res.primary_is_attenuated = primary_is_attenuated;
    res.eps_eff = mode.eps_eff;
    res.resonator_length = mode.length;
    const double b = geom.half_width();
    res.mode_volume = mode.length * b * b / pi;
    res.b_max = cpw::b_max_single_photon(geom, mode);
    res.b_cqed = cpw::b_max_cqed(geom, mode);
    res.b_x_unattenuated = res.b_max;
    res.b_x_attenuated = cpw::b_at_condensate(geom, mode, distance);
    res.monochromatic_ratio = monochromaticity_check(d, mode);

    if (res.monochromatic_ratio < 2.0)
        res.warnings.push_back(
            "BEC bandwidth is not well above the cavity linewidth; the "
            "monochromatic approximation is marginal");
    if (d.degenerate_cloud)
        res.warnings.push_back("cloud radius is not large against the Airy length");
    if (!(b < 0.1 * mode.lambda_free))
        res.warnings.push_back("transverse size not small against the wavelength; "
                               "quasi-static field model is questionable");

    // Resonant kernel (Delta = 0) shared by every detection point.
    condensate::SpectralKernel kernel(d, 0.0, spec.inner());

    const double y_lo = vol.y_bottom(d.tf_radius);
    const double y_hi = vol.y_top(d.tf_radius);
    bool all_converged = true;

    auto dbar_integral = [&](double radius) {
        auto g = [&](double r, double y) {
            const auto p = condensate::spectral_resolution_D(kernel, r, y, spec);
            return p.d_bar;
        };
        return quad::integrate_cylindrical_volume(g, radius, y_lo, y_hi, spec, threads);
    };

    const quad::IntegralResult main_integral = dbar_integral(vol.lateral_radius);
    all_converged = all_converged && main_integral.converged;
    res.dbar_volume_integral = main_integral.value;

    // Eq-(7) route: rate = (N0/V_BEC) (sqrt(15) mu_B B/(8 M g l0))^2 * Int Dbar.
    auto rate_route_dimensionless = [&](double b_field) {
        const double coupling = std::sqrt(15.0) * constants.mu_bohr * b_field /
                                (8.0 * d.airy_energy());
        return d.atom_number / d.v_bec * coupling * coupling * res.dbar_volume_integral;
    };
    // Density route: rate = |hbar eta/(M g l0)|^2 * Int D (same content, different
    // floating-point path; they must agree to rounding).
    auto rate_route_eta = [&](double b_field) {
        const double eta = outcoupling_eta(b_field, d.atom_number);
        const double coupling = constants.hbar * eta / d.airy_energy();
        return coupling * coupling * res.dbar_volume_integral * d.mu_over_n_gs();
    };

    res.atom_rate_unattenuated = rate_route_dimensionless(res.b_x_unattenuated);
    res.atom_rate_attenuated = rate_route_dimensionless(res.b_x_attenuated);

    const double cross = rate_route_eta(res.b_x_unattenuated);
    const double rel_gap =
        std::abs(cross - res.atom_rate_unattenuated) /
        std::max(std::abs(res.atom_rate_unattenuated), 1e-300);
    if (rel_gap > 1e-10) {
        std::ostringstream msg;
        msg << "atom_rate: the two rate routes disagree by " << rel_gap
            << " (algebraic identity violated)";
        throw std::logic_error(msg.str());
    }

    const double primary_field =
        primary_is_attenuated ? res.b_x_attenuated : res.b_x_unattenuated;
    res.eta = outcoupling_eta(primary_field, d.atom_number);
    res.atom_rate = primary_is_attenuated ? res.atom_rate_attenuated
                                          : res.atom_rate_unattenuated;
    const double rate_per_dbar =
        res.atom_rate / std::max(res.dbar_volume_integral, 1e-300);
    res.quadrature_error = rate_per_dbar * main_integral.error_estimate;

    // Lateral convergence study at 2/3, 1, 4/3 of the requested radius.
    for (const double f : {2.0 / 3.0, 1.0, 4.0 / 3.0}) {
        if (f == 1.0) {
            res.radius_study.emplace_back(vol.lateral_radius, res.atom_rate);
            continue;
        }
        const double radius = f * vol.lateral_radius;
        const auto r = dbar_integral(radius);
        all_converged = all_converged && r.converged;
        res.radius_study.emplace_back(radius, rate_per_dbar * r.value);
    }

    res.converged = all_converged;
    if (!all_converged)
        res.warnings.push_back("detection-volume quadrature did not reach tolerance");
    return res;
}

double spectrum_convolved_rate(const condensate::CondensateDerived& d, double eta,
                               double delta,
                               const std::vector<std::pair<double, double>>& spectrum,
                               double r_perp, double y, const quad::QuadratureSpec& spec) {
    if (spectrum.size() < 2)
        throw std::invalid_argument("spectrum_convolved_rate: need >= 2 samples");
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        if (spectrum[i].second < 0.0)
            throw std::invalid_argument(
                "spectrum_convolved_rate: spectrum samples must be >= 0");
        if (i > 0 && !(spectrum[i].first > spectrum[i - 1].first))
            throw std::invalid_argument(
                "spectrum_convolved_rate: sample frequencies must increase");
    }

    const double coupling = constants.hbar * eta / d.airy_energy();
    const quad::QuadratureSpec dspec = spec.inner();

    // D(w - delta) is smooth; cache kernels per quadrature node since the
    // adaptive rule revisits panel ends on refinement.
    std::map<double, std::unique_ptr<condensate::SpectralKernel>> kernels;
    auto d_of = [&](double w) {
        auto it = kernels.find(w);
        if (it == kernels.end()) {
            it = kernels
                     .emplace(w, std::make_unique<condensate::SpectralKernel>(
                                     d, w - delta, dspec.inner()))
                     .first;
        }
        return condensate::spectral_resolution_D(*it->second, r_perp, y, dspec).d_value;
    };

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < spectrum.size(); ++i) {
        const auto [w0, s0] = spectrum[i];
        const auto [w1, s1] = spectrum[i + 1];
        if (s0 == 0.0 && s1 == 0.0) continue;
        auto seg = [&](double w) {
            const double s = s0 + (s1 - s0) * (w - w0) / (w1 - w0);
            return s * d_of(w);
        };
        quad::QuadratureSpec sspec = spec;
        sspec.max_subdivisions = std::max(8, spec.max_subdivisions / 8);
        total += quad::integrate_1d(seg, w0, w1, sspec).value;
    }
    return coupling * coupling * total;
}

double monochromaticity_check(const condensate::CondensateDerived& d,
                              const cpw::CpwMode& mode) {
    const double bandwidth =
        2.0 * constants.mass_rb87 * constants.g_grav * d.tf_radius / constants.hbar;
    return bandwidth / mode.linewidth();
}

}  // namespace becsense::sensing
