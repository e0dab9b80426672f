#include "becsense/condensate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "becsense/special_functions.hpp"

namespace becsense::condensate {

namespace {

constexpr double kConsistencyLimit = 0.05;  // trap-vs-atom-number mu mismatch

// (sin u - u cos u)/u^3, the closed-form radial kernel
// int_0^R r J0(k r) sqrt(R^2 - r^2) dr = R^3 * jsphere(k R).
double jsphere(double u) {
    if (u < 0.1) {
        const double u2 = u * u;
        return (1.0 / 3.0) - u2 / 30.0 + u2 * u2 / 840.0 - u2 * u2 * u2 / 45360.0;
    }
    return (std::sin(u) - u * std::cos(u)) / (u * u * u);
}

// Gauss-Chebyshev (second kind) rule for int_-1^1 sqrt(1-t^2) f(t) dt with
// node doubling until two levels agree.  The weight absorbs the Thomas-Fermi
// square root exactly, so there is no endpoint singularity left to resolve.
template <typename F>
double gauss_chebyshev2(F&& f, double rel_tol, double abs_tol, std::int64_t& evals,
                        bool& converged) {
    double prev = 0.0;
    bool have_prev = false;
    for (int m = 48; m <= 6144; m *= 2) {
        double sum = 0.0;
        const double step = pi / (m + 1);
        for (int i = 1; i <= m; ++i) {
            const double si = std::sin(i * step);
            sum += si * si * f(std::cos(i * step));
        }
        sum *= step;
        evals += m;
        if (have_prev && std::abs(sum - prev) <=
                             std::max(abs_tol, rel_tol * std::abs(sum))) {
            converged = true;
            return sum;
        }
        prev = sum;
        have_prev = true;
    }
    converged = false;
    return prev;
}

}  // namespace

double CondensateDerived::airy_energy() const {
    return constants.mass_rb87 * constants.g_grav * l0;
}

CondensateDerived derive(const CondensateParams& params, const PhysicalConstants& consts) {
    if (!(params.atom_number >= 1.0))
        throw std::invalid_argument("derive: atom number must be >= 1");
    if (params.b_offset < 0.0)
        throw std::invalid_argument("derive: offset field must be >= 0");
    if (!params.tf_radius && !params.trap_omega_y)
        throw std::invalid_argument(
            "derive: need the TF radius or the trap frequency (or both)");

    const double m = consts.mass_rb87, g = consts.g_grav, hb = consts.hbar;
    CondensateDerived d;
    d.atom_number = params.atom_number;
    d.g_s = 4.0 * pi * hb * hb * consts.a_scatt / m;

    auto mu_of_radius = [&](double a) {
        return 5.0 * d.atom_number * d.g_s / (2.0 * (4.0 / 3.0) * pi * a * a * a);
    };

    if (params.tf_radius) {
        d.tf_radius = *params.tf_radius;
        if (!(d.tf_radius > 0.0)) throw std::invalid_argument("derive: TF radius must be > 0");
        d.mu = mu_of_radius(d.tf_radius);
        d.omega_y = params.trap_omega_y
                        ? *params.trap_omega_y
                        : std::sqrt(2.0 * d.mu / (m * d.tf_radius * d.tf_radius));
    } else {
        d.omega_y = *params.trap_omega_y;
        if (!(d.omega_y > 0.0))
            throw std::invalid_argument("derive: trap frequency must be > 0");
        // TF closure: a^5 = 15 N0 hbar^2 a_s / (M^2 w_y^2)
        d.tf_radius = std::pow(
            15.0 * d.atom_number * hb * hb * consts.a_scatt / (m * m * d.omega_y * d.omega_y),
            0.2);
        d.mu = mu_of_radius(d.tf_radius);
    }
    if (!(d.omega_y > 0.0))
        throw std::invalid_argument("derive: trap frequency must be > 0");

    d.mu_trap_route = 0.5 * m * d.omega_y * d.omega_y * d.tf_radius * d.tf_radius;
    const double mismatch = std::abs(d.mu_trap_route / d.mu - 1.0);
    if (params.tf_radius && params.trap_omega_y && mismatch > kConsistencyLimit) {
        std::ostringstream msg;
        msg << "derive: inconsistent (N0, a, omega_y): mu(atom number) = " << d.mu
            << " J vs mu(trap radius) = " << d.mu_trap_route << " J ("
            << mismatch * 100.0 << "% apart)";
        throw std::invalid_argument(msg.str());
    }

    d.v_bec = 4.0 / 3.0 * pi * std::pow(d.tf_radius, 3);
    d.l0 = std::cbrt(hb * hb / (2.0 * m * m * g));
    d.y0_sag = -g / (d.omega_y * d.omega_y);
    d.omega0 = zeeman_splitting(params.b_offset);
    d.omega_larmor =
        consts.hf_splitting + d.omega0 + m * g * g / (2.0 * hb * d.omega_y * d.omega_y);
    d.eta_per_tesla =
        std::sqrt(3.0) * consts.mu_bohr * std::sqrt(d.atom_number) / (4.0 * std::sqrt(2.0) * hb);
    d.degenerate_cloud = d.tf_radius <= d.l0;
    return d;
}

double tf_profile(const CondensateDerived& d, double r_perp, double y) {
    const double rho2 =
        (r_perp * r_perp + y * y) / (d.tf_radius * d.tf_radius);
    if (rho2 >= 1.0) return 0.0;
    return std::sqrt(d.mu_over_n_gs()) * std::sqrt(1.0 - rho2);
}

// ---------------------------------------------------------------------------
// Literal nested amplitude: innermost y' (Gauss-Chebyshev with the TF weight),
// middle r'_perp (adaptive), outer kbar (semi-infinite panels).
// ---------------------------------------------------------------------------

ComplexResult spectral_amplitude_F(const CondensateDerived& d, double omega_minus_delta,
                                   double r_perp, double y,
                                   const quad::QuadratureSpec& spec) {
    if (!(y <= -d.tf_radius))
        throw std::domain_error(
            "spectral_amplitude_F: evaluation point must lie below the cloud (y <= -a)");
    const double abar = d.abar();
    const double wbar = constants.hbar * omega_minus_delta / d.airy_energy();
    const double rbar = std::abs(r_perp) / d.tf_radius;  // azimuthal symmetry
    const double ybar = y / d.l0;

    const quad::QuadratureSpec mid_spec = spec.inner();
    const quad::QuadratureSpec in_spec = mid_spec.inner();

    ComplexResult out;
    std::int64_t evals = 0;
    bool inner_ok = true;

    auto middle = [&](double kbar) {
        const double s = kbar * kbar / (abar * abar) - wbar;
        quad::IntegralResult mr;
        auto integrand = [&](double rp) {
            const double yhalf = abar * std::sqrt(std::max(0.0, 1.0 - rp * rp));
            bool gc_ok = true;
            double iy = 0.0;
            if (yhalf > 0.0) {
                iy = (yhalf / abar) * yhalf *
                     gauss_chebyshev2(
                         [&](double t) { return sf::airy_ai(yhalf * t + s); },
                         in_spec.rel_tol,
                         std::max(in_spec.abs_tol, 1e-15 * abar), evals, gc_ok);
            }
            if (!gc_ok) inner_ok = false;
            return rp * sf::bessel_j0(kbar * rp) * iy;
        };
        bool mc = false;
        quad::detail::integrate_adaptive(integrand, 0.0, 1.0, mid_spec, mr.value,
                                         mr.error_estimate, evals, mc);
        if (!mc) inner_ok = false;
        return mr.value;
    };

    auto outer_integrand = [&](double kbar) -> std::complex<double> {
        const double ci_arg = ybar + kbar * kbar / (abar * abar) - wbar;
        return kbar * sf::bessel_j0(kbar * rbar) * sf::airy_ci(ci_arg) * middle(kbar);
    };

    std::complex<double> integral{};
    double err = 0.0;
    bool conv = false;
    quad::QuadratureSpec outer = spec;
    quad::detail::integrate_semi_infinite_impl(outer_integrand, outer, integral, err, evals,
                                               conv);

    const double pref = -pi / d.airy_energy() * std::sqrt(d.mu_over_n_gs());
    out.value = pref * integral;
    out.error = std::abs(pref) * err;
    out.evaluations = evals;
    out.converged = conv && inner_ok;
    return out;
}

// ---------------------------------------------------------------------------
// SpectralKernel
// ---------------------------------------------------------------------------

namespace {
constexpr int kChebPoints = 32;     // Lobatto grid order per segment
constexpr int kMaxSplitDepth = 10;  // dyadic refinement of a table panel
}  // namespace

SpectralKernel::SpectralKernel(const CondensateDerived& d, double omega_minus_delta,
                               const quad::QuadratureSpec& inner_spec)
    : cloud_(d),
      omega_minus_delta_(omega_minus_delta),
      wbar_(constants.hbar * omega_minus_delta / d.airy_energy()),
      inner_spec_(inner_spec),
      panel_width_(pi) {
    inner_spec_.validate();
}

double SpectralKernel::radial_kernel_direct(double kbar) const {
    const double abar = cloud_.abar();
    const double s = kbar * kbar / (abar * abar) - wbar_;
    quad::QuadratureSpec sp = inner_spec_;
    sp.abs_tol = std::max(sp.abs_tol, 1e-13);
    std::int64_t evals = 0;
    double value = 0.0, err = 0.0;
    bool conv = false;
    quad::detail::integrate_adaptive(
        [&](double yp) {
            const double r2 = 1.0 - (yp / abar) * (yp / abar);
            if (r2 <= 0.0) return 0.0;
            const double radius = std::sqrt(r2);
            const double r3 = r2 * radius;
            return sf::airy_ai(yp + s) * r3 * jsphere(kbar * radius);
        },
        -abar, abar, sp, value, err, evals, conv);
    return value;
}

double SpectralKernel::eval_segment(const ChebSegment& seg, double x) {
    // Clenshaw on the Chebyshev-Lobatto interpolant (first/last halved).
    const double xi = (2.0 * x - seg.a - seg.b) / (seg.b - seg.a);
    const int n = static_cast<int>(seg.coeffs.size()) - 1;
    double b1 = 0.0, b2 = 0.0;
    for (int k = n; k >= 1; --k) {
        const double ck = (k == n) ? 0.5 * seg.coeffs[k] : seg.coeffs[k];
        const double b0 = 2.0 * xi * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    return xi * b1 - b2 + 0.5 * seg.coeffs[0];
}

void SpectralKernel::build_panel(int index) const {
    const double a = index * panel_width_;
    const double b = (index + 1) * panel_width_;
    std::vector<ChebSegment> segs;

    struct Work {
        double a, b;
        int depth;
    };
    std::vector<Work> stack{{a, b, 0}};
    double panel_peak = 0.0;
    while (!stack.empty()) {
        const Work wk = stack.back();
        stack.pop_back();
        ChebSegment seg;
        seg.a = wk.a;
        seg.b = wk.b;
        std::vector<double> vals(kChebPoints + 1);
        double vmax = 0.0;
        for (int j = 0; j <= kChebPoints; ++j) {
            const double xi = std::cos(j * pi / kChebPoints);
            const double x = 0.5 * (wk.a + wk.b) + 0.5 * (wk.b - wk.a) * xi;
            vals[j] = radial_kernel_direct(x);
            vmax = std::max(vmax, std::abs(vals[j]));
        }
        panel_peak = std::max(panel_peak, vmax);
        seg.coeffs.assign(kChebPoints + 1, 0.0);
        for (int k = 0; k <= kChebPoints; ++k) {
            double ck = 0.0;
            for (int j = 0; j <= kChebPoints; ++j) {
                const double wj = (j == 0 || j == kChebPoints) ? 0.5 : 1.0;
                ck += wj * vals[j] * std::cos(pi * j * k / kChebPoints);
            }
            seg.coeffs[k] = 2.0 * ck / kChebPoints;
        }
        double tail = 0.0;
        for (int k = kChebPoints - 3; k <= kChebPoints; ++k)
            tail = std::max(tail, std::abs(seg.coeffs[k]));
        const double scale_ref = std::max({scale_, panel_peak, 1e-300});
        if (tail > 1e-11 * scale_ref && wk.depth < kMaxSplitDepth) {
            const double mid = 0.5 * (wk.a + wk.b);
            stack.push_back({mid, wk.b, wk.depth + 1});
            stack.push_back({wk.a, mid, wk.depth + 1});
        } else {
            segs.push_back(std::move(seg));
        }
    }
    std::sort(segs.begin(), segs.end(),
              [](const ChebSegment& l, const ChebSegment& r) { return l.a < r.a; });

    std::unique_lock lock(mutex_);
    scale_ = std::max(scale_, panel_peak);
    panels_.emplace(index, std::move(segs));
}

double SpectralKernel::radial_kernel(double kbar) const {
    if (kbar < 0.0) throw std::domain_error("radial_kernel: kbar must be >= 0");
    const int index = static_cast<int>(kbar / panel_width_);
    {
        std::shared_lock lock(mutex_);
        auto it = panels_.find(index);
        if (it != panels_.end()) {
            const auto& segs = it->second;
            auto seg = std::upper_bound(
                segs.begin(), segs.end(), kbar,
                [](double v, const ChebSegment& s) { return v < s.b; });
            if (seg == segs.end()) seg = std::prev(segs.end());
            return eval_segment(*seg, kbar);
        }
    }
    build_panel(index);
    return radial_kernel(kbar);
}

ComplexResult SpectralKernel::amplitude(double r_perp, double y,
                                        const quad::QuadratureSpec& spec) const {
    if (!(y <= -cloud_.tf_radius))
        throw std::domain_error(
            "SpectralKernel::amplitude: evaluation point must lie below the cloud");
    const double abar = cloud_.abar();
    const double rbar = std::abs(r_perp) / cloud_.tf_radius;  // azimuthal symmetry
    const double ybar = y / cloud_.l0;

    auto integrand = [&](double kbar) -> std::complex<double> {
        const double ci_arg = ybar + kbar * kbar / (abar * abar) - wbar_;
        return kbar * sf::bessel_j0(kbar * rbar) * sf::airy_ci(ci_arg) *
               radial_kernel(kbar);
    };

    ComplexResult out;
    std::complex<double> integral{};
    double err = 0.0;
    bool conv = false;
    quad::QuadratureSpec outer = spec;
    outer.panel_width = panel_width_;
    quad::detail::integrate_semi_infinite_impl(integrand, outer, integral, err,
                                               out.evaluations, conv);
    const double pref = -pi / cloud_.airy_energy() * std::sqrt(cloud_.mu_over_n_gs());
    out.value = pref * integral;
    out.error = std::abs(pref) * err;
    out.converged = conv;
    return out;
}

// ---------------------------------------------------------------------------

namespace {

SpectralPoint point_from_amplitude(const CondensateDerived& d, double omega_minus_delta,
                                   double r_perp, double y, const ComplexResult& f) {
    SpectralPoint p;
    p.omega_minus_delta = omega_minus_delta;
    p.r_perp = r_perp;
    p.y = y;
    const double e0 = d.airy_energy();
    const double mag = std::abs(f.value);
    p.d_value = e0 * e0 * mag * mag;
    p.d_bar = p.d_value / d.mu_over_n_gs();
    p.error = e0 * e0 * (2.0 * mag * f.error + f.error * f.error);
    p.converged = f.converged;
    return p;
}

}  // namespace

SpectralPoint spectral_resolution_D(const CondensateDerived& d, double omega_minus_delta,
                                    double r_perp, double y,
                                    const quad::QuadratureSpec& spec) {
    const auto f = spectral_amplitude_F(d, omega_minus_delta, r_perp, y, spec);
    return point_from_amplitude(d, omega_minus_delta, r_perp, y, f);
}

SpectralPoint spectral_resolution_D(const SpectralKernel& kernel, double r_perp, double y,
                                    const quad::QuadratureSpec& spec) {
    const auto f = kernel.amplitude(r_perp, y, spec);
    return point_from_amplitude(kernel.cloud(), kernel.omega_minus_delta(), r_perp, y, f);
}

}  // namespace becsense::condensate
