#include "becsense/cpw.hpp"

#include <cmath>

#include "becsense/special_functions.hpp"

namespace becsense::cpw {

namespace {

constexpr int kSeriesMaxTerms = 10000;
constexpr double kSeriesRelTol = 1e-10;

// slot amplitude s_n = sinc(n pi delta / 2) * sin(n pi delta_bar / 2)
double slot_amplitude(int n, double delta, double delta_bar) {
    return sf::sinc_half(n, delta) * std::sin(n * pi * delta_bar / 2.0);
}

struct SeriesTerms {
    double sx = 0.0;  // sum s_n/F_n cos(n pi x/b) exp(-g_n |y|)
    double sy = 0.0;  // sum s_n   sin(n pi x/b) exp(-g_n |y|)
    double sz = 0.0;  // sum s_n/(n F_n) sin(n pi x/b) exp(-g_n |y|)
    int terms = 0;
};

// Transverse series at (x, |y|) with unit amplitude prefactor.  Truncated
// when three consecutive terms change every partial sum by < 1e-10 relative
// (even-n amplitudes can vanish identically, single-term checks would stop
// too early).  At y = 0 the decay factor is absent and the series is only
// conditionally convergent; the cap keeps the result finite and documented.
SeriesTerms transverse_series(const CpwGeometry& geom, const CpwMode& mode, double x,
                              double abs_y) {
    const double b = geom.half_width();
    const double delta = geom.slot_fraction();
    const double delta_bar = geom.strip_fraction();
    const double v = mode.v_param();
    const double two_bv_over_lambda = 2.0 * b * v / mode.lambda_free;

    SeriesTerms out;
    int small_streak = 0;
    for (int n = 1; n <= kSeriesMaxTerms; ++n) {
        const double sn = slot_amplitude(n, delta, delta_bar);
        const double fn = std::sqrt(1.0 + std::pow(two_bv_over_lambda / n, 2));
        const double gamma_n = n * pi * fn / b;
        const double decay = std::exp(-gamma_n * abs_y);
        if (decay == 0.0) break;
        const double cx = std::cos(n * pi * x / b);
        const double sxn = std::sin(n * pi * x / b);
        const double tx = sn / fn * cx * decay;
        const double ty = sn * sxn * decay;
        const double tz = sn / (n * fn) * sxn * decay;
        out.sx += tx;
        out.sy += ty;
        out.sz += tz;
        out.terms = n;
        const double scale = std::abs(out.sx) + std::abs(out.sy) + std::abs(out.sz);
        if (std::abs(tx) + std::abs(ty) + std::abs(tz) < kSeriesRelTol * scale &&
            scale > 0.0) {
            if (++small_streak >= 3) break;
        } else {
            small_streak = 0;
        }
    }
    return out;
}

// Complex series prefactor p = -i mu0 mu_r (4 V0 / (eta b)) (lambda/lambda_g)
// with eta = sqrt(mu0/eps0) the free-space impedance (not the outcoupling
// amplitude, which lives in the sensing module).
std::complex<double> series_prefactor(const CpwGeometry& geom, const CpwMode& mode,
                                      double v0) {
    const double eta_imp = std::sqrt(constants.mu0 / constants.eps0);
    const double mag =
        constants.mu0 * 4.0 * v0 / (eta_imp * geom.half_width()) * mode.wave_ratio();
    return {0.0, -mag};
}

bool quasistatic_ok(const CpwGeometry& geom, const CpwMode& mode) {
    const double b = geom.half_width();
    return b < 0.1 * mode.lambda_free && b < 0.1 * geom.substrate_thickness;
}

}  // namespace

ConformalModuli conformal_moduli(const CpwGeometry& geom) {
    geom.validate();
    const double s = geom.strip_width, w = geom.gap, h = geom.substrate_thickness;
    ConformalModuli m;
    m.k0 = s / (s + 2.0 * w);
    m.k1 = std::sinh(pi * s / (4.0 * h)) / std::sinh(pi * (s + 2.0 * w) / (4.0 * h));
    if (!(m.k0 > 0.0 && m.k0 < 1.0))
        throw std::invalid_argument("conformal_moduli: degenerate geometry, k0 not in (0,1)");
    m.k0p = std::sqrt((1.0 - m.k0) * (1.0 + m.k0));
    m.k1p = std::sqrt((1.0 - m.k1) * (1.0 + m.k1));
    return m;
}

double effective_permittivity(const CpwGeometry& geom) {
    const auto m = conformal_moduli(geom);
    const double kappa0 = sf::ellipk(m.k0) / sf::ellipk(m.k0p);
    const double kappa1 = sf::ellipk(m.k1) / sf::ellipk(m.k1p);
    return 1.0 + 0.5 * (geom.eps_r - 1.0) * kappa1 / kappa0;
}

double capacitance_per_length(const CpwGeometry& geom) {
    const auto m = conformal_moduli(geom);
    const double kappa0 = sf::ellipk(m.k0) / sf::ellipk(m.k0p);
    return 4.0 * constants.eps0 * effective_permittivity(geom) * kappa0;
}

CpwMode make_mode(const CpwGeometry& geom, double omega, double quality_q,
                  int n_transverse) {
    geom.validate();
    if (!(omega > 0.0)) throw std::invalid_argument("make_mode: omega must be > 0");
    if (n_transverse < 1)
        throw std::invalid_argument("make_mode: transverse index must be >= 1");
    CpwMode mode;
    mode.omega = omega;
    mode.lambda_free = 2.0 * pi * constants.c_light / omega;
    mode.eps_eff = effective_permittivity(geom);
    mode.lambda_guided = mode.lambda_free / std::sqrt(mode.eps_eff);
    mode.length = 0.5 * mode.lambda_guided;
    mode.n_transverse = n_transverse;
    mode.quality_q = quality_q;
    const double c_total = capacitance_per_length(geom) * mode.length;
    mode.v0_volts = std::sqrt(constants.hbar * omega / c_total);
    return mode;
}

FieldVector field_air_side(const CpwGeometry& geom, const CpwMode& mode, double x, double y,
                           double z, double v0) {
    geom.validate();
    const double b = geom.half_width();
    if (!(x >= 0.0 && x <= b))
        throw std::domain_error("field_air_side: x' must lie in [0, b]");
    if (!(y <= 0.0)) throw std::domain_error("field_air_side: air side requires y' <= 0");
    if (!(z >= 0.0 && z <= mode.length))
        throw std::domain_error("field_air_side: z' must lie in [0, L]");

    const auto terms = transverse_series(geom, mode, x, std::abs(y));
    const auto p = series_prefactor(geom, mode, v0);
    const double sin_z = std::sin(pi * z / mode.length);
    const double cos_z = std::cos(pi * z / mode.length);
    FieldVector f;
    f.bx = p * terms.sx * sin_z;
    f.by = p * terms.sy * sin_z;
    f.bz = p * (2.0 * b / mode.lambda_guided) * mode.q_param() * terms.sz * cos_z;
    f.quasistatic_warning = !quasistatic_ok(geom, mode);
    return f;
}

FieldVector field_substrate_side(const CpwGeometry& geom, const CpwMode& mode, double x,
                                 double y, double z, double v0) {
    if (!(y >= 0.0 && y <= geom.substrate_thickness))
        throw std::domain_error("field_substrate_side: y' must lie in [0, h]");
    FieldVector f = field_air_side(geom, mode, x, -y, z, v0);
    f.bx = -f.bx;   // mirror relations for b << lambda, h
    f.bz = 0.0;     // negligible on the substrate side
    return f;
}

ModeVolume mode_volume(const CpwGeometry& geom, const CpwMode& mode,
                       const quad::QuadratureSpec& spec) {
    geom.validate();
    const double b = geom.half_width();
    const int n_sel = mode.n_transverse;
    ModeVolume mv;
    mv.closed_form = mode.length * b * b / (n_sel * pi);

    const double delta = geom.slot_fraction();
    const double delta_bar = geom.strip_fraction();
    const double two_bv_over_lambda = 2.0 * b * mode.v_param() / mode.lambda_free;
    const double bz_scale = 2.0 * b / mode.lambda_guided * mode.q_param();

    // Energy densities of the unit-amplitude transverse profile: the full
    // odd series for the fundamental, the bare n-th profile (normalized by
    // its own s_n) for higher transverse modes.
    auto density = [&](double x, double ay, bool with_bz) {
        double sx = 0.0, sy = 0.0, sz = 0.0;
        if (n_sel == 1) {
            CpwMode m = mode;
            const auto t = transverse_series(geom, m, x, ay);
            sx = t.sx;
            sy = t.sy;
            sz = t.sz;
        } else {
            const double fn =
                std::sqrt(1.0 + std::pow(two_bv_over_lambda / n_sel, 2));
            const double decay = std::exp(-n_sel * pi * fn / b * ay);
            sx = std::cos(n_sel * pi * x / b) / fn * decay;
            sy = std::sin(n_sel * pi * x / b) * decay;
            sz = std::sin(n_sel * pi * x / b) / (n_sel * fn) * decay;
        }
        double d = sx * sx + sy * sy;
        if (with_bz) d += bz_scale * bz_scale * sz * sz;
        return d;
    };

    quad::QuadratureSpec inner = spec.inner();
    std::int64_t evals = 0;
    bool conv = true;
    double err = 0.0;
    // y-integral over each half space; the z integral contributes L/2 to
    // every component (sin^2 for transverse, cos^2 for longitudinal).
    auto column = [&](double ay, bool with_bz) {
        quad::IntegralResult r = quad::integrate_1d(
            [&](double x) { return density(x, ay, with_bz); }, 0.0, b, inner);
        evals += r.evaluations;
        conv = conv && r.converged;
        err = std::max(err, r.error_estimate);
        return r.value;
    };
    quad::QuadratureSpec tail = spec;
    tail.panel_width = 0.5 * b;
    quad::IntegralResult air = quad::integrate_semi_infinite(
        [&](double ay) { return column(ay, true); }, tail);
    quad::IntegralResult sub = quad::integrate_semi_infinite(
        [&](double ay) { return column(ay, false); }, tail);

    // factor 2: both symmetric halves in x'; factor L/2: longitudinal average
    mv.numeric = 2.0 * (mode.length / 2.0) * (air.value + sub.value);
    mv.detail.value = mv.numeric;
    mv.detail.error_estimate =
        2.0 * (mode.length / 2.0) * (air.error_estimate + sub.error_estimate);
    mv.detail.evaluations = air.evaluations + sub.evaluations + evals;
    mv.detail.converged = air.converged && sub.converged && conv;
    return mv;
}

double b_max_single_photon(const CpwGeometry& geom, const CpwMode& mode) {
    const double b = geom.half_width();
    const double vc = mode.length * b * b / pi;
    return std::sqrt(2.0 * constants.mu0 * constants.hbar * mode.omega / vc);
}

double b_max_cqed(const CpwGeometry& geom, const CpwMode& mode) {
    const auto m = conformal_moduli(geom);
    const double kappa0 = sf::ellipk(m.k0) / sf::ellipk(m.k0p);
    const double s1 = slot_amplitude(1, geom.slot_fraction(), geom.strip_fraction());
    const double b = geom.half_width();
    return std::sqrt(2.0 / kappa0) * s1 *
           std::sqrt(2.0 * constants.mu0 * constants.hbar * mode.omega /
                     (mode.length * b * b));
}

double b_at_condensate(const CpwGeometry& geom, const CpwMode& mode, double distance) {
    if (!(distance >= 0.0))
        throw std::domain_error("b_at_condensate: distance must be >= 0");
    return std::exp(-pi * distance / geom.half_width()) * b_max_single_photon(geom, mode);
}

}  // namespace becsense::cpw
