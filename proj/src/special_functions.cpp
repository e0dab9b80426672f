#include "becsense/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace becsense::sf {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kSqrt3 = 1.7320508075688772935;

// Gauss-Legendre nodes/weights on [-1,1], generated once by Newton iteration
// on the Legendre recurrence.  N=128 resolves every integrand used below
// (largest exponent/oscillation argument is ~43) to machine precision.
template <int N>
struct GaussLegendre {
    std::array<double, N> x{}, w{};
    GaussLegendre() {
        for (int i = 0; i < (N + 1) / 2; ++i) {
            double z = std::cos(kPi * (i + 0.75) / (N + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 0; j < N; ++j) {
                    double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
                }
                pp = N * (z * p0 - p1) / (z * z - 1.0);
                double dz = p0 / pp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            x[i] = -z;
            x[N - 1 - i] = z;
            w[i] = w[N - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
        }
    }
};

const GaussLegendre<128>& gl128() {
    static const GaussLegendre<128> table;
    return table;
}

// integral of f over [a,b] with the fixed 128-point rule
template <typename F>
double gl_integrate(F&& f, double a, double b) {
    const auto& g = gl128();
    const double c = 0.5 * (b - a), m = 0.5 * (a + b);
    double s = 0.0;
    for (int i = 0; i < 128; ++i) s += g.w[i] * f(m + c * g.x[i]);
    return c * s;
}

// ---------------------------------------------------------------------------
// Airy functions.  Region layout on the real axis:
//   |x| <= 2.5          Maclaurin series, long double accumulation
//   2.5 < x <= 16       modified-Bessel connection, K_nu / (I_nu + I_-nu)
//   x > 16              Poincare asymptotics in zeta = (2/3) x^(3/2)
//   -16 <= x < -2.5     Bessel-J connection (oscillatory integrals)
//   x < -16             oscillatory asymptotics
// ---------------------------------------------------------------------------

constexpr double kSeriesCut = 2.5;
constexpr double kAsymCut = 16.0;
constexpr double kRangeMax = 1e4;
constexpr double kBiOverflowZeta = 707.0;  // exp(zeta) at the double limit

struct AiryQuad {
    double ai, aip, bi, bip;
};

// Ai(0) and -Ai'(0): 3^(-2/3)/Gamma(2/3) and 3^(-1/3)/Gamma(1/3).
constexpr long double kC1 = 0.35502805388781723926L;
constexpr long double kC2 = 0.25881940379280679841L;

AiryQuad airy_series(double xd) {
    const long double x = xd;
    const long double x3 = x * x * x;
    long double f = 1.0L, g = x, fp = 0.0L, gp = 1.0L;
    long double tf = 1.0L, tg = x;
    for (int k = 1; k < 80; ++k) {
        tf *= x3 / ((3.0L * k) * (3.0L * k - 1.0L));
        tg *= x3 / ((3.0L * k + 1.0L) * (3.0L * k));
        f += tf;
        g += tg;
        // term-wise derivatives: d/dx x^(3k) = 3k x^(3k-1), etc.
        if (x != 0.0L) {
            fp += tf * (3.0L * k) / x;
            gp += tg * (3.0L * k + 1.0L) / x;
        }
        if (std::abs(tf) < 1e-23L * std::abs(f) &&
            std::abs(tg) < 1e-23L * (std::abs(g) + 1e-30L))
            break;
    }
    AiryQuad q;
    q.ai = static_cast<double>(kC1 * f - kC2 * g);
    q.bi = static_cast<double>(kSqrt3 * (kC1 * f + kC2 * g));
    q.aip = static_cast<double>(kC1 * fp - kC2 * gp);
    q.bip = static_cast<double>(kSqrt3 * (kC1 * fp + kC2 * gp));
    return q;
}

// K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt
double bessel_k_nu(double z, double nu) {
    const double tmax = std::acosh(1.0 + 46.0 / z);
    return gl_integrate(
        [&](double t) { return std::exp(-z * std::cosh(t)) * std::cosh(nu * t); }, 0.0, tmax);
}

// I_nu(z) + I_{-nu}(z)
double bessel_i_sum(double z, double nu) {
    const double theta =
        gl_integrate([&](double t) { return std::exp(z * std::cos(t)) * std::cos(nu * t); },
                     0.0, kPi);
    const double tmax = std::acosh(1.0 + 46.0 / z);
    const double tail = gl_integrate(
        [&](double t) { return std::exp(-z * std::cosh(t)) * std::sinh(nu * t); }, 0.0, tmax);
    return (2.0 / kPi) * theta + (2.0 * std::sin(nu * kPi) / kPi) * tail;
}

// J_nu(z) + J_{-nu}(z)
double bessel_j_sum(double z, double nu) {
    const double theta =
        gl_integrate([&](double t) { return std::cos(z * std::sin(t)) * std::cos(nu * t); },
                     0.0, kPi);
    const double tmax = std::asinh(46.0 / z);
    const double tail = gl_integrate(
        [&](double t) { return std::exp(-z * std::sinh(t)) * std::sinh(nu * t); }, 0.0, tmax);
    return (2.0 / kPi) * theta + (2.0 * std::sin(nu * kPi) / kPi) * tail;
}

// J_{-nu}(z) - J_nu(z)
double bessel_j_diff(double z, double nu) {
    const double theta =
        gl_integrate([&](double t) { return std::sin(z * std::sin(t)) * std::sin(nu * t); },
                     0.0, kPi);
    const double tmax = std::asinh(46.0 / z);
    const double tail = gl_integrate(
        [&](double t) { return std::exp(-z * std::sinh(t)) * std::cosh(nu * t); }, 0.0, tmax);
    return -(2.0 / kPi) * theta + (2.0 * std::sin(nu * kPi) / kPi) * tail;
}

// Asymptotic coefficients u_k (and v_k for the derivatives).
constexpr int kNumUV = 40;
struct UVTable {
    std::array<double, kNumUV> u{}, v{};
    UVTable() {
        u[0] = v[0] = 1.0;
        for (int k = 1; k < kNumUV; ++k) {
            u[k] = u[k - 1] * (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) /
                   ((2.0 * k - 1.0) * 216.0 * k);
            v[k] = (6.0 * k + 1.0) / (1.0 - 6.0 * k) * u[k];
        }
    }
};

const UVTable& uv() {
    static const UVTable table;
    return table;
}

double zeta_of(double absx) { return 2.0 / 3.0 * absx * std::sqrt(absx); }

AiryQuad airy_asym_pos(double x) {
    const auto& t = uv();
    const double z = zeta_of(x);
    double sa = 0.0, sb = 0.0, sap = 0.0, sbp = 0.0, zk = 1.0;
    for (int k = 0; k < 26; ++k) {
        const double tu = t.u[k] / zk, tv = t.v[k] / zk;
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        sa += sign * tu;
        sb += tu;
        sap += sign * tv;
        sbp += tv;
        if (tu < 1e-18) break;
        zk *= z;
    }
    const double x14 = std::pow(x, 0.25);
    const double em = std::exp(-z), ep = std::exp(z);
    return {em * sa / (2.0 * kSqrtPi * x14), -em * sap * x14 / (2.0 * kSqrtPi),
            ep * sb / (kSqrtPi * x14), ep * sbp * x14 / kSqrtPi};
}

AiryQuad airy_asym_neg(double x) {
    const auto& t = uv();
    const double ax = -x;
    const double z = zeta_of(ax);
    double se = 0.0, so = 0.0, sve = 0.0, svo = 0.0;
    double z2k = 1.0;
    const double z2 = z * z;
    for (int k = 0; k < 13; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        se += sign * t.u[2 * k] / z2k;
        so += sign * t.u[2 * k + 1] / (z2k * z);
        sve += sign * t.v[2 * k] / z2k;
        svo += sign * t.v[2 * k + 1] / (z2k * z);
        z2k *= z2;
    }
    const double om = z - kPi / 4.0;
    const double c = std::cos(om), s = std::sin(om);
    const double x14 = std::pow(ax, 0.25);
    const double q = 1.0 / (kSqrtPi * x14);
    const double p = x14 / kSqrtPi;
    return {q * (c * se + s * so), p * (s * sve - c * svo), q * (-s * se + c * so),
            p * (c * sve + s * svo)};
}

enum class Region { Series, MidPos, AsymPos, MidNeg, AsymNeg };

Region classify(double x) {
    if (!std::isfinite(x)) throw std::domain_error("airy: non-finite argument");
    if (std::abs(x) > kRangeMax)
        throw std::domain_error("airy: |x| > 1e4 is outside the supported range");
    if (std::abs(x) <= kSeriesCut) return Region::Series;
    if (x > kAsymCut) return Region::AsymPos;
    if (x > 0.0) return Region::MidPos;
    if (x < -kAsymCut) return Region::AsymNeg;
    return Region::MidNeg;
}

void check_bi_overflow(double x) {
    if (x > kAsymCut && zeta_of(x) > kBiOverflowZeta)
        throw std::range_error("airy_bi: value overflows double for x > ~104");
}

}  // namespace

double airy_ai(double x) {
    switch (classify(x)) {
        case Region::Series: return airy_series(x).ai;
        case Region::MidPos: return std::sqrt(x / 3.0) / kPi * bessel_k_nu(zeta_of(x), 1.0 / 3.0);
        case Region::AsymPos: return airy_asym_pos(x).ai;
        case Region::MidNeg: return std::sqrt(-x) / 3.0 * bessel_j_sum(zeta_of(-x), 1.0 / 3.0);
        case Region::AsymNeg: return airy_asym_neg(x).ai;
    }
    return 0.0;  // unreachable
}

double airy_bi(double x) {
    check_bi_overflow(x);
    switch (classify(x)) {
        case Region::Series: return airy_series(x).bi;
        case Region::MidPos: return std::sqrt(x / 3.0) * bessel_i_sum(zeta_of(x), 1.0 / 3.0);
        case Region::AsymPos: return airy_asym_pos(x).bi;
        case Region::MidNeg: return std::sqrt(-x / 3.0) * bessel_j_diff(zeta_of(-x), 1.0 / 3.0);
        case Region::AsymNeg: return airy_asym_neg(x).bi;
    }
    return 0.0;
}

double airy_ai_deriv(double x) {
    switch (classify(x)) {
        case Region::Series: return airy_series(x).aip;
        case Region::MidPos: return -x / (kPi * kSqrt3) * bessel_k_nu(zeta_of(x), 2.0 / 3.0);
        case Region::AsymPos: return airy_asym_pos(x).aip;
        case Region::MidNeg: return -(-x) / 3.0 * bessel_j_diff(zeta_of(-x), 2.0 / 3.0);
        case Region::AsymNeg: return airy_asym_neg(x).aip;
    }
    return 0.0;
}

double airy_bi_deriv(double x) {
    check_bi_overflow(x);
    switch (classify(x)) {
        case Region::Series: return airy_series(x).bip;
        case Region::MidPos: return x / kSqrt3 * bessel_i_sum(zeta_of(x), 2.0 / 3.0);
        case Region::AsymPos: return airy_asym_pos(x).bip;
        case Region::MidNeg: return (-x) / kSqrt3 * bessel_j_sum(zeta_of(-x), 2.0 / 3.0);
        case Region::AsymNeg: return airy_asym_neg(x).bip;
    }
    return 0.0;
}

ComplexValue airy_ci(double x) {
    switch (classify(x)) {
        case Region::Series: {
            const auto q = airy_series(x);
            return {q.bi, q.ai};
        }
        case Region::AsymPos: {
            check_bi_overflow(x);
            const auto q = airy_asym_pos(x);
            return {q.bi, q.ai};
        }
        case Region::AsymNeg: {
            const auto q = airy_asym_neg(x);
            return {q.bi, q.ai};
        }
        default: return {airy_bi(x), airy_ai(x)};
    }
}

// ---------------------------------------------------------------------------
// Complete elliptic integral K(k), modulus convention, via the Carlson
// symmetric form R_F(0, 1-k^2, 1) with the standard duplication iteration.
// ---------------------------------------------------------------------------

namespace {

double carlson_rf(double x, double y, double z) {
    double mu = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        const double lam = sx * sy + sy * sz + sz * sx;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        mu = (x + y + z) / 3.0;
        const double eps =
            std::max({std::abs(x - mu), std::abs(y - mu), std::abs(z - mu)}) / mu;
        if (eps < 1e-10) break;
    }
    const double dx = 1.0 - x / mu, dy = 1.0 - y / mu, dz = 1.0 - z / mu;
    const double e2 = dx * dy + dy * dz + dz * dx;
    const double e3 = dx * dy * dz;
    return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) /
           std::sqrt(mu);
}

}  // namespace

double ellipk(double k) {
    if (!(k >= 0.0 && k < 1.0))
        throw std::domain_error("ellipk: modulus must satisfy 0 <= k < 1");
    return carlson_rf(0.0, (1.0 - k) * (1.0 + k), 1.0);
}

// ---------------------------------------------------------------------------
// Bessel J0: long-double Maclaurin series below x = 16, Hankel asymptotic
// expansion above (both branches hold ~1e-14 absolute at the switch point).
// ---------------------------------------------------------------------------

namespace {

constexpr double kJ0SeriesCut = 16.0;

double j0_series(double xd) {
    const long double x = xd;
    const long double q = x * x / 4.0L;
    long double term = 1.0L, sum = 1.0L;
    for (int k = 1; k < 120; ++k) {
        term *= -q / (static_cast<long double>(k) * k);
        sum += term;
        if (std::abs(term) < 1e-22L * std::abs(sum) + 1e-30L) break;
    }
    return static_cast<double>(sum);
}

double j0_hankel(double x) {
    // J0 = sqrt(2/(pi x)) Re[ e^{i(x - pi/4)} sum_k (-i)^k c_k / x^k ],
    // c_k = c_{k-1} (2k-1)^2 / (8k).
    double c = 1.0, sr = 1.0, si = 0.0;
    double re = 1.0, im = 0.0;  // (-i)^k cycle
    for (int k = 1; k < 30; ++k) {
        c *= (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k);
        const double nre = im, nim = -re;  // multiply by -i
        re = nre;
        im = nim;
        const double t = c / std::pow(x, k);
        sr += re * t;
        si += im * t;
        if (t < 1e-18) break;
    }
    const double om = x - kPi / 4.0;
    return std::sqrt(2.0 / (kPi * x)) * (std::cos(om) * sr - std::sin(om) * si);
}

}  // namespace

double bessel_j0(double x) {
    if (!(x >= 0.0)) throw std::domain_error("bessel_j0: argument must be >= 0");
    return x < kJ0SeriesCut ? j0_series(x) : j0_hankel(x);
}

double sinc_half(int n, double delta) {
    if (n < 1) throw std::domain_error("sinc_half: n must be >= 1");
    if (!(delta >= 0.0 && delta <= 1.0))
        throw std::domain_error("sinc_half: delta must lie in [0, 1]");
    const double u = n * kPi * delta / 2.0;
    if (u < 1e-8) return 1.0 - u * u / 6.0;
    return std::sin(u) / u;
}

}  // namespace becsense::sf
