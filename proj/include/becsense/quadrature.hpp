#pragma once
// quadrature.hpp — adaptive 1-D integration engine.
//
// Globally adaptive Gauss-Kronrod 7/15 panels: the panel with the largest
// error estimate is bisected until the summed estimate meets the requested
// tolerance or the subdivision budget runs out.  The error estimate is the
// conservative |K15 - G7| per panel, so "converged" is an honest claim, not
// a hope.  Value type is templated (double or std::complex<double>) because
// the condensate amplitude integrals are complex; the public result type is
// real-valued with complex handled by the caller.
//
// Semi-infinite integrals sum fixed-width panels [n*L, (n+1)*L] until the
// last two panels each contribute less than a tenth of the tolerance; the
// reported error includes the last panel as a truncation estimate.  A
// non-decaying tail (panel magnitudes not shrinking) raises an exception
// rather than returning a silently wrong number.
//
// The engine keeps no state between calls; integrand callbacks must be
// reentrant.  Independent integrations are safe to run concurrently.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <future>
#include <limits>
#include <stdexcept>
#include <vector>

namespace becsense::quad {

enum class TailStrategy {
    fixed_upper_limit,
    successive_interval_convergence,
};

struct QuadratureSpec {
    double rel_tol = 1e-6;
    double abs_tol = 0.0;
    int max_subdivisions = 200;
    TailStrategy tail_strategy = TailStrategy::successive_interval_convergence;
    double panel_width = 3.14159265358979323846;  // semi-infinite panel width
    double fixed_upper_limit = 100.0;             // for TailStrategy::fixed_upper_limit
    int max_panels = 4000;                        // semi-infinite panel budget

    void validate() const {
        if (!(rel_tol > 0.0) && !(abs_tol > 0.0))
            throw std::invalid_argument("QuadratureSpec: need a positive tolerance");
        if (rel_tol < 0.0 || abs_tol < 0.0)
            throw std::invalid_argument("QuadratureSpec: tolerances must be >= 0");
        if (max_subdivisions < 8)
            throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 8");
        if (!(panel_width > 0.0))
            throw std::invalid_argument("QuadratureSpec: panel_width must be > 0");
    }

    /// Spec for an integral nested one level inside one using *this.
    QuadratureSpec inner() const {
        QuadratureSpec s = *this;
        s.rel_tol *= 0.1;
        s.abs_tol *= 0.1;
        return s;
    }
};

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::int64_t evaluations = 0;
    bool converged = false;
};

namespace detail {

// 15-point Kronrod abscissae (positive half), embedded 7-point Gauss rule.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double abs_of(double v) { return std::abs(v); }
inline double abs_of(const std::complex<double>& v) { return std::abs(v); }

template <typename T, typename F>
struct Panel {
    double a, b;
    T integral{};
    double error = 0.0;
};

// One GK15 application on [a,b].  Returns (K15, |K15-G7| with a floor tied
// to the integral of |f| so the estimate never claims better than roundoff).
template <typename T, typename F>
void gk15(F&& f, double a, double b, T& out, double& err, std::int64_t& evals) {
    const double h = 0.5 * (b - a), c = 0.5 * (a + b);
    const T fc = f(c);
    T resk = kWgk[7] * fc;
    T resg = kWg[3] * fc;
    double resabs = kWgk[7] * abs_of(fc);
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const T f1 = f(c - dx), f2 = f(c + dx);
        resk += kWgk[j] * (f1 + f2);
        resabs += kWgk[j] * (abs_of(f1) + abs_of(f2));
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    out = resk * h;
    err = std::max(abs_of(T(resk - resg)) * h, 4e-16 * resabs * std::abs(h));
    evals += 15;
}

template <typename T, typename F>
void integrate_adaptive(F&& f, double a, double b, const QuadratureSpec& spec, T& value,
                        double& error, std::int64_t& evals, bool& converged) {
    spec.validate();
    if (!(a < b)) throw std::invalid_argument("integrate_1d: need a < b");
    std::vector<Panel<T, F>> panels;
    panels.reserve(static_cast<std::size_t>(spec.max_subdivisions) + 1);
    Panel<T, F> p0{a, b};
    gk15(f, a, b, p0.integral, p0.error, evals);
    panels.push_back(p0);

    auto tol = [&](double total_abs) {
        return std::max(spec.abs_tol, spec.rel_tol * total_abs);
    };

    T total = p0.integral;
    double total_err = p0.error;
    int splits = 0;
    while (total_err > tol(abs_of(total)) && splits < spec.max_subdivisions) {
        auto worst = std::max_element(
            panels.begin(), panels.end(),
            [](const auto& x, const auto& y) { return x.error < y.error; });
        const double mid = 0.5 * (worst->a + worst->b);
        if (mid <= worst->a || mid >= worst->b) break;  // interval exhausted
        Panel<T, F> left{worst->a, mid}, right{mid, worst->b};
        gk15(f, left.a, left.b, left.integral, left.error, evals);
        gk15(f, right.a, right.b, right.integral, right.error, evals);
        *worst = left;
        panels.push_back(right);
        ++splits;
        total = T{};
        total_err = 0.0;
        for (const auto& p : panels) {
            total += p.integral;
            total_err += p.error;
        }
    }
    value = total;
    error = total_err;
    converged = total_err <= tol(abs_of(total));
}

template <typename T, typename F>
void integrate_semi_infinite_impl(F&& f, const QuadratureSpec& spec, T& value, double& error,
                                  std::int64_t& evals, bool& converged) {
    spec.validate();
    if (spec.tail_strategy == TailStrategy::fixed_upper_limit) {
        integrate_adaptive(f, 0.0, spec.fixed_upper_limit, spec, value, error, evals,
                           converged);
        return;
    }
    const double L = spec.panel_width;
    T acc{};
    double err_acc = 0.0;
    double prev_mag = std::numeric_limits<double>::infinity();
    double last_mag = std::numeric_limits<double>::infinity();
    double peak_mag = 0.0;
    std::vector<double> mags;
    converged = false;
    for (int n = 0; n < spec.max_panels; ++n) {
        QuadratureSpec ps = spec;
        // Later panels only need to resolve their own (shrinking) share.
        ps.abs_tol = std::max(spec.abs_tol,
                              0.05 * std::max(spec.abs_tol, spec.rel_tol * abs_of(acc)));
        T pv{};
        double pe = 0.0;
        bool pc = false;
        integrate_adaptive(f, n * L, (n + 1) * L, ps, pv, pe, evals, pc);
        acc += pv;
        err_acc += pe;
        prev_mag = last_mag;
        last_mag = abs_of(pv);
        peak_mag = std::max(peak_mag, last_mag);
        mags.push_back(last_mag);
        // An identically vanished tail (or integrand) is converged by
        // definition, whatever the tolerances say.
        if (n >= 1 && last_mag == 0.0 && prev_mag == 0.0) {
            converged = true;
            break;
        }
        // The scale reference uses the peak panel so that integrals whose
        // positive and negative panels nearly cancel still terminate.
        const double target =
            std::max(spec.abs_tol, spec.rel_tol * std::max(abs_of(acc), peak_mag));
        if (n >= 1 && last_mag < 0.1 * target && prev_mag < 0.1 * target) {
            converged = true;
            err_acc += last_mag;  // truncation estimate
            break;
        }
        // Tail-decay watchdog: compare the peak panel magnitude of the last
        // window against the window before it.
        if (n >= 40 && n % 10 == 9) {
            const auto sz = mags.size();
            const double recent = *std::max_element(mags.end() - 10, mags.end());
            const double before = *std::max_element(mags.end() - 20, mags.end() - 10);
            const double older = *std::max_element(mags.begin() + (sz - 30), mags.end() - 20);
            if (recent >= older && before >= older && recent > target)
                throw std::runtime_error(
                    "integrate_semi_infinite: panel contributions are not decaying");
        }
    }
    value = acc;
    error = err_acc;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Public, std::function-based entry points.
// ---------------------------------------------------------------------------

inline IntegralResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                                   const QuadratureSpec& spec) {
    IntegralResult r;
    detail::integrate_adaptive(f, a, b, spec, r.value, r.error_estimate, r.evaluations,
                               r.converged);
    return r;
}

inline IntegralResult integrate_semi_infinite(const std::function<double(double)>& f,
                                              const QuadratureSpec& spec) {
    IntegralResult r;
    detail::integrate_semi_infinite_impl(f, spec, r.value, r.error_estimate, r.evaluations,
                                         r.converged);
    return r;
}

/// Volume integral of an azimuthally symmetric field over a cylinder:
/// int_{y_min}^{y_max} dy int_0^{r_max} 2 pi r g(r, y) dr.
/// The outer (y) range is cut into fixed chunks; with threads > 1 the chunks
/// run concurrently (fixed chunking keeps results independent of the thread
/// count).  Inner tolerances run 10x tighter than the outer request.
inline IntegralResult integrate_cylindrical_volume(
    const std::function<double(double, double)>& g, double r_max, double y_min, double y_max,
    const QuadratureSpec& spec, int threads = 1) {
    spec.validate();
    if (!(r_max > 0.0)) throw std::invalid_argument("cylindrical volume: r_max must be > 0");
    if (!(y_min < y_max))
        throw std::invalid_argument("cylindrical volume: need y_min < y_max");

    constexpr int kChunks = 16;
    const QuadratureSpec inner_spec = spec.inner();
    const double two_pi = 2.0 * 3.14159265358979323846;

    struct ChunkResult {
        double value = 0.0, error = 0.0;
        std::int64_t evals = 0;
        bool converged = true;
    };

    auto run_chunk = [&](int ci) {
        ChunkResult out;
        const double ya = y_min + (y_max - y_min) * ci / kChunks;
        const double yb = y_min + (y_max - y_min) * (ci + 1) / kChunks;
        std::int64_t inner_evals = 0;
        double inner_err_peak = 0.0;
        auto slice = [&](double y) {
            IntegralResult ir;
            detail::integrate_adaptive(
                [&](double r) { return two_pi * r * g(r, y); }, 0.0, r_max, inner_spec,
                ir.value, ir.error_estimate, inner_evals, ir.converged);
            if (!ir.converged) out.converged = false;
            inner_err_peak = std::max(inner_err_peak, ir.error_estimate);
            return ir.value;
        };
        QuadratureSpec outer = spec;
        outer.abs_tol = std::max(spec.abs_tol / kChunks, 0.0);
        bool oc = false;
        detail::integrate_adaptive(slice, ya, yb, outer, out.value, out.error, out.evals, oc);
        out.converged = out.converged && oc;
        out.evals += inner_evals;
        out.error += inner_err_peak * (yb - ya);  // propagated inner uncertainty
        return out;
    };

    std::vector<ChunkResult> results(kChunks);
    if (threads > 1) {
        std::vector<std::future<ChunkResult>> futs;
        futs.reserve(kChunks);
        for (int ci = 0; ci < kChunks; ++ci)
            futs.push_back(std::async(std::launch::async, run_chunk, ci));
        for (int ci = 0; ci < kChunks; ++ci) results[ci] = futs[ci].get();
    } else {
        for (int ci = 0; ci < kChunks; ++ci) results[ci] = run_chunk(ci);
    }

    IntegralResult total;
    total.converged = true;
    for (const auto& c : results) {
        total.value += c.value;
        total.error_estimate += c.error;
        total.evaluations += c.evals;
        total.converged = total.converged && c.converged;
    }
    return total;
}

}  // namespace becsense::quad
