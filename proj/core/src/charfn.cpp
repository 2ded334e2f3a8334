#include "mbvar/charfn.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "mbvar/detail/format.hpp"
#include "mbvar/errors.hpp"

namespace mbvar {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kGilPelaezTarget = 1e-8;  // absolute error target for the CDF integral

// Adaptive Simpson with a fixed subdivision schedule. Depth exhaustion is
// accumulated into *err_out instead of aborting, so the caller can decide.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth, double* err_out) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        if (depth <= 0) *err_out += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, err_out) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, err_out);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 std::size_t panels, double tol) {
    double total = 0.0;
    double err = 0.0;
    const double h = (b - a) / static_cast<double>(panels);
    for (std::size_t i = 0; i < panels; ++i) {
        const double x0 = a + static_cast<double>(i) * h;
        const double x1 = (i + 1 == panels) ? b : x0 + h;
        const double xm = 0.5 * (x0 + x1);
        const double f0 = f(x0);
        const double fm = f(xm);
        const double f1 = f(x1);
        const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        total += adaptive_simpson(f, x0, x1, f0, fm, f1, whole,
                                  tol / static_cast<double>(panels), 28, &err);
    }
    if (err > 100.0 * tol) {
        throw QuadratureFailure("Gil-Pelaez quadrature did not converge; error estimate " +
                                    detail::format_double(err),
                                err);
    }
    return total;
}

}  // namespace

double CharFnApprox::sigma() const { return std::sqrt(a2); }

CharFnApprox fit_charfn(const CentralStats& stats, int order) {
    if (order < 1 || order > 3) {
        throw UnsupportedOrder("approximation order must be 1, 2 or 3, got " +
                               std::to_string(order));
    }
    CharFnApprox f{};
    f.order = order;
    f.a1 = stats.mean;
    f.kind = stats.kind;
    if (order >= 2) {
        if (!(stats.variance > 0.0)) {
            throw NonPositiveVariance("order " + std::to_string(order) +
                                      " fit needs variance > 0, got " +
                                      detail::format_double(stats.variance));
        }
        f.a2 = stats.variance;
    }
    if (order == 3) {
        if (!stats.has_third || !std::isfinite(stats.third)) {
            throw InvalidSpec("order-3 fit needs a finite third central moment");
        }
        f.a3 = stats.third;
    }
    return f;
}

std::complex<double> evaluate(const CharFnApprox& f, double x) {
    double re = 0.0;
    double im = f.a1 * x;
    if (f.order >= 2) re -= 0.5 * f.a2 * x * x;
    if (f.order == 3) im -= f.a3 * x * x * x / 6.0;
    return std::exp(std::complex<double>(re, im));
}

double moment_check(const CharFnApprox& f, std::size_t n) {
    if (n < 1 || n > static_cast<std::size_t>(f.order)) {
        throw OrderExceedsFit("moment order " + std::to_string(n) +
                              " exceeds fit order " + std::to_string(f.order));
    }
    switch (n) {
        case 1: return f.a1;
        case 2: return f.a2 + f.a1 * f.a1;
        default: return f.a3 + 3.0 * f.a1 * f.a2 + f.a1 * f.a1 * f.a1;
    }
}

double gaussian_density(const CharFnApprox& f, double price) {
    if (f.order != 2) {
        throw UnsupportedOrder("gaussian_density requires an order-2 approximation");
    }
    const double z = (price - f.a1) / f.sigma();
    return std::exp(-0.5 * z * z) / (f.sigma() * std::sqrt(2.0 * kPi));
}

double invert_cdf(const CharFnApprox& f, double price) {
    if (f.order == 1) return price < f.a1 ? 0.0 : 1.0;

    const double a1 = f.a1;
    const double a2 = f.a2;
    const double a3 = f.order == 3 ? f.a3 : 0.0;
    const double shift = a1 - price;
    // Im[exp(-ixp) F(x)] / x, with the removable singularity filled at 0.
    auto integrand = [=](double x) {
        if (x == 0.0) return shift;
        const double phase = shift * x - a3 * x * x * x / 6.0;
        return std::exp(-0.5 * a2 * x * x) * std::sin(phase) / x;
    };

    const double upper = 50.0 / f.sigma();
    // Enough initial panels to resolve the fastest oscillation in the tail.
    const double rate = std::abs(shift) + 0.5 * std::abs(a3) * upper * upper;
    const std::size_t panels = std::clamp<std::size_t>(
        static_cast<std::size_t>(rate * upper / kPi) + 1, 64, 65536);

    const double integral = integrate(integrand, 0.0, upper, panels, kGilPelaezTarget);
    double cdf = 0.5 - integral / kPi;
    if (f.order == 2) cdf = std::clamp(cdf, 0.0, 1.0);
    return cdf;
}

GridSpec default_grid(const CharFnApprox& f) {
    const double s = f.order >= 2 ? f.sigma() : 1.0;
    return GridSpec{f.a1 - 10.0 * s, f.a1 + 10.0 * s, 4096};
}

DensityGrid tabulate_density(const CharFnApprox& f, const GridSpec& grid) {
    if (f.order == 1) {
        throw PointMassUnsupported("order-1 approximation is a point mass at " +
                                   detail::format_double(f.a1));
    }
    if (!(grid.max > grid.min) || grid.points < 16) {
        throw InvalidSpec("density grid needs min < max and at least 16 points");
    }
    const double s = f.sigma();
    if (grid.min > f.a1 - 8.0 * s || grid.max < f.a1 + 8.0 * s) {
        throw InvalidSpec("density grid must cover mean +- 8 sigma");
    }

    DensityGrid out{};
    out.min = grid.min;
    out.max = grid.max;
    out.step = (grid.max - grid.min) / static_cast<double>(grid.points - 1);

    // Composite Simpson over x in [0, X]; exp(-a2 x^2/2) is < 1e-21 past
    // 10 sigma^-1, and the sample count tracks the fastest phase rate.
    const double upper = 10.0 / s;
    const double dev = std::max(std::abs(grid.min - f.a1), std::abs(grid.max - f.a1));
    const double rate = dev + 0.5 * std::abs(f.order == 3 ? f.a3 : 0.0) * upper * upper;
    std::size_t samples = std::max<std::size_t>(
        8192, 16 * (static_cast<std::size_t>(rate * upper / kPi) + 1));
    if (samples % 2 == 1) ++samples;
    const double dx = upper / static_cast<double>(samples);

    out.prices.resize(grid.points);
    out.density.resize(grid.points);
    const double a3 = f.order == 3 ? f.a3 : 0.0;

    // The Gaussian amplitude and the cubic phase term do not depend on the
    // grid point; hoist them out of the per-price loop.
    std::vector<double> xs(samples + 1), amp(samples + 1), cubic(samples + 1);
    for (std::size_t k = 0; k <= samples; ++k) {
        const double x = static_cast<double>(k) * dx;
        const double w = (k == 0 || k == samples) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        xs[k] = x;
        amp[k] = w * std::exp(-0.5 * f.a2 * x * x);
        cubic[k] = a3 * x * x * x / 6.0;
    }

    for (std::size_t j = 0; j < grid.points; ++j) {
        const double p = grid.min + static_cast<double>(j) * out.step;
        const double shift = f.a1 - p;
        double acc = 0.0;
        for (std::size_t k = 0; k <= samples; ++k) {
            acc += amp[k] * std::cos(shift * xs[k] - cubic[k]);
        }
        out.prices[j] = p;
        out.density[j] = acc * dx / (3.0 * kPi);
    }

    out.cdf.resize(grid.points);
    out.cdf[0] = 0.0;
    for (std::size_t j = 1; j < grid.points; ++j) {
        out.cdf[j] = out.cdf[j - 1] + 0.5 * (out.density[j - 1] + out.density[j]) * out.step;
    }
    out.integral_of_density = out.cdf.back();
    out.min_density = *std::min_element(out.density.begin(), out.density.end());
    out.warning = out.min_density < -1e-6;
    return out;
}

}  // namespace mbvar
