#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "mbvar/moments.hpp"

namespace mbvar {

// Exponential-polynomial approximation F_k(x) of the price characteristic
// function, cumulant convention:
//   k=1: exp(i a1 x)
//   k=2: exp(i a1 x - a2 x^2 / 2)
//   k=3: exp(i a1 x - a2 x^2 / 2 - i a3 x^3 / 6)
struct CharFnApprox {
    int order;  // k in {1, 2, 3}
    double a1;  // mean
    double a2 = 0.0;  // variance, > 0 when order >= 2
    double a3 = 0.0;  // third central moment, order == 3 only
    MeasureKind kind = MeasureKind::Frequency;

    double sigma() const;
};

CharFnApprox fit_charfn(const CentralStats& stats, int order);

std::complex<double> evaluate(const CharFnApprox& f, double x);

// n-th moment of the implied measure, from the cumulants analytically.
double moment_check(const CharFnApprox& f, std::size_t n);

// Closed-form density of the order-2 (Gaussian) approximation.
double gaussian_density(const CharFnApprox& f, double price);

// Gil-Pelaez inversion: 1/2 - (1/pi) \int_0^X Im[exp(-ixp) F(x)] / x dx.
// Order 1 is the point-mass step, returned analytically.
double invert_cdf(const CharFnApprox& f, double price);

struct GridSpec {
    double min;
    double max;
    std::size_t points;
};

GridSpec default_grid(const CharFnApprox& f);  // mean +- 10 sigma, 4096 points

struct DensityGrid {
    double min;
    double max;
    double step;
    std::vector<double> prices;
    std::vector<double> density;
    std::vector<double> cdf;
    double integral_of_density;
    double min_density;
    bool warning;  // min_density < -1e-6
};

// Numerical inversion of F_k on a uniform price grid. Order 3 may produce a
// pseudo-density with negative values; these are reported, never clipped.
DensityGrid tabulate_density(const CharFnApprox& f, const GridSpec& grid);

std::string to_csv(const DensityGrid& grid);
std::string diagnostics_json(const DensityGrid& grid);

}  // namespace mbvar
