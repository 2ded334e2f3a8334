#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mbvar/charfn.hpp"
#include "mbvar/moments.hpp"
#include "mbvar/trade_tape.hpp"

namespace mbvar {

enum class Measure {
    FrequencyEmpirical,
    FrequencyGaussian,
    MarketGaussian,
    MarketOrder3,
};

std::string measure_name(Measure m);
std::optional<Measure> measure_from_name(const std::string& name);

struct VaRResult {
    Measure measure;
    double epsilon;
    double p_epsilon;
    std::size_t trade_count = 0;
    double mean = 0.0;
    double variance = 0.0;
    std::optional<double> a3;
    std::optional<double> cdf_at_quantile;
    std::vector<std::string> warnings;
};

struct ComparisonReport {
    Window window;
    MomentSet moments;
    std::vector<VaRResult> results;  // ordered by epsilon, then measure
    struct DivergenceRow {
        double epsilon;
        std::optional<double> value;  // p_market(eps) - p_freq(eps), Gaussian pair
    };
    std::vector<DivergenceRow> divergence;
    std::vector<std::string> warnings;
};

// Smallest atom level whose cumulative mass reaches eps (left quantile).
double empirical_quantile(const FrequencyDistribution& dist, double epsilon);

// mean + sigma * Phi^-1(eps); variance must be positive.
double gaussian_quantile(const CentralStats& stats, double epsilon);

// Root of invert_cdf(f, p) = eps over mean +- bracket_sigmas * sigma.
// When the order-3 pseudo-CDF is non-monotone the smallest root is returned
// and a warning is appended to *warnings (when provided).
double order3_quantile(const CharFnApprox& f, double epsilon,
                       std::vector<std::string>* warnings = nullptr,
                       double bracket_sigmas = 12.0);

ComparisonReport compare(const TradeSlice& slice, const Window& window,
                         const std::vector<double>& epsilons, std::size_t n_max);

std::string to_json(const ComparisonReport& report);
std::string to_csv(const ComparisonReport& report);
std::string results_to_csv(const std::vector<VaRResult>& results);
std::string results_to_json(const std::vector<VaRResult>& results);

}  // namespace mbvar
