#include "mbvar/var_engine.hpp"

#include <algorithm>
#include <cmath>

#include "mbvar/detail/format.hpp"
#include "mbvar/errors.hpp"
#include "mbvar/normal.hpp"

namespace mbvar {

namespace {

constexpr double kCdfTolerance = 1e-8;

void check_epsilon(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw InvalidSpec("epsilon must lie in (0, 1), got " +
                          detail::format_double(epsilon));
    }
}

}  // namespace

std::string measure_name(Measure m) {
    switch (m) {
        case Measure::FrequencyEmpirical: return "frequency-empirical";
        case Measure::FrequencyGaussian: return "frequency-gaussian";
        case Measure::MarketGaussian: return "market-gaussian";
        case Measure::MarketOrder3: return "market-order3";
    }
    return "unknown";
}

std::optional<Measure> measure_from_name(const std::string& name) {
    if (name == "frequency-empirical") return Measure::FrequencyEmpirical;
    if (name == "frequency-gaussian") return Measure::FrequencyGaussian;
    if (name == "market-gaussian") return Measure::MarketGaussian;
    if (name == "market-order3") return Measure::MarketOrder3;
    return std::nullopt;
}

double empirical_quantile(const FrequencyDistribution& dist, double epsilon) {
    check_epsilon(epsilon);
    if (dist.atoms.empty()) throw InvalidSpec("empty distribution");
    const double threshold = epsilon * static_cast<double>(dist.total);
    std::int64_t cumulative = 0;
    for (const auto& atom : dist.atoms) {
        cumulative += atom.count;
        if (static_cast<double>(cumulative) >= threshold) return atom.level;
    }
    return dist.atoms.back().level;
}

double gaussian_quantile(const CentralStats& stats, double epsilon) {
    check_epsilon(epsilon);
    if (!(stats.variance > 0.0)) {
        throw NonPositiveVariance("gaussian quantile needs variance > 0, got " +
                                  detail::format_double(stats.variance));
    }
    return stats.mean + std::sqrt(stats.variance) * normal_quantile(epsilon);
}

double order3_quantile(const CharFnApprox& f, double epsilon,
                       std::vector<std::string>* warnings, double bracket_sigmas) {
    if (f.order != 3) throw UnsupportedOrder("order3_quantile needs an order-3 fit");
    check_epsilon(epsilon);
    if (!(bracket_sigmas > 0.0)) throw InvalidSpec("bracket width must be > 0");

    const double sigma = f.sigma();
    const double lo = f.a1 - bracket_sigmas * sigma;
    const double hi = f.a1 + bracket_sigmas * sigma;

    // Coarse scan for the first sign change, then bisection. The scan keeps
    // the smallest root when the pseudo-CDF is non-monotone.
    constexpr int kScanPoints = 96;
    const double step = (hi - lo) / kScanPoints;
    double prev_p = lo;
    double prev_g = invert_cdf(f, lo) - epsilon;
    if (prev_g > 0.0) {
        throw BracketFailure("CDF already exceeds epsilon at the lower bracket edge");
    }
    double root_lo = 0.0, root_hi = 0.0;
    bool found = false;
    for (int i = 1; i <= kScanPoints; ++i) {
        const double p = (i == kScanPoints) ? hi : lo + i * step;
        const double g = invert_cdf(f, p) - epsilon;
        if (prev_g <= 0.0 && g >= 0.0) {
            root_lo = prev_p;
            root_hi = p;
            found = true;
            break;
        }
        prev_p = p;
        prev_g = g;
    }
    if (!found) {
        throw BracketFailure("epsilon " + detail::format_double(epsilon) +
                             " not attained within mean +- 12 sigma");
    }

    double root = root_lo;
    for (int iter = 0; iter < 200; ++iter) {
        root = 0.5 * (root_lo + root_hi);
        const double g_root = invert_cdf(f, root) - epsilon;
        if (std::abs(g_root) <= kCdfTolerance || root_hi - root_lo < 1e-13 * sigma) break;
        if (g_root < 0.0) {
            root_lo = root;
        } else {
            root_hi = root;
        }
    }

    if (warnings != nullptr && f.a3 != 0.0) {
        const DensityGrid grid = tabulate_density(
            f, GridSpec{std::min(lo, f.a1 - 8.0 * sigma),
                        std::max(hi, f.a1 + 8.0 * sigma), 1025});
        if (grid.min_density < -1e-9) {
            warnings->push_back(
                "pseudo-density negative in bracket (min " +
                detail::format_double(grid.min_density) + "); smallest root returned");
        }
    }
    return root;
}

ComparisonReport compare(const TradeSlice& slice, const Window& window,
                         const std::vector<double>& epsilons, std::size_t n_max) {
    if (slice.empty()) throw InvalidSpec("compare needs a non-empty slice");
    if (n_max < 2) throw InvalidSpec("compare needs n_max >= 2");
    for (double e : epsilons) check_epsilon(e);

    ComparisonReport report{window, compute_moments(slice, n_max), {}, {}, {}};
    const MomentSet& m = report.moments;
    const std::size_t n = m.trade_count();
    const FrequencyDistribution prices = price_distribution(slice);

    // Frequency measure: variance 0 means a degenerate point mass.
    CentralStats freq{};
    freq.kind = MeasureKind::Frequency;
    freq.mean = m.frequency_moment(1);
    freq.variance = volatility(m, MeasureKind::Frequency);
    const bool freq_degenerate = !(freq.variance > 0.0);
    if (freq_degenerate) report.warnings.push_back("degenerate: all slice prices equal");

    // Market measure: negative variance degrades the report, never fails it.
    bool market_available = true;
    bool market_degenerate = false;
    CentralStats market{};
    market.kind = MeasureKind::Market;
    market.mean = m.market_moment(1);
    try {
        market.variance = volatility(m, MeasureKind::Market);
        market_degenerate = !(market.variance > 0.0);
    } catch (const NegativeVariance& e) {
        market_available = false;
        report.warnings.push_back(std::string("NegativeVariance: ") + e.what());
    }

    std::optional<CharFnApprox> order3;
    if (market_available && !market_degenerate && n_max >= 3) {
        market.third = third_central(m, MeasureKind::Market);
        market.has_third = true;
        order3 = fit_charfn(market, 3);
    }

    for (double eps : epsilons) {
        {
            VaRResult r{Measure::FrequencyEmpirical, eps,
                        empirical_quantile(prices, eps), n,
                        freq.mean, freq.variance, std::nullopt, std::nullopt, {}};
            std::int64_t at_or_below = 0;
            for (const auto& atom : prices.atoms) {
                if (atom.level <= r.p_epsilon) at_or_below += atom.count;
            }
            r.cdf_at_quantile = static_cast<double>(at_or_below) /
                                static_cast<double>(prices.total);
            report.results.push_back(std::move(r));
        }

        std::optional<double> freq_gauss;
        {
            VaRResult r{Measure::FrequencyGaussian, eps, 0.0, n,
                        freq.mean, freq.variance, std::nullopt, std::nullopt, {}};
            if (freq_degenerate) {
                r.p_epsilon = freq.mean;
                r.warnings.push_back("degenerate");
            } else {
                r.p_epsilon = gaussian_quantile(freq, eps);
                r.cdf_at_quantile =
                    normal_cdf((r.p_epsilon - freq.mean) / std::sqrt(freq.variance));
            }
            freq_gauss = r.p_epsilon;
            report.results.push_back(std::move(r));
        }

        std::optional<double> market_gauss;
        if (market_available) {
            VaRResult r{Measure::MarketGaussian, eps, 0.0, n,
                        market.mean, market.variance, std::nullopt, std::nullopt, {}};
            if (market_degenerate) {
                r.p_epsilon = market.mean;
                r.warnings.push_back("degenerate");
            } else {
                r.p_epsilon = gaussian_quantile(market, eps);
                r.cdf_at_quantile =
                    normal_cdf((r.p_epsilon - market.mean) / std::sqrt(market.variance));
            }
            market_gauss = r.p_epsilon;
            report.results.push_back(std::move(r));
        }

        if (order3) {
            VaRResult r{Measure::MarketOrder3, eps, 0.0, n,
                        market.mean, market.variance, market.third, std::nullopt, {}};
            try {
                r.p_epsilon = order3_quantile(*order3, eps, &r.warnings);
                r.cdf_at_quantile = invert_cdf(*order3, r.p_epsilon);
                report.results.push_back(std::move(r));
            } catch (const Error& e) {
                report.warnings.push_back("market-order3 at epsilon " +
                                          detail::format_double(eps) + ": " + e.what());
            }
        }

        ComparisonReport::DivergenceRow row{eps, std::nullopt};
        if (freq_gauss && market_gauss) row.value = *market_gauss - *freq_gauss;
        report.divergence.push_back(row);
    }
    return report;
}

}  // namespace mbvar
