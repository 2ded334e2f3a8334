#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mbvar/trade_tape.hpp"

namespace mbvar {

enum class MeasureKind { Frequency, Market };

// Discrete frequency measure over exact levels (no binning).
struct FrequencyDistribution {
    struct Atom {
        double level;
        std::int64_t count;
    };
    std::vector<Atom> atoms;  // strictly increasing levels
    std::int64_t total = 0;

    double mass(std::size_t i) const {
        return static_cast<double>(atoms[i].count) / static_cast<double>(total);
    }
};

FrequencyDistribution value_distribution(const TradeSlice& slice);
FrequencyDistribution volume_distribution(const TradeSlice& slice);
FrequencyDistribution price_distribution(const TradeSlice& slice);

// Per-window moment table. Index n runs 1..n_max; accessors take n directly.
class MomentSet {
public:
    MomentSet(std::size_t n_max, std::size_t trade_count,
              std::vector<double> c_sum, std::vector<double> u_sum,
              std::vector<double> pi);

    std::size_t n_max() const { return n_max_; }
    std::size_t trade_count() const { return trade_count_; }

    double value_sum(std::size_t n) const { return c_sum_[n - 1]; }   // C(n)
    double volume_sum(std::size_t n) const { return u_sum_[n - 1]; }  // U(n)
    double value_mean(std::size_t n) const {                          // C_m(n)
        return c_sum_[n - 1] / static_cast<double>(trade_count_);
    }
    double volume_mean(std::size_t n) const {                         // U_m(n)
        return u_sum_[n - 1] / static_cast<double>(trade_count_);
    }
    double market_moment(std::size_t n) const {                       // p(n)
        return c_sum_[n - 1] / u_sum_[n - 1];
    }
    double frequency_moment(std::size_t n) const { return pi_[n - 1]; }  // pi(n)

    double moment(std::size_t n, MeasureKind kind) const {
        return kind == MeasureKind::Market ? market_moment(n) : frequency_moment(n);
    }

private:
    std::size_t n_max_;
    std::size_t trade_count_;
    std::vector<double> c_sum_;
    std::vector<double> u_sum_;
    std::vector<double> pi_;
};

MomentSet compute_moments(const TradeSlice& slice, std::size_t n_max);

// C(1)/U(1); bit-identical to compute_moments(slice, 1).market_moment(1).
double vwap(const TradeSlice& slice);

// p(2) - p(1)^2 under the requested measure. Throws NegativeVariance for
// the market measure when the result is negative; never clamps.
double volatility(const MomentSet& m, MeasureKind kind);

// a3 = p(3) - 3 p(1) sigma^2(p) - p^3(1), from raw moments of the
// requested measure. Negative market variance does not prevent this.
double third_central(const MomentSet& m, MeasureKind kind);

struct CentralStats {
    double mean;
    double variance;
    double third = 0.0;  // valid iff has_third
    bool has_third = false;
    MeasureKind kind;
};

// Throws NegativeVariance for the market measure. Requires n_max >= 2;
// the third central moment is filled when n_max >= 3.
CentralStats central_stats(const MomentSet& m, MeasureKind kind);

std::string to_json(const MomentSet& m);
std::string to_csv(const FrequencyDistribution& dist);

}  // namespace mbvar
