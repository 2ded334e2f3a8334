#include "mbvar/moments.hpp"

#include <algorithm>
#include <cmath>

#include "mbvar/detail/format.hpp"
#include "mbvar/detail/summation.hpp"
#include "mbvar/errors.hpp"

namespace mbvar {

namespace {

template <typename Extract>
FrequencyDistribution build_distribution(const TradeSlice& slice, Extract extract) {
    std::vector<double> levels;
    levels.reserve(slice.count());
    for (const Trade& tr : slice.trades()) levels.push_back(extract(tr));
    std::sort(levels.begin(), levels.end());

    FrequencyDistribution dist;
    dist.total = static_cast<std::int64_t>(levels.size());
    for (double v : levels) {
        if (!dist.atoms.empty() && dist.atoms.back().level == v) {
            ++dist.atoms.back().count;
        } else {
            dist.atoms.push_back({v, 1});
        }
    }
    return dist;
}

}  // namespace

FrequencyDistribution value_distribution(const TradeSlice& slice) {
    return build_distribution(slice, [](const Trade& tr) { return tr.value; });
}

FrequencyDistribution volume_distribution(const TradeSlice& slice) {
    return build_distribution(slice, [](const Trade& tr) { return tr.volume; });
}

FrequencyDistribution price_distribution(const TradeSlice& slice) {
    return build_distribution(slice, [](const Trade& tr) { return tr.price(); });
}

MomentSet::MomentSet(std::size_t n_max, std::size_t trade_count,
                     std::vector<double> c_sum, std::vector<double> u_sum,
                     std::vector<double> pi)
    : n_max_(n_max),
      trade_count_(trade_count),
      c_sum_(std::move(c_sum)),
      u_sum_(std::move(u_sum)),
      pi_(std::move(pi)) {}

MomentSet compute_moments(const TradeSlice& slice, std::size_t n_max) {
    if (n_max < 1) throw InvalidSpec("n_max must be >= 1");
    const auto trades = slice.trades();
    const std::size_t count = trades.size();

    std::vector<double> c_sum(n_max), u_sum(n_max), pi(n_max);
    for (std::size_t n = 1; n <= n_max; ++n) {
        detail::CompensatedSum cs, us, ps;
        for (std::size_t i = 0; i < count; ++i) {
            const double cn = std::pow(trades[i].value, static_cast<double>(n));
            const double un = std::pow(trades[i].volume, static_cast<double>(n));
            if (!std::isfinite(cn) || !std::isfinite(un)) {
                throw OrderOverflow("order " + std::to_string(n) + " overflows at trade " +
                                    std::to_string(i) + " (t=" +
                                    detail::format_double(trades[i].t) + ")");
            }
            cs.add(cn);
            us.add(un);
            ps.add(std::pow(trades[i].price(), static_cast<double>(n)));
        }
        c_sum[n - 1] = cs.value();
        u_sum[n - 1] = us.value();
        pi[n - 1] = ps.value() / static_cast<double>(count);
    }
    return MomentSet(n_max, count, std::move(c_sum), std::move(u_sum), std::move(pi));
}

double vwap(const TradeSlice& slice) {
    return compute_moments(slice, 1).market_moment(1);
}

double volatility(const MomentSet& m, MeasureKind kind) {
    if (m.n_max() < 2) throw InvalidSpec("volatility needs n_max >= 2");
    const double m1 = m.moment(1, kind);
    const double var = m.moment(2, kind) - m1 * m1;
    if (kind == MeasureKind::Market && var < 0.0) {
        throw NegativeVariance(
            "market variance " + detail::format_double(var) +
                " is negative; order-2 approximation does not exist for this slice",
            var);
    }
    return var;
}

double third_central(const MomentSet& m, MeasureKind kind) {
    if (m.n_max() < 3) throw InvalidSpec("third_central needs n_max >= 3");
    const double m1 = m.moment(1, kind);
    const double sigma2 = m.moment(2, kind) - m1 * m1;
    return m.moment(3, kind) - 3.0 * m1 * sigma2 - m1 * m1 * m1;
}

CentralStats central_stats(const MomentSet& m, MeasureKind kind) {
    CentralStats s{};
    s.kind = kind;
    s.mean = m.moment(1, kind);
    s.variance = volatility(m, kind);
    if (m.n_max() >= 3) {
        s.third = third_central(m, kind);
        s.has_third = true;
    }
    return s;
}

}  // namespace mbvar
