#include <cmath>
#include <string>

#include "mbvar/charfn.hpp"
#include "mbvar/detail/format.hpp"
#include "mbvar/moments.hpp"
#include "mbvar/var_engine.hpp"

#include "json.hpp"

namespace mbvar {

namespace {

using json = nlohmann::ordered_json;

json moments_json(const MomentSet& m) {
    json rows = json::array();
    for (std::size_t n = 1; n <= m.n_max(); ++n) {
        rows.push_back({{"n", n},
                        {"C_sum", m.value_sum(n)},
                        {"U_sum", m.volume_sum(n)},
                        {"C_m", m.value_mean(n)},
                        {"U_m", m.volume_mean(n)},
                        {"p", m.market_moment(n)},
                        {"pi", m.frequency_moment(n)}});
    }
    return json{{"n_max", m.n_max()}, {"N", m.trade_count()}, {"rows", rows}};
}

json result_json(const VaRResult& r) {
    json diag{{"N", r.trade_count},
              {"mean", r.mean},
              {"variance", r.variance}};
    if (r.a3) diag["a3"] = *r.a3;
    if (r.cdf_at_quantile) diag["cdf_at_quantile"] = *r.cdf_at_quantile;
    diag["warnings"] = r.warnings;
    return json{{"epsilon", r.epsilon},
                {"measure", measure_name(r.measure)},
                {"p_epsilon", r.p_epsilon},
                {"diagnostics", diag}};
}

std::string joined(const std::vector<std::string>& warnings) {
    std::string out;
    for (std::size_t i = 0; i < warnings.size(); ++i) {
        if (i > 0) out += ';';
        out += warnings[i];
    }
    return out;
}

std::string result_csv_row(const VaRResult& r) {
    std::string row = detail::format_double(r.epsilon);
    row += ',';
    row += measure_name(r.measure);
    row += ',';
    row += detail::format_double(r.p_epsilon);
    row += ',';
    row += detail::format_double(r.mean);
    row += ',';
    row += detail::format_double(r.variance > 0.0 ? std::sqrt(r.variance) : 0.0);
    row += ',';
    row += joined(r.warnings);
    row += '\n';
    return row;
}

constexpr const char* kResultCsvHeader = "epsilon,measure,p_epsilon,mean,sigma,warnings\n";

}  // namespace

std::string to_json(const MomentSet& m) { return moments_json(m).dump(2); }

std::string to_csv(const FrequencyDistribution& dist) {
    std::string out = "level,count,mass\n";
    for (std::size_t i = 0; i < dist.atoms.size(); ++i) {
        out += detail::format_double(dist.atoms[i].level);
        out += ',';
        out += std::to_string(dist.atoms[i].count);
        out += ',';
        out += detail::format_double(dist.mass(i));
        out += '\n';
    }
    return out;
}

std::string to_csv(const DensityGrid& grid) {
    std::string out = "price,density,cdf\n";
    for (std::size_t j = 0; j < grid.prices.size(); ++j) {
        out += detail::format_double(grid.prices[j]);
        out += ',';
        out += detail::format_double(grid.density[j]);
        out += ',';
        out += detail::format_double(grid.cdf[j]);
        out += '\n';
    }
    return out;
}

std::string diagnostics_json(const DensityGrid& grid) {
    return json{{"integral_of_density", grid.integral_of_density},
                {"min_density", grid.min_density},
                {"warning", grid.warning}}
        .dump(2);
}

std::string results_to_json(const std::vector<VaRResult>& results) {
    json arr = json::array();
    for (const auto& r : results) arr.push_back(result_json(r));
    return arr.dump(2);
}

std::string results_to_csv(const std::vector<VaRResult>& results) {
    std::string out = kResultCsvHeader;
    for (const auto& r : results) out += result_csv_row(r);
    return out;
}

std::string to_json(const ComparisonReport& report) {
    json divergence = json::array();
    for (const auto& row : report.divergence) {
        json d{{"epsilon", row.epsilon}};
        if (row.value) {
            d["divergence"] = *row.value;
        } else {
            d["divergence"] = nullptr;
        }
        divergence.push_back(d);
    }
    json results = json::array();
    for (const auto& r : report.results) results.push_back(result_json(r));
    json j{{"window", {{"center", report.window.center}, {"delta", report.window.width}}},
           {"moments", moments_json(report.moments)},
           {"results", results},
           {"divergence", divergence},
           {"warnings", report.warnings}};
    return j.dump(2);
}

std::string to_csv(const ComparisonReport& report) {
    std::string out = kResultCsvHeader;
    for (const auto& r : report.results) out += result_csv_row(r);
    return out;
}

}  // namespace mbvar
