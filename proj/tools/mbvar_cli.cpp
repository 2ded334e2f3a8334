// mbvar: trade-tape VaR engine comparing the frequency-based and the
// market-based (value/volume moment) price probability measures.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mbvar/charfn.hpp"
#include "mbvar/detail/format.hpp"
#include "mbvar/errors.hpp"
#include "mbvar/moments.hpp"
#include "mbvar/trade_tape.hpp"
#include "mbvar/var_engine.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitNumericalError = 3;

bool verbose() {
    const char* v = std::getenv("MBVAR_LOG");
    return v != nullptr && std::string(v) != "" && std::string(v) != "0";
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw mbvar::InvalidSpec("cannot open output file '" + path + "'");
    out << content;
}

struct CommonOpts {
    std::string input;
    std::string output;
    double center = 0.0;
    double delta = 0.0;
    std::vector<double> epsilons;
    std::size_t n_max = 3;
    std::string format = "json";
};

void add_window_opts(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--center", o.center, "window center t")->required();
    cmd->add_option("--delta", o.delta, "window width (seconds)")->required();
}

std::vector<double> epsilons_or_default(const CommonOpts& o) {
    if (o.epsilons.empty()) return {0.01, 0.03, 0.05};
    return o.epsilons;
}

mbvar::TradeSlice load_slice(const mbvar::TradeTape& tape, const CommonOpts& o) {
    return mbvar::select_window(tape, mbvar::Window{o.center, o.delta});
}

int run_moments(const CommonOpts& o) {
    const auto tape = mbvar::load_tape(o.input);
    const auto slice = load_slice(tape, o);
    const auto m = mbvar::compute_moments(slice, o.n_max);
    write_output(o.output, mbvar::to_json(m) + "\n");
    return kExitOk;
}

mbvar::VaRResult single_var(const mbvar::TradeSlice& slice, mbvar::Measure measure,
                            double eps, std::size_t n_max) {
    using namespace mbvar;
    const MomentSet m = compute_moments(slice, std::max<std::size_t>(n_max, 2));
    VaRResult r{measure, eps, 0.0, m.trade_count(), 0.0, 0.0,
                std::nullopt, std::nullopt, {}};
    switch (measure) {
        case Measure::FrequencyEmpirical: {
            const auto dist = price_distribution(slice);
            r.p_epsilon = empirical_quantile(dist, eps);
            r.mean = m.frequency_moment(1);
            r.variance = volatility(m, MeasureKind::Frequency);
            std::int64_t at_or_below = 0;
            for (const auto& atom : dist.atoms) {
                if (atom.level <= r.p_epsilon) at_or_below += atom.count;
            }
            r.cdf_at_quantile =
                static_cast<double>(at_or_below) / static_cast<double>(dist.total);
            break;
        }
        case Measure::FrequencyGaussian:
        case Measure::MarketGaussian: {
            const auto kind = measure == Measure::FrequencyGaussian
                                  ? MeasureKind::Frequency
                                  : MeasureKind::Market;
            const auto stats = central_stats(m, kind);
            r.mean = stats.mean;
            r.variance = stats.variance;
            if (!(stats.variance > 0.0)) {
                r.p_epsilon = stats.mean;
                r.warnings.push_back("degenerate");
            } else {
                r.p_epsilon = gaussian_quantile(stats, eps);
                r.cdf_at_quantile = eps;
            }
            break;
        }
        case Measure::MarketOrder3: {
            if (n_max < 3) throw InvalidSpec("market-order3 needs --n-max >= 3");
            const auto m3 = compute_moments(slice, n_max);
            const auto stats = central_stats(m3, MeasureKind::Market);
            r.mean = stats.mean;
            r.variance = stats.variance;
            r.a3 = stats.third;
            const auto f = fit_charfn(stats, 3);
            r.p_epsilon = order3_quantile(f, eps, &r.warnings);
            r.cdf_at_quantile = invert_cdf(f, r.p_epsilon);
            break;
        }
    }
    return r;
}

int run_var(const CommonOpts& o, const std::string& measure_name_arg) {
    const auto measure = mbvar::measure_from_name(measure_name_arg);
    if (!measure) {
        throw mbvar::InvalidSpec("unknown measure '" + measure_name_arg + "'");
    }
    const auto tape = mbvar::load_tape(o.input);
    const auto slice = load_slice(tape, o);
    std::vector<mbvar::VaRResult> results;
    for (double eps : epsilons_or_default(o)) {
        results.push_back(single_var(slice, *measure, eps, o.n_max));
    }
    write_output(o.output, o.format == "csv" ? mbvar::results_to_csv(results)
                                             : mbvar::results_to_json(results) + "\n");
    return kExitOk;
}

int run_compare(const CommonOpts& o) {
    const auto tape = mbvar::load_tape(o.input);
    const auto slice = load_slice(tape, o);
    const auto report = mbvar::compare(slice, mbvar::Window{o.center, o.delta},
                                       epsilons_or_default(o), o.n_max);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    write_output(o.output, o.format == "csv" ? mbvar::to_csv(report)
                                             : mbvar::to_json(report) + "\n");
    return kExitOk;
}

int run_density(const CommonOpts& o, const std::string& kind_name, int order,
                double grid_min, double grid_max, std::size_t grid_points) {
    using namespace mbvar;
    const auto tape = load_tape(o.input);
    const auto slice = load_slice(tape, o);
    const auto kind =
        kind_name == "market" ? MeasureKind::Market : MeasureKind::Frequency;
    const auto m =
        compute_moments(slice, std::max(o.n_max, static_cast<std::size_t>(order)));
    const auto f = fit_charfn(central_stats(m, kind), order);

    GridSpec grid = default_grid(f);
    if (grid_points > 0) grid.points = grid_points;
    if (grid_min < grid_max) {
        grid.min = grid_min;
        grid.max = grid_max;
    }
    const auto density = tabulate_density(f, grid);
    if (density.warning) {
        std::cerr << "warning: pseudo-density dips below -1e-6 (min "
                  << detail::format_double(density.min_density) << ")\n";
    }
    write_output(o.output, to_csv(density));
    if (o.output.empty() || o.output == "-") {
        std::cerr << diagnostics_json(density) << "\n";
    } else {
        write_output(o.output + ".diag.json", diagnostics_json(density) + "\n");
    }
    return kExitOk;
}

int run_simulate(const CommonOpts& o, const mbvar::SynthSpec& spec, std::uint64_t seed) {
    const auto tape = mbvar::synthesize_tape(spec, seed);
    write_output(o.output, mbvar::serialize_tape(tape));
    return kExitOk;
}

int run_sweep(const CommonOpts& o, double start, double end, double stride) {
    using namespace mbvar;
    if (!(stride > 0.0) || end < start) {
        throw InvalidSpec("sweep needs start <= end and stride > 0");
    }
    const auto tape = load_tape(o.input);
    const auto epsilons = epsilons_or_default(o);

    std::vector<double> centers;
    for (double c = start; c <= end + 1e-12 * std::max(1.0, std::abs(end)); c += stride) {
        centers.push_back(c);
    }

    // Windows are independent; compute them concurrently and emit in
    // center order so output bytes do not depend on scheduling.
    std::vector<std::future<std::optional<ComparisonReport>>> futures;
    futures.reserve(centers.size());
    for (double c : centers) {
        futures.push_back(std::async(std::launch::async, [&, c]() -> std::optional<ComparisonReport> {
            try {
                const auto slice = select_window(tape, Window{c, o.delta});
                return compare(slice, Window{c, o.delta}, epsilons, o.n_max);
            } catch (const EmptyWindow&) {
                return std::nullopt;
            }
        }));
    }

    std::string csv = "center,epsilon,measure,p_epsilon,mean,sigma,warnings\n";
    std::string json_out = "[";
    bool first = true;
    bool any = false;
    for (std::size_t i = 0; i < futures.size(); ++i) {
        auto report = futures[i].get();
        if (!report) {
            if (verbose()) {
                std::cerr << "note: empty window at center "
                          << detail::format_double(centers[i]) << ", skipped\n";
            }
            continue;
        }
        any = true;
        if (o.format == "csv") {
            const std::string rows = to_csv(*report);
            const std::string prefix = detail::format_double(centers[i]) + ",";
            std::size_t pos = rows.find('\n') + 1;  // skip header
            while (pos < rows.size()) {
                std::size_t next = rows.find('\n', pos);
                csv += prefix + rows.substr(pos, next - pos) + "\n";
                pos = next + 1;
            }
        } else {
            if (!first) json_out += ",";
            json_out += "\n" + to_json(*report);
            first = false;
        }
        for (const auto& w : report->warnings) {
            std::cerr << "warning: center " << detail::format_double(centers[i])
                      << ": " << w << "\n";
        }
    }
    json_out += "\n]";
    if (!any) throw EmptyWindow("no sweep window contained any trade");
    write_output(o.output, o.format == "csv" ? csv : json_out + "\n");
    return kExitOk;
}

int classify_error(const std::exception& e) {
    if (dynamic_cast<const mbvar::NegativeVariance*>(&e) != nullptr ||
        dynamic_cast<const mbvar::NonPositiveVariance*>(&e) != nullptr ||
        dynamic_cast<const mbvar::QuadratureFailure*>(&e) != nullptr ||
        dynamic_cast<const mbvar::OrderOverflow*>(&e) != nullptr ||
        dynamic_cast<const mbvar::BracketFailure*>(&e) != nullptr ||
        dynamic_cast<const mbvar::PointMassUnsupported*>(&e) != nullptr) {
        return kExitNumericalError;
    }
    return kExitInputError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trade-tape VaR engine: frequency-based vs market-based price measures"};
    app.require_subcommand(1);

    CommonOpts o;

    auto add_common = [&](CLI::App* cmd, bool needs_input) {
        if (needs_input) {
            cmd->add_option("--input", o.input, "input tape CSV")->required();
        }
        cmd->add_option("--output", o.output, "output path (default stdout)");
        cmd->add_option("--eps", o.epsilons, "tail probabilities (default 0.01 0.03 0.05)");
        cmd->add_option("--n-max", o.n_max, "highest moment order (default 3)");
        cmd->add_option("--format", o.format, "json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    auto* cmd_moments = app.add_subcommand("moments", "emit the per-window moment table");
    add_common(cmd_moments, true);
    add_window_opts(cmd_moments, o);

    std::string measure_arg = "frequency-empirical";
    auto* cmd_var = app.add_subcommand("var", "quantile p(eps) under one measure");
    add_common(cmd_var, true);
    add_window_opts(cmd_var, o);
    cmd_var->add_option("--measure", measure_arg,
                        "frequency-empirical | frequency-gaussian | market-gaussian | "
                        "market-order3");

    auto* cmd_compare = app.add_subcommand("compare", "frequency vs market VaR report");
    add_common(cmd_compare, true);
    add_window_opts(cmd_compare, o);

    std::string density_kind = "market";
    int density_order = 2;
    double grid_min = 0.0, grid_max = 0.0;
    std::size_t grid_points = 0;
    auto* cmd_density = app.add_subcommand("density", "tabulate the inverted density grid");
    add_common(cmd_density, true);
    add_window_opts(cmd_density, o);
    cmd_density->add_option("--measure", density_kind, "frequency | market")
        ->check(CLI::IsMember({"frequency", "market"}));
    cmd_density->add_option("--order", density_order, "approximation order (2 or 3)")
        ->check(CLI::Range(2, 3));
    cmd_density->add_option("--grid-min", grid_min, "grid lower edge");
    cmd_density->add_option("--grid-max", grid_max, "grid upper edge");
    cmd_density->add_option("--grid-points", grid_points, "grid size (default 4096)");

    mbvar::SynthSpec spec;
    std::uint64_t seed = 0;
    double const_price = 0.0, const_volume = 0.0;
    std::vector<std::int64_t> int_volume;
    auto* cmd_simulate = app.add_subcommand("simulate", "write a synthetic tape");
    add_common(cmd_simulate, false);
    cmd_simulate->add_option("--count", spec.count, "number of trades")->required();
    cmd_simulate->add_option("--seed", seed, "RNG seed (default 0)");
    cmd_simulate->add_option("--const-price", const_price, "constant price process");
    cmd_simulate->add_option("--price-start", spec.price_start, "lognormal walk start");
    cmd_simulate->add_option("--price-drift", spec.price_drift, "per-step log drift");
    cmd_simulate->add_option("--price-vol", spec.price_vol, "per-step log stddev");
    cmd_simulate->add_option("--const-volume", const_volume, "constant volume process");
    cmd_simulate->add_option("--volume-log-mean", spec.volume_log_mean,
                             "lognormal volume log-mean");
    cmd_simulate->add_option("--volume-log-sigma", spec.volume_log_sigma,
                             "lognormal volume log-stddev");
    cmd_simulate
        ->add_option("--int-volume", int_volume, "uniform integer volume range: min max")
        ->expected(2);
    cmd_simulate->add_option("--time-step", spec.time_step, "seconds between trades");

    double sweep_start = 0.0, sweep_end = 0.0, sweep_stride = 0.0;
    auto* cmd_sweep = app.add_subcommand("sweep", "compare over a range of window centers");
    add_common(cmd_sweep, true);
    cmd_sweep->add_option("--start", sweep_start, "first window center")->required();
    cmd_sweep->add_option("--end", sweep_end, "last window center")->required();
    cmd_sweep->add_option("--stride", sweep_stride, "center step")->required();
    cmd_sweep->add_option("--delta", o.delta, "window width (seconds)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInputError;
    }

    try {
        if (cmd_moments->parsed()) return run_moments(o);
        if (cmd_var->parsed()) return run_var(o, measure_arg);
        if (cmd_compare->parsed()) return run_compare(o);
        if (cmd_density->parsed()) {
            return run_density(o, density_kind, density_order, grid_min, grid_max,
                               grid_points);
        }
        if (cmd_simulate->parsed()) {
            if (const_price > 0.0) {
                spec.price_process = mbvar::PriceProcess::Constant;
                spec.price_start = const_price;
            }
            if (const_volume > 0.0) {
                spec.volume_process = mbvar::VolumeProcess::Constant;
                spec.volume_const = const_volume;
            } else if (!int_volume.empty()) {
                spec.volume_process = mbvar::VolumeProcess::UniformInt;
                spec.volume_int_min = int_volume[0];
                spec.volume_int_max = int_volume[1];
            }
            return run_simulate(o, spec, seed);
        }
        if (cmd_sweep->parsed()) return run_sweep(o, sweep_start, sweep_end, sweep_stride);
    } catch (const mbvar::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify_error(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
