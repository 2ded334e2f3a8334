#include "mbvar/trade_tape.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "mbvar/detail/format.hpp"
#include "mbvar/errors.hpp"

namespace mbvar {

namespace {

constexpr double kPriceTolerance = 1e-9;  // relative, |p*U - C| / C

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_field(const std::string& raw, std::size_t row, const std::string& column) {
    const std::string s = trim(raw);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw MalformedRecord("row " + std::to_string(row) + ", column '" + column +
                              "': cannot parse '" + s + "'");
    }
    return v;
}

}  // namespace

TradeTape::TradeTape(std::vector<Trade> trades, std::string source)
    : trades_(std::move(trades)), source_(std::move(source)) {
    std::stable_sort(trades_.begin(), trades_.end(),
                     [](const Trade& a, const Trade& b) { return a.t < b.t; });
}

TradeTape parse_tape(std::istream& in, std::string source) {
    std::string line;
    if (!std::getline(in, line)) throw EmptyTape("no header row");
    auto header = split_csv_line(line);
    for (auto& h : header) h = trim(h);
    const bool has_price = header.size() == 4 && header[3] == "price";
    if (!(header.size() == 3 || has_price) || header[0] != "t" ||
        header[1] != "value" || header[2] != "volume") {
        throw MalformedRecord("header must be 't,value,volume[,price]', got '" + line + "'");
    }

    std::vector<Trade> trades;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw MalformedRecord("row " + std::to_string(row) + ": expected " +
                                  std::to_string(header.size()) + " columns, got " +
                                  std::to_string(fields.size()));
        }
        Trade tr{};
        tr.t = parse_field(fields[0], row, "t");
        tr.value = parse_field(fields[1], row, "value");
        tr.volume = parse_field(fields[2], row, "volume");
        if (tr.volume <= 0.0) {
            throw NonPositiveVolume("row " + std::to_string(row) + ": volume " +
                                    detail::format_double(tr.volume));
        }
        if (tr.value <= 0.0) {
            throw NonPositiveValue("row " + std::to_string(row) + ": value " +
                                   detail::format_double(tr.value));
        }
        if (has_price) {
            const double p = parse_field(fields[3], row, "price");
            if (std::abs(p * tr.volume - tr.value) / tr.value > kPriceTolerance) {
                throw PriceInconsistent("row " + std::to_string(row) +
                                        ": price column violates value = price * volume");
            }
        }
        trades.push_back(tr);
    }
    if (trades.empty()) throw EmptyTape("tape contains no trades");
    return TradeTape(std::move(trades), std::move(source));
}

TradeTape parse_tape_string(const std::string& text, std::string source) {
    std::istringstream in(text);
    return parse_tape(in, std::move(source));
}

TradeTape load_tape(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedRecord("cannot open input file '" + path + "'");
    return parse_tape(in, path);
}

std::string serialize_tape(const TradeTape& tape) {
    std::string out = "t,value,volume\n";
    for (const Trade& tr : tape.trades()) {
        out += detail::format_double(tr.t);
        out += ',';
        out += detail::format_double(tr.value);
        out += ',';
        out += detail::format_double(tr.volume);
        out += '\n';
    }
    return out;
}

TradeSlice select_window(const TradeTape& tape, const Window& window) {
    if (!(window.width > 0.0)) throw InvalidSpec("window width must be > 0");
    const double lo = window.center - window.width / 2.0;
    const double hi = window.center + window.width / 2.0;
    const auto& trades = tape.trades();
    auto first = std::lower_bound(trades.begin(), trades.end(), lo,
                                  [](const Trade& tr, double v) { return tr.t < v; });
    auto last = std::upper_bound(trades.begin(), trades.end(), hi,
                                 [](double v, const Trade& tr) { return v < tr.t; });
    if (first >= last) {
        throw EmptyWindow("no trades in [" + detail::format_double(lo) + ", " +
                          detail::format_double(hi) + "]");
    }
    return TradeSlice(std::span<const Trade>(&*first, static_cast<std::size_t>(last - first)));
}

TradeTape synthesize_tape(const SynthSpec& spec, std::uint64_t seed) {
    if (spec.count < 1) throw InvalidSpec("count must be >= 1");
    if (spec.price_start <= 0.0) throw InvalidSpec("price_start must be > 0");
    if (spec.price_vol < 0.0) throw InvalidSpec("price_vol must be >= 0");
    if (spec.volume_process == VolumeProcess::Constant && spec.volume_const <= 0.0) {
        throw InvalidSpec("volume_const must be > 0");
    }
    if (spec.volume_process == VolumeProcess::Lognormal && spec.volume_log_sigma < 0.0) {
        throw InvalidSpec("volume_log_sigma must be >= 0");
    }
    if (spec.volume_process == VolumeProcess::UniformInt &&
        (spec.volume_int_min < 1 || spec.volume_int_max < spec.volume_int_min)) {
        throw InvalidSpec("integer volume range must satisfy 1 <= min <= max");
    }
    if (spec.time_step <= 0.0) throw InvalidSpec("time_step must be > 0");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_int_distribution<std::int64_t> uniform_int(spec.volume_int_min,
                                                            spec.volume_int_max);

    std::vector<Trade> trades;
    trades.reserve(spec.count);
    double log_price = std::log(spec.price_start);
    for (std::size_t i = 0; i < spec.count; ++i) {
        double price;
        switch (spec.price_process) {
            case PriceProcess::Constant:
                price = spec.price_start;
                break;
            case PriceProcess::LognormalWalk:
                if (i > 0) log_price += spec.price_drift + spec.price_vol * normal(rng);
                price = std::exp(log_price);
                break;
        }
        double volume;
        switch (spec.volume_process) {
            case VolumeProcess::Constant:
                volume = spec.volume_const;
                break;
            case VolumeProcess::Lognormal:
                volume = std::exp(spec.volume_log_mean + spec.volume_log_sigma * normal(rng));
                break;
            case VolumeProcess::UniformInt:
                volume = static_cast<double>(uniform_int(rng));
                break;
        }
        trades.push_back(Trade{static_cast<double>(i) * spec.time_step,
                               price * volume, volume});
    }
    return TradeTape(std::move(trades), "synthetic(seed=" + std::to_string(seed) + ")");
}

}  // namespace mbvar
