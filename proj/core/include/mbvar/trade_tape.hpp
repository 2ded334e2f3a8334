#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mbvar {

// One market execution. Price is always derived from value/volume; an
// explicit price column in the input is only consistency-checked.
struct Trade {
    double t;       // seconds, arbitrary epoch
    double value;   // C(t_i), currency units, > 0
    double volume;  // U(t_i), asset units, > 0

    double price() const { return value / volume; }
};

class TradeTape {
public:
    TradeTape(std::vector<Trade> trades, std::string source);

    const std::vector<Trade>& trades() const { return trades_; }
    const std::string& source() const { return source_; }
    std::size_t size() const { return trades_.size(); }

private:
    std::vector<Trade> trades_;  // nondecreasing in t
    std::string source_;
};

struct Window {
    double center;  // t
    double width;   // delta, > 0
};

// Contiguous view into a tape; trades satisfy
// center - width/2 <= t_i <= center + width/2, both endpoints inclusive.
class TradeSlice {
public:
    explicit TradeSlice(std::span<const Trade> trades) : trades_(trades) {}

    std::span<const Trade> trades() const { return trades_; }
    std::size_t count() const { return trades_.size(); }
    bool empty() const { return trades_.empty(); }

private:
    std::span<const Trade> trades_;
};

// CSV parsing/serialization. Header `t,value,volume[,price]`; out-of-order
// rows are stably re-sorted by timestamp.
TradeTape parse_tape(std::istream& in, std::string source = "stream");
TradeTape parse_tape_string(const std::string& text, std::string source = "string");
TradeTape load_tape(const std::string& path);

std::string serialize_tape(const TradeTape& tape);

TradeSlice select_window(const TradeTape& tape, const Window& window);

// ---- synthetic tapes ----

enum class PriceProcess { Constant, LognormalWalk };
enum class VolumeProcess { Constant, Lognormal, UniformInt };

struct SynthSpec {
    std::size_t count = 0;

    PriceProcess price_process = PriceProcess::LognormalWalk;
    double price_start = 100.0;  // Constant: the price; walk: p_0
    double price_drift = 0.0;    // per-step drift of log p
    double price_vol = 0.01;     // per-step stddev of log p

    VolumeProcess volume_process = VolumeProcess::Lognormal;
    double volume_const = 1.0;
    double volume_log_mean = 0.0;   // Lognormal
    double volume_log_sigma = 0.5;  // Lognormal
    std::int64_t volume_int_min = 1;  // UniformInt
    std::int64_t volume_int_max = 100;

    double time_step = 1.0;  // t_i = i * time_step
};

// Deterministic for a fixed seed; every emitted trade has value = price * volume.
TradeTape synthesize_tape(const SynthSpec& spec, std::uint64_t seed);

}  // namespace mbvar
