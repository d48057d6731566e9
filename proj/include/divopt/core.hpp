#pragma once

#include <cstddef>
#include <vector>

namespace divopt {

enum class OptionKind { Call, Put };
enum class DividendPolicy { Liquidator, Survivor };

struct Dividend {
    double time = 0.0;    // years from valuation
    double amount = 0.0;  // cash amount
};

// Ordered cash dividend schedule. Times strictly increasing and positive,
// amounts non-negative. Constructor throws std::invalid_argument otherwise.
class DividendSchedule {
public:
    DividendSchedule() = default;
    explicit DividendSchedule(std::vector<Dividend> entries);

    const std::vector<Dividend>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

    // Entries with a < t <= b (half-open on the left, closed on the right).
    std::vector<Dividend> in_window(double a, double b) const;

private:
    std::vector<Dividend> entries_;
};

struct MarketParams {
    double spot = 0.0;    // S0 > 0
    double strike = 0.0;  // K >= 0
    double rate = 0.0;    // continuously compounded, any real
    double vol = 0.0;     // sigma > 0
    double term = 0.0;    // T > 0

    // Throws std::invalid_argument on violated bounds.
    void validate() const;
};

// Sum of d_i * exp(-rate * (t_i - valuation_time)) over dividends with
// window_a < t_i <= window_b. The 4-argument overload values at window_a.
double pv_dividends(const DividendSchedule& schedule, double rate,
                    double window_a, double window_b, double valuation_time);
double pv_dividends(const DividendSchedule& schedule, double rate,
                    double window_a, double window_b);

struct DividendSplit {
    double d_spot = 0.0;    // sum of ((T - t_i)/T) d_i e^{-r t_i}
    double d_strike = 0.0;  // sum of (t_i/T) d_i e^{-r t_i}
};

// Time-weighted split of the dividend PV over (0, T].
DividendSplit dividend_split(const DividendSchedule& schedule, double rate, double term);

}  // namespace divopt
