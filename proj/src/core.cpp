#include "divopt/core.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace divopt {

DividendSchedule::DividendSchedule(std::vector<Dividend> entries)
    : entries_(std::move(entries)) {
    double prev = 0.0;
    for (const auto& d : entries_) {
        if (!(d.time > 0.0))
            throw std::invalid_argument("dividend times must be positive");
        if (!(d.time > prev))
            throw std::invalid_argument("dividend times must be strictly increasing");
        if (d.amount < 0.0)
            throw std::invalid_argument("dividend amounts must be non-negative");
        prev = d.time;
    }
}

std::vector<Dividend> DividendSchedule::in_window(double a, double b) const {
    std::vector<Dividend> out;
    for (const auto& d : entries_)
        if (d.time > a && d.time <= b) out.push_back(d);
    return out;
}

void MarketParams::validate() const {
    if (!(spot > 0.0)) throw std::invalid_argument("spot must be positive");
    if (strike < 0.0) throw std::invalid_argument("strike must be non-negative");
    if (!(vol > 0.0)) throw std::invalid_argument("vol must be positive");
    if (!(term > 0.0)) throw std::invalid_argument("term must be positive");
}

double pv_dividends(const DividendSchedule& schedule, double rate,
                    double window_a, double window_b, double valuation_time) {
    double sum = 0.0;
    for (const auto& d : schedule.in_window(window_a, window_b))
        sum += d.amount * std::exp(-rate * (d.time - valuation_time));
    return sum;
}

double pv_dividends(const DividendSchedule& schedule, double rate,
                    double window_a, double window_b) {
    return pv_dividends(schedule, rate, window_a, window_b, window_a);
}

DividendSplit dividend_split(const DividendSchedule& schedule, double rate, double term) {
    if (!(term > 0.0)) throw std::invalid_argument("term must be positive");
    DividendSplit s;
    for (const auto& d : schedule.in_window(0.0, term)) {
        const double pv = d.amount * std::exp(-rate * d.time);
        s.d_spot += (term - d.time) / term * pv;
        s.d_strike += d.time / term * pv;
    }
    return s;
}

}  // namespace divopt
