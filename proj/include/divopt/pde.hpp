#pragma once

#include <vector>

#include "divopt/core.hpp"

namespace divopt {

struct GridSpec {
    double s_min = 0.0;
    double s_max = 500.0;
    double ds = 1.25;
    double dt = 0.05;

    // Throws std::invalid_argument on a degenerate grid.
    void validate() const;
};

// Lower-boundary closure for puts: how the deep-ITM value accounts for the
// dividends still outstanding.
enum class BoundaryVariant { SpotBC, StrikeBC, HybridBC };

// Value pinned at the lower grid edge at time t (zero for calls).
double lower_boundary_value(BoundaryVariant variant, OptionKind kind,
                            const MarketParams& m, const DividendSchedule& sched,
                            double t, double s_edge);
// Value pinned at the upper grid edge at time t (zero for puts).
double upper_boundary_value(OptionKind kind, const MarketParams& m,
                            const DividendSchedule& sched, double t, double s_edge);

// Resample values after a dividend drop. Liquidator floors the post-dividend
// level at s_min; Survivor leaves levels below the dividend untouched.
std::vector<double> apply_dividend_jump(const std::vector<double>& values,
                                        const std::vector<double>& s_axis,
                                        double amount, DividendPolicy policy,
                                        double s_min);

struct CnSolution {
    std::vector<double> s_axis;
    std::vector<double> values;  // time-zero values on s_axis

    // Linear interpolation, clamped to the grid edges.
    double price_at(double spot) const;
};

// Crank-Nicolson solve marching expiry -> now, with dividend jumps applied at
// their dates and the first backward interval sub-stepped to settle the payoff
// kink. Throws std::invalid_argument when spot lies outside the grid.
CnSolution cn_solve_european(OptionKind kind, const MarketParams& m,
                             const DividendSchedule& sched, DividendPolicy policy,
                             BoundaryVariant variant, const GridSpec& grid = {});

double cn_price_european(OptionKind kind, const MarketParams& m,
                         const DividendSchedule& sched, DividendPolicy policy,
                         BoundaryVariant variant = BoundaryVariant::SpotBC,
                         const GridSpec& grid = {});

// Projected SOR American put on fixed boundaries (deep-ITM edge at intrinsic,
// upper edge at zero), same stepping and dividend handling as the CN solver.
double psor_price_american_put(const MarketParams& m, const DividendSchedule& sched,
                               DividendPolicy policy, const GridSpec& grid = {});

}  // namespace divopt
