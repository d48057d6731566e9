#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "divopt/analytic.hpp"
#include "divopt/core.hpp"
#include "divopt/mc.hpp"
#include "divopt/pde.hpp"

namespace divopt {

// One batch of comparisons: a family of options priced at several maturities
// by the finite-difference benchmark and a set of closed-form methods.
struct Scenario {
    std::string name = "custom";
    OptionKind kind = OptionKind::Call;
    DividendPolicy policy = DividendPolicy::Liquidator;
    double spot = 100.0;
    double strike = 100.0;
    double rate = 0.06;
    double vol = 0.30;
    DividendSchedule schedule;
    std::vector<double> maturities;
    std::vector<PricingMethod> methods;
    GridSpec grid;
    McConfig mc;

    MarketParams market_at(double term) const;
    // Throws std::invalid_argument on empty or non-increasing maturities.
    void validate() const;
};

// Built-in families: "table1" (single large dividend, calls), "table2"
// (eleven yearly dividends, calls), "table3" (same family, puts with the
// parity-adjusted methods), "fig1" (one mid-life dividend, put, benchmark
// series only). Throws std::invalid_argument for any other name.
Scenario builtin_scenario(std::string_view name);

// Flat key-value scenario file; `dividend = <time> <amount>` repeatable.
// Throws std::invalid_argument with the offending line on any parse problem.
Scenario parse_scenario_file(const std::string& path);

struct ComparisonRow {
    double maturity = 0.0;
    double benchmark = 0.0;            // CN price
    std::vector<double> prices;        // one per scenario method
    std::vector<double> rel_diffs;     // 100 * (method - CN) / CN
};

// Rows ordered by maturity; maturities evaluated concurrently when OpenMP is
// available. Errors carry the (maturity, method) they occurred at.
std::vector<ComparisonRow> run_scenario(const Scenario& sc);

enum class PrecisionMode { Full, Table };

// Header `T,CN,<token>,<token>_reldiff,...`; table mode rounds prices to two
// decimals and rel-diffs to one (matching the published layout), full mode
// emits nine significant digits.
std::string emit_csv(const std::vector<PricingMethod>& methods,
                     const std::vector<ComparisonRow>& rows, PrecisionMode mode);

struct Fig1Series {
    std::vector<double> maturities;
    std::vector<double> spot_bc;
    std::vector<double> strike_bc;
    std::vector<double> hybrid_bc;
    std::vector<double> american;
};

// Put prices of the fig1 family under the three lower boundary closures plus
// the American solver, T = 1..11. Verifies that the closures coincide before
// the dividend date and that the spot closure never exceeds the American
// price; throws std::runtime_error otherwise.
Fig1Series fig1_series(const GridSpec& grid = {});

std::string emit_fig1_csv(const Fig1Series& series, PrecisionMode mode);

}  // namespace divopt
