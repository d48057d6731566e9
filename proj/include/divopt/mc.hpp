#pragma once

#include <cstdint>

#include "divopt/core.hpp"

namespace divopt {

struct McConfig {
    std::size_t paths = 1'000'000;  // total simulated paths
    std::uint64_t seed = 1;
    bool antithetic = true;  // paths must be even; pairs share |Z|
};

struct McResult {
    double price = 0.0;
    double std_error = 0.0;
};

// Exact lognormal stepping between dividend dates, antithetic by default.
// Each path (pair) draws from its own seed-and-index keyed stream, so results
// are independent of thread count and batch size. Parallelised with OpenMP
// when available.
McResult mc_price(OptionKind kind, const MarketParams& m, const DividendSchedule& sched,
                  DividendPolicy policy, const McConfig& cfg = {});

// Single-threaded reference producing bit-identical results to mc_price.
McResult mc_price_serial(OptionKind kind, const MarketParams& m,
                         const DividendSchedule& sched, DividendPolicy policy,
                         const McConfig& cfg = {});

}  // namespace divopt
