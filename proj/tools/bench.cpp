#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "divopt/mc.hpp"
#include "divopt/scenario.hpp"

using namespace divopt;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t paths = 1'000'000;
    if (argc > 1) paths = static_cast<std::size_t>(std::stoull(argv[1]));

    const MarketParams market{100.0, 100.0, 0.06, 0.30, 11.0};
    const DividendSchedule schedule({{6.5, 70.0}});
    const McConfig cfg{paths, 1, true};

    std::printf("threads available: %d\n\n", threads());

    std::printf("Monte Carlo put, %zu paths\n", paths);
    auto t0 = std::chrono::steady_clock::now();
    const McResult serial = mc_price_serial(OptionKind::Put, market, schedule,
                                            DividendPolicy::Liquidator, cfg);
    const double t_serial = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    const McResult parallel = mc_price(OptionKind::Put, market, schedule,
                                       DividendPolicy::Liquidator, cfg);
    const double t_parallel = seconds_since(t0);
    const bool identical =
        serial.price == parallel.price && serial.std_error == parallel.std_error;
    std::printf("  serial   : %.6f (se %.6f) in %.3f s\n", serial.price,
                serial.std_error, t_serial);
    std::printf("  parallel : %.6f (se %.6f) in %.3f s\n", parallel.price,
                parallel.std_error, t_parallel);
    std::printf("  bitwise identical: %s, speedup %.2fx\n\n", identical ? "yes" : "NO",
                t_serial / t_parallel);

    std::printf("Comparison sweep (eleven maturities, finite-difference benchmark)\n");
    const Scenario sweep = builtin_scenario("table2");
#ifdef _OPENMP
    const int max_threads = omp_get_max_threads();
    omp_set_num_threads(1);
#endif
    t0 = std::chrono::steady_clock::now();
    const auto rows_serial = run_scenario(sweep);
    const double t_sweep_serial = seconds_since(t0);
#ifdef _OPENMP
    omp_set_num_threads(max_threads);
#endif
    t0 = std::chrono::steady_clock::now();
    const auto rows_parallel = run_scenario(sweep);
    const double t_sweep_parallel = seconds_since(t0);
    bool rows_equal = rows_serial.size() == rows_parallel.size();
    for (std::size_t i = 0; rows_equal && i < rows_serial.size(); ++i)
        rows_equal = rows_serial[i].benchmark == rows_parallel[i].benchmark &&
                     rows_serial[i].prices == rows_parallel[i].prices;
    std::printf("  one thread  : %.3f s\n", t_sweep_serial);
    std::printf("  all threads : %.3f s\n", t_sweep_parallel);
    std::printf("  identical rows: %s, speedup %.2fx\n", rows_equal ? "yes" : "NO",
                t_sweep_serial / t_sweep_parallel);

    return identical && rows_equal ? 0 : 1;
}
