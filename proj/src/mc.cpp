#include "divopt/mc.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "divopt/normal.hpp"

namespace divopt {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t splitmix_next(std::uint64_t& state) {
    state += kGolden;
    return mix64(state);
}

// Stream origin for one path index: a full avalanche of seed and index keeps
// the per-path streams unrelated to each other and to the step counter.
std::uint64_t stream_state(std::uint64_t seed, std::uint64_t index) {
    return mix64(mix64(seed) ^ ((index + 1) * kGolden));
}

double uniform_open(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

struct Step {
    double growth = 0.0;   // (r - sigma^2/2) h
    double vol_sqh = 0.0;  // sigma sqrt(h)
    bool diffuse = false;  // false for a zero-length interval
    double amount = 0.0;   // dividend paid at the step's end (0 for none)
};

struct PayoffPlan {
    std::vector<Step> steps;
    double discount = 0.0;
};

PayoffPlan build_plan(const MarketParams& m, const DividendSchedule& sched) {
    PayoffPlan plan;
    auto dv = sched.in_window(0.0, m.term);
    dv.push_back({m.term, 0.0});  // terminal marker
    double t_prev = 0.0;
    for (const auto& d : dv) {
        Step s;
        const double h = d.time - t_prev;
        if (h > 1e-14) {
            s.growth = (m.rate - m.vol * m.vol / 2.0) * h;
            s.vol_sqh = m.vol * std::sqrt(h);
            s.diffuse = true;
        }
        s.amount = d.amount;
        plan.steps.push_back(s);
        t_prev = d.time;
    }
    plan.discount = std::exp(-m.rate * m.term);
    return plan;
}

double payoff(OptionKind kind, double s, double k) {
    return (kind == OptionKind::Call) ? std::max(s - k, 0.0) : std::max(k - s, 0.0);
}

// Discounted payoff of path `index` (mean of both antithetic legs when paired).
double path_value(OptionKind kind, const MarketParams& m, DividendPolicy policy,
                  const PayoffPlan& plan, std::uint64_t seed, std::uint64_t index,
                  bool antithetic) {
    std::uint64_t state = stream_state(seed, index);
    double s = m.spot;
    double sa = m.spot;
    for (const auto& step : plan.steps) {
        if (step.diffuse) {
            const double z = inv_norm_cdf(uniform_open(splitmix_next(state)));
            s *= std::exp(step.growth + step.vol_sqh * z);
            if (antithetic) sa *= std::exp(step.growth - step.vol_sqh * z);
        }
        if (step.amount > 0.0) {
            if (policy == DividendPolicy::Liquidator) {
                s = std::max(s - step.amount, 0.0);
                if (antithetic) sa = std::max(sa - step.amount, 0.0);
            } else {
                if (s >= step.amount) s -= step.amount;
                if (antithetic && sa >= step.amount) sa -= step.amount;
            }
        }
    }
    double value = payoff(kind, s, m.strike);
    if (antithetic) value = 0.5 * (value + payoff(kind, sa, m.strike));
    return value * plan.discount;
}

McResult run(OptionKind kind, const MarketParams& m, const DividendSchedule& sched,
             DividendPolicy policy, const McConfig& cfg, bool parallel) {
    m.validate();
    if (cfg.paths == 0) throw std::invalid_argument("paths must be positive");
    if (cfg.antithetic && cfg.paths % 2 != 0)
        throw std::invalid_argument("paths must be even with antithetic sampling");
    const std::size_t n = cfg.antithetic ? cfg.paths / 2 : cfg.paths;
    const PayoffPlan plan = build_plan(m, sched);

    std::vector<double> values(n);
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            values[static_cast<std::size_t>(i)] =
                path_value(kind, m, policy, plan, cfg.seed,
                           static_cast<std::uint64_t>(i), cfg.antithetic);
    } else {
        for (std::size_t i = 0; i < n; ++i)
            values[i] = path_value(kind, m, policy, plan, cfg.seed, i, cfg.antithetic);
    }

    // Fixed-order reduction keeps the estimate independent of thread count.
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double var = (n > 1) ? ss / static_cast<double>(n - 1) : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

}  // namespace

McResult mc_price(OptionKind kind, const MarketParams& m, const DividendSchedule& sched,
                  DividendPolicy policy, const McConfig& cfg) {
    return run(kind, m, sched, policy, cfg, true);
}

McResult mc_price_serial(OptionKind kind, const MarketParams& m,
                         const DividendSchedule& sched, DividendPolicy policy,
                         const McConfig& cfg) {
    return run(kind, m, sched, policy, cfg, false);
}

}  // namespace divopt
