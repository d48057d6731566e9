#include "divopt/pde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace divopt {

namespace {

constexpr double kTimeTol = 1e-9;
constexpr int kStartupSubsteps = 8;
constexpr int kPsorMaxIter = 20000;
constexpr double kPsorOmega = 1.2;
constexpr double kPsorTolMult = 1e-8;

// Sum of dividends still outstanding at time t, discounted back to t.
// weight: 0 none, 1 strike-side t_i/T, 2 spot-side (T-t_i)/T.
double outstanding_sum(const DividendSchedule& sched, double rate, double term,
                       double t, int weight) {
    double tot = 0.0;
    for (const auto& d : sched.entries()) {
        if (d.time > term + 1e-12 || d.time < t - 1e-12) continue;
        double w = 1.0;
        if (weight == 1) w = d.time / term;
        else if (weight == 2) w = (term - d.time) / term;
        tot += w * d.amount * std::exp(-rate * (d.time - t));
    }
    return tot;
}

double linear_interp(const std::vector<double>& xs, const std::vector<double>& ys,
                     double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    const std::size_t lo = hi - 1;
    const double f = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return ys[lo] + f * (ys[hi] - ys[lo]);
}

// Backward time points expiry -> 0: uniform dt marks, dividend dates, and the
// first backward interval split into equal substeps.
std::vector<double> time_points(double term, double dt,
                                const std::vector<Dividend>& divs) {
    std::vector<double> pts{0.0, term};
    for (int m = 1; m * dt < term - 1e-12; ++m) pts.push_back(m * dt);
    for (const auto& d : divs)
        if (d.time > kTimeTol && d.time < term - kTimeTol) pts.push_back(d.time);
    std::sort(pts.begin(), pts.end());
    std::vector<double> kept;
    for (double p : pts)
        if (kept.empty() || p - kept.back() > kTimeTol) kept.push_back(p);
    kept.back() = term;
    if (kept.size() >= 2) {
        const double a = kept[kept.size() - 2];
        const double h = (term - a) / kStartupSubsteps;
        for (int j = 1; j < kStartupSubsteps; ++j) kept.push_back(a + j * h);
        std::sort(kept.begin(), kept.end());
    }
    std::reverse(kept.begin(), kept.end());
    return kept;
}

void thomas_solve(const std::vector<double>& dl, const std::vector<double>& dm,
                  const std::vector<double>& du, std::vector<double>& rhs) {
    const std::size_t n = rhs.size();
    std::vector<double> cp(n);
    cp[0] = du[0] / dm[0];
    rhs[0] /= dm[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double denom = dm[i] - dl[i] * cp[i - 1];
        cp[i] = du[i] / denom;
        rhs[i] = (rhs[i] - dl[i] * rhs[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= cp[i] * rhs[i + 1];
}

struct GridSetup {
    std::vector<double> s;          // node levels
    std::vector<double> a, b, c;    // interior spatial operator rows
    std::vector<Dividend> jumps;    // in-window dividends
    std::vector<double> pts;        // backward time points
};

GridSetup prepare(const MarketParams& m, const DividendSchedule& sched,
                  const GridSpec& grid) {
    m.validate();
    grid.validate();
    if (m.spot < grid.s_min || m.spot > grid.s_max)
        throw std::invalid_argument("spot lies outside the grid");
    const auto n = static_cast<std::size_t>(
        std::llround((grid.s_max - grid.s_min) / grid.ds));
    GridSetup g;
    g.s.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) g.s[i] = grid.s_min + grid.ds * i;
    g.a.resize(n - 1);
    g.b.resize(n - 1);
    g.c.resize(n - 1);
    const double v2 = m.vol * m.vol;
    for (std::size_t j = 1; j < n; ++j) {
        const double ii = g.s[j] / grid.ds;
        g.a[j - 1] = 0.5 * (v2 * ii * ii - m.rate * ii);
        g.b[j - 1] = -(v2 * ii * ii + m.rate);
        g.c[j - 1] = 0.5 * (v2 * ii * ii + m.rate * ii);
    }
    g.jumps = sched.in_window(0.0, m.term);
    g.pts = time_points(m.term, grid.dt, g.jumps);
    return g;
}

const Dividend* jump_at(const std::vector<Dividend>& jumps, double t) {
    for (const auto& d : jumps)
        if (std::abs(d.time - t) <= kTimeTol && d.amount > 0.0) return &d;
    return nullptr;
}

}  // namespace

void GridSpec::validate() const {
    if (s_min < 0.0) throw std::invalid_argument("s_min must be non-negative");
    if (!(s_max > s_min)) throw std::invalid_argument("s_max must exceed s_min");
    if (!(ds > 0.0)) throw std::invalid_argument("ds must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (std::llround((s_max - s_min) / ds) < 3)
        throw std::invalid_argument("grid needs at least three price steps");
}

double lower_boundary_value(BoundaryVariant variant, OptionKind kind,
                            const MarketParams& m, const DividendSchedule& sched,
                            double t, double s_edge) {
    if (kind == OptionKind::Call) return 0.0;
    const double disc = m.strike * std::exp(-m.rate * (m.term - t));
    switch (variant) {
        case BoundaryVariant::SpotBC:
            return disc - std::max(s_edge - outstanding_sum(sched, m.rate, m.term, t, 0), 0.0);
        case BoundaryVariant::StrikeBC:
            return disc + outstanding_sum(sched, m.rate, m.term, t, 0) - s_edge;
        case BoundaryVariant::HybridBC:
            return disc + outstanding_sum(sched, m.rate, m.term, t, 1) -
                   std::max(s_edge - outstanding_sum(sched, m.rate, m.term, t, 2), 0.0);
    }
    throw std::invalid_argument("unknown boundary variant");
}

double upper_boundary_value(OptionKind kind, const MarketParams& m,
                            const DividendSchedule& sched, double t, double s_edge) {
    if (kind == OptionKind::Put) return 0.0;
    return s_edge - outstanding_sum(sched, m.rate, m.term, t, 0) -
           m.strike * std::exp(-m.rate * (m.term - t));
}

std::vector<double> apply_dividend_jump(const std::vector<double>& values,
                                        const std::vector<double>& s_axis,
                                        double amount, DividendPolicy policy,
                                        double s_min) {
    std::vector<double> out(values.size());
    for (std::size_t j = 0; j < s_axis.size(); ++j) {
        double post;
        if (policy == DividendPolicy::Liquidator) {
            post = std::max(s_axis[j] - amount, s_min);
        } else {
            post = (s_axis[j] >= amount - 1e-12) ? s_axis[j] - amount : s_axis[j];
        }
        out[j] = linear_interp(s_axis, values, post);
    }
    return out;
}

double CnSolution::price_at(double spot) const {
    return linear_interp(s_axis, values, spot);
}

CnSolution cn_solve_european(OptionKind kind, const MarketParams& m,
                             const DividendSchedule& sched, DividendPolicy policy,
                             BoundaryVariant variant, const GridSpec& grid) {
    GridSetup g = prepare(m, sched, grid);
    const std::size_t n = g.s.size() - 1;
    std::vector<double> v(n + 1);
    for (std::size_t j = 0; j <= n; ++j)
        v[j] = (kind == OptionKind::Call) ? std::max(g.s[j] - m.strike, 0.0)
                                          : std::max(m.strike - g.s[j], 0.0);
    // A dividend falling exactly at expiry hits the payoff itself.
    if (const Dividend* d = jump_at(g.jumps, m.term))
        v = apply_dividend_jump(v, g.s, d->amount, policy, grid.s_min);
    double t_now = g.pts[0];
    v[0] = lower_boundary_value(variant, kind, m, sched, t_now, g.s[0]);
    v[n] = upper_boundary_value(kind, m, sched, t_now, g.s[n]);

    std::vector<double> rhs(n - 1), dl(n - 1), dm(n - 1), du(n - 1);
    for (std::size_t step = 1; step < g.pts.size(); ++step) {
        const double t_next = g.pts[step];
        const double h = t_now - t_next;
        for (std::size_t j = 0; j < n - 1; ++j) {
            rhs[j] = v[j + 1] + 0.5 * h * (g.a[j] * v[j] + g.b[j] * v[j + 1] +
                                           g.c[j] * v[j + 2]);
            dl[j] = -0.5 * h * g.a[j];
            dm[j] = 1.0 - 0.5 * h * g.b[j];
            du[j] = -0.5 * h * g.c[j];
        }
        const double lo = lower_boundary_value(variant, kind, m, sched, t_next, g.s[0]);
        const double hi = upper_boundary_value(kind, m, sched, t_next, g.s[n]);
        rhs[0] += 0.5 * h * g.a[0] * lo;
        rhs[n - 2] += 0.5 * h * g.c[n - 2] * hi;
        thomas_solve(dl, dm, du, rhs);
        for (std::size_t j = 0; j < n - 1; ++j) v[j + 1] = rhs[j];
        v[0] = lo;
        v[n] = hi;
        if (const Dividend* d = jump_at(g.jumps, t_next)) {
            v = apply_dividend_jump(v, g.s, d->amount, policy, grid.s_min);
            v[0] = lo;
            v[n] = hi;
        }
        t_now = t_next;
    }
    return CnSolution{std::move(g.s), std::move(v)};
}

double cn_price_european(OptionKind kind, const MarketParams& m,
                         const DividendSchedule& sched, DividendPolicy policy,
                         BoundaryVariant variant, const GridSpec& grid) {
    return cn_solve_european(kind, m, sched, policy, variant, grid).price_at(m.spot);
}

double psor_price_american_put(const MarketParams& m, const DividendSchedule& sched,
                               DividendPolicy policy, const GridSpec& grid) {
    GridSetup g = prepare(m, sched, grid);
    const std::size_t n = g.s.size() - 1;
    std::vector<double> pay(n + 1);
    for (std::size_t j = 0; j <= n; ++j) pay[j] = std::max(m.strike - g.s[j], 0.0);
    std::vector<double> v = pay;
    if (const Dividend* d = jump_at(g.jumps, m.term)) {
        v = apply_dividend_jump(v, g.s, d->amount, policy, grid.s_min);
        for (std::size_t j = 0; j <= n; ++j) {
            const double post = (policy == DividendPolicy::Liquidator)
                                    ? std::max(g.s[j] - d->amount, grid.s_min)
                                    : ((g.s[j] >= d->amount - 1e-12) ? g.s[j] - d->amount
                                                                     : g.s[j]);
            v[j] = std::max(v[j], m.strike - post);
        }
    }
    const double lo = m.strike - g.s[0];
    const double hi = 0.0;
    v[0] = lo;
    v[n] = hi;
    const double tol = kPsorTolMult * m.strike;

    double t_now = g.pts[0];
    std::vector<double> rhs(n - 1), dl(n - 1), dm(n - 1), du(n - 1);
    std::vector<double> x(n - 1);
    for (std::size_t step = 1; step < g.pts.size(); ++step) {
        const double t_next = g.pts[step];
        const double h = t_now - t_next;
        for (std::size_t j = 0; j < n - 1; ++j) {
            rhs[j] = v[j + 1] + 0.5 * h * (g.a[j] * v[j] + g.b[j] * v[j + 1] +
                                           g.c[j] * v[j + 2]);
            dl[j] = -0.5 * h * g.a[j];
            dm[j] = 1.0 - 0.5 * h * g.b[j];
            du[j] = -0.5 * h * g.c[j];
        }
        rhs[0] += 0.5 * h * g.a[0] * lo;
        rhs[n - 2] += 0.5 * h * g.c[n - 2] * hi;
        for (std::size_t j = 0; j < n - 1; ++j) x[j] = v[j + 1];  // warm start
        for (int it = 0; it < kPsorMaxIter; ++it) {
            double delta = 0.0;
            double xl = lo;
            for (std::size_t j = 0; j < n - 1; ++j) {
                const double xr = (j + 1 < n - 1) ? x[j + 1] : hi;
                const double gs = (rhs[j] - dl[j] * xl - du[j] * xr) / dm[j];
                const double xn = std::max(x[j] + kPsorOmega * (gs - x[j]), pay[j + 1]);
                delta = std::max(delta, std::abs(xn - x[j]));
                x[j] = xn;
                xl = xn;
            }
            if (delta < tol) break;
        }
        for (std::size_t j = 0; j < n - 1; ++j) v[j + 1] = x[j];
        v[0] = lo;
        v[n] = hi;
        if (const Dividend* d = jump_at(g.jumps, t_next)) {
            std::vector<double> jumped = apply_dividend_jump(v, g.s, d->amount, policy,
                                                             grid.s_min);
            for (std::size_t j = 0; j <= n; ++j) {
                const double post = (policy == DividendPolicy::Liquidator)
                                        ? std::max(g.s[j] - d->amount, grid.s_min)
                                        : ((g.s[j] >= d->amount - 1e-12)
                                               ? g.s[j] - d->amount
                                               : g.s[j]);
                v[j] = std::max(jumped[j], m.strike - post);
            }
            v[0] = lo;
            v[n] = hi;
        }
        t_now = t_next;
    }
    return linear_interp(g.s, v, m.spot);
}

}  // namespace divopt
