#include "divopt/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "divopt/normal.hpp"

namespace divopt {

namespace {

double d1_term(double spot, double strike, double rate, double vol, double term) {
    return (std::log(spot / strike) + (rate + vol * vol / 2.0) * term) /
           (vol * std::sqrt(term));
}

DividendSchedule sub_schedule_before(const std::vector<Dividend>& dv, double cutoff) {
    std::vector<Dividend> sub;
    for (const auto& d : dv)
        if (d.time < cutoff) sub.push_back(d);
    return DividendSchedule(std::move(sub));
}

}  // namespace

double bs_price(OptionKind kind, const BsInputs& in) {
    if (!(in.eff_spot > 0.0))
        throw std::domain_error("effective spot must be positive");
    if (!(in.eff_strike > 0.0))
        throw std::domain_error("effective strike must be positive");
    if (!(in.vol > 0.0)) throw std::domain_error("vol must be positive");
    if (!(in.term > 0.0)) throw std::domain_error("term must be positive");
    const double b1 = d1_term(in.eff_spot, in.eff_strike, in.rate, in.vol, in.term);
    const double b2 = b1 - in.vol * std::sqrt(in.term);
    const double df = std::exp(-in.rate * in.term);
    if (kind == OptionKind::Call)
        return in.eff_spot * norm_cdf(b1) - in.eff_strike * df * norm_cdf(b2);
    return in.eff_strike * df * norm_cdf(-b2) - in.eff_spot * norm_cdf(-b1);
}

double bs_price(OptionKind kind, double spot, double strike, double rate,
                double vol, double term) {
    return bs_price(kind, BsInputs{spot, strike, rate, vol, term});
}

const char* method_token(PricingMethod m) {
    switch (m) {
        case PricingMethod::Spot: return "spot";
        case PricingMethod::Strike: return "strike";
        case PricingMethod::Hybrid: return "hybrid";
        case PricingMethod::SpotVA: return "spot_va";
        case PricingMethod::StrikeVA: return "strike_va";
        case PricingMethod::HybridVA: return "hybrid_va";
        case PricingMethod::HybridVA2: return "hybrid_va2";
        case PricingMethod::HybridPA: return "hybrid_pa";
        case PricingMethod::HybridVAPA: return "hybrid_vapa";
        case PricingMethod::HybridVAPA2: return "hybrid_vapa2";
    }
    throw std::invalid_argument("unknown pricing method");
}

std::optional<PricingMethod> method_from_token(std::string_view token) {
    static const std::pair<std::string_view, PricingMethod> table[] = {
        {"spot", PricingMethod::Spot},
        {"strike", PricingMethod::Strike},
        {"hybrid", PricingMethod::Hybrid},
        {"spot_va", PricingMethod::SpotVA},
        {"strike_va", PricingMethod::StrikeVA},
        {"hybrid_va", PricingMethod::HybridVA},
        {"hybrid_va2", PricingMethod::HybridVA2},
        {"hybrid_pa", PricingMethod::HybridPA},
        {"hybrid_vapa", PricingMethod::HybridVAPA},
        {"hybrid_vapa2", PricingMethod::HybridVAPA2},
    };
    for (const auto& [tok, m] : table)
        if (tok == token) return m;
    return std::nullopt;
}

bool method_is_pa(PricingMethod m) {
    return m == PricingMethod::HybridPA || m == PricingMethod::HybridVAPA ||
           m == PricingMethod::HybridVAPA2;
}

double price_spot(OptionKind kind, const MarketParams& m, const DividendSchedule& sched) {
    m.validate();
    const double d = pv_dividends(sched, m.rate, 0.0, m.term);
    return bs_price(kind, m.spot - d, m.strike, m.rate, m.vol, m.term);
}

double price_strike(OptionKind kind, const MarketParams& m, const DividendSchedule& sched) {
    m.validate();
    double kt = m.strike;
    for (const auto& d : sched.in_window(0.0, m.term))
        kt += d.amount * std::exp(m.rate * (m.term - d.time));
    return bs_price(kind, m.spot, kt, m.rate, m.vol, m.term);
}

namespace {

double price_hybrid_with_vol(OptionKind kind, const MarketParams& m,
                             const DividendSchedule& sched, double vol) {
    const DividendSplit sp = dividend_split(sched, m.rate, m.term);
    return bs_price(kind, m.spot - sp.d_spot,
                    m.strike + sp.d_strike * std::exp(m.rate * m.term), m.rate, vol,
                    m.term);
}

}  // namespace

double price_hybrid(OptionKind kind, const MarketParams& m, const DividendSchedule& sched) {
    m.validate();
    return price_hybrid_with_vol(kind, m, sched, m.vol);
}

VolAdjustment vol_adjust_spot(const MarketParams& m, const DividendSchedule& sched,
                              const std::vector<double>& weights) {
    m.validate();
    const auto dv = sched.in_window(0.0, m.term);
    if (dv.empty()) return {m.vol, 0.0};
    const std::size_t n = dv.size();
    if (!weights.empty() && weights.size() != n)
        throw std::invalid_argument("one weight per in-window dividend required");
    std::vector<double> pvs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        pvs[i] = w * dv[i].amount * std::exp(-m.rate * dv[i].time);
    }
    double total = 0.0;
    double tprev = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double dj = 0.0;  // dividends at or after segment (t_{j-1}, t_j]
        for (std::size_t i = j; i < n; ++i) dj += pvs[i];
        if (m.spot - dj <= 0.0)
            throw std::domain_error("remaining dividends exceed spot");
        const double ratio = m.spot / (m.spot - dj);
        total += ratio * ratio * (dv[j].time - tprev) / m.term;
        tprev = dv[j].time;
    }
    total += (m.term - dv.back().time) / m.term;
    const double adjusted = m.vol * std::sqrt(total);
    return {adjusted, adjusted / m.vol - 1.0};
}

VolAdjustment vol_adjust_strike(const MarketParams& m, const DividendSchedule& sched,
                                const std::vector<double>& weights) {
    m.validate();
    const auto dv = sched.in_window(0.0, m.term);
    if (dv.empty()) return {m.vol, 0.0};
    const std::size_t n = dv.size();
    if (!weights.empty() && weights.size() != n)
        throw std::invalid_argument("one weight per in-window dividend required");
    std::vector<double> pvs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        pvs[i] = w * dv[i].amount * std::exp(-m.rate * dv[i].time);
    }
    double total = dv.front().time / m.term;
    for (std::size_t j = 0; j < n; ++j) {
        double dj = 0.0;  // dividends at or before; segment (t_j, t_{j+1}]
        for (std::size_t i = 0; i <= j; ++i) dj += pvs[i];
        const double ratio = m.spot / (m.spot + dj);
        const double tnext = (j + 1 < n) ? dv[j + 1].time : m.term;
        total += ratio * ratio * (tnext - dv[j].time) / m.term;
    }
    const double adjusted = m.vol * std::sqrt(total);
    return {adjusted, 1.0 - adjusted / m.vol};
}

VolAdjustment vol_adjust_hybrid(const MarketParams& m, const DividendSchedule& sched) {
    m.validate();
    const auto dv = sched.in_window(0.0, m.term);
    if (dv.empty()) return {m.vol, 0.0};
    std::vector<double> ws(dv.size()), wk(dv.size());
    for (std::size_t i = 0; i < dv.size(); ++i) {
        ws[i] = (m.term - dv[i].time) / m.term;
        wk[i] = dv[i].time / m.term;
    }
    const double eps_s = vol_adjust_spot(m, sched, ws).epsilon;
    const double eps_k = vol_adjust_strike(m, sched, wk).epsilon;
    const double adjusted = m.vol * (1.0 + eps_s) * (1.0 - eps_k);
    return {adjusted, adjusted / m.vol - 1.0};
}

double price_spot_va(OptionKind kind, const MarketParams& m, const DividendSchedule& sched) {
    m.validate();
    const double d = pv_dividends(sched, m.rate, 0.0, m.term);
    return bs_price(kind, m.spot - d, m.strike, m.rate,
                    vol_adjust_spot(m, sched).adjusted_vol, m.term);
}

double price_strike_va(OptionKind kind, const MarketParams& m, const DividendSchedule& sched) {
    m.validate();
    double kt = m.strike;
    for (const auto& d : sched.in_window(0.0, m.term))
        kt += d.amount * std::exp(m.rate * (m.term - d.time));
    return bs_price(kind, m.spot, kt, m.rate,
                    vol_adjust_strike(m, sched).adjusted_vol, m.term);
}

double price_hybrid_va(OptionKind kind, const MarketParams& m, const DividendSchedule& sched) {
    m.validate();
    return price_hybrid_with_vol(kind, m, sched, vol_adjust_hybrid(m, sched).adjusted_vol);
}

double implied_vol_va2(const MarketParams& m, const DividendSchedule& sched,
                       const std::vector<double>& alphas) {
    m.validate();
    const auto dv = sched.in_window(0.0, m.term);
    if (dv.empty()) return m.vol;
    const std::size_t n = dv.size();
    if (!alphas.empty() && alphas.size() != n)
        throw std::invalid_argument("one alpha per in-window dividend required");
    std::vector<double> al(n), ts(n), ds(n);
    for (std::size_t i = 0; i < n; ++i) {
        ts[i] = dv[i].time;
        ds[i] = dv[i].amount;
        al[i] = alphas.empty() ? (m.term - ts[i]) / m.term : alphas[i];
    }
    double ds0 = 0.0, dkt = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ds0 += al[i] * ds[i] * std::exp(-m.rate * ts[i]);
        dkt += (1.0 - al[i]) * ds[i] * std::exp(m.rate * (m.term - ts[i]));
    }
    if (m.spot - ds0 <= 0.0)
        throw std::domain_error("spot-side dividends exceed spot");
    const double s = std::log(m.spot - ds0);
    const double k = std::log((m.strike + dkt) * std::exp(-m.rate * m.term));
    const double srt = m.vol * std::sqrt(m.term);
    const double a = (s - k) / srt + srt / 2.0;
    const double b = (s - k) / srt + srt;
    const double sqt = std::sqrt(m.term);

    double single = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double fi = ds[i] * std::exp(-m.rate * ts[i]);
        const double u = m.vol * ts[i] / sqt;
        single += al[i] * fi * (norm_cdf(a) - norm_cdf(a - u));
        single -= (1.0 - al[i]) * fi * (norm_cdf(a - u) - norm_cdf(a - srt));
    }
    double dbl = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double fij = ds[i] * ds[j] * std::exp(-m.rate * (ts[i] + ts[j]));
            const double lo = std::min(ts[i], ts[j]);
            const double hi = std::max(ts[i], ts[j]);
            dbl += al[i] * al[j] * fij *
                   (norm_cdf(b) - norm_cdf(b - 2.0 * m.vol * lo / sqt));
            dbl += (1.0 - al[i]) * (1.0 - al[j]) * fij *
                   (norm_cdf(b - 2.0 * m.vol * hi / sqt) - norm_cdf(b - 2.0 * srt));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (ts[i] > ts[j]) {
                const double fij = ds[i] * ds[j] * std::exp(-m.rate * (ts[i] + ts[j]));
                dbl -= 2.0 * al[i] * (1.0 - al[j]) * fij *
                       (norm_cdf(b - 2.0 * m.vol * ts[j] / sqt) -
                        norm_cdf(b - 2.0 * m.vol * ts[i] / sqt));
            }
        }
    }
    constexpr double pi = std::numbers::pi;
    const double var = m.vol * m.vol +
                       2.0 * m.vol * std::sqrt(2.0 * pi / m.term) *
                           std::exp(a * a / 2.0 - s) * single +
                       m.vol * std::sqrt(pi / (2.0 * m.term)) *
                           std::exp(b * b / 2.0 - 2.0 * s) * dbl;
    if (var <= 0.0) throw std::domain_error("implied variance is non-positive");
    return std::sqrt(var);
}

double price_hybrid_va2(OptionKind kind, const MarketParams& m, const DividendSchedule& sched) {
    m.validate();
    return price_hybrid_with_vol(kind, m, sched, implied_vol_va2(m, sched));
}

double parity_violation_single(const MarketParams& m, const Dividend& dividend,
                               DividendPolicy policy) {
    m.validate();
    if (!(dividend.time > 0.0))
        throw std::invalid_argument("dividend time must be positive");
    if (!(dividend.amount > 0.0))
        throw std::invalid_argument("dividend amount must be positive");
    const double td = dividend.time;
    const double b1 = d1_term(m.spot, dividend.amount, m.rate, m.vol, td);
    const double b2 = b1 - m.vol * std::sqrt(td);
    const double digital = dividend.amount * std::exp(-m.rate * td) * norm_cdf(-b2);
    if (policy == DividendPolicy::Survivor) return digital;
    return digital - m.spot * norm_cdf(-b1);
}

namespace {

double put_by_base(PricingMethod base, const MarketParams& m, const DividendSchedule& sched) {
    switch (base) {
        case PricingMethod::Hybrid:
            return price_hybrid(OptionKind::Put, m, sched);
        case PricingMethod::HybridVA:
            return price_hybrid_va(OptionKind::Put, m, sched);
        case PricingMethod::HybridVA2:
            return price_hybrid_va2(OptionKind::Put, m, sched);
        default:
            throw std::invalid_argument("base method must be hybrid, hybrid_va or hybrid_va2");
    }
}

// eff-strike * e^{-r*td} * Phi(-b2) with the base method's adjusted inputs on
// the dividends strictly before td.
double digital_leg_by_base(PricingMethod base, const MarketParams& m, double amount,
                           double td, const DividendSchedule& sub) {
    const DividendSplit sp = dividend_split(sub, m.rate, td);
    const double eff_s = m.spot - sp.d_spot;
    const double eff_k = amount + sp.d_strike * std::exp(m.rate * td);
    if (eff_s <= 0.0) throw std::domain_error("effective spot must be positive");
    if (eff_k <= 0.0) throw std::domain_error("effective strike must be positive");
    const MarketParams sub_m{m.spot, amount, m.rate, m.vol, td};
    double vol = m.vol;
    if (base == PricingMethod::HybridVA)
        vol = vol_adjust_hybrid(sub_m, sub).adjusted_vol;
    else if (base == PricingMethod::HybridVA2)
        vol = implied_vol_va2(sub_m, sub);
    const double b1 = d1_term(eff_s, eff_k, m.rate, vol, td);
    const double b2 = b1 - vol * std::sqrt(td);
    return eff_k * std::exp(-m.rate * td) * norm_cdf(-b2);
}

}  // namespace

double parity_violation_multi(const MarketParams& m, const DividendSchedule& sched,
                              DividendPolicy policy, PricingMethod base) {
    m.validate();
    if (base != PricingMethod::Hybrid && base != PricingMethod::HybridVA &&
        base != PricingMethod::HybridVA2)
        throw std::invalid_argument("base method must be hybrid, hybrid_va or hybrid_va2");
    const auto dv = sched.in_window(0.0, m.term);
    if (dv.empty()) return 0.0;
    if (policy == DividendPolicy::Liquidator) {
        const Dividend& last = dv.back();
        const MarketParams eff{m.spot, last.amount, m.rate, m.vol, last.time};
        return put_by_base(base, eff, sub_schedule_before(dv, last.time));
    }
    // Survivor: alternating sum of digital effective puts, one per dividend.
    const std::size_t n = dv.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sign = ((n - 1 - i) % 2 == 0) ? 1.0 : -1.0;
        total += sign * digital_leg_by_base(base, m, dv[i].amount, dv[i].time,
                                            sub_schedule_before(dv, dv[i].time));
    }
    return total;
}

double price_put_pa(PricingMethod base, const MarketParams& m,
                    const DividendSchedule& sched, DividendPolicy policy) {
    return put_by_base(base, m, sched) - parity_violation_multi(m, sched, policy, base);
}

double parity_check(PricingMethod method, const MarketParams& m,
                    const DividendSchedule& sched) {
    m.validate();
    if (method_is_pa(method))
        throw std::invalid_argument("parity check applies to non-adjusted methods only");
    double eff_s = m.spot;
    double eff_k = m.strike;
    switch (method) {
        case PricingMethod::Spot:
        case PricingMethod::SpotVA:
            eff_s -= pv_dividends(sched, m.rate, 0.0, m.term);
            break;
        case PricingMethod::Strike:
        case PricingMethod::StrikeVA:
            for (const auto& d : sched.in_window(0.0, m.term))
                eff_k += d.amount * std::exp(m.rate * (m.term - d.time));
            break;
        default: {
            const DividendSplit sp = dividend_split(sched, m.rate, m.term);
            eff_s -= sp.d_spot;
            eff_k += sp.d_strike * std::exp(m.rate * m.term);
            break;
        }
    }
    const double call = price_by_method(method, OptionKind::Call, m, sched);
    const double put = price_by_method(method, OptionKind::Put, m, sched);
    return call - put - (eff_s - eff_k * std::exp(-m.rate * m.term));
}

double price_by_method(PricingMethod method, OptionKind kind, const MarketParams& m,
                       const DividendSchedule& sched, DividendPolicy policy) {
    switch (method) {
        case PricingMethod::Spot: return price_spot(kind, m, sched);
        case PricingMethod::Strike: return price_strike(kind, m, sched);
        case PricingMethod::Hybrid: return price_hybrid(kind, m, sched);
        case PricingMethod::SpotVA: return price_spot_va(kind, m, sched);
        case PricingMethod::StrikeVA: return price_strike_va(kind, m, sched);
        case PricingMethod::HybridVA: return price_hybrid_va(kind, m, sched);
        case PricingMethod::HybridVA2: return price_hybrid_va2(kind, m, sched);
        case PricingMethod::HybridPA:
        case PricingMethod::HybridVAPA:
        case PricingMethod::HybridVAPA2:
            if (kind == OptionKind::Call)
                throw std::invalid_argument("parity-adjusted methods price puts only");
            switch (method) {
                case PricingMethod::HybridPA:
                    return price_put_pa(PricingMethod::Hybrid, m, sched, policy);
                case PricingMethod::HybridVAPA:
                    return price_put_pa(PricingMethod::HybridVA, m, sched, policy);
                default:
                    return price_put_pa(PricingMethod::HybridVA2, m, sched, policy);
            }
    }
    throw std::invalid_argument("unknown pricing method");
}

}  // namespace divopt
