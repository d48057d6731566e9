#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "divopt/core.hpp"

namespace divopt {

// Adjusted inputs fed to the closed-form price.
struct BsInputs {
    double eff_spot = 0.0;
    double eff_strike = 0.0;
    double rate = 0.0;
    double vol = 0.0;
    double term = 0.0;
};

// Plain closed-form price on adjusted inputs. Throws std::domain_error when
// eff_spot or eff_strike is non-positive (log argument).
double bs_price(OptionKind kind, const BsInputs& in);
double bs_price(OptionKind kind, double spot, double strike, double rate,
                double vol, double term);

enum class PricingMethod {
    Spot,
    Strike,
    Hybrid,
    SpotVA,
    StrikeVA,
    HybridVA,
    HybridVA2,
    HybridPA,
    HybridVAPA,
    HybridVAPA2,
};

const char* method_token(PricingMethod m);
std::optional<PricingMethod> method_from_token(std::string_view token);
// True for the put-only parity-adjusted variants.
bool method_is_pa(PricingMethod m);

// Dividend-adjusted closed forms. All throw std::domain_error when an
// effective spot (or strike) becomes non-positive.
double price_spot(OptionKind kind, const MarketParams& m, const DividendSchedule& sched);
double price_strike(OptionKind kind, const MarketParams& m, const DividendSchedule& sched);
double price_hybrid(OptionKind kind, const MarketParams& m, const DividendSchedule& sched);

struct VolAdjustment {
    double adjusted_vol = 0.0;
    double epsilon = 0.0;  // relative perturbation size
};

// Time-averaged volatility compensating the spot shift. `weights`, when
// non-empty, scales each in-window dividend amount (one weight per in-window
// entry, in time order); used by the hybrid adjustment.
VolAdjustment vol_adjust_spot(const MarketParams& m, const DividendSchedule& sched,
                              const std::vector<double>& weights = {});
// Time-averaged volatility compensating the strike shift.
VolAdjustment vol_adjust_strike(const MarketParams& m, const DividendSchedule& sched,
                                const std::vector<double>& weights = {});
// Product form over the split dividend streams.
VolAdjustment vol_adjust_hybrid(const MarketParams& m, const DividendSchedule& sched);

double price_spot_va(OptionKind kind, const MarketParams& m, const DividendSchedule& sched);
double price_strike_va(OptionKind kind, const MarketParams& m, const DividendSchedule& sched);
double price_hybrid_va(OptionKind kind, const MarketParams& m, const DividendSchedule& sched);

// Closed-form implied volatility from the bridge-averaged local variance.
// `alphas` weights each in-window dividend's spot-side share (one per entry,
// in time order); empty selects the default (T - t_i)/T.
double implied_vol_va2(const MarketParams& m, const DividendSchedule& sched,
                       const std::vector<double>& alphas = {});
double price_hybrid_va2(OptionKind kind, const MarketParams& m, const DividendSchedule& sched);

// Policy-induced put/parity gap for a single dividend (amount > 0 required).
double parity_violation_single(const MarketParams& m, const Dividend& dividend,
                               DividendPolicy policy);
// Multi-dividend generalisation: one effective vanilla put struck at the last
// dividend (Liquidator) or an alternating sum of digital effective puts
// (Survivor). `base` selects the put machinery used for the effective puts.
double parity_violation_multi(const MarketParams& m, const DividendSchedule& sched,
                              DividendPolicy policy,
                              PricingMethod base = PricingMethod::HybridVA);

// Base-method put minus the matching parity violation. `base` must be
// Hybrid, HybridVA or HybridVA2.
double price_put_pa(PricingMethod base, const MarketParams& m,
                    const DividendSchedule& sched, DividendPolicy policy);

// C - P - (eff_spot - eff_strike * e^{-rT}) for a non-PA method; ~0 always.
double parity_check(PricingMethod method, const MarketParams& m,
                    const DividendSchedule& sched);

// Dispatch by method token. `policy` only affects the PA variants; PA methods
// are put-only and reject kind == Call.
double price_by_method(PricingMethod method, OptionKind kind, const MarketParams& m,
                       const DividendSchedule& sched,
                       DividendPolicy policy = DividendPolicy::Liquidator);

}  // namespace divopt
