#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "divopt/analytic.hpp"
#include "divopt/pde.hpp"

using namespace divopt;

namespace {

MarketParams market(double term) { return MarketParams{100.0, 100.0, 0.06, 0.30, term}; }

const DividendSchedule kNone{};
const DividendSchedule kSingle{{{364.0 / 365.0, 50.0}}};
const DividendSchedule kBigLate{{{6.5, 70.0}}};

DividendSchedule semiannual_nines() {
    std::vector<Dividend> divs;
    for (int i = 0; i <= 10; ++i) divs.push_back({i + 0.5, 9.0});
    return DividendSchedule{divs};
}

const DividendSchedule kMulti = semiannual_nines();

}  // namespace

TEST_CASE("grid spec rejects degenerate configurations") {
    CHECK_THROWS_AS((GridSpec{-1.0, 500.0, 1.25, 0.05}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec{0.0, 0.0, 1.25, 0.05}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec{100.0, 50.0, 1.25, 0.05}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec{0.0, 500.0, 0.0, 0.05}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec{0.0, 500.0, -1.0, 0.05}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec{0.0, 500.0, 1.25, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec{0.0, 500.0, 300.0, 0.05}.validate()), std::invalid_argument);
    CHECK_NOTHROW(GridSpec{}.validate());
}

TEST_CASE("lower boundary variants agree at expiry and with no dividends outstanding") {
    const MarketParams m = market(11.0);
    for (BoundaryVariant v :
         {BoundaryVariant::SpotBC, BoundaryVariant::StrikeBC, BoundaryVariant::HybridBC}) {
        // At t = T the discount collapses and no dividend window remains open.
        CHECK(lower_boundary_value(v, OptionKind::Put, m, kMulti, 11.0, 0.0) ==
              doctest::Approx(100.0).epsilon(1e-12));
        CHECK(lower_boundary_value(v, OptionKind::Put, m, kMulti, 11.0, 3.0) ==
              doctest::Approx(97.0).epsilon(1e-12));
        // Calls pin the lower edge at zero regardless of variant.
        CHECK(lower_boundary_value(v, OptionKind::Call, m, kMulti, 0.0, 0.0) == 0.0);
    }
    // Before the only dividend of the late-dividend family exists, all variants are
    // plain discounted-strike values.
    const MarketParams m6 = market(6.0);
    const double disc6 = 100.0 * std::exp(-0.06 * 6.0);
    for (BoundaryVariant v :
         {BoundaryVariant::SpotBC, BoundaryVariant::StrikeBC, BoundaryVariant::HybridBC}) {
        CHECK(lower_boundary_value(v, OptionKind::Put, m6, kBigLate, 0.0, 0.0) ==
              doctest::Approx(disc6).epsilon(1e-12));
    }
}

TEST_CASE("strike-style lower boundary adds the discounted outstanding dividend") {
    const MarketParams m = market(11.0);
    const double expected = 100.0 * std::exp(-0.06 * 11.0) + 70.0 * std::exp(-0.06 * 6.5);
    CHECK(lower_boundary_value(BoundaryVariant::StrikeBC, OptionKind::Put, m, kBigLate, 0.0,
                               0.0) == doctest::Approx(expected).epsilon(1e-12));
    // After the dividend date it drops out of the window.
    CHECK(lower_boundary_value(BoundaryVariant::StrikeBC, OptionKind::Put, m, kBigLate, 7.0,
                               0.0) ==
          doctest::Approx(100.0 * std::exp(-0.06 * 4.0)).epsilon(1e-12));
}

TEST_CASE("upper boundary is forward-adjusted intrinsic for calls, zero for puts") {
    const MarketParams m = market(11.0);
    const double expected = 500.0 - 70.0 * std::exp(-0.06 * 6.5) - 100.0 * std::exp(-0.06 * 11.0);
    CHECK(upper_boundary_value(OptionKind::Call, m, kBigLate, 0.0, 500.0) ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(upper_boundary_value(OptionKind::Put, m, kBigLate, 0.0, 500.0) == 0.0);
}

TEST_CASE("dividend jump resampling follows the policy") {
    const std::vector<double> s{0.0, 10.0, 20.0, 30.0, 40.0};
    const std::vector<double> v{5.0, 4.0, 3.0, 2.0, 1.0};

    SUBCASE("zero amount is the identity") {
        for (DividendPolicy p : {DividendPolicy::Liquidator, DividendPolicy::Survivor}) {
            const auto out = apply_dividend_jump(v, s, 0.0, p, 0.0);
            REQUIRE(out.size() == v.size());
            for (std::size_t j = 0; j < v.size(); ++j) CHECK(out[j] == v[j]);
        }
    }

    SUBCASE("liquidator floors the post-dividend level at the grid bottom") {
        const auto out = apply_dividend_jump(v, s, 15.0, DividendPolicy::Liquidator, 0.0);
        const std::vector<double> expect{5.0, 5.0, 4.5, 3.5, 2.5};
        REQUIRE(out.size() == expect.size());
        for (std::size_t j = 0; j < expect.size(); ++j)
            CHECK(out[j] == doctest::Approx(expect[j]).epsilon(1e-14));
    }

    SUBCASE("survivor skips the payment when the level cannot cover it") {
        const auto out = apply_dividend_jump(v, s, 15.0, DividendPolicy::Survivor, 0.0);
        const std::vector<double> expect{5.0, 4.0, 4.5, 3.5, 2.5};
        REQUIRE(out.size() == expect.size());
        for (std::size_t j = 0; j < expect.size(); ++j)
            CHECK(out[j] == doctest::Approx(expect[j]).epsilon(1e-14));
    }
}

TEST_CASE("finite differences reproduce the closed form without dividends") {
    for (double term : {1.0, 11.0}) {
        const MarketParams m = market(term);
        for (OptionKind kind : {OptionKind::Call, OptionKind::Put}) {
            const double exact =
                bs_price(kind, m.spot, m.strike, m.rate, m.vol, m.term);
            const double pde = cn_price_european(kind, m, kNone, DividendPolicy::Liquidator);
            CHECK(std::fabs(pde - exact) <= 0.02);
        }
    }
}

TEST_CASE("benchmark prices are locked for the builtin scenarios") {
    // Liquidator policy, default grid, spot-style lower boundary.
    const auto cn = [](OptionKind k, double term, const DividendSchedule& d) {
        return cn_price_european(k, market(term), d, DividendPolicy::Liquidator);
    };
    CHECK(std::fabs(cn(OptionKind::Call, 1.0, kSingle) - 2.1834) < 1e-4);
    CHECK(std::fabs(cn(OptionKind::Call, 11.0, kSingle) - 22.7897) < 1e-4);
    CHECK(std::fabs(cn(OptionKind::Call, 1.0, kMulti) - 10.1943) < 1e-4);
    CHECK(std::fabs(cn(OptionKind::Call, 11.0, kMulti) - 18.7138) < 1e-4);
    CHECK(std::fabs(cn(OptionKind::Put, 11.0, kMulti) - 35.1308) < 1e-4);
    CHECK(std::fabs(cn(OptionKind::Put, 1.0, kBigLate) - 8.8921) < 1e-4);

    const MarketParams m7 = market(7.0);
    CHECK(std::fabs(cn_price_european(OptionKind::Put, m7, kBigLate, DividendPolicy::Liquidator,
                                      BoundaryVariant::SpotBC) -
                    34.6698) < 1e-4);
    CHECK(std::fabs(cn_price_european(OptionKind::Put, m7, kBigLate, DividendPolicy::Liquidator,
                                      BoundaryVariant::StrikeBC) -
                    47.9503) < 1e-4);
    CHECK(std::fabs(cn_price_european(OptionKind::Put, m7, kBigLate, DividendPolicy::Liquidator,
                                      BoundaryVariant::HybridBC) -
                    47.0017) < 1e-4);
}

TEST_CASE("survivor benchmark price is locked") {
    CHECK(std::fabs(cn_price_european(OptionKind::Put, market(7.0), kMulti,
                                      DividendPolicy::Survivor) -
                    33.5565) < 1e-4);
}

TEST_CASE("call prices ignore the put lower-boundary variant") {
    for (double term : {1.0, 7.0, 11.0}) {
        for (DividendPolicy p : {DividendPolicy::Liquidator, DividendPolicy::Survivor}) {
            const double a = cn_price_european(OptionKind::Call, market(term), kMulti, p,
                                               BoundaryVariant::SpotBC);
            const double b = cn_price_european(OptionKind::Call, market(term), kMulti, p,
                                               BoundaryVariant::StrikeBC);
            const double c = cn_price_european(OptionKind::Call, market(term), kMulti, p,
                                               BoundaryVariant::HybridBC);
            CHECK(a == b);
            CHECK(a == c);
        }
    }
}

TEST_CASE("american put dominates the european with matching dynamics") {
    for (double term : {1.0, 7.0, 11.0}) {
        const double eur = cn_price_european(OptionKind::Put, market(term), kBigLate,
                                             DividendPolicy::Liquidator,
                                             BoundaryVariant::SpotBC);
        const double amer = psor_price_american_put(market(term), kBigLate,
                                                    DividendPolicy::Liquidator);
        CHECK(eur <= amer + 1e-6);
    }
    const double eur0 = cn_price_european(OptionKind::Put, market(1.0), kNone,
                                          DividendPolicy::Liquidator);
    const double amer0 = psor_price_american_put(market(1.0), kNone,
                                                 DividendPolicy::Liquidator);
    CHECK(eur0 <= amer0 + 1e-6);
}

TEST_CASE("american put prices are locked for the late-dividend family") {
    CHECK(std::fabs(psor_price_american_put(market(7.0), kBigLate,
                                            DividendPolicy::Liquidator) -
                    35.9905) < 1e-4);
    CHECK(std::fabs(psor_price_american_put(market(11.0), kBigLate,
                                            DividendPolicy::Liquidator) -
                    37.0707) < 1e-4);
}

TEST_CASE("strike-style european boundary can exceed the american put") {
    const double eur = cn_price_european(OptionKind::Put, market(11.0), kBigLate,
                                         DividendPolicy::Liquidator,
                                         BoundaryVariant::StrikeBC);
    const double amer = psor_price_american_put(market(11.0), kBigLate,
                                                DividendPolicy::Liquidator);
    CHECK(eur > amer);
}

TEST_CASE("halving both grid steps moves prices only slightly") {
    const GridSpec fine{0.0, 500.0, 0.625, 0.025};
    struct Case {
        OptionKind kind;
        double term;
        const DividendSchedule* sched;
    };
    const Case cases[] = {
        {OptionKind::Call, 1.0, &kNone},
        {OptionKind::Call, 11.0, &kSingle},
        {OptionKind::Call, 11.0, &kMulti},
        {OptionKind::Put, 11.0, &kMulti},
        {OptionKind::Put, 7.0, &kBigLate},
    };
    for (const Case& c : cases) {
        const double base = cn_price_european(c.kind, market(c.term), *c.sched,
                                              DividendPolicy::Liquidator);
        const double refined = cn_price_european(c.kind, market(c.term), *c.sched,
                                                 DividendPolicy::Liquidator,
                                                 BoundaryVariant::SpotBC, fine);
        CHECK(std::fabs(refined - base) <= 0.03);
    }
}

TEST_CASE("time-zero put profiles decrease in the underlying") {
    struct Case {
        double term;
        const DividendSchedule* sched;
    };
    const Case cases[] = {{11.0, &kMulti}, {7.0, &kBigLate}};
    for (const Case& c : cases) {
        const CnSolution sol =
            cn_solve_european(OptionKind::Put, market(c.term), *c.sched,
                              DividendPolicy::Liquidator, BoundaryVariant::SpotBC);
        REQUIRE(sol.values.size() == sol.s_axis.size());
        // The topmost nodes are excluded: pinning the far edge at zero while
        // dividends remain outstanding leaves a small truncation ripple there.
        for (std::size_t j = 0; j + 1 < sol.values.size(); ++j) {
            if (sol.s_axis[j + 1] > 480.0) break;
            CHECK(sol.values[j + 1] <= sol.values[j] + 1e-9);
        }
    }
}

TEST_CASE("solution readout interpolates and clamps") {
    const CnSolution sol = cn_solve_european(OptionKind::Put, market(1.0), kNone,
                                             DividendPolicy::Liquidator,
                                             BoundaryVariant::SpotBC);
    const double at_node = sol.price_at(100.0);
    const double left = sol.price_at(99.375);
    const double right = sol.price_at(100.625);
    CHECK(at_node == doctest::Approx(0.5 * (left + right)).epsilon(1e-3));
    CHECK(sol.price_at(-50.0) == sol.values.front());
    CHECK(sol.price_at(1e4) == sol.values.back());
}

TEST_CASE("solver rejects off-grid spots and bad grids") {
    MarketParams m = market(1.0);
    m.spot = 600.0;
    CHECK_THROWS_AS(cn_price_european(OptionKind::Call, m, kNone, DividendPolicy::Liquidator),
                    std::invalid_argument);
    CHECK_THROWS_AS(cn_price_european(OptionKind::Call, market(1.0), kNone,
                                      DividendPolicy::Liquidator, BoundaryVariant::SpotBC,
                                      GridSpec{0.0, 500.0, -1.0, 0.05}),
                    std::invalid_argument);
    CHECK_THROWS_AS(psor_price_american_put(m, kNone, DividendPolicy::Liquidator),
                    std::invalid_argument);
}
