#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "divopt/analytic.hpp"
#include "divopt/mc.hpp"
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

McConfig cfg(std::size_t paths, std::uint64_t seed, bool antithetic = true) {
    McConfig c;
    c.paths = paths;
    c.seed = seed;
    c.antithetic = antithetic;
    return c;
}

}  // namespace

TEST_CASE("configuration is validated") {
    CHECK_THROWS_AS(mc_price(OptionKind::Put, market(1.0), kNone, DividendPolicy::Liquidator,
                             cfg(0, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(mc_price(OptionKind::Put, market(1.0), kNone, DividendPolicy::Liquidator,
                             cfg(1001, 1, true)),
                    std::invalid_argument);
    CHECK_NOTHROW(mc_price(OptionKind::Put, market(1.0), kNone, DividendPolicy::Liquidator,
                           cfg(1001, 1, false)));
}

TEST_CASE("runs are reproducible and seed-sensitive") {
    const auto a = mc_price(OptionKind::Put, market(11.0), kMulti, DividendPolicy::Liquidator,
                            cfg(100'000, 42));
    const auto b = mc_price(OptionKind::Put, market(11.0), kMulti, DividendPolicy::Liquidator,
                            cfg(100'000, 42));
    const auto c = mc_price(OptionKind::Put, market(11.0), kMulti, DividendPolicy::Liquidator,
                            cfg(100'000, 43));
    CHECK(a.price == b.price);
    CHECK(a.std_error == b.std_error);
    CHECK(a.price != c.price);
}

TEST_CASE("parallel and serial estimators agree bitwise") {
    const auto par = mc_price(OptionKind::Put, market(11.0), kMulti,
                              DividendPolicy::Liquidator, cfg(200'000, 9));
    const auto ser = mc_price_serial(OptionKind::Put, market(11.0), kMulti,
                                     DividendPolicy::Liquidator, cfg(200'000, 9));
    CHECK(par.price == ser.price);
    CHECK(par.std_error == ser.std_error);
}

TEST_CASE("no-dividend call matches the closed form within noise") {
    const auto r = mc_price(OptionKind::Call, market(1.0), kNone, DividendPolicy::Liquidator,
                            cfg(200'000, 3));
    CHECK(r.std_error > 0.0);
    CHECK(std::fabs(r.price - 14.717072420289298) <= 3.0 * r.std_error);
}

TEST_CASE("no-dividend call-put parity holds within noise") {
    const MarketParams m = market(1.0);
    const auto call = mc_price(OptionKind::Call, m, kNone, DividendPolicy::Liquidator,
                               cfg(200'000, 5));
    const auto put = mc_price(OptionKind::Put, m, kNone, DividendPolicy::Liquidator,
                              cfg(200'000, 6));
    const double forward = call.price - put.price + m.strike * std::exp(-m.rate * m.term);
    CHECK(std::fabs(forward - m.spot) <= 3.0 * (call.std_error + put.std_error));
}

TEST_CASE("shared-draw pairing shrinks the standard error") {
    for (std::uint64_t seed : {11ULL, 12ULL, 13ULL, 14ULL, 15ULL}) {
        const auto anti = mc_price(OptionKind::Put, market(1.0), kBigLate,
                                   DividendPolicy::Liquidator, cfg(100'000, seed, true));
        const auto plain = mc_price(OptionKind::Put, market(1.0), kBigLate,
                                    DividendPolicy::Liquidator, cfg(100'000, seed, false));
        CHECK(anti.std_error < plain.std_error);
    }
}

TEST_CASE("a dividend nobody can pay absorbs every liquidator path") {
    const DividendSchedule crushing{{{0.5, 1e6}}};
    const auto r = mc_price(OptionKind::Put, market(1.0), crushing,
                            DividendPolicy::Liquidator, cfg(10'000, 4));
    CHECK(r.price == doctest::Approx(100.0 * std::exp(-0.06)).epsilon(1e-12));
    CHECK(r.std_error < 1e-12);
}

TEST_CASE("a survivor skips a dividend no path can cover") {
    const DividendSchedule crushing{{{0.5, 1e6}}};
    const DividendSchedule token{{{0.5, 0.0}}};
    const auto skipped = mc_price(OptionKind::Put, market(1.0), crushing,
                                  DividendPolicy::Survivor, cfg(100'000, 7));
    const auto nothing = mc_price(OptionKind::Put, market(1.0), token,
                                  DividendPolicy::Survivor, cfg(100'000, 7));
    CHECK(skipped.price == nothing.price);
    CHECK(skipped.std_error == nothing.std_error);
}

TEST_CASE("simulated parity gap matches the analytic liquidator correction") {
    const MarketParams m = market(1.0);
    const McConfig c = cfg(1'000'000, 1);
    const auto call = mc_price(OptionKind::Call, m, kSingle, DividendPolicy::Liquidator, c);
    const auto put = mc_price(OptionKind::Put, m, kSingle, DividendPolicy::Liquidator, c);
    const double d_pv = pv_dividends(kSingle, m.rate, 0.0, m.term);
    const double est =
        (call.price - (m.spot - d_pv) + m.strike * std::exp(-m.rate * m.term)) - put.price;
    const double exact = parity_violation_single(m, kSingle.entries().front(),
                                                 DividendPolicy::Liquidator);
    CHECK(exact == doctest::Approx(0.03915955220653311).epsilon(1e-12));
    CHECK(std::fabs(est - exact) <= 3.0 * (call.std_error + put.std_error));
}

TEST_CASE("default-seed estimate sits close to the lattice benchmark") {
    const auto r = mc_price(OptionKind::Put, market(1.0), kBigLate,
                            DividendPolicy::Liquidator, McConfig{});
    const double cn = cn_price_european(OptionKind::Put, market(1.0), kBigLate,
                                        DividendPolicy::Liquidator);
    CHECK(std::fabs(r.price - cn) / cn < 1e-3);
}

TEST_CASE("a dividend on the expiry date is settled before payoff") {
    const DividendSchedule at_expiry{{{1.0, 9.0}}};
    const auto r = mc_price(OptionKind::Call, market(1.0), at_expiry,
                            DividendPolicy::Liquidator, cfg(200'000, 8));
    const double cn = cn_price_european(OptionKind::Call, market(1.0), at_expiry,
                                        DividendPolicy::Liquidator);
    CHECK(std::fabs(r.price - cn) <= 3.0 * r.std_error + 0.02);
}

TEST_CASE("dividends after expiry never touch the paths") {
    const DividendSchedule beyond{{{1.5, 9.0}}};
    const auto with = mc_price(OptionKind::Put, market(1.0), beyond,
                               DividendPolicy::Liquidator, cfg(50'000, 2));
    const auto without = mc_price(OptionKind::Put, market(1.0), kNone,
                                  DividendPolicy::Liquidator, cfg(50'000, 2));
    CHECK(with.price == without.price);
    CHECK(with.std_error == without.std_error);
}
