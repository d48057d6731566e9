#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "divopt/analytic.hpp"
#include "divopt/mc.hpp"
#include "divopt/pde.hpp"
#include "divopt/scenario.hpp"

namespace {

using namespace divopt;

struct GlobalOpts {
    std::string out_path;
    std::string precision;
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

PrecisionMode precision_or(const GlobalOpts& g, PrecisionMode fallback) {
    if (g.precision == "full") return PrecisionMode::Full;
    if (g.precision == "table") return PrecisionMode::Table;
    return fallback;
}

void write_out(const GlobalOpts& g, const std::string& text) {
    if (g.out_path.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream out(g.out_path);
    if (!out) throw std::invalid_argument("cannot open output file '" + g.out_path + "'");
    out << text;
}

DividendSchedule schedule_from_pairs(const std::vector<double>& flat) {
    std::vector<Dividend> ds;
    for (std::size_t i = 0; i + 1 < flat.size(); i += 2)
        ds.push_back({flat[i], flat[i + 1]});
    std::stable_sort(ds.begin(), ds.end(),
                     [](const Dividend& a, const Dividend& b) { return a.time < b.time; });
    return DividendSchedule(std::move(ds));
}

struct PriceOpts {
    std::string method;
    OptionKind kind = OptionKind::Call;
    DividendPolicy policy = DividendPolicy::Liquidator;
    BoundaryVariant boundary = BoundaryVariant::SpotBC;
    double spot = 100.0, strike = 100.0, rate = 0.06, vol = 0.30, term = 1.0;
    std::vector<double> dividends;  // flat (time, amount) pairs
    GridSpec grid;
    std::size_t paths = 1'000'000;
    bool antithetic = true;
};

int run_price(const GlobalOpts& g, const PriceOpts& o) {
    const MarketParams market{o.spot, o.strike, o.rate, o.vol, o.term};
    const DividendSchedule schedule = schedule_from_pairs(o.dividends);
    char buf[96];
    if (o.method == "cn") {
        const double p = cn_price_european(o.kind, market, schedule, o.policy,
                                           o.boundary, o.grid);
        std::snprintf(buf, sizeof(buf), "%.9g\n", p);
    } else if (o.method == "american") {
        if (o.kind != OptionKind::Put)
            throw std::invalid_argument("the american solver prices puts only");
        const double p = psor_price_american_put(market, schedule, o.policy, o.grid);
        std::snprintf(buf, sizeof(buf), "%.9g\n", p);
    } else if (o.method == "mc") {
        McConfig cfg;
        cfg.paths = o.paths;
        cfg.antithetic = o.antithetic;
        if (g.seed_set) cfg.seed = g.seed;
        const McResult res = mc_price(o.kind, market, schedule, o.policy, cfg);
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g\n", res.price, res.std_error);
    } else {
        const auto m = method_from_token(o.method);
        if (!m) throw std::invalid_argument("unknown method '" + o.method + "'");
        const double p = price_by_method(*m, o.kind, market, schedule, o.policy);
        std::snprintf(buf, sizeof(buf), "%.9g\n", p);
    }
    write_out(g, buf);
    return 0;
}

int run_table(const GlobalOpts& g, const std::string& name) {
    Scenario sc = builtin_scenario(name);
    if (g.seed_set) sc.mc.seed = g.seed;
    if (sc.name == "fig1") {
        const Fig1Series series = fig1_series(sc.grid);
        write_out(g, emit_fig1_csv(series, precision_or(g, PrecisionMode::Table)));
        return 0;
    }
    const auto rows = run_scenario(sc);
    write_out(g, emit_csv(sc.methods, rows, precision_or(g, PrecisionMode::Table)));
    return 0;
}

int run_fig1(const GlobalOpts& g) {
    const Fig1Series series = fig1_series(GridSpec{});
    write_out(g, emit_fig1_csv(series, precision_or(g, PrecisionMode::Full)));
    return 0;
}

int run_compare(const GlobalOpts& g) {
    if (g.config_path.empty())
        throw std::invalid_argument("compare needs --config <file>");
    Scenario sc = parse_scenario_file(g.config_path);
    if (g.seed_set) sc.mc.seed = g.seed;
    const auto rows = run_scenario(sc);
    write_out(g, emit_csv(sc.methods, rows, precision_or(g, PrecisionMode::Full)));
    return 0;
}

int run_validate(const GlobalOpts& g) {
    const PricingMethod methods[] = {
        PricingMethod::Spot,     PricingMethod::Strike,    PricingMethod::Hybrid,
        PricingMethod::SpotVA,   PricingMethod::StrikeVA,  PricingMethod::HybridVA,
        PricingMethod::HybridVA2};
    const DividendSchedule empty;
    const DividendSchedule single({{364.0 / 365.0, 50.0}});
    const DividendSchedule multi = [] {
        std::vector<Dividend> ds;
        for (int i = 0; i < 11; ++i) ds.push_back({i + 0.5, 9.0});
        return DividendSchedule(std::move(ds));
    }();
    std::string report;
    bool ok = true;
    auto check = [&](const std::string& label, double worst, double tol) {
        const bool pass = worst <= tol;
        ok = ok && pass;
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%-34s %s  (max |err| %.3g, tol %.3g)\n",
                      label.c_str(), pass ? "pass" : "FAIL", worst, tol);
        report += buf;
    };

    double worst = 0.0;
    for (PricingMethod m : methods)
        for (OptionKind kind : {OptionKind::Call, OptionKind::Put})
            for (double term : {1.0, 5.0, 11.0})
                for (const MarketParams& mk :
                     {MarketParams{100, 100, 0.06, 0.30, term},
                      MarketParams{90, 110, 0.02, 0.20, term}}) {
                    const double got = price_by_method(m, kind, mk, empty);
                    const double want = bs_price(kind, mk.spot, mk.strike, mk.rate,
                                                 mk.vol, mk.term);
                    worst = std::max(worst, std::abs(got - want));
                }
    check("zero-dividend collapse", worst, 1e-10);

    worst = 0.0;
    for (PricingMethod m : methods)
        for (const DividendSchedule* sched : {&single, &multi})
            for (double term : {1.0, 5.0, 11.0}) {
                const MarketParams mk{100, 100, 0.06, 0.30, term};
                worst = std::max(worst, std::abs(parity_check(m, mk, *sched)));
            }
    check("put-call parity residual", worst, 1e-10);

    report += ok ? "validation passed\n" : "validation FAILED\n";
    write_out(g, report);
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete-dividend option pricing toolkit"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--out", g.out_path, "write output to this file instead of stdout");
    app.add_option("--precision", g.precision, "output precision")
        ->check(CLI::IsMember({"full", "table"}));
    app.add_option("--config", g.config_path, "scenario file for 'compare'");
    auto* seed_opt = app.add_option("--seed", g.seed, "Monte Carlo seed override");

    const std::map<std::string, OptionKind> kind_map{{"call", OptionKind::Call},
                                                     {"put", OptionKind::Put}};
    const std::map<std::string, DividendPolicy> policy_map{
        {"liquidator", DividendPolicy::Liquidator}, {"survivor", DividendPolicy::Survivor}};
    const std::map<std::string, BoundaryVariant> boundary_map{
        {"spot", BoundaryVariant::SpotBC},
        {"strike", BoundaryVariant::StrikeBC},
        {"hybrid", BoundaryVariant::HybridBC}};

    PriceOpts po;
    auto* price = app.add_subcommand("price", "price one option with one method");
    price->fallthrough();
    price->add_option("--method", po.method,
                      "pricing method token, or cn / american / mc")
        ->required();
    price->add_option("--kind", po.kind, "option kind")
        ->transform(CLI::CheckedTransformer(kind_map, CLI::ignore_case));
    price->add_option("--policy", po.policy, "dividend shortfall policy")
        ->transform(CLI::CheckedTransformer(policy_map, CLI::ignore_case));
    price->add_option("--boundary", po.boundary, "lower boundary closure (cn only)")
        ->transform(CLI::CheckedTransformer(boundary_map, CLI::ignore_case));
    price->add_option("--spot", po.spot, "spot price");
    price->add_option("--strike", po.strike, "strike");
    price->add_option("--rate", po.rate, "risk-free rate");
    price->add_option("--vol", po.vol, "volatility");
    price->add_option("--term", po.term, "maturity in years");
    price->add_option("--dividend", po.dividends, "dividend as '<time> <amount>'")
        ->type_size(2);
    price->add_option("--smin", po.grid.s_min, "grid lower price bound");
    price->add_option("--smax", po.grid.s_max, "grid upper price bound");
    price->add_option("--ds", po.grid.ds, "grid price step");
    price->add_option("--dt", po.grid.dt, "grid time step");
    price->add_option("--paths", po.paths, "Monte Carlo path count");
    price->add_flag("--antithetic,!--no-antithetic", po.antithetic,
                    "antithetic sampling (mc only)");

    std::string table_name;
    auto* table = app.add_subcommand("table", "reproduce a builtin comparison table");
    table->fallthrough();
    table->add_option("name", table_name, "table1, table2, table3 or fig1")->required();

    auto* fig1 = app.add_subcommand("fig1", "boundary-closure and American put series");
    fig1->fallthrough();

    auto* validate = app.add_subcommand("validate", "run the invariant suite");
    validate->fallthrough();

    auto* compare = app.add_subcommand("compare", "run a scenario file");
    compare->fallthrough();

    try {
        app.parse(argc, argv);
        g.seed_set = seed_opt->count() > 0;
        if (price->parsed()) return run_price(g, po);
        if (table->parsed()) return run_table(g, table_name);
        if (fig1->parsed()) return run_fig1(g);
        if (validate->parsed()) return run_validate(g);
        if (compare->parsed()) return run_compare(g);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
