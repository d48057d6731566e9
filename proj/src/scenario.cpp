#include "divopt/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace divopt {

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string fmt_price(double v, PrecisionMode mode) {
    return fmt(mode == PrecisionMode::Table ? "%.2f" : "%.9g", v);
}

std::string fmt_rel(double v, PrecisionMode mode) {
    return fmt(mode == PrecisionMode::Table ? "%.1f" : "%.9g", v);
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& text, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
        if (pos != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(where + ": expected a number, got '" + text + "'");
    }
}

std::vector<std::string> split_list(const std::string& text) {
    std::string spaced = text;
    std::replace(spaced.begin(), spaced.end(), ',', ' ');
    std::istringstream in(spaced);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::string file_stem(const std::string& path) {
    const auto slash = path.find_last_of("/\\");
    std::string base = (slash == std::string::npos) ? path : path.substr(slash + 1);
    const auto dot = base.find_last_of('.');
    if (dot != std::string::npos && dot > 0) base.resize(dot);
    return base.empty() ? "custom" : base;
}

}  // namespace

MarketParams Scenario::market_at(double term) const {
    return MarketParams{spot, strike, rate, vol, term};
}

void Scenario::validate() const {
    if (maturities.empty())
        throw std::invalid_argument("scenario needs at least one maturity");
    double prev = 0.0;
    for (double t : maturities) {
        if (!(t > prev))
            throw std::invalid_argument("maturities must be positive and strictly increasing");
        prev = t;
    }
    market_at(maturities.front()).validate();
    grid.validate();
}

Scenario builtin_scenario(std::string_view name) {
    Scenario sc;
    sc.name = std::string(name);
    sc.maturities = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    const DividendSchedule single({{364.0 / 365.0, 50.0}});
    DividendSchedule multi = [] {
        std::vector<Dividend> ds;
        for (int i = 0; i < 11; ++i) ds.push_back({i + 0.5, 9.0});
        return DividendSchedule(std::move(ds));
    }();
    if (name == "table1") {
        sc.kind = OptionKind::Call;
        sc.schedule = single;
        sc.methods = {PricingMethod::SpotVA, PricingMethod::StrikeVA, PricingMethod::Hybrid,
                      PricingMethod::HybridVA, PricingMethod::HybridVA2};
    } else if (name == "table2") {
        sc.kind = OptionKind::Call;
        sc.schedule = multi;
        sc.methods = {PricingMethod::SpotVA, PricingMethod::StrikeVA, PricingMethod::Hybrid,
                      PricingMethod::HybridVA, PricingMethod::HybridVA2};
    } else if (name == "table3") {
        sc.kind = OptionKind::Put;
        sc.schedule = multi;
        sc.methods = {PricingMethod::Hybrid,   PricingMethod::HybridPA,
                      PricingMethod::HybridVA, PricingMethod::HybridVAPA,
                      PricingMethod::HybridVA2, PricingMethod::HybridVAPA2};
    } else if (name == "fig1") {
        sc.kind = OptionKind::Put;
        sc.schedule = DividendSchedule({{6.5, 70.0}});
    } else {
        throw std::invalid_argument("unknown builtin scenario '" + std::string(name) + "'");
    }
    return sc;
}

Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open scenario file '" + path + "'");
    Scenario sc;
    sc.name = file_stem(path);
    std::vector<Dividend> dividends;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string where = path + ":" + std::to_string(lineno);
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "spot") sc.spot = parse_double(value, where);
        else if (key == "strike") sc.strike = parse_double(value, where);
        else if (key == "rate") sc.rate = parse_double(value, where);
        else if (key == "vol") sc.vol = parse_double(value, where);
        else if (key == "kind") {
            if (value == "call") sc.kind = OptionKind::Call;
            else if (value == "put") sc.kind = OptionKind::Put;
            else throw std::invalid_argument(where + ": kind must be call or put");
        } else if (key == "policy") {
            if (value == "liquidator") sc.policy = DividendPolicy::Liquidator;
            else if (value == "survivor") sc.policy = DividendPolicy::Survivor;
            else throw std::invalid_argument(where + ": policy must be liquidator or survivor");
        } else if (key == "maturities") {
            sc.maturities.clear();
            for (const auto& tok : split_list(value))
                sc.maturities.push_back(parse_double(tok, where));
        } else if (key == "methods") {
            sc.methods.clear();
            for (const auto& tok : split_list(value)) {
                const auto m = method_from_token(tok);
                if (!m) throw std::invalid_argument(where + ": unknown method '" + tok + "'");
                sc.methods.push_back(*m);
            }
        } else if (key == "dividend") {
            const auto parts = split_list(value);
            if (parts.size() != 2)
                throw std::invalid_argument(where + ": dividend needs '<time> <amount>'");
            dividends.push_back({parse_double(parts[0], where), parse_double(parts[1], where)});
        } else if (key == "grid.smin") sc.grid.s_min = parse_double(value, where);
        else if (key == "grid.smax") sc.grid.s_max = parse_double(value, where);
        else if (key == "grid.ds") sc.grid.ds = parse_double(value, where);
        else if (key == "grid.dt") sc.grid.dt = parse_double(value, where);
        else if (key == "mc.paths") {
            const double v = parse_double(value, where);
            if (v < 1 || v != std::floor(v))
                throw std::invalid_argument(where + ": mc.paths must be a positive integer");
            sc.mc.paths = static_cast<std::size_t>(v);
        } else if (key == "mc.seed") {
            try {
                sc.mc.seed = std::stoull(value);
            } catch (const std::exception&) {
                throw std::invalid_argument(where + ": mc.seed must be an unsigned integer");
            }
        } else {
            throw std::invalid_argument(where + ": unknown key '" + key + "'");
        }
    }
    std::stable_sort(dividends.begin(), dividends.end(),
                     [](const Dividend& a, const Dividend& b) { return a.time < b.time; });
    try {
        sc.schedule = DividendSchedule(std::move(dividends));
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    return sc;
}

std::vector<ComparisonRow> run_scenario(const Scenario& sc) {
    sc.validate();
    const auto n = static_cast<long long>(sc.maturities.size());
    std::vector<ComparisonRow> rows(sc.maturities.size());
    std::vector<std::string> errors(sc.maturities.size());
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const double term = sc.maturities[idx];
        const MarketParams market = sc.market_at(term);
        ComparisonRow row;
        row.maturity = term;
        const char* at = "cn";
        try {
            row.benchmark = cn_price_european(sc.kind, market, sc.schedule, sc.policy,
                                              BoundaryVariant::SpotBC, sc.grid);
            for (PricingMethod method : sc.methods) {
                at = method_token(method);
                const double p =
                    price_by_method(method, sc.kind, market, sc.schedule, sc.policy);
                row.prices.push_back(p);
                row.rel_diffs.push_back(100.0 * (p - row.benchmark) / row.benchmark);
            }
            rows[idx] = std::move(row);
        } catch (const std::exception& e) {
            errors[idx] = "maturity " + fmt("%g", term) + ", method " +
                          std::string(at) + ": " + e.what();
        }
    }
    for (const auto& err : errors)
        if (!err.empty()) throw std::runtime_error(err);
    return rows;
}

std::string emit_csv(const std::vector<PricingMethod>& methods,
                     const std::vector<ComparisonRow>& rows, PrecisionMode mode) {
    if (rows.empty()) throw std::invalid_argument("no rows to emit");
    std::string out = "T,CN";
    for (PricingMethod m : methods) {
        out += ',';
        out += method_token(m);
        out += ',';
        out += method_token(m);
        out += "_reldiff";
    }
    out += '\n';
    for (const auto& row : rows) {
        out += fmt("%g", row.maturity);
        out += ',' + fmt_price(row.benchmark, mode);
        for (std::size_t j = 0; j < row.prices.size(); ++j) {
            out += ',' + fmt_price(row.prices[j], mode);
            out += ',' + fmt_rel(row.rel_diffs[j], mode);
        }
        out += '\n';
    }
    return out;
}

Fig1Series fig1_series(const GridSpec& grid) {
    const DividendSchedule schedule({{6.5, 70.0}});
    Fig1Series series;
    series.maturities = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    const auto n = static_cast<long long>(series.maturities.size());
    series.spot_bc.resize(n);
    series.strike_bc.resize(n);
    series.hybrid_bc.resize(n);
    series.american.resize(n);
    std::vector<std::string> errors(n);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const MarketParams market{100.0, 100.0, 0.06, 0.30, series.maturities[idx]};
        try {
            series.spot_bc[idx] =
                cn_price_european(OptionKind::Put, market, schedule,
                                  DividendPolicy::Liquidator, BoundaryVariant::SpotBC, grid);
            series.strike_bc[idx] =
                cn_price_european(OptionKind::Put, market, schedule,
                                  DividendPolicy::Liquidator, BoundaryVariant::StrikeBC, grid);
            series.hybrid_bc[idx] =
                cn_price_european(OptionKind::Put, market, schedule,
                                  DividendPolicy::Liquidator, BoundaryVariant::HybridBC, grid);
            series.american[idx] = psor_price_american_put(market, schedule,
                                                           DividendPolicy::Liquidator, grid);
        } catch (const std::exception& e) {
            errors[idx] = "maturity " + fmt("%g", series.maturities[idx]) + ": " + e.what();
        }
    }
    for (const auto& err : errors)
        if (!err.empty()) throw std::runtime_error(err);
    for (std::size_t i = 0; i < series.maturities.size(); ++i) {
        if (schedule.in_window(0.0, series.maturities[i]).empty()) {
            if (std::abs(series.strike_bc[i] - series.spot_bc[i]) > 1e-6 ||
                std::abs(series.hybrid_bc[i] - series.spot_bc[i]) > 1e-6)
                throw std::runtime_error(
                    "boundary closures diverge before the dividend date at maturity " +
                    fmt("%g", series.maturities[i]));
        }
        if (series.spot_bc[i] > series.american[i] + 1e-6)
            throw std::runtime_error(
                "spot-closure European put exceeds the American price at maturity " +
                fmt("%g", series.maturities[i]));
    }
    return series;
}

std::string emit_fig1_csv(const Fig1Series& series, PrecisionMode mode) {
    std::string out = "T,spot_bc,strike_bc,hybrid_bc,american\n";
    for (std::size_t i = 0; i < series.maturities.size(); ++i) {
        out += fmt("%g", series.maturities[i]);
        out += ',' + fmt_price(series.spot_bc[i], mode);
        out += ',' + fmt_price(series.strike_bc[i], mode);
        out += ',' + fmt_price(series.hybrid_bc[i], mode);
        out += ',' + fmt_price(series.american[i], mode);
        out += '\n';
    }
    return out;
}

}  // namespace divopt
