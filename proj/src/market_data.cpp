#include "tiering/market_data.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "tiering/analytic.hpp"
#include "tiering/numeric.hpp"

namespace tiering {

namespace {

const std::vector<std::string> kColumns = {
    "currency", "period", "exemption_share",
    "observed_rate_pct", "remuneration_rate_pct", "rate_type"};

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

double parse_number(const std::string& s, const std::string& column, std::size_t line) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw CsvError("unparsable number '" + s + "' in column " + column, line);
    }
}

double model_rate_at(double threshold, const LiquidityDistribution& liquidity) {
    if (liquidity.kind() == LiquidityDistribution::Kind::Uniform)
        return equilibrium_shifted(threshold, liquidity.lo(), liquidity.hi()).market_rate;
    MarketModel model{TieringPolicy{threshold, 1.0}, liquidity, CostDistribution{}};
    return solve_equilibrium(model).market_rate;
}

}  // namespace

std::string to_string(RateType t) {
    return t == RateType::secured ? "secured" : "unsecured";
}

RateType rate_type_from_string(const std::string& s) {
    if (s == "secured") return RateType::secured;
    if (s == "unsecured") return RateType::unsecured;
    throw std::invalid_argument("unknown rate_type '" + s + "'");
}

double standardize_rate(double observed_rate_pct, double remuneration_rate_pct) {
    if (remuneration_rate_pct >= 0.0)
        throw std::domain_error("standardize_rate: remuneration rate must be negative");
    return observed_rate_pct / std::fabs(remuneration_rate_pct);
}

std::vector<MarketObservation> load_observations(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CsvError("cannot open observation file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw CsvError("empty observation file: " + path);

    auto header = split_row(line);
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < header.size(); ++i) index[header[i]] = i;
    for (const auto& col : kColumns)
        if (!index.count(col))
            throw CsvError("missing column '" + col + "' in header", 1);

    std::vector<MarketObservation> observations;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_row(line);
        if (fields.size() < header.size())
            throw CsvError("expected " + std::to_string(header.size()) + " fields, got " +
                               std::to_string(fields.size()),
                           line_no);

        MarketObservation obs;
        obs.currency = fields[index["currency"]];
        obs.period = fields[index["period"]];
        obs.exemption_share =
            parse_number(fields[index["exemption_share"]], "exemption_share", line_no);
        obs.observed_rate_pct =
            parse_number(fields[index["observed_rate_pct"]], "observed_rate_pct", line_no);
        obs.remuneration_rate_pct =
            parse_number(fields[index["remuneration_rate_pct"]], "remuneration_rate_pct", line_no);
        try {
            obs.rate_type = rate_type_from_string(fields[index["rate_type"]]);
        } catch (const std::exception& e) {
            throw CsvError(e.what(), line_no);
        }

        if (obs.exemption_share < 0.0)
            throw CsvError("exemption_share must be >= 0", line_no);
        if (obs.remuneration_rate_pct >= 0.0)
            throw CsvError("remuneration_rate_pct must be negative", line_no);
        observations.push_back(std::move(obs));
    }
    if (observations.empty())
        throw CsvError("observation file has a header but no rows: " + path);
    return observations;
}

ResidualReport residual_report(const std::vector<MarketObservation>& observations,
                               const LiquidityDistribution& liquidity) {
    if (observations.empty())
        throw std::domain_error("residual_report: no observations");

    ResidualReport report;
    std::map<std::string, std::pair<double, std::size_t>> by_currency;
    for (const auto& obs : observations) {
        ResidualRow row;
        row.observation = obs;
        row.standardized_rate = standardize_rate(obs.observed_rate_pct, obs.remuneration_rate_pct);
        double u = threshold_from_share(obs.exemption_share, liquidity);
        row.model_rate = model_rate_at(u, liquidity);
        row.corner = u < liquidity.lo() || u > liquidity.hi();
        row.residual = row.standardized_rate - row.model_rate;

        report.mean_abs_residual += std::fabs(row.residual);
        auto& acc = by_currency[obs.currency];
        acc.first += row.residual;
        acc.second += 1;
        report.rows.push_back(std::move(row));
    }
    report.mean_abs_residual /= static_cast<double>(report.rows.size());
    for (const auto& [currency, acc] : by_currency)
        report.mean_residual_by_currency[currency] = acc.first / static_cast<double>(acc.second);
    return report;
}

SupportFit fit_support_bounds(const std::vector<MarketObservation>& observations,
                              double symmetric_about, int grid_points) {
    if (observations.empty())
        throw std::domain_error("fit_support_bounds: no observations");
    if (symmetric_about <= 0.0)
        throw std::domain_error("fit_support_bounds: center must be > 0");
    if (grid_points < 2)
        throw std::domain_error("fit_support_bounds: need at least 2 grid points");

    const double m = symmetric_about;
    auto loss = [&](double w) {
        double lo = m - w, hi = m + w;
        double sum = 0.0;
        for (const auto& obs : observations) {
            double u = obs.exemption_share * m;  // mean of the symmetric support is m
            double model = equilibrium_shifted(u, lo, hi).market_rate;
            double r = standardize_rate(obs.observed_rate_pct, obs.remuneration_rate_pct) - model;
            sum += r * r;
        }
        return sum / static_cast<double>(observations.size());
    };

    std::vector<double> losses(static_cast<std::size_t>(grid_points));
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = 0;
    for (int j = 1; j <= grid_points; ++j) {
        double w = m * static_cast<double>(j) / static_cast<double>(grid_points);
        losses[static_cast<std::size_t>(j - 1)] = loss(w);
        if (losses[static_cast<std::size_t>(j - 1)] < best) {
            best = losses[static_cast<std::size_t>(j - 1)];
            best_j = static_cast<std::size_t>(j - 1);
        }
    }

    // Flat loss across widths: the data cannot identify the support.
    std::size_t near_min = 0;
    std::size_t widest = best_j;
    for (std::size_t j = 0; j < losses.size(); ++j) {
        if (losses[j] <= best + 1e-14 * (1.0 + best)) {
            ++near_min;
            widest = j;
        }
    }
    SupportFit fit;
    if (near_min >= losses.size() / 10 + 2) {
        double w = m * static_cast<double>(widest + 1) / static_cast<double>(grid_points);
        fit.lo = m - w;
        fit.hi = m + w;
        fit.loss = losses[widest];
        fit.degenerate = true;
        return fit;
    }

    // Golden-section refinement around the best grid point.
    double step = m / static_cast<double>(grid_points);
    double a = std::max(step * 0.5, m * static_cast<double>(best_j + 1) / grid_points - step);
    double b = std::min(m, m * static_cast<double>(best_j + 1) / grid_points + step);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = loss(x1), f2 = loss(x2);
    while (b - a > 1e-12) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = loss(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = loss(x2);
        }
    }
    double w = 0.5 * (a + b);
    fit.lo = m - w;
    fit.hi = m + w;
    fit.loss = loss(w);
    return fit;
}

}  // namespace tiering
