#pragma once

#include <map>
#include <string>
#include <vector>

#include "tiering/model.hpp"

namespace tiering {

enum class RateType { secured, unsecured };

std::string to_string(RateType t);
RateType rate_type_from_string(const std::string& s);

// One observed (currency, period) record: exemption share against the raw
// overnight rate and the central bank's negative remuneration rate.
struct MarketObservation {
    std::string currency;
    std::string period;
    double exemption_share = 0.0;
    double observed_rate_pct = 0.0;
    double remuneration_rate_pct = -1.0;
    RateType rate_type = RateType::unsecured;
};

struct CsvError : std::runtime_error {
    CsvError(const std::string& msg, std::size_t line)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line(line) {}
    explicit CsvError(const std::string& msg) : std::runtime_error(msg), line(0) {}
    std::size_t line;  // 1-based; 0 when not row-specific
};

// Observed rate divided by the degree of negative remuneration, making it
// comparable to the model's -r*.
double standardize_rate(double observed_rate_pct, double remuneration_rate_pct);

// Schema: currency,period,exemption_share,observed_rate_pct,remuneration_rate_pct,rate_type
std::vector<MarketObservation> load_observations(const std::string& path);

struct ResidualRow {
    MarketObservation observation;
    double standardized_rate = 0.0;
    double model_rate = 0.0;  // -r* at u = threshold_from_share(E)
    double residual = 0.0;    // standardized - model
    bool corner = false;      // E outside the support's interior range
};

struct ResidualReport {
    std::vector<ResidualRow> rows;
    double mean_abs_residual = 0.0;
    std::map<std::string, double> mean_residual_by_currency;
};

ResidualReport residual_report(const std::vector<MarketObservation>& observations,
                               const LiquidityDistribution& liquidity);

struct SupportFit {
    double lo = 0.0;
    double hi = 0.0;
    double loss = 0.0;  // mean squared residual at the fitted support
    bool degenerate = false;
};

// Fits the half-width of a uniform(m-w, m+w) liquidity support, m fixed, by
// grid search over w in (0, m] refined by golden-section. When the loss is
// flat across widths the widest minimizer is reported and flagged.
SupportFit fit_support_bounds(const std::vector<MarketObservation>& observations,
                              double symmetric_about, int grid_points = 1000);

}  // namespace tiering
