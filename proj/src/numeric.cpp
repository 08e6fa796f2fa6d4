#include "tiering/numeric.hpp"

#include <cmath>

namespace tiering {

namespace {

void check_rate(double r) {
    if (!(r >= 0.0 && r <= 1.0))
        throw std::domain_error("rate magnitude must lie in [0, 1]");
}

}  // namespace

double aggregate_supply(const MarketModel& model, double r) {
    check_rate(r);
    model.validate();
    return model.liquidity.expected_excess(model.policy.exemption_threshold) *
           model.cost.cdf(1.0 - r);
}

double aggregate_demand(const MarketModel& model, double r) {
    check_rate(r);
    model.validate();
    return model.liquidity.expected_shortfall(model.policy.exemption_threshold) *
           model.cost.cdf(r);
}

EquilibriumResult solve_equilibrium(const MarketModel& model, const SolverConfig& config) {
    model.validate();
    config.validate();

    double u = model.policy.exemption_threshold;
    double excess = model.liquidity.expected_excess(u);
    double shortfall = model.liquidity.expected_shortfall(u);

    EquilibriumResult res;
    res.method = Method::numeric;
    res.exemption_share = exemption_share(model);

    if (excess <= 0.0) {
        // No potential lenders: rate pinned at the zero tier.
        res.rate_magnitude = 0.0;
        res.market_rate = 0.0;
        return res;
    }
    if (shortfall <= 0.0) {
        // No potential borrowers: rate pinned at the deposit rate.
        res.rate_magnitude = 1.0;
        res.market_rate = -1.0;
        res.negative_share = negative_share_numeric(model, 1.0);
        return res;
    }

    auto imbalance = [&](double r) { return aggregate_supply(model, r) - aggregate_demand(model, r); };

    // S - D is continuous and non-increasing with S(0) > 0 > -D(1).
    // invariant: imbalance(lo) >= 0 >= imbalance(hi)
    double lo = 0.0, hi = 1.0;
    bool converged = false;
    for (int it = 0; it < config.max_iterations; ++it) {
        double mid = 0.5 * (lo + hi);
        if (imbalance(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= config.rate_tolerance) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw SolverError("solve_equilibrium: bisection did not converge", lo, hi);

    double r = 0.5 * (lo + hi);
    res.rate_magnitude = r;
    res.market_rate = -r;
    res.volume = aggregate_demand(model, r);
    res.negative_share = negative_share_numeric(model, r);
    res.residual_imbalance = std::fabs(imbalance(r));
    return res;
}

double negative_share_numeric(const MarketModel& model, double r_star) {
    check_rate(r_star);
    model.validate();
    double mean = model.liquidity.mean();
    if (mean <= 0.0)
        throw std::invalid_argument("negative_share_numeric: liquidity mean must be > 0");
    double excess = model.liquidity.expected_excess(model.policy.exemption_threshold);
    return excess * (1.0 - model.cost.cdf(1.0 - r_star)) / mean;
}

double burden(const MarketModel& model, double r_star) {
    return negative_share_numeric(model, r_star) * model.policy.penalty_rate;
}

}  // namespace tiering
