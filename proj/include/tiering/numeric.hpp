#pragma once

#include "tiering/model.hpp"

namespace tiering {

struct SolverConfig {
    double rate_tolerance = 1e-12;
    double imbalance_abs_tol = 1e-10;
    int max_iterations = 200;

    void validate() const {
        if (rate_tolerance <= 0.0 || imbalance_abs_tol <= 0.0)
            throw std::invalid_argument("SolverConfig: tolerances must be > 0");
        if (max_iterations < 1)
            throw std::invalid_argument("SolverConfig: max_iterations must be >= 1");
    }
};

struct SolverError : std::runtime_error {
    SolverError(const std::string& msg, double bracket_lo, double bracket_hi)
        : std::runtime_error(msg), bracket_lo(bracket_lo), bracket_hi(bracket_hi) {}
    double bracket_lo;
    double bracket_hi;
};

// Aggregate lending supply at rate magnitude r: E[max(x-u,0)] * P(c < 1-r).
double aggregate_supply(const MarketModel& model, double r);

// Aggregate borrowing demand at rate magnitude r: E[max(u-x,0)] * P(c < r).
double aggregate_demand(const MarketModel& model, double r);

// Clearing rate by bisection on the monotone excess supply S(r) - D(r),
// with corner handling when one side of the market is empty.
EquilibriumResult solve_equilibrium(const MarketModel& model, const SolverConfig& config = {});

// N at a given clearing rate: E[max(x-u,0)] * P(c >= 1-r*) / mean(x).
double negative_share_numeric(const MarketModel& model, double r_star);

// Negative remuneration actually paid per unit of aggregate liquidity.
// With u = 0 this is the no-tiering baseline of 1 in normalized units.
double burden(const MarketModel& model, double r_star);

}  // namespace tiering
