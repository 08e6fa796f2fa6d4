#pragma once

#include <cstdint>
#include <vector>

#include "tiering/model.hpp"

namespace tiering {

struct BankState {
    double liquidity = 0.0;  // morning position x_i
    double cost = 0.0;       // trading cost c_i
    double lent = 0.0;
    double borrowed = 0.0;

    double afternoon_position() const { return liquidity - lent + borrowed; }
};

enum class RationedSide { none, lenders, borrowers };

std::string to_string(RationedSide side);

struct ClearingOutcome {
    double clearing_rate_magnitude = 0.0;
    double total_traded = 0.0;
    RationedSide rationed_side = RationedSide::none;
    double rationing_factor = 1.0;
    double indifference_interval_width = 0.0;
};

struct SimConfig {
    int population = 2;
    int replications = 1;
    std::uint64_t seed = 0;
    MarketModel model;

    void validate() const {
        if (population < 2)
            throw std::domain_error("SimConfig: population must be >= 2");
        if (replications < 1)
            throw std::domain_error("SimConfig: replications must be >= 1");
        model.validate();
    }
};

struct ReplicationRecord {
    double clearing_rate = 0.0;
    double volume_per_bank = 0.0;
    double negative_share = 0.0;
    double burden = 0.0;
};

struct SummaryStat {
    double mean = 0.0;
    double std_error = 0.0;
};

struct SimSummary {
    SummaryStat clearing_rate;
    SummaryStat volume_per_bank;
    SummaryStat negative_share;
    SummaryStat burden;
    std::vector<ReplicationRecord> records;
};

struct RealizedMetrics {
    double volume_per_bank = 0.0;
    double negative_share = 0.0;
    double burden = 0.0;
};

// Deterministic child-seed derivation so replications are independent and
// order-insensitive.
std::uint64_t child_seed(std::uint64_t seed, int replication);

// Draw n banks with independent liquidity and cost; deterministic in
// (n, model, seed).
std::vector<BankState> sample_population(int n, const MarketModel& model, std::uint64_t seed);

// Finite-N clearing: picks the rate as the midpoint of the interval minimizing
// |S_n(r) - D_n(r)| over the cost breakpoints, then rations the long side
// pro-rata and fills lent/borrowed in place. Indifferent banks (equality in
// the decision rule) do not trade.
ClearingOutcome clear_market(std::vector<BankState>& banks, const TieringPolicy& policy);

std::vector<double> afternoon_positions(const std::vector<BankState>& banks);

RealizedMetrics realized_metrics(const std::vector<BankState>& banks, const TieringPolicy& policy);

SimSummary run_replications(const SimConfig& config);

}  // namespace tiering
