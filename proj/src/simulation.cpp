#include "tiering/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace tiering {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform double in [0, 1) from the top 53 bits; avoids the
// implementation-defined std::uniform_real_distribution.
double u01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double draw_liquidity(const LiquidityDistribution& dist, std::mt19937_64& gen) {
    if (dist.kind() == LiquidityDistribution::Kind::Uniform)
        return dist.lo() + (dist.hi() - dist.lo()) * u01(gen);
    const auto& s = dist.samples();
    auto idx = static_cast<std::size_t>(u01(gen) * static_cast<double>(s.size()));
    return s[std::min(idx, s.size() - 1)];
}

}  // namespace

std::string to_string(RationedSide side) {
    switch (side) {
        case RationedSide::none: return "none";
        case RationedSide::lenders: return "lenders";
        case RationedSide::borrowers: return "borrowers";
    }
    return "unknown";
}

std::uint64_t child_seed(std::uint64_t seed, int replication) {
    return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(replication)));
}

std::vector<BankState> sample_population(int n, const MarketModel& model, std::uint64_t seed) {
    if (n < 2)
        throw std::domain_error("sample_population: need at least 2 banks");
    model.validate();

    std::mt19937_64 gen(seed);
    std::vector<BankState> banks(static_cast<std::size_t>(n));
    for (auto& bank : banks) {
        bank.liquidity = draw_liquidity(model.liquidity, gen);
        bank.cost = u01(gen);
    }
    return banks;
}

ClearingOutcome clear_market(std::vector<BankState>& banks, const TieringPolicy& policy) {
    if (banks.empty())
        throw std::domain_error("clear_market: empty population");
    policy.validate();

    const double u = policy.exemption_threshold;
    double lend_cap = 0.0, borrow_cap = 0.0;
    for (const auto& b : banks) {
        lend_cap += std::max(b.liquidity - u, 0.0);
        borrow_cap += std::max(u - b.liquidity, 0.0);
    }

    ClearingOutcome out;
    if (lend_cap == 0.0) {
        out.clearing_rate_magnitude = 0.0;  // no-lenders corner
        return out;
    }
    if (borrow_cap == 0.0) {
        out.clearing_rate_magnitude = 1.0;  // no-borrowers corner
        return out;
    }

    // Empirical supply and demand are step functions of r with jumps only at
    // the cost breakpoints {c_i, 1 - c_i}. A lender (x > u) supplies while
    // r < 1 - c; a borrower (x < u) demands while r > c.
    struct Event {
        double threshold, amount;
    };
    std::vector<Event> supply_drops, demand_adds;
    std::vector<double> pts{0.0, 1.0};
    pts.reserve(2 * banks.size() + 2);
    for (const auto& b : banks) {
        if (b.liquidity > u) supply_drops.push_back({1.0 - b.cost, b.liquidity - u});
        if (b.liquidity < u) demand_adds.push_back({b.cost, u - b.liquidity});
        if (b.cost > 0.0 && b.cost < 1.0) {
            pts.push_back(b.cost);
            pts.push_back(1.0 - b.cost);
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    auto by_threshold = [](const Event& a, const Event& b) { return a.threshold < b.threshold; };
    std::sort(supply_drops.begin(), supply_drops.end(), by_threshold);
    std::sort(demand_adds.begin(), demand_adds.end(), by_threshold);

    // One sweep over the breakpoints, maintaining running totals:
    //   at r = p:        S = sum over 1-c > p,  D = sum over c < p
    //   on (p, p_next):  S = sum over 1-c > p,  D = sum over c <= p
    // The imbalance S - D is non-increasing, so the set minimizing |S - D| is
    // a single interval; the clearing rate is its midpoint.
    struct Cand {
        double lo, hi, abs_imbalance;
    };
    std::vector<Cand> cands;
    cands.reserve(2 * pts.size());
    double supply = lend_cap, demand = 0.0;
    std::size_t si = 0, di = 0;
    for (std::size_t j = 0; j < pts.size(); ++j) {
        double p = pts[j];
        while (si < supply_drops.size() && supply_drops[si].threshold <= p)
            supply -= supply_drops[si++].amount;
        // demand currently counts c < p
        cands.push_back({p, p, std::fabs(supply - demand)});
        while (di < demand_adds.size() && demand_adds[di].threshold <= p)
            demand += demand_adds[di++].amount;  // now counts c <= p
        if (j + 1 < pts.size()) cands.push_back({p, pts[j + 1], std::fabs(supply - demand)});
    }

    double best = cands.front().abs_imbalance;
    for (const auto& c : cands) best = std::min(best, c.abs_imbalance);
    double tol = 1e-12 * (lend_cap + borrow_cap + 1.0);

    std::size_t first = 0, last = 0;
    bool found = false;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        if (cands[i].abs_imbalance <= best + tol) {
            if (!found) first = i;
            last = i;
            found = true;
        }
    }
    double lo = cands[first].lo;
    double hi = cands[last].hi;
    double rate = 0.5 * (lo + hi);
    out.clearing_rate_magnitude = rate;
    out.indifference_interval_width = hi - lo;

    // Willing quantities at the clearing rate, strict inequalities.
    double willing_lend = 0.0, willing_borrow = 0.0;
    for (const auto& b : banks) {
        if (b.liquidity > u && b.cost < 1.0 - rate) willing_lend += b.liquidity - u;
        if (b.liquidity < u && b.cost < rate) willing_borrow += u - b.liquidity;
    }

    double traded = std::min(willing_lend, willing_borrow);
    out.total_traded = traded;
    if (traded > 0.0) {
        double lend_fill = traded / willing_lend;
        double borrow_fill = traded / willing_borrow;
        for (auto& b : banks) {
            if (b.liquidity > u && b.cost < 1.0 - rate)
                b.lent = lend_fill * (b.liquidity - u);
            else if (b.liquidity < u && b.cost < rate)
                b.borrowed = borrow_fill * (u - b.liquidity);
        }
        double rel = 1e-12 * std::max(willing_lend, willing_borrow);
        if (willing_lend > willing_borrow + rel) {
            out.rationed_side = RationedSide::lenders;
            out.rationing_factor = lend_fill;
        } else if (willing_borrow > willing_lend + rel) {
            out.rationed_side = RationedSide::borrowers;
            out.rationing_factor = borrow_fill;
        }
    }
    return out;
}

std::vector<double> afternoon_positions(const std::vector<BankState>& banks) {
    std::vector<double> positions;
    positions.reserve(banks.size());
    for (const auto& b : banks) positions.push_back(b.afternoon_position());
    return positions;
}

RealizedMetrics realized_metrics(const std::vector<BankState>& banks, const TieringPolicy& policy) {
    if (banks.empty())
        throw std::domain_error("realized_metrics: empty population");
    policy.validate();

    const double u = policy.exemption_threshold;
    double total_lent = 0.0, total_liquidity = 0.0, penalized = 0.0;
    for (const auto& b : banks) {
        total_lent += b.lent;
        total_liquidity += b.liquidity;
        penalized += std::max(b.afternoon_position() - u, 0.0);
    }
    if (total_liquidity <= 0.0)
        throw std::domain_error("realized_metrics: degenerate population with zero liquidity");

    RealizedMetrics m;
    m.volume_per_bank = total_lent / static_cast<double>(banks.size());
    m.negative_share = penalized / total_liquidity;
    m.burden = m.negative_share * policy.penalty_rate;
    return m;
}

SimSummary run_replications(const SimConfig& config) {
    config.validate();

    SimSummary summary;
    summary.records.reserve(static_cast<std::size_t>(config.replications));
    for (int k = 0; k < config.replications; ++k) {
        auto banks = sample_population(config.population, config.model, child_seed(config.seed, k));
        auto outcome = clear_market(banks, config.model.policy);
        auto metrics = realized_metrics(banks, config.model.policy);

        ReplicationRecord rec;
        rec.clearing_rate = outcome.clearing_rate_magnitude;
        rec.volume_per_bank = metrics.volume_per_bank;
        rec.negative_share = metrics.negative_share;
        rec.burden = metrics.burden;
        summary.records.push_back(rec);
    }

    auto stat = [&](auto field) {
        SummaryStat s;
        double n = static_cast<double>(summary.records.size());
        for (const auto& r : summary.records) s.mean += field(r);
        s.mean /= n;
        if (summary.records.size() > 1) {
            double ss = 0.0;
            for (const auto& r : summary.records) {
                double d = field(r) - s.mean;
                ss += d * d;
            }
            s.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
        }
        return s;
    };
    summary.clearing_rate = stat([](const ReplicationRecord& r) { return r.clearing_rate; });
    summary.volume_per_bank = stat([](const ReplicationRecord& r) { return r.volume_per_bank; });
    summary.negative_share = stat([](const ReplicationRecord& r) { return r.negative_share; });
    summary.burden = stat([](const ReplicationRecord& r) { return r.burden; });
    return summary;
}

}  // namespace tiering
