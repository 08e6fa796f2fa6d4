#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace tiering {

// Rates are normalized so the deposit (penalty) tier pays -1 and the exempt
// tier pays 0. Real-world percent rates enter only through market_data.

struct TieringPolicy {
    double exemption_threshold = 0.0;  // u, in units of normalized liquidity
    double penalty_rate = 1.0;         // magnitude of the negative tier

    void validate() const {
        if (exemption_threshold < 0.0)
            throw std::invalid_argument("TieringPolicy: exemption_threshold must be >= 0");
        if (penalty_rate <= 0.0)
            throw std::invalid_argument("TieringPolicy: penalty_rate must be > 0");
    }
};

// Morning excess-liquidity distribution. Uniform supports the closed forms;
// empirical supports calibrated samples fed to the numeric solver.
class LiquidityDistribution {
public:
    enum class Kind { Uniform, Empirical };

    static LiquidityDistribution uniform(double lo, double hi) {
        if (lo < 0.0 || !(lo < hi))
            throw std::invalid_argument("LiquidityDistribution: need 0 <= lo < hi");
        LiquidityDistribution d;
        d.kind_ = Kind::Uniform;
        d.lo_ = lo;
        d.hi_ = hi;
        return d;
    }

    static LiquidityDistribution empirical(std::vector<double> samples) {
        if (samples.empty())
            throw std::invalid_argument("LiquidityDistribution: empirical sample is empty");
        for (double v : samples)
            if (v < 0.0)
                throw std::invalid_argument("LiquidityDistribution: negative liquidity sample");
        std::sort(samples.begin(), samples.end());
        LiquidityDistribution d;
        d.kind_ = Kind::Empirical;
        d.samples_ = std::move(samples);
        if (d.mean() <= 0.0)
            throw std::invalid_argument("LiquidityDistribution: mean must be > 0");
        return d;
    }

    Kind kind() const { return kind_; }
    double lo() const { return kind_ == Kind::Uniform ? lo_ : samples_.front(); }
    double hi() const { return kind_ == Kind::Uniform ? hi_ : samples_.back(); }
    const std::vector<double>& samples() const { return samples_; }

    double mean() const;

    // E[max(x - u, 0)]: aggregate lending capacity per bank.
    double expected_excess(double threshold) const;

    // E[max(u - x, 0)]: aggregate borrowing capacity per bank.
    double expected_shortfall(double threshold) const;

private:
    LiquidityDistribution() = default;

    Kind kind_ = Kind::Uniform;
    double lo_ = 0.0;
    double hi_ = 1.0;
    std::vector<double> samples_;
};

// Trading-cost distribution. Fixed to uniform(0,1) for now; the type exists
// so a later generalization is additive.
struct CostDistribution {
    // P(c < t)
    double cdf(double t) const { return std::clamp(t, 0.0, 1.0); }
};

struct MarketModel {
    TieringPolicy policy;
    LiquidityDistribution liquidity = LiquidityDistribution::uniform(0.0, 1.0);
    CostDistribution cost;

    void validate() const { policy.validate(); }
};

enum class Method { closed_form, numeric, monte_carlo };

std::string to_string(Method m);

struct EquilibriumResult {
    double rate_magnitude = 0.0;  // r*; market rate is -r*
    double market_rate = 0.0;     // -rate_magnitude
    double volume = 0.0;          // V, per unit mass of banks
    double negative_share = 0.0;  // N
    double exemption_share = 0.0; // E
    Method method = Method::closed_form;
    double residual_imbalance = 0.0;  // |supply - demand| at the returned rate
};

// E = u / mean(x); equals 2u for uniform(0,1) liquidity.
double exemption_share(const MarketModel& model);

// Inverse of exemption_share: u = E * mean(x).
double threshold_from_share(double share, const LiquidityDistribution& liquidity);

}  // namespace tiering
