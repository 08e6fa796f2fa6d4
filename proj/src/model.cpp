#include "tiering/model.hpp"

#include <numeric>

namespace tiering {

double LiquidityDistribution::mean() const {
    if (kind_ == Kind::Uniform) return 0.5 * (lo_ + hi_);
    double sum = std::accumulate(samples_.begin(), samples_.end(), 0.0);
    return sum / static_cast<double>(samples_.size());
}

double LiquidityDistribution::expected_excess(double threshold) const {
    if (kind_ == Kind::Uniform) {
        if (threshold >= hi_) return 0.0;
        if (threshold <= lo_) return mean() - threshold;
        double d = hi_ - threshold;
        return d * d / (2.0 * (hi_ - lo_));
    }
    double sum = 0.0;
    for (double x : samples_) sum += std::max(x - threshold, 0.0);
    return sum / static_cast<double>(samples_.size());
}

double LiquidityDistribution::expected_shortfall(double threshold) const {
    if (kind_ == Kind::Uniform) {
        if (threshold <= lo_) return 0.0;
        if (threshold >= hi_) return threshold - mean();
        double d = threshold - lo_;
        return d * d / (2.0 * (hi_ - lo_));
    }
    double sum = 0.0;
    for (double x : samples_) sum += std::max(threshold - x, 0.0);
    return sum / static_cast<double>(samples_.size());
}

std::string to_string(Method m) {
    switch (m) {
        case Method::closed_form: return "closed_form";
        case Method::numeric: return "numeric";
        case Method::monte_carlo: return "monte_carlo";
    }
    return "unknown";
}

double exemption_share(const MarketModel& model) {
    model.validate();
    double m = model.liquidity.mean();
    if (m <= 0.0)
        throw std::invalid_argument("exemption_share: liquidity mean must be > 0");
    return model.policy.exemption_threshold / m;
}

double threshold_from_share(double share, const LiquidityDistribution& liquidity) {
    if (share < 0.0)
        throw std::domain_error("threshold_from_share: exemption share must be >= 0");
    return share * liquidity.mean();
}

}  // namespace tiering
