#include "tiering/analytic.hpp"

#include <cmath>

namespace tiering {

namespace {

void check_unit_interval(double u) {
    if (!(u >= 0.0 && u <= 1.0))
        throw std::domain_error("threshold must lie in [0, 1] for the standard closed forms");
}

}  // namespace

double rate_standard(double threshold) {
    check_unit_interval(threshold);
    double a = (1.0 - threshold) * (1.0 - threshold);
    double b = threshold * threshold;
    if (a + b == 0.0) return 0.5;  // unreachable on [0,1], kept for safety
    return a / (a + b);
}

double volume_standard(double threshold) {
    check_unit_interval(threshold);
    double b = threshold * threshold;
    return 0.5 * b * rate_standard(threshold);
}

double negative_share_standard(double threshold) {
    check_unit_interval(threshold);
    double a = (1.0 - threshold) * (1.0 - threshold);
    return a * rate_standard(threshold);
}

EquilibriumResult equilibrium_shifted(double threshold, double lo, double hi) {
    if (lo < 0.0 || !(lo < hi))
        throw std::domain_error("equilibrium_shifted: need 0 <= lo < hi");

    double mean = 0.5 * (lo + hi);
    EquilibriumResult res;
    res.method = Method::closed_form;
    res.exemption_share = threshold / mean;

    if (threshold >= hi) {
        // Everything exempt: no lenders, market rate pinned at the zero tier.
        res.rate_magnitude = 0.0;
    } else if (threshold <= lo) {
        // No borrowers: market rate pinned at the deposit rate.
        res.rate_magnitude = 1.0;
        res.negative_share = (mean - threshold) / mean;
    } else {
        double width = hi - lo;
        double excess = (hi - threshold) * (hi - threshold) / (2.0 * width);     // E[max(x-u,0)]
        double shortfall = (threshold - lo) * (threshold - lo) / (2.0 * width);  // E[max(u-x,0)]
        double r = excess / (excess + shortfall);
        res.rate_magnitude = r;
        res.volume = shortfall * r;
        res.negative_share = excess * r / mean;
    }
    res.market_rate = -res.rate_magnitude;
    return res;
}

namespace {

void check_step(double threshold, double lo, double hi, double step) {
    if (step <= 0.0)
        throw std::domain_error("sensitivity: step must be > 0");
    if (threshold - step < lo || threshold + step > hi)
        throw std::domain_error("sensitivity: central difference leaves [lo, hi]");
}

}  // namespace

double rate_sensitivity(double threshold, double lo, double hi, double step) {
    check_step(threshold, lo, hi, step);
    double r_plus = equilibrium_shifted(threshold + step, lo, hi).rate_magnitude;
    double r_minus = equilibrium_shifted(threshold - step, lo, hi).rate_magnitude;
    double dr_du = (r_plus - r_minus) / (2.0 * step);
    // E = u / mean, so du = mean * dE; -r* flips the sign.
    return -dr_du * 0.5 * (lo + hi);
}

double volume_sensitivity(double threshold, double lo, double hi, double step) {
    check_step(threshold, lo, hi, step);
    double v_plus = equilibrium_shifted(threshold + step, lo, hi).volume;
    double v_minus = equilibrium_shifted(threshold - step, lo, hi).volume;
    return (v_plus - v_minus) / (2.0 * step) * 0.5 * (lo + hi);
}

}  // namespace tiering
