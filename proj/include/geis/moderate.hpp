#pragma once

#include <map>
#include <vector>

namespace geis {

/**
 * Log-log least-squares fit ||x_n|| ~ C n^a over the sampled indices.
 * `floored` is set when some norm was zero and replaced by the smallest
 * positive double before taking logarithms.
 */
struct ModerateSeq {
    std::vector<int> indices;
    std::vector<double> values;
    double slope = 0.0;      // a
    double log_c = 0.0;      // log C
    double r_squared = 1.0;  // coefficient of determination of the fit
    bool floored = false;
    /// Mean second difference of log ||x_n|| against log n; positive for convex growth.
    double curvature = 0.0;

    double constant() const;
    /// Non-moderate when a > a_max, or when the fit is poor (R^2 < 0.9) and the
    /// log-log curve bends upwards.
    bool moderate(double a_max = 50.0) const;
};

/// Throws InsufficientData for fewer than 4 indices.
ModerateSeq fit_moderate(const std::map<int, double>& norms);

/// Slope of the last two points in log-log coordinates.
double tail_slope(const ModerateSeq& fit);

}  // namespace geis
