#include "geis/moderate.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "geis/errors.hpp"

namespace geis {

double ModerateSeq::constant() const { return std::exp(log_c); }

bool ModerateSeq::moderate(double a_max) const {
    if (slope > a_max) return false;
    return !(r_squared < 0.9 && curvature > 0.0);
}

ModerateSeq fit_moderate(const std::map<int, double>& norms) {
    if (norms.size() < 4) {
        throw InsufficientData(
            fmt::format("moderateness fit needs at least 4 indices, got {}", norms.size()));
    }
    ModerateSeq fit;
    std::vector<double> xs, ys;
    for (const auto& [n, value] : norms) {
        if (n < 1) throw DomainError(fmt::format("sequence index must be >= 1, got {}", n));
        if (!(value >= 0.0) || !std::isfinite(value)) {
            throw DomainError(fmt::format("norm at n = {} is not a finite non-negative number", n));
        }
        double v = value;
        if (v == 0.0) {
            v = std::numeric_limits<double>::min();
            fit.floored = true;
        }
        fit.indices.push_back(n);
        fit.values.push_back(value);
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(v));
    }
    const double k = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    fit.slope = sxy / sxx;
    fit.log_c = my - fit.slope * mx;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;

    double curv = 0.0;
    for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
        const double left = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
        const double right = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
        curv += right - left;
    }
    fit.curvature = curv / (k - 2.0);
    return fit;
}

double tail_slope(const ModerateSeq& fit) {
    const std::size_t k = fit.indices.size();
    const auto safe_log = [](double v) {
        return std::log(v > 0.0 ? v : std::numeric_limits<double>::min());
    };
    return (safe_log(fit.values[k - 1]) - safe_log(fit.values[k - 2])) /
           (std::log(static_cast<double>(fit.indices[k - 1])) -
            std::log(static_cast<double>(fit.indices[k - 2])));
}

}  // namespace geis
