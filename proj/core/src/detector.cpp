#include "flowanon/detector.hpp"

#include <algorithm>
#include <cmath>

namespace flowanon {

namespace {

// Innovation sequence of the scalar predict/update recursion on the
// mean-removed series.
std::vector<double> run_filter(const std::vector<double>& values, const KalmanParams& p,
                               size_t limit) {
    std::vector<double> res;
    res.reserve(limit);
    if (limit == 0) return res;

    const double denom = std::max(1.0 - p.a * p.a, kVarianceFloor);
    double state = values[0] - p.mu;
    double cov = p.q / denom + p.r;  // stationary variance of the fitted model
    res.push_back(0.0);              // state initialized to the first observation

    for (size_t t = 1; t < limit; ++t) {
        double pred = p.a * state;
        double pred_cov = p.a * p.a * cov + p.q;
        double innovation = (values[t] - p.mu) - pred;
        double gain = pred_cov / (pred_cov + p.r);
        state = pred + gain * innovation;
        cov = (1.0 - gain) * pred_cov;
        res.push_back(innovation);
    }
    return res;
}

}  // namespace

KalmanParams calibrate(const std::vector<double>& series, int window,
                       double noise_split_rho) {
    if (window < 8) throw InsufficientData("calibration window must be >= 8");
    if (series.size() < static_cast<size_t>(window))
        throw InsufficientData("series shorter than calibration window");

    const size_t w = static_cast<size_t>(window);
    KalmanParams p;
    double sum = 0.0;
    for (size_t i = 0; i < w; ++i) sum += series[i];
    p.mu = sum / static_cast<double>(w);

    double var = 0.0, cov1 = 0.0;
    for (size_t i = 0; i < w; ++i) {
        double d = series[i] - p.mu;
        var += d * d;
        if (i + 1 < w) cov1 += d * (series[i + 1] - p.mu);
    }
    var /= static_cast<double>(w);

    if (var <= 0.0) {
        // Zero-variance calibration: constant background, any later change
        // alarms at every threshold.
        p.a = 0.0;
        p.q = kVarianceFloor;
        p.r = kVarianceFloor;
        p.s = kVarianceFloor;
        return p;
    }

    p.a = std::clamp(cov1 / static_cast<double>(w) / var, 0.0, 0.99);
    p.r = noise_split_rho * var;
    p.q = std::max(kVarianceFloor, (1.0 - p.a * p.a) * (1.0 - noise_split_rho) * var);

    auto innov = run_filter(series, p, w);
    double ss = 0.0;
    for (size_t t = 1; t < innov.size(); ++t) ss += innov[t] * innov[t];
    p.s = std::sqrt(ss / std::max<size_t>(innov.size() - 1, 1));
    if (p.s < kVarianceFloor) p.s = kVarianceFloor;
    return p;
}

ResidualSeries filter(const TimeSeries& series, const KalmanParams& params) {
    ResidualSeries out;
    out.metric = series.metric;
    out.params = params;
    out.residuals = run_filter(series.values, params, series.values.size());
    return out;
}

std::vector<bool> alarms(const ResidualSeries& residuals, double k) {
    const double threshold = k * residuals.params.s;
    std::vector<bool> out(residuals.residuals.size());
    for (size_t t = 0; t < out.size(); ++t)
        out[t] = std::fabs(residuals.residuals[t]) >= threshold;
    return out;
}

std::vector<bool> aggregate(const std::vector<std::vector<bool>>& per_metric) {
    if (per_metric.empty()) throw NoMetrics("no metrics to aggregate");
    std::vector<bool> out(per_metric.front().size(), false);
    for (const auto& m : per_metric)
        for (size_t t = 0; t < out.size() && t < m.size(); ++t)
            if (m[t]) out[t] = true;
    return out;
}

}  // namespace flowanon
