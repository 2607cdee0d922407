#pragma once

#include <vector>

#include "flowanon/metrics.hpp"

namespace flowanon {

struct InsufficientData : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoMetrics : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Scalar measurement-corrected AR(1) + noise model fitted on a calibration
/// window.
struct KalmanParams {
    double a = 0.0;   // AR(1) coefficient, clipped to [0, 0.99]
    double q = 0.0;   // process-noise variance
    double r = 0.0;   // measurement-noise variance
    double mu = 0.0;  // calibration-window mean
    double s = 0.0;   // residual standard deviation estimate
};

struct ResidualSeries {
    MetricId metric;
    std::vector<double> residuals;
    KalmanParams params;
};

struct DetectorConfig {
    int calibration_window = 96;   // one simulated day of 15-minute intervals
    double noise_split_rho = 0.5;  // share of window variance assigned to r
    std::vector<double> threshold_grid = {0.2, 0.4, 0.6, 0.8, 1.0, 1.2,
                                          1.4, 1.6, 1.8, 2.0, 2.2, 2.4};
};

constexpr double kVarianceFloor = 1e-9;

KalmanParams calibrate(const std::vector<double>& series, int window,
                       double noise_split_rho = 0.5);

ResidualSeries filter(const TimeSeries& series, const KalmanParams& params);

/// alarm_t = (|residual_t| >= k * params.s); ties count as alarms.
std::vector<bool> alarms(const ResidualSeries& residuals, double k);

/// Interval-wise OR over the given per-metric alarm vectors.
std::vector<bool> aggregate(const std::vector<std::vector<bool>>& per_metric);

}  // namespace flowanon
