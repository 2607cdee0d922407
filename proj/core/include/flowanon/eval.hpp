#pragma once

#include <map>
#include <optional>

#include "flowanon/detector.hpp"

namespace flowanon {

struct EmptyClass : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoPositives : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoNegatives : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateCurve : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Label : uint8_t { Normal, Volume, DoS, Scan, Fluctuation, Unknown };

const char* to_string(Label l);
Label parse_label(const std::string& s);

/// One label per (interval, protocol).
struct GroundTruth {
    std::map<Protocol, std::vector<Label>> labels;

    Label at(Protocol p, size_t interval) const;
};

GroundTruth read_ground_truth(const std::string& path);
void write_ground_truth(const GroundTruth& truth, size_t num_intervals,
                        const std::string& path);

/// Evaluation classes; DoS and Scan are scored jointly.
enum class EvalClass : uint8_t { Volume, ScanDos, Fluctuation, Overall };

const char* to_string(EvalClass c);

/// True if `label` is a positive for evaluation class `cls`.
bool is_positive(Label label, EvalClass cls);

struct RocPoint {
    double k;  // threshold multiplier; 0 for anchors
    double fpr;
    double tpr;
};

struct RocCurve {
    std::vector<RocPoint> points;  // sorted by fpr, deduplicated
    double auc = 0.0;
};

/// Drops intervals labeled with an anomaly class other than the target
/// (Unknown included) and returns the kept original interval indexes.
/// Overall keeps everything.
std::vector<size_t> restrict_to_class(const std::vector<Label>& labels, EvalClass cls);

/// ROC over per-threshold aggregate alarm vectors.
/// alarms_per_threshold[i] corresponds to threshold_grid[i].
RocCurve roc(const std::vector<std::vector<bool>>& alarms_per_threshold,
             const std::vector<double>& threshold_grid,
             const std::vector<bool>& positives);

/// Area under a monotone piecewise cubic Hermite interpolant through
/// (fpr, tpr) points; expects (0,0) and (1,1) to be reachable after
/// deduplication.
double auc_pchip(const std::vector<RocPoint>& points);

struct UtilityCell {
    std::string scheme;
    Protocol protocol;
    EvalClass cls;
    RocCurve curve;
};

struct UtilityReport {
    std::vector<UtilityCell> cells;
};

struct EvalConfig {
    DetectorConfig detector;
};

/// Full pipeline: anonymize, compute the scheme's catalog, then per class and
/// protocol re-filter on the class-restricted series and score ROC/AUC.
/// Classes with no positive interval for a protocol are skipped.
UtilityReport evaluate_scheme(const Trace& trace, const AnonScheme& scheme,
                              const GroundTruth& truth, const EvalConfig& config = {});

/// Same scoring on a precomputed metric matrix (used by the staged CLI path).
UtilityReport evaluate_matrix(const MetricMatrix& matrix, const std::string& scheme_name,
                              const GroundTruth& truth, const EvalConfig& config = {});

void write_report(const UtilityReport& report, const std::string& auc_path,
                  const std::string& roc_path = "");

}  // namespace flowanon
