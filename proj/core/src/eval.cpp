#include "flowanon/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace flowanon {

const char* to_string(Label l) {
    switch (l) {
        case Label::Normal: return "normal";
        case Label::Volume: return "volume";
        case Label::DoS: return "dos";
        case Label::Scan: return "scan";
        case Label::Fluctuation: return "fluctuation";
        case Label::Unknown: return "unknown";
    }
    return "?";
}

Label parse_label(const std::string& s) {
    if (s == "normal") return Label::Normal;
    if (s == "volume") return Label::Volume;
    if (s == "dos") return Label::DoS;
    if (s == "scan") return Label::Scan;
    if (s == "fluctuation") return Label::Fluctuation;
    if (s == "unknown") return Label::Unknown;
    throw ParseError("bad label: " + s);
}

const char* to_string(EvalClass c) {
    switch (c) {
        case EvalClass::Volume: return "volume";
        case EvalClass::ScanDos: return "scan_dos";
        case EvalClass::Fluctuation: return "fluctuation";
        case EvalClass::Overall: return "overall";
    }
    return "?";
}

Label GroundTruth::at(Protocol p, size_t interval) const {
    auto it = labels.find(p);
    if (it == labels.end() || interval >= it->second.size()) return Label::Normal;
    return it->second[interval];
}

GroundTruth read_ground_truth(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "interval,protocol,label")
        throw ParseError("bad ground-truth header", 1);
    GroundTruth truth;
    long row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string iv, proto, label;
        if (!std::getline(ls, iv, ',') || !std::getline(ls, proto, ',') ||
            !std::getline(ls, label))
            throw ParseError("expected interval,protocol,label", row);
        size_t interval = std::stoul(iv);
        Protocol p;
        if (proto == "TCP") p = Protocol::TCP;
        else if (proto == "UDP") p = Protocol::UDP;
        else throw ParseError("bad protocol: " + proto, row);
        auto& vec = truth.labels[p];
        if (vec.size() <= interval) vec.resize(interval + 1, Label::Normal);
        vec[interval] = parse_label(label);
    }
    return truth;
}

void write_ground_truth(const GroundTruth& truth, size_t num_intervals,
                        const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "interval,protocol,label\n";
    for (Protocol p : {Protocol::TCP, Protocol::UDP})
        for (size_t iv = 0; iv < num_intervals; ++iv)
            out << iv << ',' << to_string(p) << ',' << to_string(truth.at(p, iv)) << '\n';
    if (!out) throw IoError("write failed for " + path);
}

bool is_positive(Label label, EvalClass cls) {
    switch (cls) {
        case EvalClass::Volume: return label == Label::Volume;
        case EvalClass::ScanDos: return label == Label::DoS || label == Label::Scan;
        case EvalClass::Fluctuation: return label == Label::Fluctuation;
        case EvalClass::Overall: return label != Label::Normal;
    }
    return false;
}

std::vector<size_t> restrict_to_class(const std::vector<Label>& labels, EvalClass cls) {
    std::vector<size_t> kept;
    kept.reserve(labels.size());
    for (size_t i = 0; i < labels.size(); ++i) {
        if (cls == EvalClass::Overall || labels[i] == Label::Normal ||
            is_positive(labels[i], cls))
            kept.push_back(i);
    }
    return kept;
}

RocCurve roc(const std::vector<std::vector<bool>>& alarms_per_threshold,
             const std::vector<double>& threshold_grid,
             const std::vector<bool>& positives) {
    size_t pos = 0, neg = 0;
    for (bool b : positives) (b ? pos : neg)++;
    if (pos == 0) throw NoPositives("no positive intervals");
    if (neg == 0) throw NoNegatives("no negative intervals");

    RocCurve curve;
    curve.points.push_back({0.0, 0.0, 0.0});
    curve.points.push_back({0.0, 1.0, 1.0});
    for (size_t i = 0; i < alarms_per_threshold.size(); ++i) {
        const auto& alarm = alarms_per_threshold[i];
        size_t tp = 0, fp = 0;
        for (size_t t = 0; t < positives.size() && t < alarm.size(); ++t) {
            if (!alarm[t]) continue;
            (positives[t] ? tp : fp)++;
        }
        curve.points.push_back({i < threshold_grid.size() ? threshold_grid[i] : 0.0,
                                static_cast<double>(fp) / static_cast<double>(neg),
                                static_cast<double>(tp) / static_cast<double>(pos)});
    }
    std::sort(curve.points.begin(), curve.points.end(),
              [](const RocPoint& a, const RocPoint& b) {
                  return a.fpr != b.fpr ? a.fpr < b.fpr : a.tpr < b.tpr;
              });
    // One point per fpr value, keeping the maximum tpr.
    std::vector<RocPoint> dedup;
    for (const auto& p : curve.points) {
        if (!dedup.empty() && dedup.back().fpr == p.fpr) dedup.back() = p;
        else dedup.push_back(p);
    }
    curve.points = std::move(dedup);
    curve.auc = auc_pchip(curve.points);
    return curve;
}

double auc_pchip(const std::vector<RocPoint>& points) {
    std::vector<double> x, y;
    for (const auto& p : points) {
        if (!x.empty() && p.fpr == x.back()) {
            y.back() = std::max(y.back(), p.tpr);
            continue;
        }
        x.push_back(p.fpr);
        y.push_back(p.tpr);
    }
    const size_t n = x.size();
    if (n < 2) throw DegenerateCurve("need at least 2 distinct fpr values");

    std::vector<double> h(n - 1), delta(n - 1), d(n);
    for (size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        delta[i] = (y[i + 1] - y[i]) / h[i];
    }
    // Fritsch-Carlson monotone tangents.
    d[0] = delta[0];
    d[n - 1] = delta[n - 2];
    for (size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            d[i] = 0.0;
        } else {
            double w1 = 2.0 * h[i] + h[i - 1];
            double w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    double area = 0.0;
    for (size_t i = 0; i + 1 < n; ++i)
        area += h[i] * (y[i] + y[i + 1]) / 2.0 + h[i] * h[i] * (d[i] - d[i + 1]) / 12.0;
    return std::clamp(area, 0.0, 1.0);
}

namespace {

// Detector chain for one (protocol, class) cell on class-restricted series.
std::optional<RocCurve> score_cell(const MetricMatrix& matrix, Protocol proto,
                                   EvalClass cls, const std::vector<Label>& labels,
                                   const DetectorConfig& cfg) {
    auto kept = restrict_to_class(labels, cls);
    std::vector<bool> positives;
    positives.reserve(kept.size());
    size_t pos = 0;
    for (size_t iv : kept) {
        bool p = is_positive(labels[iv], cls);
        positives.push_back(p);
        if (p) pos++;
    }
    if (pos == 0 || pos == kept.size()) return std::nullopt;

    std::vector<ResidualSeries> residuals;
    for (const auto& [id, ts] : matrix) {
        if (id.protocol != proto) continue;
        TimeSeries shortened;
        shortened.metric = id;
        shortened.values.reserve(kept.size());
        for (size_t iv : kept) shortened.values.push_back(ts.values[iv]);
        auto params = calibrate(shortened.values, cfg.calibration_window,
                                cfg.noise_split_rho);
        residuals.push_back(filter(shortened, params));
    }
    if (residuals.empty()) return std::nullopt;

    std::vector<std::vector<bool>> per_threshold;
    per_threshold.reserve(cfg.threshold_grid.size());
    for (double k : cfg.threshold_grid) {
        std::vector<std::vector<bool>> per_metric;
        per_metric.reserve(residuals.size());
        for (const auto& rs : residuals) per_metric.push_back(alarms(rs, k));
        per_threshold.push_back(aggregate(per_metric));
    }
    return roc(per_threshold, cfg.threshold_grid, positives);
}

}  // namespace

UtilityReport evaluate_matrix(const MetricMatrix& matrix, const std::string& scheme_name,
                              const GroundTruth& truth, const EvalConfig& config) {
    UtilityReport report;
    for (Protocol proto : {Protocol::TCP, Protocol::UDP}) {
        auto it = truth.labels.find(proto);
        if (it == truth.labels.end()) continue;
        size_t n = 0;
        for (const auto& [id, ts] : matrix)
            if (id.protocol == proto) n = std::max(n, ts.values.size());
        std::vector<Label> labels = it->second;
        labels.resize(n, Label::Normal);
        for (EvalClass cls : {EvalClass::Volume, EvalClass::ScanDos,
                              EvalClass::Fluctuation, EvalClass::Overall}) {
            auto curve = score_cell(matrix, proto, cls, labels, config.detector);
            if (curve) report.cells.push_back({scheme_name, proto, cls, *curve});
        }
    }
    return report;
}

UtilityReport evaluate_scheme(const Trace& trace, const AnonScheme& scheme,
                              const GroundTruth& truth, const EvalConfig& config) {
    Trace anon = anonymize_trace(scheme, trace);
    auto matrix = compute_metrics(anon, metric_catalog(scheme));
    return evaluate_matrix(matrix, format_scheme(scheme), truth, config);
}

void write_report(const UtilityReport& report, const std::string& auc_path,
                  const std::string& roc_path) {
    std::ofstream out(auc_path);
    if (!out) throw IoError("cannot open " + auc_path + " for writing");
    out << "scheme,protocol,class,auc\n";
    for (const auto& cell : report.cells) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", cell.curve.auc);
        out << cell.scheme << ',' << to_string(cell.protocol) << ','
            << to_string(cell.cls) << ',' << buf << '\n';
    }
    if (!out) throw IoError("write failed for " + auc_path);

    if (roc_path.empty()) return;
    std::ofstream rout(roc_path);
    if (!rout) throw IoError("cannot open " + roc_path + " for writing");
    rout << "scheme,protocol,class,k,fpr,tpr\n";
    for (const auto& cell : report.cells)
        for (const auto& p : cell.curve.points) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "%.3f,%.6f,%.6f", p.k, p.fpr, p.tpr);
            rout << cell.scheme << ',' << to_string(cell.protocol) << ','
                 << to_string(cell.cls) << ',' << buf << '\n';
        }
    if (!rout) throw IoError("write failed for " + roc_path);
}

}  // namespace flowanon
