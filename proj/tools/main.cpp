// flowanon: flow-trace anonymization benchmarking CLI.
//
// Pipeline: generate -> anonymize -> metrics -> detect -> evaluate -> report,
// plus the focus-loss analysis. All artifacts are plain CSV; report renders
// SVG charts from the evaluate output.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "flowanon/eval.hpp"
#include "flowanon/focus.hpp"
#include "flowanon/synth.hpp"

using namespace flowanon;

namespace {

// "a.b.c.d/len" or bare "a.b.c.d" (treated as /16).
std::pair<uint32_t, int> parse_prefix(const std::string& s) {
    auto slash = s.find('/');
    int len = 16;
    std::string addr = s;
    if (slash != std::string::npos) {
        len = std::stoi(s.substr(slash + 1));
        addr = s.substr(0, slash);
    }
    if (len < 1 || len > 32) throw ParseError("bad prefix length in " + s);
    return {mask_prefix(parse_ipv4(addr), len), len};
}

// Re-derives the direction flag from a list of internal prefixes.
void apply_internal_prefixes(Trace& trace, const std::vector<std::string>& prefixes) {
    if (prefixes.empty()) return;
    std::vector<std::pair<uint32_t, int>> nets;
    for (const auto& p : prefixes) nets.push_back(parse_prefix(p));
    auto internal = [&](uint32_t a) {
        for (auto [net, len] : nets)
            if (mask_prefix(a, len) == net) return true;
        return false;
    };
    for (auto& r : trace.records)
        r.direction = internal(r.dst_addr) ? Direction::IN : Direction::OUT;
}

struct RocRow {
    std::string scheme;
    std::string protocol;
    std::string cls;
    double k, fpr, tpr;
};

std::vector<RocRow> read_roc_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "scheme,protocol,class,k,fpr,tpr")
        throw ParseError("bad roc dump header", 1);
    std::vector<RocRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        RocRow r;
        std::string k, fpr, tpr;
        if (!std::getline(ls, r.scheme, ',') || !std::getline(ls, r.protocol, ',') ||
            !std::getline(ls, r.cls, ',') || !std::getline(ls, k, ',') ||
            !std::getline(ls, fpr, ',') || !std::getline(ls, tpr))
            throw ParseError("bad roc row: " + line);
        r.k = std::stod(k);
        r.fpr = std::stod(fpr);
        r.tpr = std::stod(tpr);
        rows.push_back(r);
    }
    return rows;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

void render_roc_svg(const std::string& path, const std::string& title,
                    const std::map<std::string, std::vector<RocRow>>& by_scheme) {
    const double W = 480, H = 420, M = 50;
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
        << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
        << title << "</text>\n";
    auto px = [&](double v) { return M + v * (W - 2 * M); };
    auto py = [&](double v) { return H - M - v * (H - 2 * M); };
    out << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(1)
        << "\" y2=\"" << py(0) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(0)
        << "\" y2=\"" << py(1) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(1)
        << "\" y2=\"" << py(1) << "\" stroke=\"#cccccc\" stroke-dasharray=\"4\"/>\n";
    out << "<text x=\"" << px(0.5) << "\" y=\"" << H - 12
        << "\" text-anchor=\"middle\" font-size=\"12\">false positive rate</text>\n";
    int ci = 0;
    double ly = 40;
    for (const auto& [scheme, rows] : by_scheme) {
        const char* color = kPalette[ci++ % 8];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
        for (const auto& r : rows) out << px(r.fpr) << ',' << py(r.tpr) << ' ';
        out << "\"/>\n";
        out << "<text x=\"" << W - M - 100 << "\" y=\"" << ly << "\" font-size=\"11\" fill=\""
            << color << "\">" << scheme << "</text>\n";
        ly += 14;
    }
    out << "</svg>\n";
}

void render_auc_svg(const std::string& path, const std::string& protocol,
                    const std::vector<std::string>& schemes,
                    const std::map<std::string, std::map<std::string, double>>& auc) {
    const double W = 520, H = 420, M = 60;
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
        << H << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2
        << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">AUC per scheme ("
        << protocol << ")</text>\n";
    auto px = [&](size_t i) {
        return schemes.size() < 2
                   ? W / 2
                   : M + static_cast<double>(i) * (W - 2 * M) /
                             static_cast<double>(schemes.size() - 1);
    };
    auto py = [&](double v) { return H - M - v * (H - 2 * M); };
    out << "<line x1=\"" << M << "\" y1=\"" << py(0) << "\" x2=\"" << W - M
        << "\" y2=\"" << py(0) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << M << "\" y1=\"" << py(0) << "\" x2=\"" << M << "\" y2=\""
        << py(1) << "\" stroke=\"black\"/>\n";
    for (size_t i = 0; i < schemes.size(); ++i)
        out << "<text x=\"" << px(i) << "\" y=\"" << H - M + 18
            << "\" text-anchor=\"middle\" font-size=\"11\">" << schemes[i]
            << "</text>\n";
    int ci = 0;
    double ly = 40;
    for (const auto& [cls, per_scheme] : auc) {
        const char* color = kPalette[ci++ % 8];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
        for (size_t i = 0; i < schemes.size(); ++i) {
            auto it = per_scheme.find(schemes[i]);
            if (it == per_scheme.end()) continue;
            out << px(i) << ',' << py(it->second) << ' ';
        }
        out << "\"/>\n";
        out << "<text x=\"" << W - M - 90 << "\" y=\"" << ly << "\" font-size=\"11\" fill=\""
            << color << "\">" << cls << "</text>\n";
        ly += 14;
    }
    out << "</svg>\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flow-trace anonymization benchmarking toolkit"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "generate a synthetic labeled trace");
    std::string gen_config, gen_out, gen_truth;
    uint64_t gen_seed = 0;
    bool gen_seed_set = false;
    gen->add_option("--config", gen_config, "synth config file")->required();
    gen->add_option("--out", gen_out, "output trace CSV")->required();
    gen->add_option("--truth", gen_truth, "output ground-truth CSV")->required();
    gen->add_option("--seed", gen_seed, "override the config seed")
        ->each([&](const std::string&) { gen_seed_set = true; });

    // anonymize
    auto* an = app.add_subcommand("anonymize", "apply an anonymization scheme");
    std::string an_scheme, an_in, an_out;
    int64_t an_ilen = 900, an_n = 0;
    std::vector<std::string> an_prefixes;
    an->add_option("--scheme", an_scheme)->required();
    an->add_option("--in", an_in)->required();
    an->add_option("--out", an_out)->required();
    an->add_option("--interval-length", an_ilen);
    an->add_option("--intervals", an_n);
    an->add_option("--internal-prefix", an_prefixes)->take_all();

    // metrics
    auto* me = app.add_subcommand("metrics", "compute metric time series");
    std::string me_trace, me_scheme = "pp:00000000000000000000000000000000", me_out;
    int64_t me_ilen = 900, me_n = 0;
    std::vector<std::string> me_prefixes;
    me->add_option("--trace", me_trace)->required();
    me->add_option("--scheme", me_scheme,
                   "scheme whose metric catalog to compute (default: full)");
    me->add_option("--out", me_out)->required();
    me->add_option("--interval-length", me_ilen);
    me->add_option("--intervals", me_n);
    me->add_option("--internal-prefix", me_prefixes)->take_all();

    // detect
    auto* de = app.add_subcommand("detect", "Kalman residuals for a metric matrix");
    std::string de_matrix, de_out;
    int de_window = 96;
    double de_rho = 0.5;
    de->add_option("--matrix", de_matrix)->required();
    de->add_option("--out", de_out)->required();
    de->add_option("--calibration-window", de_window);
    de->add_option("--rho", de_rho);

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "score schemes with ROC/AUC");
    std::string ev_trace, ev_truth, ev_out, ev_roc;
    std::vector<std::string> ev_schemes, ev_prefixes;
    int64_t ev_ilen = 900, ev_n = 0;
    int ev_window = 96;
    double ev_rho = 0.5;
    ev->add_option("--trace", ev_trace)->required();
    ev->add_option("--truth", ev_truth)->required();
    ev->add_option("--scheme", ev_schemes)->required()->take_all();
    ev->add_option("--out", ev_out)->required();
    ev->add_option("--roc", ev_roc, "also dump per-threshold ROC points");
    ev->add_option("--interval-length", ev_ilen);
    ev->add_option("--intervals", ev_n);
    ev->add_option("--calibration-window", ev_window);
    ev->add_option("--rho", ev_rho);
    ev->add_option("--internal-prefix", ev_prefixes)->take_all();

    // focus
    auto* fo = app.add_subcommand("focus", "truncation loss-of-focus analysis");
    std::string fo_trace, fo_hosts, fo_out, fo_role = "dst";
    std::vector<int> fo_t;
    int64_t fo_ilen = 900, fo_n = 0;
    fo->add_option("--trace", fo_trace)->required();
    fo->add_option("--hosts", fo_hosts, "file with one host address per line")->required();
    fo->add_option("--t", fo_t, "truncation bit counts")->required()->take_all();
    fo->add_option("--role", fo_role, "src or dst (default dst)");
    fo->add_option("--out", fo_out)->required();
    fo->add_option("--interval-length", fo_ilen);
    fo->add_option("--intervals", fo_n);

    // report
    auto* re = app.add_subcommand("report", "render SVG charts from evaluate output");
    std::string re_auc, re_roc, re_dir = ".";
    re->add_option("--auc", re_auc, "AUC report CSV")->required();
    re->add_option("--roc", re_roc, "ROC point dump CSV");
    re->add_option("--out-dir", re_dir);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;  // any usage problem is exit 1
    }

    try {
        if (*gen) {
            SynthConfig cfg = read_synth_config(gen_config);
            if (gen_seed_set) cfg.seed = gen_seed;
            auto [trace, truth] = generate(cfg);
            write_trace(trace, gen_out);
            write_ground_truth(truth, static_cast<size_t>(cfg.num_intervals), gen_truth);
        } else if (*an) {
            auto scheme = parse_scheme(an_scheme);
            Trace t = read_trace(an_in, an_ilen, an_n);
            apply_internal_prefixes(t, an_prefixes);
            write_trace(anonymize_trace(scheme, t), an_out);
        } else if (*me) {
            auto scheme = parse_scheme(me_scheme);
            Trace t = read_trace(me_trace, me_ilen, me_n);
            apply_internal_prefixes(t, me_prefixes);
            write_metric_matrix(compute_metrics(t, metric_catalog(scheme)), me_out);
        } else if (*de) {
            auto matrix = read_metric_matrix(de_matrix);
            MetricMatrix residuals;
            for (const auto& [id, ts] : matrix) {
                auto params = calibrate(ts.values, de_window, de_rho);
                auto rs = filter(ts, params);
                TimeSeries out;
                out.metric = id;
                out.values = std::move(rs.residuals);
                residuals.emplace(id, std::move(out));
            }
            write_metric_matrix(residuals, de_out);
        } else if (*ev) {
            Trace t = read_trace(ev_trace, ev_ilen, ev_n);
            apply_internal_prefixes(t, ev_prefixes);
            GroundTruth truth = read_ground_truth(ev_truth);
            EvalConfig cfg;
            cfg.detector.calibration_window = ev_window;
            cfg.detector.noise_split_rho = ev_rho;
            UtilityReport combined;
            for (const auto& s : ev_schemes) {
                auto rep = evaluate_scheme(t, parse_scheme(s), truth, cfg);
                combined.cells.insert(combined.cells.end(), rep.cells.begin(),
                                      rep.cells.end());
            }
            write_report(combined, ev_out, ev_roc);
        } else if (*fo) {
            Trace t = read_trace(fo_trace, fo_ilen, fo_n);
            std::ifstream hf(fo_hosts);
            if (!hf) throw IoError("cannot open " + fo_hosts);
            std::vector<uint32_t> hosts;
            std::string line;
            while (std::getline(hf, line)) {
                if (line.empty()) continue;
                hosts.push_back(line.find('.') != std::string::npos
                                    ? parse_ipv4(line)
                                    : static_cast<uint32_t>(std::stoul(line)));
            }
            AddressRole role = fo_role == "src" ? AddressRole::SRC : AddressRole::DST;
            write_focus_report(focus_loss(t, hosts, role, fo_t), fo_out);
        } else if (*re) {
            std::filesystem::create_directories(re_dir);
            // AUC summary per protocol, scheme order = first appearance.
            std::ifstream in(re_auc);
            if (!in) throw IoError("cannot open " + re_auc);
            std::string line;
            if (!std::getline(in, line) || line != "scheme,protocol,class,auc")
                throw ParseError("bad AUC report header", 1);
            std::map<std::string, std::map<std::string, std::map<std::string, double>>>
                auc;  // protocol -> class -> scheme -> auc
            std::vector<std::string> scheme_order;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                std::istringstream ls(line);
                std::string scheme, proto, cls, value;
                std::getline(ls, scheme, ',');
                std::getline(ls, proto, ',');
                std::getline(ls, cls, ',');
                std::getline(ls, value);
                auc[proto][cls][scheme] = std::stod(value);
                if (std::find(scheme_order.begin(), scheme_order.end(), scheme) ==
                    scheme_order.end())
                    scheme_order.push_back(scheme);
            }
            for (const auto& [proto, per_class] : auc)
                render_auc_svg(re_dir + "/auc_" + proto + ".svg", proto, scheme_order,
                               per_class);
            if (!re_roc.empty()) {
                auto rows = read_roc_rows(re_roc);
                std::map<std::pair<std::string, std::string>,
                         std::map<std::string, std::vector<RocRow>>>
                    charts;
                for (const auto& r : rows)
                    charts[{r.protocol, r.cls}][r.scheme].push_back(r);
                for (auto& [key, by_scheme] : charts) {
                    for (auto& [scheme, pts] : by_scheme)
                        std::sort(pts.begin(), pts.end(),
                                  [](const RocRow& a, const RocRow& b) {
                                      return a.fpr != b.fpr ? a.fpr < b.fpr
                                                            : a.tpr < b.tpr;
                                  });
                    render_roc_svg(re_dir + "/roc_" + key.first + "_" + key.second +
                                       ".svg",
                                   "ROC " + key.first + " / " + key.second, by_scheme);
                }
            }
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}
