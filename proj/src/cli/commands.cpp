#include "mprad/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "mprad/analytics.hpp"
#include "mprad/error.hpp"
#include "mprad/featuremap.hpp"
#include "mprad/io.hpp"
#include "mprad/phantom.hpp"
#include "mprad/tscin.hpp"
#include "mprad/tspm.hpp"

namespace mprad::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* const kPresetFooter =
    "Kernel presets (--preset):\n"
    "  usc     15×15/256  (window 15x15, 256 gray levels)\n"
    "  breast  5×5/128    (window 5x5, 128 gray levels)\n"
    "  stroke  3×3/32     (window 3x3, 32 gray levels)\n"
    "Precedence: flags > --config file > preset. Threads: --threads, else MPRAD_THREADS, else all cores.";

std::string fmt(double v, const char* spec = "%.17g") {
    if (std::isnan(v)) return "NaN";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    for (const auto& item : split_list(s)) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(Errc::invalid_argument, "expected a comma-separated integer list, got \"" + s + "\"");
        }
    }
    return out;
}

int resolve_threads(int flag) {
    if (flag > 0) return flag;
    if (const char* env = std::getenv("MPRAD_THREADS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end != '\0' || v < 0) throw Error(Errc::invalid_argument, std::string("MPRAD_THREADS=\"") + env + "\" is not a thread count");
        return static_cast<int>(v);
    }
    return 0;
}

void warn(std::ostream& err, const std::string& msg) { err << "mprad: warning: " << msg << '\n'; }

// ---------------------------------------------------------------------------
// Kernel configuration shared by map and extract

struct KernelFlags {
    std::string preset = "usc";
    int window = 15;
    int levels = 256;
    std::string family = "tspm";
    std::string feature = "entropy";
    std::string offsets = "1:0,1:45,1:90,1:135";
    int channel = 0;
    std::string channels;
    int channel_distance = 1;
    std::string summary = "mean";
    std::string config;
    int threads = 0;

    std::map<std::string, CLI::Option*> opts;
};

void add_kernel_flags(CLI::App& app, KernelFlags& f, bool with_feature) {
    f.opts["preset"] = app.add_option("--preset", f.preset, "Kernel preset")
                           ->check(CLI::IsMember({"usc", "breast", "stroke"}));
    f.opts["window"] = app.add_option("--window", f.window, "Odd window side, voxels (overrides preset)");
    f.opts["levels"] = app.add_option("--levels", f.levels, "Gray levels G (overrides preset)");
    if (with_feature) {
        f.opts["family"] = app.add_option("--family", f.family, "Feature family")
                               ->check(CLI::IsMember({"fos", "glcm", "tspm", "tscm", "tscin", "tsrm"}));
        f.opts["feature"] = app.add_option("--feature", f.feature, "Feature name, or 'all'");
    }
    f.opts["offsets"] = app.add_option("--offsets", f.offsets, "Co-occurrence offsets as distance:angle,...");
    f.opts["channel"] = app.add_option("--channel", f.channel, "Channel index for fos and glcm");
    f.opts["channels"] = app.add_option("--channels", f.channels, "Channel subset for tspm/tscm, e.g. 0,2 (default all)");
    f.opts["channel_distance"] = app.add_option("--channel-distance", f.channel_distance, "Cross-channel lag for tsrm");
    f.opts["summary"] = app.add_option("--summary", f.summary, "ROI summary statistic")
                            ->check(CLI::IsMember({"mean", "median", "std", "min", "max"}));
    f.opts["config"] = app.add_option("--config", f.config, "JSON file with any of the kernel settings");
    f.opts["threads"] = app.add_option("--threads", f.threads, "Worker threads (0 = MPRAD_THREADS or all cores)");
}

bool flag_set(const KernelFlags& f, const std::string& name) {
    const auto it = f.opts.find(name);
    return it != f.opts.end() && it->second->count() > 0;
}

json read_config(const std::string& path) {
    if (path.empty()) return json::object();
    json doc;
    try {
        doc = json::parse(io::read_text_file(path));
    } catch (const json::exception& e) {
        throw Error(Errc::parse, path + ": " + e.what());
    }
    if (!doc.is_object()) throw Error(Errc::parse, path + ": config must be a JSON object");
    static const std::set<std::string> known = {"preset", "window", "levels", "family", "feature", "offsets",
                                                "channel", "channels", "channel_distance", "summary", "threads"};
    for (const auto& [key, _] : doc.items()) {
        if (!known.count(key)) throw Error(Errc::parse, path + ": unknown config key \"" + key + "\"");
    }
    return doc;
}

template <class T>
T config_value(const json& doc, const char* key, const std::string& path) {
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception&) {
        throw Error(Errc::parse, path + ": config key \"" + key + "\" has the wrong type");
    }
}

std::string channels_text(const json& v, const std::string& path) {
    if (v.is_string()) return v.get<std::string>();
    if (!v.is_array()) throw Error(Errc::parse, path + ": \"channels\" must be a list of indices");
    std::string s;
    for (const auto& e : v) {
        if (!e.is_number_integer()) throw Error(Errc::parse, path + ": \"channels\" must be a list of indices");
        s += (s.empty() ? "" : ",") + std::to_string(e.get<int>());
    }
    return s;
}

/// Preset first, then config file, then explicit flags.
KernelConfig resolve_kernel(KernelFlags& f) {
    const json doc = read_config(f.config);
    std::string preset = "usc";
    if (doc.contains("preset")) preset = config_value<std::string>(doc, "preset", f.config);
    if (flag_set(f, "preset")) preset = f.preset;
    KernelConfig cfg = preset_config(preset);

    std::string offsets, channels;
    bool have_offsets = false, have_channels = false;
    if (doc.contains("window")) cfg.window = config_value<int>(doc, "window", f.config);
    if (doc.contains("levels")) cfg.levels = config_value<int>(doc, "levels", f.config);
    if (doc.contains("family")) cfg.family = family_from_string(config_value<std::string>(doc, "family", f.config));
    if (doc.contains("feature")) cfg.feature = config_value<std::string>(doc, "feature", f.config);
    if (doc.contains("offsets")) {
        offsets = config_value<std::string>(doc, "offsets", f.config);
        have_offsets = true;
    }
    if (doc.contains("channel")) cfg.channel = config_value<int>(doc, "channel", f.config);
    if (doc.contains("channels")) {
        channels = channels_text(doc.at("channels"), f.config);
        have_channels = true;
    }
    if (doc.contains("channel_distance")) cfg.channel_distance = config_value<int>(doc, "channel_distance", f.config);
    if (doc.contains("summary")) cfg.summary = summary_from_string(config_value<std::string>(doc, "summary", f.config));
    if (doc.contains("threads") && !flag_set(f, "threads")) f.threads = config_value<int>(doc, "threads", f.config);

    if (flag_set(f, "window")) cfg.window = f.window;
    if (flag_set(f, "levels")) cfg.levels = f.levels;
    if (flag_set(f, "family")) cfg.family = family_from_string(f.family);
    if (flag_set(f, "feature")) cfg.feature = f.feature;
    if (flag_set(f, "offsets")) {
        offsets = f.offsets;
        have_offsets = true;
    }
    if (flag_set(f, "channel")) cfg.channel = f.channel;
    if (flag_set(f, "channels")) {
        channels = f.channels;
        have_channels = true;
    }
    if (flag_set(f, "channel_distance")) cfg.channel_distance = f.channel_distance;
    if (flag_set(f, "summary")) cfg.summary = summary_from_string(f.summary);

    if (have_offsets) cfg.offsets = parse_offsets(offsets);
    if (have_channels) cfg.channel_subset = parse_int_list(channels);
    cfg.validate();
    return cfg;
}

std::string map_stem(const KernelConfig& cfg, const QuantizedStack& q, const std::string& feature) {
    std::string stem(to_string(cfg.family));
    if (cfg.family == Family::fos || cfg.family == Family::glcm) {
        stem += "_" + q.channel_names()[static_cast<std::size_t>(cfg.channel)];
    }
    return stem + "_" + feature;
}

// ---------------------------------------------------------------------------
// phantom

struct PhantomArgs {
    std::string preset = "two-texture";
    int size = 256;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_phantom(const PhantomArgs& a, std::ostream& out) {
    const auto spec = phantom::preset(a.preset, a.size, a.seed);
    const auto ph = phantom::generate(spec);
    const fs::path dir(a.out);
    std::vector<std::pair<std::string, std::string>> manifest;
    for (int k = 0; k < ph.stack.channel_count(); ++k) {
        const auto& ch = ph.stack.channel(k);
        Grid<std::uint16_t> px(ch.width(), ch.height());
        for (std::size_t i = 0; i < px.size(); ++i) px.values()[i] = static_cast<std::uint16_t>(ch.values()[i]);
        const std::string name = ph.stack.channel_names()[static_cast<std::size_t>(k)];
        io::write_pgm(dir / (name + ".pgm"), {std::move(px), 8});
        manifest.emplace_back(name, name + ".pgm");
    }
    Grid<std::uint16_t> mask(ph.truth.width(), ph.truth.height());
    for (std::size_t i = 0; i < mask.size(); ++i) mask.values()[i] = static_cast<std::uint16_t>(ph.truth.labels().values()[i]);
    io::write_pgm(dir / "mask.pgm", {std::move(mask), 8});
    json names = json::object();
    for (const auto& [label, name] : ph.truth.label_names()) names[std::to_string(label)] = name;
    io::write_file_atomic(io::label_names_path(dir / "mask.pgm"), names.dump(2) + "\n");
    io::write_manifest(dir / "manifest.json", manifest);
    out << (dir / "manifest.json").string() << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// map

struct MapArgs {
    std::string manifest;
    std::string mask;
    std::string out;
    KernelFlags kernel;
};

int cmd_map(MapArgs& a, std::ostream& out) {
    const KernelConfig cfg = resolve_kernel(a.kernel);
    const int threads = resolve_threads(a.kernel.threads);
    const auto stack = io::load_stack(a.manifest);
    std::optional<RoiMask> mask;
    if (!a.mask.empty()) mask = io::load_mask(a.mask, stack);
    const auto q = quantize(stack, cfg.levels);
    const auto maps = compute_maps(q, cfg, {cfg.feature}, {threads});

    const fs::path dir = a.out.empty() ? fs::path(a.manifest).parent_path() : fs::path(a.out);
    for (const auto& m : maps) {
        const std::string stem = map_stem(cfg, q, m.feature);
        export_map(m, dir / (stem + ".csv"), MapRender::raw_csv);
        export_map(m, dir / (stem + ".png"), MapRender::normalized_png);
        out << (dir / (stem + ".csv")).string() << '\n';
    }
    if (mask) {
        std::string csv = "label,label_name,feature,statistic,value\n";
        for (int label : mask->present_labels()) {
            for (const auto& m : maps) {
                csv += std::to_string(label) + "," + mask->label_name(label) + "," + m.feature + "," +
                       std::string(to_string(cfg.summary)) + "," + fmt(summarize(m, *mask, label, cfg.summary)) + "\n";
            }
        }
        const fs::path path = dir / (std::string(to_string(cfg.family)) + "_summary.csv");
        io::write_file_atomic(path, csv);
        out << path.string() << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// extract

struct ExtractArgs {
    std::string manifest;
    std::string mask;
    int roi_label = 0;
    std::string subject;
    std::string class_label;
    std::string families = "fos,glcm,tspm,tscm";
    std::string table;
    KernelFlags kernel;
};

using FeatureRow = std::vector<std::pair<std::string, double>>;

void append_cooccurrence(FeatureRow& row, const std::string& prefix, const std::vector<CooccurrenceMatrix>& mats) {
    std::array<double, kHaralickCount> sum{};
    for (const auto& m : mats) {
        const auto h = haralick(m);
        for (std::size_t i = 0; i < kHaralickCount; ++i) sum[i] += h.values[i];
    }
    for (std::size_t i = 0; i < kHaralickCount; ++i) {
        row.emplace_back(prefix + std::string(haralick_names()[i]), sum[i] / static_cast<double>(mats.size()));
    }
}

FeatureRow roi_features(const QuantizedStack& q, const RoiMask& mask, int label, const KernelConfig& base,
                        const std::vector<Family>& families, int threads) {
    const Region region = Region::masked(mask, label);
    FeatureRow row;
    for (Family fam : families) {
        const std::string fam_name(to_string(fam));
        switch (fam) {
            case Family::fos:
                for (int k = 0; k < q.channel_count(); ++k) {
                    std::vector<double> values;
                    const auto& ch = q.channel(k);
                    const Rect b = region.bounds();
                    for (int r = b.row0; r < b.row1; ++r) {
                        for (int c = b.col0; c < b.col1; ++c) {
                            if (region.contains(r, c)) values.push_back(ch(r, c));
                        }
                    }
                    const auto st = first_order_statistics(values, q.levels(), -0.5, q.levels() - 0.5);
                    for (std::size_t i = 0; i < kFirstOrderCount; ++i) {
                        row.emplace_back(fam_name + "_" + q.channel_names()[static_cast<std::size_t>(k)] + "_" +
                                             std::string(first_order_names()[i]),
                                         st.values[i]);
                    }
                }
                break;
            case Family::glcm:
                for (int k = 0; k < q.channel_count(); ++k) {
                    std::vector<CooccurrenceMatrix> mats;
                    for (const Offset& o : base.offsets) mats.push_back(build_glcm(q.channel(k), q.levels(), region, o));
                    append_cooccurrence(row, fam_name + "_" + q.channel_names()[static_cast<std::size_t>(k)] + "_", mats);
                }
                break;
            case Family::tspm: {
                const auto h = build_tspm(q, region, base.channel_subset);
                row.emplace_back("tspm_entropy", tspm_entropy(h));
                row.emplace_back("tspm_uniformity", tspm_uniformity(h));
                if (resolve_channel_subset(base.channel_subset, q.channel_count()).size() >= 2) {
                    row.emplace_back("tspm_mi", tspm_mutual_information(q, region, base.channel_subset));
                }
                break;
            }
            case Family::tscm: {
                std::vector<CooccurrenceMatrix> mats;
                for (const Offset& o : base.offsets) mats.push_back(build_tscm(q, region, o, true, base.channel_subset));
                append_cooccurrence(row, "tscm_", mats);
                break;
            }
            case Family::tscin:
            case Family::tsrm: {
                KernelConfig cfg = base;
                cfg.family = fam;
                const auto maps = compute_maps(q, cfg, {"all"}, {threads});
                for (const auto& m : maps) {
                    row.emplace_back(fam_name + "_" + m.feature + "_" + std::string(to_string(cfg.summary)),
                                     summarize(m, mask, label, cfg.summary));
                }
                break;
            }
        }
    }
    return row;
}

int cmd_extract(ExtractArgs& a, std::ostream& out) {
    const KernelConfig cfg = resolve_kernel(a.kernel);
    const int threads = resolve_threads(a.kernel.threads);
    std::vector<Family> families;
    for (const auto& name : split_list(a.families)) families.push_back(family_from_string(name));
    if (families.empty()) throw Error(Errc::invalid_argument, "--families is empty");
    const int class_label = analytics::parse_label(a.class_label);

    const auto stack = io::load_stack(a.manifest);
    const RoiMask mask = io::load_mask(a.mask, stack);
    const auto labels = mask.present_labels();
    int label = a.roi_label;
    if (label == 0) {
        if (labels.size() != 1) {
            throw Error(Errc::invalid_argument, "mask has " + std::to_string(labels.size()) +
                                                    " labels; choose one with --roi-label");
        }
        label = labels.front();
    } else if (std::find(labels.begin(), labels.end(), label) == labels.end()) {
        throw Error(Errc::empty_region, "mask has no voxel with label " + std::to_string(label));
    }
    const auto q = quantize(stack, cfg.levels);
    const FeatureRow row = roi_features(q, mask, label, cfg, families, threads);

    std::string header = "subject_id,label";
    for (const auto& [name, _] : row) header += "," + name;
    std::string subject = a.subject;
    if (subject.empty()) subject = fs::absolute(a.manifest).parent_path().filename().string();
    std::string line = subject + "," + std::to_string(class_label);
    for (const auto& [_, v] : row) line += "," + fmt(v);

    const fs::path table(a.table);
    std::string contents;
    if (fs::exists(table)) {
        contents = io::read_text_file(table);
        const std::string existing = contents.substr(0, contents.find('\n'));
        if (existing != header) {
            throw Error(Errc::dimension_mismatch, table.string() + ": existing header does not match the extracted features");
        }
        if (!contents.empty() && contents.back() != '\n') contents += '\n';
    } else {
        contents = header + "\n";
    }
    contents += line + "\n";
    io::write_file_atomic(table, contents);
    out << line << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// stats

struct StatsArgs {
    std::string table;
    std::string label_column = "label";
    std::string id_column = "subject_id";
    std::string out;
};

int cmd_stats(const StatsArgs& a, std::ostream& out, std::ostream& err) {
    const auto table = analytics::read_feature_table(a.table, a.label_column, a.id_column);
    std::string csv = "feature,n_pos,mean_pos,sd_pos,sem_pos,n_neg,mean_neg,sd_neg,sem_neg,t,p,logit_coef,auc,separated\n";
    for (const auto& name : table.feature_names) {
        const auto col = table.column(name);
        std::vector<double> pos, neg;
        for (std::size_t i = 0; i < col.size(); ++i) (table.labels[i] == 1 ? pos : neg).push_back(col[i]);
        auto describe = [](const std::vector<double>& v) {
            double m = 0.0, ss = 0.0;
            for (double x : v) m += x;
            m /= static_cast<double>(v.size());
            for (double x : v) ss += (x - m) * (x - m);
            const double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : std::nan("");
            return std::array<double, 3>{m, sd, sd / std::sqrt(static_cast<double>(v.size()))};
        };
        if (pos.empty() || neg.empty()) throw Error(Errc::invalid_argument, "both classes must be present");
        const auto dp = describe(pos), dn = describe(neg);
        double t = std::nan(""), p = std::nan(""), coef = std::nan(""), auc = std::nan("");
        bool separated = false;
        try {
            const auto tt = analytics::welch_t_test(pos, neg);
            t = tt.t;
            p = tt.p;
        } catch (const Error& e) {
            warn(err, name + ": t-test skipped: " + e.what());
        }
        try {
            const auto lr = analytics::univariate_logistic(col, table.labels);
            coef = lr.coef;
            auc = lr.auc;
            separated = lr.separated;
        } catch (const Error& e) {
            warn(err, name + ": logistic regression skipped: " + e.what());
        }
        csv += name + "," + std::to_string(pos.size()) + "," + fmt(dp[0], "%.10g") + "," + fmt(dp[1], "%.10g") + "," +
               fmt(dp[2], "%.10g") + "," + std::to_string(neg.size()) + "," + fmt(dn[0], "%.10g") + "," +
               fmt(dn[1], "%.10g") + "," + fmt(dn[2], "%.10g") + "," + fmt(t, "%.10g") + "," + fmt(p, "%.6g") +
               "," + fmt(coef, "%.10g") + "," + fmt(auc, "%.6g") + "," + (separated ? "1" : "0") + "\n";
    }
    if (a.out.empty()) {
        out << csv;
    } else {
        io::write_file_atomic(a.out, csv);
        out << a.out << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// classify

struct ClassifyArgs {
    std::string table;
    std::string label_column = "label";
    std::string id_column = "subject_id";
    std::string features;
    int k = 20;
    int d = 1;
    double cost_ratio = 3.0;
    double c = 1.0;
    bool no_standardize = false;
    int threads = 0;
    std::string out;
};

int cmd_classify(const ClassifyArgs& a, std::ostream& out, std::ostream& err) {
    auto table = analytics::read_feature_table(a.table, a.label_column, a.id_column);
    if (!a.features.empty()) {
        analytics::FeatureTable sub = table;
        sub.feature_names = split_list(a.features);
        for (auto& row : sub.rows) row.clear();
        for (const auto& name : sub.feature_names) {
            const auto col = table.column(name);
            for (std::size_t i = 0; i < col.size(); ++i) sub.rows[i].push_back(col[i]);
        }
        table = std::move(sub);
    }
    if (table.feature_names.empty()) throw Error(Errc::invalid_argument, "feature table has no feature columns");

    analytics::IsoSvmOptions opt;
    opt.k = a.k;
    opt.dims = a.d;
    opt.svm.c_positive = a.c;
    opt.svm.cost_ratio = a.cost_ratio;
    opt.standardize = !a.no_standardize;
    const auto res = analytics::loocv(table.matrix(), table.labels, opt, resolve_threads(a.threads));
    for (const auto& w : res.warnings) warn(err, w);

    int n_pos = 0;
    for (int l : table.labels) n_pos += l;
    std::string report = "metric,value\n";
    report += "subjects," + std::to_string(table.size()) + "\n";
    report += "positives," + std::to_string(n_pos) + "\n";
    report += "negatives," + std::to_string(static_cast<int>(table.size()) - n_pos) + "\n";
    report += "features," + std::to_string(table.feature_names.size()) + "\n";
    report += "k," + std::to_string(res.k_used) + "\n";
    report += "d," + std::to_string(a.d) + "\n";
    report += "cost_ratio," + fmt(a.cost_ratio) + "\n";
    report += "auc," + fmt(res.roc.auc) + "\n";
    report += "sensitivity," + fmt(res.sensitivity) + "\n";
    report += "specificity," + fmt(res.specificity) + "\n";
    report += "youden_threshold," + fmt(res.roc.best_threshold) + "\n";
    report += "youden_sensitivity," + fmt(res.roc.sensitivity) + "\n";
    report += "youden_specificity," + fmt(res.roc.specificity) + "\n";

    std::string scores = "subject_id,label,score,predicted\n";
    for (std::size_t i = 0; i < table.size(); ++i) {
        scores += table.subject_ids[i] + "," + std::to_string(table.labels[i]) + "," + fmt(res.scores[i]) + "," +
                  std::to_string(res.predicted[i]) + "\n";
    }
    std::string roc = "threshold,fpr,tpr\n";
    for (const auto& pt : res.roc.points) roc += fmt(pt.threshold) + "," + fmt(pt.fpr) + "," + fmt(pt.tpr) + "\n";

    const fs::path dir = a.out.empty() ? fs::path(a.table).parent_path() : fs::path(a.out);
    io::write_file_atomic(dir / "classify_report.csv", report);
    io::write_file_atomic(dir / "loocv_scores.csv", scores);
    io::write_file_atomic(dir / "roc.csv", roc);
    out << report;
    return 0;
}

// ---------------------------------------------------------------------------

void error_line(std::ostream& err, std::string_view code, std::string msg) {
    for (char& ch : msg) {
        if (ch == '\n' || ch == '\r') ch = ' ';
    }
    err << "mprad: error[" << code << "]: " << msg << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multiparametric radiomics: texture feature maps, ROI features, cohort statistics.", "mprad"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();
    app.footer(kPresetFooter);

    PhantomArgs ph;
    auto* sp = app.add_subcommand("phantom", "Write a procedural multi-texture phantom with ground truth");
    sp->add_option("--preset", ph.preset, "Layout")->check(CLI::IsMember({"constant", "two-texture", "adversarial", "mosaic"}));
    sp->add_option("--size", ph.size, "Side length, pixels");
    sp->add_option("--seed", ph.seed, "Noise seed");
    sp->add_option("-o,--out", ph.out, "Output directory")->required();

    MapArgs mp;
    auto* sm = app.add_subcommand("map", "Render sliding-window feature maps");
    sm->add_option("manifest", mp.manifest, "Stack manifest JSON")->required();
    sm->add_option("--mask", mp.mask, "Label image; writes a per-label summary CSV");
    sm->add_option("-o,--out", mp.out, "Output directory (default: manifest directory)");
    add_kernel_flags(*sm, mp.kernel, true);
    sm->footer(kPresetFooter);

    ExtractArgs ex;
    auto* se = app.add_subcommand("extract", "Append one ROI feature row to a feature table");
    se->add_option("manifest", ex.manifest, "Stack manifest JSON")->required();
    se->add_option("--mask", ex.mask, "Label image")->required();
    se->add_option("--roi-label", ex.roi_label, "ROI label (0 = the only label present)");
    se->add_option("--subject", ex.subject, "Subject id (default: manifest directory name)");
    se->add_option("--class", ex.class_label, "Class of this subject: 1/0 or positive/negative")->required();
    se->add_option("--families", ex.families, "Comma-separated families among fos,glcm,tspm,tscm,tscin,tsrm");
    se->add_option("-o,--table", ex.table, "Feature table CSV to create or append to")->required();
    add_kernel_flags(*se, ex.kernel, false);
    se->footer(kPresetFooter);

    StatsArgs st;
    auto* ss = app.add_subcommand("stats", "Group comparison, univariate logistic regression and AUC per feature");
    ss->add_option("table", st.table, "Feature table CSV")->required();
    ss->add_option("--label-column", st.label_column, "Class column");
    ss->add_option("--id-column", st.id_column, "Subject id column");
    ss->add_option("-o,--out", st.out, "Report CSV (default: stdout)");

    ClassifyArgs cl;
    auto* sc = app.add_subcommand("classify", "IsoSVM with leave-one-out cross-validation");
    sc->add_option("table", cl.table, "Feature table CSV")->required();
    sc->add_option("--label-column", cl.label_column, "Class column");
    sc->add_option("--id-column", cl.id_column, "Subject id column");
    sc->add_option("--features", cl.features, "Comma-separated feature columns (default: all)");
    sc->add_option("--k", cl.k, "Isomap neighbours");
    sc->add_option("--d", cl.d, "Embedding dimension");
    sc->add_option("--cost-ratio", cl.cost_ratio, "Misclassification cost negative:positive");
    sc->add_option("--c", cl.c, "Slack cost of the positive class");
    sc->add_flag("--no-standardize", cl.no_standardize, "Use raw feature scales");
    sc->add_option("--threads", cl.threads, "Worker threads (0 = MPRAD_THREADS or all cores)");
    sc->add_option("-o,--out", cl.out, "Output directory (default: table directory)");

    std::vector<const char*> argv{"mprad"};
    for (const auto& s : args) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        CLI::App* target = &app;
        for (auto* sub : app.get_subcommands()) target = sub;
        out << target->help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        error_line(err, "usage", e.what());
        return 2;
    }

    try {
        if (sp->parsed()) return cmd_phantom(ph, out);
        if (sm->parsed()) return cmd_map(mp, out);
        if (se->parsed()) return cmd_extract(ex, out);
        if (ss->parsed()) return cmd_stats(st, out, err);
        if (sc->parsed()) return cmd_classify(cl, out, err);
    } catch (const Error& e) {
        error_line(err, to_string(e.code()), e.what());
        return 1;
    } catch (const std::exception& e) {
        error_line(err, "internal", e.what());
        return 1;
    }
    return 2;
}

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace mprad::cli
