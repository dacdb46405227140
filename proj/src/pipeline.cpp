#include "finnet/pipeline.hpp"

#include "finnet/common.hpp"
#include "finnet/correlation.hpp"
#include "finnet/dfa.hpp"
#include "finnet/market_data.hpp"
#include "finnet/network.hpp"
#include "finnet/spectral.hpp"
#include "finnet/util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace finnet {

namespace {

std::vector<ThresholdKind> kinds_of(const std::string& threshold) {
    if (threshold == "static") return {ThresholdKind::Static};
    if (threshold == "dynamic") return {ThresholdKind::Dynamic};
    if (threshold == "both") return {ThresholdKind::Static, ThresholdKind::Dynamic};
    throw ValidationError("threshold must be static, dynamic or both; got '" + threshold + "'");
}

const char* kind_name(ThresholdKind kind) {
    return kind == ThresholdKind::Static ? "static" : "dynamic";
}

/// Tracks written artifacts so a failed run can clean up after itself.
class OutputTracker {
public:
    explicit OutputTracker(fs::path root) : root_(std::move(root)) {}

    void write(const std::string& relative, const std::string& content) {
        const fs::path full = root_ / relative;
        std::error_code ec;
        fs::create_directories(full.parent_path(), ec);
        std::ofstream out(full, std::ios::binary);
        if (!out) throw IoError("cannot open for writing: " + full.string());
        out << content;
        if (!out) throw IoError("write failed: " + full.string());
        written_.push_back(relative);
    }

    void remove_all_written() {
        for (const auto& rel : written_) {
            std::error_code ec;
            fs::remove(root_ / rel, ec);
        }
    }

    const std::vector<std::string>& written() const { return written_; }
    const fs::path& root() const { return root_; }

private:
    fs::path root_;
    std::vector<std::string> written_;
};

std::string topology_csv(const TopologySeries& series) {
    std::ostringstream out;
    out << "t,C,K,r\n";
    for (int t = 0; t < series.n_steps(); ++t) {
        out << (t + 1) << ',' << fmt_double(series.clustering[t]) << ','
            << fmt_double(series.degree[t]) << ',';
        if (series.assortativity[t]) out << fmt_double(*series.assortativity[t]);
        out << '\n';
    }
    return out.str();
}

std::string degree_hist_csv(const DegreeEnsemble& ensemble) {
    std::ostringstream out;
    out << "k,count,probability\n";
    for (std::size_t k = 0; k < ensemble.counts.size(); ++k) {
        out << k << ',' << ensemble.counts[k] << ','
            << fmt_double(ensemble.probability(static_cast<int>(k))) << '\n';
    }
    return out.str();
}

std::string dfa_csv(const DfaResult& result) {
    std::ostringstream out;
    out << "scale,F\n";
    for (std::size_t k = 0; k < result.scales.size(); ++k) {
        out << result.scales[k] << ',' << fmt_double(result.fluctuations[k]) << '\n';
    }
    return out.str();
}

json dfa_sidecar(const DfaResult& result) {
    json j;
    j["theta"] = result.theta;
    j["fit_range"] = {result.fit_range.first, result.fit_range.second};
    if (result.crossover) {
        j["crossover"] = {{"t_c", result.crossover->t_c},
                          {"theta_below", result.crossover->theta_below},
                          {"theta_above", result.crossover->theta_above},
                          {"sse_gain", result.crossover->sse_gain}};
    } else {
        j["crossover"] = nullptr;
    }
    j["gap_fraction"] = result.gap_fraction;
    return j;
}

std::string eigen_csv(const EigenReport& report) {
    std::ostringstream out;
    out << "index,lambda\n";
    for (int k = 0; k < report.eigenvalues.size(); ++k) {
        out << k << ',' << fmt_double(report.eigenvalues(k)) << '\n';
    }
    return out.str();
}

std::string eigenvectors_csv(const EigenReport& report, const PricePanel& panel, int top_m) {
    std::ostringstream out;
    out << "stock_id,sector";
    for (int v = 0; v < top_m; ++v) out << ",u" << v;
    out << '\n';
    for (std::size_t r = 0; r < report.included.size(); ++r) {
        const std::string& id = panel.stock_ids[report.included[r]];
        out << id << ',';
        const auto it = panel.sectors.find(id);
        if (it != panel.sectors.end()) out << it->second;
        for (int v = 0; v < top_m; ++v) {
            out << ',' << fmt_double(report.eigenvectors(static_cast<int>(r), v));
        }
        out << '\n';
    }
    return out.str();
}

json config_echo(const RunConfig& config) {
    // Parallelism is an execution detail, not part of the result; leaving it
    // out keeps manifests byte-identical across worker counts.
    json j;
    j["prices"] = config.input_prices;
    j["sectors"] = config.input_sectors;
    j["threshold"] = config.threshold;
    j["multipliers"] = config.multipliers;
    j["dfa_series"] = config.dfa_series;
    json windows = json::array();
    for (const auto& [a, b] : config.windows) windows.push_back({a, b});
    j["windows"] = windows;
    j["out"] = config.output_dir;
    j["top_m"] = config.top_m;
    return j;
}

std::vector<std::optional<double>> series_by_name(const TopologySeries& topo,
                                                  const std::string& name) {
    std::vector<std::optional<double>> series;
    const int steps = topo.n_steps();
    series.reserve(steps);
    if (name == "clustering") {
        for (double v : topo.clustering) series.emplace_back(v);
    } else if (name == "degree") {
        for (double v : topo.degree) series.emplace_back(v);
    } else if (name == "assortativity") {
        series = topo.assortativity;
    } else {
        throw ValidationError("unknown dfa series '" + name +
                              "' (expected clustering, degree or assortativity)");
    }
    return series;
}

} // namespace

void RunConfig::validate() const {
    if (input_prices.empty()) throw ValidationError("no input prices file given");
    if (output_dir.empty()) throw ValidationError("no output directory given");
    kinds_of(threshold);
    if (multipliers.empty()) throw ValidationError("multiplier list is empty");
    for (double m : multipliers) {
        if (!(m > 0.0)) throw ValidationError("multipliers must be positive");
    }
    const std::set<std::string> known = {"clustering", "degree", "assortativity"};
    for (const auto& s : dfa_series) {
        if (!known.count(s)) throw ValidationError("unknown dfa series '" + s + "'");
    }
    for (const auto& [a, b] : windows) {
        if (a < 1 || b < a) {
            throw ValidationError("bad window [" + std::to_string(a) + ", " + std::to_string(b) +
                                  "]");
        }
    }
    if (parallelism < 0) throw ValidationError("parallelism must be >= 0");
    if (top_m < 1) throw ValidationError("top_m must be >= 1");
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    RunConfig config;
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        if (trim(line).empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key = value", row, 1);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "prices") {
            config.input_prices = value;
        } else if (key == "sectors") {
            config.input_sectors = value;
        } else if (key == "threshold") {
            config.threshold = value;
        } else if (key == "out") {
            config.output_dir = value;
        } else if (key == "top_m") {
            config.top_m = std::stoi(value);
        } else if (key == "parallelism") {
            config.parallelism = value == "auto" ? 0 : std::stoi(value);
        } else if (key == "multipliers") {
            config.multipliers.clear();
            for (const auto& cell : split_csv_line(value)) {
                double m = 0.0;
                if (!parse_double(cell, m)) throw ParseError("bad multiplier '" + cell + "'", row, 1);
                config.multipliers.push_back(m);
            }
        } else if (key == "dfa_series") {
            config.dfa_series.clear();
            for (const auto& cell : split_csv_line(value)) config.dfa_series.push_back(cell);
        } else if (key == "windows") {
            config.windows.clear();
            for (const auto& cell : split_csv_line(value)) {
                const std::size_t colon = cell.find(':');
                if (colon == std::string::npos) throw ParseError("window must be a:b", row, 1);
                config.windows.emplace_back(std::stoi(cell.substr(0, colon)),
                                            std::stoi(cell.substr(colon + 1)));
            }
        } else {
            throw ParseError("unknown config key '" + key + "'", row, 1);
        }
    }
    return config;
}

RunResult run_pipeline(const RunConfig& config) {
    config.validate();
    OutputTracker tracker{fs::path(config.output_dir)};
    try {
        const int workers = resolve_workers(config.parallelism);

        PricePanel panel = load_prices(config.input_prices);
        if (!config.input_sectors.empty()) load_sectors(config.input_sectors, panel);
        const ReturnMatrix returns = returns_from_panel(panel);
        const int steps = returns.n_steps();

        const double q_static = static_baseline(returns);
        const std::vector<double> q_dynamic = dynamic_baseline(returns);
        tracker.write("thresholds.csv", thresholds_csv(q_static, q_dynamic));

        for (const auto& [a, b] : config.windows) {
            if (b > steps) {
                throw ValidationError("window end " + std::to_string(b) + " beyond T = " +
                                      std::to_string(steps));
            }
        }

        json summary;
        summary["Q_s"] = q_static;
        summary["n_stocks"] = returns.n_stocks();
        summary["T"] = steps;
        summary["runs"] = json::array();

        for (const ThresholdKind kind : kinds_of(config.threshold)) {
            for (const double multiplier : config.multipliers) {
                ThresholdPolicy policy;
                policy.kind = kind;
                policy.multiplier = multiplier;
                if (kind == ThresholdKind::Static) {
                    policy.q_static = q_static;
                } else {
                    policy.q_dynamic = q_dynamic;
                }

                const std::string dir =
                    std::string(kind_name(kind)) + "_m" + fmt_double(multiplier);
                json entry;
                entry["kind"] = kind_name(kind);
                entry["multiplier"] = multiplier;
                entry["in_paper_range"] = policy.in_paper_range();

                const TopologySeries topo = topology_series(returns, policy, workers);
                tracker.write(dir + "/topology.csv", topology_csv(topo));
                entry["C_bar"] = topo.mean_clustering;
                entry["K_bar"] = topo.mean_degree;
                entry["r_bar"] = topo.mean_assortativity
                                     ? json(*topo.mean_assortativity)
                                     : json(nullptr);

                const DegreeEnsemble ensemble = degree_ensemble(topo.node_degrees);
                tracker.write(dir + "/degree_hist.csv", degree_hist_csv(ensemble));

                json thetas;
                for (const auto& name : config.dfa_series) {
                    try {
                        DfaOptions options;
                        options.want_crossover = true;
                        const DfaResult result = analyze_series(series_by_name(topo, name), options);
                        tracker.write(dir + "/dfa_" + name + ".csv", dfa_csv(result));
                        tracker.write(dir + "/dfa_" + name + ".json", dfa_sidecar(result).dump(2) + "\n");
                        thetas[name] = result.theta;
                    } catch (const ValidationError& e) {
                        thetas[name] = nullptr;
                        entry["dfa_errors"][name] = e.what();
                    }
                }
                entry["theta"] = thetas;

                try {
                    const NormalizedDegrees normalized = normalize_degree_series(topo.node_degrees);
                    const DegreeCorrelationMatrix matrix = degree_correlation_matrix(normalized);
                    const EigenReport report = eigen_decompose(matrix);
                    const int top_m = std::min(config.top_m, matrix.effective_n);
                    tracker.write(dir + "/eigen.csv", eigen_csv(report));
                    tracker.write(dir + "/eigenvectors.csv",
                                  eigenvectors_csv(report, panel, top_m));
                    json spectral;
                    spectral["effective_n"] = matrix.effective_n;
                    spectral["excluded"] = static_cast<int>(matrix.excluded.size());
                    json lams = json::array();
                    for (int k = 0; k < std::min<int>(top_m, report.eigenvalues.size()); ++k) {
                        lams.push_back(report.eigenvalues(k));
                    }
                    spectral["top_eigenvalues"] = lams;
                    bool have_all_sectors = !panel.sectors.empty();
                    std::vector<std::string> labels;
                    for (int idx : report.included) {
                        const auto it = panel.sectors.find(panel.stock_ids[idx]);
                        if (it == panel.sectors.end()) {
                            have_all_sectors = false;
                            break;
                        }
                        labels.push_back(it->second);
                    }
                    if (have_all_sectors) {
                        const SectorProjection proj = sector_projection(report, labels, top_m);
                        spectral["dominant_sectors"] = proj.dominant;
                    }
                    entry["spectral"] = spectral;
                } catch (const ValidationError& e) {
                    entry["spectral"] = nullptr;
                    entry["spectral_note"] = e.what();
                }

                json window_stats = json::array();
                for (const auto& [a, b] : config.windows) {
                    window_stats.push_back({{"t_start", a},
                                            {"t_end", b},
                                            {"K_mean", windowed_average_degree(topo, a, b)}});
                }
                entry["windows"] = window_stats;
                summary["runs"].push_back(entry);
            }
        }

        tracker.write("summary.json", summary.dump(2) + "\n");

        json manifest;
        manifest["config"] = config_echo(config);
        std::vector<std::string> paths = tracker.written();
        std::sort(paths.begin(), paths.end());
        json artifacts = json::array();
        for (const auto& rel : paths) {
            artifacts.push_back({{"path", rel},
                                 {"checksum", file_checksum_hex((tracker.root() / rel).string())}});
        }
        manifest["artifacts"] = artifacts;
        tracker.write("manifest.json", manifest.dump(2) + "\n");

        RunResult result;
        result.manifest_path = (tracker.root() / "manifest.json").string();
        result.artifacts = paths;
        result.artifacts.push_back("manifest.json");
        return result;
    } catch (...) {
        tracker.remove_all_written();
        throw;
    }
}

} // namespace finnet
