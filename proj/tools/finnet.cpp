// finnet command line: `analyze` runs the full correlation-network pipeline,
// `synth` writes a synthetic factor-model market, `dfa` runs detrended
// fluctuation analysis on a single-column CSV.

#include "finnet/common.hpp"
#include "finnet/dfa.hpp"
#include "finnet/market_data.hpp"
#include "finnet/pipeline.hpp"
#include "finnet/synthetic.hpp"
#include "finnet/util.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

std::pair<int, int> parse_window(const std::string& text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos) {
        throw finnet::ValidationError("window must look like a:b, got '" + text + "'");
    }
    return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
}

void write_file(const fs::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw finnet::IoError("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw finnet::IoError("write failed: " + path.string());
}

int run_analyze(const finnet::RunConfig& config) {
    for (double m : config.multipliers) {
        const bool static_range = m >= 0.25 && m <= 4.0;
        const bool dynamic_range = m >= 0.25 && m <= 6.0;
        if ((config.threshold != "dynamic" && !static_range) ||
            (config.threshold != "static" && !dynamic_range)) {
            std::cerr << "note: multiplier " << finnet::fmt_double(m)
                      << " is outside the studied threshold range\n";
        }
    }

    const finnet::RunResult result = finnet::run_pipeline(config);
    std::cout << "wrote " << result.artifacts.size() << " artifacts under " << config.output_dir
              << " (manifest: " << result.manifest_path << ")\n";
    return kExitOk;
}

int run_synth(const finnet::MarketSpec& spec, const std::string& out_dir) {
    const finnet::RegimePanel generated = finnet::regime_calm_vs_volatile(spec);
    const fs::path root(out_dir);
    write_file(root / "prices.csv", finnet::serialize_prices(generated.panel));

    std::ostringstream sectors;
    sectors << "stock_id,sector_code\n";
    for (const auto& id : generated.panel.stock_ids) {
        sectors << id << ',' << generated.panel.sectors.at(id) << '\n';
    }
    write_file(root / "sectors.csv", sectors.str());

    json meta;
    meta["n_stocks"] = spec.n_stocks;
    meta["n_days"] = spec.n_days;
    meta["market_beta"] = spec.market_beta;
    meta["n_sectors"] = spec.n_sectors;
    meta["sector_gamma"] = spec.sector_gamma;
    meta["noise_sigma"] = spec.noise_sigma;
    meta["seed"] = spec.seed;
    json windows = json::array();
    for (const auto& r : generated.windows) {
        windows.push_back({{"t_start", r.t_start},
                           {"t_end", r.t_end},
                           {"vol_multiplier", r.vol_multiplier}});
    }
    meta["regimes"] = windows;
    write_file(root / "synth_meta.json", meta.dump(2) + "\n");

    std::cout << "wrote prices.csv, sectors.csv, synth_meta.json under " << out_dir << "\n";
    return kExitOk;
}

std::vector<double> read_single_column(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw finnet::IoError("cannot open series file: " + path);
    std::vector<double> series;
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        double v = 0.0;
        if (!finnet::parse_double(line, v)) {
            if (row == 1) continue;   // header line
            throw finnet::ParseError("non-numeric value '" + line + "'", row, 1);
        }
        series.push_back(v);
    }
    if (series.empty()) throw finnet::ValidationError("series file has no numeric rows");
    return series;
}

int run_dfa(const std::string& input, const std::string& out_dir, const std::string& fit,
            bool no_crossover) {
    const std::vector<double> series = read_single_column(input);
    finnet::DfaOptions options;
    options.want_crossover = !no_crossover;
    if (!fit.empty()) options.fit_range = parse_window(fit);
    const finnet::DfaResult result = finnet::analyze_series(series, options);

    const std::string stem = fs::path(input).stem().string();
    const fs::path root(out_dir);
    std::ostringstream csv;
    csv << "scale,F\n";
    for (std::size_t k = 0; k < result.scales.size(); ++k) {
        csv << result.scales[k] << ',' << finnet::fmt_double(result.fluctuations[k]) << '\n';
    }
    write_file(root / ("dfa_" + stem + ".csv"), csv.str());

    json sidecar;
    sidecar["theta"] = result.theta;
    sidecar["fit_range"] = {result.fit_range.first, result.fit_range.second};
    if (result.crossover) {
        sidecar["crossover"] = {{"t_c", result.crossover->t_c},
                                {"theta_below", result.crossover->theta_below},
                                {"theta_above", result.crossover->theta_above},
                                {"sse_gain", result.crossover->sse_gain}};
    } else {
        sidecar["crossover"] = nullptr;
    }
    write_file(root / ("dfa_" + stem + ".json"), sidecar.dump(2) + "\n");

    std::cout << "theta = " << result.theta;
    if (result.crossover) {
        std::cout << "  (crossover at t_c = " << result.crossover->t_c << ", "
                  << result.crossover->theta_below << " -> " << result.crossover->theta_above
                  << ")";
    }
    std::cout << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"correlation-network market analysis"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "run the full pipeline on a price panel");
    finnet::RunConfig overrides;
    std::string config_path;
    std::vector<std::string> windows_raw;
    std::string multipliers_raw;
    std::string dfa_series_raw;
    std::string parallelism_raw;
    auto* opt_config = analyze->add_option("--config", config_path, "key = value config file");
    auto* opt_prices = analyze->add_option("--prices", overrides.input_prices, "price panel CSV");
    auto* opt_sectors =
        analyze->add_option("--sectors", overrides.input_sectors, "stock_id,sector_code CSV");
    auto* opt_threshold =
        analyze->add_option("--threshold", overrides.threshold, "static | dynamic | both");
    auto* opt_multipliers =
        analyze->add_option("--multipliers", multipliers_raw, "comma-separated list, e.g. 0.5,1,2");
    auto* opt_dfa_series =
        analyze->add_option("--dfa-series", dfa_series_raw,
                            "comma-separated subset of clustering,degree,assortativity");
    auto* opt_window =
        analyze->add_option("--window", windows_raw, "a:b day window for windowed degree (repeatable)")
            ->take_all();
    auto* opt_out = analyze->add_option("--out", overrides.output_dir, "output directory");
    auto* opt_parallelism =
        analyze->add_option("--parallelism", parallelism_raw, "worker count or 'auto'");
    auto* opt_top_m = analyze->add_option("--top-m", overrides.top_m, "eigenvectors to report");

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic market panel");
    finnet::MarketSpec spec;
    std::string synth_out = "synth";
    std::vector<std::string> regimes_raw;
    synth->add_option("--n-stocks", spec.n_stocks, "number of stocks");
    synth->add_option("--n-days", spec.n_days, "number of return days T");
    synth->add_option("--beta", spec.market_beta, "market factor loading");
    synth->add_option("--sectors", spec.n_sectors, "number of sectors");
    synth->add_option("--gamma", spec.sector_gamma, "sector factor loading");
    synth->add_option("--noise-sigma", spec.noise_sigma, "idiosyncratic noise scale");
    synth->add_option("--regime", regimes_raw, "a:b:mult volatility window (repeatable)")
        ->take_all();
    synth->add_option("--seed", spec.seed, "generator seed");
    synth->add_option("--out", synth_out, "output directory");

    // dfa
    auto* dfa = app.add_subcommand("dfa", "detrended fluctuation analysis of one series");
    std::string dfa_input;
    std::string dfa_out = ".";
    std::string dfa_fit;
    bool dfa_no_crossover = false;
    dfa->add_option("--input", dfa_input, "single-column CSV of the series")->required();
    dfa->add_option("--out", dfa_out, "output directory");
    dfa->add_option("--fit", dfa_fit, "fit range lo:hi in scale units");
    dfa->add_flag("--no-crossover", dfa_no_crossover, "skip the crossover scan");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (analyze->parsed()) {
            finnet::RunConfig config;
            if (opt_config->count() > 0) config = finnet::load_config_file(config_path);
            if (opt_prices->count() > 0) config.input_prices = overrides.input_prices;
            if (opt_sectors->count() > 0) config.input_sectors = overrides.input_sectors;
            if (opt_threshold->count() > 0) config.threshold = overrides.threshold;
            if (opt_multipliers->count() > 0) {
                config.multipliers.clear();
                for (const auto& cell : finnet::split_csv_line(multipliers_raw)) {
                    double m = 0.0;
                    if (!finnet::parse_double(cell, m)) {
                        throw finnet::ValidationError("bad multiplier '" + cell + "'");
                    }
                    config.multipliers.push_back(m);
                }
            }
            if (opt_dfa_series->count() > 0) {
                config.dfa_series.clear();
                for (const auto& cell : finnet::split_csv_line(dfa_series_raw)) {
                    config.dfa_series.push_back(cell);
                }
            }
            if (opt_window->count() > 0) {
                config.windows.clear();
                for (const auto& w : windows_raw) config.windows.push_back(parse_window(w));
            }
            if (opt_out->count() > 0) config.output_dir = overrides.output_dir;
            if (opt_parallelism->count() > 0) {
                config.parallelism = parallelism_raw == "auto" ? 0 : std::stoi(parallelism_raw);
            }
            if (opt_top_m->count() > 0) config.top_m = overrides.top_m;
            return run_analyze(config);
        }
        if (synth->parsed()) {
            for (const auto& r : regimes_raw) {
                const std::size_t c1 = r.find(':');
                const std::size_t c2 = r.find(':', c1 == std::string::npos ? r.size() : c1 + 1);
                if (c1 == std::string::npos || c2 == std::string::npos) {
                    throw finnet::ValidationError("regime must look like a:b:mult, got '" + r + "'");
                }
                finnet::VolRegime regime;
                regime.t_start = std::stoi(r.substr(0, c1));
                regime.t_end = std::stoi(r.substr(c1 + 1, c2 - c1 - 1));
                if (!finnet::parse_double(r.substr(c2 + 1), regime.vol_multiplier)) {
                    throw finnet::ValidationError("bad regime multiplier in '" + r + "'");
                }
                spec.regimes.push_back(regime);
            }
            return run_synth(spec, synth_out);
        }
        if (dfa->parsed()) {
            return run_dfa(dfa_input, dfa_out, dfa_fit, dfa_no_crossover);
        }
    } catch (const finnet::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const finnet::NumericError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const finnet::ValidationError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const finnet::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitOk;
}
