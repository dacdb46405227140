#pragma once

#include <string>
#include <utility>
#include <vector>

namespace finnet {

/// Everything `analyze` needs. Flags override config-file keys; the effective
/// configuration is echoed into the run manifest.
struct RunConfig {
    std::string input_prices;
    std::string input_sectors;                       // empty = no sectors file
    std::string threshold = "both";                  // static | dynamic | both
    std::vector<double> multipliers = {0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0};
    std::vector<std::string> dfa_series = {"clustering", "degree", "assortativity"};
    std::vector<std::pair<int, int>> windows;        // 1-based closed [a, b]
    std::string output_dir = "out";
    int parallelism = 0;                             // 0 = auto
    int top_m = 4;                                   // eigenvectors reported

    void validate() const;
};

/// Parse a `key = value` config file (# comments, blank lines allowed).
RunConfig load_config_file(const std::string& path);

struct RunResult {
    std::string manifest_path;
    std::vector<std::string> artifacts;   // relative paths, sorted
};

/// Run the full pipeline and emit every artifact plus `manifest.json`.
/// Reruns with identical inputs and config produce identical bytes at any
/// parallelism. Partial outputs are removed when the run fails.
RunResult run_pipeline(const RunConfig& config);

} // namespace finnet
