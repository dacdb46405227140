#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace finnet {

/// Raw daily price panel: N stocks over T+1 days, all cells present and positive.
struct PricePanel {
    std::vector<std::string> stock_ids;            // length N, unique
    std::vector<std::string> dates;                // length T+1, strictly increasing
    Eigen::MatrixXd prices;                        // N x (T+1), strictly positive
    std::map<std::string, std::string> sectors;    // optional stock_id -> sector code

    int n_stocks() const { return static_cast<int>(stock_ids.size()); }
    int n_days() const { return static_cast<int>(dates.size()); }      // T+1
    int n_returns() const { return n_days() - 1; }                     // T

    /// Enforce the panel invariants (positivity, completeness, N >= 3, T >= 2).
    void validate() const;
};

/// Normalized returns r_i(t): per row zero mean, unit population standard deviation.
struct ReturnMatrix {
    std::vector<std::string> stock_ids;
    Eigen::MatrixXd values;        // N x T
    Eigen::VectorXd raw_means;     // <R_i>
    Eigen::VectorXd raw_stds;      // population sigma_i, strictly positive

    int n_stocks() const { return static_cast<int>(values.rows()); }
    int n_steps() const { return static_cast<int>(values.cols()); }
};

/// Parse the `date,ID1,...,IDN` price CSV. Errors carry 1-based (row, col).
PricePanel parse_prices(std::istream& in);
PricePanel load_prices(const std::string& path);

/// Parse the `stock_id,sector_code` CSV against a known id set.
std::map<std::string, std::string> parse_sectors(std::istream& in,
                                                 const std::vector<std::string>& known_ids);
void load_sectors(const std::string& path, PricePanel& panel);

/// Serialize back to CSV; numeric cells round-trip to full precision.
std::string serialize_prices(const PricePanel& panel);

/// Log-returns: entry (i, t) = ln P_i(t+1) - ln P_i(t), N x T.
Eigen::MatrixXd log_returns(const PricePanel& panel);

/// Normalize raw returns row-wise with the population standard deviation.
ReturnMatrix normalize_returns(const Eigen::MatrixXd& raw,
                               const std::vector<std::string>& stock_ids);

/// Convenience: panel -> log returns -> normalized returns.
ReturnMatrix returns_from_panel(const PricePanel& panel);

} // namespace finnet
