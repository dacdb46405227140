#include "finnet/market_data.hpp"

#include "finnet/common.hpp"
#include "finnet/util.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

namespace finnet {

void PricePanel::validate() const {
    const int n = n_stocks();
    if (n < 3) throw ValidationError("panel needs at least 3 stocks, got " + std::to_string(n));
    if (n_days() < 3) {
        throw ValidationError("panel needs at least 3 dates (T >= 2), got " + std::to_string(n_days()));
    }
    if (prices.rows() != n || prices.cols() != n_days()) {
        throw ValidationError("price matrix shape does not match ids/dates");
    }
    std::set<std::string> seen;
    for (const auto& id : stock_ids) {
        if (!seen.insert(id).second) throw ValidationError("duplicate stock id: " + id);
    }
    for (std::size_t d = 1; d < dates.size(); ++d) {
        if (!(dates[d - 1] < dates[d])) throw ValidationError("dates not strictly increasing");
    }
    for (int i = 0; i < n; ++i) {
        for (int d = 0; d < n_days(); ++d) {
            const double p = prices(i, d);
            if (!(p > 0.0) || !std::isfinite(p)) {
                throw ValidationError("non-positive price for stock " + stock_ids[i] +
                                      " on date " + dates[d]);
            }
        }
    }
}

PricePanel parse_prices(std::istream& in) {
    PricePanel panel;
    std::string line;
    int row = 0;

    if (!std::getline(in, line)) throw ParseError("empty input, expected header", 1, 1);
    ++row;
    const auto header = split_csv_line(line);
    if (header.empty() || header[0] != "date") {
        throw ParseError("header must start with 'date'", 1, 1);
    }
    if (header.size() < 2) throw ParseError("header lists no stock ids", 1, 2);
    std::set<std::string> seen;
    for (std::size_t c = 1; c < header.size(); ++c) {
        if (header[c].empty()) throw ParseError("empty stock id", 1, static_cast<int>(c + 1));
        if (!seen.insert(header[c]).second) {
            throw ParseError("duplicate stock id '" + header[c] + "'", 1, static_cast<int>(c + 1));
        }
        panel.stock_ids.push_back(header[c]);
    }
    const int n = panel.n_stocks();

    std::vector<std::vector<double>> day_rows;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (static_cast<int>(cells.size()) != n + 1) {
            throw ParseError("ragged row: expected " + std::to_string(n + 1) + " cells, got " +
                                 std::to_string(cells.size()),
                             row, 1);
        }
        if (cells[0].empty()) throw ParseError("empty date", row, 1);
        if (!panel.dates.empty() && !(panel.dates.back() < cells[0])) {
            throw ParseError("dates not strictly increasing ('" + panel.dates.back() +
                                 "' then '" + cells[0] + "')",
                             row, 1);
        }
        panel.dates.push_back(cells[0]);
        std::vector<double> vals(n);
        for (int c = 0; c < n; ++c) {
            double v = 0.0;
            if (!parse_double(cells[c + 1], v)) {
                throw ParseError("non-numeric price '" + cells[c + 1] + "'", row, c + 2);
            }
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw ParseError("non-positive price", row, c + 2);
            }
            vals[c] = v;
        }
        day_rows.push_back(std::move(vals));
    }

    const int days = static_cast<int>(day_rows.size());
    panel.prices.resize(n, days);
    for (int d = 0; d < days; ++d) {
        for (int i = 0; i < n; ++i) panel.prices(i, d) = day_rows[d][i];
    }
    panel.validate();
    return panel;
}

PricePanel load_prices(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open prices file: " + path);
    return parse_prices(in);
}

std::map<std::string, std::string> parse_sectors(std::istream& in,
                                                 const std::vector<std::string>& known_ids) {
    std::set<std::string> known(known_ids.begin(), known_ids.end());
    std::map<std::string, std::string> sectors;
    std::string line;
    int row = 0;
    if (!std::getline(in, line)) throw ParseError("empty sectors file", 1, 1);
    ++row;
    const auto header = split_csv_line(line);
    if (header.size() != 2 || header[0] != "stock_id" || header[1] != "sector_code") {
        throw ParseError("sectors header must be 'stock_id,sector_code'", 1, 1);
    }
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 2) throw ParseError("expected 2 cells", row, 1);
        if (!known.count(cells[0])) {
            throw ParseError("unknown stock id '" + cells[0] + "'", row, 1);
        }
        if (cells[1].empty()) throw ParseError("empty sector code", row, 2);
        if (sectors.count(cells[0])) {
            throw ParseError("duplicate stock id '" + cells[0] + "'", row, 1);
        }
        sectors[cells[0]] = cells[1];
    }
    return sectors;
}

void load_sectors(const std::string& path, PricePanel& panel) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open sectors file: " + path);
    panel.sectors = parse_sectors(in, panel.stock_ids);
}

std::string serialize_prices(const PricePanel& panel) {
    std::ostringstream out;
    out << "date";
    for (const auto& id : panel.stock_ids) out << ',' << id;
    out << '\n';
    for (int d = 0; d < panel.n_days(); ++d) {
        out << panel.dates[d];
        for (int i = 0; i < panel.n_stocks(); ++i) out << ',' << fmt_double(panel.prices(i, d));
        out << '\n';
    }
    return out.str();
}

Eigen::MatrixXd log_returns(const PricePanel& panel) {
    panel.validate();
    const int n = panel.n_stocks();
    const int t = panel.n_returns();
    Eigen::MatrixXd returns(n, t);
    for (int i = 0; i < n; ++i) {
        for (int d = 0; d < t; ++d) {
            // Ratio form of ln P(t+1) - ln P(t); avoids cancellation for
            // small moves and makes per-stock rescaling exact.
            returns(i, d) = std::log(panel.prices(i, d + 1) / panel.prices(i, d));
        }
    }
    return returns;
}

ReturnMatrix normalize_returns(const Eigen::MatrixXd& raw,
                               const std::vector<std::string>& stock_ids) {
    const int n = static_cast<int>(raw.rows());
    const int t = static_cast<int>(raw.cols());
    if (static_cast<int>(stock_ids.size()) != n) {
        throw ValidationError("stock id count does not match return rows");
    }
    if (t < 2) throw ValidationError("need at least 2 return steps");

    ReturnMatrix rm;
    rm.stock_ids = stock_ids;
    rm.values.resize(n, t);
    rm.raw_means.resize(n);
    rm.raw_stds.resize(n);
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int d = 0; d < t; ++d) sum += raw(i, d);
        const double mean = sum / t;
        double sq = 0.0;
        for (int d = 0; d < t; ++d) {
            const double c = raw(i, d) - mean;
            sq += c * c;
        }
        const double sigma = std::sqrt(sq / t);     // population form, divisor T
        if (!(sigma > 0.0)) {
            throw ValidationError("zero variance return series for stock " + stock_ids[i]);
        }
        rm.raw_means(i) = mean;
        rm.raw_stds(i) = sigma;
        for (int d = 0; d < t; ++d) rm.values(i, d) = (raw(i, d) - mean) / sigma;
    }
    return rm;
}

ReturnMatrix returns_from_panel(const PricePanel& panel) {
    return normalize_returns(log_returns(panel), panel.stock_ids);
}

} // namespace finnet
