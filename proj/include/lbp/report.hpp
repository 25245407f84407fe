#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lbp/experiments.hpp"

namespace lbp {

std::string_view tool_version();

// 12 significant digits; "nan" / "inf" / "-inf" for non-finite values.
std::string format_number(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // LF line endings, header first; header-only when there are no rows.
    std::string render() const;
    std::size_t column(std::string_view name) const;  // throws if absent
    bool has_column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text);

inline const std::vector<std::string> kGrowthColumns{"model", "p",      "trials",    "successes", "p_hat",
                                                     "ci_low", "ci_high", "alpha_hat", "kappa",     "seed"};
inline const std::vector<std::string> kScanColumns{"L", "p", "trials", "spanned_fraction", "p_log_L_minus_lambda"};

CsvTable growth_table(const std::vector<GrowthEstimate>& rows);
CsvTable scan_table(const std::vector<ScanRow>& rows);

// Rows for fit_correction from a growth CSV. With a lambda, alpha is recomputed
// from p_hat as 2*lambda + p*log(p_hat); otherwise the alpha_hat column is used.
// Weights come from the delta-method variance of log(alpha) when the trials and
// successes columns are present, else 1.
std::vector<FitRow> fit_rows_from_growth_csv(const CsvTable& table, std::optional<double> lambda);

std::string sha256_hex(std::string_view data);

struct RunManifest {
    std::string subcommand;
    std::map<std::string, std::string> parameters;  // flag -> value, enough to re-run
    std::uint64_t seed = 0;
    std::string tool_version;
    std::string started_at;
    std::string finished_at;
    std::map<std::string, std::string> output_digests;  // file name -> sha256

    std::string to_json() const;
    static RunManifest from_json(std::string_view text);
};

std::string utc_timestamp();

// sweep.csv -> sweep.manifest.json
std::filesystem::path manifest_path_for(const std::filesystem::path& csv_path);

// Writes the CSV and its manifest (with the CSV digest filled in). Throws
// std::runtime_error naming the path on I/O failure.
RunManifest write_outputs(const CsvTable& table, const std::filesystem::path& csv_path, RunManifest manifest);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace lbp
