#include "lbp/report.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#ifndef LBP_VERSION
#define LBP_VERSION "0.0.0"
#endif

namespace lbp {

std::string_view tool_version() { return LBP_VERSION; }

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string CsvTable::render() const {
    std::string out;
    const auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
}

bool CsvTable::has_column(std::string_view name) const {
    return std::find(header.begin(), header.end(), name) != header.end();
}

std::size_t CsvTable::column(std::string_view name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::runtime_error("CSV has no column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - header.begin());
}

CsvTable parse_csv(std::string_view text) {
    CsvTable t;
    std::size_t pos = 0;
    bool first = true;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t c = 0;
        for (;;) {
            const std::size_t comma = line.find(',', c);
            cells.emplace_back(line.substr(c, comma == std::string_view::npos ? std::string_view::npos : comma - c));
            if (comma == std::string_view::npos) break;
            c = comma + 1;
        }
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            if (cells.size() != t.header.size())
                throw std::runtime_error("CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                                         std::to_string(t.header.size()));
            t.rows.push_back(std::move(cells));
        }
    }
    if (first) throw std::runtime_error("CSV is empty (no header)");
    return t;
}

CsvTable growth_table(const std::vector<GrowthEstimate>& rows) {
    CsvTable t{kGrowthColumns, {}};
    for (const auto& e : rows) {
        t.rows.push_back({std::string(e.variant.name()), format_number(e.p), std::to_string(e.trials),
                          std::to_string(e.successes), format_number(e.p_hat), format_number(e.ci_low),
                          format_number(e.ci_high), format_number(e.alpha_hat), format_number(e.kappa),
                          std::to_string(e.seed)});
    }
    return t;
}

CsvTable scan_table(const std::vector<ScanRow>& rows) {
    CsvTable t{kScanColumns, {}};
    for (const auto& r : rows) {
        t.rows.push_back({std::to_string(r.L), format_number(r.p), std::to_string(r.trials),
                          format_number(r.spanned_fraction), format_number(r.p_log_L_minus_lambda)});
    }
    return t;
}

namespace {

double to_double(const std::string& s) {
    if (s == "nan") return std::nan("");
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::runtime_error("not a number: '" + s + "'");
    return v;
}

}  // namespace

std::vector<FitRow> fit_rows_from_growth_csv(const CsvTable& table, std::optional<double> lambda) {
    const std::size_t ip = table.column("p");
    const bool counted = table.has_column("trials") && table.has_column("successes");
    std::vector<FitRow> out;
    for (const auto& r : table.rows) {
        FitRow row;
        row.p = to_double(r[ip]);
        if (lambda) {
            const double p_hat = to_double(r[table.column("p_hat")]);
            row.alpha = p_hat > 0.0 ? 2.0 * *lambda + row.p * std::log(p_hat) : std::nan("");
        } else {
            row.alpha = to_double(r[table.column("alpha_hat")]);
        }
        row.weight = 1.0;
        if (counted) {
            const double n = to_double(r[table.column("trials")]);
            const double x = to_double(r[table.column("successes")]);
            if (n > 0 && x > 0 && std::isfinite(row.alpha) && row.alpha > 0) {
                // Var(log alpha) ~ p^2 (1 - x/n) / (x alpha^2)
                const double tail = (1.0 - x / n) + 1.0 / n;
                row.weight = row.alpha * row.alpha * x / (row.p * row.p * tail);
            }
        }
        out.push_back(row);
    }
    return out;
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    std::ostringstream os;
    for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return os.str();
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["subcommand"] = subcommand;
    j["parameters"] = parameters;
    j["seed"] = seed;
    j["tool_version"] = tool_version;
    j["started_at"] = started_at;
    j["finished_at"] = finished_at;
    j["output_digests"] = output_digests;
    return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(std::string_view text) {
    const auto j = nlohmann::json::parse(text);
    RunManifest m;
    m.subcommand = j.at("subcommand").get<std::string>();
    m.parameters = j.at("parameters").get<std::map<std::string, std::string>>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.tool_version = j.value("tool_version", "");
    m.started_at = j.value("started_at", "");
    m.finished_at = j.value("finished_at", "");
    if (j.contains("output_digests")) m.output_digests = j.at("output_digests").get<std::map<std::string, std::string>>();
    return m;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::filesystem::path manifest_path_for(const std::filesystem::path& csv_path) {
    std::filesystem::path p = csv_path;
    p.replace_extension(".manifest.json");
    return p;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

RunManifest write_outputs(const CsvTable& table, const std::filesystem::path& csv_path, RunManifest manifest) {
    const std::string csv = table.render();
    write_file(csv_path, csv);
    manifest.output_digests[csv_path.filename().string()] = sha256_hex(csv);
    if (manifest.tool_version.empty()) manifest.tool_version = std::string(tool_version());
    write_file(manifest_path_for(csv_path), manifest.to_json());
    return manifest;
}

}  // namespace lbp
