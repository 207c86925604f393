#include "henon/io.hpp"

#include "henon/params.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace henon::io {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {
    if (header_.empty()) throw HenonError("CSV header must not be empty");
}

void CsvWriter::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) throw HenonError("CSV row width does not match the header");
    rows_.push_back(std::move(cells));
}

void CsvWriter::add_numeric_row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_double(v));
    add_row(std::move(cells));
}

namespace {
std::string quote(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void append_line(std::string& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += quote(cells[i]);
    }
    out += '\n';
}
} // namespace

std::string CsvWriter::str() const {
    std::string out;
    append_line(out, header_);
    for (const auto& row : rows_) append_line(out, row);
    return out;
}

CsvWriter columns_to_csv(const std::vector<std::string>& header, const std::vector<const std::vector<double>*>& columns) {
    if (header.size() != columns.size()) throw HenonError("CSV header and column count differ");
    CsvWriter csv(header);
    const std::size_t rows = columns.empty() ? 0 : columns.front()->size();
    for (const auto* col : columns) {
        if (col->size() != rows) throw HenonError("CSV columns have different lengths");
    }
    for (std::size_t i = 0; i < rows; ++i) {
        std::vector<double> row;
        row.reserve(columns.size());
        for (const auto* col : columns) row.push_back((*col)[i]);
        csv.add_numeric_row(row);
    }
    return csv;
}

std::string dump_json(const nlohmann::json& value) { return value.dump(2) + "\n"; }

nlohmann::json number(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

nlohmann::json numbers(const std::vector<double>& xs) {
    nlohmann::json out = nlohmann::json::array();
    for (double x : xs) out.push_back(number(x));
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw HenonError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw HenonError("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw HenonError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw HenonError("SHA-256 digest failed");
    }
    std::ostringstream hex;
    for (unsigned int i = 0; i < length; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return hex.str();
}

} // namespace henon::io
