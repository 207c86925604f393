#pragma once

// CSV and JSON artifact writers. Numbers use shortest round-trip formatting so
// identical runs give identical bytes.

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace henon::io {

std::string format_double(double x);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    void add_row(std::vector<std::string> cells);
    void add_numeric_row(const std::vector<double>& values);

    [[nodiscard]] const std::vector<std::string>& header() const { return header_; }
    [[nodiscard]] std::size_t rows() const { return rows_.size(); }
    [[nodiscard]] std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Columns of equal length become CSV columns.
CsvWriter columns_to_csv(const std::vector<std::string>& header, const std::vector<const std::vector<double>*>& columns);

/// JSON with sorted keys; NaN and infinities become null.
std::string dump_json(const nlohmann::json& value);

/// Nonfinite doubles map to null.
nlohmann::json number(double x);
nlohmann::json numbers(const std::vector<double>& xs);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& bytes);

} // namespace henon::io
