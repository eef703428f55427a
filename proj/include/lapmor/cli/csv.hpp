#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace lapmor::cli {

inline constexpr const char* kCodeVersion = "lapmor-0.1.0";

/// One cell: text, integer or real (17 significant digits). An empty
/// string renders as an empty field.
using Cell = std::variant<std::string, long long, double>;

/// CSV table with a fixed header and a trailing `#` metadata block.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<Cell> row);
  void add_meta(const std::string& key, const std::string& value) { meta_.emplace_back(key, value); }
  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& header() const { return header_; }

  std::string render(std::uint64_t config_hash) const;
  void write(const std::string& path, std::uint64_t config_hash) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
  std::vector<std::pair<std::string, std::string>> meta_;
};

std::string format_real(double v);
std::string format_hash(std::uint64_t h);

}  // namespace lapmor::cli
