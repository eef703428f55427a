#include "lapmor/cli/csv.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <locale>
#include <sstream>

#include "lapmor/errors.hpp"

namespace lapmor::cli {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << v;
  return os.str();
}

std::string format_hash(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

void CsvTable::add_row(std::vector<Cell> row) {
  if (row.size() != header_.size())
    throw Error("csv row has " + std::to_string(row.size()) + " cells, header has " +
                std::to_string(header_.size()));
  rows_.push_back(std::move(row));
}

std::string CsvTable::render(std::uint64_t config_hash) const {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  auto join = [&](const auto& cells, auto fmt) {
    for (std::size_t k = 0; k < cells.size(); ++k) os << (k ? "," : "") << fmt(cells[k]);
    os << '\n';
  };
  join(header_, [](const std::string& s) { return s; });
  for (const auto& row : rows_) {
    join(row, [](const Cell& c) {
      if (const auto* s = std::get_if<std::string>(&c)) return *s;
      if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
      return format_real(std::get<double>(c));
    });
  }
  os << "# config_hash=" << format_hash(config_hash) << '\n';
  os << "# code_version=" << kCodeVersion << '\n';
  for (const auto& [k, v] : meta_) os << "# " << k << '=' << v << '\n';
  return os.str();
}

void CsvTable::write(const std::string& path, std::uint64_t config_hash) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << render(config_hash);
  if (!out) throw Error("write failed for " + path);
}

}  // namespace lapmor::cli
