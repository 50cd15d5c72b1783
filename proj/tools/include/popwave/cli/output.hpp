#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "popwave/cli/config.hpp"

namespace popwave::cli {

/// Shortest decimal text that round-trips to the same double ("." separator, no locale).
std::string format_double(double x);

/// RFC-4180 CSV with a mandatory header; numeric cells only.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);
  void row(std::span<const double> cells);
  void row(std::initializer_list<double> cells) { row(std::span<const double>(cells.begin(), cells.size())); }

 private:
  std::ofstream out_;
  std::size_t columns_;
};

/// Two-column x,value file.
void write_xy(const std::filesystem::path& path, const std::vector<double>& x,
              const std::vector<double>& y);

void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace popwave::cli
