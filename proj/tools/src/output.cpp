#include "popwave/cli/output.hpp"

#include <charconv>
#include <cmath>

#include "popwave/error.hpp"

namespace popwave::cli {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : out_(path, std::ios::binary), columns_(header.size()) {
  if (!out_) fail(ErrorKind::configuration, "cannot write " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << "\r\n";
}

void CsvWriter::row(std::span<const double> cells) {
  if (cells.size() != columns_) fail(ErrorKind::configuration, "internal: CSV row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << format_double(cells[i]);
  out_ << "\r\n";
}

void write_xy(const std::filesystem::path& path, const std::vector<double>& x,
              const std::vector<double>& y) {
  CsvWriter csv(path, {"x", "value"});
  for (std::size_t i = 0; i < x.size(); ++i) csv.row({x[i], y[i]});
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::configuration, "cannot write " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace popwave::cli
