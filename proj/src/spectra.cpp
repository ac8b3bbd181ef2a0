#include "phasenoise/spectra.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace phasenoise {

namespace {

constexpr std::array<std::pair<Unit, std::string_view>, 4> kUnitSymbols{{
    {Unit::frequency_noise, "rad^2*Hz"},
    {Unit::phase_noise, "rad^2/Hz"},
    {Unit::power_noise, "W^2/Hz"},
    {Unit::current_noise, "A^2/Hz"},
}};

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, sep)) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    out.push_back(field);
  }
  return out;
}

double parse_double(const std::string& text, const std::filesystem::path& path) {
  double value = 0.0;
  const auto* begin = text.data();
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw IoError(path.string() + ": cannot parse number '" + text + "'");
  }
  return value;
}

std::string format_sci(double value) {
  std::array<char, 32> buffer{};
  std::snprintf(buffer.data(), buffer.size(), "%.8e", value);
  return buffer.data();
}

}  // namespace

std::string_view unit_symbol(Unit unit) {
  for (const auto& [u, symbol] : kUnitSymbols) {
    if (u == unit) return symbol;
  }
  return "?";
}

Unit parse_unit(std::string_view symbol) {
  for (const auto& [u, s] : kUnitSymbols) {
    if (s == symbol) return u;
  }
  throw UnitMismatchError("unknown unit '" + std::string(symbol) + "'");
}

void write_csv(const std::filesystem::path& path, const CsvCurve& curve) {
  if (curve.axis.size() != curve.values.size()) throw DomainError("axis and values differ in length");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << curve.axis_name << ",value," << unit_symbol(curve.unit);
  if (curve.rbw_hz) out << ",rbw_hz=" << format_sci(*curve.rbw_hz);
  out << '\n';
  for (Eigen::Index i = 0; i < curve.axis.size(); ++i) {
    out << format_sci(curve.axis(i)) << ',' << format_sci(curve.values(i)) << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

CsvCurve read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + ": empty file");
  const auto header = split(line, ',');
  if (header.size() < 3 || header[1] != "value") {
    throw IoError(path.string() + ": header must be '<axis>,value,<unit>'");
  }
  CsvCurve curve{header[0], {}, {}, parse_unit(header[2]), std::nullopt};
  for (std::size_t i = 3; i < header.size(); ++i) {
    constexpr std::string_view key = "rbw_hz=";
    if (header[i].starts_with(key)) curve.rbw_hz = parse_double(header[i].substr(key.size()), path);
  }

  std::vector<double> axis;
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto fields = split(line, ',');
    if (fields.size() != 2) throw IoError(path.string() + ": expected 2 columns in '" + line + "'");
    axis.push_back(parse_double(fields[0], path));
    values.push_back(parse_double(fields[1], path));
  }
  curve.axis = Eigen::Map<const Eigen::ArrayXd>(axis.data(), static_cast<Eigen::Index>(axis.size()));
  curve.values = Eigen::Map<const Eigen::ArrayXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  return curve;
}

void write_trace_csv(const std::filesystem::path& path, const SpectrumTrace& trace) {
  write_csv(path, {"omega_rad_per_s", trace.omega(), trace.values(), trace.unit(), trace.rbw_hz()});
}

SpectrumTrace read_trace_csv(const std::filesystem::path& path) {
  auto curve = read_csv(path);
  if (curve.axis_name != "omega_rad_per_s") {
    throw IoError(path.string() + ": first column must be omega_rad_per_s");
  }
  return {FrequencyGrid::irregular(std::move(curve.axis)), std::move(curve.values), curve.unit, curve.rbw_hz};
}

}  // namespace phasenoise
