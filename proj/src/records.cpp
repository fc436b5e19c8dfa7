#include "scdde/records.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace scdde {

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::ber_uncoded: return "BER-uncoded";
    case Metric::ber_coded: return "BER-coded";
    case Metric::papr_sample: return "PAPR-sample";
  }
  return "?";
}

Metric parse_metric(std::string_view name) {
  for (auto m : {Metric::ber_uncoded, Metric::ber_coded, Metric::papr_sample})
    if (to_string(m) == name) return m;
  throw std::invalid_argument("unknown metric kind: " + std::string(name));
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<SimRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    if (r.scheme.find_first_of(",\n") != std::string::npos)
      throw std::invalid_argument("write_csv: scheme label contains a separator");
    out << r.scheme << ',' << to_string(r.metric) << ',' << format_number(r.snr_db) << ','
        << format_number(r.value) << ',' << r.num << ',' << r.den << ',' << r.seed << '\n';
  }
  if (!out) throw std::runtime_error("write_csv: stream failure");
}

void write_csv(const std::vector<SimRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path.string());
  write_csv(out, records);
  out.flush();
  if (!out) throw std::runtime_error("write_csv: write failed for " + path.string());
}

std::vector<SimRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw std::invalid_argument("read_csv: missing or wrong header");
  std::vector<SimRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 7) throw std::invalid_argument("read_csv: expected 7 fields: " + line);
    SimRecord r;
    r.scheme = fields[0];
    r.metric = parse_metric(fields[1]);
    r.snr_db = std::stod(fields[2]);
    r.value = std::stod(fields[3]);
    r.num = std::stoull(fields[4]);
    r.den = std::stoull(fields[5]);
    r.seed = std::stoull(fields[6]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace scdde
