#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace scdde {

enum class Metric { ber_uncoded, ber_coded, papr_sample };

std::string_view to_string(Metric m);
Metric parse_metric(std::string_view name);

/// One measurement row. For BER rows value = num / den (errors / bits);
/// for PAPR rows value is the block PAPR in dB, num the block index, den 1
/// and snr_db is NaN.
struct SimRecord {
  std::string scheme;
  Metric metric = Metric::ber_uncoded;
  double snr_db = 0.0;
  double value = 0.0;
  std::uint64_t num = 0;
  std::uint64_t den = 0;
  std::uint64_t seed = 0;
  double wall_time = 0.0;  // seconds, not serialized
};

inline constexpr std::string_view kCsvHeader = "scheme,metric,snr_db,value,num,den,seed";

/// Formats a double with 12 significant digits ("nan" for NaN).
std::string format_number(double v);

void write_csv(std::ostream& out, const std::vector<SimRecord>& records);
void write_csv(const std::vector<SimRecord>& records, const std::filesystem::path& path);

/// Parses a file produced by write_csv (the reverse mapping used by
/// downstream tooling). Throws on schema violations.
std::vector<SimRecord> read_csv(std::istream& in);

}  // namespace scdde
