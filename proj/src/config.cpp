#include "scdde/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace scdde {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

using Section = std::vector<std::pair<std::string, std::string>>;

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  const auto out = std::stoull(v, &used);
  if (used != v.size()) throw std::invalid_argument("config: bad integer for " + key + ": " + v);
  return out;
}

long to_long(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  const auto out = std::stol(v, &used);
  if (used != v.size()) throw std::invalid_argument("config: bad integer for " + key + ": " + v);
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  const auto out = std::stod(v, &used);
  if (used != v.size()) throw std::invalid_argument("config: bad number for " + key + ": " + v);
  return out;
}

void apply(SimConfig& cfg, const std::string& key, const std::string& value, const std::filesystem::path& base) {
  if (key == "scheme") cfg.scheme = parse_scheme(value);
  else if (key == "modulation") cfg.modulation.kind = parse_modulation(value);
  else if (key == "N") cfg.frame.N = to_long(key, value);
  else if (key == "L") cfg.frame.L = to_long(key, value);
  else if (key == "K") cfg.frame.K = to_long(key, value);
  else if (key == "J") cfg.frame.J = static_cast<int>(to_long(key, value));
  else if (key == "cp") cfg.frame.n_cp = to_long(key, value);
  else if (key == "Es") cfg.frame.Es = cfg.modulation.Es = to_double(key, value);
  else if (key == "profile") {
    cfg.profile_ref = value;
    cfg.profile = resolve_profile(value, base);
  } else if (key == "guard") {
    if (value == "none") cfg.guard.reset();
    else cfg.guard = to_long(key, value);
  } else if (key == "pilot_l") cfg.pilot_l = to_long(key, value);
  else if (key == "pilot_k") cfg.pilot_k = to_long(key, value);
  else if (key == "pilot_energy_ratio") cfg.pilot_energy_ratio = to_double(key, value);
  else if (key == "csi") {
    if (value == "ideal") cfg.csi = Csi::ideal;
    else if (value == "estimated") cfg.csi = Csi::estimated;
    else throw std::invalid_argument("config: csi must be ideal or estimated");
  } else if (key == "coding") {
    if (value == "off") cfg.coded = false;
    else if (value == "ldpc") cfg.coded = true;
    else throw std::invalid_argument("config: coding must be off or ldpc");
  } else if (key == "code_seed") cfg.code_seed = to_u64(key, value);
  else if (key == "decoder_iterations") cfg.decoder_iterations = static_cast<int>(to_long(key, value));
  else if (key == "snr_db") cfg.snr_db = parse_snr_list(value);
  else if (key == "blocks") cfg.blocks = to_u64(key, value);
  else if (key == "max_blocks") cfg.max_blocks = to_u64(key, value);
  else if (key == "target_bit_errors") cfg.target_bit_errors = to_u64(key, value);
  else if (key == "target_block_errors") cfg.target_block_errors = to_u64(key, value);
  else if (key == "seed") cfg.seed = to_u64(key, value);
  else if (key == "workers") cfg.workers = static_cast<int>(to_long(key, value));
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

}  // namespace

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::sc_dde: return "SC-DDE";
    case Scheme::otfs: return "OTFS";
    case Scheme::sc_fde: return "SC-FDE";
    case Scheme::ofdm: return "OFDM";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  for (auto s : {Scheme::sc_dde, Scheme::otfs, Scheme::sc_fde, Scheme::ofdm})
    if (to_string(s) == name) return s;
  throw std::invalid_argument("unknown scheme: " + std::string(name));
}

std::optional<PilotLayout> SimConfig::pilot_layout() const {
  if (!guard) return std::nullopt;
  PilotLayout p;
  p.l_pilot = pilot_l;
  p.k_pilot = pilot_k;
  p.guard = *guard;
  p.energy = pilot_energy_ratio * static_cast<double>(grid_K()) * frame.Es;
  return p;
}

Index SimConfig::data_symbols() const {
  if (!guard) return frame.N;
  return data_capacity(grid_L(), grid_K(), *guard).n_data;
}

double SimConfig::transmit_energy() const {
  const auto pilot = pilot_layout();
  if (!pilot) return frame.Es;
  return (static_cast<double>(data_symbols()) * frame.Es + pilot->energy) / static_cast<double>(frame.N);
}

std::string SimConfig::display_label() const {
  if (!label.empty()) return label;
  std::string out = std::string(to_string(scheme)) + "/" + std::string(to_string(modulation.kind));
  if (guard) out += "/Lg" + std::to_string(*guard);
  if (csi == Csi::estimated) out += "/est";
  return out;
}

void SimConfig::validate() const {
  frame.validate();
  if (modulation.Es != frame.Es) throw std::invalid_argument("config: modulation Es differs from frame Es");
  if (scheme == Scheme::sc_dde || scheme == Scheme::otfs)
    check_dd_feasibility(profile.max_delay(), profile.max_doppler(), frame.L, frame.K);
  if (const auto pilot = pilot_layout()) {
    if (scheme == Scheme::ofdm || scheme == Scheme::sc_fde)
      throw std::invalid_argument("config: embedded pilots apply to SC-DDE and OTFS only");
    pilot->validate(grid_L(), grid_K());
    if (csi == Csi::estimated && pilot->guard < profile.max_delay())
      throw std::invalid_argument("config: L_guard must be at least the profile's maximum delay tap");
  }
  if (csi == Csi::estimated && !guard) throw std::invalid_argument("config: estimated CSI needs an embedded pilot");
  if (coded) {
    const Index n = data_symbols() * modulation.bits_per_symbol();
    if (n < 24 || n % 2 != 0) throw std::invalid_argument("config: code length must be even and >= 24");
  }
  if (decoder_iterations < 1) throw std::invalid_argument("config: decoder_iterations must be >= 1");
  if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
}

std::vector<double> parse_snr_list(const std::string& text) {
  std::vector<double> out;
  const std::string t = trim(text);
  if (t.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(to_double("snr_db", trim(item)));
    if (parts.size() != 3 || !(parts[1] > 0.0)) throw std::invalid_argument("snr_db: expected start:step:stop");
    const auto count = static_cast<long>(std::floor((parts[2] - parts[0]) / parts[1] + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[1]);
  } else {
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double("snr_db", trim(item)));
  }
  if (out.empty()) throw std::invalid_argument("snr_db: empty list");
  return out;
}

ChannelProfile resolve_profile(const std::string& ref, const std::filesystem::path& base_dir) {
  if (ref == "table2") return ChannelProfile(profile_table2(), true, Fading::rayleigh);
  if (ref == "awgn") return ChannelProfile({{0, 0}}, true, Fading::fixed);
  std::filesystem::path p(ref);
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  return load_profile(p);
}

std::vector<SimConfig> parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  Section defaults;
  std::vector<std::pair<std::string, Section>> runs;
  Section* current = &defaults;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw std::invalid_argument("config line " + std::to_string(line_no) + ": bad section");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name == "defaults") {
        current = &defaults;
      } else if (name.rfind("run", 0) == 0) {
        runs.emplace_back(trim(name.substr(3)), Section{});
        current = &runs.back().second;
      } else {
        throw std::invalid_argument("config line " + std::to_string(line_no) + ": unknown section " + name);
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    current->emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  if (runs.empty()) runs.emplace_back("", Section{});

  std::vector<SimConfig> out;
  for (const auto& [label, section] : runs) {
    SimConfig cfg;
    cfg.label = label;
    for (const auto& [k, v] : defaults) apply(cfg, k, v, base_dir);
    for (const auto& [k, v] : section) apply(cfg, k, v, base_dir);
    cfg.workers = worker_override(cfg.workers);
    cfg.validate();
    out.push_back(std::move(cfg));
  }
  return out;
}

std::vector<SimConfig> load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open config " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), file.parent_path());
}

int worker_override(int fallback) {
  if (const char* env = std::getenv("SCDDE_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return fallback;
}

}  // namespace scdde
