// Command-line front end: selftest, PAPR runs, BER sweeps.

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "scdde/config.hpp"
#include "scdde/ldpc.hpp"
#include "scdde/selftest.hpp"
#include "scdde/simulation.hpp"

namespace {

using RunFn = std::vector<scdde::SimRecord> (*)(const scdde::SimConfig&, const scdde::RecordSink&);

int run_all(const std::string& config_path, const std::string& out_path, RunFn fn, bool quiet) {
  const auto configs = scdde::load_config(config_path);
  std::vector<scdde::SimRecord> all;
  for (const auto& cfg : configs) {
    const auto records = fn(cfg, [&](const scdde::SimRecord& r) {
      if (quiet || r.metric == scdde::Metric::papr_sample) return;
      std::fprintf(stderr, "%-28s %-12s %6.2f dB  %.4e  (%llu/%llu, %.1fs)\n", r.scheme.c_str(),
                   std::string(scdde::to_string(r.metric)).c_str(), r.snr_db, r.value,
                   static_cast<unsigned long long>(r.num), static_cast<unsigned long long>(r.den), r.wall_time);
    });
    if (!quiet && !records.empty() && records.front().metric == scdde::Metric::papr_sample)
      std::fprintf(stderr, "%-28s %zu PAPR samples (%.1fs)\n", cfg.display_label().c_str(), records.size(),
                   records.front().wall_time);
    all.insert(all.end(), records.begin(), records.end());
  }
  scdde::write_csv(all, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SC-DDE link-level simulator"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Suppress progress output");

  app.add_subcommand("selftest", "Run the cross-module oracle suite");

  std::string papr_cfg, papr_out;
  auto* papr = app.add_subcommand("papr", "Per-block PAPR samples");
  papr->add_option("--config", papr_cfg, "Config file")->required()->check(CLI::ExistingFile);
  papr->add_option("--out", papr_out, "Output CSV")->required();

  std::string ber_cfg, ber_out;
  auto* ber = app.add_subcommand("ber", "BER sweep");
  ber->add_option("--config", ber_cfg, "Config file")->required()->check(CLI::ExistingFile);
  ber->add_option("--out", ber_out, "Output CSV")->required();

  long alist_n = 0;
  std::uint64_t alist_seed = 1;
  std::string alist_out;
  auto* alist = app.add_subcommand("alist", "Write the (3,6) parity-check matrix in alist format");
  alist->add_option("-n", alist_n, "Code length")->required();
  alist->add_option("--seed", alist_seed, "Construction seed");
  alist->add_option("--out", alist_out, "Output file (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("selftest")) return scdde::selftest(std::cout) ? 0 : 1;
    if (app.got_subcommand(papr)) return run_all(papr_cfg, papr_out, &scdde::run_papr, quiet);
    if (app.got_subcommand(ber)) return run_all(ber_cfg, ber_out, &scdde::run_ber, quiet);
    if (app.got_subcommand(alist)) {
      const auto code = scdde::build_ldpc(alist_n, alist_seed);
      if (alist_out.empty()) {
        scdde::write_alist(std::cout, code);
      } else {
        std::ofstream out(alist_out);
        scdde::write_alist(out, code);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
