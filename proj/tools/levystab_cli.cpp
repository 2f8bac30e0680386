// Command-line front end. Talks to the library only through levystab.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "levystab/levystab.h"

namespace {

struct CommonFlags {
  std::optional<unsigned long long> seed;
  std::string out;
  std::string format;
  std::string config_path;
  std::vector<std::string> sets;
};

struct ConfigDeleter {
  void operator()(lvs_config* c) const { lvs_config_free(c); }
};
struct ReportDeleter {
  void operator()(lvs_report* r) const { lvs_report_free(r); }
};

int report_error(lvs_status status, const std::string& what) {
  std::cerr << "levystab: " << what;
  const std::string detail = lvs_last_error();
  if (!detail.empty()) std::cerr << ": " << detail;
  std::cerr << '\n';
  return static_cast<int>(status);
}

int run(const std::string& command, const CommonFlags& flags) {
  std::unique_ptr<lvs_config, ConfigDeleter> cfg(lvs_config_new());
  if (!cfg) return report_error(LVS_ERR_INTERNAL, "allocation failed");

  lvs_status st = LVS_OK;
  if (!flags.config_path.empty()) {
    st = lvs_config_parse_file(cfg.get(), flags.config_path.c_str());
    if (st != LVS_OK) return report_error(st, "cannot read config '" + flags.config_path + "'");
  }
  // Flags override the file: --set first, then the dedicated flags.
  for (const auto& kv : flags.sets) {
    st = lvs_config_parse_text(cfg.get(), kv.c_str());
    if (st != LVS_OK) return report_error(st, "bad --set '" + kv + "'");
  }
  if (flags.seed) {
    st = lvs_config_set(cfg.get(), "seed", std::to_string(*flags.seed).c_str());
    if (st != LVS_OK) return report_error(st, "bad --seed");
  }
  if (!flags.format.empty()) {
    st = lvs_config_set(cfg.get(), "format", flags.format.c_str());
    if (st != LVS_OK) return report_error(st, "bad --format");
  }

  lvs_report* raw = nullptr;
  st = lvs_run(command.c_str(), cfg.get(), &raw);
  std::unique_ptr<lvs_report, ReportDeleter> report(raw);
  if (!report) return report_error(st, command + " failed");

  const char* text = lvs_report_text(report.get());
  if (flags.out.empty() || flags.out == "-") {
    std::fputs(text, stdout);
    std::fflush(stdout);
  } else {
    std::ofstream os(flags.out, std::ios::binary | std::ios::trunc);
    if (!os) return report_error(LVS_ERR_CONFIG, "cannot open output '" + flags.out + "'");
    os << text;
    if (!os.flush()) return report_error(LVS_ERR_CONFIG, "write failed for '" + flags.out + "'");
  }
  if (st != LVS_OK) return report_error(st, command);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heavy-tailed SGD stability experiments and bound calculator"};
  app.set_version_flag("--version", std::string(lvs_version()));
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"gcurve", "Emit g(alpha; d) curves as CSV"},
      {"stability-sweep", "Coupled-chain stability sweep against the theoretical bounds"},
      {"moment-divergence", "Empirical p-moments of OU-stationary samples versus sample size"},
      {"validate", "Run the acceptance checks and print a pass/fail table"},
      {"bounds", "Evaluate every bound and critical constant for a configuration"},
  };

  CommonFlags flags;
  std::string chosen;
  for (const auto& s : subs) {
    auto* sc = app.add_subcommand(s.name, s.help);
    sc->add_option("--seed", flags.seed, "Master seed");
    sc->add_option("--out,-o", flags.out, "Output file (default stdout)");
    sc->add_option("--format", flags.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
    sc->add_option("--config,-c", flags.config_path, "key = value config file")->check(CLI::ExistingFile);
    sc->add_option("--set", flags.sets, "Override a config key (key=value), repeatable");
    sc->callback([&chosen, name = std::string(s.name)] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(LVS_ERR_CONFIG);
  }
  return run(chosen, flags);
}
