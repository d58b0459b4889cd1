#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ddp/common.hpp"
#include "ddp/population.hpp"
#include "ddp/pricing.hpp"
#include "ddp/supply.hpp"

namespace ddp {

// Carries every violation found in one pass so users fix a config once,
// not one error at a time.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "config invalid:";
    for (const auto& s : v) out += "\n  - " + s;
    return out;
  }
  std::vector<std::string> violations_;
};

// Knobs every command shares; CLI flags override these.
struct RunDefaults {
  long samples = 100000;
  std::uint64_t seed = 0;
  int grid = 8;
  double step = 1e-2;
  bool relative_step = true;
  int workers = 1;
  std::string method = "auto";  // auto | exact | monte-carlo
  std::string format = "json";  // json | csv | md
};

struct ExperimentConfig {
  MarketConfig market;
  SupplyModel supply;
  Population population;
  RunDefaults run;
};

// Parses and cross-validates a JSON experiment description. Throws
// ConfigError carrying ALL problems (parse context, entry indices, length
// mismatches) rather than the first one found. Relative trace-file paths
// resolve against the config file's directory.
ExperimentConfig load_config(const std::string& path);

}  // namespace ddp
