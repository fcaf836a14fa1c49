#pragma once

// Run configuration for bh-lab: JSON file plus command-line overrides.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bhlab/errors.hpp"
#include "bhlab/models.hpp"
#include "bhlab/polynomial.hpp"
#include "bhlab/singular.hpp"

namespace bhlab::cli {

/// Invalid configuration.  `field` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class Format { csv, json, text };

struct RunConfig {
  std::string command;
  std::string target;  // verify suite or cache action

  std::string tuple_text;
  std::optional<PolyTuple> tuple;
  std::vector<std::string> irreducibility;  // one description per member

  bool oracle = false;  // model "primes": the actual primes
  bool model_given = false;
  ModelSpec model;
  std::string profile_name = "desk";
  std::optional<std::string> t_spec, z_spec, clamp_spec;
  bool custom_thresholds = false;

  std::optional<std::uint64_t> x, y, lo, hi;
  std::uint64_t trials = 100;
  std::uint64_t cutoff = 1000000;
  std::uint64_t budget = kDefaultBitBudget;
  std::vector<std::uint64_t> toy_primes{3, 5, 7};

  std::string out;
  std::optional<Format> format;
  std::filesystem::path cache_dir;
  Precision precision = Precision::standard;
  unsigned threads = 1;
  bool assume_irreducible = false;
  bool timestamp = true;

  std::vector<std::string> warnings;

  /// Everything that determines the results (threads and output path are
  /// left out so they cannot change the bytes written).
  nlohmann::ordered_json resolved() const;
};

/// Flags exactly as given on the command line; unset options stay empty.
struct FlagValues {
  std::string command, target;
  std::optional<std::string> config, tuple, model, profile, t, z, clamp, range, out, format,
      cache_dir, precision, toy_primes;
  std::optional<std::uint64_t> seed, x, y, trials, budget;
  std::optional<double> cutoff, granville_y;
  std::optional<unsigned> threads;
  bool assume_irreducible = false;
  bool no_timestamp = false;
};

/// Merges defaults, the config file, BH_LAB_CACHE and flags (in that order of
/// increasing priority), then validates.  Throws ConfigError.
RunConfig resolve_config(const FlagValues& flags);

/// Applies a JSON document to `cfg`, rejecting unknown keys.
void apply_json(const nlohmann::json& doc, RunConfig& cfg);

std::string format_name(Format f);

}  // namespace bhlab::cli
