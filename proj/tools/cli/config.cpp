#include "config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "bhlab/sieve.hpp"
#include "bhlab/stats.hpp"

namespace bhlab::cli {

namespace {

using nlohmann::json;

const std::set<std::string> kCommands{"check",    "constants", "predict", "sample", "count",
                                      "simulate", "series",    "verify",  "cache"};
const std::set<std::string> kSuites{"lemma22", "expectation", "pair", "factorization"};

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, _] : obj.items())
    if (!allowed.contains(key))
      throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
}

std::uint64_t as_count(const json& v, const std::string& field) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0 && d == std::floor(d) && d < 1.8e19) return static_cast<std::uint64_t>(d);
  }
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
  throw ConfigError(field, "expected a nonnegative integer");
}

std::string as_string(const json& v, const std::string& field) {
  if (!v.is_string()) throw ConfigError(field, "expected a string");
  return v.get<std::string>();
}

std::string tuple_from_json(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (!v.is_array() || v.empty()) throw ConfigError("tuple", "expected a string or a list");
  std::string text;
  for (const auto& item : v) {
    if (!text.empty()) text += ",";
    if (item.is_string()) {
      text += item.get<std::string>();
    } else if (item.is_array()) {
      text += "[";
      for (std::size_t i = 0; i < item.size(); ++i) {
        if (!item[i].is_number_integer()) throw ConfigError("tuple", "coefficients must be integers");
        text += (i ? ", " : "") + std::to_string(item[i].get<std::int64_t>());
      }
      text += "]";
    } else {
      throw ConfigError("tuple", "members must be strings or coefficient lists");
    }
  }
  return text;
}

std::vector<std::uint64_t> parse_prime_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("toy_primes", "bad entry '" + item + "'");
    }
  }
  return out;
}

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::csv;
  if (text == "json") return Format::json;
  if (text == "text") return Format::text;
  throw ConfigError("output.format", "expected csv, json or text");
}

Precision parse_precision(const std::string& text) {
  if (text == "double") return Precision::standard;
  if (text == "extended") return Precision::extended;
  throw ConfigError("precision", "expected double or extended");
}

void parse_range(const std::string& text, RunConfig& cfg) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument(text);
    std::size_t a = 0, b = 0;
    const std::string left = text.substr(0, colon), right = text.substr(colon + 1);
    cfg.lo = std::stoull(left, &a);
    cfg.hi = std::stoull(right, &b);
    if (a != left.size() || b != right.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw ConfigError("range", "expected lo:hi, got '" + text + "'");
  }
}

void apply_model_kind(const std::string& name, RunConfig& cfg) {
  cfg.model_given = true;
  if (name == "primes") {
    cfg.oracle = true;
    return;
  }
  cfg.oracle = false;
  try {
    cfg.model.kind = parse_model_kind(name);
  } catch (const ParseError& e) {
    throw ConfigError("model.kind", e.what());
  }
}

void resolve_profile(RunConfig& cfg) {
  ThresholdProfile profile;
  if (cfg.profile_name == "desk") profile = ThresholdProfile::desk();
  else if (cfg.profile_name == "asymptotic") profile = ThresholdProfile::asymptotic();
  else throw ConfigError("model.profile", "expected desk or asymptotic");
  try {
    if (cfg.t_spec) ThresholdProfile::parse_t(*cfg.t_spec, profile);
    if (cfg.z_spec) ThresholdProfile::parse_z(*cfg.z_spec, profile);
    profile.validate();
  } catch (const ProfileInvalid& e) {
    throw ConfigError("model.profile", e.what());
  }
  if (cfg.clamp_spec) {
    if (*cfg.clamp_spec == "clamp") profile.clamp = ClampPolicy::clamp;
    else if (*cfg.clamp_spec == "reject") profile.clamp = ClampPolicy::reject;
    else throw ConfigError("model.clamp", "expected clamp or reject");
  }
  cfg.custom_thresholds = cfg.t_spec.has_value() || cfg.z_spec.has_value();
  cfg.model.profile = profile;
}

// Range of integers the thresholds are evaluated on, when known.
std::optional<std::pair<std::uint64_t, std::uint64_t>> modeled_range(const RunConfig& cfg) {
  if (cfg.lo && cfg.hi) return std::pair{*cfg.lo, *cfg.hi};
  if (cfg.x) {
    const std::uint64_t x = *cfg.x;
    std::uint64_t top = x + cfg.y.value_or(0);
    if (cfg.tuple) {
      const auto v = cfg.tuple->polys.back().evaluate_u64(top);
      if (v) top = *v;
    }
    const std::uint64_t bottom = cfg.command == "simulate" ? x + 1 : cfg.model.n_min();
    return std::pair{std::max(bottom, cfg.model.n_min()), std::max(top, bottom)};
  }
  return std::nullopt;
}

void validate_tuple(RunConfig& cfg) {
  try {
    cfg.tuple = normalize_tuple(parse_tuple(cfg.tuple_text));
  } catch (const Error& e) {
    throw ConfigError("tuple", e.what());
  }
  try {
    check_admissible(*cfg.tuple);
  } catch (const Inadmissible& e) {
    throw ConfigError("tuple", e.what());
  }
  cfg.irreducibility.clear();
  for (const auto& f : cfg.tuple->polys) {
    const auto status = irreducibility_status(f);
    cfg.irreducibility.push_back(describe(status));
    if (const auto* r = std::get_if<Reducible>(&status))
      throw ConfigError("tuple", f.to_string() + " is reducible: (" + r->factor.to_string() +
                                     ") * (" + r->cofactor.to_string() + ")");
    if (std::holds_alternative<Undetermined>(status)) {
      if (!cfg.assume_irreducible)
        throw ConfigError("tuple", "irreducibility of " + f.to_string() +
                                       " is undetermined; pass --assume-irreducible");
      cfg.warnings.push_back("assuming " + f.to_string() + " is irreducible");
    }
  }
}

void require(bool ok, const std::string& field, const std::string& command) {
  if (!ok) throw ConfigError(field, "required by '" + command + "'");
}

void validate(RunConfig& cfg) {
  if (!kCommands.contains(cfg.command)) throw ConfigError("command", "unknown command '" + cfg.command + "'");
  if (cfg.command == "verify" && !kSuites.contains(cfg.target))
    throw ConfigError("target", "verify needs one of lemma22, expectation, pair, factorization");
  if (cfg.command == "cache" && cfg.target != "build" && cfg.target != "clear")
    throw ConfigError("target", "cache needs build or clear");

  resolve_profile(cfg);
  if (cfg.model.kind == ModelKind::granville && !(cfg.model.granville_y >= 2))
    throw ConfigError("model.granville_y", "must be >= 2");
  if (cfg.threads == 0) throw ConfigError("threads", "must be >= 1");
  if (cfg.cutoff < 2) throw ConfigError("cutoff", "must be >= 2");
  if (cfg.budget == 0) throw ConfigError("budget", "must be positive");
  if (cfg.lo && cfg.hi && *cfg.lo >= *cfg.hi) throw ConfigError("range", "needs lo < hi");

  const auto& c = cfg.command;
  const bool needs_tuple = c == "check" || c == "constants" || c == "predict" || c == "count" ||
                           c == "simulate" || c == "series";
  if (needs_tuple) require(!cfg.tuple_text.empty(), "tuple", c);
  if (!cfg.tuple_text.empty()) validate_tuple(cfg);

  if (c == "predict" || c == "count" || c == "series" || c == "simulate") require(cfg.x.has_value(), "x", c);
  if (c == "sample") require(cfg.lo && cfg.hi, "range", c);
  if (c == "predict" && cfg.x && *cfg.x < 2) throw ConfigError("x", "must be >= 2");
  if (c == "count" || c == "series" || c == "sample" || c == "simulate")
    require(cfg.model_given, "model", c);
  if (c == "simulate") {
    if (cfg.oracle) throw ConfigError("model.kind", "simulate needs a random model");
    if (!cfg.y) cfg.y = cfg.x;
    if (cfg.trials < 2) throw ConfigError("trials", "must be >= 2");
    const double x = static_cast<double>(*cfg.x), y = static_cast<double>(*cfg.y);
    if (!(y > std::sqrt(x) && y <= x)) throw ConfigError("y", "needs sqrt(x) < y <= x");
  }
  if (c == "sample" && !cfg.oracle && *cfg.lo < cfg.model.n_min())
    cfg.warnings.push_back("range starts below the model's n_min = " +
                           std::to_string(cfg.model.n_min()) + "; those bits are 0");
  if (c == "verify" && cfg.target == "pair") {
    try {
      (void)SievingRule::toy(cfg.toy_primes);
    } catch (const Error& e) {
      throw ConfigError("toy_primes", e.what());
    }
  }

  // Thresholds on the modeled range: custom profiles must keep t < z there;
  // the named presets are accepted and the degenerate stretch reported.
  const bool thresholds_used = cfg.model_given && !cfg.oracle &&
                               (cfg.model.kind == ModelKind::m1 || cfg.model.kind == ModelKind::m2);
  if (thresholds_used) {
    if (const auto range = modeled_range(cfg)) {
      const auto [a, b] = *range;
      const auto from = cfg.model.profile.ordered_from(a, b);
      if (!from || *from > a) {
        if (cfg.custom_thresholds) {
          try {
            cfg.model.profile.require_ordered(a, b);
          } catch (const ProfileInvalid& e) {
            throw ConfigError("model.profile", e.what());
          }
        }
        std::ostringstream msg;
        msg << "profile '" << cfg.profile_name << "' has t(n) >= z(n) on ";
        if (from) msg << "[" << a << ", " << *from - 1 << "]";
        else msg << "all of [" << a << ", " << b << "]";
        msg << "; the residue sieve is empty there";
        cfg.warnings.push_back(msg.str());
      }
      if (cfg.model.kind == ModelKind::m1 && cfg.model.profile.clamp == ClampPolicy::clamp) {
        // q(n) <= 1 needs e^gamma log t(n) <= log n roughly; warn when violated at the start
        const double n = static_cast<double>(a);
        if (std::exp(kEulerGamma) * std::log(cfg.model.profile.t(n)) > std::log(n))
          cfg.warnings.push_back("m1 probabilities may exceed 1 near n = " + std::to_string(a) +
                                 "; clamped values are counted");
      }
    }
  }
}

}  // namespace

std::string format_name(Format f) {
  switch (f) {
    case Format::csv: return "csv";
    case Format::json: return "json";
    case Format::text: return "text";
  }
  return "?";
}

void apply_json(const json& doc, RunConfig& cfg) {
  if (!doc.is_object()) throw ConfigError("config", "top level must be an object");
  reject_unknown(doc,
                 {"tuple", "model", "seed", "x", "y", "lo", "hi", "trials", "output", "cache_dir",
                  "precision", "cutoff", "budget", "toy_primes", "assume_irreducible"},
                 "");
  if (doc.contains("tuple")) cfg.tuple_text = tuple_from_json(doc["tuple"]);
  if (doc.contains("seed")) cfg.model.seed = as_count(doc["seed"], "seed");
  if (doc.contains("model")) {
    const auto& m = doc["model"];
    if (m.is_string()) {
      apply_model_kind(m.get<std::string>(), cfg);
    } else {
      if (!m.is_object()) throw ConfigError("model", "expected an object or a kind name");
      reject_unknown(m, {"kind", "seed", "profile", "t", "z", "clamp", "granville_y"}, "model");
      if (m.contains("kind")) apply_model_kind(as_string(m["kind"], "model.kind"), cfg);
      if (m.contains("seed")) cfg.model.seed = as_count(m["seed"], "model.seed");
      if (m.contains("profile")) cfg.profile_name = as_string(m["profile"], "model.profile");
      if (m.contains("t")) cfg.t_spec = as_string(m["t"], "model.t");
      if (m.contains("z")) cfg.z_spec = as_string(m["z"], "model.z");
      if (m.contains("clamp")) cfg.clamp_spec = as_string(m["clamp"], "model.clamp");
      if (m.contains("granville_y")) {
        if (!m["granville_y"].is_number()) throw ConfigError("model.granville_y", "expected a number");
        cfg.model.granville_y = m["granville_y"].get<double>();
      }
    }
  }
  if (doc.contains("x")) cfg.x = as_count(doc["x"], "x");
  if (doc.contains("y")) cfg.y = as_count(doc["y"], "y");
  if (doc.contains("lo")) cfg.lo = as_count(doc["lo"], "lo");
  if (doc.contains("hi")) cfg.hi = as_count(doc["hi"], "hi");
  if (doc.contains("trials")) cfg.trials = as_count(doc["trials"], "trials");
  if (doc.contains("cutoff")) cfg.cutoff = as_count(doc["cutoff"], "cutoff");
  if (doc.contains("budget")) cfg.budget = as_count(doc["budget"], "budget");
  if (doc.contains("output")) {
    const auto& o = doc["output"];
    if (!o.is_object()) throw ConfigError("output", "expected an object");
    reject_unknown(o, {"path", "format"}, "output");
    if (o.contains("path")) cfg.out = as_string(o["path"], "output.path");
    if (o.contains("format")) cfg.format = parse_format(as_string(o["format"], "output.format"));
  }
  if (doc.contains("cache_dir")) cfg.cache_dir = as_string(doc["cache_dir"], "cache_dir");
  if (doc.contains("precision")) cfg.precision = parse_precision(as_string(doc["precision"], "precision"));
  if (doc.contains("toy_primes")) {
    const auto& t = doc["toy_primes"];
    if (!t.is_array()) throw ConfigError("toy_primes", "expected a list");
    cfg.toy_primes.clear();
    for (const auto& p : t) cfg.toy_primes.push_back(as_count(p, "toy_primes"));
  }
  if (doc.contains("assume_irreducible")) {
    if (!doc["assume_irreducible"].is_boolean())
      throw ConfigError("assume_irreducible", "expected true or false");
    cfg.assume_irreducible = doc["assume_irreducible"].get<bool>();
  }
}

RunConfig resolve_config(const FlagValues& flags) {
  RunConfig cfg;
  cfg.command = flags.command;
  cfg.target = flags.target;

  if (flags.config) {
    std::ifstream in(*flags.config);
    if (!in) throw ConfigError("config", "cannot open '" + *flags.config + "'");
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError("config", e.what());
    }
    apply_json(doc, cfg);
  }
  if (const char* env = std::getenv("BH_LAB_CACHE"); env != nullptr && *env != '\0')
    cfg.cache_dir = env;

  if (flags.tuple) cfg.tuple_text = *flags.tuple;
  if (flags.model) apply_model_kind(*flags.model, cfg);
  if (flags.profile) cfg.profile_name = *flags.profile;
  if (flags.t) cfg.t_spec = *flags.t;
  if (flags.z) cfg.z_spec = *flags.z;
  if (flags.clamp) cfg.clamp_spec = *flags.clamp;
  if (flags.granville_y) cfg.model.granville_y = *flags.granville_y;
  if (flags.seed) cfg.model.seed = *flags.seed;
  if (flags.x) cfg.x = *flags.x;
  if (flags.y) cfg.y = *flags.y;
  if (flags.range) parse_range(*flags.range, cfg);
  if (flags.trials) cfg.trials = *flags.trials;
  if (flags.budget) cfg.budget = *flags.budget;
  if (flags.cutoff) {
    const double c = *flags.cutoff;
    if (!(c >= 2 && c < 1.8e19 && c == std::floor(c))) throw ConfigError("cutoff", "expected an integer >= 2");
    cfg.cutoff = static_cast<std::uint64_t>(c);
  }
  if (flags.out) cfg.out = *flags.out;
  if (flags.format) cfg.format = parse_format(*flags.format);
  if (flags.cache_dir) cfg.cache_dir = *flags.cache_dir;
  if (flags.precision) cfg.precision = parse_precision(*flags.precision);
  if (flags.toy_primes) cfg.toy_primes = parse_prime_list(*flags.toy_primes);
  if (flags.threads) cfg.threads = *flags.threads;
  if (flags.assume_irreducible) cfg.assume_irreducible = true;
  if (flags.no_timestamp) cfg.timestamp = false;

  validate(cfg);
  return cfg;
}

nlohmann::ordered_json RunConfig::resolved() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  if (!target.empty()) j["target"] = target;
  if (tuple) {
    nlohmann::ordered_json t;
    t["input"] = tuple_text;
    t["normalized"] = tuple->to_string();
    t["shift"] = tuple->shift;
    t["hash"] = tuple->hash();
    j["tuple"] = t;
  }
  if (model_given) {
    nlohmann::ordered_json m;
    m["kind"] = oracle ? std::string("primes") : to_string(model.kind);
    if (!oracle) {
      m["seed"] = model.seed;
      m["profile"] = profile_name;
      m["t"] = model.profile.t_text();
      m["z"] = model.profile.z_text();
      m["clamp"] = model.profile.clamp == ClampPolicy::clamp ? "clamp" : "reject";
      if (model.kind == ModelKind::granville) m["granville_y"] = model.granville_y;
      m["n_min"] = model.n_min();
    }
    j["model"] = m;
  }
  if (x) j["x"] = *x;
  if (y) j["y"] = *y;
  if (lo) j["lo"] = *lo;
  if (hi) j["hi"] = *hi;
  if (command == "simulate") j["trials"] = trials;
  j["cutoff"] = cutoff;
  j["precision"] = precision == Precision::extended ? "extended" : "double";
  j["budget"] = budget;
  if (command == "verify" && target == "pair") j["toy_primes"] = toy_primes;
  return j;
}

}  // namespace bhlab::cli
