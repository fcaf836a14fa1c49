#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bhlab/localroots.hpp"
#include "bhlab/rng.hpp"
#include "bhlab/sieve.hpp"
#include "bhlab/stats.hpp"

namespace bhlab::cli {

namespace {

using ojson = nlohmann::ordered_json;

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

// Output sink: the --out file when given, else the provided stream.
class Sink {
 public:
  Sink(const RunConfig& cfg, std::ostream& fallback, bool use_file = true) : stream_(&fallback) {
    if (use_file && !cfg.out.empty()) {
      file_.open(cfg.out, std::ios::binary);
      if (!file_) throw Error("cannot open output file '" + cfg.out + "'");
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

Format format_or(const RunConfig& cfg, Format fallback) { return cfg.format.value_or(fallback); }

void emit_json(const RunConfig& cfg, ojson doc, std::ostream& os) {
  doc["config"] = cfg.resolved();
  if (cfg.timestamp) doc["timestamp"] = utc_timestamp();
  os << doc.dump(2) << '\n';
}

std::vector<std::uint64_t> decade_checkpoints(std::uint64_t x) {
  std::vector<std::uint64_t> xs;
  for (std::uint64_t d = 10; d < x; d *= 10) {
    xs.push_back(d);
    if (d > UINT64_MAX / 10) break;
  }
  xs.push_back(x);
  return xs;
}

SingularOptions singular_options(const RunConfig& cfg, std::optional<LocalDataCache>& cache) {
  SingularOptions so;
  so.precision = cfg.precision;
  so.threads = cfg.threads;
  if (!cfg.cache_dir.empty()) {
    cache.emplace(cfg.cache_dir);
    so.cache = &*cache;
  }
  return so;
}

double singular_value(const RunConfig& cfg) {
  std::optional<LocalDataCache> cache;
  return singular_series(*cfg.tuple, cfg.cutoff, singular_options(cfg, cache)).value;
}

std::unique_ptr<MembershipSource> make_source(const RunConfig& cfg) {
  if (cfg.oracle) return std::make_unique<PrimeOracle>();
  return std::make_unique<SetInstance>(cfg.model);
}

// --- commands -------------------------------------------------------------

int cmd_check(const RunConfig& cfg, std::ostream& os) {
  const auto& t = *cfg.tuple;
  if (format_or(cfg, Format::text) == Format::json) {
    ojson doc;
    doc["admissible"] = true;
    doc["shift"] = t.shift;
    doc["hash"] = t.hash();
    ojson members = ojson::array();
    for (std::size_t j = 0; j < t.k(); ++j)
      members.push_back({{"poly", t[j].to_string()}, {"irreducibility", cfg.irreducibility[j]}});
    doc["members"] = members;
    emit_json(cfg, doc, os);
    return kExitOk;
  }
  os << "tuple       " << cfg.tuple_text << '\n';
  os << "normalized  " << t.to_string() << '\n';
  os << "shift       " << t.shift << '\n';
  os << "hash        " << t.hash() << '\n';
  os << "admissible  yes (nu_p < p for every prime p <= " << t.total_degree() << ")\n";
  for (std::size_t j = 0; j < t.k(); ++j)
    os << "f" << j + 1 << "          " << t[j].to_string() << ": " << cfg.irreducibility[j] << '\n';
  return kExitOk;
}

int cmd_constants(const RunConfig& cfg, std::ostream& os) {
  std::optional<LocalDataCache> cache;
  const auto est = singular_series(*cfg.tuple, cfg.cutoff, singular_options(cfg, cache));
  const bool extended = cfg.precision == Precision::extended;
  const std::string direct = extended ? est.direct_text : num(est.direct);
  const std::string mertens = extended ? est.mertens_text : num(est.mertens);
  if (format_or(cfg, Format::csv) == Format::json) {
    ojson doc;
    doc["tuple_hash"] = cfg.tuple->hash();
    doc["P"] = est.cutoff;
    doc["value"] = est.value;
    doc["direct"] = est.direct;
    doc["mertens"] = est.mertens;
    doc["spread"] = est.spread;
    if (extended) {
      doc["direct_text"] = est.direct_text;
      doc["mertens_text"] = est.mertens_text;
    }
    emit_json(cfg, doc, os);
    return kExitOk;
  }
  os << "tuple_hash,P,direct,mertens,spread\n";
  os << cfg.tuple->hash() << ',' << est.cutoff << ',' << direct << ',' << mertens << ','
     << num(est.spread) << '\n';
  return kExitOk;
}

int cmd_predict(const RunConfig& cfg, std::ostream& os) {
  const double S = singular_value(cfg);
  const bool json = format_or(cfg, Format::csv) == Format::json;
  ojson rows = ojson::array();
  if (cfg.y) {
    const double x = static_cast<double>(*cfg.x), y = static_cast<double>(*cfg.y);
    const double M = main_term(*cfg.tuple, S, x, y);
    if (json) {
      rows.push_back({{"x", *cfg.x}, {"y", *cfg.y}, {"M", M}});
    } else {
      os << "x,y,M(x,y)\n" << *cfg.x << ',' << *cfg.y << ',' << num(M) << '\n';
    }
  } else {
    if (!json) os << "x,M(x)\n";
    for (auto x : decade_checkpoints(*cfg.x)) {
      const double M = main_term(*cfg.tuple, S, static_cast<double>(x));
      if (json) rows.push_back({{"x", x}, {"M", M}});
      else os << x << ',' << num(M) << '\n';
    }
  }
  if (json) emit_json(cfg, {{"singular", S}, {"rows", rows}}, os);
  return kExitOk;
}

int cmd_sample(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  const auto source = make_source(cfg);
  const Bitmap bits = source->materialize(*cfg.lo, *cfg.hi, cfg.threads, cfg.budget);
  std::uint64_t clamps = 0;
  if (const auto* inst = dynamic_cast<const SetInstance*>(source.get())) clamps = inst->clamp_count();
  if (clamps > 0) err << "warning: " << clamps << " inclusion probabilities clamped to 1\n";
  if (!cfg.out.empty()) write_bitmap_file(cfg.out, bits);
  const Format f = format_or(cfg, Format::csv);
  if (f == Format::text) {
    for (std::uint64_t m = bits.lo(); m <= bits.hi(); ++m)
      if (bits.test(m)) os << m << '\n';
  } else if (f == Format::json) {
    ojson doc{{"model", source->describe()}, {"lo", *cfg.lo}, {"hi", *cfg.hi},
              {"members", bits.count()}, {"clamps", clamps}};
    if (!cfg.out.empty()) doc["file"] = cfg.out;
    emit_json(cfg, doc, os);
  } else {
    os << "model,lo,hi,members,clamps\n"
       << source->describe() << ',' << *cfg.lo << ',' << *cfg.hi << ',' << bits.count() << ','
       << clamps << '\n';
  }
  return kExitOk;
}

int cmd_count(const RunConfig& cfg, std::ostream& os) {
  const auto source = make_source(cfg);
  const std::uint64_t c = count_hits(*source, *cfg.tuple, *cfg.x, {cfg.threads, cfg.budget});
  if (format_or(cfg, Format::csv) == Format::json) {
    emit_json(cfg, {{"tuple_hash", cfg.tuple->hash()}, {"model", source->describe()},
                    {"x", *cfg.x}, {"count", c}}, os);
    return kExitOk;
  }
  os << "tuple_hash,model,x,count\n"
     << cfg.tuple->hash() << ',' << source->describe() << ',' << *cfg.x << ',' << c << '\n';
  return kExitOk;
}

int cmd_series(const RunConfig& cfg, std::ostream& os) {
  const auto source = make_source(cfg);
  const double S = singular_value(cfg);
  const auto xs = decade_checkpoints(*cfg.x);
  const auto series = hit_series(*source, *cfg.tuple, xs, S, {cfg.threads, cfg.budget});
  if (format_or(cfg, Format::csv) == Format::json) {
    ojson rows = ojson::array();
    for (const auto& r : series.rows)
      rows.push_back({{"x", r.x}, {"count", r.count}, {"M", r.M}, {"delta", r.delta}});
    emit_json(cfg, {{"tuple_hash", series.tuple_hash}, {"model", series.source},
                    {"singular", S}, {"rows", rows}}, os);
    return kExitOk;
  }
  os << "x,count,M,delta\n";
  for (const auto& r : series.rows)
    os << r.x << ',' << r.count << ',' << num(r.M) << ',' << num(r.delta) << '\n';
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  MonteCarloOptions mc;
  mc.threads = cfg.threads;
  mc.budget = cfg.budget;
  mc.cutoff = cfg.cutoff;
  mc.singular = singular_value(cfg);
  const auto s = monte_carlo(cfg.model, *cfg.tuple, *cfg.x, *cfg.y, cfg.trials, mc);
  if (s.clamp_count > 0)
    err << "warning: " << s.clamp_count << " inclusion probabilities clamped to 1\n";
  if (format_or(cfg, Format::json) == Format::csv) {
    os << "trial,seed,count\n";
    for (std::uint64_t i = 0; i < s.trials; ++i)
      os << i << ',' << trial_seed(cfg.model.seed, i) << ',' << s.counts[i] << '\n';
    return kExitOk;
  }
  ojson doc;
  doc["spec"] = cfg.model.describe();
  doc["tuple"] = cfg.tuple->to_string();
  doc["x"] = s.x;
  doc["y"] = s.y;
  doc["trials"] = s.trials;
  doc["mean"] = s.mean;
  doc["exact_mean"] = s.exact_mean ? ojson(*s.exact_mean) : ojson(nullptr);
  doc["variance"] = s.variance;
  doc["M"] = s.M;
  doc["var_over_M2"] = s.var_over_M2;
  doc["seeds_hash"] = s.seeds_hash;
  doc["singular"] = s.singular;
  doc["clamp_count"] = s.clamp_count;
  doc["counts"] = s.counts;
  emit_json(cfg, doc, os);
  return kExitOk;
}

// --- verification suites ----------------------------------------------------

class Checks {
 public:
  Checks(const RunConfig& cfg, std::ostream& os, Format fallback = Format::text)
      : cfg_(cfg), os_(os), json_(format_or(cfg, fallback) == Format::json) {}
  void record(bool ok, const std::string& what) {
    if (json_) checks_.push_back({{"pass", ok}, {"detail", what}});
    else os_ << (ok ? "PASS " : "FAIL ") << what << '\n';
    failures_ += !ok;
    ++total_;
  }
  ojson& extra() { return extra_; }
  int finish() {
    if (json_) {
      ojson doc;
      doc["suite"] = cfg_.target;
      for (auto& [k, v] : extra_.items()) doc[k] = v;
      doc["checks"] = checks_;
      doc["passed"] = failures_ == 0;
      emit_json(cfg_, doc, os_);
    } else {
      os_ << (failures_ == 0 ? "ok" : "FAILED") << ": " << total_ - failures_ << "/" << total_
          << " checks passed\n";
    }
    return failures_ == 0 ? kExitOk : kExitVerify;
  }

 private:
  const RunConfig& cfg_;
  std::ostream& os_;
  bool json_;
  ojson checks_ = ojson::array();
  ojson extra_ = ojson::object();
  int failures_ = 0;
  int total_ = 0;
};

ojson report_json(const SegmentReport& r) {
  return {{"exact", r.exact}, {"predicted", r.predicted}, {"ratio", r.ratio}, {"u", r.u}};
}

PolyTuple default_tuple(const RunConfig& cfg) {
  if (cfg.tuple) return *cfg.tuple;
  return normalize_tuple(parse_tuple("X,X+2"));
}

std::string rational(const mpq_class& q) { return q.get_str(); }

int verify_lemma22(const RunConfig& cfg, std::ostream& os) {
  Checks checks(cfg, os, Format::json);
  ojson reports = ojson::array();
  const std::uint64_t v = cfg.x.value_or(1000000), w = cfg.y.value_or(1000000);
  const std::uint64_t families = std::min<std::uint64_t>(cfg.trials, 1000);
  double worst = 1.0;
  for (std::uint64_t i = 0; i < families; ++i) {
    const auto family = ResidueFamily::random(50, 3, trial_seed(cfg.model.seed, i));
    const auto r = lemma22_report(family, v, w, cfg.threads);
    reports.push_back(report_json(r));
    if (std::abs(r.ratio - 1) > std::abs(worst - 1)) worst = r.ratio;
    if (r.ratio < 0.99 || r.ratio > 1.01) {
      std::ostringstream msg;
      msg << "family " << i << ": ratio " << num(r.ratio) << " outside [0.99, 1.01]";
      checks.record(false, msg.str());
    }
  }
  std::ostringstream summary;
  summary << families << " random families (K = 3, z = 50) over (" << v << ", " << v + w
          << "]: worst ratio " << num(worst);
  checks.record(worst >= 0.99 && worst <= 1.01, summary.str());
  const auto periodic = lemma22_report(ResidueFamily::single_class(10, 0), 0, 210);
  checks.extra()["reports"] = reports;
  checks.extra()["periodic"] = report_json(periodic);
  checks.record(periodic.ratio == 1.0,
                "I_p = {0} for p <= 10 over a window of 210: ratio " + num(periodic.ratio));
  return checks.finish();
}

int verify_expectation(const RunConfig& cfg, std::ostream& os) {
  Checks checks(cfg, os);
  const auto X = normalize_tuple(parse_tuple("X"));
  const auto toy = SievingRule::toy({3, 5});
  checks.record(expected_Rn_exact(X, 1, toy) == mpq_class(8, 15), "(X) with primes {3, 5}: 8/15");
  const auto X3 = normalize_tuple(parse_tuple("X,X+3"));
  checks.record(expected_Rn_exact(X3, 1, SievingRule::toy({3})) == mpq_class(2, 3),
                "(X, X+3) at p = 3: congruent values give 1 - 1/3");

  const PolyTuple tuple = default_tuple(cfg);
  ModelSpec spec = cfg.model;
  if (spec.bernoulli() || !cfg.model_given) spec.kind = ModelKind::m2;
  const SievingRule rule = SievingRule::for_model(spec);
  const std::uint64_t base = cfg.x.value_or(1000);
  constexpr std::uint64_t kSeeds = 10000;
  for (std::uint64_t n = base; n < base + 5; ++n) {
    const mpq_class exact = expected_Rn_exact(tuple, n, rule);
    const double q = exact.get_d();
    std::uint64_t hits = 0;
    for (std::uint64_t s = 1; s <= kSeeds; ++s) {
      ModelSpec trial = spec;
      trial.seed = trial_seed(cfg.model.seed, s);
      hits += random_part(SetInstance(trial), tuple, n);
    }
    const double mean = static_cast<double>(hits) / kSeeds;
    const double sigma = std::sqrt(q * (1 - q) / kSeeds);
    std::ostringstream msg;
    msg << "n = " << n << ": E R_n = " << rational(exact) << " ~ " << num(q) << ", sampled "
        << num(mean) << " (" << kSeeds << " seeds, 4 sigma = " << num(4 * sigma) << ")";
    checks.record(std::abs(mean - q) <= 4 * sigma + 1e-12, msg.str());
  }
  return checks.finish();
}

int verify_pair(const RunConfig& cfg, std::ostream& os) {
  Checks checks(cfg, os);
  const auto rule = SievingRule::toy(cfg.toy_primes);
  std::vector<PolyTuple> tuples;
  if (cfg.tuple) tuples.push_back(*cfg.tuple);
  for (const char* text : {"X", "X,X+2", "X,X+6", "X^2+1", "X,X+2,X+6", "2*X+1", "X,X^2+1"})
    tuples.push_back(normalize_tuple(parse_tuple(text)));

  std::uint64_t cases = 1;
  for (auto p : rule.toy_primes) cases *= p;
  Xoshiro256pp gen(splitmix64(cfg.model.seed ^ stream_tag("pair-instances")));
  int mismatches = 0, diagonal = 0, degenerate = 0;
  constexpr int kInstances = 50;
  for (int i = 0; i < kInstances; ++i) {
    const PolyTuple& t = tuples[uniform_below(gen, tuples.size())];
    const std::uint64_t n1 = 1 + uniform_below(gen, 200);
    std::uint64_t n2 = 1 + uniform_below(gen, 200);
    if (i % 5 == 0) n2 = n1;
    if (i % 5 == 1 && t.k() > 1) {
      // aim for f_i(n1) = f_j(n2) with a constant shift between members
      for (std::uint64_t m = 1; m <= n1 + 10; ++m)
        if (m != n1 && in_degenerate_set(t, n1, m)) {
          n2 = m;
          break;
        }
    }
    diagonal += n1 == n2;
    degenerate += in_degenerate_set(t, n1, n2);
    const mpq_class exact = expected_pair_exact(t, n1, n2, rule);
    const mpq_class brute = expected_pair_bruteforce(t, n1, n2, rule.toy_primes);
    if (exact != brute) {
      ++mismatches;
      checks.record(false, "tuple (" + t.to_string() + "), n1 = " + std::to_string(n1) +
                               ", n2 = " + std::to_string(n2) + ": product " + rational(exact) +
                               " vs enumeration " + rational(brute));
    }
    if (n1 == n2 && exact != expected_Rn_exact(t, n1, rule))
      checks.record(false, "diagonal pair differs from E R_n at n = " + std::to_string(n1));
  }
  std::ostringstream msg;
  msg << kInstances << " instances over " << cases << " residue tuples each (" << diagonal
      << " diagonal, " << degenerate << " in D): " << mismatches << " mismatches";
  checks.record(mismatches == 0, msg.str());
  return checks.finish();
}

int verify_factorization(const RunConfig& cfg, std::ostream& os) {
  Checks checks(cfg, os);
  const PolyTuple tuple = default_tuple(cfg);
  ModelSpec spec = cfg.model;
  if (spec.bernoulli() || !cfg.model_given) spec.kind = ModelKind::m2;
  const SetInstance instance(spec);
  const ThresholdProfile profile = spec.effective_profile();
  const std::uint64_t lo = cfg.lo.value_or(100), hi = cfg.hi.value_or(10000);

  std::uint64_t bad = 0;
  for (std::uint64_t n = lo; n <= hi; ++n) {
    bool x = true;
    for (const auto& v : tuple_values(tuple, n)) x = x && v.fits_ulong_p() && instance.member(v.get_ui());
    const bool dr = deterministic_part(tuple, n, profile) && random_part(instance, tuple, n);
    bad += x != dr;
  }
  checks.record(bad == 0, "X_n = D_n R_n on [" + std::to_string(lo) + ", " + std::to_string(hi) +
                              "]: " + std::to_string(bad) + " mismatches");

  const Bitmap bulk = instance.materialize(lo, hi, cfg.threads);
  std::uint64_t dual = 0;
  for (std::uint64_t m = lo; m <= hi; ++m) dual += bulk.test(m) != instance.member(m);
  checks.record(dual == 0, "bulk and point membership agree on [" + std::to_string(lo) + ", " +
                               std::to_string(hi) + "]: " + std::to_string(dual) + " mismatches");

  const std::uint64_t v = 10000, w = 1000;
  const Bitmap block = deterministic_block(tuple, v, w, profile);
  std::uint64_t dbad = 0;
  for (std::uint64_t n = v + 1; n <= v + w; ++n) dbad += block.test(n) != deterministic_part(tuple, n, profile);
  checks.record(dbad == 0, "sieved D_n equals pointwise D_n on (10000, 11000]: " +
                               std::to_string(dbad) + " mismatches");
  return checks.finish();
}

int cmd_verify(const RunConfig& cfg, std::ostream& os) {
  if (cfg.target == "lemma22") return verify_lemma22(cfg, os);
  if (cfg.target == "expectation") return verify_expectation(cfg, os);
  if (cfg.target == "pair") return verify_pair(cfg, os);
  return verify_factorization(cfg, os);
}

int cmd_cache(const RunConfig& cfg, std::ostream& os) {
  if (cfg.cache_dir.empty())
    throw ConfigError("cache_dir", "no cache directory (use --cache-dir or BH_LAB_CACHE)");
  namespace fs = std::filesystem;
  const LocalDataCache cache(cfg.cache_dir);
  if (cfg.target == "clear") {
    std::uint64_t removed = 0;
    if (fs::exists(cfg.cache_dir)) {
      for (const auto& e : fs::directory_iterator(cfg.cache_dir)) {
        const auto name = e.path().filename().string();
        if (e.path().extension() == ".local" || name.rfind("primes-", 0) == 0) {
          fs::remove(e.path());
          ++removed;
        }
      }
    }
    cache.clear();
    os << "removed " << removed << " cache files from " << cfg.cache_dir.string() << '\n';
    return kExitOk;
  }
  fs::create_directories(cfg.cache_dir);
  const auto primes = primes_up_to(cfg.cutoff, cfg.threads);
  const fs::path prime_file = cfg.cache_dir / ("primes-" + std::to_string(cfg.cutoff) + ".txt");
  save_prime_cache(prime_file, primes);
  os << "wrote " << primes.primes.size() << " primes to " << prime_file.string() << '\n';
  if (cfg.tuple) {
    const std::uint64_t bound = std::min(cfg.cutoff, LocalDataCache::kMaxCachedPrime);
    const auto rows = cache.get_or_compute(*cfg.tuple, bound, cfg.threads);
    os << "wrote " << rows.size() << " local-data rows to " << cache.file_for(*cfg.tuple).string()
       << '\n';
  }
  return kExitOk;
}

}  // namespace

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  for (const auto& w : cfg.warnings) err << "warning: " << w << '\n';
  const auto& c = cfg.command;
  if (c == "sample") return cmd_sample(cfg, out, err);
  if (c == "cache") return cmd_cache(cfg, out);
  Sink sink(cfg, out);
  if (c == "check") return cmd_check(cfg, *sink);
  if (c == "constants") return cmd_constants(cfg, *sink);
  if (c == "predict") return cmd_predict(cfg, *sink);
  if (c == "count") return cmd_count(cfg, *sink);
  if (c == "series") return cmd_series(cfg, *sink);
  if (c == "simulate") return cmd_simulate(cfg, *sink, err);
  if (c == "verify") return cmd_verify(cfg, *sink);
  throw ConfigError("command", "unknown command '" + c + "'");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bateman-Horn random model laboratory", "bh-lab"};
  FlagValues f;
  std::string config, tuple, model, profile, t, z, clamp, range, outp, format, cache_dir, precision,
      toy;
  std::uint64_t seed = 0, x = 0, y = 0, trials = 0, budget = 0;
  double cutoff = 0, granville_y = 0;
  unsigned threads = 1;

  app.add_option("command", f.command,
                 "check | constants | predict | sample | count | simulate | series | verify | cache")
      ->required();
  app.add_option("target", f.target, "verify suite (lemma22 | expectation | pair | factorization) "
                                      "or cache action (build | clear)");
  auto* o_config = app.add_option("--config", config, "JSON config file");
  auto* o_tuple = app.add_option("--tuple", tuple, "polynomial tuple, e.g. \"X,X+2\"");
  auto* o_model = app.add_option("--model", model, "cramer | granville | m1 | m2 | bft_r | primes");
  auto* o_profile = app.add_option("--profile", profile, "threshold preset: desk | asymptotic");
  auto* o_t = app.add_option("--t", t, "t(n): asymptotic | exp_pow:<alpha> | fixed:<t0>");
  auto* o_z = app.add_option("--z", z, "z(n): asymptotic | pow:<beta> | fixed:<z0>");
  auto* o_clamp = app.add_option("--clamp", clamp, "m1 probabilities above 1: clamp | reject");
  auto* o_gy = app.add_option("--granville-y", granville_y, "sieving limit y of the Granville model");
  auto* o_seed = app.add_option("--seed", seed, "master seed");
  auto* o_x = app.add_option("--x", x, "x");
  auto* o_y = app.add_option("--y", y, "window length y");
  auto* o_range = app.add_option("--range", range, "lo:hi");
  auto* o_trials = app.add_option("--trials", trials, "Monte Carlo trials");
  auto* o_cutoff = app.add_option("--cutoff", cutoff, "singular series cutoff P (1e7 accepted)");
  auto* o_budget = app.add_option("--budget", budget, "bitmap budget in bits");
  auto* o_out = app.add_option("--out", outp, "output file");
  auto* o_format = app.add_option("--format", format, "csv | json | text");
  auto* o_cache = app.add_option("--cache-dir", cache_dir, "cache directory (env BH_LAB_CACHE)");
  auto* o_prec = app.add_option("--precision", precision, "double | extended");
  auto* o_toy = app.add_option("--toy-primes", toy, "comma separated primes for verify pair");
  auto* o_threads = app.add_option("--threads", threads, "worker threads");
  app.add_flag("--assume-irreducible", f.assume_irreducible,
               "accept members whose irreducibility could not be decided");
  app.add_flag("--no-timestamp", f.no_timestamp, "omit the timestamp from JSON output");

  std::vector<std::string> args;
  for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  auto take = [](CLI::Option* o, auto& slot, const auto& value) {
    if (o->count() > 0) slot = value;
  };
  take(o_config, f.config, config);
  take(o_tuple, f.tuple, tuple);
  take(o_model, f.model, model);
  take(o_profile, f.profile, profile);
  take(o_t, f.t, t);
  take(o_z, f.z, z);
  take(o_clamp, f.clamp, clamp);
  take(o_gy, f.granville_y, granville_y);
  take(o_seed, f.seed, seed);
  take(o_x, f.x, x);
  take(o_y, f.y, y);
  take(o_range, f.range, range);
  take(o_trials, f.trials, trials);
  take(o_cutoff, f.cutoff, cutoff);
  take(o_budget, f.budget, budget);
  take(o_out, f.out, outp);
  take(o_format, f.format, format);
  take(o_cache, f.cache_dir, cache_dir);
  take(o_prec, f.precision, precision);
  take(o_toy, f.toy_primes, toy);
  take(o_threads, f.threads, threads);

  RunConfig cfg;
  try {
    cfg = resolve_config(f);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    return execute(cfg, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace bhlab::cli
