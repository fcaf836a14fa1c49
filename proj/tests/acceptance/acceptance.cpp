// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bhlab/rng.hpp"
#include "bhlab/sieve.hpp"
#include "bhlab/singular.hpp"
#include "bhlab/stats.hpp"
#include "commands.hpp"

using namespace bhlab;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

PolyTuple tuple_of(const char* text) { return normalize_tuple(parse_tuple(text)); }

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

ModelSpec spec_of(ModelKind kind, std::uint64_t seed) {
  ModelSpec s;
  s.kind = kind;
  s.seed = seed;
  return s;
}

// 1 ---------------------------------------------------------------------------
Outcome identity_for_x() {
  const auto t = tuple_of("X");
  double worst = 0;
  for (std::uint64_t P : {1000ULL, 10000ULL, 100000ULL})
    worst = std::max(worst, std::abs(singular_series(t, P).direct - 1.0));
  return {worst <= 1e-12, fmt("max |direct - 1| = %.3g over P = 1e3, 1e4, 1e5", worst)};
}

// 2 ---------------------------------------------------------------------------
Outcome twin_constant() {
  const auto t = tuple_of("X, X+2");
  const auto s = singular_series(t, 10000000);
  const auto oracle = singular_series(t, 100000000, {Precision::extended});
  const double ref = std::stod(oracle.direct_text);
  const double spread = std::abs(s.direct - s.mertens);
  const double d1 = std::abs(s.direct - ref), d2 = std::abs(s.mertens - ref);
  const bool ok = spread <= 2e-3 && d1 <= 2e-3 && d2 <= 2e-3;
  return {ok, fmt("direct %.9f, mertens %.9f, oracle(1e8) %.9f, spread %.2e", s.direct, s.mertens,
                  ref, spread)};
}

// 3 ---------------------------------------------------------------------------
Outcome bateman_horn_vs_primes() {
  const auto t = tuple_of("X, X+2");
  const double S = singular_series(t, 1000000).value;
  const double M = main_term(t, S, 1e6);
  const auto hits = count_hits(PrimeOracle{}, t, 1000000);
  const double rel = std::abs(double(hits) - M) / M;
  return {rel < 0.05, fmt("count %.0f, M %.2f, relative error %.4f", double(hits), M, rel)};
}

// 4 ---------------------------------------------------------------------------
Outcome fundamental_lemma() {
  double lo = INFINITY, hi = -INFINITY;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto family = ResidueFamily::random(50, 3, seed);
    const double r = lemma22_report(family, 1000000, 1000000).ratio;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  const double periodic = lemma22_report(ResidueFamily::single_class(10, 0), 0, 210).ratio;
  const bool ok = lo >= 0.99 && hi <= 1.01 && periodic == 1.0;
  return {ok, fmt("ratios in [%.5f, %.5f], periodic ratio %.17g", lo, hi, periodic)};
}

// 5 ---------------------------------------------------------------------------
Outcome pair_oracle() {
  const char* tuples[] = {"X", "X, X+2", "X, X+6", "X^2+1", "X, 2X+1", "X, X+2, X+6"};
  const std::vector<std::vector<std::uint64_t>> sets = {{3, 5}, {3, 5, 7}};
  std::mt19937_64 gen(20240601);
  int compared = 0, mismatched = 0, diagonal = 0, degenerate = 0;
  for (int i = 0; i < 50; ++i) {
    const auto t = tuple_of(tuples[i % 6]);
    std::uint64_t n1 = gen() % 1000 + 1, n2 = gen() % 1000 + 1;
    if (i % 5 == 0) n2 = n1;
    if (i % 5 == 1 && i % 6 == 1) n2 = n1 + 2;  // f_1(n2) = f_2(n1) for the twin pair
    diagonal += n1 == n2;
    degenerate += in_degenerate_set(t, n1, n2);
    for (const auto& primes : sets) {
      ++compared;
      const auto rule = SievingRule::toy(primes);
      mismatched += expected_pair_exact(t, n1, n2, rule) != expected_pair_bruteforce(t, n1, n2, primes);
    }
  }
  const bool ok = mismatched == 0 && diagonal > 0 && degenerate > diagonal;
  return {ok, fmt("%.0f comparisons, %.0f mismatches (%.0f diagonal, %.0f degenerate instances)",
                  compared, mismatched, diagonal, degenerate)};
}

// 6 ---------------------------------------------------------------------------
Outcome m2_structure() {
  const SetInstance inst(spec_of(ModelKind::m2, 2024));
  const auto bits = inst.materialize(10, 100000);
  const auto& profile = inst.spec().profile;
  std::uint64_t members = 0, even = 0, rough_bad = 0, disagree = 0;
  for (std::uint64_t m = 10; m <= 100000; ++m) {
    const bool in = bits.test(m);
    disagree += in != inst.member(m);
    if (!in) continue;
    ++members;
    even += m % 2 == 0;
    rough_bad += has_small_factor(m, profile.t(double(m)));
  }
  const bool ok = members > 0 && even == 0 && rough_bad == 0 && disagree == 0;
  return {ok, fmt("%.0f members, %.0f even, %.0f with a factor <= t(m), %.0f point/bulk mismatches",
                  double(members), double(even), double(rough_bad), double(disagree))};
}

// 7 ---------------------------------------------------------------------------
Outcome m1_first_moment() {
  const auto t = tuple_of("X, X+2");
  MonteCarloOptions opt;
  opt.singular = singular_series(t, 1000000).value;
  const auto s = monte_carlo(spec_of(ModelKind::m1, 1), t, 100000, 100000, 200, opt);
  const double se = std::sqrt(s.variance / 200.0);
  const double gap = std::abs(s.mean - *s.exact_mean);
  const bool ok = gap <= 4 * se && s.clamp_count == 0;
  return {ok, fmt("mean %.2f, exact %.2f, |gap| %.2f <= 4 se = %.2f", s.mean, *s.exact_mean, gap,
                  4 * se) +
                  ", clamps " + std::to_string(s.clamp_count)};
}

// 8 ---------------------------------------------------------------------------
Outcome variance_trend() {
  const auto t = tuple_of("X, X+2");
  MonteCarloOptions opt;
  opt.singular = singular_series(t, 1000000).value;
  const auto spec = spec_of(ModelKind::m1, 1);
  const auto a = monte_carlo(spec, t, 10000, 10000, 200, opt);
  const auto b = monte_carlo(spec, t, 100000, 100000, 200, opt);
  return {b.var_over_M2 < a.var_over_M2,
          fmt("Var/M^2 = %.3e at x = 1e4, %.3e at x = 1e5", a.var_over_M2, b.var_over_M2)};
}

// 9 ---------------------------------------------------------------------------
Outcome r_failure() {
  int no_one_mod_four = 0, m2_even = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const auto r = SetInstance(spec_of(ModelKind::bft_r, seed)).materialize(10, 10000);
    bool found = false;
    for (std::uint64_t m = 13; m <= 10000 && !found; m += 4) found = r.test(m);
    no_one_mod_four += !found;
    const auto m2 = SetInstance(spec_of(ModelKind::m2, seed)).materialize(10, 10000);
    for (std::uint64_t m = 10; m <= 10000; m += 2) m2_even += m2.test(m);
  }
  const double frac = no_one_mod_four / 400.0;
  const bool ok = frac >= 0.425 && frac <= 0.575 && m2_even == 0;
  return {ok, fmt("fraction without 1 mod 4: %.4f, even m2 members: %.0f", frac, m2_even)};
}

// 10 --------------------------------------------------------------------------
struct CliRun {
  int code;
  std::string out;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "bh-lab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str()};
}

std::uint64_t file_hash(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  const std::string bytes{std::istreambuf_iterator<char>(in), {}};
  return fnv1a64(bytes);
}

Outcome determinism() {
  const std::vector<std::string> sim = {"simulate", "--tuple", "X,X+2", "--model", "m1", "--seed",
                                        "77", "--x", "50000", "--y", "20000", "--trials", "40",
                                        "--cutoff", "1e6", "--no-timestamp"};
  auto one = sim, eight = sim;
  one.insert(one.end(), {"--threads", "1"});
  eight.insert(eight.end(), {"--threads", "8"});
  const auto a = cli(one), b = cli(eight);
  const bool json_same = a.code == 0 && b.code == 0 && !a.out.empty() && a.out == b.out;

  const auto dir = std::filesystem::path(BHLAB_TEST_TMP) / "acceptance";
  std::filesystem::create_directories(dir);
  std::uint64_t hashes[2];
  bool sampled = true;
  for (int i = 0; i < 2; ++i) {
    const auto file = dir / ("m2-run" + std::to_string(i) + ".bh");
    std::filesystem::remove(file);
    sampled = sampled && cli({"sample", "--model", "m2", "--seed", "5", "--range", "10:2000000",
                              "--threads", i == 0 ? "1" : "8", "--out", file.string()})
                                 .code == 0;
    hashes[i] = file_hash(file);
  }
  const bool ok = json_same && sampled && hashes[0] == hashes[1];
  std::ostringstream d;
  d << "simulate JSON " << (json_same ? "identical" : "DIFFERENT") << " at 1 and 8 threads ("
    << a.out.size() << " bytes); bitmap hashes " << std::hex << hashes[0] << " / " << hashes[1];
  return {ok, d.str()};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"singular series of (X) is exactly 1", identity_for_x},
      {"twin constant estimators converge", twin_constant},
      {"twin prime count against M(x)", bateman_horn_vs_primes},
      {"sieve survivor ratios near 1", fundamental_lemma},
      {"pair expectation equals brute force", pair_oracle},
      {"m2 members odd and rough, dual paths agree", m2_structure},
      {"m1 first moment", m1_first_moment},
      {"m1 variance ratio decreases", variance_trend},
      {"R misses a residue class mod 4", r_failure},
      {"thread and run determinism", determinism},
  };
  int failed = 0, index = 0;
  for (const auto& c : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::printf("%s %2d %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", index, c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
