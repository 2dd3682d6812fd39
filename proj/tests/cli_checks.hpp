#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "hahnforge/cli.hpp"

namespace clicheck {

using namespace hahnforge;

struct GoldenCase {
  std::string name;
  std::vector<std::string> args;
  std::string input;
  std::string expected;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// NAME.cmd holds one argument per line, NAME.in optional stdin, NAME.out the
/// expected stdout followed by `[exit N]`.
inline std::vector<GoldenCase> load_golden(const std::filesystem::path& dir) {
  std::vector<GoldenCase> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".cmd") continue;
    GoldenCase c;
    c.name = entry.path().stem().string();
    std::stringstream cmd(slurp(entry.path()));
    for (std::string line; std::getline(cmd, line);) c.args.push_back(line);
    auto in_path = entry.path();
    in_path.replace_extension(".in");
    if (std::filesystem::exists(in_path)) c.input = slurp(in_path);
    auto out_path = entry.path();
    out_path.replace_extension(".out");
    c.expected = slurp(out_path);
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const GoldenCase& a, const GoldenCase& b) { return a.name < b.name; });
  return out;
}

inline std::string run_golden(const GoldenCase& c) {
  std::istringstream in(c.input);
  std::ostringstream out, err;
  const int code = run_command(c.args, in, out, err, RunConfig{});
  return out.str() + "[exit " + std::to_string(code) + "]\n";
}

inline SeriesAst random_ast(std::mt19937_64& rng) {
  static const std::vector<std::string> brackets = {"1", "2", "0", "g", "g+1", "2*g+1", "g^2+g", "g^2+2*g+2"};
  SeriesAst a;
  const char base = rng() % 2 ? 't' : 'p';
  const int n = static_cast<int>(rng() % 6);
  for (int i = 0; i < n; ++i) {
    SeriesTermAst t;
    t.sign = rng() % 3 == 0 ? -1 : 1;
    if (rng() % 2) {
      t.bracket = brackets[rng() % brackets.size()];
    } else {
      t.integer = Int(static_cast<long>(rng() % 40));
    }
    if (rng() % 5 != 0) {
      t.base = base;
      t.exponent = gen::exponent(rng, 3, 12);
    }
    a.terms.push_back(std::move(t));
  }
  if (n == 0 || rng() % 3 == 0) a.cap = gen::exponent(rng, 2, 12);
  if (a.cap || std::any_of(a.terms.begin(), a.terms.end(), [](const SeriesTermAst& t) { return t.base.has_value(); }))
    a.base = base;
  return a;
}

/// Round trips over `n` random cases: parse(print(ast)) == ast for raw ASTs,
/// and parse(print(x)) == x for canonical EqHahn and PHahn values.
inline int roundtrip_failures(std::uint64_t seed, int n, std::string* first_failure = nullptr) {
  std::mt19937_64 rng(seed);
  int failures = 0;
  auto fail = [&](const std::string& what) {
    if (failures++ == 0 && first_failure) *first_failure = what;
  };
  const std::vector<FieldPtr> fields = {FqField::make(2, 1), FqField::make(3, 1), FqField::make(2, 2), FqField::make(3, 2)};
  for (int i = 0; i < n; ++i) {
    try {
      switch (i % 3) {
        case 0: {
          const SeriesAst a = random_ast(rng);
          const std::string s = format_series_ast(a);
          if (!(parse_series(s) == a)) fail("ast: " + s);
          break;
        }
        case 1: {
          const FieldPtr& F = fields[rng() % fields.size()];
          EqHahn x = EqHahn::zero(F, rng() % 2 ? Cap(gen::exponent(rng, F->p(), 12) + 13) : std::nullopt);
          const int k = static_cast<int>(rng() % 6);
          for (int j = 0; j < k; ++j) x = x + EqHahn::monomial(F, gen::nonzero_digit(rng, *F), gen::exponent(rng, F->p(), 12));
          const std::string s = format_eq(x);
          const EqHahn y = parse_eq(s, F);
          if (!(y.terms() == x.terms() && y.cap() == x.cap()) || format_eq(y) != s) fail("eq: " + s);
          break;
        }
        default: {
          const FieldPtr& F = fields[rng() % fields.size()];
          const Cap cap = rng() % 2 ? Cap(Rat(13)) : std::nullopt;
          const PHahn x = gen::phahn(rng, F, 6, 12, cap);
          const std::string s = format_padic(x);
          const PHahn y = parse_padic(s, F);
          if (!(y == x) || format_padic(y) != s) fail("padic: " + s);
          break;
        }
      }
    } catch (const std::exception& e) {
      fail(std::string("exception: ") + e.what());
    }
  }
  return failures;
}

}  // namespace clicheck
