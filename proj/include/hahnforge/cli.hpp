#pragma once

// Command dispatcher behind the hahnforge executable.

#include <algorithm>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hahnforge/config.hpp"
#include "hahnforge/eq_hahn.hpp"
#include "hahnforge/errors.hpp"
#include "hahnforge/index_comb.hpp"
#include "hahnforge/newton.hpp"
#include "hahnforge/ordinal.hpp"
#include "hahnforge/padic_hahn.hpp"
#include "hahnforge/series_io.hpp"

namespace hahnforge {

enum ExitCode : int { ExitOk = 0, ExitDomain = 1, ExitUsage = 2, ExitPrecision = 3 };

inline int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::PrecisionLoss: return ExitPrecision;
    case ErrorKind::SyntaxError:
    case ErrorKind::UsageError: return ExitUsage;
    default: return ExitDomain;
  }
}

namespace cli {

using nlohmann::json;

enum class Ring { Eq, Padic };

struct Context {
  RunConfig cfg;
  FieldPtr F;
  std::optional<Ring> ring;
  std::string poly, prefix, bound, cap, depth;
  std::optional<unsigned long> sigma;
  std::optional<std::size_t> terms;
};

struct Output {
  std::string text;
  json j;
};

[[noreturn]] inline void usage(const std::string& what) { throw Error(ErrorKind::UsageError, what); }

inline Rat rat_arg(const std::string& s, const char* name) {
  if (s.empty()) usage(std::string("missing ") + name);
  return parse_rat(s);
}

inline json val_json(const Valuation& v) { return v.is_infinite() ? json("inf") : rat_json(v.value()); }

inline Ring ring_of(const Context& c, const std::vector<std::string>& exprs) {
  if (c.ring) return *c.ring;
  for (const auto& e : exprs)
    if (auto b = parse_series(e).base) return *b == 't' ? Ring::Eq : Ring::Padic;
  return Ring::Padic;
}

inline EqHahn eq_pow(const EqHahn& a, unsigned long n) {
  EqHahn r = EqHahn::one(a.field()), b = a;
  for (; n; n >>= 1) {
    if (n & 1) r = r * b;
    if (n > 1) b = b * b;
  }
  return r;
}

inline Output series_out(const EqHahn& s) { return {format_eq(s), series_json(s)}; }
inline Output series_out(const PHahn& s) { return {format_padic(s), series_json(s)}; }

inline Output do_normalize(Context& c, const std::vector<std::string>& a) {
  if (ring_of(c, a) == Ring::Eq) return series_out(parse_eq(a[0], c.F));
  return series_out(parse_padic(a[0], c.F, c.cfg.normalize_options()));
}

inline Output do_binary(Context& c, const std::vector<std::string>& a, bool mul) {
  if (ring_of(c, a) == Ring::Eq) {
    const EqHahn x = parse_eq(a[0], c.F), y = parse_eq(a[1], c.F);
    return series_out(mul ? x * y : x + y);
  }
  const auto opt = c.cfg.normalize_options();
  const PHahn x = parse_padic(a[0], c.F, opt), y = parse_padic(a[1], c.F, opt);
  return series_out(mul ? x * y : x + y);
}

inline Output do_pow(Context& c, const std::vector<std::string>& a) {
  long n = 0;
  try {
    std::size_t used = 0;
    n = std::stol(a[1], &used);
    if (used != a[1].size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw Error(ErrorKind::SyntaxError, "exponent '" + a[1] + "' is not an integer");
  }
  const unsigned long m = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  if (ring_of(c, {a[0]}) == Ring::Eq) {
    EqHahn x = parse_eq(a[0], c.F);
    if (n < 0) x = x.inv(rat_arg(c.cap, "--cap (target precision of the inverse)"));
    return series_out(eq_pow(x, m));
  }
  if (n < 0) usage("negative powers are available on the eq ring only");
  return series_out(ph_pow(parse_padic(a[0], c.F, c.cfg.normalize_options()), static_cast<unsigned>(m)));
}

inline Output do_val(Context& c, const std::vector<std::string>& a) {
  const Valuation v =
      ring_of(c, a) == Ring::Eq ? parse_eq(a[0], c.F).val() : parse_padic(a[0], c.F, c.cfg.normalize_options()).val();
  return {v.str(), json{{"val", val_json(v)}}};
}

/// WittElem as an integer polynomial in g, highest degree first: `3*g+1`.
inline std::string witt_text(const std::vector<Int>& c) {
  std::string out;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] == 0) continue;
    if (!out.empty()) out += "+";
    if (i == 0) {
      out += c[i].str();
      continue;
    }
    if (c[i] != 1) out += c[i].str() + "*";
    out += "g";
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

inline Output do_decompose(Context& c, const std::vector<std::string>& a) {
  if (ring_of(c, a) == Ring::Eq) usage("decompose applies to p-adic series");
  const FracDecomp d = ph_decompose(parse_padic(a[0], c.F, c.cfg.normalize_options()));
  std::string text;
  json rows = json::array();
  for (const auto& [q, e] : d) {
    const std::string value = witt_text(e.value.c);
    if (!text.empty()) text += "\n";
    text += "q=" + to_string(q) + " offset=" + e.offset.str() + " length=" + std::to_string(e.length) + " value=" + value;
    rows.push_back(json{{"q", rat_json(q)}, {"offset", e.offset.str()}, {"length", e.length}, {"value", value}});
  }
  return {text.empty() ? "{}" : text, json{{"classes", rows}}};
}

inline std::vector<PHahn> padic_poly(const Context& c, const std::string& text, const std::optional<Rat>& cap) {
  const PolyAst ast = parse_poly(text);
  const auto opt = c.cfg.normalize_options();
  try {
    return padic_poly_from_ast(ast, c.F, std::nullopt, opt);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::PrecisionLoss || !cap) throw;
  }
  // Coefficients that carry forever: resolve them far enough past cap that
  // f(x) is known below cap for every root.
  const auto rough = padic_poly_from_ast(ast, c.F, Cap(*cap + 1), opt);
  Rat shrink = 0;
  for (const auto& s : polygon_of(rough).segments) shrink = std::max(shrink, -s.root_valuation());
  const Rat work = *cap + Rat(static_cast<long>(rough.size() - 1)) * shrink + 1;
  return padic_poly_from_ast(ast, c.F, Cap(work), opt);
}

inline std::string field_name(const RootBranch& b) {
  return "F_" + std::to_string(b.field->p()) + (b.field_degree > 1 ? "^" + std::to_string(b.field_degree) : "");
}

template <class Series>
Output roots_out(const std::vector<RootBranch>& roots) {
  std::string text;
  json rows = json::array();
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const auto& b = roots[i];
    const Series s = series_of_terms<Series>(b.field, b.terms);
    if (!text.empty()) text += "\n";
    text += "root " + std::to_string(i + 1) + ": " + series_out(s).text;
    text += "\n  field: " + field_name(b);
    text += "\n  residual valuation >= " + b.residual_bound.str();
    json row{{"terms", terms_json(*b.field, {b.terms.begin(), b.terms.end()}, std::nullopt)["digits"]},
             {"field_degree", b.field_degree},
             {"residual_bound", val_json(b.residual_bound)},
             {"limit", nullptr}};
    if (b.limit) {
      const auto& L = *b.limit;
      text += "\n  limit: point " + to_string(L.point) + ", ratio " + to_string(L.ratio) + ", coefficient [" +
              b.field->format(L.coefficient) + "], pattern depth " + std::to_string(L.depth) +
              ", window " + cap_to_string(L.window_end);
      row["limit"] = json{{"point", rat_json(L.point)},
                          {"ratio", rat_json(L.ratio)},
                          {"increment", rat_json(L.increment)},
                          {"depth", L.depth},
                          {"coefficient", b.field->format(L.coefficient)},
                          {"window_end", L.window_end ? rat_json(*L.window_end) : json(nullptr)}};
    }
    rows.push_back(std::move(row));
  }
  return {text.empty() ? "no roots" : text, json{{"roots", rows}}};
}

inline Output do_newton(Context& c, const std::vector<std::string>&) {
  if (c.poly.empty()) usage("newton-solve needs --poly");
  NewtonOptions opt = c.cfg.newton_options();
  const PolyAst ast = parse_poly(c.poly);
  const bool eq = c.ring ? *c.ring == Ring::Eq : c.poly.find('t') != std::string::npos;
  if (eq) {
    if (!c.terms) usage("newton-solve on the eq ring needs --terms");
    if (!c.cap.empty()) usage("--cap applies to the p-adic ring; use --terms");
    opt.max_terms = *c.terms;
    return roots_out<EqHahn>(expand_roots_eq(eq_poly_from_ast(ast, c.F), opt));
  }
  const Rat cap = rat_arg(c.cap, "--cap");
  if (c.terms) opt.max_terms = *c.terms;
  return roots_out<PHahn>(expand_root_padic(padic_poly(c, c.poly, cap), cap, opt));
}

inline Output do_verify(Context& c, const std::vector<std::string>&) {
  if (c.poly.empty() || c.prefix.empty()) usage("verify-root needs --poly and --prefix");
  const Rat bound = rat_arg(c.bound, "--bound");
  const bool eq = c.ring ? *c.ring == Ring::Eq : ring_of(c, {c.prefix}) == Ring::Eq;
  Valuation v;
  if (eq) {
    v = verify_root(eq_poly_from_ast(parse_poly(c.poly), c.F), parse_eq(c.prefix, c.F), bound);
  } else {
    const std::optional<Rat> cap = c.cap.empty() ? std::nullopt : std::optional<Rat>(parse_rat(c.cap));
    PHahn x = parse_padic(c.prefix, c.F, c.cfg.normalize_options());
    if (cap) x = x.truncated(Cap(*cap + 1));
    v = verify_root(padic_poly(c, c.poly, cap), x, bound);
  }
  return {v.str(), json{{"val", val_json(v)}}};
}

inline json index_json(const IndexVec& k) { return json(std::vector<unsigned long>(k.entries().begin(), k.entries().end())); }

inline Output do_reduce(Context& c, const std::vector<std::string>& a) {
  const IndexVec r = reduce(parse_index(a[0]), c.cfg.p);
  return {format_index(r), json{{"reduced", index_json(r)}}};
}

inline Output do_enumerate(Context& c, const std::vector<std::string>& a) {
  if (!c.sigma) usage("enumerate-class needs --sigma");
  std::string text;
  json rows = json::array();
  for (const auto& k : enumerate_class(parse_index(a[0]), *c.sigma, c.cfg.p)) {
    text += (text.empty() ? "" : "\n") + format_index(k);
    rows.push_back(index_json(k));
  }
  return {text, json{{"class", rows}}};
}

inline Certificate parse_certificate(std::string s, const std::string& cap) {
  s.erase(std::remove_if(s.begin(), s.end(), [](char ch) { return ch == ' ' || ch == '(' || ch == ')'; }), s.end());
  Certificate cert;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const bool neg = !item.empty() && item[0] == '-';
    const std::string digits = neg ? item.substr(1) : item;
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
      throw Error(ErrorKind::SyntaxError, "certificate coefficient '" + item + "' is not an integer");
    cert.s.push_back(neg ? -Int(digits) : Int(digits));
  }
  if (cert.s.size() < 2) throw Error(ErrorKind::DomainError, "certificate needs at least s_0 and s_1");
  cert.n = static_cast<unsigned>(cert.s.size() - 2);
  if (!cap.empty()) cert.cap = parse_rat(cap);
  cert.validate();
  return cert;
}

inline Output do_certificate(Context& c, const std::vector<std::string>& a) {
  const Certificate cert = parse_certificate(a[0], c.cap);
  std::optional<std::size_t> depth;
  if (!c.depth.empty()) {
    const Rat d = parse_rat(c.depth);
    if (!is_integer(d) || d < 1) usage("--depth must be a positive integer");
    depth = static_cast<std::size_t>(num(d));
  }
  const std::int64_t p = c.cfg.p;
  const IndexVec kstar = all_ones(cert.n + 1);
  const auto cls = enumerate_class(kstar, cert.n + 1, p);
  const Rat g = grouped_sum(kstar, cert, p);
  const PHahn r = certificate_residual(c.F, cert, depth, c.cfg.normalize_options());
  std::string cls_text;
  json cls_json = json::array();
  for (const auto& k : cls) {
    cls_text += (cls_text.empty() ? "" : " ") + format_index(k);
    cls_json.push_back(index_json(k));
  }
  const std::string vg = g == 0 ? "inf" : std::to_string(vp(g, Int(p)));
  const bool nonzero = !r.empty();
  std::string text = "k*: " + format_index(kstar) + "\nclass: " + cls_text + "\ngrouped_sum: " + to_string(g) +
                     "\nv_p(grouped_sum): " + vg + "\nresidual: " +
                     (nonzero ? "nonzero below O(p^(" + to_string(cert.cap) + ")), val " + r.val().str()
                              : "zero below O(p^(" + to_string(cert.cap) + "))");
  json j{{"kstar", index_json(kstar)},
         {"class", cls_json},
         {"grouped_sum", rat_json(g)},
         {"vp_grouped_sum", g == 0 ? json("inf") : json(vp(g, Int(p)))},
         {"residual_nonzero", nonzero},
         {"residual", series_json(r)}};
  return {text, j};
}

inline Output do_ordinal(Context&, const std::vector<std::string>& a) {
  const std::string& op = a[0];
  if (a.size() != 3) usage("ordinal " + op + " takes two ordinals");
  const Ordinal x = parse_ordinal(a[1]), y = parse_ordinal(a[2]);
  if (op == "add" || op == "mul") {
    const Ordinal r = op == "add" ? x + y : x * y;
    return {format_ordinal(r), json{{"ordinal", format_ordinal(r)}}};
  }
  if (op == "cmp") {
    const auto o = x <=> y;
    const std::string s = o < 0 ? "<" : o > 0 ? ">" : "=";
    return {s, json{{"cmp", s}}};
  }
  usage("ordinal operation must be add, mul or cmp");
}

inline Output do_replicate(Context&, const std::vector<std::string>& a) {
  const Ordinal r = replication_order_type(parse_ordinal(a[0]));
  return {format_ordinal(r), json{{"ordinal", format_ordinal(r)}}};
}

inline Output do_prediction(Context&, const std::vector<std::string>& a) {
  const Ordinal alpha = parse_ordinal(a[0]);
  const std::string verdict = prediction_name(prediction_filter(alpha));
  const std::string rep = alpha.is_zero() ? "0" : format_ordinal(replication_order_type(alpha));
  return {verdict, json{{"prediction", verdict}, {"replicated", rep}}};
}

struct Verb {
  const char* name;
  const char* help;
  std::size_t min_args, max_args;
  Output (*run)(Context&, const std::vector<std::string>&);
};

inline const std::vector<Verb>& verbs() {
  static const std::vector<Verb> v = {
      {"normalize", "print the standard expansion of a series", 1, 1, do_normalize},
      {"add", "sum of two series", 2, 2, [](Context& c, const std::vector<std::string>& a) { return do_binary(c, a, false); }},
      {"mul", "product of two series", 2, 2, [](Context& c, const std::vector<std::string>& a) { return do_binary(c, a, true); }},
      {"pow", "integer power of a series (negative powers need --cap)", 2, 2, do_pow},
      {"val", "valuation of a series", 1, 1, do_val},
      {"decompose", "fractional-part decomposition of a p-adic series", 1, 1, do_decompose},
      {"newton-solve", "root expansions of --poly (--terms T or --cap c)", 0, 0, do_newton},
      {"verify-root", "valuation of --poly at --prefix, checked against --bound", 0, 0, do_verify},
      {"reduce-index", "reduced element of an index", 1, 1, do_reduce},
      {"enumerate-class", "indices of the class of a reduced index with Sigma <= --sigma", 1, 1, do_enumerate},
      {"certificate-check", "grouped sum and residual for coefficients s_0,...,s_{n+1}", 1, 1, do_certificate},
      {"ordinal", "add|mul|cmp of two ordinals", 3, 3, do_ordinal},
      {"order-type-replicate", "order type alpha*w of a replicated support", 1, 1, do_replicate},
      {"prediction-check", "whether order type alpha fits the finite, w, w^w prediction", 1, 1, do_prediction},
  };
  return v;
}

inline std::vector<std::string> split_batch_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ';')) {
    const auto b = item.find_first_not_of(" \t\r");
    const auto e = item.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : item.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace cli

/// Runs one invocation; `args` excludes the program name. Text goes to `out`,
/// diagnostics to `err`; `in` feeds batch mode (a lone "-" argument).
inline int run_command(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err,
                       std::optional<RunConfig> base = std::nullopt) {
  using namespace cli;
  Context ctx;
  CLI::App app{"Exact arithmetic with equal-characteristic and p-adic Hahn series", "hahnforge"};
  app.fallthrough();
  app.require_subcommand(1);

  std::optional<std::int64_t> p;
  std::optional<int> r, L, L_max, max_field_degree, stall_limit;
  std::string ring, config_path, output;
  bool json_flag = false;
  app.add_option("-p", p, "prime p");
  app.add_option("-r", r, "residue field degree (F_{p^r})");
  app.add_option("-L", L, "guard digits per Witt bucket");
  app.add_option("--L-max", L_max, "largest Witt length a bucket may use");
  app.add_option("--max-field-degree", max_field_degree, "largest residue field extension in newton-solve");
  app.add_option("--stall-limit", stall_limit, "newton-solve steps without progress before giving up");
  app.add_option("--ring", ring, "eq or padic (default: from the expression's base)")->check(CLI::IsMember({"eq", "padic"}));
  app.add_option("--config", config_path, "JSON config file (overrides HAHNFORGE_CONFIG)");
  app.add_option("--output", output, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--json", json_flag, "same as --output json");
  app.add_option("--poly", ctx.poly, "polynomial in X");
  app.add_option("--prefix", ctx.prefix, "candidate root prefix");
  app.add_option("--bound", ctx.bound, "required residual valuation");
  app.add_option("--cap", ctx.cap, "precision cap a/b");
  app.add_option("--terms", ctx.terms, "terms per root branch");
  app.add_option("--sigma", ctx.sigma, "bound on Sigma for enumerate-class");
  app.add_option("--depth", ctx.depth, "partial-sum depth for certificate-check");

  // One scalar option per slot: vector options would split `[...]` literals.
  std::map<std::string, std::vector<std::pair<std::string, CLI::Option*>>> slots;
  for (const auto& v : verbs()) {
    auto* sub = app.add_subcommand(v.name, v.help);
    auto& vs = slots[v.name];
    vs.resize(std::max<std::size_t>(v.max_args, 1));
    for (std::size_t i = 0; i < vs.size(); ++i) vs[i].second = sub->add_option("arg" + std::to_string(i + 1), vs[i].first);
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "hahnforge: " << e.what() << "\n" << app.help();
    return ExitUsage;
  }

  const Verb* verb = nullptr;
  for (const auto& v : verbs())
    if (app.got_subcommand(v.name)) verb = &v;

  try {
    ctx.cfg = base ? *base : default_config();
    if (!config_path.empty()) ctx.cfg = load_config_file(config_path);
    if (p) ctx.cfg.p = *p;
    if (r) ctx.cfg.r = *r;
    if (L) ctx.cfg.L = *L;
    if (L_max) ctx.cfg.L_max = *L_max;
    if (max_field_degree) ctx.cfg.max_field_degree = *max_field_degree;
    if (stall_limit) ctx.cfg.stall_limit = *stall_limit;
    if (!output.empty()) ctx.cfg.output = output == "json" ? OutputMode::Json : OutputMode::Text;
    if (json_flag) ctx.cfg.output = OutputMode::Json;
    ctx.cfg.validate();
    if (!ring.empty()) ctx.ring = ring == "eq" ? Ring::Eq : Ring::Padic;
    ctx.F = FqField::make(ctx.cfg.p, ctx.cfg.r);
  } catch (const Error& e) {
    err << "hahnforge: " << e.what() << "\n";
    return exit_code_for(e.kind());
  }

  auto run_one = [&](const std::vector<std::string>& a) -> int {
    try {
      if (a.size() < verb->min_args || a.size() > verb->max_args)
        usage(std::string(verb->name) + " takes " + std::to_string(verb->min_args) +
              (verb->max_args != verb->min_args ? "-" + std::to_string(verb->max_args) : "") + " argument(s), got " +
              std::to_string(a.size()));
      const Output o = verb->run(ctx, a);
      out << (ctx.cfg.output == OutputMode::Json ? o.j.dump() : o.text) << "\n";
      return ExitOk;
    } catch (const Error& e) {
      err << "hahnforge: " << e.what() << "\n";
      return exit_code_for(e.kind());
    }
  };

  std::vector<std::string> a;
  for (const auto& [val, opt] : slots[verb->name])
    if (opt->count() > 0) a.push_back(val);
  if (!(a.size() == 1 && a[0] == "-")) return run_one(a);
  int code = ExitOk;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const int c = run_one(split_batch_line(line));
    if (code == ExitOk) code = c;
  }
  return code;
}

}  // namespace hahnforge
