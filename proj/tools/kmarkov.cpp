// kmarkov: enumerate k-generalized Markov and Cohn trees, list the primes
// in them, label by Farey fractions, and run the invariant suites.
//
// Exit status: 0 success, 1 verification failure, 2 usage or domain error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kmarkov/cohn.hpp"
#include "kmarkov/criterion.hpp"
#include "kmarkov/farey.hpp"
#include "kmarkov/markov_tree.hpp"
#include "kmarkov/primes.hpp"
#include "kmarkov/serialize.hpp"
#include "kmarkov/verify.hpp"

namespace {

using namespace kmarkov;

constexpr int kExitOk = 0;
constexpr int kExitVerify = 1;
constexpr int kExitUsage = 2;

struct KRange {
  unsigned lo = 0, hi = 0;
};

KRange parse_k_range(const std::string& text) {
  auto to_k = [&](const std::string& s) {
    Natural n = parse_natural(s);
    if (!n.fits_uint_p()) throw DomainError("k out of range: " + s);
    return static_cast<unsigned>(n.get_ui());
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    unsigned k = to_k(text);
    return {k, k};
  }
  KRange r{to_k(text.substr(0, dots)), to_k(text.substr(dots + 2))};
  if (r.lo > r.hi) throw DomainError("empty k range: " + text);
  return r;
}

struct Globals {
  std::uint64_t rho_budget = EffortBudget::from_env().rho_iterations;
  int primality_rounds = 0;
  std::size_t max_depth = 16;
  std::string output;

  EffortBudget budget() const { return {rho_budget, primality_rounds}; }

  void check_depth(std::size_t depth) const {
    if (depth > max_depth)
      throw DomainError("depth " + std::to_string(depth) + " exceeds the cap " + std::to_string(max_depth) +
                        " (raise it with --max-depth)");
  }
};

/// stdout unless --output was given.
class Sink {
public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw DomainError("cannot open output file " + path);
    }
  }
  std::ostream& out() { return file_ ? *file_ : std::cout; }

private:
  std::unique_ptr<std::ofstream> file_;
};

std::optional<MarkovTreeKind> markov_kind(const std::string& t) {
  if (t == "wmt") return MarkovTreeKind::wide;
  if (t == "mt") return MarkovTreeKind::markov;
  if (t == "lmt") return MarkovTreeKind::lower;
  return std::nullopt;
}

std::optional<CohnTreeKind> cohn_kind(const std::string& t) {
  if (t == "wgct") return CohnTreeKind::wide;
  if (t == "gct") return CohnTreeKind::cohn;
  if (t == "lgct") return CohnTreeKind::lower;
  return std::nullopt;
}

std::string csv_quote(const std::string& s) { return "\"" + s + "\""; }

// ---------------------------------------------------------------------------

struct EnumerateArgs {
  std::string k = "0";
  std::size_t depth = 0;
  std::string tree = "wmt";
  std::optional<std::string> l;
  std::string format = "text";
};

int cmd_enumerate(const EnumerateArgs& a, const Globals& g) {
  g.check_depth(a.depth);
  const Natural k = parse_natural(a.k);
  Sink sink(g.output);
  std::ostream& os = sink.out();

  if (auto kind = markov_kind(a.tree)) {
    if (a.l) throw DomainError("--l applies only to Cohn trees");
    if (a.format == "csv") os << "k,depth,address,a,b,c\n";
    enumerate(k, a.depth, *kind, [&](const MarkovTriple& t) {
      const std::string addr = t.address->str();
      if (a.format == "csv") {
        os << to_decimal(k) << ',' << t.address->depth() << ',' << addr << ',' << to_decimal(t.a) << ','
           << to_decimal(t.b) << ',' << to_decimal(t.c) << '\n';
      } else if (a.format == "json") {
        Json j = to_json(t);
        j["depth"] = t.address->depth();
        os << j.dump() << '\n';
      } else {
        os << t.address->depth() << ' ' << (addr.empty() ? "-" : addr) << " (" << to_decimal(t.a) << ", "
           << to_decimal(t.b) << ", " << to_decimal(t.c) << ")\n";
      }
    });
    return kExitOk;
  }

  const auto kind = cohn_kind(a.tree);
  if (!kind) throw DomainError("unknown tree '" + a.tree + "'");
  const Integer l = a.l ? parse_integer(*a.l) : Integer(-k);
  if (a.format == "csv") os << "k,l,depth,address,a,b,c,P,Q,R\n";
  enumerate_cohn(k, l, a.depth, *kind, [&](const CohnTriple& t) {
    const std::string addr = t.address()->str();
    if (a.format == "csv") {
      os << to_decimal(k) << ',' << to_decimal(l) << ',' << t.address()->depth() << ',' << addr << ','
         << to_decimal(t.P().m12) << ',' << to_decimal(t.Q().m12) << ',' << to_decimal(t.R().m12) << ','
         << csv_quote(t.P().str()) << ',' << csv_quote(t.Q().str()) << ',' << csv_quote(t.R().str()) << '\n';
    } else if (a.format == "json") {
      Json j = to_json(t);
      j["depth"] = t.address()->depth();
      os << j.dump() << '\n';
    } else {
      os << t.address()->depth() << ' ' << (addr.empty() ? "-" : addr) << " P=" << t.P().str()
         << " Q=" << t.Q().str() << " R=" << t.R().str() << '\n';
    }
  });
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct PrimesArgs {
  std::string k = "0";
  std::size_t depth = 10;
  std::string tree = "lmt";
  unsigned jobs = 1;
  std::string format = "text";
};

int cmd_primes(const PrimesArgs& a, const Globals& g) {
  g.check_depth(a.depth);
  const KRange range = parse_k_range(a.k);
  const auto kind = markov_kind(a.tree);
  if (!kind) throw DomainError("primes works on wmt, mt or lmt, not '" + a.tree + "'");
  Sink sink(g.output);
  std::ostream& os = sink.out();
  const bool several = range.hi > range.lo;
  for (unsigned k = range.lo; k <= range.hi; ++k) {
    const std::vector<Natural> primes = primes_list(k, a.depth, *kind, a.jobs, g.primality_rounds);
    if (a.format == "json") {
      Json list = Json::array();
      for (const Natural& p : primes) list.push_back(to_decimal(p));
      os << Json{{"k", std::to_string(k)}, {"depth", a.depth}, {"tree", name(*kind)}, {"count", primes.size()},
                 {"primes", list}}
                .dump()
         << '\n';
      continue;
    }
    if (several) os << "# k=" << k << " count=" << primes.size() << '\n';
    for (const Natural& p : primes) os << to_decimal(p) << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string suite = "all";
  std::string k = "0..10";
  std::size_t depth = 10;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
};

int cmd_verify(const VerifyArgs& a, const Globals& g) {
  g.check_depth(a.depth);
  const KRange range = parse_k_range(a.k);
  VerifyConfig cfg;
  cfg.k_min = range.lo;
  cfg.k_max = range.hi;
  cfg.depth = a.depth;
  cfg.samples = a.samples;
  cfg.seed = a.seed;
  cfg.jobs = a.jobs;
  cfg.budget = {std::min<std::uint64_t>(g.rho_budget, 2000), g.primality_rounds};

  std::vector<std::string> suites;
  if (a.suite == "all")
    suites = suite_names();
  else
    suites = {a.suite};

  Json reports = Json::array();
  bool ok = true;
  for (const std::string& s : suites) {
    CheckReport r = run_suite(s, cfg);
    ok = ok && r.ok();
    reports.push_back(to_json(r));
    std::cerr << s << ": " << (r.ok() ? "ok" : "FAILED") << " (" << r.checks << " checks, " << r.failures.size()
              << " failures)\n";
  }
  Sink sink(g.output);
  sink.out() << Json{{"ok", ok}, {"suites", reports}}.dump(2) << '\n';
  return ok ? kExitOk : kExitVerify;
}

// ---------------------------------------------------------------------------

int cmd_label(const std::string& k_text, const std::string& t_text, const std::string& format, const Globals& g) {
  const Label l = label(parse_natural(k_text), Fraction::parse(t_text));
  Sink sink(g.output);
  if (format == "json") {
    sink.out() << to_json(l).dump() << '\n';
  } else {
    sink.out() << "t = " << l.t.str() << "\nm = " << to_decimal(l.m_t) << '\n';
    if (l.u_t) sink.out() << "u = " << to_decimal(*l.u_t) << '\n';
  }
  return kExitOk;
}

int cmd_criterion(const std::string& k_text, const std::string& b_text, const Globals& g) {
  const Natural b = parse_natural(b_text);
  if (b < 1) throw DomainError("b must be >= 1");
  const UniquenessVerdict v = classify(parse_natural(k_text), b, g.budget());
  Sink sink(g.output);
  sink.out() << to_json(v).dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-generalized Markov triples, Cohn matrices and Farey labels"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--rho-budget", g.rho_budget, "Pollard rho iterations per factorization")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--primality-rounds", g.primality_rounds, "Extra Miller-Rabin rounds after BPSW")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--max-depth", g.max_depth, "Hard cap on enumeration depth")->capture_default_str();
  app.add_option("-o,--output", g.output, "Write to this file instead of stdout");

  const std::vector<std::string> trees{"wmt", "mt", "lmt", "wgct", "gct", "lgct"};
  const std::vector<std::string> suites{"all", "trees", "cohn", "farey", "criterion", "identity"};

  EnumerateArgs ea;
  auto* en = app.add_subcommand("enumerate", "Breadth-first listing of a tree");
  en->add_option("--k", ea.k, "k >= 0")->required();
  en->add_option("--depth", ea.depth, "Depth, root = 0")->capture_default_str();
  en->add_option("--tree", ea.tree)->check(CLI::IsMember(trees))->capture_default_str();
  en->add_option("--l", ea.l, "Root parameter for Cohn trees (default -k)");
  en->add_option("--format", ea.format)->check(CLI::IsMember({"text", "json", "csv"}))->capture_default_str();

  PrimesArgs pa;
  auto* pr = app.add_subcommand("primes", "Probable primes among all entries, sorted");
  pr->add_option("--k", pa.k, "k or a range lo..hi")->required();
  pr->add_option("--depth", pa.depth)->capture_default_str();
  pr->add_option("--tree", pa.tree)->check(CLI::IsMember({"wmt", "mt", "lmt"}))->capture_default_str();
  pr->add_option("--jobs", pa.jobs)->check(CLI::PositiveNumber)->capture_default_str();
  pr->add_option("--format", pa.format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  VerifyArgs va;
  auto* ve = app.add_subcommand("verify", "Run invariant suites; JSON report");
  ve->add_option("--suite", va.suite)->check(CLI::IsMember(suites))->capture_default_str();
  ve->add_option("--k", va.k, "k or a range lo..hi")->capture_default_str();
  ve->add_option("--depth", va.depth)->capture_default_str();
  ve->add_option("--samples", va.samples)->capture_default_str();
  ve->add_option("--seed", va.seed)->capture_default_str();
  ve->add_option("--jobs", va.jobs)->check(CLI::PositiveNumber)->capture_default_str();

  std::string lk, lt, lformat = "text";
  auto* la = app.add_subcommand("label", "m_t and u_t for a fraction in [0, 1]");
  la->add_option("--k", lk)->required();
  la->add_option("--t", lt, "Fraction n/d")->required();
  la->add_option("--format", lformat)->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  std::string ck, cb;
  auto* cr = app.add_subcommand("criterion", "Uniqueness verdict for a maximum b");
  cr->add_option("--k", ck)->required();
  cr->add_option("--b", cb)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*en) return cmd_enumerate(ea, g);
    if (*pr) return cmd_primes(pa, g);
    if (*ve) return cmd_verify(va, g);
    if (*la) return cmd_label(lk, lt, lformat, g);
    if (*cr) return cmd_criterion(ck, cb, g);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violated: " << e.what() << '\n';
    return kExitVerify;
  }
  return kExitUsage;
}
