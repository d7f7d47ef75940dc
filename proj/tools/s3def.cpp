// s3def: classify S3 cubic fields at p, scan the 27 + 4a^3 family, and
// check the finite-module and deformation identities behind the verdicts.
//
// Exit codes: 0 clean, 2 usage or structural error, 3 alarm (a nongeneric
// family member, a failed relation, or a failed module check).
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "s3def/classification.hpp"
#include "s3def/deformation.hpp"
#include "s3def/errors.hpp"
#include "s3def/family_search.hpp"
#include "s3def/number_field.hpp"
#include "s3def/s3_modules.hpp"

using namespace s3def;
using json = nlohmann::ordered_json;

namespace {

struct RunConfig {
  unsigned precision = 6;     // p-adic digits N
  unsigned series_degree = 6; // power series truncation D
  unsigned max_index = 4;     // deepest degeneracy index probed
  u64 ideal_cap = 1000000;    // class-number fast-path budget
  unsigned workers = 1;
  std::string format = "text";
  std::string ledger;         // empty: $S3DEF_LEDGER_DIR/family.csv
};

std::string u128_dec(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v) {
    s.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
    v /= 10;
  }
  return {s.rbegin(), s.rend()};
}

void load_config(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw out_of_range("config: cannot open " + path);
  json j = json::parse(in, nullptr, true, true);  // allow comments
  auto positive = [](const json& v, const std::string& key) -> u64 {
    if (!v.is_number_integer() || v.get<long long>() <= 0)
      throw out_of_range("config: " + key + " must be a positive integer");
    return v.get<u64>();
  };
  for (const auto& [key, val] : j.items()) {
    if (key == "precision") cfg.precision = static_cast<unsigned>(positive(val, key));
    else if (key == "series_degree") cfg.series_degree = static_cast<unsigned>(positive(val, key));
    else if (key == "max_index") cfg.max_index = static_cast<unsigned>(positive(val, key));
    else if (key == "ideal_cap") cfg.ideal_cap = positive(val, key);
    else if (key == "workers") cfg.workers = static_cast<unsigned>(positive(val, key));
    else if (key == "format") cfg.format = val.get<std::string>();
    else if (key == "ledger") cfg.ledger = val.get<std::string>();
    else throw out_of_range("config: unknown key \"" + key + "\"");
  }
  if (cfg.format != "text" && cfg.format != "json")
    throw out_of_range("config: format must be text or json");
}

std::string default_ledger(const RunConfig& cfg) {
  if (!cfg.ledger.empty()) return cfg.ledger;
  const char* dir = std::getenv("S3DEF_LEDGER_DIR");
  return std::string(dir && *dir ? dir : ".") + "/family.csv";
}

Rational parse_rational(const std::string& s) {
  Rational r;
  const size_t slash = s.find('/');
  try {
    r.num = std::stoll(s.substr(0, slash));
    r.den = slash == std::string::npos ? 1 : std::stoll(s.substr(slash + 1));
  } catch (const std::exception&) {
    throw out_of_range("expected an integer or n/d fraction, got " + s);
  }
  if (r.den == 0) throw out_of_range("zero denominator in " + s);
  return r;
}

int run_classify(const RunConfig& cfg, const std::vector<i64>& coeff, u64 p) {
  ClassifyParams params;
  params.max_index = cfg.max_index;
  params.precision = cfg.precision;
  params.ideal_count_cap = cfg.ideal_cap;
  const Cubic f{coeff[0], coeff[1], coeff[2]};
  const ClassificationReport r = classify_extension(f, p, params);
  std::cout << (cfg.format == "json" ? report_to_json(r) : report_to_text(r))
            << (cfg.format == "json" ? "\n" : "");
  return r.completed ? 0 : 2;
}

int run_search(const RunConfig& cfg, const std::string& range) {
  const size_t colon = range.find(':');
  if (colon == std::string::npos)
    throw out_of_range("--range wants A:B, got " + range);
  i64 a_lo = 0, a_hi = 0;
  try {
    a_lo = std::stoll(range.substr(0, colon));
    a_hi = std::stoll(range.substr(colon + 1));
  } catch (const std::exception&) {
    throw out_of_range("--range wants A:B, got " + range);
  }

  const std::string ledger = default_ledger(cfg);
  const ScanSummary s = scan_family_range(a_lo, a_hi, ledger, cfg.workers);

  if (cfg.format == "json") {
    json j;
    j["a_lo"] = s.a_lo;
    j["a_hi"] = s.a_hi;
    j["ledger"] = ledger;
    j["examined"] = s.examined;
    j["fresh"] = s.fresh;
    j["prime_members"] = s.primes;
    j["composites"] = s.composites;
    auto bad = json::array();
    for (const LedgerRecord& r : s.nongeneric)
      bad.push_back({{"a", r.a}, {"p", r.p}, {"witness", u128_dec(r.witness)}});
    j["nongeneric"] = std::move(bad);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "family x^3 + ax + 1, a in [" << s.a_lo << ", " << s.a_hi
              << "] (ledger " << ledger << ")\n"
              << "  examined " << s.examined << ": " << s.primes
              << " prime members, " << s.composites << " composite\n"
              << "  fresh this run: " << s.fresh << "\n";
    if (s.nongeneric.empty()) {
      std::cout << "  nongeneric members: none\n";
    } else {
      for (const LedgerRecord& r : s.nongeneric)
        std::cout << "  NONGENERIC a = " << r.a << ", p = " << r.p
                  << ", witness " << u128_dec(r.witness) << "\n";
    }
  }
  return s.nongeneric.empty() ? 0 : 3;
}

int run_deform_verify(const RunConfig& cfg, u64 p, bool two_parameter) {
  const Deformation d =
      make_deformation(p, cfg.precision, cfg.series_degree, two_parameter);
  const DeformationReport rep = verify_deformation(d);
  if (cfg.format == "json") {
    json j;
    j["p"] = rep.p;
    j["N"] = rep.N;
    j["D"] = rep.D;
    j["two_parameter_u"] = rep.two_parameter;
    auto rel = json::array();
    for (const RelationCheck& r : rep.relations)
      rel.push_back({{"name", r.name}, {"ok", r.ok}, {"detail", r.detail}});
    j["relations"] = std::move(rel);
    j["ok"] = rep.ok();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "deformation over Z/" << rep.p << "^" << rep.N
              << "[[T1,T2,T3]], degree <= " << rep.D
              << (rep.two_parameter ? ", two-parameter u" : "") << "\n";
    for (const RelationCheck& r : rep.relations)
      std::cout << "  " << (r.ok ? "ok   " : "FAIL ") << r.name
                << (r.ok ? "" : ": " + r.detail) << "\n";
  }
  return rep.ok() ? 0 : 3;
}

int run_loci_eval(const RunConfig& cfg, u64 p, bool two_parameter,
                  const std::string& t1, const std::string& t2,
                  const std::string& t3) {
  const Deformation d =
      make_deformation(p, cfg.precision, cfg.series_degree, two_parameter);
  const LociReport r = evaluate_loci(d, parse_rational(t1), parse_rational(t2),
                                     parse_rational(t3));
  if (cfg.format == "json") {
    json j;
    j["p"] = p;
    j["precision"] = r.precision;
    j["f"] = r.f_value;
    j["g"] = r.g_value;
    j["reducible"] = r.reducible;
    j["ordinary"] = r.ordinary;
    j["dihedral"] = r.dihedral;
    j["caveat"] = r.caveat;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "loci at (" << t1 << ", " << t2 << ", " << t3 << "), mod "
              << p << "^" << r.precision << "\n"
              << "  f = " << r.f_value << ", g = " << r.g_value << "\n"
              << "  reducible: " << (r.reducible ? "yes" : "no")
              << "  ordinary: " << (r.ordinary ? "yes" : "no")
              << "  dihedral: " << (r.dihedral ? "yes" : "no") << "\n";
    if (!r.caveat.empty()) std::cout << "  caveat: " << r.caveat << "\n";
  }
  return 0;
}

int run_s3mod_check(const RunConfig& cfg, u64 p, unsigned j_prec, unsigned i,
                    bool require_inertia) {
  const DegenerateModelReport r =
      verify_degenerate_model(p, j_prec, i, require_inertia);
  if (cfg.format == "json") {
    json j;
    j["p"] = r.p;
    j["j"] = r.j;
    j["i"] = r.i;
    j["ell"] = r.ell;
    j["phi_equivariant"] = r.phi_equivariant;
    j["pi_equivariant"] = r.pi_equivariant;
    j["pi_phi_zero"] = r.pi_phi_zero;
    j["kernel_is_image"] = r.kernel_is_image;
    j["middle_type"] = r.middle_type;
    j["quotient_type"] = r.quotient_type;
    j["types_ok"] = r.types_ok;
    j["pairwise_invariants"] = r.pairwise_invariants;
    j["intersections_ok"] = r.intersections_ok;
    j["inertia_applicable"] = r.inertia_applicable;
    j["inertia_ok"] = r.inertia_ok;
    j["ok"] = r.ok();
    std::cout << j.dump(2) << "\n";
  } else {
    auto mult = [](const std::array<unsigned, 3>& m) {
      return std::to_string(m[0]) + " trivial, " + std::to_string(m[1]) +
             " sign, " + std::to_string(m[2]) + " standard";
    };
    std::cout << "degenerate model at p = " << r.p << ", j = " << r.j
              << ", i = " << r.i << " (ell = " << r.ell << ")\n"
              << "  exact sequence: phi "
              << (r.phi_equivariant ? "equivariant" : "NOT equivariant")
              << ", pi " << (r.pi_equivariant ? "equivariant" : "NOT equivariant")
              << ", pi.phi " << (r.pi_phi_zero ? "zero" : "NONZERO")
              << ", ker pi " << (r.kernel_is_image ? "= im phi" : "!= im phi")
              << "\n"
              << "  middle type: " << mult(r.middle_type)
              << "; quotient type: " << mult(r.quotient_type) << "\n"
              << "  pairwise and triple image intersections:";
    for (unsigned k : r.pairwise_invariants) std::cout << " Z/" << r.p << "^" << k;
    std::cout << (r.intersections_ok ? " (as expected)" : " (UNEXPECTED)")
              << "\n";
    if (r.inertia_applicable)
      std::cout << "  inertia span claims: " << (r.inertia_ok ? "hold" : "FAIL")
                << "\n";
    std::cout << "  verdict: " << (r.ok() ? "all checks pass" : "CHECKS FAILED")
              << "\n";
  }
  return r.ok() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  // Config first, so every flag given on the line overrides it.
  try {
    for (int i = 1; i < argc; ++i) {
      const std::string arg = argv[i];
      if (arg == "--config" && i + 1 < argc) load_config(argv[i + 1], cfg);
      else if (arg.rfind("--config=", 0) == 0) load_config(arg.substr(9), cfg);
    }
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"S3 cubic fields: neatness, the 27 + 4a^3 family, and the"
               " finite checks behind the universal deformation"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (flags override)");
  app.add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--precision", cfg.precision, "p-adic digits N")
      ->check(CLI::PositiveNumber);
  app.add_option("--workers", cfg.workers, "scan worker threads")
      ->check(CLI::PositiveNumber);

  auto* classify = app.add_subcommand(
      "classify", "classify x^3 + c2 x^2 + c1 x + c0 at a prime p > 3");
  std::vector<i64> coeff;
  u64 p = 5;
  classify->add_option("coeff", coeff, "c2 c1 c0")->expected(3)->required();
  classify->add_option("--p", p, "the prime")->required();
  classify->add_option("--max-index", cfg.max_index,
                       "deepest degeneracy index probed")
      ->check(CLI::PositiveNumber);
  classify->add_option("--ideal-cap", cfg.ideal_cap,
                       "class-number fast-path budget")
      ->check(CLI::PositiveNumber);

  auto* search = app.add_subcommand(
      "search", "scan x^3 + ax + 1 members with p = 27 + 4a^3 prime");
  std::string range;
  search->add_option("--range", range, "a range A:B")->required();
  search->add_option("--ledger", cfg.ledger,
                     "ledger path (default $S3DEF_LEDGER_DIR/family.csv)");

  auto* deform = app.add_subcommand(
      "deform-verify", "verify the explicit lift relations over the"
                       " truncated series ring");
  bool two_parameter = false;
  deform->add_option("--p", p, "the prime")->required();
  deform->add_option("--N", cfg.precision, "coefficient ring Z/p^N")
      ->check(CLI::PositiveNumber);
  deform->add_option("--D", cfg.series_degree, "series degree cutoff")
      ->check(CLI::PositiveNumber);
  deform->add_flag("--two-parameter-u", two_parameter,
                   "u = diag(1+T1, 1+T2) instead of scalar");

  auto* loci = app.add_subcommand(
      "loci-eval", "evaluate the reducible/ordinary/dihedral loci at a point");
  std::string t1 = "0", t2 = "0", t3 = "0";
  loci->add_option("--p", p, "the prime")->required();
  loci->add_option("--N", cfg.precision, "coefficient ring Z/p^N")
      ->check(CLI::PositiveNumber);
  loci->add_option("--D", cfg.series_degree, "series degree cutoff")
      ->check(CLI::PositiveNumber);
  loci->add_option("--t1", t1, "T1 value, integer or n/d with p-unit d");
  loci->add_option("--t2", t2, "T2 value");
  loci->add_option("--t3", t3, "T3 value");
  loci->add_flag("--two-parameter-u", two_parameter,
                 "u = diag(1+T1, 1+T2) instead of scalar");

  auto* s3mod = app.add_subcommand(
      "s3mod-check", "verify the degenerate-model module identities");
  unsigned j_prec = 2, i_idx = 1;
  bool require_inertia = false;
  s3mod->add_option("--p", p, "the prime")->required();
  s3mod->add_option("--j", j_prec, "coefficient ring Z/p^j")
      ->check(CLI::PositiveNumber);
  s3mod->add_option("--i", i_idx, "degeneracy index of the model");
  s3mod->add_flag("--require-inertia", require_inertia,
                  "fail instead of skipping span checks when i < j");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;  // --help is clean, any parse error is usage
  }

  try {
    if (app.got_subcommand(classify)) return run_classify(cfg, coeff, p);
    if (app.got_subcommand(search)) return run_search(cfg, range);
    if (app.got_subcommand(deform)) return run_deform_verify(cfg, p, two_parameter);
    if (app.got_subcommand(loci))
      return run_loci_eval(cfg, p, two_parameter, t1, t2, t3);
    if (app.got_subcommand(s3mod))
      return run_s3mod_check(cfg, p, j_prec, i_idx, require_inertia);
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
