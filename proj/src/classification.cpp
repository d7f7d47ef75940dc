#include "s3def/classification.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "s3def/errors.hpp"
#include "s3def/modmath.hpp"

namespace s3def {

namespace {

std::string int_str(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v) {
    s.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

std::string int_str(i128 v) {
  if (v < 0) return "-" + int_str(static_cast<u128>(-v));
  return int_str(static_cast<u128>(v));
}

std::string cubic_str(const Cubic& f) {
  std::ostringstream os;
  os << "x^3";
  auto term = [&](i64 c, const char* mono) {
    if (c == 0) return;
    os << (c < 0 ? " - " : " + ");
    u64 a = c < 0 ? -static_cast<u64>(c) : static_cast<u64>(c);
    if (a != 1 || *mono == '\0') os << a;
    os << mono;
  };
  term(f.c2, "x^2");
  term(f.c1, "x");
  term(f.c0, "");
  return os.str();
}

std::string pattern_str(const std::vector<std::pair<unsigned, unsigned>>& ef) {
  std::ostringstream os;
  for (const auto& [e, f] : ef) os << "(" << e << "," << f << ")";
  return os.str();
}

// Kronecker symbol of a fundamental discriminant at a prime q.
int chi_quadratic(i128 dk, u64 q) {
  if (q == 2) {
    u64 r = static_cast<u64>(((dk % 8) + 8) % 8);
    if (r % 2 == 0) return 0;
    return r == 1 ? 1 : -1;
  }
  u64 r = static_cast<u64>(((dk % static_cast<i128>(q)) + q) % q);
  if (r == 0) return 0;
  return powmod64(r, (q - 1) / 2, q) == 1 ? 1 : -1;
}

// #{(a,b,c) : abc <= x}, an upper bound for the number of integral ideals
// of norm <= x in a cubic field (each prime power norm q^k admits at most
// as many ideals as compositions of k into three parts).
u128 ideal_count_bound(u64 x) {
  u128 total = 0;
  for (u64 a = 1; a <= x; ++a) {
    u64 xa = x / a;
    for (u64 b = 1; b <= xa; ++b) total += xa / b;
  }
  return total;
}

struct LocalWitnesses {
  unsigned precision = 0;
  u128 hensel_root = 0;
  u128 image_qp = 0;
  unsigned qp_index = 0;
  i64 quad_d = 0;
  u128 quad_a = 0, quad_b = 0;
  unsigned ramified_index = 0;
};

// p-adic images of the fundamental unit at both completions above p, and
// their p-power indices. Throws precision_too_low if N is too tight for
// the index probes.
LocalWitnesses local_unit_data(const CubicField& K, const Vec3& unit, u64 p,
                               unsigned max_index, unsigned N) {
  LocalWitnesses w;
  w.precision = N;
  const std::vector<i64> fv{K.f.c0, K.f.c1, K.f.c2, 1};

  // The (2,1)(1,1) pattern with p prime to the index means f mod p has one
  // simple and one double root; the simple root carries the unramified place.
  u64 simple = p, seen = 0;
  for (u64 r : roots_mod_p(fv, p)) {
    u64 fp = static_cast<u64>(
        (mulmod64(3, mulmod64(r, r, p), p) +
         mulmod64(reduce_signed(2 * static_cast<i128>(K.f.c2), p), r, p) +
         reduce_signed(K.f.c1, p)) %
        p);
    if (fp != 0) {
      simple = r;
      ++seen;
    }
  }
  if (seen != 1)
    throw std::logic_error("local_unit_data: expected one simple root mod p");

  const u128 mod = pow_u128_checked(p, N);
  const Vec3 num = theta_numerator(K, unit);
  const u128 deninv = invmod128(reduce_signed(K.den, mod), mod);

  const u128 root = hensel_lift_root(fv, simple, p, N);
  w.hensel_root = root;
  u128 val = reduce_signed(num[0], mod);
  val = (val + mulmod128(reduce_signed(num[1], mod), root, mod)) % mod;
  val = (val + mulmod128(reduce_signed(num[2], mod),
                         mulmod128(root, root, mod), mod)) %
        mod;
  w.image_qp = mulmod128(val, deninv, mod);
  w.qp_index = pth_power_index_qp(w.image_qp, p, max_index, N);

  // Ramified completion: Q_p(sqrt(p)) or Q_p(sqrt(up)) for a non-residue u.
  i64 u0 = 2;
  while (kronecker(u0, p) != -1) ++u0;
  LocalQuadField F;
  QuadElt rootq;
  bool found = false;
  for (i64 d : {static_cast<i64>(p), u0 * static_cast<i64>(p)}) {
    try {
      F = make_quadratic_extension(d, p, N);
      rootq = quad_embed_cubic_root(fv, F);
      found = true;
      break;
    } catch (const wrong_field&) {
    }
  }
  if (!found)
    throw std::logic_error("local_unit_data: no ramified quadratic matches");

  QuadElt imgq = QuadElt(F, num[0], 0) + QuadElt(F, num[1], 0) * rootq +
                 QuadElt(F, num[2], 0) * rootq * rootq;
  imgq = imgq * QuadElt(F, K.den, 0).inverse();
  w.quad_d = F.d;
  w.quad_a = imgq.a;
  w.quad_b = imgq.b;
  w.ramified_index = quad_unit_power_index(imgq, max_index);
  return w;
}

void run_checks(const Cubic& f, u64 p, const ClassifyParams& params,
                ClassificationReport& rep) {
  rep.f = f;
  rep.p = p;
  if (p <= 3 || !is_prime_u64(p))
    throw small_prime("classification needs a prime p > 3, got " +
                      std::to_string(p));

  const CubicField K = make_cubic_field(f);
  if (K.disc > 0) {
    if (is_square_u128(static_cast<u128>(K.disc)))
      throw square_discriminant("discriminant " + int_str(K.disc) +
                                " is a square: Galois group C3, not S3");
    throw not_totally_complex("discriminant " + int_str(K.disc) +
                              " > 0: totally real cubic, signature (3,0)");
  }
  rep.poly_disc = K.poly_disc;
  rep.disc = K.disc;
  rep.index = K.index;
  for (const auto& [q, e] : K.disc_factors) rep.ramified_primes.push_back(q);

  const std::vector<std::pair<unsigned, unsigned>> want{{2, 1}, {1, 1}};
  const PrimeSplit ps = splitting_type(K, p);
  if (ps.ef != want)
    throw wrong_splitting_type(
        "p = " + std::to_string(p) + " has splitting pattern " +
        pattern_str(ps.ef) + " in K; classification requires (2,1)(1,1)");

  // Condition: no completion of the Galois closure L at a ramified prime
  // contains the p-th roots of unity. Ramification in L is supported on the
  // primes of disc(K) (Stickelberger forces the resolvent discriminant's
  // support inside it), and the inertia/decomposition shape in S3 pins the
  // residue degree of L above each.
  bool c3 = true;
  std::string offender;
  const i128 dk = quadratic_field_disc(K.disc);
  for (u64 q : rep.ramified_primes) {
    RamifiedPrimeEvidence ev;
    ev.q = q;
    unsigned fL = 1, eL = 2;
    if (q == p) {
      ev.note = "transposition inertia at p; e = 2 < p - 1";
    } else {
      const PrimeSplit sq = splitting_type(K, q);
      if (sq.ef == want) {
        ev.note = "transposition inertia; decomposition group C2";
      } else if (sq.ef.size() == 1 && sq.ef[0] == std::make_pair(3u, 1u)) {
        const int chi = chi_quadratic(dk, q);
        if (chi == 1) {
          fL = 1;
          eL = 3;
          ev.note = "C3 inertia, resolvent quadratic split";
        } else if (chi == -1) {
          fL = 2;
          eL = 3;
          ev.note = "C3 inertia, resolvent quadratic inert";
        } else {
          // Tame inertia is cyclic, so S3 inertia forces wild q = 3.
          if (q != 3)
            throw std::logic_error("S3 inertia at a tame prime");
          fL = 1;
          eL = 6;
          ev.note = "wild S3 inertia at 3";
        }
      } else {
        throw std::logic_error("ramified prime with unramified pattern");
      }
    }
    ev.residue_degree = fL;
    ev.ramification = eL;
    u128 rs = fL == 2 ? static_cast<u128>(q) * q : static_cast<u128>(q);
    if (rs <= 0xFFFFFFFFFFFFFFFFull) {
      ev.roots_of_unity =
          contains_pth_roots_of_unity(static_cast<u64>(rs), eL, p);
    } else {
      ev.roots_of_unity = powmod64(q % p, fL, p) == 1;
    }
    if (ev.roots_of_unity) {
      c3 = false;
      offender = "q = " + std::to_string(q) + " (residue field size " +
                 int_str(rs) + ")";
    }
    rep.ramified_evidence.push_back(ev);
  }
  rep.condition3.passed = c3;
  rep.condition3.evidence =
      c3 ? "no completion of L at a ramified prime contains mu_p"
         : "completion of L above " + offender + " contains mu_p";

  // Condition: p is prime to the class numbers of the resolvent quadratic
  // and of K (together with h_k this controls h_L away from small primes).
  const u64 hk = quadratic_class_number(dk);
  bool c2 = hk % p != 0;
  std::ostringstream ev2;
  ev2 << "h_k = " << hk << " (resolvent disc " << int_str(dk) << ")";
  const double mb = minkowski_bound(K);
  const u64 X = static_cast<u64>(std::floor(mb));
  u128 bound = 0;
  if (X <= params.ideal_count_cap) bound = ideal_count_bound(X);
  if (bound != 0 && bound < p) {
    ev2 << "; at most " << int_str(bound) << " ideals of norm <= " << X
        << " < p, so p cannot divide h_K";
  } else {
    const u64 hK = class_number_upper(K);
    if (hK % p == 0) {
      c2 = false;
      ev2 << "; p divides the class-number multiple " << hK;
      rep.warnings.push_back(
          "condition 2 judged on a multiple of h_K; the exact class number "
          "may still avoid p");
    } else {
      ev2 << "; h_K divides " << hK << ", prime to p";
    }
  }
  if (hk % p == 0) ev2 << "; p divides h_k";
  rep.condition2.passed = c2;
  rep.condition2.evidence = ev2.str();

  // Condition: a unit that is locally a p-th power everywhere is a global
  // p-th power. With conditions 2 and 3 in place this reduces to the places
  // over p, and the unramified completion imposes nothing (its index is the
  // degeneracy index); the ramified completion must see a non-p-th-power.
  const UnitSearchResult unit = fundamental_unit(K);
  rep.unit_coords = unit.coords;
  rep.unit_theta = theta_numerator(K, unit.coords);
  rep.unit_theta_den = K.den;
  rep.unit_certified = unit.certified;
  rep.unit_note = unit.note;
  if (!unit.certified)
    rep.warnings.push_back(
        "fundamental unit not certified within the exhaustion budget; "
        "treated as fundamental heuristically");
  rep.warnings.push_back(
      "assumes the cubic subfield units generate the unit group of the "
      "Galois closure up to index prime to p");

  if (K.index % p == 0)
    throw index_divisor("p divides the index [O_K : Z[theta]] = " +
                        std::to_string(K.index) +
                        "; theta-adic completions unavailable");
  if (static_cast<u64>(K.den % p) == 0)
    throw std::logic_error("denominator divisible by p despite the index");

  const unsigned base =
      params.precision ? params.precision : params.max_index + 2;
  LocalWitnesses w;
  for (unsigned attempt = 0;; ++attempt) {
    try {
      w = local_unit_data(K, unit.coords, p, params.max_index,
                          base << attempt);
      break;
    } catch (const precision_too_low&) {
      if (attempt == 2) throw;
    }
  }
  rep.precision = w.precision;
  rep.hensel_root = w.hensel_root;
  rep.unit_image_qp = w.image_qp;
  rep.quad_d = w.quad_d;
  rep.unit_image_quad_a = w.quad_a;
  rep.unit_image_quad_b = w.quad_b;
  rep.ramified_power_index = w.ramified_index;
  rep.condition1.passed = w.ramified_index == 0;
  rep.condition1.evidence =
      rep.condition1.passed
          ? "unit is not a p-th power in Q_p(sqrt(" +
                std::to_string(w.quad_d) +
                ")); away from p no completion has p-th roots of unity"
          : "unit is a p-th power in the ramified completion Q_p(sqrt(" +
                std::to_string(w.quad_d) + "))";

  rep.neat = rep.condition1.passed && rep.condition2.passed &&
             rep.condition3.passed;
  if (rep.neat) {
    rep.degeneracy_index = w.qp_index;
    rep.generic = w.qp_index == 0;
  }
  rep.completed = true;
}

}  // namespace

ClassificationReport neatness_check(const Cubic& f, u64 p,
                                    const ClassifyParams& params) {
  ClassificationReport rep;
  run_checks(f, p, params, rep);
  return rep;
}

unsigned degeneracy_index(const Cubic& f, u64 p, const ClassifyParams& params) {
  const ClassificationReport rep = neatness_check(f, p, params);
  if (!rep.neat)
    throw hypothesis_not_met(
        "degeneracy index is defined only for neat extensions");
  return *rep.degeneracy_index;
}

ClassificationReport classify_extension(const Cubic& f, u64 p,
                                        const ClassifyParams& params) {
  ClassificationReport rep;
  try {
    run_checks(f, p, params, rep);
  } catch (const std::exception& e) {
    rep.completed = false;
    rep.neat = false;
    rep.generic = false;
    rep.degeneracy_index.reset();
    rep.failure = e.what();
  }
  return rep;
}

std::string report_to_text(const ClassificationReport& r) {
  std::ostringstream os;
  os << "classification of " << cubic_str(r.f) << " at p = " << r.p << "\n";
  if (!r.completed) {
    os << "  did not complete: " << r.failure << "\n";
    return os.str();
  }
  os << "  discriminant " << int_str(r.disc) << " (polynomial "
     << int_str(r.poly_disc) << ", index " << r.index << ")\n";
  os << "  ramified primes:";
  for (u64 q : r.ramified_primes) os << " " << q;
  os << "\n";
  for (const auto& ev : r.ramified_evidence)
    os << "    q = " << ev.q << ": e = " << ev.ramification
       << ", f = " << ev.residue_degree << ", mu_p "
       << (ev.roots_of_unity ? "present" : "absent") << " (" << ev.note
       << ")\n";
  os << "  fundamental unit: (" << int_str(r.unit_theta[0]) << " + "
     << int_str(r.unit_theta[1]) << " th + " << int_str(r.unit_theta[2])
     << " th^2)/" << int_str(r.unit_theta_den) << " [" << r.unit_note << "]\n";
  os << "  p-adic witnesses at precision " << r.precision << ":\n";
  os << "    Hensel root " << int_str(r.hensel_root) << "\n";
  os << "    unit image in Q_p: " << int_str(r.unit_image_qp) << "\n";
  os << "    unit image in Q_p(sqrt(" << r.quad_d << ")): "
     << int_str(r.unit_image_quad_a) << " + " << int_str(r.unit_image_quad_b)
     << " sqrt(d), power index " << r.ramified_power_index << "\n";
  auto cond = [&](const char* name, const ConditionVerdict& c) {
    os << "  " << name << ": " << (c.passed ? "PASS" : "FAIL") << "\n      "
       << c.evidence << "\n";
  };
  cond("condition 1 (unit local-global)", r.condition1);
  cond("condition 2 (class numbers prime to p)", r.condition2);
  cond("condition 3 (no p-th roots of unity)", r.condition3);
  os << "  neat: " << (r.neat ? "yes" : "no") << "\n";
  if (r.degeneracy_index)
    os << "  degeneracy index: " << *r.degeneracy_index << " ("
       << (r.generic ? "generic" : "not generic") << ")\n";
  else
    os << "  degeneracy index: n/a (not neat)\n";
  for (const auto& wmsg : r.warnings) os << "  warning: " << wmsg << "\n";
  return os.str();
}

std::string report_to_json(const ClassificationReport& r) {
  nlohmann::ordered_json j;
  j["polynomial"] = {{"c2", r.f.c2}, {"c1", r.f.c1}, {"c0", r.f.c0}};
  j["p"] = r.p;
  j["completed"] = r.completed;
  j["failure"] = r.failure;
  if (r.completed) {
    j["field"] = {{"poly_disc", int_str(r.poly_disc)},
                  {"disc", int_str(r.disc)},
                  {"index", r.index},
                  {"ramified_primes", r.ramified_primes}};
    auto evs = nlohmann::ordered_json::array();
    for (const auto& ev : r.ramified_evidence)
      evs.push_back({{"q", ev.q},
                     {"residue_degree", ev.residue_degree},
                     {"ramification", ev.ramification},
                     {"roots_of_unity", ev.roots_of_unity},
                     {"note", ev.note}});
    j["ramified_evidence"] = std::move(evs);
    j["witnesses"] = {
        {"precision", r.precision},
        {"hensel_root", int_str(r.hensel_root)},
        {"unit",
         {{"basis_coords",
           {int_str(r.unit_coords[0]), int_str(r.unit_coords[1]),
            int_str(r.unit_coords[2])}},
          {"theta_numerators",
           {int_str(r.unit_theta[0]), int_str(r.unit_theta[1]),
            int_str(r.unit_theta[2])}},
          {"theta_denominator", int_str(r.unit_theta_den)},
          {"certified", r.unit_certified},
          {"note", r.unit_note}}},
        {"unit_image_qp", int_str(r.unit_image_qp)},
        {"quad_d", r.quad_d},
        {"unit_image_quad",
         {{"a", int_str(r.unit_image_quad_a)},
          {"b", int_str(r.unit_image_quad_b)}}},
        {"ramified_power_index", r.ramified_power_index}};
    j["conditions"] = {
        {"units_local_global",
         {{"passed", r.condition1.passed}, {"evidence", r.condition1.evidence}}},
        {"class_number_prime_to_p",
         {{"passed", r.condition2.passed}, {"evidence", r.condition2.evidence}}},
        {"no_pth_roots_of_unity",
         {{"passed", r.condition3.passed},
          {"evidence", r.condition3.evidence}}}};
  }
  j["neat"] = r.neat;
  if (r.degeneracy_index)
    j["degeneracy_index"] = *r.degeneracy_index;
  else
    j["degeneracy_index"] = nullptr;
  j["generic"] = r.generic;
  j["warnings"] = r.warnings;
  return j.dump(2);
}

}  // namespace s3def
