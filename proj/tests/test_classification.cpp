#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include "s3def/classification.hpp"
#include "s3def/errors.hpp"
#include "s3def/number_field.hpp"

using namespace s3def;

namespace {
Vec3 v3(i128 a, i128 b, i128 c) { return Vec3{a, b, c}; }
bool has_warning(const ClassificationReport& r, const std::string& needle) {
  for (const auto& w : r.warnings)
    if (w.find(needle) != std::string::npos) return true;
  return false;
}
}  // namespace

TEST_CASE("flagship field is neat with degeneracy index one") {
  ClassificationReport r = classify_extension({0, 7, -12}, 5);
  REQUIRE(r.completed);
  CHECK(r.poly_disc == -5260);
  CHECK(r.disc == -1315);
  CHECK(r.index == 2);
  REQUIRE(r.ramified_primes == std::vector<u64>{5, 263});

  REQUIRE(r.ramified_evidence.size() == 2);
  for (const auto& ev : r.ramified_evidence) {
    CHECK(ev.ramification == 2);
    CHECK(ev.residue_degree == 1);
    CHECK_FALSE(ev.roots_of_unity);
  }

  CHECK(r.condition1.passed);
  CHECK(r.condition2.passed);
  CHECK(r.condition3.passed);
  CHECK(r.condition2.evidence.find("h_k = 6") != std::string::npos);
  CHECK(r.neat);
  REQUIRE(r.degeneracy_index.has_value());
  CHECK(*r.degeneracy_index == 1);
  CHECK_FALSE(r.generic);

  // 5-adic witnesses at the default precision 6.
  CHECK(r.precision == 6);
  CHECK(r.hensel_root == 7562);
  CHECK(r.hensel_root % 125 == 62);
  CHECK(r.unit_image_qp == 15399);
  CHECK(r.unit_image_qp % 25 == 24);   // = -1 mod 25: a 5th power
  CHECK(r.unit_image_qp % 125 != 124); // but not a 25th power
  CHECK(r.quad_d == 10);
  CHECK(r.ramified_power_index == 0);
  CHECK(r.unit_certified);
  CHECK(r.unit_theta_den == 2);
  CHECK(r.unit_theta == v3(3466, 532, 392));

  // The reported unit is (14 th - 19)^{+-1} up to sign: multiplying by
  // 14 th - 19 must give +-1.
  CubicField K = make_cubic_field({0, 7, -12});
  Vec3 prod = mul_elements(K, r.unit_coords, v3(-19, 28, -14));
  bool pm1 = prod == v3(1, 0, 0) || prod == v3(-1, 0, 0);
  CHECK(pm1);

  CHECK(r.warnings.size() == 1);
  CHECK(has_warning(r, "subfield units"));
}

TEST_CASE("verdicts are invariant under integral shifts of the root") {
  // x -> x + 1 and x -> x - 2 applied to x^3 + 7x - 12.
  ClassificationReport up = classify_extension({3, 10, -4}, 5);
  ClassificationReport down = classify_extension({-6, 19, -34}, 5);
  for (const ClassificationReport* r : {&up, &down}) {
    REQUIRE(r->completed);
    CHECK(r->disc == -1315);
    CHECK(r->index == 2);
    CHECK(r->neat);
    CHECK(*r->degeneracy_index == 1);
    CHECK(r->quad_d == 10);
    CHECK(r->unit_image_qp % 25 == 24);
  }
  // theta shifts opposite to x, so the lifted root tracks 62 mod 125.
  CHECK(up.hensel_root % 125 == 61);
  CHECK(down.hensel_root % 125 == 64);
}

TEST_CASE("prime family members classify as generic") {
  const std::pair<i64, u64> members[] = {{-1, 23},  {1, 31},    {2, 59},
                                         {4, 283},  {7, 1399},  {10, 4027},
                                         {11, 5351}};
  for (const auto& [a, p] : members) {
    CAPTURE(a);
    ClassificationReport r = classify_extension({0, a, 1}, p);
    REQUIRE(r.completed);
    CHECK(r.disc == -static_cast<i128>(p));
    CHECK(r.ramified_primes == std::vector<u64>{p});
    CHECK(r.neat);
    CHECK(r.generic);
    CHECK(*r.degeneracy_index == 0);
    CHECK(r.ramified_power_index == 0);
    // disc = -p keeps the Minkowski bound tiny: the ideal-count fast path
    // settles condition 2 without relation harvesting.
    CHECK(r.condition2.evidence.find("ideals of norm") != std::string::npos);
  }
}

TEST_CASE("structural obstructions become structured failures") {
  // p with the wrong splitting pattern in K.
  ClassificationReport r = classify_extension({0, -1, 1}, 5);
  CHECK_FALSE(r.completed);
  CHECK_FALSE(r.neat);
  CHECK_FALSE(r.degeneracy_index.has_value());
  CHECK(r.failure.find("(1,2)(1,1)") != std::string::npos);

  CHECK_FALSE(classify_extension({0, 7, -12}, 4).completed);
  CHECK_FALSE(classify_extension({0, 7, -12}, 3).completed);
  CHECK_FALSE(classify_extension({0, -1, 0}, 5).completed);   // reducible
  CHECK_FALSE(classify_extension({0, -3, -1}, 5).completed);  // disc 81: C3
  CHECK_FALSE(classify_extension({0, -4, 1}, 5).completed);   // disc 229 > 0

  // The throwing entry point surfaces the precise error type.
  CHECK_THROWS_AS(neatness_check({0, -1, 1}, 5), wrong_splitting_type);
  CHECK_THROWS_AS(neatness_check({0, 7, -12}, 4), small_prime);
  CHECK_THROWS_AS(neatness_check({0, -1, 0}, 5), reducible);
  CHECK_THROWS_AS(neatness_check({0, -3, -1}, 5), square_discriminant);
  CHECK_THROWS_AS(neatness_check({0, -4, 1}, 5), not_totally_complex);
}

TEST_CASE("each neatness condition fails on its witness field") {
  // Unit becomes a 5th power in the ramified completion (disc -11340).
  ClassificationReport c1 = classify_extension({-3, -9, -15}, 5);
  REQUIRE(c1.completed);
  CHECK(c1.disc == -11340);
  CHECK_FALSE(c1.condition1.passed);
  CHECK(c1.ramified_power_index == 1);
  CHECK(c1.condition2.passed);
  CHECK(c1.condition3.passed);
  CHECK_FALSE(c1.neat);
  CHECK_FALSE(c1.degeneracy_index.has_value());

  // Its ramified primes run through every inertia shape but the wild one.
  REQUIRE(c1.ramified_evidence.size() == 4);
  const RamifiedPrimeEvidence* at[8] = {};
  for (const auto& ev : c1.ramified_evidence) at[ev.q] = &ev;
  REQUIRE((at[2] && at[3] && at[5] && at[7]));
  CHECK(at[2]->ramification == 3);
  CHECK(at[2]->residue_degree == 2);  // resolvent quadratic inert at 2
  CHECK(at[3]->ramification == 3);
  CHECK(at[3]->residue_degree == 1);  // resolvent quadratic split at 3
  CHECK(at[5]->ramification == 2);
  CHECK(at[7]->ramification == 2);

  // 5 divides h_k = 60 (disc -2855).
  ClassificationReport c2 = classify_extension({-4, -5, -5}, 5);
  REQUIRE(c2.completed);
  CHECK_FALSE(c2.condition2.passed);
  CHECK(c2.condition2.evidence.find("h_k = 60") != std::string::npos);
  CHECK(c2.condition2.evidence.find("p divides h_k") != std::string::npos);
  CHECK_FALSE(c2.neat);

  // Relation harvesting only bounds h_K; a divisible bound fails with a
  // warning instead of a verdict on the exact class number.
  ClassificationReport c2b = classify_extension({-4, -5, -12}, 5);
  REQUIRE(c2b.completed);
  CHECK_FALSE(c2b.condition2.passed);
  CHECK(c2b.condition2.evidence.find("multiple") != std::string::npos);
  CHECK(has_warning(c2b, "multiple of h_K"));

  // Ramified q = 11 = 1 mod 5 puts mu_5 into the completion (disc -7535).
  ClassificationReport c3 = classify_extension({-4, -11, -11}, 5);
  REQUIRE(c3.completed);
  CHECK_FALSE(c3.condition3.passed);
  CHECK(c3.condition3.evidence.find("q = 11") != std::string::npos);
  for (const auto& ev : c3.ramified_evidence)
    if (ev.q == 11) CHECK(ev.roots_of_unity);
  CHECK_FALSE(c3.neat);

  // Same failure through a totally ramified prime: q = 31, C3 inertia with
  // the resolvent split, so the residue field keeps size 31 = 1 mod 5.
  ClassificationReport c3b = classify_extension({-4, -5, -15}, 5);
  REQUIRE(c3b.completed);
  CHECK_FALSE(c3b.condition3.passed);
  for (const auto& ev : c3b.ramified_evidence)
    if (ev.q == 31) {
      CHECK(ev.ramification == 3);
      CHECK(ev.residue_degree == 1);
      CHECK(ev.roots_of_unity);
    }
}

TEST_CASE("wild ramification at 3 is recognized as S3 inertia") {
  ClassificationReport r = classify_extension({-3, -9, -18}, 5);
  REQUIRE(r.completed);
  CHECK(r.disc == -1755);
  bool found = false;
  for (const auto& ev : r.ramified_evidence)
    if (ev.q == 3) {
      found = true;
      CHECK(ev.ramification == 6);
      CHECK(ev.residue_degree == 1);
      CHECK_FALSE(ev.roots_of_unity);
      CHECK(ev.note.find("wild") != std::string::npos);
    }
  CHECK(found);
  CHECK(r.neat);
}

TEST_CASE("degeneracy index entry point mirrors the report") {
  CHECK(degeneracy_index({0, 7, -12}, 5) == 1);
  CHECK(degeneracy_index({0, 1, 1}, 31) == 0);
  CHECK_THROWS_AS(degeneracy_index({-3, -9, -15}, 5), hypothesis_not_met);
  CHECK_THROWS_AS(degeneracy_index({0, -1, 1}, 5), wrong_splitting_type);
}

TEST_CASE("verdicts are stable under precision and probe-depth changes") {
  ClassificationReport base = classify_extension({0, 7, -12}, 5);

  ClassifyParams deep;
  deep.precision = 12;
  ClassificationReport hi = classify_extension({0, 7, -12}, 5, deep);
  CHECK(hi.precision == 12);
  CHECK(hi.neat);
  CHECK(*hi.degeneracy_index == 1);
  CHECK(hi.hensel_root % 15625 == base.hensel_root);
  CHECK(hi.unit_image_qp % 15625 == base.unit_image_qp);

  ClassifyParams wide;
  wide.max_index = 6;
  ClassificationReport far = classify_extension({0, 7, -12}, 5, wide);
  CHECK(*far.degeneracy_index == 1);
}

TEST_CASE("text and json reports expose the same facts") {
  ClassificationReport r = classify_extension({0, 7, -12}, 5);

  std::string text = report_to_text(r);
  CHECK(text.find("neat: yes") != std::string::npos);
  CHECK(text.find("degeneracy index: 1") != std::string::npos);
  CHECK(text.find("Hensel root 7562") != std::string::npos);
  CHECK(text.find("sqrt(10)") != std::string::npos);
  CHECK(text.find("FAIL") == std::string::npos);

  nlohmann::json j = nlohmann::json::parse(report_to_json(r));
  CHECK(j["completed"] == true);
  CHECK(j["neat"] == true);
  CHECK(j["generic"] == false);
  CHECK(j["degeneracy_index"] == 1);
  CHECK(j["p"] == 5);
  CHECK(j["polynomial"]["c1"] == 7);
  CHECK(j["field"]["disc"] == "-1315");
  CHECK(j["field"]["index"] == 2);
  CHECK(j["field"]["ramified_primes"] == nlohmann::json({5, 263}));
  CHECK(j["witnesses"]["hensel_root"] == "7562");
  CHECK(j["witnesses"]["unit"]["certified"] == true);
  CHECK(j["witnesses"]["unit"]["theta_denominator"] == "2");
  CHECK(j["witnesses"]["quad_d"] == 10);
  CHECK(j["witnesses"]["ramified_power_index"] == 0);
  CHECK(j["conditions"]["units_local_global"]["passed"] == true);
  CHECK(j["conditions"]["class_number_prime_to_p"]["passed"] == true);
  CHECK(j["conditions"]["no_pth_roots_of_unity"]["passed"] == true);
  CHECK(j["ramified_evidence"].size() == 2);
  CHECK(j["warnings"].size() == 1);

  // Structured failure: same schema, null degeneracy index, no witnesses.
  ClassificationReport bad = classify_extension({0, -1, 1}, 5);
  std::string bad_text = report_to_text(bad);
  CHECK(bad_text.find("did not complete") != std::string::npos);
  nlohmann::json jb = nlohmann::json::parse(report_to_json(bad));
  CHECK(jb["completed"] == false);
  CHECK(jb["neat"] == false);
  CHECK(jb["degeneracy_index"].is_null());
  CHECK(jb["failure"].get<std::string>().find("(1,2)(1,1)") !=
        std::string::npos);
  CHECK_FALSE(jb.contains("witnesses"));
}
