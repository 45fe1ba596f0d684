#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lopc/asymptotic.hpp"
#include "lopc/catalysis.hpp"
#include "lopc/io.hpp"
#include "lopc/multipartite.hpp"
#include "lopc/synthesis.hpp"
#include "generators.hpp"
#include "oracles.hpp"

#include <filesystem>
#include <random>

using namespace lopc;

namespace {

const std::filesystem::path kFixtures = LOPC_FIXTURES;

SecrecySpectrum sp(std::string_view s) { return SecrecySpectrum::parse(s); }

}  // namespace

TEST_CASE("fixture files") {
  const auto ghz = parse_distribution(kFixtures / "cghz.json");
  CHECK(ghz == c_ghz());
  CHECK(ghz.labels_with_role(Role::honest).size() == 3);
  CHECK(ghz.entries().size() == 2);

  const auto trit = parse_distribution(kFixtures / "trit.json");
  const auto verdict = classify_pure(trit);
  REQUIRE(std::holds_alternative<PureState>(verdict));
  CHECK(std::get<PureState>(verdict).spectrum == SecrecySpectrum::uniform(3));

  try {
    parse_distribution(kFixtures / "short.json");
    FAIL("expected NormalizationError");
  } catch (const NormalizationError& e) {
    CHECK(e.deficit() == frac(1, 100));
  }

  CHECK(std::holds_alternative<Mixed>(classify_pure(parse_distribution(kFixtures / "mixed.json"))));
}

TEST_CASE("file to verdict pipeline") {
  const auto trit = parse_distribution(kFixtures / "trit.json");
  const auto leaky = verify_secrecy(execute(parse_protocol(kFixtures / "leaky.json"), trit), std::nullopt);
  CHECK(leaky.verdict == Verdict::leaky);
  CHECK(leaky.eve_information == doctest::Approx(std::log2(3.0)).epsilon(1e-12));

  // Synthesize, serialize, reload, execute, verify.
  const auto dir = std::filesystem::temp_directory_path() / "lopc_integration";
  std::filesystem::create_directories(dir);
  write_json_file(dir / "p.json", to_json(synthesize_deterministic(SecrecySpectrum::uniform(3), sp("1/2,1/2"))));
  const auto res = execute(parse_protocol(dir / "p.json"), trit);
  write_json_file(dir / "out.json", to_json(res.joint));
  CHECK(parse_distribution(dir / "out.json") == res.joint);
  CHECK(verify_secrecy(res, sp("1/2,1/2")).verdict == Verdict::secret);
  std::filesystem::remove_all(dir);
}

TEST_CASE("optimal conversion protocols achieve their bound") {
  std::mt19937 rng(99);
  for (int t = 0; t < 150; ++t) {
    const SecrecySpectrum p(gen::rational_vector(rng, 4, 8, false));
    const SecrecySpectrum q(gen::rational_vector(rng, 4, 8, false));
    const auto conv = synthesize_probabilistic(p, q);
    // The vertex-enumeration oracle is too slow beyond three symbols.
    if (p.size() <= 3 && q.size() <= 3)
      CHECK(conv.success_probability == oracle::one_round_conversion_probability(p.weights(), q.weights()));
    const auto res = execute(conv.protocol, make_pure_state(p));
    if (sgn(conv.success_probability) == 0) continue;
    const auto rep = verify_secrecy(res, q, conv.protocol.fail.has_value());
    CHECK(rep.verdict == Verdict::secret);
    CHECK(rep.branch_probability == conv.success_probability);
  }
}

TEST_CASE("catalysts let the engine run the tensor conversion") {
  const auto p = sp("2/5,2/5,1/10,1/10");
  const auto q = sp("1/2,1/4,1/4");
  const auto r = sp("3/5,2/5");
  const auto pr = tensor(p, r);
  const auto qr = tensor(q, r);
  const auto res = execute(synthesize_deterministic(pr, qr), make_pure_state(pr));
  CHECK(verify_secrecy(res, qr).verdict == Verdict::secret);
  CHECK_THROWS_AS(synthesize_deterministic(p, q), MajorizationFails);
}

TEST_CASE("block protocols through the engine") {
  const auto p = sp("2/3,1/3");
  const auto conc = execute(concentration_protocol(p, 5), block_state(p, 5));
  const auto rep = verify_secrecy(conc, std::nullopt);
  CHECK(rep.verdict == Verdict::secret);
  CHECK(concentrate_block(p, 5).expected_yield == oracle::concentration_yield_bruteforce(p.weights(), 5));

  const auto dil = execute(dilution_protocol(p, 5, 0.2), dilution_input(p, 5, 0.2));
  const auto drep = verify_secrecy(dil, dilution_target(p, 5, 0.2), true);
  CHECK(drep.verdict == Verdict::secret);
  CHECK(1 - drep.branch_probability == dilute_block(p, 5, 0.2).failure_probability);
}

TEST_CASE("multipartite conversions pass their audits") {
  const auto ghz = parse_distribution(kFixtures / "cghz.json");
  CHECK(audit_passes(entropy_audit(ghz, ghz_to_epr(ghz).joint)));
  const auto two = epr2_to_ghz(double_c_epr());
  CHECK(marginal(two.joint, {"A", "B", "C", "E"}) == ghz);
  CHECK(audit_passes(entropy_audit(double_c_epr(), two.joint)));
}
