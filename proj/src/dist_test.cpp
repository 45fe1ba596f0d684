#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lopc/dist.hpp"
#include "oracles.hpp"

#include <random>

using namespace lopc;

namespace {

JointDist with_eve(std::vector<Party> ps, std::map<Outcome, Prob> entries) {
  ps.push_back(eve());
  return JointDist(std::move(ps), std::move(entries));
}

JointDist ghz() {
  return with_eve(honest({{"A", 2}, {"B", 2}, {"C", 2}}),
                  {{{0, 0, 0, 0}, frac(1, 2)}, {{1, 1, 1, 0}, frac(1, 2)}});
}

JointDist shared_bit_copied_to_eve() {
  auto ps = honest({{"A", 2}, {"B", 2}});
  ps.push_back(eve(2));
  return JointDist(ps, {{{0, 0, 0}, frac(1, 2)}, {{1, 1, 1}, frac(1, 2)}});
}

}  // namespace

TEST_CASE("JointDist enforces normalization and arity") {
  auto ps = honest({{"A", 2}});
  CHECK_THROWS_AS(JointDist(ps, {{{0}, frac(99, 100)}}), NormalizationError);
  try {
    JointDist(ps, {{{0}, frac(99, 100)}});
  } catch (const NormalizationError& e) {
    CHECK(e.deficit() == frac(1, 100));
  }
  CHECK_THROWS_AS(JointDist(ps, {{{0, 1}, Prob(1)}}), DistError);
  CHECK_THROWS_AS(JointDist(ps, {{{2}, Prob(1)}}), DistError);
  CHECK_THROWS_AS(JointDist(honest({{"A", 2}, {"A", 2}}), {{{0, 0}, Prob(1)}}), DistError);
  const JointDist d(ps, {{{0}, frac(1, 2)}, {{1}, frac(1, 2)}, {{1}, frac(1, 2)}});
  CHECK(d.entries().size() == 2);
}

TEST_CASE("zero entries are dropped") {
  const JointDist d(honest({{"A", 3}}), {{{0}, Prob(1)}, {{1}, Prob(0)}});
  CHECK(d.entries().size() == 1);
}

TEST_CASE("marginal") {
  SUBCASE("C-GHZ onto A,B is a shared secret bit") {
    const auto ab = marginal(ghz(), {"A", "B"});
    CHECK(ab.parties().size() == 2);
    CHECK(ab.probability({0, 0}) == frac(1, 2));
    CHECK(ab.probability({1, 1}) == frac(1, 2));
    CHECK(ab.entries().size() == 2);
  }
  SUBCASE("onto all parties is the identity") {
    const auto d = ghz();
    CHECK(marginal(d, d.labels()) == d);
  }
  SUBCASE("factor recovery") {
    auto ps = honest({{"A", 2}});
    ps.push_back(eve(2));
    const JointDist d(ps, {{{0, 0}, frac(1, 6)}, {{0, 1}, frac(1, 6)}, {{1, 0}, frac(1, 3)}, {{1, 1}, frac(1, 3)}});
    const auto a = marginal(d, {"A"});
    CHECK(a.probability({0}) == frac(1, 3));
    CHECK(a.probability({1}) == frac(2, 3));
  }
  SUBCASE("unknown party") { CHECK_THROWS_AS(marginal(ghz(), {"Z"}), DistError); }
}

TEST_CASE("is_product") {
  CHECK(is_product(make_pure_state(SecrecySpectrum::parse("1/2,1/4,1/4")), {"A", "B"}, {"E"}));
  CHECK_FALSE(is_product(shared_bit_copied_to_eve(), {"A", "B"}, {"E"}));
  const JointDist indep(honest({{"A", 2}, {"B", 2}}), {{{0, 0}, frac(1, 4)}, {{0, 1}, frac(1, 4)},
                                                       {{1, 0}, frac(1, 4)}, {{1, 1}, frac(1, 4)}});
  CHECK(is_product(indep, {"A"}, {"B"}));
  CHECK_THROWS_AS(is_product(indep, {"A"}, {"A", "B"}), DistError);
  CHECK_THROWS_AS(is_product(indep, {"A"}, {}), DistError);
}

TEST_CASE("classify_pure") {
  SUBCASE("trit on the diagonal") {
    const auto v = classify_pure(with_eve(honest({{"A", 3}, {"B", 3}}), {{{0, 0, 0}, frac(1, 3)},
                                                                          {{1, 1, 0}, frac(1, 3)},
                                                                          {{2, 2, 0}, frac(1, 3)}}));
    REQUIRE(std::holds_alternative<PureState>(v));
    CHECK(std::get<PureState>(v).spectrum == SecrecySpectrum::uniform(3));
  }
  SUBCASE("anti-diagonal bit is pure after relabeling Bob") {
    const auto d = with_eve(honest({{"A", 2}, {"B", 2}}), {{{0, 1, 0}, frac(1, 2)}, {{1, 0, 0}, frac(1, 2)}});
    const auto v = classify_pure(d);
    REQUIRE(std::holds_alternative<PureState>(v));
    const auto& s = std::get<PureState>(v);
    CHECK(s.spectrum == SecrecySpectrum::uniform(2));
    const auto r = relabel(d, {{"A", s.alice_map}, {"B", s.bob_map}});
    for (const auto& [o, p] : r.entries()) CHECK(o[0] == o[1]);
  }
  SUBCASE("block pure") {
    const auto v = classify_pure(with_eve(honest({{"A", 2}, {"B", 2}}), {{{0, 0, 0}, frac(1, 2)},
                                                                          {{0, 1, 0}, frac(1, 4)},
                                                                          {{1, 1, 0}, frac(1, 4)}}));
    CHECK(std::holds_alternative<BlockPure>(v));
  }
  SUBCASE("Eve correlated") { CHECK(std::holds_alternative<Mixed>(classify_pure(shared_bit_copied_to_eve()))); }
  SUBCASE("more than two honest parties") { CHECK_THROWS_AS(classify_pure(ghz()), DistError); }
  SUBCASE("unused symbols are ignored and ties keep symbol order") {
    const auto d = with_eve(honest({{"A", 4}, {"B", 3}}), {{{3, 0, 0}, frac(1, 4)},
                                                            {{1, 2, 0}, frac(1, 2)},
                                                            {{0, 1, 0}, frac(1, 4)}});
    const auto v = classify_pure(d);
    REQUIRE(std::holds_alternative<PureState>(v));
    const auto& s = std::get<PureState>(v);
    CHECK(s.spectrum == SecrecySpectrum::parse("1/2,1/4,1/4"));
    CHECK(s.alice_map == std::vector<int>{1, 0, -1, 2});
    CHECK(s.bob_map == std::vector<int>{2, 1, 0});
  }
}

TEST_CASE("entropy_of_secrecy") {
  CHECK(entropy_of_secrecy(SecrecySpectrum::uniform(2)) == 1.0);
  CHECK(entropy_of_secrecy(SecrecySpectrum()) == 0.0);
  const auto s = SecrecySpectrum::parse("1/2,1/4,1/4");
  CHECK(entropy_of_secrecy(s) == doctest::Approx(oracle::entropy({frac(1, 2), frac(1, 4), frac(1, 4)})));
  CHECK(entropy_of_secrecy(s) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("mutual_information") {
  const auto bit = make_pure_state(SecrecySpectrum::uniform(2));
  CHECK(mutual_information(bit, "A", "B") == doctest::Approx(1.0).epsilon(1e-12));
  const JointDist indep(honest({{"A", 2}, {"B", 2}}), {{{0, 0}, frac(1, 4)}, {{0, 1}, frac(1, 4)},
                                                       {{1, 0}, frac(1, 4)}, {{1, 1}, frac(1, 4)}});
  CHECK(mutual_information(indep, "A", "B") == doctest::Approx(0.0));
  CHECK(mutual_information(shared_bit_copied_to_eve(), "A", "B", std::string("E")) == doctest::Approx(0.0));
  CHECK_THROWS_AS(mutual_information(bit, "A", "Z"), DistError);
  CHECK_THROWS_AS(mutual_information(bit, "A", "A"), DistError);
}

TEST_CASE("SecrecySpectrum sorts, drops zeros and validates") {
  const SecrecySpectrum s(std::vector<Prob>{frac(1, 4), Prob(0), frac(3, 4)});
  CHECK(s.size() == 2);
  CHECK(s[0] == frac(3, 4));
  CHECK(s.to_string() == "(3/4,1/4)");
  CHECK_THROWS_AS(SecrecySpectrum::parse("1/2,1/4"), NormalizationError);
  CHECK_THROWS_AS(SecrecySpectrum::parse("3/2,-1/2"), DistError);
}

TEST_CASE("random distributions: marginal composition, purity invariants") {
  std::mt19937 rng(20240611);
  for (int trial = 0; trial < 60; ++trial) {
    const int na = 1 + static_cast<int>(rng() % 3);
    const int nb = 1 + static_cast<int>(rng() % 3);
    const int ne = 1 + static_cast<int>(rng() % 2);
    std::map<Outcome, long> raw;
    long total = 0;
    const int cells = 1 + static_cast<int>(rng() % 6);
    for (int c = 0; c < cells; ++c) {
      const long w = 1 + static_cast<long>(rng() % 5);
      raw[{static_cast<int>(rng() % na), static_cast<int>(rng() % nb), static_cast<int>(rng() % ne)}] += w;
      total += w;
    }
    std::map<Outcome, Prob> entries;
    for (const auto& [o, w] : raw) entries[o] = frac(w, total);
    auto ps = honest({{"A", na}, {"B", nb}});
    ps.push_back(eve(ne));
    const JointDist d(ps, entries);

    CHECK(marginal(marginal(d, {"A", "B"}), {"B"}) == marginal(d, {"B"}));
    CHECK(marginal(marginal(d, {"A", "E"}), {"A"}) == marginal(d, {"A"}));
    const auto v = classify_pure(d);
    if (const auto* s = std::get_if<PureState>(&v)) {
      CHECK(is_product(d, {"A", "B"}, {"E"}));
      CHECK(entropy_of_secrecy(s->spectrum) == doctest::Approx(mutual_information(d, "A", "B")).epsilon(1e-9));
      const auto r = relabel(marginal(d, {"A", "B"}), {{"A", s->alice_map}, {"B", s->bob_map}});
      for (const auto& [o, p] : r.entries()) CHECK(o[0] == o[1]);
    }
  }
}
