#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lopc/engine.hpp"
#include "lopc/synthesis.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace lopc;

namespace {

SecrecySpectrum sp(std::string_view s) { return SecrecySpectrum::parse(s); }

JointDist grid_state(const std::vector<std::vector<Prob>>& grid) {
  std::map<Outcome, Prob> entries;
  for (std::size_t a = 0; a < grid.size(); ++a)
    for (std::size_t b = 0; b < grid[a].size(); ++b)
      if (sgn(grid[a][b]) > 0) entries[{static_cast<int>(a), static_cast<int>(b), 0}] = grid[a][b];
  auto ps = honest({{"A", static_cast<int>(grid.size())}, {"B", static_cast<int>(grid.front().size())}});
  ps.push_back(eve());
  return JointDist(std::move(ps), std::move(entries));
}

}  // namespace

TEST_CASE("execute: empty protocol leaves the input unchanged") {
  const auto d = make_pure_state(sp("1/2,1/3,1/6"));
  const auto res = execute(ProtocolIR{}, d);
  CHECK(marginal(res.joint, d.labels()) == d);
  CHECK(res.message_weights == std::vector<Prob>{Prob(1)});
  CHECK(res.ledger.public_bits_sent == 0.0);
}

TEST_CASE("execute preserves total probability") {
  const auto p = sp("2/5,1/5,1/5,1/5");
  const auto res = execute(synthesize_probabilistic(p, sp("1/2,1/2")).protocol, make_pure_state(p));
  Prob total = 0;
  for (const auto& [o, w] : res.joint.entries()) total += w;
  CHECK(total == 1);
  Prob messages = 0;
  for (const auto& w : res.message_weights) messages += w;
  CHECK(messages == 1);
}

TEST_CASE("procrustean fail branch reveals the value") {
  const auto p = SecrecySpectrum::uniform(3);
  const auto rep = procrustean(p, {1, 2});
  const auto res = execute(rep.protocol, make_pure_state(p));
  const auto fail = static_cast<int>(rep.protocol.fail->message);
  CHECK(res.message_weights[static_cast<std::size_t>(fail)] == frac(1, 3));
  const auto mi = res.joint.index_of(res.transcript_label);
  std::set<Outcome> outputs;
  for (const auto& [o, w] : res.joint.entries())
    if (o[mi] == fail) outputs.insert({o[0], o[1]});
  CHECK(outputs.size() == 1);
  CHECK(verify_secrecy(res, sp("1/2,1/2")).verdict == Verdict::leaky);
}

TEST_CASE("execute rejects incompatible protocols") {
  const auto d = make_pure_state(sp("1/2,1/2"));
  CHECK_THROWS_AS(execute(build_disclosure_protocol(3), d), AlphabetMismatch);
  ProtocolIR eve_speaks;
  eve_speaks.rounds.push_back({"E", MessageRule{{{Prob(1)}}}});
  CHECK_THROWS_AS(execute(eve_speaks, d), AlphabetMismatch);
  ProtocolIR bad_map;
  bad_map.outputs.push_back({"A", {{0, 1, 2}}, 0});
  CHECK_THROWS_AS(execute(bad_map, d), AlphabetMismatch);
}

TEST_CASE("verify_secrecy") {
  SUBCASE("synthesized trit to bit") {
    const auto p = SecrecySpectrum::uniform(3);
    const auto rep = verify_secrecy(execute(synthesize_deterministic(p, sp("1/2,1/2")), make_pure_state(p)), sp("1/2,1/2"));
    CHECK(rep.verdict == Verdict::secret);
    CHECK(rep.eve_information == 0.0);
    CHECK(rep.output_spectrum == sp("1/2,1/2"));
  }
  SUBCASE("full disclosure leaks H(p)") {
    const auto p = sp("1/2,1/4,1/4");
    const auto rep = verify_secrecy(execute(build_disclosure_protocol(3), make_pure_state(p)), std::nullopt);
    CHECK(rep.verdict == Verdict::leaky);
    CHECK(rep.eve_information == doctest::Approx(oracle::entropy(p.weights())).epsilon(1e-9));
    CHECK_FALSE(rep.detail.empty());
  }
  SUBCASE("procrustean conditioned on success") {
    const auto p = SecrecySpectrum::uniform(3);
    const auto rep = verify_secrecy(execute(procrustean(p, {1, 2}).protocol, make_pure_state(p)), sp("1/2,1/2"), true);
    CHECK(rep.verdict == Verdict::secret);
    CHECK(rep.branch_probability == frac(2, 3));
  }
  SUBCASE("wrong target") {
    const auto p = SecrecySpectrum::uniform(2);
    const auto rep = verify_secrecy(execute(ProtocolIR{}, make_pure_state(p)), SecrecySpectrum::uniform(3));
    CHECK(rep.verdict == Verdict::leaky);
  }
  SUBCASE("correlated but imperfect outputs") {
    const auto rep = verify_secrecy(execute(ProtocolIR{}, grid_state({{frac(1, 2), frac(1, 4)}, {Prob(0), frac(1, 4)}})),
                                    std::nullopt);
    CHECK(rep.verdict == Verdict::leaky);
    CHECK(rep.eve_information == 0.0);
  }
}

TEST_CASE("one-time pad") {
  SUBCASE("perfect key, uniform message") {
    const auto msg = SecrecySpectrum::uniform(2);
    const auto res = execute(build_otp_protocol(msg), otp_state(msg, SecrecySpectrum::uniform(2)));
    const auto rep = verify_secrecy(res, std::nullopt);
    CHECK(rep.verdict == Verdict::secret);
    CHECK(rep.eve_information == 0.0);
    CHECK(marginal(res.joint, {res.transcript_label}).probability({0}) == frac(1, 2));
    CHECK(res.ledger.shared_secret_bits_consumed == doctest::Approx(1.0));
    CHECK(res.ledger.public_bits_sent == doctest::Approx(1.0));
    CHECK(res.ledger.secret_bits_delivered == doctest::Approx(1.0));
    for (const auto& [o, w] : res.joint.entries()) CHECK(o[0] == o[1]);
  }
  SUBCASE("perfect key hides any message distribution") {
    for (const char* m : {"3/4,1/4", "2/3,1/3", "1"}) {
      const auto msg = sp(m);
      const auto res = execute(build_otp_protocol(msg.size(), 2), otp_state(msg, SecrecySpectrum::uniform(2)));
      const auto t = marginal(res.joint, {res.transcript_label});
      CHECK(t.probability({0}) == frac(1, 2));
      CHECK(t.probability({1}) == frac(1, 2));
      CHECK(verify_secrecy(res, std::nullopt).eve_information == 0.0);
    }
  }
  SUBCASE("biased key leaks 1 - H2(3/5)") {
    const auto key = sp("3/5,2/5");
    const auto msg = SecrecySpectrum::uniform(2);
    const auto rep = verify_secrecy(execute(build_otp_protocol(2, 2), otp_state(msg, key)), std::nullopt);
    CHECK(rep.verdict == Verdict::leaky);
    const double expected = oracle::otp_leak(msg.weights(), key.weights());
    CHECK(expected == doctest::Approx(1.0 - oracle::binary_entropy(0.6)).epsilon(1e-12));
    CHECK(std::fabs(rep.eve_information - expected) < 1e-9);
    CHECK(rep.eve_information == doctest::Approx(0.029).epsilon(0.01));
  }
  SUBCASE("key reuse leaks the xor") {
    const auto msg = SecrecySpectrum::uniform(2);
    const auto res = execute(build_otp_protocol(2, 2, 2), otp_state(msg, SecrecySpectrum::uniform(2), 2));
    const auto rep = verify_secrecy(res, std::nullopt);
    CHECK(rep.verdict == Verdict::leaky);
    CHECK(std::fabs(rep.eve_information - 1.0) < 1e-12);
    // Eve's transcript (c1, c2) determines s1 xor s2.
    const auto mi = res.joint.index_of(res.transcript_label);
    for (const auto& [o, w] : res.joint.entries()) {
      const auto c = res.joint.parties()[mi].alphabet == 4 ? o[mi] : -1;
      REQUIRE(c >= 0);
      const int s1 = o[0] / 2, s2 = o[0] % 2;
      CHECK(((c / 2) ^ (c % 2)) == (s1 ^ s2));
    }
  }
  SUBCASE("key must cover the message alphabet") {
    CHECK_THROWS_AS(build_otp_protocol(SecrecySpectrum::uniform(3)), KeyTooSmall);
    CHECK_NOTHROW(build_otp_protocol(3, 3));
  }
}

TEST_CASE("ledger: delivered never exceeds consumed on SECRET runs") {
  for (const char* from : {"1/3,1/3,1/3", "1/2,1/4,1/4", "2/5,2/5,1/5", "1/2,1/2"}) {
    const auto p = sp(from);
    for (const char* to : {"1/2,1/2", "1", "2/3,1/3"}) {
      const auto q = sp(to);
      if (!majorizes(q, p)) continue;
      const auto res = execute(synthesize_deterministic(p, q), make_pure_state(p));
      REQUIRE(verify_secrecy(res, q).verdict == Verdict::secret);
      CHECK(res.ledger.secret_bits_delivered <= res.ledger.shared_secret_bits_consumed + 1e-9);
    }
  }
}

TEST_CASE("single-copy purity search") {
  SUBCASE("three positive entries") {
    const auto d = grid_state({{frac(1, 3), frac(1, 3)}, {frac(1, 3), Prob(0)}});
    CHECK_FALSE(pure_reachable_single_copy(d));
  }
  SUBCASE("already pure") {
    const auto d = grid_state({{frac(1, 2), Prob(0)}, {Prob(0), frac(1, 2)}});
    const auto w = single_copy_pure_search(d);
    CHECK(w.reachable);
    CHECK(w.alice.size() == 2);
  }
  SUBCASE("3x3 full support") {
    std::vector<std::vector<Prob>> g(3, std::vector<Prob>(3, frac(1, 9)));
    CHECK_FALSE(pure_reachable_single_copy(grid_state(g)));
  }
  SUBCASE("a filter can cut a pure block out") {
    const auto d = grid_state({{frac(1, 4), frac(1, 4), Prob(0)},
                               {Prob(0), frac(1, 4), Prob(0)},
                               {Prob(0), Prob(0), frac(1, 4)}});
    const auto w = single_copy_pure_search(d);
    CHECK(w.reachable);
  }
  SUBCASE("mixed input") {
    auto ps = honest({{"A", 2}, {"B", 2}});
    ps.push_back(eve(2));
    const JointDist d(ps, {{{0, 0, 0}, frac(1, 2)}, {{1, 1, 1}, frac(1, 2)}});
    CHECK_THROWS_AS(pure_reachable_single_copy(d), NotBlockPure);
  }
  SUBCASE("parallel and serial searches agree with the oracle") {
    std::mt19937 rng(41);
    for (int t = 0; t < 120; ++t) {
      const std::size_t na = 2 + rng() % 2, nb = 2 + rng() % 2;
      std::vector<std::vector<Prob>> g(na, std::vector<Prob>(nb, Prob(0)));
      long total = 0;
      std::vector<std::vector<long>> raw(na, std::vector<long>(nb, 0));
      for (auto& row : raw)
        for (auto& v : row) {
          v = (rng() % 3 == 0) ? 0 : 1 + static_cast<long>(rng() % 3);
          total += v;
        }
      if (total == 0) continue;
      for (std::size_t a = 0; a < na; ++a)
        for (std::size_t b = 0; b < nb; ++b) g[a][b] = frac(raw[a][b], total);
      const auto d = grid_state(g);
      const auto par = single_copy_pure_search(d);
      const auto ser = serial::single_copy_pure_search(d);
      CHECK(par.reachable == ser.reachable);
      CHECK(par.alice == ser.alice);
      CHECK(par.bob == ser.bob);
      CHECK(par.reachable == oracle::single_copy_pure_reachable(g));
    }
  }
}
