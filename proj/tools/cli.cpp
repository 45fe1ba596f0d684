#include "cli.hpp"

#include "lopc/asymptotic.hpp"
#include "lopc/catalysis.hpp"
#include "lopc/engine.hpp"
#include "lopc/multipartite.hpp"
#include "lopc/synthesis.hpp"

#include <CLI11.hpp>

#include <functional>
#include <random>
#include <sstream>

namespace lopc::cli {

namespace {

struct Outcome {
  Json report;
  int code = kSuccess;
};

Json rationals(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

Json spectrum_json(const SecrecySpectrum& s) { return rationals(s.weights()); }

Json ledger_json(const ResourceLedger& l) {
  return {{"shared_secret_bits_consumed", l.shared_secret_bits_consumed},
          {"public_bits_sent", l.public_bits_sent},
          {"secret_bits_delivered", l.secret_bits_delivered}};
}

Json secrecy_json(const SecrecyReport& r) {
  Json j = {{"verdict", std::string(to_string(r.verdict))},
            {"eve_information_bits", r.eve_information},
            {"output_spectrum", r.output_spectrum ? spectrum_json(*r.output_spectrum) : Json(nullptr)},
            {"ledger", ledger_json(r.ledger)},
            {"detail", r.detail}};
  if (r.branch_probability != 1) j["branch_probability"] = to_string(r.branch_probability);
  return j;
}

Json block_json(const BlockReport& r) {
  return {{"N", r.N},
          {"expected_yield_bits", r.expected_yield_bits},
          {"expected_yield_exact", to_string(r.expected_yield)},
          {"rate", r.rate},
          {"target_entropy", r.target_entropy}};
}

Json prefix_json(const PrefixComparison& c) { return {{"target", rationals(c.lhs)}, {"source", rationals(c.rhs)}}; }

Json catalysis_json(const CatalysisVerdict& v) {
  Json j = {{"verdict", std::string(verdict_name(v))}};
  if (const auto* ok = std::get_if<CatalyzedPossible>(&v)) {
    j["catalyst"] = spectrum_json(ok->catalyst);
    j["tight_prefixes"] = ok->tight_prefixes;
    j["prefix_sums"] = prefix_json(ok->prefixes);
  } else if (const auto* bad = std::get_if<NotWithThisCatalyst>(&v)) {
    j["violated_prefix"] = bad->violated_prefix;
  } else if (const auto* none = std::get_if<NoneFoundWithinBounds>(&v)) {
    j["max_dim"] = none->max_dim;
    j["denom_bound"] = none->denom_bound;
    j["candidates_checked"] = none->candidates_checked;
  }
  return j;
}

std::string equation_text(const RateSystem& sys, const RateEquation& eq) {
  std::string lhs;
  for (std::size_t k = 0; k < eq.coefficients.size(); ++k) {
    if (sgn(eq.coefficients[k]) == 0) continue;
    if (!lhs.empty()) lhs += " + ";
    if (eq.coefficients[k] != 1) lhs += to_string(eq.coefficients[k]) + " ";
    lhs += sys.pair_name(k);
  }
  return lhs + " = " + to_string(eq.rhs);
}

Json rate_json(const RateSystem& sys, const RateVerdict& v) {
  Json eqs = Json::array();
  for (const auto& eq : sys.equations) eqs.push_back({{"cut", eq.cut.to_string()}, {"equation", equation_text(sys, eq)}});
  Json j = {{"parties", sys.parties}, {"equations", eqs}, {"verdict", std::string(verdict_name(v))}};
  auto named = [&](const std::vector<Rational>& x) {
    Json r = Json::object();
    for (std::size_t k = 0; k < x.size(); ++k) r[sys.pair_name(k)] = to_string(x[k]);
    return r;
  };
  if (const auto* ok = std::get_if<Feasible>(&v)) j["rates"] = named(ok->rates);
  if (const auto* u = std::get_if<Undetermined>(&v)) j["particular_solution"] = named(u->particular);
  if (const auto* bad = std::get_if<Infeasible>(&v)) {
    if (bad->negative_rate) {
      j["negative_rate"] = sys.pair_name(*bad->negative_rate);
    } else {
      j["certificate"] = {{"multipliers", rationals(bad->multipliers)},
                          {"positive_equations", bad->positive_equations},
                          {"negative_equations", bad->negative_equations},
                          {"positive_sum", to_string(bad->positive_sum)},
                          {"negative_sum", to_string(bad->negative_sum)}};
    }
  }
  return j;
}

Json pure_json(const PureVerdict& v) {
  Json j = {{"verdict", std::string(verdict_name(v))}};
  if (const auto* p = std::get_if<PureState>(&v)) {
    j["spectrum"] = spectrum_json(p->spectrum);
    j["entropy_of_secrecy"] = entropy_of_secrecy(p->spectrum);
    j["alice_map"] = p->alice_map;
    j["bob_map"] = p->bob_map;
  }
  return j;
}

SecrecySpectrum spectrum_arg(const std::string& text) { return SecrecySpectrum::parse(text); }

ProbVector vector_arg(const std::string& text) { return ProbVector(parse_rational_list(text)); }

// Executes on the canonical pure state and verifies against `target`.
SecrecyReport verify_on_pure(const ProtocolIR& p, const SecrecySpectrum& from,
                             const SecrecySpectrum& target, bool conditioned) {
  return verify_secrecy(execute(p, make_pure_state(from)), target, conditioned);
}

std::vector<std::size_t> size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    long v = -1;
    try {
      v = std::stol(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size() || v <= 0) throw ParseError("expected a positive integer list, got '" + text + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw ParseError("empty block length list");
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args = args_in;
  if (args.size() >= 2 && args[0] == "multi" && args[1] == "audit") {
    args.erase(args.begin());
    args[0] = "multi-audit";
  }

  CLI::App app{"Exact calculus of classical secret correlations under local operations and public communication",
               "lopc"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false;
  app.add_flag("--json", json, "Emit the report as JSON");

  std::function<Outcome()> action;
  auto command = [&](const char* name, const char* help) { return app.add_subcommand(name, help); };

  std::string dist_path, protocol_path, from, to, catalyst, spectrum, target, keep, out_path, ns;

  auto* info = command("info", "Summarize a distribution file");
  info->add_option("--dist", dist_path, "Distribution JSON file")->required();
  info->add_option("--out", out_path, "Write the parsed distribution back out");
  info->callback([&] {
    action = [&] {
      const auto d = parse_distribution(dist_path);
      if (!out_path.empty()) write_json_file(out_path, to_json(d));
      Json parties = Json::array();
      for (const auto& p : d.parties())
        parties.push_back({{"label", p.label()},
                           {"role", std::string(to_string(p.id.role))},
                           {"alphabet", p.alphabet},
                           {"entropy_bits", entropy(d, {p.label()})}});
      Json r = {{"parties", parties}, {"entries", d.entries().size()}};
      const auto h = d.labels_with_role(Role::honest);
      if (h.size() == 2) {
        r["mutual_information_bits"] = mutual_information(d, h[0], h[1]);
        r["classification"] = pure_json(classify_pure(d));
      }
      return Outcome{r};
    };
  });

  auto* pure = command("pure-check", "Classify a two-party distribution as pure, block-pure or mixed");
  pure->add_option("--dist", dist_path, "Distribution JSON file")->required();
  pure->callback([&] {
    action = [&] {
      const auto v = classify_pure(parse_distribution(dist_path));
      return Outcome{pure_json(v), std::holds_alternative<PureState>(v) ? kSuccess : kNegative};
    };
  });

  auto* maj = command("majorize", "Check whether --to majorizes --from");
  maj->add_option("--from", from, "Source spectrum, e.g. 1/3,1/3,1/3")->required();
  maj->add_option("--to", to, "Target spectrum")->required();
  maj->callback([&] {
    action = [&] {
      const auto p = vector_arg(from);
      const auto q = vector_arg(to);
      const bool ok = majorizes(q, p);
      Json r = {{"majorizes", ok},
                {"optimal_conversion_probability", to_string(optimal_conversion_probability(p, q))},
                {"prefix_sums", prefix_json(prefix_sums(q, p))}};
      return Outcome{r, ok ? kSuccess : kNegative};
    };
  });

  bool skip_verify = false;
  auto* syn = command("synthesize", "Build a deterministic conversion protocol");
  syn->add_option("--from", from, "Source spectrum")->required();
  syn->add_option("--to", to, "Target spectrum")->required();
  syn->add_option("--out", out_path, "Write the protocol JSON here");
  syn->add_flag("--no-verify", skip_verify, "Skip exact execution of the protocol");
  syn->callback([&] {
    action = [&] {
      const auto p = spectrum_arg(from);
      const auto q = spectrum_arg(to);
      if (!majorizes(q, p))
        return Outcome{{{"possible", false}, {"reason", "target does not majorize source"}}, kNegative};
      const auto prot = synthesize_deterministic(p, q);
      if (!out_path.empty()) write_json_file(out_path, to_json(prot));
      Json r = {{"possible", true}, {"messages", prot.total_messages()}, {"protocol", to_json(prot)}};
      if (!skip_verify) r["verification"] = secrecy_json(verify_on_pure(prot, p, q, false));
      return Outcome{r};
    };
  });

  auto* conv = command("convert-prob", "Optimal probabilistic conversion (or procrustean filter with --keep)");
  conv->add_option("--from", from, "Source spectrum")->required();
  conv->add_option("--to", to, "Target spectrum");
  conv->add_option("--keep", keep, "Procrustean keep set: 1-based spectrum positions, e.g. 1,2");
  conv->add_option("--out", out_path, "Write the protocol JSON here");
  conv->callback([&] {
    action = [&]() -> Outcome {
      const auto p = spectrum_arg(from);
      ConversionReport rep;
      if (!keep.empty()) {
        std::set<std::size_t> ks;
        for (auto k : parse_rational_list(keep)) {
          if (k.get_den() != 1 || sgn(k) <= 0) throw ParseError("keep positions must be positive integers");
          ks.insert(k.get_num().get_ui());
        }
        rep = procrustean(p, ks);
      } else if (!to.empty()) {
        rep = synthesize_probabilistic(p, spectrum_arg(to));
      } else {
        throw ParseError("convert-prob needs --to or --keep");
      }
      if (!out_path.empty()) write_json_file(out_path, to_json(rep.protocol));
      Json r = {{"success_probability", to_string(rep.success_probability)},
                {"target", spectrum_json(rep.target)},
                {"fail_message", rep.protocol.fail ? Json(rep.protocol.fail->message) : Json(nullptr)},
                {"messages", rep.protocol.total_messages()},
                {"protocol", to_json(rep.protocol)}};
      if (sgn(rep.success_probability) > 0)
        r["verification_given_success"] = secrecy_json(verify_on_pure(rep.protocol, p, rep.target, true));
      return {r, sgn(rep.success_probability) > 0 ? kSuccess : kNegative};
    };
  });

  auto* cat_check = command("catalysis-check", "Check a conversion with a given catalyst");
  cat_check->add_option("--from", from, "Source spectrum")->required();
  cat_check->add_option("--to", to, "Target spectrum")->required();
  cat_check->add_option("--catalyst", catalyst, "Catalyst spectrum")->required();
  cat_check->callback([&] {
    action = [&] {
      const auto v = check_catalysis(spectrum_arg(from), spectrum_arg(to), spectrum_arg(catalyst));
      return Outcome{catalysis_json(v), std::holds_alternative<NotWithThisCatalyst>(v) ? kNegative : kSuccess};
    };
  });

  std::size_t max_dim = 2;
  long denom_bound = 10;
  auto* cat_search = command("catalysis-search", "Search for a catalyst within bounds");
  cat_search->add_option("--from", from, "Source spectrum")->required();
  cat_search->add_option("--to", to, "Target spectrum")->required();
  cat_search->add_option("--max-dim", max_dim, "Largest catalyst dimension")->check(CLI::Range(2, 64));
  cat_search->add_option("--denom-bound", denom_bound, "Largest common denominator")->check(CLI::Range(2L, 1000L));
  cat_search->callback([&] {
    action = [&] {
      const auto v = find_catalyst(spectrum_arg(from), spectrum_arg(to), max_dim, denom_bound);
      return Outcome{catalysis_json(v), std::holds_alternative<NoneFoundWithinBounds>(v) ? kNegative : kSuccess};
    };
  });

  auto* conc = command("concentrate", "Exact concentration yield of N copies");
  conc->add_option("--spectrum", spectrum, "Pure-state spectrum")->required();
  conc->add_option("--N", ns, "Block length or comma separated list")->required();
  conc->callback([&] {
    action = [&] {
      const auto p = spectrum_arg(spectrum);
      Json reports = Json::array();
      for (const auto& r : rate_report(p, size_list(ns))) reports.push_back(block_json(r));
      return Outcome{{{"spectrum", spectrum_json(p)}, {"entropy_of_secrecy", entropy_of_secrecy(p)}, {"reports", reports}}};
    };
  });

  double delta = 0.1;
  auto* dil = command("dilute", "Dilution of N copies from a one-time-padded typical index");
  dil->add_option("--spectrum", spectrum, "Pure-state spectrum")->required();
  dil->add_option("--N", ns, "Block length")->required();
  dil->add_option("--delta", delta, "Typicality slack in bits per copy");
  dil->callback([&] {
    action = [&] {
      const auto p = spectrum_arg(spectrum);
      const auto N = size_list(ns).front();
      const auto r = dilute_block(p, N, delta);
      const auto check = verify_dilution(p, N, delta);
      Json j = {{"N", r.N},
                {"delta", delta},
                {"target_entropy", r.target_entropy},
                {"key_bits_used", r.key_bits_used},
                {"key_rate", r.key_rate},
                {"typical_sequences", r.typical_sequences.get_str()},
                {"failure_probability", to_string(r.failure_probability)},
                {"failure_probability_value", r.failure_probability.get_d()},
                {"verification",
                 {{"verdict", check.secret() ? "SECRET" : "LEAKY"},
                  {"transcript_uniform", check.transcript_uniform},
                  {"independent_of_sequence", check.independent_of_sequence},
                  {"decodes", check.decodes}}}};
      return Outcome{j, check.secret() ? kSuccess : kNegative};
    };
  });

  bool conditioned = false;
  std::string write_result;
  auto* ver = command("verify", "Execute a protocol on a distribution and check secrecy");
  ver->add_option("--protocol", protocol_path, "Protocol JSON file")->required();
  ver->add_option("--dist", dist_path, "Distribution JSON file")->required();
  ver->add_option("--target", target, "Required output spectrum");
  ver->add_flag("--conditioned", conditioned, "Condition on the protocol not failing");
  ver->add_option("--write-result", write_result, "Write the output joint distribution here");
  ver->callback([&] {
    action = [&] {
      const auto res = execute(parse_protocol(protocol_path), parse_distribution(dist_path));
      if (!write_result.empty()) write_json_file(write_result, to_json(res.joint));
      std::optional<SecrecySpectrum> t;
      if (!target.empty()) t = spectrum_arg(target);
      const auto rep = verify_secrecy(res, t, conditioned);
      return Outcome{secrecy_json(rep), rep.verdict == Verdict::secret ? kSuccess : kNegative};
    };
  });

  std::string message_spec = "1/2,1/2";
  std::string key_spec = "1/2,1/2";
  std::size_t uses = 1;
  bool sample = false;
  unsigned seed = 1;
  std::size_t samples = 8;
  auto* otp = command("otp-demo", "One-time pad over a shared key");
  otp->add_option("--message", message_spec, "Message source spectrum");
  otp->add_option("--key", key_spec, "Key spectrum");
  otp->add_option("--uses", uses, "Messages sent under the same key")->check(CLI::Range(1, 4));
  otp->add_flag("--sample", sample, "Also draw sample runs");
  otp->add_option("--seed", seed, "Seed for --sample");
  otp->add_option("--samples", samples, "Number of sample runs")->check(CLI::Range(1, 1000));
  otp->callback([&] {
    action = [&] {
      const auto msg = spectrum_arg(message_spec);
      const auto key = spectrum_arg(key_spec);
      const auto prot = build_otp_protocol(msg.size(), key.size(), uses);
      const auto res = execute(prot, otp_state(msg, key, uses));
      const auto rep = verify_secrecy(res, std::nullopt);
      const auto transcript = marginal(res.joint, {res.transcript_label});
      Json tm = Json::object();
      for (const auto& [o, w] : transcript.entries()) tm[std::to_string(o[0])] = to_string(w);
      Json j = {{"secrecy", secrecy_json(rep)}, {"transcript_marginal", tm}};
      if (sample) {
        std::mt19937 rng(seed);
        auto weights = [](const SecrecySpectrum& s) {
          std::vector<double> w;
          for (const auto& x : s.weights()) w.push_back(x.get_d());
          return std::discrete_distribution<int>(w.begin(), w.end());
        };
        auto ds = weights(msg);
        auto dk = weights(key);
        const int ks = static_cast<int>(key.size());
        Json runs = Json::array();
        for (std::size_t i = 0; i < samples; ++i) {
          const int k = dk(rng);
          Json run = {{"key", k}, {"messages", Json::array()}, {"ciphertexts", Json::array()}, {"decoded", Json::array()}};
          for (std::size_t u = 0; u < uses; ++u) {
            const int s = ds(rng);
            const int c = (s + k) % ks;
            run["messages"].push_back(s);
            run["ciphertexts"].push_back(c);
            run["decoded"].push_back(((c - k) % ks + ks) % ks);
          }
          runs.push_back(run);
        }
        j["samples"] = {{"seed", seed}, {"runs", runs}};
      }
      return Outcome{j, rep.verdict == Verdict::secret ? kSuccess : kNegative};
    };
  });

  std::string state = "cat";
  std::size_t parties = 4;
  std::string conversion;
  auto* multi = command("multi-audit", "Multipartite partition entropies and rate feasibility");
  multi->add_option("--state", state, "cat | ghz | epr | double-epr");
  multi->add_option("--parties", parties, "Number of parties of the cat state")->check(CLI::Range(2, 12));
  multi->add_option("--conversion", conversion,
                    "Audit a conversion: ghz-to-epr | epr2-to-ghz | epr-to-ghz | ghz-to-epr2");
  multi->callback([&] {
    action = [&]() -> Outcome {
      auto cuts_json = [](const JointDist& d) {
        Json j = Json::object();
        for (const auto& cut : all_bipartitions(d)) j[cut.to_string()] = partition_entropy(d, cut);
        return j;
      };
      auto audit_json = [](const std::vector<AuditRow>& rows) {
        Json j = Json::array();
        for (const auto& r : rows)
          j.push_back({{"cut", r.cut.to_string()}, {"before", r.before}, {"after", r.after},
                       {"non_increasing", r.non_increasing}});
        return j;
      };
      if (!conversion.empty()) {
        std::vector<AuditRow> rows;
        if (conversion == "ghz-to-epr") {
          rows = entropy_audit(c_ghz(), ghz_to_epr(c_ghz()).joint);
        } else if (conversion == "epr2-to-ghz") {
          rows = entropy_audit(double_c_epr(), epr2_to_ghz(double_c_epr()).joint);
        } else if (conversion == "epr-to-ghz") {
          rows = entropy_audit(c_epr_ab(), c_ghz());
        } else if (conversion == "ghz-to-epr2") {
          rows = entropy_audit(c_ghz(), double_c_epr());
        } else {
          throw ParseError("unknown conversion '" + conversion + "'");
        }
        const bool ok = audit_passes(rows);
        return {{{"conversion", conversion}, {"audit", audit_json(rows)}, {"monotone", ok}}, ok ? kSuccess : kNegative};
      }
      if (state == "cat") {
        const auto sys = cat_rate_system(parties);
        const auto v = solve_rate_system(sys);
        Json j = rate_json(sys, v);
        j["partition_entropies"] = cuts_json(cat_state(parties));
        return {j, std::holds_alternative<Feasible>(v) ? kSuccess : kNegative};
      }
      JointDist d = state == "ghz" ? c_ghz()
                    : state == "epr" ? c_epr_ab()
                    : state == "double-epr" ? double_c_epr()
                    : throw ParseError("unknown state '" + state + "'");
      return {{{"state", state}, {"partition_entropies", cuts_json(d)}}};
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kError;
  }

  try {
    const Outcome o = action();
    if (json)
      out << o.report.dump(2) << '\n';
    else
      out << render_table(o.report);
    return o.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
}

}  // namespace lopc::cli
