#include <doctest.h>

#include <cmath>

#include "qmult/families.hpp"
#include "qmult/qubit.hpp"
#include "qmult/verify.hpp"

using namespace qmult;

namespace {

DescribedChannel described(const ChannelMap& k, const char* family) {
  return {k, ChannelDescriptor{family, json::object(), std::nullopt}};
}

OptimizerConfig quick(int restarts = 8) {
  OptimizerConfig c;
  c.restarts = restarts;
  return c;
}

}  // namespace

TEST_CASE("theorem 1 examples") {
  const DescribedChannel dep = described(depolarizing(2, 0.6), "depolarizing");
  const VerificationReport eq = check_theorem1(dep, dep, SchattenExponent(2.0), 1, quick());
  CHECK(eq.passed());
  REQUIRE(eq.ratio.has_value());
  CHECK(std::abs(*eq.ratio - 1.0) <= 1e-3);

  const DescribedChannel k = described(random_ep_cp_channel(2, 2, 3, 1), "random_ep_cp");
  const DescribedChannel l = described(random_cp_channel(2, 2, 3, 2), "random_cp");
  const VerificationReport ineq = check_theorem1(k, l, SchattenExponent(1.5), 1, quick());
  CHECK(ineq.passed());
  CHECK(ineq.lhs <= ineq.rhs * (1.0 + 1e-3));

  const VerificationReport id = check_theorem1(described(identity_channel(2), "identity"), l, SchattenExponent(2.0), 2,
                                               quick());
  CHECK(id.passed());
  CHECK(id.lhs == doctest::Approx(id.rhs).epsilon(1e-6));

  // A map that is not EP in the standard basis is rejected, not failed.
  const VerificationReport rej =
      check_theorem1(described(werner_holevo(2), "werner_holevo"), l, SchattenExponent(2.0), 1, quick());
  CHECK(rej.status == CaseStatus::rejected);
  CHECK_FALSE(rej.diagnostic.empty());
}

TEST_CASE("theorem 2 examples") {
  const DescribedChannel dep = described(depolarizing(2, 0.5), "depolarizing");
  const VerificationReport r = check_theorem2(dep, dep, 2, quick());
  CHECK(r.passed());
  CHECK(r.lhs == doctest::Approx(0.625).epsilon(1e-6));
  CHECK(r.rhs == doctest::Approx(0.625).epsilon(1e-6));

  const DescribedChannel tp = described(random_cp_channel(2, 2, 2, 3), "random_cp");
  const VerificationReport one = check_theorem2(described(random_ep_cp_channel(2, 2, 2, 4), "random_ep_cp"), tp, 1,
                                                quick());
  CHECK(one.lhs == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(one.rhs == doctest::Approx(1.0).epsilon(1e-9));

  const DescribedChannel q = described(qubit_from_diagonal({{0.5, 0.3, 0.2}, {0.1, 0.0, 0.3}}), "qubit_diagonal");
  const VerificationReport cor = check_theorem2(q, tp, 3, quick());
  CHECK(cor.passed());
  CHECK(std::abs(*cor.ratio - 1.0) <= 1e-3);

  const VerificationReport rej = check_theorem2(described(transpose_map(2), "transpose"), tp, 2, quick());
  CHECK(rej.status == CaseStatus::rejected);
}

TEST_CASE("theorem 4 examples") {
  const DescribedChannel phi = described(random_ep_not_cp_map(2, 5), "random_ep_not_cp");
  const DescribedChannel omega = described(random_cp_channel(2, 2, 2, 6), "random_cp");
  const VerificationReport r = check_theorem4(phi, omega, 1, quick());
  CHECK(r.passed());
  CHECK(std::abs(*r.ratio - 1.0) <= 1e-3);
  CHECK(r.extra.at("exponent") == 2);

  const DescribedChannel dep = described(depolarizing(2, 0.5), "depolarizing");
  CHECK(check_theorem4(dep, dep, 2, quick()).passed());

  const DescribedChannel zero = described(zero_map(2, 2), "zero");
  const VerificationReport z = check_theorem4(zero, omega, 1, quick());
  CHECK(z.passed());
  CHECK(z.lhs == 0.0);
  CHECK(z.rhs == 0.0);
}

TEST_CASE("werner holevo violation") {
  const VerificationReport v = wh_violation(3, 5);
  CHECK(v.passed());
  CHECK(v.extra.at("violated") == true);
  CHECK(v.extra.at("nu_closed_form").get<double>() == doctest::Approx(std::pow(2.0, -0.8)).epsilon(1e-12));
  CHECK(wh_violation(3, 2).extra.at("violated") == false);
  for (int t : {2, 3, 5, 8}) CHECK(wh_violation(2, t).extra.at("violated") == false);
  CHECK(werner_holevo_nu(3, 5.0) == doctest::Approx(0.5743491774985174).epsilon(1e-12));
}

TEST_CASE("report schema round trip") {
  const DescribedChannel dep = described(depolarizing(2, 0.5), "depolarizing");
  const VerificationReport r = check_theorem2(dep, dep, 2, quick());
  const json j = report_to_json(r);
  CHECK(report_to_json(report_from_json(j)).dump() == j.dump());
  CHECK_FALSE(j.contains("wall_time"));
  CHECK(report_to_json(r, true).contains("wall_time"));
  const json w = report_to_json(wh_violation(3, 5));
  CHECK(report_to_json(report_from_json(w)).dump() == w.dump());
}

TEST_CASE("suites") {
  SuiteConfig empty;
  empty.cases = 0;
  const SuiteResult none = run_suite(empty);
  CHECK(none.reports.empty());
  CHECK(none.summary.cases == 0);
  CHECK(none.summary.passed == 0);

  SuiteConfig cfg;
  cfg.theorem = "thm2";
  cfg.cases = 4;
  cfg.master_seed = 7;
  cfg.optimizer = quick();
  const SuiteResult a = run_suite(cfg);
  const SuiteResult b = run_suite(cfg);
  CHECK(a.summary.passed == 4);
  CHECK(reports_jsonl(a.reports) == reports_jsonl(b.reports));
  cfg.master_seed = 8;
  CHECK(reports_jsonl(run_suite(cfg).reports) != reports_jsonl(a.reports));

  SuiteConfig bad;
  bad.theorem = "thm3";
  CHECK_THROWS_AS(run_suite(bad), InputError);
  bad.theorem = "thm1";
  bad.p_values = {2.5};
  CHECK_THROWS_AS(run_suite(bad), InputError);
}

TEST_CASE("summary serialization") {
  SuiteConfig cfg;
  cfg.theorem = "wh";
  cfg.cases = 2;
  cfg.t_values = {2, 5};
  const SuiteResult r = run_suite(cfg);
  CHECK(r.summary.passed == 2);
  const std::string csv = summary_csv(r.summary);
  CHECK(csv.rfind("theorem,cases,passed", 0) == 0);
  CHECK(summary_to_json(r.summary).at("cases") == 2);
}
