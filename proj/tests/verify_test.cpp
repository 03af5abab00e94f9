#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace lsqlab;

namespace {

VerifyOptions quick() {
  VerifyOptions opt;
  opt.random_instances = 40;
  opt.sampled_subsets = 40;
  return opt;
}

}  // namespace

class VerifyScope : public ::testing::TestWithParam<std::string> {};

TEST_P(VerifyScope, AllChecksPass) {
  const auto results = run_verify(GetParam(), quick());
  ASSERT_FALSE(results.empty());
  for (const auto& r : results) {
    EXPECT_TRUE(r.passed) << r.module << ": " << r.name << ": " << r.detail;
    EXPECT_GT(r.cases, 0) << r.name;
    EXPECT_EQ(r.module, GetParam());
  }
}

INSTANTIATE_TEST_SUITE_P(Scopes, VerifyScope, ::testing::ValuesIn(verify_scopes()));

TEST(Verify, FaultInjectionIsCaught) {
  VerifyOptions opt = quick();
  opt.fault = Fault::flip_on_walk_sign;
  const auto results = run_verify("staircase", opt);
  int failed = 0;
  for (const auto& r : results) {
    if (r.name.find("unique") != std::string::npos) {
      EXPECT_FALSE(r.passed) << r.name;
      EXPECT_FALSE(r.detail.empty());
    }
    failed += !r.passed;
  }
  EXPECT_GE(failed, 2);
  EXPECT_FALSE(to_json(results).at("passed").get<bool>());
}

TEST(Verify, UnknownScope) {
  EXPECT_THROW(run_verify("everything"), ArgumentError);
}

TEST(Verify, JsonReportShape) {
  const Json j = to_json(run_verify("adversary", quick()));
  EXPECT_TRUE(j.at("passed").get<bool>());
  EXPECT_EQ(j.at("checks").size(), 4u);
  EXPECT_FALSE(j.at("checks")[0].contains("counterexample"));
}

TEST(Verify, SeparationCountReportsOddClassMismatch) {
  const auto rep = checks::separation_count(quick());
  EXPECT_TRUE(rep.check.passed) << rep.check.detail;
  EXPECT_GT(rep.odd_class_cases, 0);
  EXPECT_GT(rep.odd_class_mismatches, 0);
}
