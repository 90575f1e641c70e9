#include <gtest/gtest.h>

#include <cmath>

#include "kesm/errors.h"
#include "kesm/metrics.h"
#include "kesm/significance.h"

namespace kesm {
namespace {

TEST(PrecisionRecall, Examples) {
  const auto r1 = precision_recall_at_k({"A", "B", "C", "D", "E"}, {"A", "C", "F"}, 1);
  EXPECT_EQ(r1->precision, 1.0);
  EXPECT_DOUBLE_EQ(r1->recall, 1.0 / 3.0);
  const auto r5 = precision_recall_at_k({"A", "B", "C", "D", "E"}, {"A", "C", "F"}, 5);
  EXPECT_DOUBLE_EQ(r5->precision, 0.4);
  EXPECT_DOUBLE_EQ(r5->recall, 2.0 / 3.0);
  const auto shortlist = precision_recall_at_k({"A"}, {"A"}, 5);
  EXPECT_DOUBLE_EQ(shortlist->precision, 0.2);
  EXPECT_EQ(shortlist->recall, 1.0);
  const auto miss = precision_recall_at_k({"B"}, {"A"}, 1);
  EXPECT_EQ(miss->precision, 0.0);
  EXPECT_EQ(miss->recall, 0.0);
}

TEST(PrecisionRecall, EmptyRelevantSkipsUnit) {
  EXPECT_FALSE(precision_recall_at_k({"A"}, {}, 1).has_value());
  EXPECT_THROW(precision_recall_at_k({"A"}, {"A"}, 0), ValidationError);
}

TEST(Ndcg, Examples) {
  const std::map<std::string, int> g = {{"a", 2}, {"b", 0}, {"c", 1}};
  // DCG = 3 + 0 + 1/2 = 3.5; IDCG = 3 + 1/log2(3).
  EXPECT_NEAR(*ndcg_at_k({"a", "b", "c"}, g, 3), 3.5 / (3 + 1 / std::log2(3.0)), 1e-15);
  EXPECT_NEAR(*ndcg_at_k({"a", "b", "c"}, g, 3), 0.96394, 1e-5);
  EXPECT_EQ(*ndcg_at_k({"a", "c", "b"}, g), 1.0);
  EXPECT_EQ(*ndcg_at_k({"b", "zz"}, g), 0.0);
}

TEST(Ndcg, IdealUsesAllJudgedGrades) {
  // "c" is judged relevant but not retrieved: the ideal still counts it.
  const std::map<std::string, int> g = {{"a", 1}, {"c", 1}};
  EXPECT_NEAR(*ndcg_at_k({"a"}, g), 1.0 / (1.0 + 1.0 / std::log2(3.0)), 1e-15);
  EXPECT_FALSE(ndcg_at_k({"a"}, {{"a", 0}, {"b", -1}}).has_value());
}

TEST(Err, Examples) {
  EXPECT_NEAR(err_at_k({"a"}, {{"a", 1}}, 20, 1), 0.5, 1e-12);
  EXPECT_NEAR(err_at_k({"a", "b"}, {{"a", 1}, {"b", 1}}, 20, 1), 0.625, 1e-12);
  EXPECT_EQ(err_at_k({"a", "b"}, {{"a", 0}}, 20, 1), 0.0);
  // Grade 2 with g_max 2: R = 3/4.
  EXPECT_NEAR(err_at_k({"a"}, {{"a", 2}}, 20, 2), 0.75, 1e-15);
  EXPECT_THROW(err_at_k({"a"}, {{"a", 1}}, 20, 0), ValidationError);
}

TEST(Err, CutoffIgnoresLaterRanks) {
  std::vector<std::string> ranking;
  std::map<std::string, int> grades;
  for (int i = 0; i < 30; ++i) ranking.push_back("d" + std::to_string(i));
  grades["d25"] = 1;
  EXPECT_EQ(err_at_k(ranking, grades, 20, 1), 0.0);
  EXPECT_GT(err_at_k(ranking, grades, 30, 1), 0.0);
}

TEST(WinTieLoss, Examples) {
  const std::map<std::string, double> a = {{"u1", 0.5}, {"u2", 0.2}, {"u3", 0.0}};
  const auto same = win_tie_loss(a, a);
  EXPECT_EQ(same.win, 0);
  EXPECT_EQ(same.tie, 3);
  EXPECT_EQ(same.loss, 0);

  std::map<std::string, double> plus = a;
  for (auto& [u, v] : plus) v += 1;
  EXPECT_EQ(win_tie_loss(plus, a).win, 3);

  const std::map<std::string, double> mixed = {{"u1", 1.5}, {"u2", 0.2 + 1e-12}, {"u3", -1.0}};
  const auto wtl = win_tie_loss(mixed, a);
  EXPECT_EQ(wtl.win, 1);
  EXPECT_EQ(wtl.tie, 1);
  EXPECT_EQ(wtl.loss, 1);
  EXPECT_THROW(win_tie_loss(a, {{"u1", 0.0}}), ValidationError);
}

TEST(PermutationTest, Examples) {
  EXPECT_EQ(permutation_test(std::vector<double>(7, 0.0)), 1.0);
  EXPECT_EQ(permutation_test(std::vector<double>(10, 1.0)), 2.0 / 1024.0);
  EXPECT_EQ(permutation_test(std::vector<double>(10, -1.0)), 2.0 / 1024.0);
}

TEST(PermutationTest, ExactEnumerationMatchesBruteForce) {
  const std::vector<double> diffs = {0.3, -0.1, 0.25, 0.05, 0.4, -0.2, 0.15};
  double observed = 0;
  for (double d : diffs) observed += d;
  int extreme = 0;
  for (int mask = 0; mask < 128; ++mask) {
    double s = 0;
    for (int i = 0; i < 7; ++i) s += (mask >> i & 1) ? -diffs[static_cast<std::size_t>(i)] : diffs[static_cast<std::size_t>(i)];
    if (std::abs(s) >= std::abs(observed) - 1e-12) ++extreme;
  }
  EXPECT_DOUBLE_EQ(permutation_test(diffs), extreme / 128.0);
}

TEST(PermutationTest, MonteCarloUsesAddOneAndSeed) {
  std::vector<double> diffs(40);
  for (std::size_t i = 0; i < diffs.size(); ++i) diffs[i] = (i % 3 == 0 ? -1.0 : 1.0) * (0.1 + 0.01 * static_cast<double>(i));
  const double a = permutation_test(diffs, 999, 5);
  EXPECT_EQ(a, permutation_test(diffs, 999, 5));
  EXPECT_GE(a, 1.0 / 1000.0);
  // p * (B + 1) is an integer count.
  EXPECT_NEAR(a * 1000.0, std::round(a * 1000.0), 1e-9);
  std::vector<double> huge(40, 1.0);
  EXPECT_EQ(permutation_test(huge, 999, 5), 1.0 / 1000.0);
}

TEST(PermutationTest, SymmetricUnderNegation) {
  std::vector<double> diffs = {0.2, -0.5, 0.1, 0.7, 0.05, -0.3, 0.4, 0.6, -0.1, 0.2, 0.3, 0.1, -0.2, 0.5};
  std::vector<double> neg = diffs;
  for (auto& d : neg) d = -d;
  EXPECT_EQ(permutation_test(diffs, 1000, 3), permutation_test(neg, 1000, 3));
  EXPECT_EQ(permutation_test(diffs, 100000, 3), permutation_test(neg, 100000, 3));
}

}  // namespace
}  // namespace kesm
