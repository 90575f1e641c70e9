#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace kesm {

struct PrecisionRecall {
  double precision;
  double recall;
};

// Precision divides by k even for shorter rankings. nullopt when `relevant`
// is empty (the unit is excluded from averages).
std::optional<PrecisionRecall> precision_recall_at_k(const std::vector<std::string>& ranking,
                                                     const std::set<std::string>& relevant, int k);

inline constexpr int kSearchCutoff = 20;

// Gain 2^g - 1, discount log2(r + 1). The ideal ranking is built from all
// judged grades of the unit; unjudged items have grade 0. nullopt when no
// judged grade is positive.
std::optional<double> ndcg_at_k(const std::vector<std::string>& ranking,
                                const std::map<std::string, int>& grades, int k = kSearchCutoff);

// Expected reciprocal rank with R = (2^g - 1) / 2^g_max.
double err_at_k(const std::vector<std::string>& ranking, const std::map<std::string, int>& grades,
                int k, int g_max);

struct WinTieLoss {
  int win = 0;
  int tie = 0;
  int loss = 0;
};

// Throws ValidationError when the unit sets differ.
WinTieLoss win_tie_loss(const std::map<std::string, double>& a,
                        const std::map<std::string, double>& b, double tol = 1e-9);

}  // namespace kesm
