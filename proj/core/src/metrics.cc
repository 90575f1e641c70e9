#include "kesm/metrics.h"

#include <algorithm>
#include <cmath>
#include <functional>

#include "kesm/errors.h"

namespace kesm {
namespace {

int grade_of(const std::map<std::string, int>& grades, const std::string& item) {
  auto it = grades.find(item);
  return it == grades.end() ? 0 : it->second;
}

double gain(int grade) { return std::exp2(static_cast<double>(grade)) - 1.0; }

}  // namespace

std::optional<PrecisionRecall> precision_recall_at_k(const std::vector<std::string>& ranking,
                                                     const std::set<std::string>& relevant, int k) {
  if (k < 1) throw ValidationError("k must be >= 1");
  if (relevant.empty()) return std::nullopt;
  const std::size_t depth = std::min(ranking.size(), static_cast<std::size_t>(k));
  std::size_t hits = 0;
  for (std::size_t i = 0; i < depth; ++i) hits += relevant.count(ranking[i]);
  return PrecisionRecall{static_cast<double>(hits) / k,
                         static_cast<double>(hits) / static_cast<double>(relevant.size())};
}

std::optional<double> ndcg_at_k(const std::vector<std::string>& ranking,
                                const std::map<std::string, int>& grades, int k) {
  if (k < 1) throw ValidationError("k must be >= 1");
  std::vector<int> ideal;
  for (const auto& [item, g] : grades) {
    if (g > 0) ideal.push_back(g);
  }
  if (ideal.empty()) return std::nullopt;
  std::sort(ideal.begin(), ideal.end(), std::greater<>());

  double idcg = 0.0;
  for (std::size_t r = 0; r < ideal.size() && r < static_cast<std::size_t>(k); ++r) {
    idcg += gain(ideal[r]) / std::log2(static_cast<double>(r) + 2.0);
  }
  double dcg = 0.0;
  for (std::size_t r = 0; r < ranking.size() && r < static_cast<std::size_t>(k); ++r) {
    const int g = grade_of(grades, ranking[r]);
    if (g > 0) dcg += gain(g) / std::log2(static_cast<double>(r) + 2.0);
  }
  return dcg / idcg;
}

double err_at_k(const std::vector<std::string>& ranking, const std::map<std::string, int>& grades,
                int k, int g_max) {
  if (k < 1) throw ValidationError("k must be >= 1");
  if (g_max < 1) throw ValidationError("g_max must be >= 1");
  const double denom = std::exp2(static_cast<double>(g_max));
  double err = 0.0;
  double not_stopped = 1.0;
  for (std::size_t r = 0; r < ranking.size() && r < static_cast<std::size_t>(k); ++r) {
    const int g = std::max(grade_of(grades, ranking[r]), 0);
    const double stop = gain(g) / denom;
    err += not_stopped * stop / static_cast<double>(r + 1);
    not_stopped *= 1.0 - stop;
  }
  return err;
}

WinTieLoss win_tie_loss(const std::map<std::string, double>& a,
                        const std::map<std::string, double>& b, double tol) {
  if (a.size() != b.size()) throw ValidationError("win/tie/loss: unit sets differ");
  WinTieLoss out;
  for (const auto& [unit, va] : a) {
    auto it = b.find(unit);
    if (it == b.end()) throw ValidationError("win/tie/loss: unit '" + unit + "' missing");
    const double diff = va - it->second;
    if (diff > tol) {
      ++out.win;
    } else if (diff < -tol) {
      ++out.loss;
    } else {
      ++out.tie;
    }
  }
  return out;
}

}  // namespace kesm
