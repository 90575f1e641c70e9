#include "kesm/kim.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kesm/kee.h"

namespace kesm {

Vector kernel_pool(const Vector& target, const Matrix& context, const KernelBank& bank) {
  const auto K = static_cast<Eigen::Index>(bank.size());
  Vector phi = Vector::Zero(K);
  if (context.cols() == 0) return phi;
  if (context.rows() != target.size()) {
    throw std::invalid_argument("kernel_pool: dimension mismatch");
  }
  const double target_norm = target.norm();
  if (target_norm < kMinNorm) {
    // Every cosine is 0 by convention.
    for (Eigen::Index k = 0; k < K; ++k) {
      const double z = bank[static_cast<std::size_t>(k)].mu / bank[static_cast<std::size_t>(k)].sigma;
      phi[k] = static_cast<double>(context.cols()) * std::exp(-0.5 * z * z);
    }
    return phi;
  }
  const Vector dots = context.transpose() * target;
  const Vector norms = context.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < context.cols(); ++j) {
    const double c = norms[j] < kMinNorm
                         ? 0.0
                         : std::clamp(dots[j] / (target_norm * norms[j]), -1.0, 1.0);
    for (Eigen::Index k = 0; k < K; ++k) {
      const Kernel& kernel = bank[static_cast<std::size_t>(k)];
      const double z = (c - kernel.mu) / kernel.sigma;
      phi[k] += std::exp(-0.5 * z * z);
    }
  }
  return phi;
}

Vector kernel_pool(const Vector& target, std::span<const Vector> context, const KernelBank& bank) {
  Matrix m(target.size(), static_cast<Eigen::Index>(context.size()));
  for (std::size_t j = 0; j < context.size(); ++j) {
    if (context[j].size() != target.size()) {
      throw std::invalid_argument("kernel_pool: dimension mismatch");
    }
    m.col(static_cast<Eigen::Index>(j)) = context[j];
  }
  return kernel_pool(target, m, bank);
}

Vector KernelScores::concat() const {
  Vector out(entity_kernels.size() + word_kernels.size());
  out << entity_kernels, word_kernels;
  return out;
}

DocumentContext::DocumentContext(const Document& doc, const DescriptionStore& descriptions,
                                 const ModelParams& params)
    : descriptions_(descriptions), params_(params) {
  const Eigen::Index d = params.dim;
  mentions_.resize(d, static_cast<Eigen::Index>(doc.mentions.size()));
  for (std::size_t j = 0; j < doc.mentions.size(); ++j) {
    mentions_.col(static_cast<Eigen::Index>(j)) = entity_vector(doc.mentions[j].entity);
  }
  words_.resize(d, static_cast<Eigen::Index>(doc.words.size()));
  for (std::size_t j = 0; j < doc.words.size(); ++j) {
    words_.col(static_cast<Eigen::Index>(j)) = params.embeddings.row(doc.words[j]).transpose();
  }
}

const Vector& DocumentContext::entity_vector(Index entity) {
  auto it = kee_cache_.find(entity);
  if (it == kee_cache_.end()) {
    it = kee_cache_.emplace(entity, kee_embed(entity, descriptions_, params_)).first;
  }
  return it->second;
}

KernelScores DocumentContext::kim(Index entity, const KernelBank& bank) {
  const Vector target = entity_vector(entity);
  return {kernel_pool(target, mentions_, bank), kernel_pool(target, words_, bank)};
}

KernelScores kim(Index entity, const Document& doc, const DescriptionStore& descriptions,
                 const ModelParams& params, const KernelBank& bank) {
  DocumentContext ctx(doc, descriptions, params);
  return ctx.kim(entity, bank);
}

}  // namespace kesm
