#include "kesm/kee.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kesm/vocabulary.h"

namespace kesm {

double cosine(const Eigen::Ref<const Vector>& u, const Eigen::Ref<const Vector>& v) {
  if (u.size() != v.size()) {
    throw std::invalid_argument("cosine: dimension mismatch (" + std::to_string(u.size()) +
                                " vs " + std::to_string(v.size()) + ")");
  }
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu < kMinNorm || nv < kMinNorm) return 0.0;
  return std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
}

DescriptionForward describe_forward(std::span<const Index> words, const ModelParams& params) {
  DescriptionForward f;
  const Eigen::Index d = params.dim;
  const auto h = static_cast<std::size_t>(params.window);
  f.output = Vector::Zero(d);
  if (words.empty()) return f;

  f.padded.assign(words.begin(), words.end());
  if (f.padded.size() < h) f.padded.resize(h, Vocabulary::kUnkWordIndex);
  const auto positions = static_cast<Eigen::Index>(f.padded.size() - h + 1);

  f.windows.resize(static_cast<Eigen::Index>(h) * d, positions);
  for (Eigen::Index p = 0; p < positions; ++p) {
    for (std::size_t o = 0; o < h; ++o) {
      f.windows.col(p).segment(static_cast<Eigen::Index>(o) * d, d) =
          params.embeddings.row(f.padded[static_cast<std::size_t>(p) + o]).transpose();
    }
  }
  f.responses.noalias() = params.conv * f.windows;

  f.argmax.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index p = 1; p < positions; ++p) {
      if (f.responses(i, p) > f.responses(i, best)) best = p;
    }
    f.argmax[i] = static_cast<int>(best);
    f.output[i] = f.responses(i, best);
  }
  return f;
}

Vector describe_embedding(std::span<const Index> words, const ModelParams& params) {
  return describe_forward(words, params).output;
}

KeeForward kee_forward(Index entity, const DescriptionStore& descriptions,
                       const ModelParams& params) {
  KeeForward f;
  f.entity = entity;
  const Eigen::Index d = params.dim;
  const std::vector<Index>* desc = descriptions.find(entity);
  f.has_description = desc != nullptr;
  f.description = describe_forward(desc ? std::span<const Index>(*desc) : std::span<const Index>(),
                                   params);
  f.input.resize(2 * d);
  f.input.head(d) = params.embeddings.row(entity).transpose();
  f.input.tail(d) = f.description.output;
  f.output.noalias() = params.projection * f.input;
  return f;
}

Vector kee_embed(Index entity, const DescriptionStore& descriptions, const ModelParams& params) {
  return kee_forward(entity, descriptions, params).output;
}

}  // namespace kesm
