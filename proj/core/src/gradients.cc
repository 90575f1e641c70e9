#include "kesm/gradients.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "kesm/kee.h"
#include "kesm/parallel.h"

namespace kesm {
namespace {

// Cosines of `target` against every column of `context`, plus whether each
// one is differentiable (non-degenerate norms and not clamped).
struct CosineColumn {
  Vector cos;
  std::vector<char> live;
  Vector norms;
};

CosineColumn cosines(const Vector& target, double target_norm, const Matrix& context) {
  CosineColumn out;
  const Eigen::Index n = context.cols();
  out.cos = Vector::Zero(n);
  out.live.assign(static_cast<std::size_t>(n), 0);
  out.norms = context.colwise().norm().transpose();
  if (n == 0 || target_norm < kMinNorm) return out;
  const Vector dots = context.transpose() * target;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (out.norms[j] < kMinNorm) continue;
    const double raw = dots[j] / (target_norm * out.norms[j]);
    if (raw > 1.0 || raw < -1.0) {
      out.cos[j] = std::clamp(raw, -1.0, 1.0);
    } else {
      out.cos[j] = raw;
      out.live[static_cast<std::size_t>(j)] = 1;
    }
  }
  return out;
}

Vector pool(const Vector& cos, const KernelBank& bank) {
  Vector phi = Vector::Zero(static_cast<Eigen::Index>(bank.size()));
  for (Eigen::Index j = 0; j < cos.size(); ++j) {
    for (std::size_t k = 0; k < bank.size(); ++k) {
      const double z = (cos[j] - bank[k].mu) / bank[k].sigma;
      phi[static_cast<Eigen::Index>(k)] += std::exp(-0.5 * z * z);
    }
  }
  return phi;
}

// dL/dcos_j given dL/dphi for one context column.
double cosine_grad(double c, const Eigen::Ref<const Vector>& dphi, const KernelBank& bank) {
  double g = 0.0;
  for (std::size_t k = 0; k < bank.size(); ++k) {
    const double dk = dphi[static_cast<Eigen::Index>(k)];
    if (dk == 0.0) continue;
    const double diff = c - bank[k].mu;
    const double s2 = bank[k].sigma * bank[k].sigma;
    g += dk * std::exp(-0.5 * diff * diff / s2) * (-diff / s2);
  }
  return g;
}

struct TargetState {
  Index entity;
  const Vector* kee;
  double norm;
  CosineColumn entity_cos;
  CosineColumn word_cos;
  Vector phi;  // 2K
  double score;
  double dscore = 0.0;
};

struct DocResult {
  double loss = 0.0;
  std::size_t active = 0;
  std::map<Index, Vector> kee_grads;   // dL/d(KEE vector) per entity
  std::map<Index, Vector> word_grads;  // dL/d(embedding row) per word
  Vector salience_weights;
  double salience_bias = 0.0;
};

struct DocJob {
  std::size_t doc;
  std::vector<std::size_t> pairs;  // indices into the batch
};

class BatchEvaluator {
 public:
  BatchEvaluator(std::span<const SaliencePair> batch, std::span<const Document> docs,
                 const DescriptionStore& descriptions, const ModelParams& params,
                 const KernelBank& bank, int threads)
      : batch_(batch), docs_(docs), params_(params), bank_(bank), threads_(threads) {
    std::map<std::size_t, std::vector<std::size_t>> by_doc;
    for (std::size_t i = 0; i < batch.size(); ++i) by_doc[batch[i].doc].push_back(i);
    for (auto& [doc, pairs] : by_doc) jobs_.push_back({doc, std::move(pairs)});

    for (const auto& job : jobs_) {
      for (const auto& m : docs[job.doc].mentions) entities_.push_back(m.entity);
    }
    std::sort(entities_.begin(), entities_.end());
    entities_.erase(std::unique(entities_.begin(), entities_.end()), entities_.end());
    for (std::size_t i = 0; i < entities_.size(); ++i) slot_[entities_[i]] = i;

    kee_.resize(entities_.size());
    parallel_for(entities_.size(), threads, [&](std::size_t i) {
      kee_[i] = kee_forward(entities_[i], descriptions, params);
    });
  }

  BatchGradients run(bool backward) {
    std::vector<DocResult> results(jobs_.size());
    parallel_for(jobs_.size(), threads_,
                 [&](std::size_t i) { results[i] = run_doc(jobs_[i], backward); });

    BatchGradients out;
    for (const auto& r : results) {
      out.loss += r.loss;
      out.active_pairs += r.active;
    }
    if (!backward) return out;

    out.grads = ModelParams::zeros(params_.vocab_size(), params_.dim, params_.window, bank_.size());
    ParamTensors& g = out.grads;
    const Eigen::Index d = params_.dim;
    std::vector<Vector> kee_grad(entities_.size(), Vector::Zero(d));
    std::vector<char> touched(entities_.size(), 0);
    for (const auto& r : results) {
      if (r.active == 0) continue;
      g.salience_weights += r.salience_weights;
      g.salience_bias += r.salience_bias;
      for (const auto& [e, v] : r.kee_grads) {
        const std::size_t s = slot_.at(e);
        kee_grad[s] += v;
        touched[s] = 1;
      }
      for (const auto& [w, v] : r.word_grads) g.embeddings.row(w) += v.transpose();
    }

    for (std::size_t s = 0; s < entities_.size(); ++s) {
      if (!touched[s]) continue;
      backprop_kee(kee_[s], kee_grad[s], g);
    }
    return out;
  }

 private:
  DocResult run_doc(const DocJob& job, bool backward) const {
    const Document& doc = docs_[job.doc];
    const Eigen::Index d = params_.dim;
    const auto K = static_cast<Eigen::Index>(bank_.size());

    Matrix mentions(d, static_cast<Eigen::Index>(doc.mentions.size()));
    for (std::size_t j = 0; j < doc.mentions.size(); ++j) {
      mentions.col(static_cast<Eigen::Index>(j)) = kee_[slot_.at(doc.mentions[j].entity)].output;
    }
    Matrix words(d, static_cast<Eigen::Index>(doc.words.size()));
    for (std::size_t j = 0; j < doc.words.size(); ++j) {
      words.col(static_cast<Eigen::Index>(j)) = params_.embeddings.row(doc.words[j]).transpose();
    }

    std::vector<TargetState> targets;
    auto target_of = [&](Index e) -> TargetState& {
      for (auto& t : targets) {
        if (t.entity == e) return t;
      }
      TargetState t;
      t.entity = e;
      t.kee = &kee_[slot_.at(e)].output;
      t.norm = t.kee->norm();
      t.entity_cos = cosines(*t.kee, t.norm, mentions);
      t.word_cos = cosines(*t.kee, t.norm, words);
      t.phi.resize(2 * K);
      t.phi << pool(t.entity_cos.cos, bank_), pool(t.word_cos.cos, bank_);
      t.score = params_.salience_weights.dot(t.phi) + params_.salience_bias;
      targets.push_back(std::move(t));
      return targets.back();
    };

    DocResult r;
    for (std::size_t i : job.pairs) {
      const double pos = target_of(batch_[i].positive).score;
      const double neg = target_of(batch_[i].negative).score;
      const double loss = hinge_loss_value(pos, neg);
      if (loss > 0.0) {
        r.loss += loss;
        ++r.active;
        target_of(batch_[i].positive).dscore -= 1.0;
        target_of(batch_[i].negative).dscore += 1.0;
      }
    }
    if (!backward || r.active == 0) return r;

    r.salience_weights = Vector::Zero(2 * K);
    for (const TargetState& t : targets) {
      if (t.dscore == 0.0) continue;
      r.salience_weights += t.dscore * t.phi;
      r.salience_bias += t.dscore;
      const Vector dphi = t.dscore * params_.salience_weights;

      Vector& du = grad_slot(r.kee_grads, t.entity, d);
      const Vector& u = *t.kee;
      auto backprop_context = [&](const CosineColumn& cc, const Matrix& context,
                                  const Eigen::Ref<const Vector>& dphi_part, auto&& sink) {
        for (Eigen::Index j = 0; j < context.cols(); ++j) {
          if (!cc.live[static_cast<std::size_t>(j)]) continue;
          const double gc = cosine_grad(cc.cos[j], dphi_part, bank_);
          if (gc == 0.0) continue;
          const double nv = cc.norms[j];
          const double c = cc.cos[j];
          const auto v = context.col(j);
          du += gc * (v / (t.norm * nv) - (c / (t.norm * t.norm)) * u);
          sink(j, gc * (u / (t.norm * nv) - (c / (nv * nv)) * v));
        }
      };
      backprop_context(t.entity_cos, mentions, dphi.head(K), [&](Eigen::Index j, const Vector& dv) {
        grad_slot(r.kee_grads, doc.mentions[static_cast<std::size_t>(j)].entity, d) += dv;
      });
      backprop_context(t.word_cos, words, dphi.tail(K), [&](Eigen::Index j, const Vector& dv) {
        grad_slot(r.word_grads, doc.words[static_cast<std::size_t>(j)], d) += dv;
      });
    }
    return r;
  }

  static double hinge_loss_value(double pos, double neg) { return std::max(0.0, 1.0 - pos + neg); }

  static Vector& grad_slot(std::map<Index, Vector>& m, Index key, Eigen::Index d) {
    auto it = m.find(key);
    if (it == m.end()) it = m.emplace(key, Vector::Zero(d)).first;
    return it->second;
  }

  // Chain rule from dL/d(KEE vector) through the projection and the
  // description CNN into the parameter gradients.
  void backprop_kee(const KeeForward& f, const Vector& grad, ParamTensors& g) const {
    const Eigen::Index d = params_.dim;
    g.projection.noalias() += grad * f.input.transpose();
    const Vector dinput = params_.projection.transpose() * grad;
    g.embeddings.row(f.entity) += dinput.head(d).transpose();

    const DescriptionForward& desc = f.description;
    if (desc.padded.empty()) return;
    const Eigen::Index positions = desc.windows.cols();
    Matrix dwindows = Matrix::Zero(desc.windows.rows(), positions);
    std::vector<char> hit(static_cast<std::size_t>(positions), 0);
    for (Eigen::Index i = 0; i < d; ++i) {
      const double gi = dinput[d + i];
      if (gi == 0.0) continue;
      const Eigen::Index p = desc.argmax[i];
      g.conv.row(i) += gi * desc.windows.col(p).transpose();
      dwindows.col(p) += gi * params_.conv.row(i).transpose();
      hit[static_cast<std::size_t>(p)] = 1;
    }
    for (Eigen::Index p = 0; p < positions; ++p) {
      if (!hit[static_cast<std::size_t>(p)]) continue;
      for (int o = 0; o < params_.window; ++o) {
        g.embeddings.row(desc.padded[static_cast<std::size_t>(p + o)]) +=
            dwindows.col(p).segment(o * d, d).transpose();
      }
    }
  }

  std::span<const SaliencePair> batch_;
  std::span<const Document> docs_;
  const ModelParams& params_;
  const KernelBank& bank_;
  int threads_;
  std::vector<DocJob> jobs_;
  std::vector<Index> entities_;
  std::unordered_map<Index, std::size_t> slot_;
  std::vector<KeeForward> kee_;
};

}  // namespace

BatchGradients compute_gradients(std::span<const SaliencePair> batch,
                                 std::span<const Document> docs,
                                 const DescriptionStore& descriptions, const ModelParams& params,
                                 const KernelBank& bank, int threads) {
  BatchEvaluator eval(batch, docs, descriptions, params, bank, threads);
  return eval.run(true);
}

double batch_loss(std::span<const SaliencePair> batch, std::span<const Document> docs,
                  const DescriptionStore& descriptions, const ModelParams& params,
                  const KernelBank& bank, int threads) {
  BatchEvaluator eval(batch, docs, descriptions, params, bank, threads);
  return eval.run(false).loss;
}

}  // namespace kesm
