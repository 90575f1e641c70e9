#include "kesm/model_params.h"

#include <cmath>
#include <random>
#include <string>

#include "kesm/errors.h"

namespace kesm {
namespace {

template <typename M>
void fill_uniform(M& m, double bound, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = dist(rng);
  }
}

}  // namespace

ModelParams ModelParams::zeros(std::size_t vocab_size, int dim, int window,
                               std::size_t num_kernels) {
  if (dim < 1 || window < 1) throw ValidationError("dim and window must be >= 1");
  ModelParams p;
  p.dim = dim;
  p.window = window;
  const auto d = static_cast<Eigen::Index>(dim);
  p.embeddings = RowMatrix::Zero(static_cast<Eigen::Index>(vocab_size), d);
  p.conv = Matrix::Zero(d, window * d);
  p.projection = Matrix::Zero(d, 2 * d);
  p.salience_weights = Vector::Zero(static_cast<Eigen::Index>(2 * num_kernels));
  p.salience_bias = 0.0;
  return p;
}

ModelParams ModelParams::random(std::size_t vocab_size, int dim, int window,
                                std::size_t num_kernels, std::uint64_t seed, double init_scale) {
  ModelParams p = zeros(vocab_size, dim, window, num_kernels);
  std::mt19937_64 rng(seed);
  fill_uniform(p.embeddings, init_scale, rng);
  fill_uniform(p.conv, std::sqrt(6.0 / static_cast<double>(p.conv.rows() + p.conv.cols())), rng);
  fill_uniform(p.projection,
               std::sqrt(6.0 / static_cast<double>(p.projection.rows() + p.projection.cols())), rng);
  Matrix w(p.salience_weights.size(), 1);
  fill_uniform(w, 0.01, rng);
  p.salience_weights = w.col(0);
  return p;
}

void ModelParams::check_shapes(std::size_t vocab_size, std::size_t num_kernels) const {
  auto fail = [](const std::string& what) { throw ValidationError("model shape mismatch: " + what); };
  if (dim < 1 || window < 1) fail("dim and window must be >= 1");
  const auto d = static_cast<Eigen::Index>(dim);
  if (embeddings.rows() != static_cast<Eigen::Index>(vocab_size) || embeddings.cols() != d) {
    fail("embeddings");
  }
  if (conv.rows() != d || conv.cols() != window * d) fail("conv");
  if (projection.rows() != d || projection.cols() != 2 * d) fail("projection");
  if (salience_weights.size() != static_cast<Eigen::Index>(2 * num_kernels)) fail("salience weights");
}

bool ModelParams::all_finite() const {
  return embeddings.allFinite() && conv.allFinite() && projection.allFinite() &&
         salience_weights.allFinite() && std::isfinite(salience_bias);
}

std::size_t ModelParams::num_parameters() const {
  return static_cast<std::size_t>(embeddings.size() + conv.size() + projection.size() +
                                  salience_weights.size() + 1);
}

}  // namespace kesm
