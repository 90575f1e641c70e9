#include "kesm/kernel_bank.h"

#include <cmath>

#include "kesm/errors.h"

namespace kesm {

KernelBank KernelBank::default_bank() {
  std::vector<Kernel> kernels;
  kernels.push_back({1.0, 1e-3});
  for (int i = 0; i < 10; ++i) kernels.push_back({-0.9 + 0.2 * i, 0.1});
  return KernelBank(std::move(kernels));
}

KernelBank::KernelBank(std::vector<Kernel> kernels) : kernels_(std::move(kernels)) {
  if (kernels_.empty()) throw ValidationError("kernel bank must not be empty");
  for (const auto& k : kernels_) {
    if (!(k.sigma > 0.0) || !std::isfinite(k.sigma) || !std::isfinite(k.mu)) {
      throw ValidationError("kernel sigma must be positive and finite");
    }
  }
}

bool KernelBank::operator==(const KernelBank& other) const {
  if (kernels_.size() != other.kernels_.size()) return false;
  for (std::size_t i = 0; i < kernels_.size(); ++i) {
    if (kernels_[i].mu != other.kernels_[i].mu || kernels_[i].sigma != other.kernels_[i].sigma) {
      return false;
    }
  }
  return true;
}

}  // namespace kesm
