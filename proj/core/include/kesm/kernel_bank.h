#pragma once

#include <cstddef>
#include <vector>

namespace kesm {

struct Kernel {
  double mu;
  double sigma;
};

// RBF kernels over cosine similarity.
class KernelBank {
 public:
  // One exact-match kernel (mu=1, sigma=1e-3) followed by ten soft kernels
  // at mu = -0.9, -0.7, ..., 0.9 with sigma = 0.1.
  static KernelBank default_bank();

  KernelBank() = default;
  // Throws ValidationError if any sigma is not positive or the bank is empty.
  explicit KernelBank(std::vector<Kernel> kernels);

  std::size_t size() const { return kernels_.size(); }
  const Kernel& operator[](std::size_t k) const { return kernels_[k]; }
  const std::vector<Kernel>& kernels() const { return kernels_; }

  bool operator==(const KernelBank& other) const;

 private:
  std::vector<Kernel> kernels_;
};

}  // namespace kesm
