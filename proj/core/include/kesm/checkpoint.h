#pragma once

#include <filesystem>
#include <iosfwd>

#include "kesm/document.h"
#include "kesm/kernel_bank.h"
#include "kesm/model_params.h"
#include "kesm/vocabulary.h"

namespace kesm {

inline constexpr int kCheckpointFormatVersion = 1;

// Everything needed to score entities without the training inputs.
struct Model {
  Vocabulary vocab;
  DescriptionStore descriptions;
  KernelBank bank = KernelBank::default_bank();
  ModelParams params;
};

// Single JSON document. Numbers are written with round-trip precision, so a
// reloaded model reproduces scores bit for bit.
void save_checkpoint(const Model& model, std::ostream& out);
Model load_checkpoint(std::istream& in, const std::string& source = "<input>");
Model load_checkpoint(const std::filesystem::path& path);

}  // namespace kesm
