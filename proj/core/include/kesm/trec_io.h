#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "kesm/types.h"

namespace kesm {

struct RunEntry {
  std::string query_id;
  std::string doc_id;
  int rank = 0;
  double score = 0.0;
  std::string tag;
};

// `<query_id> Q0 <doc_id> <rank> <score> <tag>` per line.
std::vector<RunEntry> read_run(std::istream& in, const std::string& source = "<input>");
std::vector<RunEntry> read_run(const std::filesystem::path& path);
void write_run(std::ostream& out, const std::vector<RunEntry>& run);

// query_id -> doc_id -> grade, from `<query_id> 0 <doc_id> <grade>` lines.
using Qrels = std::map<std::string, std::map<std::string, int>>;
Qrels read_qrels(std::istream& in, const std::string& source = "<input>");
Qrels read_qrels(const std::filesystem::path& path);

struct RankingInstance {
  std::string query_id;
  std::string doc_id;
  int grade = 0;
  Vector features;
};

// `<grade> qid:<query_id> 1:<v1> 2:<v2> ... # <doc_id>` with six significant
// digits, in input order.
void export_features(const std::vector<RankingInstance>& instances, std::ostream& out);
std::vector<RankingInstance> read_features(std::istream& in, const std::string& source = "<input>");
std::vector<RankingInstance> read_features(const std::filesystem::path& path);

}  // namespace kesm
