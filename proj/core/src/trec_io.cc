#include "kesm/trec_io.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "kesm/errors.h"

namespace kesm {
namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

[[noreturn]] void bad_line(const std::string& source, long line_no, const std::string& what) {
  throw ValidationError(source + ":" + std::to_string(line_no) + ": " + what);
}

template <typename T>
bool parse_number(const std::string& text, T& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

std::vector<RunEntry> read_run(std::istream& in, const std::string& source) {
  std::vector<RunEntry> run;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    std::istringstream fields(line);
    RunEntry e;
    std::string q0, rank, score, extra;
    if (!(fields >> e.query_id >> q0 >> e.doc_id >> rank >> score >> e.tag) || (fields >> extra)) {
      bad_line(source, line_no, "expected '<query_id> Q0 <doc_id> <rank> <score> <tag>'");
    }
    if (!parse_number(rank, e.rank) || e.rank < 1) bad_line(source, line_no, "invalid rank '" + rank + "'");
    if (!parse_number(score, e.score)) bad_line(source, line_no, "invalid score '" + score + "'");
    run.push_back(std::move(e));
  }
  return run;
}

std::vector<RunEntry> read_run(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_run(in, path.string());
}

void write_run(std::ostream& out, const std::vector<RunEntry>& run) {
  for (const auto& e : run) {
    out << e.query_id << " Q0 " << e.doc_id << ' ' << e.rank << ' ' << format_double(e.score) << ' '
        << e.tag << '\n';
  }
}

Qrels read_qrels(std::istream& in, const std::string& source) {
  Qrels qrels;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    std::istringstream fields(line);
    std::string query, iteration, doc, grade, extra;
    if (!(fields >> query >> iteration >> doc >> grade) || (fields >> extra)) {
      bad_line(source, line_no, "expected '<query_id> 0 <doc_id> <grade>'");
    }
    int g = 0;
    if (!parse_number(grade, g)) bad_line(source, line_no, "invalid grade '" + grade + "'");
    qrels[query][doc] = g;
  }
  return qrels;
}

Qrels read_qrels(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_qrels(in, path.string());
}

void export_features(const std::vector<RankingInstance>& instances, std::ostream& out) {
  if (instances.empty()) return;
  const auto dim = instances.front().features.size();
  char buf[64];
  for (const auto& inst : instances) {
    if (inst.features.size() != dim) {
      throw ValidationError("export_features: inconsistent feature dimensions");
    }
    out << inst.grade << " qid:" << inst.query_id;
    for (Eigen::Index i = 0; i < dim; ++i) {
      std::snprintf(buf, sizeof(buf), "%.6g", inst.features[i]);
      out << ' ' << (i + 1) << ':' << buf;
    }
    out << " # " << inst.doc_id << '\n';
  }
  if (!out) throw IoError("feature export failed");
}

std::vector<RankingInstance> read_features(std::istream& in, const std::string& source) {
  std::vector<RankingInstance> out;
  std::string line;
  long line_no = 0;
  Eigen::Index dim = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto hash = line.find('#');
    if (hash == std::string::npos) bad_line(source, line_no, "missing '# <doc_id>' comment");
    RankingInstance inst;
    std::istringstream comment(line.substr(hash + 1));
    if (!(comment >> inst.doc_id)) bad_line(source, line_no, "missing doc id");

    std::istringstream fields(line.substr(0, hash));
    std::string grade, qid, token;
    if (!(fields >> grade >> qid) || !parse_number(grade, inst.grade) || qid.rfind("qid:", 0) != 0) {
      bad_line(source, line_no, "expected '<grade> qid:<query_id>'");
    }
    inst.query_id = qid.substr(4);
    std::vector<double> values;
    while (fields >> token) {
      const auto colon = token.find(':');
      long index = 0;
      double value = 0.0;
      if (colon == std::string::npos || !parse_number(token.substr(0, colon), index) ||
          !parse_number(token.substr(colon + 1), value)) {
        bad_line(source, line_no, "invalid feature '" + token + "'");
      }
      if (index != static_cast<long>(values.size()) + 1) {
        bad_line(source, line_no, "features must be dense and 1-indexed in order");
      }
      values.push_back(value);
    }
    if (dim < 0) dim = static_cast<Eigen::Index>(values.size());
    if (static_cast<Eigen::Index>(values.size()) != dim) {
      bad_line(source, line_no, "inconsistent feature dimension");
    }
    inst.features = Eigen::Map<const Vector>(values.data(), dim);
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<RankingInstance> read_features(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_features(in, path.string());
}

}  // namespace kesm
