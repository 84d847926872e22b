#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "brackets/pipeline.hpp"

namespace brackets {

struct CorpusEntry {
  std::string id;
  std::string specText;
  IntegrandSpec spec;
  // Either a number or "gp <gamma product>" in the spec parameters.
  std::string expected;
  long double tolerance = 1e-8;
  std::set<std::string> tags;  // exact | numeric | soft
  std::string source;
  int line = 0;
};

// Records start at an `id:` line; fields are `spec`, `expected`, `tol`, `tags`, `source`.
std::vector<CorpusEntry> parse_corpus(const std::string& text);

// Numeric value of an expected field at the entry's parameter values.
long double expected_value(const CorpusEntry& entry);

enum class CorpusStatus { Pass, Fail, MethodFails, Skip };
const char* corpus_status_name(CorpusStatus s);

struct CorpusResult {
  std::string id;
  CorpusStatus status = CorpusStatus::Skip;
  std::string detail;
  std::optional<long double> value;
  std::optional<long double> expected;
  std::optional<long double> oracle;
  double seconds = 0;
  std::string report;
};

struct CorpusSummary {
  std::vector<CorpusResult> results;
  int passed = 0, failed = 0, methodFails = 0, skipped = 0;
  double seconds = 0;

  std::string json() const;
  std::string text() const;
};

CorpusResult run_entry(const CorpusEntry& entry);

// Entries whose id matches the glob (all when empty), `jobs` at a time; results keep file order.
CorpusSummary run_corpus(const std::vector<CorpusEntry>& entries, const std::string& filter = "", int jobs = 1);
CorpusSummary run_corpus_file(const std::string& path, const std::string& filter = "", int jobs = 1);

}  // namespace brackets
