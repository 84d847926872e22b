#include "brackets/corpus.hpp"

#include <fnmatch.h>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "brackets/errors.hpp"

namespace brackets {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  size_t e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

[[noreturn]] void bad(int line, const std::string& msg) {
  throw Error(ErrorKind::CorpusFormatError, "line " + std::to_string(line) + ": " + msg);
}

void finish(CorpusEntry& e) {
  if (e.specText.empty()) bad(e.line, "entry " + e.id + " has no spec");
  if (e.expected.empty()) bad(e.line, "entry " + e.id + " has no expected value");
  try {
    e.spec = parse_spec(e.specText);
    if (!e.spec.has_all_values()) bad(e.line, "entry " + e.id + " needs values for every parameter");
    expected_value(e);
  } catch (const Error& err) {
    if (err.kind() == ErrorKind::CorpusFormatError) throw;
    bad(e.line, "entry " + e.id + ": " + err.what());
  }
}

std::string fmt(long double v) {
  std::ostringstream os;
  os << std::setprecision(15) << static_cast<double>(v);
  return os.str();
}

}  // namespace

const char* corpus_status_name(CorpusStatus s) {
  switch (s) {
    case CorpusStatus::Pass: return "PASS";
    case CorpusStatus::Fail: return "FAIL";
    case CorpusStatus::MethodFails: return "METHODFAILS";
    case CorpusStatus::Skip: return "SKIP";
  }
  return "?";
}

std::vector<CorpusEntry> parse_corpus(const std::string& text) {
  std::vector<CorpusEntry> out;
  std::set<std::string> ids;
  std::istringstream in(text);
  std::string raw;
  int lineNo = 0;
  CorpusEntry* cur = nullptr;
  while (std::getline(in, raw)) {
    ++lineNo;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    size_t colon = line.find(':');
    if (colon == std::string::npos) bad(lineNo, "expected 'field: value'");
    std::string key = trim(line.substr(0, colon));
    std::string value = trim(line.substr(colon + 1));
    if (key == "id") {
      if (cur) finish(*cur);
      if (value.empty()) bad(lineNo, "empty id");
      if (!ids.insert(value).second) bad(lineNo, "duplicate id " + value);
      out.emplace_back();
      cur = &out.back();
      cur->id = value;
      cur->line = lineNo;
      continue;
    }
    if (!cur) bad(lineNo, "field before the first id");
    if (key == "spec") {
      cur->specText += (cur->specText.empty() ? "" : "\n") + value;
    } else if (key == "expected") {
      cur->expected = value;
    } else if (key == "tol") {
      try {
        cur->tolerance = std::stold(value);
      } catch (const std::exception&) {
        bad(lineNo, "bad tolerance '" + value + "'");
      }
      if (!(cur->tolerance > 0)) bad(lineNo, "tolerance must be positive");
    } else if (key == "tags") {
      std::istringstream ts(value);
      std::string t;
      while (std::getline(ts, t, ',')) {
        t = trim(t);
        if (t.empty()) continue;
        if (t != "exact" && t != "numeric" && t != "soft") bad(lineNo, "unknown tag '" + t + "'");
        cur->tags.insert(t);
      }
    } else if (key == "source") {
      cur->source = value;
    } else {
      bad(lineNo, "unknown field '" + key + "'");
    }
  }
  if (cur) finish(*cur);
  return out;
}

long double expected_value(const CorpusEntry& entry) {
  const std::string& e = entry.expected;
  if (e.rfind("gp ", 0) == 0) {
    GammaProduct g = parse_gamma_product(e.substr(3));
    PointValue v = gp_eval(g, entry.spec.real_point());
    if (!v.finite()) throw Error(ErrorKind::CorpusFormatError, "expected value is singular");
    return v.value;
  }
  try {
    size_t used = 0;
    long double v = std::stold(e, &used);
    if (trim(e.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::CorpusFormatError, "expected must be a number or 'gp <product>': " + e);
}

CorpusResult run_entry(const CorpusEntry& entry) {
  CorpusResult r;
  r.id = entry.id;
  auto start = std::chrono::steady_clock::now();
  try {
    r.expected = expected_value(entry);
    EvalOptions opt;
    opt.tol = entry.tolerance;
    EvalReport rep = run_pipeline(entry.spec, opt);
    r.report = rep.text();
    r.value = rep.value;
    if (rep.oracle) r.oracle = rep.oracle->value;
    if (rep.methodFails || !rep.value) {
      r.status = CorpusStatus::MethodFails;
      r.detail = rep.failure.empty() ? "no value" : rep.failure;
    } else {
      long double diff = std::fabs(*rep.value - *r.expected);
      std::vector<std::string> problems;
      if (!(diff <= entry.tolerance))
        problems.push_back("|value - expected| = " + fmt(diff) + " > " + fmt(entry.tolerance));
      if (!rep.verdict)
        problems.push_back("no oracle verdict");
      else if (!rep.verdict->pass)
        problems.push_back("oracle disagrees by " + fmt(rep.verdict->difference));
      if (entry.tags.count("exact")) {
        if (!rep.closedForm) {
          problems.push_back("no closed form");
        } else if (entry.expected.rfind("gp ", 0) == 0) {
          GammaProduct want = parse_gamma_product(entry.expected.substr(3));
          std::map<std::string, AffineForm> at;
          for (const auto& [k, v] : entry.spec.values) at[k] = AffineForm(v);
          if (!rep.closedForm->is_gamma_product() ||
              rep.closedForm->terms[0].coeff.substitute(at) != want.substitute(at))
            problems.push_back("closed form " + rep.closedForm->str() + " differs from " + want.str());
        }
      }
      r.status = problems.empty() ? CorpusStatus::Pass : CorpusStatus::Fail;
      for (size_t i = 0; i < problems.size(); ++i) r.detail += (i ? "; " : "") + problems[i];
    }
  } catch (const Error& e) {
    r.status = e.kind() == ErrorKind::MethodFails ? CorpusStatus::MethodFails : CorpusStatus::Fail;
    r.detail = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

CorpusSummary run_corpus(const std::vector<CorpusEntry>& entries, const std::string& filter, int jobs) {
  auto start = std::chrono::steady_clock::now();
  std::vector<const CorpusEntry*> chosen;
  for (const auto& e : entries)
    if (filter.empty() || fnmatch(filter.c_str(), e.id.c_str(), 0) == 0) chosen.push_back(&e);
  CorpusSummary s;
  s.results.resize(chosen.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next++; i < chosen.size(); i = next++) s.results[i] = run_entry(*chosen[i]);
  };
  int n = std::max(1, std::min<int>(jobs, static_cast<int>(chosen.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& r : s.results) {
    switch (r.status) {
      case CorpusStatus::Pass: ++s.passed; break;
      case CorpusStatus::Fail: ++s.failed; break;
      case CorpusStatus::MethodFails: ++s.methodFails; break;
      case CorpusStatus::Skip: ++s.skipped; break;
    }
  }
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return s;
}

CorpusSummary run_corpus_file(const std::string& path, const std::string& filter, int jobs) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::CorpusFormatError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return run_corpus(parse_corpus(ss.str()), filter, jobs);
}

std::string CorpusSummary::text() const {
  std::ostringstream os;
  for (const auto& r : results) {
    os << std::left << std::setw(12) << corpus_status_name(r.status) << std::setw(16) << r.id;
    if (r.value) os << " value " << fmt(*r.value);
    if (r.expected) os << " expected " << fmt(*r.expected);
    os << " (" << std::fixed << std::setprecision(3) << r.seconds << " s)";
    os.unsetf(std::ios::fixed);
    if (!r.detail.empty()) os << " " << r.detail;
    os << "\n";
  }
  os << results.size() << " entries: " << passed << " passed, " << failed << " failed, " << methodFails
     << " method failures, " << skipped << " skipped\n";
  return os.str();
}

std::string CorpusSummary::json() const {
  nlohmann::ordered_json j;
  nlohmann::ordered_json rs = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    nlohmann::ordered_json e;
    e["id"] = r.id;
    e["status"] = corpus_status_name(r.status);
    e["value"] = r.value ? nlohmann::ordered_json(static_cast<double>(*r.value)) : nlohmann::ordered_json();
    e["expected"] = r.expected ? nlohmann::ordered_json(static_cast<double>(*r.expected)) : nlohmann::ordered_json();
    e["oracle"] = r.oracle ? nlohmann::ordered_json(static_cast<double>(*r.oracle)) : nlohmann::ordered_json();
    e["seconds"] = r.seconds;
    e["detail"] = r.detail;
    rs.push_back(e);
  }
  j["entries"] = rs;
  j["passed"] = passed;
  j["failed"] = failed;
  j["method_fails"] = methodFails;
  j["skipped"] = skipped;
  j["seconds"] = seconds;
  return j.dump(2);
}

}  // namespace brackets
