#include "grpcert/report.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include "grpcert/errors.hpp"

namespace grpcert {

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::kPass:
      return "pass";
    case CheckStatus::kFail:
      return "fail";
    case CheckStatus::kObservation:
      return "observation";
  }
  return "?";
}

int RunConfig::resolved_threads() const {
  if (threads > 0) return threads;
  if (const char* env = std::getenv("GRPCERT_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

nlohmann::json RunConfig::to_json() const {
  return {{"threads", resolved_threads()},
          {"subgroup_order_cap", subgroup_order_cap},
          {"degree_bound", degree_bound},
          {"cocycle_bound", cocycle_bound},
          {"sweep_all_q", sweep_all_q},
          {"sweep_injections", sweep_injections},
          {"format", format}};
}

void VerificationReport::add_pass(const std::string& name,
                                  const nlohmann::json& detail) {
  checks_.push_back({name, CheckStatus::kPass, detail});
}

void VerificationReport::add_fail(const std::string& name,
                                  const nlohmann::json& witness) {
  if (witness.is_null())
    throw Error("a failing check must carry a witness: " + name);
  checks_.push_back({name, CheckStatus::kFail, witness});
}

void VerificationReport::add_observation(const std::string& name,
                                         const nlohmann::json& detail) {
  checks_.push_back({name, CheckStatus::kObservation, detail});
}

void VerificationReport::merge(const VerificationReport& other,
                               const std::string& prefix) {
  for (const Check& c : other.checks_)
    checks_.push_back({prefix + c.name, c.status, c.witness});
}

int VerificationReport::fail_count() const {
  int n = 0;
  for (const Check& c : checks_)
    if (c.status == CheckStatus::kFail) ++n;
  return n;
}

namespace {

// FNV-1a over the serialized report body.
std::string digest_hex(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

nlohmann::json VerificationReport::to_json(const RunConfig& config) const {
  std::vector<Check> sorted = checks_;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Check& a, const Check& b) { return a.name < b.name; });
  nlohmann::json checks = nlohmann::json::array();
  int pass = 0, fail = 0, obs = 0;
  for (const Check& c : sorted) {
    nlohmann::json entry = {{"name", c.name}, {"status", to_string(c.status)}};
    if (!c.witness.is_null()) entry["witness"] = c.witness;
    checks.push_back(std::move(entry));
    switch (c.status) {
      case CheckStatus::kPass: ++pass; break;
      case CheckStatus::kFail: ++fail; break;
      case CheckStatus::kObservation: ++obs; break;
    }
  }
  nlohmann::json doc = {
      {"schema_version", 1},
      {"claim", claim_},
      {"group", group_},
      {"parameters", parameters_},
      {"config", config.to_json()},
      {"checks", checks},
      {"summary",
       {{"pass", pass}, {"fail", fail}, {"observation", obs}}},
  };
  doc["stable_digest"] = digest_hex(doc.dump());
  doc["timing"] = {{"total_ms", timing_ms_}};
  return doc;
}

std::string emit_report(const VerificationReport& report,
                        const RunConfig& config) {
  std::string body = report.to_json(config).dump(2) + "\n";
  if (!config.output_path.empty()) {
    std::ofstream out(config.output_path);
    if (!out) throw IoError("cannot open report path: " + config.output_path);
    out << body;
    if (!out) throw IoError("failed writing report to: " + config.output_path);
  }
  return body;
}

}  // namespace grpcert
