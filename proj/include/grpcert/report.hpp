#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace grpcert {

enum class CheckStatus { kPass, kFail, kObservation };
std::string to_string(CheckStatus s);

// One verified fact inside a report. Failures always carry a witness.
struct Check {
  std::string name;
  CheckStatus status = CheckStatus::kPass;
  nlohmann::json witness;  // may be null for passes
};

// Resolved run configuration; flags override the GRPCERT_THREADS environment
// variable, which overrides the defaults.
struct RunConfig {
  int threads = 0;  // 0 = resolve from env / hardware
  int subgroup_order_cap = 3125;
  int degree_bound = 0;   // 0 = derived per command (2 p^2 for amalgams)
  int cocycle_bound = 1;
  bool sweep_all_q = false;
  bool sweep_injections = false;
  std::string output_path;
  std::string format = "text";  // text | json

  int resolved_threads() const;
  nlohmann::json to_json() const;
};

// A structured, serializable record of a claim, the group, the checks
// performed, and witnesses for failures.
class VerificationReport {
 public:
  VerificationReport(std::string claim_id, std::string group_label)
      : claim_(std::move(claim_id)), group_(std::move(group_label)) {}

  void set_parameter(const std::string& key, const nlohmann::json& value) {
    parameters_[key] = value;
  }
  void add_pass(const std::string& name,
                const nlohmann::json& detail = nullptr);
  void add_fail(const std::string& name, const nlohmann::json& witness);
  void add_observation(const std::string& name,
                       const nlohmann::json& detail = nullptr);
  void merge(const VerificationReport& other, const std::string& prefix);

  const std::string& claim() const { return claim_; }
  const std::string& group_label() const { return group_; }
  const std::vector<Check>& checks() const { return checks_; }
  int fail_count() const;
  bool all_passed() const { return fail_count() == 0; }
  void set_timing_ms(double ms) { timing_ms_ = ms; }

  // Deterministic document: sorted keys, checks sorted by name, a stable
  // digest over everything except the timing block.
  nlohmann::json to_json(const RunConfig& config) const;

 private:
  std::string claim_;
  std::string group_;
  nlohmann::json parameters_ = nlohmann::json::object();
  std::vector<Check> checks_;
  double timing_ms_ = 0.0;
};

// Serializes and writes the report; returns the serialized document.
// Identical inputs produce identical bytes outside the timing block.
std::string emit_report(const VerificationReport& report,
                        const RunConfig& config);

}  // namespace grpcert
