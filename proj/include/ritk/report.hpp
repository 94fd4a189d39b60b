#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ritk/norms.hpp"
#include "ritk/young.hpp"

namespace ritk {

/// One experiment result row.  Wall time is tracked but excluded from the
/// CSV/JSON payload so repeated runs are byte-identical.
struct ReportRecord {
  std::string id;
  std::string config_hash;
  std::string inputs;
  std::vector<std::pair<std::string, double>> metrics;  // emission order
  std::string verdict;
  bool pass = true;
  double wall_ms = 0.0;
};

inline constexpr int kCsvFormatVersion = 1;

/// FNV-1a (64-bit) of the canonical (key-sorted) JSON dump, as 16 hex chars.
std::string config_hash(const nlohmann::json& config);

std::string to_csv(const std::vector<ReportRecord>& rows);
nlohmann::json to_json(const std::vector<ReportRecord>& rows);

/// {variant: "power_log"|"power_loglog"|"exponential", p, r, b?} or
/// {variant: "tabulated", grid: [[t, a], ...]}.  Unknown keys rejected.
YoungPtr young_from_json(const nlohmann::json& j);

/// {kind, p?, q?, r?, rho?, L?, young?}; kind in {lebesgue, lorentz,
/// lorentz_double_star, lorentz_zygmund, lorentz_zygmund_double_star,
/// generalized_lz, orlicz, orlicz_lorentz, sum_l1_linf, intersection_linf_ol}.
NormSpec norm_spec_from_json(const nlohmann::json& j);

std::vector<ReportRecord> run_conjugate_table(const nlohmann::json& config,
                                              uint64_t seed);
std::vector<ReportRecord> run_reduction_study(const nlohmann::json& config,
                                              uint64_t seed);
std::vector<ReportRecord> run_field_study(const nlohmann::json& config, uint64_t seed);
std::vector<ReportRecord> run_kfunctional_study(const nlohmann::json& config,
                                                uint64_t seed);

/// Full config: sections {conjugates, reductions, fields, kfunctionals};
/// unknown sections rejected.  Rows are ordered by section then entry.
std::vector<ReportRecord> run_report(const nlohmann::json& config, uint64_t seed);

nlohmann::json default_report_config();

}  // namespace ritk
