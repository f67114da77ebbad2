#pragma once

#include <string>

#include "nesyv/system.hpp"

namespace nesyv {

// CSV with the table's per-sample fields:
//   sample_id,status,lower_correct,upper_correct,runtime_s
// plus exact-method columns when `exact` is supplied.
std::string report_csv(const VerificationReport& report, const VerificationReport* exact = nullptr);

// Machine-readable JSON document (aggregate + per-sample entries).
// `include_runtimes=false` drops every timing field; reruns with fixed
// seeds are byte-identical in that form.
std::string report_json(const VerificationReport& report, const QuerySpec& query,
                        const std::string& method, bool include_runtimes = true);

// One console row per epsilon: robustness %, mean bounds (clamped to [0,1]
// for display only), mean runtime.
std::string report_summary_row(double eps, const VerificationReport& report);

} // namespace nesyv
