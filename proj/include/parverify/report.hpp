// Copyright 2026 The parverify Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PARVERIFY_REPORT_HPP_
#define PARVERIFY_REPORT_HPP_

#include <cstdint>
#include <cstdio>
#include <string>

#include "json.hpp"
#include "parverify/corpus.hpp"
#include "parverify/metrics.hpp"
#include "parverify/snapshot.hpp"

namespace parverify {

inline std::string HexFingerprint(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct ModelInfo {
  std::string source;  // file path or "bundled"
  const ModelSnapshot* snapshot = nullptr;
};

inline nlohmann::json ModelJson(const ModelInfo& info) {
  const PpmModel& m = info.snapshot->model();
  return {{"source", info.source},
          {"fingerprint", HexFingerprint(info.snapshot->fingerprint())},
          {"order", m.max_order()},
          {"alphabet_size", m.alphabet_size()},
          {"symbols_trained", m.symbols_seen()}};
}

inline nlohmann::json ThresholdJson(const ThresholdConfig& t) {
  return {{"theta_slr", t.theta_slr}, {"theta_cr", t.theta_cr}};
}

inline nlohmann::json FilterReportJson(const FilterReport& report,
                                       const ThresholdConfig& thresholds,
                                       const ModelInfo& model_a, const ModelInfo& model_e,
                                       const ScoreOptions& options) {
  nlohmann::json categories = nlohmann::json::object();
  for (const auto& [name, c] : report.per_category) {
    categories[name] = {
        {"accepted", c.accepted}, {"rejected", c.rejected}, {"invalid", c.invalid}};
  }
  return {
      {"thresholds", ThresholdJson(thresholds)},
      {"models", {{"arabic", ModelJson(model_a)}, {"english", ModelJson(model_e)}}},
      {"transforms",
       {{"arabic", TransformName(options.transform_a)},
        {"english", TransformName(options.transform_e)}}},
      {"adapt", options.adapt},
      {"counts",
       {{"total", report.accepted_count + report.rejected_count + report.invalid_count},
        {"accepted", report.accepted_count},
        {"rejected", report.rejected_count},
        {"invalid", report.invalid_count}}},
      {"percentages",
       {{"accepted", report.accepted_pct}, {"rejected", report.rejected_pct}}},
      {"categories", categories},
  };
}

}  // namespace parverify

#endif  // PARVERIFY_REPORT_HPP_
