#pragma once

#include <string>
#include <vector>

#include "socrec/evaluation.hpp"
#include "socrec/recommenders.hpp"

namespace socrec {

// Fixed-point rendering with up to six decimal digits and no exponent;
// trailing zeros are trimmed. Shared by every serialized surface so that
// equal values always produce equal bytes.
std::string format_number(double value);

std::string json_escape(const std::string& value);

// [{"item":…,"score":…,"rank":…}, …]
std::string recommendations_to_json(const std::vector<Recommendation>& recommendations);

// {"k":…,"evaluated_user_count":…,"algorithms":[{"algorithm":…,
//  "precision_at_k":…,"recall_at_k":…,"ndcg_at_k":…,"user_coverage":…,
//  "mean_runtime_ms":…}, …]}
std::string report_to_json(const EvaluationReport& report);

// Header condition\talgorithm\tmetric\tvalue; one row per condition,
// algorithm and quality metric (ndcg, precision, recall, user_coverage),
// sorted by (condition, algorithm, metric).
std::string sweep_to_tsv(const SweepSeries& series);

} // namespace socrec
