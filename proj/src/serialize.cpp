#include "socrec/serialize.hpp"

#include <algorithm>
#include <array>
#include <cstdio>

namespace socrec {

std::string format_number(double value) {
    std::array<char, 64> buffer{};
    int len = std::snprintf(buffer.data(), buffer.size(), "%.6f", value);
    std::string out(buffer.data(), static_cast<std::size_t>(len));
    auto dot = out.find('.');
    if (dot != std::string::npos) {
        auto last = out.find_last_not_of('0');
        out.erase(last == dot ? dot : last + 1);
    }
    if (out == "-0") out = "0";
    return out;
}

std::string json_escape(const std::string& value) {
    std::string out;
    out.reserve(value.size() + 2);
    out.push_back('"');
    for (char c : value) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    std::array<char, 8> hex{};
                    std::snprintf(hex.data(), hex.size(), "\\u%04x",
                                  static_cast<unsigned>(static_cast<unsigned char>(c)));
                    out += hex.data();
                } else {
                    out.push_back(c);
                }
        }
    }
    out.push_back('"');
    return out;
}

std::string recommendations_to_json(const std::vector<Recommendation>& recommendations) {
    std::string out = "[";
    for (std::size_t i = 0; i < recommendations.size(); ++i) {
        const auto& rec = recommendations[i];
        if (i > 0) out.push_back(',');
        out += "{\"item\":" + json_escape(rec.item) +
               ",\"score\":" + format_number(rec.score) +
               ",\"rank\":" + std::to_string(rec.rank) + "}";
    }
    out.push_back(']');
    return out;
}

std::string report_to_json(const EvaluationReport& report) {
    std::string out = "{\"k\":" + std::to_string(report.k) +
                      ",\"evaluated_user_count\":" +
                      std::to_string(report.evaluated_user_count) + ",\"algorithms\":[";
    for (std::size_t i = 0; i < report.algorithms.size(); ++i) {
        const auto& [id, metrics] = report.algorithms[i];
        if (i > 0) out.push_back(',');
        out += "{\"algorithm\":" + json_escape(to_string(id)) +
               ",\"precision_at_k\":" + format_number(metrics.precision_at_k) +
               ",\"recall_at_k\":" + format_number(metrics.recall_at_k) +
               ",\"ndcg_at_k\":" + format_number(metrics.ndcg_at_k) +
               ",\"user_coverage\":" + format_number(metrics.user_coverage) +
               ",\"mean_runtime_ms\":" + format_number(metrics.mean_runtime_ms) + "}";
    }
    out += "]}";
    return out;
}

std::string sweep_to_tsv(const SweepSeries& series) {
    struct Row {
        std::string algorithm;
        std::string metric;
        double value;
    };
    std::string out = "condition\talgorithm\tmetric\tvalue\n";
    for (const auto& condition : series.conditions) {
        std::vector<Row> rows;
        rows.reserve(condition.report.algorithms.size() * 4);
        for (const auto& [id, metrics] : condition.report.algorithms) {
            const auto& name = to_string(id);
            rows.push_back({name, "ndcg", metrics.ndcg_at_k});
            rows.push_back({name, "precision", metrics.precision_at_k});
            rows.push_back({name, "recall", metrics.recall_at_k});
            rows.push_back({name, "user_coverage", metrics.user_coverage});
        }
        std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
            if (a.algorithm != b.algorithm) return a.algorithm < b.algorithm;
            return a.metric < b.metric;
        });
        std::string label = format_number(condition.label);
        for (const auto& row : rows) {
            out += label + '\t' + row.algorithm + '\t' + row.metric + '\t' +
                   format_number(row.value) + '\n';
        }
    }
    return out;
}

} // namespace socrec
