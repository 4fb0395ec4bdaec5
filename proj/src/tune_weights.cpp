#include <cmath>
#include <set>

#include "socrec/evaluation.hpp"
#include "socrec/recommenders.hpp"

namespace socrec {

EmptyValidation::EmptyValidation() : std::runtime_error("empty validation split") {}

std::vector<std::vector<double>> enumerate_weight_grid(std::size_t component_count,
                                                       double grid_step) {
    if (component_count == 0) {
        throw std::invalid_argument("enumerate_weight_grid: no components");
    }
    if (grid_step <= 0.0 || grid_step > 1.0) {
        throw std::invalid_argument("enumerate_weight_grid: step must be in (0, 1]");
    }
    const auto levels = static_cast<std::size_t>(std::llround(1.0 / grid_step)) + 1;
    std::vector<std::vector<double>> grid;
    std::vector<std::size_t> odometer(component_count, 0);
    while (true) {
        std::vector<double> tuple(component_count);
        for (std::size_t i = 0; i < component_count; ++i) {
            tuple[i] = std::min(1.0, static_cast<double>(odometer[i]) * grid_step);
        }
        grid.push_back(std::move(tuple));
        std::size_t pos = component_count;
        while (pos > 0) {
            --pos;
            if (++odometer[pos] < levels) break;
            odometer[pos] = 0;
            if (pos == 0) return grid;
        }
    }
}

HybridConfig tune_weights(const HybridConfig& config, const Dataset& validation_train,
                          const std::map<std::string, std::set<std::string>>& validation_tests,
                          const ItemIndexes& indexes, std::size_t k, double grid_step) {
    if (config.components.empty()) {
        throw std::invalid_argument("tune_weights: config has no components");
    }
    for (const auto& component : config.components) {
        if (is_hybrid(component.id)) {
            throw std::invalid_argument("tune_weights: nested hybrid component: " +
                                        to_string(component.id));
        }
    }
    if (validation_tests.empty()) {
        throw EmptyValidation();
    }

    // Component lists do not depend on the weights; compute them once.
    std::vector<std::vector<std::vector<Recommendation>>> lists_by_user;
    std::vector<const std::set<std::string>*> relevant_by_user;
    lists_by_user.reserve(validation_tests.size());
    relevant_by_user.reserve(validation_tests.size());
    for (const auto& [user, relevant] : validation_tests) {
        std::vector<std::vector<Recommendation>> lists;
        lists.reserve(config.components.size());
        for (const auto& component : config.components) {
            lists.push_back(recommend(component.id, user, validation_train, indexes, k));
        }
        lists_by_user.push_back(std::move(lists));
        relevant_by_user.push_back(&relevant);
    }

    // Proportional tuples fuse identically, so candidates are renormalized
    // to sum one and deduplicated before evaluation. Candidates run in
    // lexicographic order with strict improvement, which makes ties resolve
    // to the lexicographically smallest tuple.
    std::set<std::vector<double>> candidates;
    for (const auto& tuple : enumerate_weight_grid(config.components.size(), grid_step)) {
        double total = 0.0;
        for (double w : tuple) total += w;
        if (total <= 0.0) continue;
        std::vector<double> canonical(tuple.size());
        for (std::size_t i = 0; i < tuple.size(); ++i) {
            canonical[i] = tuple[i] / total;
        }
        candidates.insert(std::move(canonical));
    }

    double best_score = -1.0;
    std::vector<double> best_weights(config.components.size(), 0.0);
    for (const auto& tuple : candidates) {
        double ndcg_sum = 0.0;
        for (std::size_t u = 0; u < lists_by_user.size(); ++u) {
            auto fused = fuse_component_lists(lists_by_user[u], tuple, k);
            std::vector<std::string> items;
            items.reserve(fused.size());
            for (const auto& rec : fused) {
                items.push_back(rec.item);
            }
            ndcg_sum += ndcg_at_k(items, *relevant_by_user[u], k);
        }
        double mean = ndcg_sum / static_cast<double>(lists_by_user.size());
        if (mean > best_score) {
            best_score = mean;
            best_weights = tuple;
        }
    }

    HybridConfig tuned = config;
    for (std::size_t i = 0; i < tuned.components.size(); ++i) {
        tuned.components[i].weight = best_weights[i];
    }
    return tuned;
}

} // namespace socrec
