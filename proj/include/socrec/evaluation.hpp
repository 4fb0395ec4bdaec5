#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "socrec/core.hpp"
#include "socrec/recommenders.hpp"

namespace socrec {

// ---------------------------------------------------------------------------
// Rank metrics (binary relevance)
// ---------------------------------------------------------------------------

// |top-k ∩ relevant| / k. Throws std::invalid_argument for k < 1.
double precision_at_k(const std::vector<std::string>& recommended,
                      const std::set<std::string>& relevant, std::size_t k);

// |top-k ∩ relevant| / |relevant|; 0 when relevant is empty.
double recall_at_k(const std::vector<std::string>& recommended,
                   const std::set<std::string>& relevant, std::size_t k);

// DCG with gains 1/log2(i+1), normalized by the ideal ranking over
// min(k, |relevant|) relevant items; 0 when the ideal DCG is 0.
double ndcg_at_k(const std::vector<std::string>& recommended,
                 const std::set<std::string>& relevant, std::size_t k);

// ---------------------------------------------------------------------------
// Train/test split
// ---------------------------------------------------------------------------

struct SplitSpec {
    std::size_t min_purchases = 2;
    double test_fraction = 0.2;
};

struct NoEvaluableUsers : std::runtime_error {
    NoEvaluableUsers();
};

struct InsufficientPool : std::runtime_error {
    InsufficientPool(std::size_t pool, std::size_t required);
};

struct EmptySample : std::runtime_error {
    EmptySample();
};

using TestSets = std::map<std::string, std::set<std::string>>;

struct TrainTestSplit {
    Dataset train;
    TestSets test_sets;
};

// Temporal holdout: per user with at least min_purchases purchase events,
// the ceil(test_fraction * count) most recent events (timestamp ties broken
// by item id asc) form the test set; everything else, including all social
// records and items, stays in train. The policy is deterministic; the seed
// parameter is kept for interface stability and is unused.
TrainTestSplit split_train_test(const Dataset& dataset, const SplitSpec& spec,
                                std::uint64_t seed);

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

struct AlgorithmMetrics {
    double precision_at_k = 0.0;
    double recall_at_k = 0.0;
    double ndcg_at_k = 0.0;
    double user_coverage = 0.0;
    double mean_runtime_ms = 0.0;
};

struct EvaluationReport {
    std::size_t k = 0;
    std::size_t evaluated_user_count = 0;
    std::vector<std::pair<AlgorithmId, AlgorithmMetrics>> algorithms;
};

struct EvaluateOptions {
    std::size_t k = 10;
    // Wall-clock timing is opt-in: it forces the sequential path and makes
    // the report content non-deterministic, so the batch/service surfaces
    // leave it off.
    bool measure_runtime = false;
    bool parallel = true;
};

// Runs every algorithm for every test user. Rank metrics average over all
// evaluated users with empty lists contributing zero; user coverage is the
// exact covered/evaluated ratio. The per-user loop fans out with OpenMP
// unless options disable it; parallel and serial paths produce identical
// reports.
EvaluationReport evaluate(const std::vector<AlgorithmId>& algorithms,
                          const Dataset& train, const TestSets& test_sets,
                          const ItemIndexes& indexes,
                          const EvaluateOptions& options = {});

// ---------------------------------------------------------------------------
// Experiment sweeps
// ---------------------------------------------------------------------------

struct SweepCondition {
    double label = 0.0;
    EvaluationReport report;
};

struct SweepSeries {
    std::vector<SweepCondition> conditions;
};

// Experiment 1: profile replacement. Takes the pool B of users having both
// marketplace and social data and, for replacement fractions 0.0, 0.1, …,
// 1.0, swaps a seeded-random prefix of B for marketplace-only users, then
// splits and evaluates all twelve algorithms on the swapped population.
// The condition label is the measured fraction of users without social
// data. Throws InsufficientPool when there are fewer marketplace-only
// users than |B|.
SweepSeries run_profile_sweep(const Dataset& dataset, const SplitSpec& spec,
                              std::uint64_t seed, std::size_t k);

// Experiment 2: cold start. Restricts to users having both marketplace and
// social data, shuffles them once with the seed, and evaluates nested
// prefixes of 10%, 20%, …, 100% of that population.
SweepSeries run_coldstart_sweep(const Dataset& dataset, const SplitSpec& spec,
                                std::uint64_t seed, std::size_t k);

// Mean wall-clock milliseconds of a single top-10 recommendation call over
// users × repetitions, warm index, strictly sequential.
double measure_runtime(AlgorithmId algorithm, const Dataset& train,
                       const ItemIndexes& indexes, const std::vector<std::string>& users,
                       std::size_t repetitions = 3);

// ---------------------------------------------------------------------------
// Synthetic data
// ---------------------------------------------------------------------------

struct SyntheticParams {
    std::size_t user_count = 1000;
    std::size_t item_count = 500;
    std::size_t community_count = 10;
    std::size_t purchases_per_user = 5;
    double social_fraction = 0.5;
};

// Planted-community generator: users and items are assigned round-robin to
// communities, purchases draw 80/20 from the community's preferred items
// versus the global pool, and the first social_fraction of users receive
// likes, comments, intra-community interactions, stream posts, a community
// group and community interest terms. Fully deterministic per seed.
Dataset generate_synthetic(const SyntheticParams& params, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Population helpers
// ---------------------------------------------------------------------------

// Keeps all items plus the records belonging to the given users;
// interactions survive only when both endpoints are kept.
Dataset restrict_dataset(const Dataset& dataset, const std::set<std::string>& users);

std::set<std::string> users_with_marketplace_and_social(const Dataset& dataset);
std::set<std::string> users_with_marketplace_only(const Dataset& dataset);

} // namespace socrec
