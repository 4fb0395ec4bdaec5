#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "socrec/core.hpp"
#include "socrec/text_index.hpp"

namespace socrec {

struct Recommendation {
    std::string item;
    double score = 0.0; // finite, > 0
    int rank = 0;       // 1-based

    bool operator==(const Recommendation&) const = default;
};

// The three per-field item indexes consumed by the content recommenders:
// C_t queries titles, C_d descriptions, C_st the combined field.
struct ItemIndexes {
    InvertedIndex title;
    InvertedIndex description;
    InvertedIndex combined;
};

ItemIndexes build_item_indexes(const Dataset& dataset);

// Neighborhood parameter for the user-based CF variants.
struct KnnParams {
    std::size_t neighborhood = 20;
};

enum class CfFeature { Purchases, Likes, Comments, Groups, Interests };

// Cosine over binary feature-incidence sets: |Fu ∩ Fv| / sqrt(|Fu|·|Fv|),
// 0 when either set is empty.
double cf_similarity(CfFeature source, const std::string& u, const std::string& v,
                     const Dataset& train);

// w(u,v) / sqrt(W(u)·W(v)) over the undirected interaction graph; 0 when
// the users never interacted.
double interaction_similarity(const std::string& u, const std::string& v,
                              const Dataset& train);

struct Neighbor {
    std::string user;
    double similarity = 0.0;
};

// Top-n users by the variant's similarity, positive similarities only,
// ordered by similarity desc then user id asc. The target user is excluded.
using NeighborSet = std::vector<Neighbor>;

NeighborSet knn_neighbors(AlgorithmId cf_variant, const std::string& user,
                          const Dataset& train, const KnnParams& params = {});

std::vector<Recommendation> most_popular(const Dataset& train, const std::string& user,
                                         std::size_t k);

std::vector<Recommendation> knn_recommend(AlgorithmId cf_variant, const std::string& user,
                                          const Dataset& train, std::size_t k,
                                          const KnnParams& params = {});

// Term-frequency profile: C_t/C_d concatenate the tokenized titles or
// descriptions of the user's training purchases, C_st the user's stream
// posts.
TermVector content_profile(AlgorithmId content_variant, const std::string& user,
                           const Dataset& train);

std::vector<Recommendation> content_recommend(AlgorithmId content_variant,
                                              const std::string& user,
                                              const Dataset& train,
                                              const ItemIndexes& indexes, std::size_t k,
                                              const MltParams& params = {});

struct HybridComponent {
    AlgorithmId id;
    double weight = 0.0;
};

// Component ids must be non-hybrid; at least one weight must be positive.
// Weights need not sum to one (renormalized at use).
struct HybridConfig {
    std::vector<HybridComponent> components;
};

HybridConfig marketplace_hybrid_config(); // CF_p, C_t, C_d, equal weights
HybridConfig social_hybrid_config();      // CF_in, CF_l, CF_c, CF_g, CF_i, C_st

// Weighted fusion of pre-computed component lists: each list's scores are
// min-max normalized over that list (single-item and constant lists
// normalize to 1.0), weights are renormalized to sum one, and items with a
// fused score of zero are dropped.
std::vector<Recommendation>
fuse_component_lists(const std::vector<std::vector<Recommendation>>& lists,
                     const std::vector<double>& weights, std::size_t k);

std::vector<Recommendation> hybrid_recommend(const HybridConfig& config,
                                             const std::string& user,
                                             const Dataset& train,
                                             const ItemIndexes& indexes, std::size_t k,
                                             const KnnParams& knn = {},
                                             const MltParams& mlt = {});

// Dispatch on any of the twelve algorithm ids.
std::vector<Recommendation> recommend(AlgorithmId id, const std::string& user,
                                      const Dataset& train, const ItemIndexes& indexes,
                                      std::size_t k, const KnnParams& knn = {},
                                      const MltParams& mlt = {});

struct EmptyValidation : std::runtime_error {
    EmptyValidation();
};

// Exhaustive grid search over component weights in {0, step, 2·step, …, 1},
// maximizing mean nDCG@k on the validation split. Ties resolve to the
// lexicographically smallest weight tuple; the all-zero tuple is skipped.
HybridConfig tune_weights(const HybridConfig& config, const Dataset& validation_train,
                          const std::map<std::string, std::set<std::string>>& validation_tests,
                          const ItemIndexes& indexes, std::size_t k,
                          double grid_step = 0.25);

// Grid enumeration used by tune_weights, exposed for inspection: all weight
// tuples over {0, step, …, 1} in lexicographic order (including all-zero).
std::vector<std::vector<double>> enumerate_weight_grid(std::size_t component_count,
                                                       double grid_step = 0.25);

} // namespace socrec
