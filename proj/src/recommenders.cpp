#include "socrec/recommenders.hpp"

#include <algorithm>
#include <cmath>

namespace socrec {

namespace {

std::size_t shared_count(const std::set<std::string>& a, const std::set<std::string>& b) {
    std::size_t count = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++count;
            ++ia;
            ++ib;
        }
    }
    return count;
}

const std::set<std::string>& feature_set(CfFeature source, const std::string& user,
                                         const Dataset& train) {
    switch (source) {
        case CfFeature::Purchases: return train.purchased_items(user);
        case CfFeature::Likes: return train.liked_items(user);
        case CfFeature::Comments: return train.commented_items(user);
        case CfFeature::Groups: return train.groups_of(user);
        case CfFeature::Interests: return train.interests_of(user);
    }
    return train.purchased_items(user); // unreachable
}

const std::set<std::string>& reverse_lookup(CfFeature source, const std::string& key,
                                            const Dataset& train) {
    switch (source) {
        case CfFeature::Purchases: return train.purchasers_of(key);
        case CfFeature::Likes: return train.likers_of(key);
        case CfFeature::Comments: return train.commenters_of(key);
        case CfFeature::Groups: return train.group_members(key);
        case CfFeature::Interests: return train.interested_users(key);
    }
    return train.purchasers_of(key); // unreachable
}

bool cf_feature_of(AlgorithmId id, CfFeature& out) {
    switch (id) {
        case AlgorithmId::PurchaseCf: out = CfFeature::Purchases; return true;
        case AlgorithmId::LikeCf: out = CfFeature::Likes; return true;
        case AlgorithmId::CommentCf: out = CfFeature::Comments; return true;
        case AlgorithmId::GroupCf: out = CfFeature::Groups; return true;
        case AlgorithmId::InterestCf: out = CfFeature::Interests; return true;
        default: return false;
    }
}

// Ranks a score map into a recommendation list: score desc, item asc, top-k.
std::vector<Recommendation> rank_scores(const std::map<std::string, double>& scores,
                                        std::size_t k) {
    std::vector<Recommendation> result;
    result.reserve(scores.size());
    for (const auto& [item, score] : scores) {
        if (score > 0.0) {
            result.push_back({item, score, 0});
        }
    }
    std::sort(result.begin(), result.end(), [](const auto& a, const auto& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.item < b.item;
    });
    if (result.size() > k) result.resize(k);
    for (std::size_t i = 0; i < result.size(); ++i) {
        result[i].rank = static_cast<int>(i) + 1;
    }
    return result;
}

} // namespace

ItemIndexes build_item_indexes(const Dataset& dataset) {
    std::vector<std::pair<std::string, FieldText>> docs;
    docs.reserve(dataset.items().size());
    for (const auto& [id, item] : dataset.items()) {
        FieldText fields;
        fields["title"] = item.title;
        fields["description"] = item.description;
        fields["combined"] = item.title + " " + item.description;
        docs.emplace_back(id, std::move(fields));
    }
    auto indexes = index_documents(docs);
    ItemIndexes result;
    result.title = indexes.count("title") ? std::move(indexes["title"]) : InvertedIndex("title");
    result.description = indexes.count("description") ? std::move(indexes["description"])
                                                      : InvertedIndex("description");
    result.combined = indexes.count("combined") ? std::move(indexes["combined"])
                                                : InvertedIndex("combined");
    return result;
}

double cf_similarity(CfFeature source, const std::string& u, const std::string& v,
                     const Dataset& train) {
    const auto& fu = feature_set(source, u, train);
    const auto& fv = feature_set(source, v, train);
    if (fu.empty() || fv.empty()) return 0.0;
    std::size_t shared = shared_count(fu, fv);
    if (shared == 0) return 0.0;
    return static_cast<double>(shared) /
           std::sqrt(static_cast<double>(fu.size()) * static_cast<double>(fv.size()));
}

double interaction_similarity(const std::string& u, const std::string& v,
                              const Dataset& train) {
    const auto& neighbors = train.interaction_neighbors(u);
    auto it = neighbors.find(v);
    if (it == neighbors.end()) return 0.0;
    double wu = static_cast<double>(train.interaction_weight_total(u));
    double wv = static_cast<double>(train.interaction_weight_total(v));
    return static_cast<double>(it->second) / std::sqrt(wu * wv);
}

NeighborSet knn_neighbors(AlgorithmId cf_variant, const std::string& user,
                          const Dataset& train, const KnnParams& params) {
    NeighborSet neighbors;
    if (cf_variant == AlgorithmId::InteractionCf) {
        for (const auto& [other, _] : train.interaction_neighbors(user)) {
            double sim = interaction_similarity(user, other, train);
            if (sim > 0.0) neighbors.push_back({other, sim});
        }
    } else {
        CfFeature source;
        if (!cf_feature_of(cf_variant, source)) {
            throw std::invalid_argument("knn_neighbors: not a CF variant: " +
                                        to_string(cf_variant));
        }
        // Candidates are exactly the users sharing at least one feature key.
        std::set<std::string> candidates;
        for (const auto& key : feature_set(source, user, train)) {
            const auto& holders = reverse_lookup(source, key, train);
            candidates.insert(holders.begin(), holders.end());
        }
        candidates.erase(user);
        for (const auto& other : candidates) {
            double sim = cf_similarity(source, user, other, train);
            if (sim > 0.0) neighbors.push_back({other, sim});
        }
    }
    std::sort(neighbors.begin(), neighbors.end(), [](const auto& a, const auto& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        return a.user < b.user;
    });
    if (neighbors.size() > params.neighborhood) {
        neighbors.resize(params.neighborhood);
    }
    return neighbors;
}

std::vector<Recommendation> most_popular(const Dataset& train, const std::string& user,
                                         std::size_t k) {
    if (k == 0) return {};
    const auto& popularity = train.popularity_cache([&] {
        std::vector<std::pair<std::string, std::string>> pairs;
        pairs.reserve(train.purchases().size());
        for (const auto& p : train.purchases()) {
            pairs.emplace_back(p.item, p.user);
        }
        return facet_count(pairs);
    });
    const auto& owned = train.purchased_items(user);
    std::vector<Recommendation> result;
    for (const auto& [item, count] : popularity) {
        if (owned.count(item)) continue;
        result.push_back({item, static_cast<double>(count), static_cast<int>(result.size()) + 1});
        if (result.size() == k) break;
    }
    return result;
}

std::vector<Recommendation> knn_recommend(AlgorithmId cf_variant, const std::string& user,
                                          const Dataset& train, std::size_t k,
                                          const KnnParams& params) {
    if (k == 0) return {};
    NeighborSet neighbors = knn_neighbors(cf_variant, user, train, params);
    if (neighbors.empty()) return {};

    // Scores accumulate in ascending neighbor id order (determinism contract).
    std::sort(neighbors.begin(), neighbors.end(),
              [](const auto& a, const auto& b) { return a.user < b.user; });
    const auto& owned = train.purchased_items(user);
    std::map<std::string, double> scores;
    for (const auto& neighbor : neighbors) {
        for (const auto& item : train.purchased_items(neighbor.user)) {
            if (owned.count(item)) continue;
            scores[item] += neighbor.similarity;
        }
    }
    return rank_scores(scores, k);
}

TermVector content_profile(AlgorithmId content_variant, const std::string& user,
                           const Dataset& train) {
    TermVector profile;
    auto add_tokens = [&](const std::string& text) {
        for (const auto& token : tokenize(text)) {
            profile[token] += 1.0;
        }
    };
    switch (content_variant) {
        case AlgorithmId::TitleContent:
            for (const auto& p : train.purchases_of(user)) {
                add_tokens(train.items().at(p.item).title);
            }
            break;
        case AlgorithmId::DescriptionContent:
            for (const auto& p : train.purchases_of(user)) {
                add_tokens(train.items().at(p.item).description);
            }
            break;
        case AlgorithmId::StreamContent:
            for (const auto& text : train.stream_texts_of(user)) {
                add_tokens(text);
            }
            break;
        default:
            throw std::invalid_argument("content_profile: not a content variant: " +
                                        to_string(content_variant));
    }
    return profile;
}

std::vector<Recommendation> content_recommend(AlgorithmId content_variant,
                                              const std::string& user,
                                              const Dataset& train,
                                              const ItemIndexes& indexes, std::size_t k,
                                              const MltParams& params) {
    if (k == 0) return {};
    TermVector profile = content_profile(content_variant, user, train);
    if (profile.empty()) return {};

    const InvertedIndex* index = nullptr;
    switch (content_variant) {
        case AlgorithmId::TitleContent: index = &indexes.title; break;
        case AlgorithmId::DescriptionContent: index = &indexes.description; break;
        case AlgorithmId::StreamContent: index = &indexes.combined; break;
        default:
            throw std::invalid_argument("content_recommend: not a content variant: " +
                                        to_string(content_variant));
    }

    const auto& owned = train.purchased_items(user);
    // Over-fetch so owned items can be filtered without losing result slots.
    std::size_t fetch = k + owned.size();
    auto hits = more_like_this(profile, *index, fetch, params);
    std::vector<Recommendation> result;
    for (const auto& [doc, score] : hits) {
        if (owned.count(doc)) continue;
        result.push_back({doc, score, static_cast<int>(result.size()) + 1});
        if (result.size() == k) break;
    }
    return result;
}

HybridConfig marketplace_hybrid_config() {
    return {{{AlgorithmId::PurchaseCf, 1.0},
             {AlgorithmId::TitleContent, 1.0},
             {AlgorithmId::DescriptionContent, 1.0}}};
}

HybridConfig social_hybrid_config() {
    return {{{AlgorithmId::InteractionCf, 1.0},
             {AlgorithmId::LikeCf, 1.0},
             {AlgorithmId::CommentCf, 1.0},
             {AlgorithmId::GroupCf, 1.0},
             {AlgorithmId::InterestCf, 1.0},
             {AlgorithmId::StreamContent, 1.0}}};
}

std::vector<Recommendation>
fuse_component_lists(const std::vector<std::vector<Recommendation>>& lists,
                     const std::vector<double>& weights, std::size_t k) {
    if (lists.size() != weights.size()) {
        throw std::invalid_argument("fuse_component_lists: list/weight size mismatch");
    }
    double total_weight = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("fuse_component_lists: negative weight");
        total_weight += w;
    }
    if (total_weight <= 0.0) {
        throw std::invalid_argument("fuse_component_lists: all weights zero");
    }

    std::map<std::string, double> fused;
    for (std::size_t c = 0; c < lists.size(); ++c) {
        const auto& list = lists[c];
        if (list.empty()) continue;
        double weight = weights[c] / total_weight;
        double max = list.front().score;
        double min = list.back().score;
        for (const auto& rec : list) {
            double norm = max > min ? (rec.score - min) / (max - min) : 1.0;
            fused[rec.item] += weight * norm;
        }
    }
    return rank_scores(fused, k);
}

namespace {

void validate_hybrid_config(const HybridConfig& config) {
    if (config.components.empty()) {
        throw std::invalid_argument("hybrid config has no components");
    }
    bool any_positive = false;
    for (const auto& component : config.components) {
        if (is_hybrid(component.id)) {
            throw std::invalid_argument("hybrid config nests hybrid component: " +
                                        to_string(component.id));
        }
        if (component.weight < 0.0) {
            throw std::invalid_argument("hybrid config has negative weight");
        }
        any_positive = any_positive || component.weight > 0.0;
    }
    if (!any_positive) {
        throw std::invalid_argument("hybrid config has no positive weight");
    }
}

} // namespace

std::vector<Recommendation> hybrid_recommend(const HybridConfig& config,
                                             const std::string& user,
                                             const Dataset& train,
                                             const ItemIndexes& indexes, std::size_t k,
                                             const KnnParams& knn, const MltParams& mlt) {
    validate_hybrid_config(config);
    std::vector<std::vector<Recommendation>> lists;
    std::vector<double> weights;
    lists.reserve(config.components.size());
    weights.reserve(config.components.size());
    for (const auto& component : config.components) {
        lists.push_back(recommend(component.id, user, train, indexes, k, knn, mlt));
        weights.push_back(component.weight);
    }
    return fuse_component_lists(lists, weights, k);
}

std::vector<Recommendation> recommend(AlgorithmId id, const std::string& user,
                                      const Dataset& train, const ItemIndexes& indexes,
                                      std::size_t k, const KnnParams& knn,
                                      const MltParams& mlt) {
    switch (id) {
        case AlgorithmId::MostPopular:
            return most_popular(train, user, k);
        case AlgorithmId::PurchaseCf:
        case AlgorithmId::LikeCf:
        case AlgorithmId::CommentCf:
        case AlgorithmId::InteractionCf:
        case AlgorithmId::GroupCf:
        case AlgorithmId::InterestCf:
            return knn_recommend(id, user, train, k, knn);
        case AlgorithmId::TitleContent:
        case AlgorithmId::DescriptionContent:
        case AlgorithmId::StreamContent:
            return content_recommend(id, user, train, indexes, k, mlt);
        case AlgorithmId::MarketplaceHybrid:
            return hybrid_recommend(marketplace_hybrid_config(), user, train, indexes, k,
                                    knn, mlt);
        case AlgorithmId::SocialHybrid:
            return hybrid_recommend(social_hybrid_config(), user, train, indexes, k, knn,
                                    mlt);
    }
    return {};
}

} // namespace socrec
