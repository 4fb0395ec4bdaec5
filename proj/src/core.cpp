#include "socrec/core.hpp"

#include <algorithm>
#include <tuple>
#include <utility>

namespace socrec {

namespace {

const std::array<std::string, 12> kAlgorithmTokens = {
    "MP",   "CF_p", "CF_l", "CF_c",  "CF_in", "CF_g",
    "CF_i", "C_t",  "C_d",  "C_st", "CCF_m", "CCF_s",
};

const std::vector<PurchaseEvent> kNoPurchases;
const std::set<std::string> kNoIds;
const std::vector<std::string> kNoTexts;
const std::map<std::string, std::int64_t> kNoNeighbors;

template <class K, class V>
const V& find_or(const std::map<K, V>& m, const K& key, const V& fallback) {
    auto it = m.find(key);
    return it == m.end() ? fallback : it->second;
}

} // namespace

const std::string& to_string(AlgorithmId id) {
    return kAlgorithmTokens[static_cast<std::size_t>(id)];
}

std::optional<AlgorithmId> parse_algorithm_id(std::string_view token) {
    for (std::size_t i = 0; i < kAlgorithmTokens.size(); ++i) {
        if (kAlgorithmTokens[i] == token) {
            return static_cast<AlgorithmId>(i);
        }
    }
    return std::nullopt;
}

bool is_hybrid(AlgorithmId id) {
    return id == AlgorithmId::MarketplaceHybrid || id == AlgorithmId::SocialHybrid;
}

DuplicateItemId::DuplicateItemId(std::string id_in)
    : DatasetError("duplicate item id: " + id_in), id(std::move(id_in)) {}

DanglingReference::DanglingReference(std::string kind, std::string item)
    : DatasetError(kind + " references unknown item: " + item),
      record_kind(std::move(kind)),
      item_id(std::move(item)) {}

const std::vector<PurchaseEvent>& Dataset::purchases_of(const std::string& user) const {
    return find_or(purchases_by_user_, user, kNoPurchases);
}

const std::set<std::string>& Dataset::purchased_items(const std::string& user) const {
    return find_or(purchased_items_by_user_, user, kNoIds);
}

const std::set<std::string>& Dataset::liked_items(const std::string& user) const {
    return find_or(liked_items_by_user_, user, kNoIds);
}

const std::set<std::string>& Dataset::commented_items(const std::string& user) const {
    return find_or(commented_items_by_user_, user, kNoIds);
}

const std::set<std::string>& Dataset::groups_of(const std::string& user) const {
    return find_or(groups_by_user_, user, kNoIds);
}

const std::set<std::string>& Dataset::interests_of(const std::string& user) const {
    return find_or(interests_by_user_, user, kNoIds);
}

const std::vector<std::string>& Dataset::stream_texts_of(const std::string& user) const {
    return find_or(stream_texts_by_user_, user, kNoTexts);
}

const std::map<std::string, std::int64_t>&
Dataset::interaction_neighbors(const std::string& user) const {
    return find_or(interaction_adjacency_, user, kNoNeighbors);
}

std::int64_t Dataset::interaction_weight_total(const std::string& user) const {
    auto it = interaction_totals_.find(user);
    return it == interaction_totals_.end() ? 0 : it->second;
}

const std::set<std::string>& Dataset::purchasers_of(const std::string& item) const {
    return find_or(purchasers_by_item_, item, kNoIds);
}

const std::set<std::string>& Dataset::likers_of(const std::string& item) const {
    return find_or(likers_by_item_, item, kNoIds);
}

const std::set<std::string>& Dataset::commenters_of(const std::string& item) const {
    return find_or(commenters_by_item_, item, kNoIds);
}

const std::set<std::string>& Dataset::group_members(const std::string& group) const {
    return find_or(members_by_group_, group, kNoIds);
}

const std::set<std::string>& Dataset::interested_users(const std::string& term) const {
    return find_or(users_by_interest_, term, kNoIds);
}

bool Dataset::has_marketplace_data(const std::string& user) const {
    return purchases_by_user_.count(user) > 0;
}

bool Dataset::has_social_data(const std::string& user) const {
    return users_with_social_.count(user) > 0;
}

bool Dataset::operator==(const Dataset& other) const {
    return items_ == other.items_ && purchases_ == other.purchases_ &&
           likes_ == other.likes_ && comments_ == other.comments_ &&
           interactions_ == other.interactions_ &&
           stream_posts_ == other.stream_posts_ && groups_ == other.groups_ &&
           interests_ == other.interests_;
}

void Dataset::build_derived() {
    for (const auto& p : purchases_) {
        users_.insert(p.user);
        purchases_by_user_[p.user].push_back(p);
        purchased_items_by_user_[p.user].insert(p.item);
        purchasers_by_item_[p.item].insert(p.user);
    }
    for (const auto& l : likes_) {
        users_.insert(l.user);
        users_with_social_.insert(l.user);
        liked_items_by_user_[l.user].insert(l.item);
        likers_by_item_[l.item].insert(l.user);
    }
    for (const auto& c : comments_) {
        users_.insert(c.user);
        users_with_social_.insert(c.user);
        commented_items_by_user_[c.user].insert(c.item);
        commenters_by_item_[c.item].insert(c.user);
    }
    for (const auto& in : interactions_) {
        users_.insert(in.user_a);
        users_.insert(in.user_b);
        users_with_social_.insert(in.user_a);
        users_with_social_.insert(in.user_b);
        interaction_adjacency_[in.user_a][in.user_b] += in.weight;
        interaction_adjacency_[in.user_b][in.user_a] += in.weight;
        interaction_totals_[in.user_a] += in.weight;
        interaction_totals_[in.user_b] += in.weight;
    }
    for (const auto& s : stream_posts_) {
        users_.insert(s.user);
        users_with_social_.insert(s.user);
        stream_texts_by_user_[s.user].push_back(s.text);
    }
    for (const auto& g : groups_) {
        users_.insert(g.user);
        users_with_social_.insert(g.user);
        groups_by_user_[g.user].insert(g.group);
        members_by_group_[g.group].insert(g.user);
    }
    for (const auto& i : interests_) {
        users_.insert(i.user);
        users_with_social_.insert(i.user);
        interests_by_user_[i.user].insert(i.term);
        users_by_interest_[i.term].insert(i.user);
    }
}

Dataset build_dataset(std::vector<Item> items,
                      std::vector<PurchaseEvent> purchases,
                      std::vector<SocialRecord> social) {
    Dataset ds;

    for (auto& item : items) {
        if (item.id.empty()) {
            throw DatasetError("item with empty id");
        }
        auto [it, inserted] = ds.items_.emplace(item.id, std::move(item));
        if (!inserted) {
            throw DuplicateItemId(it->first);
        }
    }

    auto require_item = [&](const std::string& kind, const std::string& id) {
        if (ds.items_.find(id) == ds.items_.end()) {
            throw DanglingReference(kind, id);
        }
    };
    auto require_user = [](const std::string& kind, const std::string& id) {
        if (id.empty()) {
            throw DatasetError(kind + " with empty user id");
        }
    };

    for (auto& p : purchases) {
        require_user("purchase", p.user);
        require_item("purchase", p.item);
        if (p.timestamp < 0) {
            throw DatasetError("purchase with negative timestamp");
        }
        ds.purchases_.push_back(std::move(p));
    }

    std::map<std::pair<std::string, std::string>, std::int64_t> merged_interactions;
    for (auto& record : social) {
        std::visit(
            [&](auto&& rec) {
                using T = std::decay_t<decltype(rec)>;
                if constexpr (std::is_same_v<T, Like>) {
                    require_user("like", rec.user);
                    require_item("like", rec.item);
                    ds.likes_.push_back(std::move(rec));
                } else if constexpr (std::is_same_v<T, Comment>) {
                    require_user("comment", rec.user);
                    require_item("comment", rec.item);
                    ds.comments_.push_back(std::move(rec));
                } else if constexpr (std::is_same_v<T, Interaction>) {
                    require_user("interaction", rec.user_a);
                    require_user("interaction", rec.user_b);
                    if (rec.user_a == rec.user_b) {
                        throw DatasetError("interaction between a user and itself");
                    }
                    if (rec.weight < 1) {
                        throw DatasetError("interaction with non-positive weight");
                    }
                    auto key = rec.user_a < rec.user_b
                                   ? std::make_pair(rec.user_a, rec.user_b)
                                   : std::make_pair(rec.user_b, rec.user_a);
                    merged_interactions[std::move(key)] += rec.weight;
                } else if constexpr (std::is_same_v<T, StreamPost>) {
                    require_user("stream", rec.user);
                    ds.stream_posts_.push_back(std::move(rec));
                } else if constexpr (std::is_same_v<T, GroupMembership>) {
                    require_user("group", rec.user);
                    if (rec.group.empty()) {
                        throw DatasetError("group membership with empty group id");
                    }
                    ds.groups_.push_back(std::move(rec));
                } else if constexpr (std::is_same_v<T, Interest>) {
                    require_user("interest", rec.user);
                    ds.interests_.push_back(std::move(rec));
                }
            },
            std::move(record));
    }

    ds.interactions_.reserve(merged_interactions.size());
    for (auto& [key, weight] : merged_interactions) {
        ds.interactions_.push_back(Interaction{key.first, key.second, weight});
    }

    // Canonical order: equal record multisets yield equal datasets.
    auto by = [](auto proj) {
        return [proj](const auto& a, const auto& b) { return proj(a) < proj(b); };
    };
    std::sort(ds.purchases_.begin(), ds.purchases_.end(), by([](const PurchaseEvent& p) {
                  return std::tie(p.user, p.timestamp, p.item);
              }));
    std::sort(ds.likes_.begin(), ds.likes_.end(),
              by([](const Like& l) { return std::tie(l.user, l.item); }));
    std::sort(ds.comments_.begin(), ds.comments_.end(), by([](const Comment& c) {
                  return std::tie(c.user, c.item, c.text);
              }));
    std::sort(ds.stream_posts_.begin(), ds.stream_posts_.end(),
              by([](const StreamPost& s) { return std::tie(s.user, s.text); }));
    std::sort(ds.groups_.begin(), ds.groups_.end(),
              by([](const GroupMembership& g) { return std::tie(g.user, g.group); }));
    std::sort(ds.interests_.begin(), ds.interests_.end(),
              by([](const Interest& i) { return std::tie(i.user, i.term); }));

    ds.build_derived();
    return ds;
}

} // namespace socrec
