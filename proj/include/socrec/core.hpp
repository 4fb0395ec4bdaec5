#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace socrec {

// ---------------------------------------------------------------------------
// Marketplace records
// ---------------------------------------------------------------------------

struct Item {
    std::string id;
    std::string title;
    std::string description;

    bool operator==(const Item&) const = default;
};

struct PurchaseEvent {
    std::string user;
    std::string item;
    std::int64_t timestamp = 0; // seconds since epoch, >= 0

    bool operator==(const PurchaseEvent&) const = default;
};

// ---------------------------------------------------------------------------
// Social records
// ---------------------------------------------------------------------------

struct Like {
    std::string user;
    std::string item;
    bool operator==(const Like&) const = default;
};

struct Comment {
    std::string user;
    std::string item;
    std::string text; // stored but not consumed by any algorithm
    bool operator==(const Comment&) const = default;
};

// Stored undirected: user_a < user_b lexicographically, weights of both
// directions summed during dataset construction.
struct Interaction {
    std::string user_a;
    std::string user_b;
    std::int64_t weight = 1;
    bool operator==(const Interaction&) const = default;
};

struct StreamPost {
    std::string user;
    std::string text;
    bool operator==(const StreamPost&) const = default;
};

struct GroupMembership {
    std::string user;
    std::string group;
    bool operator==(const GroupMembership&) const = default;
};

struct Interest {
    std::string user;
    std::string term;
    bool operator==(const Interest&) const = default;
};

using SocialRecord =
    std::variant<Like, Comment, Interaction, StreamPost, GroupMembership, Interest>;

// ---------------------------------------------------------------------------
// Algorithm identifiers
// ---------------------------------------------------------------------------

// The twelve recommenders. Wire tokens (CLI, routes, reports) are fixed
// strings: MP, CF_p, CF_l, CF_c, CF_in, CF_g, CF_i, C_t, C_d, C_st,
// CCF_m, CCF_s.
enum class AlgorithmId {
    MostPopular,
    PurchaseCf,
    LikeCf,
    CommentCf,
    InteractionCf,
    GroupCf,
    InterestCf,
    TitleContent,
    DescriptionContent,
    StreamContent,
    MarketplaceHybrid,
    SocialHybrid,
};

inline constexpr std::array<AlgorithmId, 12> kAllAlgorithms = {
    AlgorithmId::MostPopular,       AlgorithmId::PurchaseCf,
    AlgorithmId::LikeCf,            AlgorithmId::CommentCf,
    AlgorithmId::InteractionCf,     AlgorithmId::GroupCf,
    AlgorithmId::InterestCf,        AlgorithmId::TitleContent,
    AlgorithmId::DescriptionContent, AlgorithmId::StreamContent,
    AlgorithmId::MarketplaceHybrid, AlgorithmId::SocialHybrid,
};

const std::string& to_string(AlgorithmId id);
std::optional<AlgorithmId> parse_algorithm_id(std::string_view token);
bool is_hybrid(AlgorithmId id);

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct DatasetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DuplicateItemId : DatasetError {
    explicit DuplicateItemId(std::string id);
    std::string id;
};

struct DanglingReference : DatasetError {
    DanglingReference(std::string record_kind, std::string item_id);
    std::string record_kind;
    std::string item_id;
};

// ---------------------------------------------------------------------------
// Dataset
// ---------------------------------------------------------------------------

// Immutable after construction; safe to share read-only across threads.
// All record collections are kept in a canonical sort order so that equal
// record multisets produce equal datasets regardless of input order.
class Dataset {
  public:
    Dataset() = default;

    const std::map<std::string, Item>& items() const { return items_; }
    const std::vector<PurchaseEvent>& purchases() const { return purchases_; }
    const std::vector<Like>& likes() const { return likes_; }
    const std::vector<Comment>& comments() const { return comments_; }
    const std::vector<Interaction>& interactions() const { return interactions_; }
    const std::vector<StreamPost>& stream_posts() const { return stream_posts_; }
    const std::vector<GroupMembership>& groups() const { return groups_; }
    const std::vector<Interest>& interests() const { return interests_; }

    // Every user id appearing in any record.
    const std::set<std::string>& users() const { return users_; }

    // Per-user views. All return empty collections for unknown users.
    const std::vector<PurchaseEvent>& purchases_of(const std::string& user) const;
    const std::set<std::string>& purchased_items(const std::string& user) const;
    const std::set<std::string>& liked_items(const std::string& user) const;
    const std::set<std::string>& commented_items(const std::string& user) const;
    const std::set<std::string>& groups_of(const std::string& user) const;
    const std::set<std::string>& interests_of(const std::string& user) const;
    const std::vector<std::string>& stream_texts_of(const std::string& user) const;
    // neighbor -> summed undirected weight
    const std::map<std::string, std::int64_t>& interaction_neighbors(const std::string& user) const;
    std::int64_t interaction_weight_total(const std::string& user) const;

    // Reverse feature maps (empty set for unknown keys).
    const std::set<std::string>& purchasers_of(const std::string& item) const;
    const std::set<std::string>& likers_of(const std::string& item) const;
    const std::set<std::string>& commenters_of(const std::string& item) const;
    const std::set<std::string>& group_members(const std::string& group) const;
    const std::set<std::string>& interested_users(const std::string& term) const;

    bool has_marketplace_data(const std::string& user) const;
    bool has_social_data(const std::string& user) const;

    // Lazily computed derived data (e.g. the purchase popularity facet).
    // The compute function runs at most once; the result is cached and
    // shared by copies of this dataset.
    template <class F>
    const std::vector<std::pair<std::string, std::uint64_t>>& popularity_cache(F&& compute) const {
        auto cache = popularity_;
        std::call_once(cache->once, [&] { cache->ranking = compute(); });
        return cache->ranking;
    }

    // Record-level equality (derived structures follow from the records).
    bool operator==(const Dataset& other) const;

  private:
    friend Dataset build_dataset(std::vector<Item> items,
                                 std::vector<PurchaseEvent> purchases,
                                 std::vector<SocialRecord> social);
    void build_derived();

    std::map<std::string, Item> items_;
    std::vector<PurchaseEvent> purchases_;
    std::vector<Like> likes_;
    std::vector<Comment> comments_;
    std::vector<Interaction> interactions_; // canonical, merged, sorted
    std::vector<StreamPost> stream_posts_;
    std::vector<GroupMembership> groups_;
    std::vector<Interest> interests_;

    std::set<std::string> users_;
    std::map<std::string, std::vector<PurchaseEvent>> purchases_by_user_;
    std::map<std::string, std::set<std::string>> purchased_items_by_user_;
    std::map<std::string, std::set<std::string>> liked_items_by_user_;
    std::map<std::string, std::set<std::string>> commented_items_by_user_;
    std::map<std::string, std::set<std::string>> groups_by_user_;
    std::map<std::string, std::set<std::string>> interests_by_user_;
    std::map<std::string, std::vector<std::string>> stream_texts_by_user_;
    std::map<std::string, std::map<std::string, std::int64_t>> interaction_adjacency_;
    std::map<std::string, std::int64_t> interaction_totals_;

    std::map<std::string, std::set<std::string>> purchasers_by_item_;
    std::map<std::string, std::set<std::string>> likers_by_item_;
    std::map<std::string, std::set<std::string>> commenters_by_item_;
    std::map<std::string, std::set<std::string>> members_by_group_;
    std::map<std::string, std::set<std::string>> users_by_interest_;

    std::set<std::string> users_with_social_;

    struct PopularityCache {
        std::once_flag once;
        std::vector<std::pair<std::string, std::uint64_t>> ranking;
    };
    std::shared_ptr<PopularityCache> popularity_ = std::make_shared<PopularityCache>();
};

// Validates and canonicalizes the input records into a Dataset.
//
// Throws DuplicateItemId for repeated item ids, DanglingReference when a
// purchase, like or comment names an item that is not in `items`, and
// DatasetError for malformed records (empty ids, negative timestamps,
// non-positive interaction weights, self-interactions).
Dataset build_dataset(std::vector<Item> items,
                      std::vector<PurchaseEvent> purchases,
                      std::vector<SocialRecord> social);

} // namespace socrec
