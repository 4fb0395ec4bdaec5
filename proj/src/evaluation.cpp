#include "socrec/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "socrec/rng.hpp"

namespace socrec {

namespace {

double log2d(double x) { return std::log2(x); }

std::size_t overlap_at_k(const std::vector<std::string>& recommended,
                         const std::set<std::string>& relevant, std::size_t k) {
    std::size_t hits = 0;
    std::size_t limit = std::min(k, recommended.size());
    for (std::size_t i = 0; i < limit; ++i) {
        if (relevant.count(recommended[i])) ++hits;
    }
    return hits;
}

} // namespace

double precision_at_k(const std::vector<std::string>& recommended,
                      const std::set<std::string>& relevant, std::size_t k) {
    if (k < 1) throw std::invalid_argument("precision_at_k: k must be >= 1");
    return static_cast<double>(overlap_at_k(recommended, relevant, k)) /
           static_cast<double>(k);
}

double recall_at_k(const std::vector<std::string>& recommended,
                   const std::set<std::string>& relevant, std::size_t k) {
    if (k < 1) throw std::invalid_argument("recall_at_k: k must be >= 1");
    if (relevant.empty()) return 0.0;
    return static_cast<double>(overlap_at_k(recommended, relevant, k)) /
           static_cast<double>(relevant.size());
}

double ndcg_at_k(const std::vector<std::string>& recommended,
                 const std::set<std::string>& relevant, std::size_t k) {
    if (k < 1) throw std::invalid_argument("ndcg_at_k: k must be >= 1");
    double dcg = 0.0;
    std::size_t limit = std::min(k, recommended.size());
    for (std::size_t i = 0; i < limit; ++i) {
        if (relevant.count(recommended[i])) {
            dcg += 1.0 / log2d(static_cast<double>(i) + 2.0);
        }
    }
    double ideal = 0.0;
    std::size_t ideal_len = std::min(k, relevant.size());
    for (std::size_t i = 0; i < ideal_len; ++i) {
        ideal += 1.0 / log2d(static_cast<double>(i) + 2.0);
    }
    if (ideal == 0.0) return 0.0;
    return dcg / ideal;
}

NoEvaluableUsers::NoEvaluableUsers()
    : std::runtime_error("no user meets the minimum purchase count") {}

InsufficientPool::InsufficientPool(std::size_t pool, std::size_t required)
    : std::runtime_error("marketplace-only pool has " + std::to_string(pool) +
                         " users, need " + std::to_string(required)) {}

EmptySample::EmptySample() : std::runtime_error("empty user sample") {}

// ---------------------------------------------------------------------------
// Split
// ---------------------------------------------------------------------------

namespace {

std::vector<Item> collect_items(const Dataset& dataset) {
    std::vector<Item> items;
    items.reserve(dataset.items().size());
    for (const auto& [_, item] : dataset.items()) {
        items.push_back(item);
    }
    return items;
}

template <class UserPred>
std::vector<SocialRecord> collect_social(const Dataset& dataset, UserPred keep) {
    std::vector<SocialRecord> social;
    for (const auto& l : dataset.likes()) {
        if (keep(l.user)) social.emplace_back(l);
    }
    for (const auto& c : dataset.comments()) {
        if (keep(c.user)) social.emplace_back(c);
    }
    for (const auto& in : dataset.interactions()) {
        if (keep(in.user_a) && keep(in.user_b)) social.emplace_back(in);
    }
    for (const auto& s : dataset.stream_posts()) {
        if (keep(s.user)) social.emplace_back(s);
    }
    for (const auto& g : dataset.groups()) {
        if (keep(g.user)) social.emplace_back(g);
    }
    for (const auto& i : dataset.interests()) {
        if (keep(i.user)) social.emplace_back(i);
    }
    return social;
}

} // namespace

TrainTestSplit split_train_test(const Dataset& dataset, const SplitSpec& spec,
                                std::uint64_t /*seed*/) {
    if (spec.min_purchases < 2 || spec.test_fraction <= 0.0 || spec.test_fraction >= 1.0) {
        throw std::invalid_argument("invalid split spec");
    }

    // Per user: events ordered most recent first, timestamp ties by item asc.
    std::map<std::string, std::vector<PurchaseEvent>> by_user;
    for (const auto& p : dataset.purchases()) {
        by_user[p.user].push_back(p);
    }

    TestSets test_sets;
    std::vector<PurchaseEvent> train_purchases;
    train_purchases.reserve(dataset.purchases().size());
    for (auto& [user, events] : by_user) {
        if (events.size() < spec.min_purchases) {
            train_purchases.insert(train_purchases.end(), events.begin(), events.end());
            continue;
        }
        std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
            if (a.timestamp != b.timestamp) return a.timestamp > b.timestamp;
            return a.item < b.item;
        });
        auto test_count = static_cast<std::size_t>(
            std::ceil(spec.test_fraction * static_cast<double>(events.size())));
        test_count = std::max<std::size_t>(test_count, 1);
        std::set<std::string> held_out;
        for (std::size_t i = 0; i < test_count; ++i) {
            held_out.insert(events[i].item);
        }
        test_sets.emplace(user, std::move(held_out));
        for (std::size_t i = test_count; i < events.size(); ++i) {
            train_purchases.push_back(events[i]);
        }
    }
    if (test_sets.empty()) {
        throw NoEvaluableUsers();
    }

    Dataset train = build_dataset(collect_items(dataset), std::move(train_purchases),
                                  collect_social(dataset, [](const std::string&) {
                                      return true;
                                  }));
    return {std::move(train), std::move(test_sets)};
}

// ---------------------------------------------------------------------------
// Evaluate
// ---------------------------------------------------------------------------

namespace {

struct PerUserResult {
    double precision = 0.0;
    double recall = 0.0;
    double ndcg = 0.0;
    bool covered = false;
    double runtime_ms = 0.0;
};

PerUserResult evaluate_user(AlgorithmId algorithm, const std::string& user,
                            const std::set<std::string>& relevant, const Dataset& train,
                            const ItemIndexes& indexes, std::size_t k, bool timed) {
    PerUserResult result;
    std::vector<Recommendation> recs;
    if (timed) {
        auto start = std::chrono::steady_clock::now();
        recs = recommend(algorithm, user, train, indexes, k);
        auto stop = std::chrono::steady_clock::now();
        result.runtime_ms =
            std::chrono::duration<double, std::milli>(stop - start).count();
    } else {
        recs = recommend(algorithm, user, train, indexes, k);
    }
    std::vector<std::string> items;
    items.reserve(recs.size());
    for (const auto& rec : recs) {
        items.push_back(rec.item);
    }
    result.precision = precision_at_k(items, relevant, k);
    result.recall = recall_at_k(items, relevant, k);
    result.ndcg = ndcg_at_k(items, relevant, k);
    result.covered = !items.empty();
    return result;
}

using UserEntry = std::pair<const std::string*, const std::set<std::string>*>;

// Serial reference path. Kept pragma-free so the OpenMP kernel below can be
// checked against it.
void evaluate_users_serial(AlgorithmId algorithm, const std::vector<UserEntry>& users,
                           const Dataset& train, const ItemIndexes& indexes,
                           std::size_t k, bool timed,
                           std::vector<PerUserResult>& slots) {
    for (std::size_t i = 0; i < users.size(); ++i) {
        slots[i] = evaluate_user(algorithm, *users[i].first, *users[i].second, train,
                                 indexes, k, timed);
    }
}

// OpenMP kernel: each user writes its own slot; the reduction over slots is
// done serially by the caller, so results are identical to the serial path.
void evaluate_users_parallel(AlgorithmId algorithm, const std::vector<UserEntry>& users,
                             const Dataset& train, const ItemIndexes& indexes,
                             std::size_t k, std::vector<PerUserResult>& slots) {
    const auto n = static_cast<std::int64_t>(users.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        slots[idx] = evaluate_user(algorithm, *users[idx].first, *users[idx].second,
                                   train, indexes, k, false);
    }
}

} // namespace

EvaluationReport evaluate(const std::vector<AlgorithmId>& algorithms,
                          const Dataset& train, const TestSets& test_sets,
                          const ItemIndexes& indexes, const EvaluateOptions& options) {
    if (options.k < 1) throw std::invalid_argument("evaluate: k must be >= 1");

    std::vector<UserEntry> users;
    users.reserve(test_sets.size());
    for (const auto& [user, relevant] : test_sets) {
        users.emplace_back(&user, &relevant);
    }

    EvaluationReport report;
    report.k = options.k;
    report.evaluated_user_count = users.size();
    report.algorithms.reserve(algorithms.size());

    std::vector<PerUserResult> slots(users.size());
    for (AlgorithmId algorithm : algorithms) {
        if (options.measure_runtime || !options.parallel) {
            evaluate_users_serial(algorithm, users, train, indexes, options.k,
                                  options.measure_runtime, slots);
        } else {
            evaluate_users_parallel(algorithm, users, train, indexes, options.k, slots);
        }
        AlgorithmMetrics metrics;
        std::size_t covered = 0;
        for (const auto& slot : slots) {
            metrics.precision_at_k += slot.precision;
            metrics.recall_at_k += slot.recall;
            metrics.ndcg_at_k += slot.ndcg;
            metrics.mean_runtime_ms += slot.runtime_ms;
            if (slot.covered) ++covered;
        }
        if (!users.empty()) {
            auto n = static_cast<double>(users.size());
            metrics.precision_at_k /= n;
            metrics.recall_at_k /= n;
            metrics.ndcg_at_k /= n;
            metrics.mean_runtime_ms /= n;
            metrics.user_coverage = static_cast<double>(covered) / n;
        }
        report.algorithms.emplace_back(algorithm, metrics);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Population helpers
// ---------------------------------------------------------------------------

Dataset restrict_dataset(const Dataset& dataset, const std::set<std::string>& users) {
    auto keep = [&users](const std::string& user) { return users.count(user) > 0; };
    std::vector<PurchaseEvent> purchases;
    for (const auto& p : dataset.purchases()) {
        if (keep(p.user)) purchases.push_back(p);
    }
    return build_dataset(collect_items(dataset), std::move(purchases),
                         collect_social(dataset, keep));
}

std::set<std::string> users_with_marketplace_and_social(const Dataset& dataset) {
    std::set<std::string> result;
    for (const auto& user : dataset.users()) {
        if (dataset.has_marketplace_data(user) && dataset.has_social_data(user)) {
            result.insert(user);
        }
    }
    return result;
}

std::set<std::string> users_with_marketplace_only(const Dataset& dataset) {
    std::set<std::string> result;
    for (const auto& user : dataset.users()) {
        if (dataset.has_marketplace_data(user) && !dataset.has_social_data(user)) {
            result.insert(user);
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

namespace {

std::vector<AlgorithmId> all_algorithm_ids() {
    return {kAllAlgorithms.begin(), kAllAlgorithms.end()};
}

} // namespace

SweepSeries run_profile_sweep(const Dataset& dataset, const SplitSpec& spec,
                              std::uint64_t seed, std::size_t k) {
    auto both = users_with_marketplace_and_social(dataset);
    auto marketplace_only = users_with_marketplace_only(dataset);
    if (both.empty()) throw NoEvaluableUsers();
    if (marketplace_only.size() < both.size()) {
        throw InsufficientPool(marketplace_only.size(), both.size());
    }

    std::vector<std::string> replace_order(both.begin(), both.end());
    std::vector<std::string> insert_order(marketplace_only.begin(), marketplace_only.end());
    std::mt19937_64 rng(seed);
    seeded_shuffle(replace_order, rng);
    seeded_shuffle(insert_order, rng);

    // The item corpus never changes across conditions, so the indexes are
    // shared by all of them.
    ItemIndexes indexes = build_item_indexes(dataset);
    auto algorithms = all_algorithm_ids();

    SweepSeries series;
    std::size_t pool = both.size();
    for (std::size_t step = 0; step <= 10; ++step) {
        std::size_t swap_count = (step * pool + 5) / 10; // nearest to step/10 * pool
        std::set<std::string> population(both.begin(), both.end());
        for (std::size_t i = 0; i < swap_count; ++i) {
            population.erase(replace_order[i]);
            population.insert(insert_order[i]);
        }
        Dataset condition = restrict_dataset(dataset, population);
        std::size_t without_social = 0;
        for (const auto& user : condition.users()) {
            if (!condition.has_social_data(user)) ++without_social;
        }
        double label = condition.users().empty()
                           ? 0.0
                           : static_cast<double>(without_social) /
                                 static_cast<double>(condition.users().size());
        // Tiny pools can repeat a swap count; keep labels strictly increasing.
        if (!series.conditions.empty() && label <= series.conditions.back().label) {
            continue;
        }
        auto split = split_train_test(condition, spec, seed);
        EvaluateOptions options;
        options.k = k;
        series.conditions.push_back(
            {label, evaluate(algorithms, split.train, split.test_sets, indexes, options)});
    }
    return series;
}

SweepSeries run_coldstart_sweep(const Dataset& dataset, const SplitSpec& spec,
                                std::uint64_t seed, std::size_t k) {
    auto both = users_with_marketplace_and_social(dataset);
    if (both.empty()) throw NoEvaluableUsers();

    std::vector<std::string> order(both.begin(), both.end());
    std::mt19937_64 rng(seed);
    seeded_shuffle(order, rng);

    ItemIndexes indexes = build_item_indexes(dataset);
    auto algorithms = all_algorithm_ids();

    SweepSeries series;
    for (std::size_t step = 1; step <= 10; ++step) {
        // Nested prefixes; ceil keeps the smallest subset non-empty.
        std::size_t count = (step * order.size() + 9) / 10;
        std::set<std::string> subset(order.begin(),
                                     order.begin() + static_cast<std::ptrdiff_t>(count));
        Dataset condition = restrict_dataset(dataset, subset);
        auto split = split_train_test(condition, spec, seed);
        EvaluateOptions options;
        options.k = k;
        series.conditions.push_back(
            {static_cast<double>(step) / 10.0,
             evaluate(algorithms, split.train, split.test_sets, indexes, options)});
    }
    return series;
}

double measure_runtime(AlgorithmId algorithm, const Dataset& train,
                       const ItemIndexes& indexes, const std::vector<std::string>& users,
                       std::size_t repetitions) {
    if (users.empty() || repetitions == 0) throw EmptySample();
    double total_ms = 0.0;
    std::size_t calls = 0;
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        for (const auto& user : users) {
            auto start = std::chrono::steady_clock::now();
            volatile std::size_t sink =
                recommend(algorithm, user, train, indexes, 10).size();
            auto stop = std::chrono::steady_clock::now();
            (void)sink;
            total_ms += std::chrono::duration<double, std::milli>(stop - start).count();
            ++calls;
        }
    }
    return total_ms / static_cast<double>(calls);
}

// ---------------------------------------------------------------------------
// Synthetic data
// ---------------------------------------------------------------------------

namespace {

const std::array<const char*, 40> kSyllables = {
    "ba", "be", "bi", "bo", "bu", "da", "de", "di", "do", "du",
    "fa", "fe", "fi", "fo", "fu", "ga", "ge", "gi", "go", "gu",
    "ka", "ke", "ki", "ko", "ku", "la", "le", "li", "lo", "lu",
    "ma", "me", "mi", "mo", "mu", "na", "ne", "ni", "no", "nu",
};

std::string word_at(std::size_t n) {
    std::string word = kSyllables[n % kSyllables.size()];
    n /= kSyllables.size();
    word += kSyllables[n % kSyllables.size()];
    n /= kSyllables.size();
    word += kSyllables[n % kSyllables.size()];
    return word;
}

std::string padded_id(char prefix, std::size_t index, std::size_t width) {
    std::string digits = std::to_string(index);
    std::string id(1, prefix);
    if (digits.size() < width) {
        id.append(width - digits.size(), '0');
    }
    id += digits;
    return id;
}

std::size_t id_width(std::size_t count) {
    std::size_t width = 1;
    for (std::size_t v = count > 0 ? count - 1 : 0; v >= 10; v /= 10) {
        ++width;
    }
    return std::max<std::size_t>(width, 4);
}

} // namespace

Dataset generate_synthetic(const SyntheticParams& params, std::uint64_t seed) {
    if (params.user_count == 0 || params.item_count == 0 ||
        params.community_count == 0 || params.purchases_per_user == 0) {
        throw std::invalid_argument("synthetic params must have non-zero counts");
    }
    if (params.social_fraction < 0.0 || params.social_fraction > 1.0) {
        throw std::invalid_argument("social_fraction must be within [0, 1]");
    }

    std::mt19937_64 rng(seed);
    const std::size_t communities = params.community_count;
    const std::size_t user_width = id_width(params.user_count);
    const std::size_t item_width = id_width(params.item_count);

    constexpr std::size_t kCommunityVocab = 24;
    constexpr std::size_t kGlobalVocab = 40;
    constexpr std::size_t kInterestPool = 5;
    auto community_word = [&](std::size_t community, std::size_t j) {
        return word_at(1000 + community * kCommunityVocab + j % kCommunityVocab);
    };
    auto global_word = [&](std::size_t j) { return word_at(j % kGlobalVocab); };

    // Items: titles use community vocabulary only; descriptions mix in the
    // global vocabulary 20% of the time.
    std::vector<Item> items;
    items.reserve(params.item_count);
    std::vector<std::vector<std::string>> preferred(communities);
    for (std::size_t j = 0; j < params.item_count; ++j) {
        std::size_t c = j % communities;
        std::string id = padded_id('i', j, item_width);
        std::string title;
        for (std::size_t w = 0; w < 3; ++w) {
            if (w > 0) title += ' ';
            title += community_word(c, rng_below(rng, kCommunityVocab));
        }
        std::string description;
        std::size_t desc_words = 6 + rng_below(rng, 5);
        for (std::size_t w = 0; w < desc_words; ++w) {
            if (w > 0) description += ' ';
            if (rng_unit(rng) < 0.8) {
                description += community_word(c, rng_below(rng, kCommunityVocab));
            } else {
                description += global_word(rng_below(rng, kGlobalVocab));
            }
        }
        preferred[c].push_back(id);
        items.push_back({std::move(id), std::move(title), std::move(description)});
    }

    auto draw_item = [&](std::size_t community) -> const std::string& {
        if (!preferred[community].empty() && rng_unit(rng) < 0.8) {
            const auto& pool = preferred[community];
            return pool[rng_below(rng, pool.size())];
        }
        return items[rng_below(rng, items.size())].id;
    };

    const auto social_count = static_cast<std::size_t>(
        std::llround(params.social_fraction * static_cast<double>(params.user_count)));
    std::vector<std::vector<std::size_t>> social_by_community(communities);
    for (std::size_t i = 0; i < social_count; ++i) {
        social_by_community[i % communities].push_back(i);
    }

    std::vector<PurchaseEvent> purchases;
    purchases.reserve(params.user_count * params.purchases_per_user);
    std::vector<SocialRecord> social;
    for (std::size_t i = 0; i < params.user_count; ++i) {
        std::size_t c = i % communities;
        std::string user = padded_id('u', i, user_width);
        for (std::size_t p = 0; p < params.purchases_per_user; ++p) {
            purchases.push_back(
                {user, draw_item(c),
                 static_cast<std::int64_t>(rng_below(rng, 1000000))});
        }
        if (i >= social_count) continue;

        std::size_t like_count = 2 + rng_below(rng, 3);
        for (std::size_t l = 0; l < like_count; ++l) {
            social.emplace_back(Like{user, draw_item(c)});
        }
        std::size_t comment_count = 1 + rng_below(rng, 2);
        for (std::size_t m = 0; m < comment_count; ++m) {
            std::string text;
            std::size_t words = 2 + rng_below(rng, 3);
            for (std::size_t w = 0; w < words; ++w) {
                if (w > 0) text += ' ';
                text += community_word(c, rng_below(rng, kCommunityVocab));
            }
            social.emplace_back(Comment{user, draw_item(c), std::move(text)});
        }
        const auto& peers = social_by_community[c];
        if (peers.size() > 1) {
            std::size_t edge_count = 2 + rng_below(rng, 4);
            for (std::size_t e = 0; e < edge_count; ++e) {
                std::size_t partner = i;
                while (partner == i) {
                    partner = peers[rng_below(rng, peers.size())];
                }
                social.emplace_back(Interaction{
                    user, padded_id('u', partner, user_width),
                    static_cast<std::int64_t>(1 + rng_below(rng, 5))});
            }
        }
        std::size_t post_count = 1 + rng_below(rng, 2);
        for (std::size_t s = 0; s < post_count; ++s) {
            std::string text;
            std::size_t words = 3 + rng_below(rng, 6);
            for (std::size_t w = 0; w < words; ++w) {
                if (w > 0) text += ' ';
                text += community_word(c, rng_below(rng, kCommunityVocab));
            }
            social.emplace_back(StreamPost{user, std::move(text)});
        }
        social.emplace_back(GroupMembership{user, "g" + std::to_string(c)});
        std::size_t interest_count = 1 + rng_below(rng, 3);
        for (std::size_t t = 0; t < interest_count; ++t) {
            social.emplace_back(Interest{user, community_word(c, rng_below(rng, kInterestPool))});
        }
    }

    return build_dataset(std::move(items), std::move(purchases), std::move(social));
}

} // namespace socrec
