#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "socrec/core.hpp"

using namespace socrec;

namespace {

Dataset from_instance(const oracle::Instance& instance) {
    return build_dataset(instance.items, instance.purchases, instance.social);
}

} // namespace

TEST_CASE("algorithm ids round-trip through their wire tokens") {
    for (AlgorithmId id : kAllAlgorithms) {
        auto parsed = parse_algorithm_id(to_string(id));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == id);
    }
    CHECK(to_string(AlgorithmId::MostPopular) == "MP");
    CHECK(to_string(AlgorithmId::PurchaseCf) == "CF_p");
    CHECK(to_string(AlgorithmId::InteractionCf) == "CF_in");
    CHECK(to_string(AlgorithmId::StreamContent) == "C_st");
    CHECK(to_string(AlgorithmId::SocialHybrid) == "CCF_s");
    CHECK_FALSE(parse_algorithm_id("XX").has_value());
    CHECK_FALSE(parse_algorithm_id("cf_p").has_value());
    CHECK_FALSE(parse_algorithm_id("").has_value());
}

TEST_CASE("empty input builds an empty dataset") {
    Dataset ds = build_dataset({}, {}, {});
    CHECK(ds.users().empty());
    CHECK(ds.items().empty());
    CHECK(ds.purchases().empty());
}

TEST_CASE("derived user set unions every record kind") {
    Dataset ds = build_dataset({{"i1", "t", "d"}}, {{"u1", "i1", 10}},
                               {Like{"u2", "i1"}});
    CHECK(ds.users() == std::set<std::string>{"u1", "u2"});
    CHECK(ds.has_marketplace_data("u1"));
    CHECK_FALSE(ds.has_social_data("u1"));
    CHECK(ds.has_social_data("u2"));
    CHECK_FALSE(ds.has_marketplace_data("u2"));
}

TEST_CASE("interactions canonicalize to one undirected summed record") {
    Dataset ds = build_dataset({}, {},
                               {Interaction{"b", "a", 2}, Interaction{"a", "b", 3}});
    REQUIRE(ds.interactions().size() == 1);
    CHECK(ds.interactions()[0] == Interaction{"a", "b", 5});
    CHECK(ds.interaction_weight_total("a") == 5);
    CHECK(ds.interaction_weight_total("b") == 5);
    CHECK(ds.interaction_neighbors("a").at("b") == 5);
}

TEST_CASE("dangling references are hard errors") {
    CHECK_THROWS_AS(build_dataset({}, {{"u1", "iX", 5}}, {}), DanglingReference);
    CHECK_THROWS_AS(build_dataset({{"i1", "", ""}}, {}, {Like{"u1", "iZ"}}),
                    DanglingReference);
    CHECK_THROWS_AS(build_dataset({{"i1", "", ""}}, {}, {Comment{"u1", "iZ", "hm"}}),
                    DanglingReference);
    try {
        build_dataset({}, {{"u1", "iX", 5}}, {});
        FAIL("expected DanglingReference");
    } catch (const DanglingReference& e) {
        CHECK(e.record_kind == "purchase");
        CHECK(e.item_id == "iX");
    }
}

TEST_CASE("duplicate item ids are rejected") {
    CHECK_THROWS_AS(build_dataset({{"i1", "a", ""}, {"i1", "b", ""}}, {}, {}),
                    DuplicateItemId);
}

TEST_CASE("malformed records are rejected") {
    CHECK_THROWS_AS(build_dataset({{"i1", "", ""}}, {{"u1", "i1", -3}}, {}),
                    DatasetError);
    CHECK_THROWS_AS(build_dataset({}, {}, {Interaction{"a", "b", 0}}), DatasetError);
    CHECK_THROWS_AS(build_dataset({}, {}, {Interaction{"a", "a", 1}}), DatasetError);
    CHECK_THROWS_AS(build_dataset({{"", "t", "d"}}, {}, {}), DatasetError);
    CHECK_THROWS_AS(build_dataset({{"i1", "", ""}}, {{"", "i1", 1}}, {}), DatasetError);
}

TEST_CASE("duplicate purchases are retained as separate events") {
    Dataset ds = build_dataset({{"i1", "", ""}},
                               {{"u1", "i1", 5}, {"u1", "i1", 5}, {"u1", "i1", 9}}, {});
    CHECK(ds.purchases().size() == 3);
    CHECK(ds.purchases_of("u1").size() == 3);
    CHECK(ds.purchased_items("u1") == std::set<std::string>{"i1"});
}

TEST_CASE("rebuilding from a dataset's own records is idempotent") {
    std::mt19937_64 rng(20240811);
    for (int round = 0; round < 30; ++round) {
        auto instance = oracle::random_instance(rng, 12, 12);
        Dataset first = from_instance(instance);
        std::vector<SocialRecord> social;
        for (const auto& l : first.likes()) social.emplace_back(l);
        for (const auto& c : first.comments()) social.emplace_back(c);
        for (const auto& in : first.interactions()) social.emplace_back(in);
        for (const auto& s : first.stream_posts()) social.emplace_back(s);
        for (const auto& g : first.groups()) social.emplace_back(g);
        for (const auto& i : first.interests()) social.emplace_back(i);
        std::vector<Item> items;
        for (const auto& [_, item] : first.items()) items.push_back(item);
        Dataset second = build_dataset(items, first.purchases(), social);
        CHECK(first == second);
    }
}

TEST_CASE("user count never exceeds the distinct ids in the input") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 20; ++round) {
        auto instance = oracle::random_instance(rng, 10, 8);
        Dataset ds = from_instance(instance);
        auto expected = oracle::instance_users(instance);
        CHECK(ds.users().size() == expected.size());
        CHECK(std::set<std::string>(expected.begin(), expected.end()) == ds.users());
    }
}

TEST_CASE("interaction weights sum over both orderings") {
    std::mt19937_64 rng(99);
    for (int round = 0; round < 20; ++round) {
        std::vector<SocialRecord> social;
        std::map<std::pair<std::string, std::string>, std::int64_t> expected;
        std::size_t edges = rng() % 12;
        for (std::size_t e = 0; e < edges; ++e) {
            std::string a = "u" + std::to_string(rng() % 5);
            std::string b = "u" + std::to_string(rng() % 5);
            if (a == b) continue;
            auto weight = static_cast<std::int64_t>(1 + rng() % 6);
            social.emplace_back(Interaction{a, b, weight});
            expected[a < b ? std::make_pair(a, b) : std::make_pair(b, a)] += weight;
        }
        Dataset ds = build_dataset({}, {}, social);
        REQUIRE(ds.interactions().size() == expected.size());
        for (const auto& in : ds.interactions()) {
            CHECK(in.weight == expected.at({in.user_a, in.user_b}));
            CHECK(in.user_a < in.user_b);
        }
    }
}
