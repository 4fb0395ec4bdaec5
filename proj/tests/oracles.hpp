// Independent brute-force reference implementations used to check the
// engine. Everything here recomputes results directly from raw records with
// naive full scans; only the leaf tokenizer and the canonical ordering
// conventions (ties by id, accumulation in ascending id / selected-term
// order) are shared with the engine.
#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "socrec/core.hpp"
#include "socrec/recommenders.hpp"
#include "socrec/text_index.hpp"

namespace oracle {

// ---- rank metrics ----------------------------------------------------------

double precision_at_k(const std::vector<std::string>& recommended,
                      const std::set<std::string>& relevant, std::size_t k);
double recall_at_k(const std::vector<std::string>& recommended,
                   const std::set<std::string>& relevant, std::size_t k);
double ndcg_at_k(const std::vector<std::string>& recommended,
                 const std::set<std::string>& relevant, std::size_t k);

// ---- retrieval -------------------------------------------------------------

// Full-corpus cosine ranking for a MoreLikeThis query: no index, no
// candidate pruning; every document is scored from its raw text.
std::vector<std::pair<std::string, double>>
more_like_this(const std::vector<std::pair<std::string, std::string>>& docs,
               const socrec::TermVector& profile, std::size_t k,
               const socrec::MltParams& params = {});

// ---- recommenders ----------------------------------------------------------

// Raw, unvalidated record lists; the oracle derives everything itself.
struct Instance {
    std::vector<socrec::Item> items;
    std::vector<socrec::PurchaseEvent> purchases;
    std::vector<socrec::SocialRecord> social;
};

std::vector<socrec::Recommendation> recommend(socrec::AlgorithmId id,
                                              const std::string& user,
                                              const Instance& instance, std::size_t k);

// Seeded random small instance for oracle comparisons. Instances satisfy
// the dataset invariants (no dangling references).
Instance random_instance(std::mt19937_64& rng, std::size_t max_users,
                         std::size_t max_items);

// All user ids appearing in the instance.
std::vector<std::string> instance_users(const Instance& instance);

} // namespace oracle
