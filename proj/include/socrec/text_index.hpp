#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace socrec {

// Analyzer: UTF-8 aware lowercasing tokenizer. Splits on every
// non-alphanumeric codepoint, drops tokens shorter than two codepoints and
// tokens on the built-in 50-word English stopword list. Codepoints outside
// ASCII are folded for the Latin-1 letter range and otherwise kept verbatim.
std::vector<std::string> tokenize(std::string_view text);

const std::array<std::string_view, 50>& stopwords();

// term -> positive weight. Weights act as term frequencies when a vector is
// used as a MoreLikeThis query profile.
using TermVector = std::map<std::string, double>;

struct DuplicateDocId : std::runtime_error {
    explicit DuplicateDocId(std::string id);
    std::string id;
};

// Single-field inverted index with TF-IDF statistics.
//
// Term weight: w(t, d) = (1 + ln tf) * ln(1 + N / df). Document norms are
// the Euclidean norms of the full TF-IDF vectors, accumulated in ascending
// term order (part of the bit-determinism contract).
class InvertedIndex {
  public:
    struct Posting {
        std::string doc;
        std::int32_t tf = 0;
    };

    InvertedIndex() = default;
    explicit InvertedIndex(std::string field) : field_(std::move(field)) {}

    const std::string& field() const { return field_; }
    std::size_t doc_count() const { return doc_count_; }
    std::size_t doc_freq(const std::string& term) const;
    // nullptr when the term is absent. Postings are sorted by doc id.
    const std::vector<Posting>* postings(const std::string& term) const;
    double doc_norm(const std::string& doc) const;

    double idf(std::size_t df) const;
    static double term_weight(double tf, double idf);

    const std::map<std::string, std::vector<Posting>>& all_postings() const {
        return postings_;
    }
    const std::map<std::string, double>& doc_norms() const { return doc_norms_; }

  private:
    friend std::map<std::string, InvertedIndex>
    index_documents(const std::vector<std::pair<std::string, std::map<std::string, std::string>>>& docs);

    std::string field_;
    std::size_t doc_count_ = 0;
    std::map<std::string, std::vector<Posting>> postings_;
    std::map<std::string, double> doc_norms_;
};

// doc id -> (field name -> raw text)
using FieldText = std::map<std::string, std::string>;

// Builds one InvertedIndex per field. Every document counts toward every
// field's doc count; documents with empty or missing field text get norm 0.
// Throws DuplicateDocId on repeated doc ids.
std::map<std::string, InvertedIndex>
index_documents(const std::vector<std::pair<std::string, FieldText>>& docs);

struct MltParams {
    std::size_t max_query_terms = 25;
    std::size_t min_doc_freq = 1;
};

// MoreLikeThis: selects the highest-weight profile terms meeting the
// document-frequency floor (ties by term asc), builds a TF-IDF query vector
// from them (profile weights below 1 count as frequency 1) and ranks
// documents by cosine similarity. Returns the top-k positive-score documents
// ordered by score desc, doc id asc.
std::vector<std::pair<std::string, double>>
more_like_this(const TermVector& profile, const InvertedIndex& index, std::size_t k,
               const MltParams& params = {});

// Exact multiset counts of the keys, ordered by count desc then key asc.
std::vector<std::pair<std::string, std::uint64_t>>
facet_count(const std::vector<std::pair<std::string, std::string>>& pairs);

} // namespace socrec
