#include "socrec/text_index.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace socrec {

namespace {

const std::array<std::string_view, 50> kStopwords = {
    "a",    "about", "all",   "an",    "and",   "are",  "as",    "at",
    "be",   "but",   "by",    "for",   "from",  "had",  "has",   "have",
    "he",   "her",   "his",   "i",     "if",    "in",   "into",  "is",
    "it",   "its",   "no",    "not",   "of",    "on",   "or",    "she",
    "such", "that",  "the",   "their", "then",  "there", "these", "they",
    "this", "to",    "was",   "we",    "were",  "will", "with",  "would",
    "you",  "your",
};

bool is_stopword(const std::string& token) {
    return std::find(kStopwords.begin(), kStopwords.end(), token) != kStopwords.end();
}

// Decodes one UTF-8 codepoint starting at `pos`; advances `pos`. Malformed
// bytes decode as U+FFFD and consume a single byte.
char32_t next_codepoint(std::string_view text, std::size_t& pos) {
    const auto byte = [&](std::size_t i) {
        return static_cast<unsigned char>(text[i]);
    };
    unsigned char lead = byte(pos);
    if (lead < 0x80) {
        ++pos;
        return lead;
    }
    int extra = 0;
    char32_t cp = 0;
    if ((lead & 0xE0) == 0xC0) {
        extra = 1;
        cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
        extra = 2;
        cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
        extra = 3;
        cp = lead & 0x07;
    } else {
        ++pos;
        return 0xFFFD;
    }
    for (int i = 1; i <= extra; ++i) {
        if (pos + static_cast<std::size_t>(i) >= text.size() ||
            (byte(pos + static_cast<std::size_t>(i)) & 0xC0) != 0x80) {
            ++pos;
            return 0xFFFD;
        }
        cp = (cp << 6) | (byte(pos + static_cast<std::size_t>(i)) & 0x3F);
    }
    pos += static_cast<std::size_t>(extra) + 1;
    return cp;
}

bool is_word_codepoint(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') ||
               (cp >= 'A' && cp <= 'Z');
    }
    // Latin-1 punctuation block and the multiplication/division signs split;
    // everything else beyond ASCII is treated as a word codepoint.
    if (cp >= 0xA0 && cp <= 0xBF) return false;
    if (cp == 0xD7 || cp == 0xF7) return false;
    if (cp >= 0x2000 && cp <= 0x206F) return false; // general punctuation
    if (cp == 0xFFFD) return false;
    return true;
}

char32_t fold_lower(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
    return cp;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

} // namespace

const std::array<std::string_view, 50>& stopwords() { return kStopwords; }

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    std::size_t current_len = 0; // codepoints
    auto flush = [&] {
        if (current_len >= 2 && !is_stopword(current)) {
            tokens.push_back(current);
        }
        current.clear();
        current_len = 0;
    };
    std::size_t pos = 0;
    while (pos < text.size()) {
        char32_t cp = next_codepoint(text, pos);
        if (is_word_codepoint(cp)) {
            append_utf8(current, fold_lower(cp));
            ++current_len;
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

DuplicateDocId::DuplicateDocId(std::string id_in)
    : std::runtime_error("duplicate doc id: " + id_in), id(std::move(id_in)) {}

std::size_t InvertedIndex::doc_freq(const std::string& term) const {
    auto it = postings_.find(term);
    return it == postings_.end() ? 0 : it->second.size();
}

const std::vector<InvertedIndex::Posting>*
InvertedIndex::postings(const std::string& term) const {
    auto it = postings_.find(term);
    return it == postings_.end() ? nullptr : &it->second;
}

double InvertedIndex::doc_norm(const std::string& doc) const {
    auto it = doc_norms_.find(doc);
    return it == doc_norms_.end() ? 0.0 : it->second;
}

double InvertedIndex::idf(std::size_t df) const {
    if (df == 0) return 0.0;
    return std::log(1.0 + static_cast<double>(doc_count_) / static_cast<double>(df));
}

double InvertedIndex::term_weight(double tf, double idf) {
    return (1.0 + std::log(tf)) * idf;
}

std::map<std::string, InvertedIndex>
index_documents(const std::vector<std::pair<std::string, FieldText>>& docs) {
    std::map<std::string, InvertedIndex> indexes;

    std::unordered_set<std::string> seen;
    seen.reserve(docs.size());
    for (const auto& [doc_id, fields] : docs) {
        if (!seen.insert(doc_id).second) {
            throw DuplicateDocId(doc_id);
        }
        for (const auto& [field, _] : fields) {
            auto it = indexes.find(field);
            if (it == indexes.end()) {
                indexes.emplace(field, InvertedIndex(field));
            }
        }
    }

    for (auto& [field, index] : indexes) {
        index.doc_count_ = docs.size();
        for (const auto& [doc_id, fields] : docs) {
            index.doc_norms_[doc_id] = 0.0;
            auto ft = fields.find(field);
            if (ft == fields.end()) continue;
            std::map<std::string, std::int32_t> tf;
            for (const auto& token : tokenize(ft->second)) {
                ++tf[token];
            }
            for (const auto& [term, count] : tf) {
                index.postings_[term].push_back({doc_id, count});
            }
        }
        // Postings were appended in input doc order; bring them to doc order.
        for (auto& [term, list] : index.postings_) {
            std::sort(list.begin(), list.end(),
                      [](const auto& a, const auto& b) { return a.doc < b.doc; });
        }
        // Norms accumulate in ascending term order.
        for (const auto& [term, list] : index.postings_) {
            double idf = index.idf(list.size());
            for (const auto& posting : list) {
                double w = InvertedIndex::term_weight(posting.tf, idf);
                index.doc_norms_[posting.doc] += w * w;
            }
        }
        for (auto& [doc, norm2] : index.doc_norms_) {
            norm2 = std::sqrt(norm2);
        }
    }
    return indexes;
}

std::vector<std::pair<std::string, double>>
more_like_this(const TermVector& profile, const InvertedIndex& index, std::size_t k,
               const MltParams& params) {
    if (k == 0 || profile.empty() || index.doc_count() == 0) return {};

    // Query term selection: weight desc, term asc, df floor.
    std::vector<std::pair<std::string, double>> candidates;
    candidates.reserve(profile.size());
    for (const auto& [term, weight] : profile) {
        if (weight <= 0.0) continue;
        if (index.doc_freq(term) < params.min_doc_freq) continue;
        candidates.emplace_back(term, weight);
    }
    std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (candidates.size() > params.max_query_terms) {
        candidates.resize(params.max_query_terms);
    }
    if (candidates.empty()) return {};

    // Query vector: profile weights act as term frequencies (floored at 1).
    double query_norm2 = 0.0;
    std::vector<std::pair<std::string, double>> query; // (term, weight)
    query.reserve(candidates.size());
    for (const auto& [term, weight] : candidates) {
        double idf = index.idf(index.doc_freq(term));
        double w = InvertedIndex::term_weight(std::max(weight, 1.0), idf);
        if (w <= 0.0) continue;
        query.emplace_back(term, w);
        query_norm2 += w * w;
    }
    if (query.empty()) return {};
    double query_norm = std::sqrt(query_norm2);

    // Dot products accumulate per document in query-term order.
    std::map<std::string, double> dots;
    for (const auto& [term, qw] : query) {
        const auto* postings = index.postings(term);
        if (postings == nullptr) continue;
        double idf = index.idf(postings->size());
        for (const auto& posting : *postings) {
            double dw = InvertedIndex::term_weight(posting.tf, idf);
            dots[posting.doc] += qw * dw;
        }
    }

    std::vector<std::pair<std::string, double>> scored;
    scored.reserve(dots.size());
    for (const auto& [doc, dot] : dots) {
        double norm = index.doc_norm(doc);
        if (norm <= 0.0) continue;
        double score = dot / (query_norm * norm);
        if (score > 0.0) {
            scored.emplace_back(doc, score);
        }
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (scored.size() > k) scored.resize(k);
    return scored;
}

std::vector<std::pair<std::string, std::uint64_t>>
facet_count(const std::vector<std::pair<std::string, std::string>>& pairs) {
    std::unordered_map<std::string, std::uint64_t> counts;
    counts.reserve(pairs.size());
    for (const auto& [key, _] : pairs) {
        ++counts[key];
    }
    std::vector<std::pair<std::string, std::uint64_t>> result(counts.begin(), counts.end());
    std::sort(result.begin(), result.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return result;
}

} // namespace socrec
