#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "socrec/core.hpp"

namespace socrec {

// One parsed JSONL record of any kind. The kind tag is implied by the
// active alternative: item, purchase, like, comment, interaction, stream,
// group, interest.
struct RecordEnvelope {
    std::variant<Item, PurchaseEvent, Like, Comment, Interaction, StreamPost,
                 GroupMembership, Interest>
        record;

    bool operator==(const RecordEnvelope&) const = default;
};

const std::string& kind_of(const RecordEnvelope& envelope);

struct ParseError : std::runtime_error {
    ParseError(std::size_t line, const std::string& reason);
    std::size_t line;
};

struct UnknownKind : ParseError {
    UnknownKind(std::size_t line, const std::string& kind);
    std::string kind;
};

// Strict JSONL loader: one JSON object per line, exactly the schema fields
// for the record's kind, no extras. Blank lines are skipped. Any bad line
// fails the whole load with its 1-based line number.
std::vector<RecordEnvelope> parse_jsonl(std::string_view text);
std::vector<RecordEnvelope> load_jsonl(std::istream& in);
std::vector<RecordEnvelope> load_jsonl_file(const std::string& path);

// Serializes one record as its canonical single-line JSON form (schema
// field order, no whitespace).
std::string record_to_jsonl_line(const RecordEnvelope& envelope);

// Dataset records in canonical order: items, purchases, likes, comments,
// interactions, streams, groups, interests.
std::vector<RecordEnvelope> dataset_to_records(const Dataset& dataset);
void write_dataset_jsonl(const Dataset& dataset, std::ostream& out);

// Builds a validated Dataset from loaded records; errors are those of
// build_dataset.
Dataset ingest(const std::vector<RecordEnvelope>& marketplace,
               const std::vector<RecordEnvelope>& social);
Dataset dataset_from_records(const std::vector<RecordEnvelope>& records);

} // namespace socrec
