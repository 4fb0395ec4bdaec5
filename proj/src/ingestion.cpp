#include "socrec/ingestion.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace socrec {

namespace {

using nlohmann::json;

const std::string kKindItem = "item";
const std::string kKindPurchase = "purchase";
const std::string kKindLike = "like";
const std::string kKindComment = "comment";
const std::string kKindInteraction = "interaction";
const std::string kKindStream = "stream";
const std::string kKindGroup = "group";
const std::string kKindInterest = "interest";

struct LineReader {
    std::size_t line;
    const json& object;

    void expect_fields(std::initializer_list<const char*> fields) const {
        for (const auto& [key, _] : object.items()) {
            bool known = key == "kind" ||
                         std::any_of(fields.begin(), fields.end(),
                                     [&key](const char* f) { return key == f; });
            if (!known) {
                throw ParseError(line, "unknown field \"" + key + "\"");
            }
        }
    }

    std::string str(const char* field) const {
        auto it = object.find(field);
        if (it == object.end()) {
            throw ParseError(line, std::string("missing field \"") + field + "\"");
        }
        if (!it->is_string()) {
            throw ParseError(line, std::string("field \"") + field + "\" must be a string");
        }
        return it->get<std::string>();
    }

    std::int64_t integer(const char* field) const {
        auto it = object.find(field);
        if (it == object.end()) {
            throw ParseError(line, std::string("missing field \"") + field + "\"");
        }
        if (!it->is_number_integer()) {
            throw ParseError(line,
                             std::string("field \"") + field + "\" must be an integer");
        }
        return it->get<std::int64_t>();
    }
};

RecordEnvelope parse_record(std::size_t line_no, const json& object) {
    LineReader reader{line_no, object};
    auto kind_it = object.find("kind");
    if (kind_it == object.end() || !kind_it->is_string()) {
        throw ParseError(line_no, "missing string field \"kind\"");
    }
    const auto kind = kind_it->get<std::string>();

    if (kind == kKindItem) {
        reader.expect_fields({"id", "title", "description"});
        return {Item{reader.str("id"), reader.str("title"), reader.str("description")}};
    }
    if (kind == kKindPurchase) {
        reader.expect_fields({"user", "item", "timestamp"});
        std::int64_t timestamp = reader.integer("timestamp");
        if (timestamp < 0) {
            throw ParseError(line_no, "timestamp must be >= 0");
        }
        return {PurchaseEvent{reader.str("user"), reader.str("item"), timestamp}};
    }
    if (kind == kKindLike) {
        reader.expect_fields({"user", "item"});
        return {Like{reader.str("user"), reader.str("item")}};
    }
    if (kind == kKindComment) {
        reader.expect_fields({"user", "item", "text"});
        return {Comment{reader.str("user"), reader.str("item"), reader.str("text")}};
    }
    if (kind == kKindInteraction) {
        reader.expect_fields({"userA", "userB", "weight"});
        std::int64_t weight = reader.integer("weight");
        if (weight < 1) {
            throw ParseError(line_no, "weight must be >= 1");
        }
        return {Interaction{reader.str("userA"), reader.str("userB"), weight}};
    }
    if (kind == kKindStream) {
        reader.expect_fields({"user", "text"});
        return {StreamPost{reader.str("user"), reader.str("text")}};
    }
    if (kind == kKindGroup) {
        reader.expect_fields({"user", "group"});
        return {GroupMembership{reader.str("user"), reader.str("group")}};
    }
    if (kind == kKindInterest) {
        reader.expect_fields({"user", "term"});
        return {Interest{reader.str("user"), reader.str("term")}};
    }
    throw UnknownKind(line_no, kind);
}

bool blank(std::string_view line) {
    return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

std::string json_string(const std::string& value) {
    return json(value).dump();
}

} // namespace

const std::string& kind_of(const RecordEnvelope& envelope) {
    static const std::array<std::string, 8> kinds = {
        kKindItem,   kKindPurchase,    kKindLike,  kKindComment,
        kKindInteraction, kKindStream, kKindGroup, kKindInterest,
    };
    return kinds[envelope.record.index()];
}

ParseError::ParseError(std::size_t line_in, const std::string& reason)
    : std::runtime_error("line " + std::to_string(line_in) + ": " + reason),
      line(line_in) {}

UnknownKind::UnknownKind(std::size_t line_in, const std::string& kind_in)
    : ParseError(line_in, "unknown kind \"" + kind_in + "\""), kind(kind_in) {}

std::vector<RecordEnvelope> parse_jsonl(std::string_view text) {
    std::vector<RecordEnvelope> records;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        std::string_view line = end == std::string_view::npos
                                    ? text.substr(pos)
                                    : text.substr(pos, end - pos);
        ++line_no;
        if (!blank(line)) {
            json object = json::parse(line, nullptr, false);
            if (object.is_discarded()) {
                throw ParseError(line_no, "invalid JSON");
            }
            if (!object.is_object()) {
                throw ParseError(line_no, "expected a JSON object");
            }
            records.push_back(parse_record(line_no, object));
        }
        if (end == std::string_view::npos) break;
        pos = end + 1;
    }
    return records;
}

std::vector<RecordEnvelope> load_jsonl(std::istream& in) {
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_jsonl(buffer.str());
}

std::vector<RecordEnvelope> load_jsonl_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    return load_jsonl(in);
}

std::string record_to_jsonl_line(const RecordEnvelope& envelope) {
    std::string out;
    std::visit(
        [&](const auto& rec) {
            using T = std::decay_t<decltype(rec)>;
            if constexpr (std::is_same_v<T, Item>) {
                out = "{\"kind\":\"item\",\"id\":" + json_string(rec.id) +
                      ",\"title\":" + json_string(rec.title) +
                      ",\"description\":" + json_string(rec.description) + "}";
            } else if constexpr (std::is_same_v<T, PurchaseEvent>) {
                out = "{\"kind\":\"purchase\",\"user\":" + json_string(rec.user) +
                      ",\"item\":" + json_string(rec.item) +
                      ",\"timestamp\":" + std::to_string(rec.timestamp) + "}";
            } else if constexpr (std::is_same_v<T, Like>) {
                out = "{\"kind\":\"like\",\"user\":" + json_string(rec.user) +
                      ",\"item\":" + json_string(rec.item) + "}";
            } else if constexpr (std::is_same_v<T, Comment>) {
                out = "{\"kind\":\"comment\",\"user\":" + json_string(rec.user) +
                      ",\"item\":" + json_string(rec.item) +
                      ",\"text\":" + json_string(rec.text) + "}";
            } else if constexpr (std::is_same_v<T, Interaction>) {
                out = "{\"kind\":\"interaction\",\"userA\":" + json_string(rec.user_a) +
                      ",\"userB\":" + json_string(rec.user_b) +
                      ",\"weight\":" + std::to_string(rec.weight) + "}";
            } else if constexpr (std::is_same_v<T, StreamPost>) {
                out = "{\"kind\":\"stream\",\"user\":" + json_string(rec.user) +
                      ",\"text\":" + json_string(rec.text) + "}";
            } else if constexpr (std::is_same_v<T, GroupMembership>) {
                out = "{\"kind\":\"group\",\"user\":" + json_string(rec.user) +
                      ",\"group\":" + json_string(rec.group) + "}";
            } else if constexpr (std::is_same_v<T, Interest>) {
                out = "{\"kind\":\"interest\",\"user\":" + json_string(rec.user) +
                      ",\"term\":" + json_string(rec.term) + "}";
            }
        },
        envelope.record);
    return out;
}

std::vector<RecordEnvelope> dataset_to_records(const Dataset& dataset) {
    std::vector<RecordEnvelope> records;
    for (const auto& [_, item] : dataset.items()) records.push_back({item});
    for (const auto& p : dataset.purchases()) records.push_back({p});
    for (const auto& l : dataset.likes()) records.push_back({l});
    for (const auto& c : dataset.comments()) records.push_back({c});
    for (const auto& in : dataset.interactions()) records.push_back({in});
    for (const auto& s : dataset.stream_posts()) records.push_back({s});
    for (const auto& g : dataset.groups()) records.push_back({g});
    for (const auto& i : dataset.interests()) records.push_back({i});
    return records;
}

void write_dataset_jsonl(const Dataset& dataset, std::ostream& out) {
    for (const auto& record : dataset_to_records(dataset)) {
        out << record_to_jsonl_line(record) << '\n';
    }
}

Dataset dataset_from_records(const std::vector<RecordEnvelope>& records) {
    std::vector<Item> items;
    std::vector<PurchaseEvent> purchases;
    std::vector<SocialRecord> social;
    for (const auto& envelope : records) {
        std::visit(
            [&](const auto& rec) {
                using T = std::decay_t<decltype(rec)>;
                if constexpr (std::is_same_v<T, Item>) {
                    items.push_back(rec);
                } else if constexpr (std::is_same_v<T, PurchaseEvent>) {
                    purchases.push_back(rec);
                } else {
                    social.emplace_back(rec);
                }
            },
            envelope.record);
    }
    return build_dataset(std::move(items), std::move(purchases), std::move(social));
}

Dataset ingest(const std::vector<RecordEnvelope>& marketplace,
               const std::vector<RecordEnvelope>& social) {
    std::vector<RecordEnvelope> all;
    all.reserve(marketplace.size() + social.size());
    all.insert(all.end(), marketplace.begin(), marketplace.end());
    all.insert(all.end(), social.begin(), social.end());
    return dataset_from_records(all);
}

} // namespace socrec
