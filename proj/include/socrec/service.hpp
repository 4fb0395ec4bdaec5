#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>

#include "socrec/evaluation.hpp"
#include "socrec/ingestion.hpp"
#include "socrec/recommenders.hpp"

namespace socrec {

// HTTP/JSON front-end.
//
// Routes:
//   POST /data/marketplace        JSONL body -> 202 {"accepted":N}
//   POST /data/social             JSONL body -> 202 {"accepted":N}
//   POST /index/rebuild           -> 200 {"version":V}
//   GET  /recommend/{alg}/{user}  ?k=10 -> 200 {"version":V,"recommendations":[...]}
//   POST /evaluation/run          {"algorithms":[...],"k":10,"seed":1} -> 202 {"jobId":"1"}
//   GET  /evaluation/report/{id}  -> 200 report | 202 pending | 404 | 500
//   GET  /health                  -> 200 {"status":"ok","version":V}
//
// Readers always see a complete snapshot: rebuilds construct the new
// dataset and indexes off to the side and publish them with a single
// pointer swap.
class RecommenderService {
  public:
    RecommenderService();
    ~RecommenderService();

    RecommenderService(const RecommenderService&) = delete;
    RecommenderService& operator=(const RecommenderService&) = delete;

    // Blocking serve loop.
    bool listen(const std::string& host, int port);

    // Test support: bind an ephemeral port, then run listen_after_bind()
    // on a caller-owned thread.
    int bind_any_port(const std::string& host);
    bool listen_after_bind();
    bool is_running() const;
    void stop();

  private:
    struct Snapshot {
        Dataset dataset;
        ItemIndexes indexes;
        std::uint64_t version = 0;
    };

    struct EvalJob {
        bool done = false;
        bool failed = false;
        std::string report_json;
        std::string error;
        std::uint64_t snapshot_version = 0;
    };

    void setup_routes();
    std::shared_ptr<const Snapshot> current_snapshot() const;
    void join_workers();

    httplib::Server server_;

    mutable std::mutex state_mutex_;
    std::shared_ptr<const Snapshot> snapshot_; // null while empty
    std::uint64_t version_ = 0;
    std::vector<RecordEnvelope> staged_;

    std::mutex rebuild_mutex_;

    std::mutex jobs_mutex_;
    std::uint64_t next_job_id_ = 1;
    std::map<std::string, std::shared_ptr<EvalJob>> jobs_;
    std::optional<std::uint64_t> running_job_version_;
    std::vector<std::thread> workers_;
};

} // namespace socrec
