#include "socrec/service.hpp"

#include <json.hpp>

#include "socrec/serialize.hpp"

namespace socrec {

namespace {

using nlohmann::json;

void reply_json(httplib::Response& res, int status, const std::string& body) {
    res.status = status;
    res.set_content(body, "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
    reply_json(res, status, "{\"error\":" + json_escape(message) + "}");
}

} // namespace

RecommenderService::RecommenderService() { setup_routes(); }

RecommenderService::~RecommenderService() {
    stop();
    join_workers();
}

bool RecommenderService::listen(const std::string& host, int port) {
    return server_.listen(host, port);
}

int RecommenderService::bind_any_port(const std::string& host) {
    return server_.bind_to_any_port(host);
}

bool RecommenderService::listen_after_bind() { return server_.listen_after_bind(); }

bool RecommenderService::is_running() const { return server_.is_running(); }

void RecommenderService::stop() {
    if (server_.is_running()) {
        server_.stop();
    }
}

void RecommenderService::join_workers() {
    std::vector<std::thread> workers;
    {
        std::lock_guard<std::mutex> lock(jobs_mutex_);
        workers.swap(workers_);
    }
    for (auto& worker : workers) {
        if (worker.joinable()) worker.join();
    }
}

std::shared_ptr<const RecommenderService::Snapshot>
RecommenderService::current_snapshot() const {
    std::lock_guard<std::mutex> lock(state_mutex_);
    return snapshot_;
}

void RecommenderService::setup_routes() {
    auto stage_upload = [this](const httplib::Request& req, httplib::Response& res) {
        std::vector<RecordEnvelope> records;
        try {
            records = parse_jsonl(req.body);
        } catch (const ParseError& e) {
            reply_error(res, 400, e.what());
            return;
        }
        std::size_t accepted = records.size();
        {
            std::lock_guard<std::mutex> lock(state_mutex_);
            staged_.insert(staged_.end(), std::make_move_iterator(records.begin()),
                           std::make_move_iterator(records.end()));
        }
        reply_json(res, 202, "{\"accepted\":" + std::to_string(accepted) + "}");
    };
    server_.Post("/data/marketplace", stage_upload);
    server_.Post("/data/social", stage_upload);

    server_.Post("/index/rebuild", [this](const httplib::Request&, httplib::Response& res) {
        std::unique_lock<std::mutex> rebuild_lock(rebuild_mutex_, std::try_to_lock);
        if (!rebuild_lock.owns_lock()) {
            reply_error(res, 409, "a rebuild is already running");
            return;
        }
        std::vector<RecordEnvelope> staged;
        {
            std::lock_guard<std::mutex> lock(state_mutex_);
            staged = staged_;
        }
        auto next = std::make_shared<Snapshot>();
        try {
            next->dataset = dataset_from_records(staged);
            next->indexes = build_item_indexes(next->dataset);
        } catch (const DatasetError& e) {
            reply_error(res, 422, e.what());
            return;
        }
        std::uint64_t version;
        {
            std::lock_guard<std::mutex> lock(state_mutex_);
            version = ++version_;
            next->version = version;
            snapshot_ = std::move(next);
        }
        reply_json(res, 200, "{\"version\":" + std::to_string(version) + "}");
    });

    server_.Get(R"(/recommend/([^/]+)/([^/]+))",
                [this](const httplib::Request& req, httplib::Response& res) {
        auto algorithm = parse_algorithm_id(req.matches[1].str());
        if (!algorithm) {
            reply_error(res, 404, "unknown algorithm: " + req.matches[1].str());
            return;
        }
        std::size_t k = 10;
        if (req.has_param("k")) {
            try {
                auto raw = std::stoll(req.get_param_value("k"));
                if (raw < 1) throw std::invalid_argument("k");
                k = static_cast<std::size_t>(raw);
            } catch (const std::exception&) {
                reply_error(res, 400, "k must be a positive integer");
                return;
            }
        }
        auto snapshot = current_snapshot();
        if (!snapshot) {
            reply_error(res, 503, "no index built yet");
            return;
        }
        const std::string user = req.matches[2].str();
        if (*algorithm != AlgorithmId::MostPopular &&
            snapshot->dataset.users().count(user) == 0) {
            reply_error(res, 404, "unknown user: " + user);
            return;
        }
        auto recs = recommend(*algorithm, user, snapshot->dataset, snapshot->indexes, k);
        reply_json(res, 200,
                   "{\"version\":" + std::to_string(snapshot->version) +
                       ",\"recommendations\":" + recommendations_to_json(recs) + "}");
    });

    server_.Post("/evaluation/run", [this](const httplib::Request& req, httplib::Response& res) {
        auto snapshot = current_snapshot();
        if (!snapshot) {
            reply_error(res, 503, "no index built yet");
            return;
        }
        std::vector<AlgorithmId> algorithms(kAllAlgorithms.begin(), kAllAlgorithms.end());
        std::size_t k = 10;
        std::uint64_t seed = 0;
        if (!req.body.empty()) {
            json body = json::parse(req.body, nullptr, false);
            if (body.is_discarded() || !body.is_object()) {
                reply_error(res, 400, "body must be a JSON object");
                return;
            }
            if (body.contains("algorithms")) {
                if (!body["algorithms"].is_array()) {
                    reply_error(res, 400, "algorithms must be an array of ids");
                    return;
                }
                algorithms.clear();
                for (const auto& token : body["algorithms"]) {
                    auto id = token.is_string()
                                  ? parse_algorithm_id(token.get<std::string>())
                                  : std::nullopt;
                    if (!id) {
                        reply_error(res, 400, "unknown algorithm: " + token.dump());
                        return;
                    }
                    algorithms.push_back(*id);
                }
                if (algorithms.empty()) {
                    reply_error(res, 400, "algorithms must not be empty");
                    return;
                }
            }
            if (body.contains("k")) {
                if (!body["k"].is_number_integer() || body["k"].get<std::int64_t>() < 1) {
                    reply_error(res, 400, "k must be a positive integer");
                    return;
                }
                k = body["k"].get<std::size_t>();
            }
            if (body.contains("seed")) {
                if (!body["seed"].is_number_integer()) {
                    reply_error(res, 400, "seed must be an integer");
                    return;
                }
                seed = body["seed"].get<std::uint64_t>();
            }
        }

        std::string job_id;
        std::shared_ptr<EvalJob> job;
        {
            std::lock_guard<std::mutex> lock(jobs_mutex_);
            if (running_job_version_ && *running_job_version_ == snapshot->version) {
                reply_error(res, 409, "an evaluation is already running on this snapshot");
                return;
            }
            job_id = std::to_string(next_job_id_++);
            job = std::make_shared<EvalJob>();
            job->snapshot_version = snapshot->version;
            jobs_.emplace(job_id, job);
            running_job_version_ = snapshot->version;
            workers_.emplace_back([this, job, snapshot, algorithms, k, seed] {
                std::string report_json;
                std::string error;
                bool failed = false;
                try {
                    auto split = split_train_test(snapshot->dataset, SplitSpec{}, seed);
                    EvaluateOptions options;
                    options.k = k;
                    auto report = evaluate(algorithms, split.train, split.test_sets,
                                           snapshot->indexes, options);
                    report_json = report_to_json(report);
                } catch (const std::exception& e) {
                    failed = true;
                    error = e.what();
                }
                std::lock_guard<std::mutex> lock(jobs_mutex_);
                job->done = true;
                job->failed = failed;
                job->report_json = std::move(report_json);
                job->error = std::move(error);
                if (running_job_version_ && *running_job_version_ == job->snapshot_version) {
                    running_job_version_.reset();
                }
            });
        }
        reply_json(res, 202, "{\"jobId\":" + json_escape(job_id) + "}");
    });

    server_.Get(R"(/evaluation/report/([^/]+))",
                [this](const httplib::Request& req, httplib::Response& res) {
        std::shared_ptr<EvalJob> job;
        {
            std::lock_guard<std::mutex> lock(jobs_mutex_);
            auto it = jobs_.find(req.matches[1].str());
            if (it != jobs_.end()) job = it->second;
        }
        if (!job) {
            reply_error(res, 404, "unknown jobId: " + req.matches[1].str());
            return;
        }
        bool done;
        bool failed;
        std::string payload;
        {
            std::lock_guard<std::mutex> lock(jobs_mutex_);
            done = job->done;
            failed = job->failed;
            payload = failed ? job->error : job->report_json;
        }
        if (!done) {
            reply_json(res, 202, "{\"status\":\"pending\"}");
        } else if (failed) {
            reply_error(res, 500, payload);
        } else {
            reply_json(res, 200, payload);
        }
    });

    server_.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
        std::uint64_t version;
        {
            std::lock_guard<std::mutex> lock(state_mutex_);
            version = version_;
        }
        reply_json(res, 200,
                   "{\"status\":\"ok\",\"version\":" + std::to_string(version) + "}");
    });
}

} // namespace socrec
