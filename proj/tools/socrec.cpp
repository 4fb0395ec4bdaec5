#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "socrec/evaluation.hpp"
#include "socrec/ingestion.hpp"
#include "socrec/recommenders.hpp"
#include "socrec/serialize.hpp"
#include "socrec/service.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

socrec::Dataset load_dataset(const std::vector<std::string>& paths) {
    std::vector<socrec::RecordEnvelope> records;
    for (const auto& path : paths) {
        auto loaded = socrec::load_jsonl_file(path);
        records.insert(records.end(), std::make_move_iterator(loaded.begin()),
                       std::make_move_iterator(loaded.end()));
    }
    return socrec::dataset_from_records(records);
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << content;
}

std::pair<std::string, int> parse_address(const std::string& addr) {
    auto colon = addr.rfind(':');
    if (colon == std::string::npos || colon + 1 >= addr.size()) {
        throw CLI::ValidationError("--addr", "expected host:port");
    }
    int port;
    try {
        port = std::stoi(addr.substr(colon + 1));
    } catch (const std::exception&) {
        throw CLI::ValidationError("--addr", "invalid port");
    }
    return {addr.substr(0, colon), port};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"socrec: social marketplace recommender engine"};
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "write a synthetic dataset as JSONL");
    std::uint64_t gen_seed = 0;
    socrec::SyntheticParams params;
    std::string gen_output;
    generate->add_option("--seed", gen_seed, "generator seed")->required();
    generate->add_option("--users", params.user_count, "number of users")->required();
    generate->add_option("--items", params.item_count, "number of items")->required();
    generate->add_option("--communities", params.community_count, "number of communities")
        ->required();
    generate
        ->add_option("--social-fraction", params.social_fraction,
                     "fraction of users with social data")
        ->required();
    generate->add_option("--purchases-per-user", params.purchases_per_user,
                         "purchase events per user");
    generate->add_option("-o,--output", gen_output, "output path")->required();

    // recommend
    auto* rec_cmd = app.add_subcommand("recommend", "print recommendations for one user");
    std::vector<std::string> rec_data;
    std::string rec_algo;
    std::string rec_user;
    std::size_t rec_k = 10;
    rec_cmd->add_option("--data", rec_data, "JSONL dataset file(s)")->required();
    rec_cmd->add_option("--algo", rec_algo, "algorithm id")->required();
    rec_cmd->add_option("--user", rec_user, "target user id")->required();
    rec_cmd->add_option("-k", rec_k, "list length");

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "run the offline benchmark");
    std::vector<std::string> eval_data;
    std::vector<std::string> eval_algos;
    std::uint64_t eval_seed = 0;
    std::size_t eval_k = 10;
    std::string eval_output;
    eval_cmd->add_option("--data", eval_data, "JSONL dataset file(s)")->required();
    eval_cmd->add_option("--seed", eval_seed, "split seed")->required();
    eval_cmd->add_option("-k", eval_k, "cutoff");
    eval_cmd->add_option("--algo", eval_algos, "algorithm filter (default: all)");
    eval_cmd->add_option("-o,--output", eval_output, "report path (default: stdout)");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "run an experiment sweep");
    std::string sweep_kind;
    std::vector<std::string> sweep_data;
    std::uint64_t sweep_seed = 0;
    std::size_t sweep_k = 10;
    std::string sweep_output;
    sweep_cmd->add_option("kind", sweep_kind, "profile or coldstart")
        ->required()
        ->check(CLI::IsMember({"profile", "coldstart"}));
    sweep_cmd->add_option("--data", sweep_data, "JSONL dataset file(s)")->required();
    sweep_cmd->add_option("--seed", sweep_seed, "sweep seed")->required();
    sweep_cmd->add_option("-k", sweep_k, "cutoff");
    sweep_cmd->add_option("-o,--output", sweep_output, "TSV path (default: stdout)");

    // runtime
    auto* runtime_cmd = app.add_subcommand("runtime", "measure mean per-user latency");
    std::vector<std::string> runtime_data;
    std::string runtime_algo;
    std::size_t runtime_sample = 100;
    std::size_t runtime_reps = 3;
    runtime_cmd->add_option("--data", runtime_data, "JSONL dataset file(s)")->required();
    runtime_cmd->add_option("--algo", runtime_algo, "algorithm id")->required();
    runtime_cmd->add_option("--sample", runtime_sample, "number of users to time");
    runtime_cmd->add_option("--repetitions", runtime_reps, "repetitions per user");

    // serve
    auto* serve_cmd = app.add_subcommand("serve", "run the HTTP service");
    std::string addr;
    serve_cmd->add_option("--addr", addr, "listen address host:port "
                                          "(default: env SOCREC_ADDR or 127.0.0.1:8080)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*generate) {
            auto dataset = socrec::generate_synthetic(params, gen_seed);
            std::ofstream out(gen_output, std::ios::binary);
            if (!out) {
                throw std::runtime_error("cannot write " + gen_output);
            }
            socrec::write_dataset_jsonl(dataset, out);
            return kExitOk;
        }

        if (*rec_cmd) {
            auto algorithm = socrec::parse_algorithm_id(rec_algo);
            if (!algorithm) {
                std::cerr << "unknown algorithm: " << rec_algo << "\n";
                return kExitUsage;
            }
            if (rec_k < 1) {
                std::cerr << "-k must be >= 1\n";
                return kExitUsage;
            }
            auto dataset = load_dataset(rec_data);
            auto indexes = socrec::build_item_indexes(dataset);
            auto recs = socrec::recommend(*algorithm, rec_user, dataset, indexes, rec_k);
            std::cout << socrec::recommendations_to_json(recs) << "\n";
            return kExitOk;
        }

        if (*eval_cmd) {
            std::vector<socrec::AlgorithmId> algorithms;
            if (eval_algos.empty()) {
                algorithms.assign(socrec::kAllAlgorithms.begin(),
                                  socrec::kAllAlgorithms.end());
            } else {
                for (const auto& token : eval_algos) {
                    auto id = socrec::parse_algorithm_id(token);
                    if (!id) {
                        std::cerr << "unknown algorithm: " << token << "\n";
                        return kExitUsage;
                    }
                    algorithms.push_back(*id);
                }
            }
            if (eval_k < 1) {
                std::cerr << "-k must be >= 1\n";
                return kExitUsage;
            }
            auto dataset = load_dataset(eval_data);
            auto split = socrec::split_train_test(dataset, socrec::SplitSpec{}, eval_seed);
            auto indexes = socrec::build_item_indexes(split.train);
            socrec::EvaluateOptions options;
            options.k = eval_k;
            auto report = socrec::evaluate(algorithms, split.train, split.test_sets,
                                           indexes, options);
            write_output(eval_output, socrec::report_to_json(report) + "\n");
            return kExitOk;
        }

        if (*sweep_cmd) {
            if (sweep_k < 1) {
                std::cerr << "-k must be >= 1\n";
                return kExitUsage;
            }
            auto dataset = load_dataset(sweep_data);
            auto series = sweep_kind == "profile"
                              ? socrec::run_profile_sweep(dataset, socrec::SplitSpec{},
                                                          sweep_seed, sweep_k)
                              : socrec::run_coldstart_sweep(dataset, socrec::SplitSpec{},
                                                            sweep_seed, sweep_k);
            write_output(sweep_output, socrec::sweep_to_tsv(series));
            return kExitOk;
        }

        if (*runtime_cmd) {
            auto algorithm = socrec::parse_algorithm_id(runtime_algo);
            if (!algorithm) {
                std::cerr << "unknown algorithm: " << runtime_algo << "\n";
                return kExitUsage;
            }
            auto dataset = load_dataset(runtime_data);
            auto indexes = socrec::build_item_indexes(dataset);
            std::vector<std::string> sample;
            for (const auto& user : dataset.users()) {
                if (sample.size() == runtime_sample) break;
                sample.push_back(user);
            }
            double mean_ms = socrec::measure_runtime(*algorithm, dataset, indexes, sample,
                                                     runtime_reps);
            std::cout << socrec::to_string(*algorithm) << "\t"
                      << socrec::format_number(mean_ms) << "\n";
            return kExitOk;
        }

        if (*serve_cmd) {
            if (addr.empty()) {
                const char* env = std::getenv("SOCREC_ADDR");
                addr = env != nullptr ? env : "127.0.0.1:8080";
            }
            auto [host, port] = parse_address(addr);
            socrec::RecommenderService service;
            std::cerr << "listening on " << host << ":" << port << "\n";
            if (!service.listen(host, port)) {
                std::cerr << "failed to listen on " << addr << "\n";
                return kExitRuntime;
            }
            return kExitOk;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
