// Benchmark comparing the serial reference evaluation loop against the
// OpenMP kernel, and reporting per-algorithm single-user latencies.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "socrec/evaluation.hpp"
#include "socrec/serialize.hpp"

using namespace socrec;

namespace {

double timed_evaluate(const std::vector<AlgorithmId>& algorithms, const Dataset& train,
                      const TestSets& tests, const ItemIndexes& indexes, bool parallel,
                      std::string& report_json) {
    EvaluateOptions options;
    options.parallel = parallel;
    auto start = std::chrono::steady_clock::now();
    auto report = evaluate(algorithms, train, tests, indexes, options);
    auto stop = std::chrono::steady_clock::now();
    report_json = report_to_json(report);
    return std::chrono::duration<double, std::milli>(stop - start).count();
}

} // namespace

int main(int argc, char** argv) {
    SyntheticParams params;
    params.user_count = 4000;
    params.item_count = 2000;
    params.community_count = 10;
    params.purchases_per_user = 5;
    params.social_fraction = 0.5;
    std::uint64_t seed = 42;
    if (argc > 1) params.user_count = std::stoul(argv[1]);
    if (argc > 2) params.item_count = std::stoul(argv[2]);
    if (argc > 3) seed = std::stoull(argv[3]);

    std::printf("generating synthetic dataset: %zu users, %zu items, seed %llu\n",
                params.user_count, params.item_count,
                static_cast<unsigned long long>(seed));
    Dataset dataset = generate_synthetic(params, seed);
    auto split = split_train_test(dataset, SplitSpec{}, seed);
    ItemIndexes indexes = build_item_indexes(split.train);
    std::vector<AlgorithmId> algorithms(kAllAlgorithms.begin(), kAllAlgorithms.end());

#ifdef _OPENMP
    int threads = omp_get_max_threads();
#else
    int threads = 1;
#endif
    std::printf("evaluating %zu algorithms over %zu test users\n", algorithms.size(),
                split.test_sets.size());

    std::string serial_report;
    std::string parallel_report;
    double serial_ms = timed_evaluate(algorithms, split.train, split.test_sets, indexes,
                                      false, serial_report);
    double parallel_ms = timed_evaluate(algorithms, split.train, split.test_sets, indexes,
                                        true, parallel_report);

    std::printf("serial reference : %10.1f ms\n", serial_ms);
    std::printf("openmp (%2d thr)  : %10.1f ms\n", threads, parallel_ms);
    std::printf("speedup          : %10.2fx\n", serial_ms / parallel_ms);
    std::printf("reports identical: %s\n",
                serial_report == parallel_report ? "yes" : "NO (bug)");

    std::printf("\nper-algorithm mean single-user latency (ms, sequential)\n");
    std::vector<std::string> sample;
    for (const auto& [user, _] : split.test_sets) {
        if (sample.size() == 50) break;
        sample.push_back(user);
    }
    for (AlgorithmId id : algorithms) {
        double ms = measure_runtime(id, split.train, indexes, sample, 2);
        std::printf("  %-6s %8.3f\n", to_string(id).c_str(), ms);
    }
    return serial_report == parallel_report ? 0 : 1;
}
