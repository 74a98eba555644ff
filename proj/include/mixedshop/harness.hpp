#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mixedshop/forage.hpp"

namespace mixedshop {

enum class ReportFormat { Csv, Json };

ReportFormat report_format_from_name(const std::string& name);

// Flat "key = value" params text; keys are the SolverParams /
// TransitionParams / SwarmParams field names, '#' starts a comment.
// Unknown keys are errors (they are almost always typos).
SolverParams parse_params(std::istream& in, const SolverParams& base = {});
SolverParams parse_params_text(const std::string& text, const SolverParams& base = {});
SolverParams load_params_file(const std::string& path, const SolverParams& base = {});

// Rows sorted by (instance, shop, algo, seed). CSV columns are exactly
// instance,shop,algo,seed,best_makespan,evaluations,seconds; JSON carries the
// same keys plus the best-so-far trace.
void write_report(const std::vector<RunReport>& reports, ReportFormat format, std::ostream& out);
void write_report_file(const std::vector<RunReport>& reports, ReportFormat format,
                       const std::string& path);
std::vector<RunReport> read_json_report(std::istream& in);

struct BenchSpec {
    std::vector<std::pair<int, int>> sizes;          // (n, m)
    int num_seeds = 10;
    std::uint64_t base_seed = 1;                     // seeds base_seed .. base_seed+num_seeds-1
    std::vector<std::string> variants = {"job", "flow", "open", "mixed"};
    std::vector<Algo> algos = {Algo::Bfo, Algo::Abfo};
    long long budget = 50000;                        // decodes per run
    SolverParams params;
    int threads = 1;                                 // grid cells may run concurrently
};

// One RND instance per (size, seed), restricted to each shop variant, solved
// by each algorithm. Cells are independent, so the result does not depend on
// thread count.
std::vector<RunReport> bench_compare(const BenchSpec& spec);

// Per-(instance, variant) mean best makespan, one block per algorithm,
// variants as columns.
std::string aggregate_table(const std::vector<RunReport>& reports);

// "mixed" leaves the instance as parsed; anything else applies restrict_to_shop.
Instance apply_shop_variant(const Instance& inst, const std::string& variant);

// Witness files let `gantt` re-render a solution found earlier.
void write_witness_file(const std::string& path, const Instance& inst, const RunReport& report);
OperationSequence read_witness_file(const std::string& path, const Instance& inst,
                                    std::string* shop_out = nullptr);

std::vector<std::pair<int, int>> parse_size_list(const std::string& text);  // "3x3,5x5"

void sort_reports(std::vector<RunReport>& reports);

}  // namespace mixedshop
