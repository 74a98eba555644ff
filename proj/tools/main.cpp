#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mixedshop/decode.hpp"
#include "mixedshop/harness.hpp"

namespace {

using namespace mixedshop;

InstanceFormat sniff_format(const std::string& path, const std::string& fmt_flag) {
    if (!fmt_flag.empty()) return instance_format_from_name(fmt_flag);
    const std::string ext = std::filesystem::path(path).extension().string();
    if (ext == ".jss") return InstanceFormat::OrlibJss;
    if (ext == ".fs" || ext == ".tai") return InstanceFormat::TaillardFs;
    return InstanceFormat::Mixed;
}

Instance load_instance(const std::string& path, const std::string& fmt_flag) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    Instance inst = parse_instance(sniff_format(path, fmt_flag), in);
    inst.name = std::filesystem::path(path).stem().string();
    const std::vector<std::string> violations = validate_instance(inst);
    if (!violations.empty()) {
        std::string what = "invalid instance " + path + ":";
        for (const std::string& v : violations) what += "\n  " + v;
        throw std::runtime_error(what);
    }
    return inst;
}

// defaults -> MIXEDSHOP_PARAMS file -> --params file -> explicit --seed
SolverParams gather_params(const std::string& params_path, std::uint64_t seed_flag,
                           bool seed_given) {
    SolverParams params;
    if (const char* env = std::getenv("MIXEDSHOP_PARAMS"); env != nullptr && *env != '\0')
        params = load_params_file(env, params);
    if (!params_path.empty()) params = load_params_file(params_path, params);
    if (seed_given) params.seed = seed_flag;
    return params;
}

void emit_report(const std::vector<RunReport>& reports, const std::string& format,
                 const std::string& out_path) {
    if (out_path.empty()) return;
    write_report_file(reports, report_format_from_name(format), out_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mixed-shop scheduling: ant-inspired bacterial foraging solver"};
    app.require_subcommand(1);

    std::string instance_path, fmt_flag, shop = "mixed", algo_name_flag = "abfo";
    std::string params_path, format = "csv", out_path, witness_path, policy = "mixed-cycle";
    std::uint64_t seed = 1;
    long long budget = 50000;
    int op_limit = 12;
    int gen_n = 0, gen_m = 0;
    std::string sizes = "3x3,5x5,7x7", algos_flag = "abfo,bfo", shops_flag = "job,flow,open,mixed";
    int num_seeds = 10, jobs = 1;

    auto add_common = [&](CLI::App* cmd, bool with_algo) {
        cmd->add_option("--params", params_path, "params file (key = value lines)");
        cmd->add_option("--seed", seed, "base PRNG seed");
        cmd->add_option("--format", format, "report format: csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--out", out_path, "write a report file");
        if (with_algo)
            cmd->add_option("--algo", algo_name_flag, "abfo or bfo")
                ->check(CLI::IsMember({"abfo", "bfo"}));
    };

    CLI::App* solve = app.add_subcommand("solve", "solve one instance with bfo/abfo");
    solve->add_option("instance", instance_path, "instance file")->required();
    solve->add_option("--fmt", fmt_flag, "instance format: mixed, orlib-jss, taillard-fs");
    solve->add_option("--shop", shop, "restrict to a shop variant")
        ->check(CLI::IsMember({"job", "flow", "open", "mixed"}));
    solve->add_option("--budget", budget, "max schedule decodings");
    solve->add_option("--witness", witness_path, "write the best sequence as a witness file");
    add_common(solve, true);

    CLI::App* exact = app.add_subcommand("exact", "exhaustive optimum for small instances");
    exact->add_option("instance", instance_path, "instance file")->required();
    exact->add_option("--fmt", fmt_flag, "instance format");
    exact->add_option("--shop", shop, "restrict to a shop variant")
        ->check(CLI::IsMember({"job", "flow", "open", "mixed"}));
    exact->add_option("--op-limit", op_limit, "max operation count for exhaustive search");
    exact->add_option("--witness", witness_path, "write the optimal sequence as a witness file");
    add_common(exact, false);

    CLI::App* gen = app.add_subcommand("gen", "emit a random instance in mixed format");
    gen->add_option("n", gen_n, "job count")->required();
    gen->add_option("m", gen_m, "machine count")->required();
    gen->add_option("--policy", policy, "class policy")
        ->check(CLI::IsMember({"mixed-cycle", "all-job", "all-flow", "all-open"}));
    gen->add_option("--seed", seed, "PRNG seed");
    gen->add_option("--out", out_path, "output file (default stdout)");

    CLI::App* bench = app.add_subcommand("bench", "RND grid: sizes x variants x algos x seeds");
    bench->add_option("--sizes", sizes, "comma list of NxM sizes");
    bench->add_option("--seeds", num_seeds, "seeds per size");
    bench->add_option("--algos", algos_flag, "comma list from {abfo,bfo}");
    bench->add_option("--shops", shops_flag, "comma list from {job,flow,open,mixed}");
    bench->add_option("--budget", budget, "max schedule decodings per run");
    bench->add_option("--jobs", jobs, "worker threads over grid cells");
    add_common(bench, false);

    CLI::App* gantt = app.add_subcommand("gantt", "decode a stored witness and render it");
    gantt->add_option("instance", instance_path, "instance file")->required();
    gantt->add_option("--witness", witness_path, "witness file from solve/exact")->required();
    gantt->add_option("--fmt", fmt_flag, "instance format");
    gantt->add_option("--shop", shop,
                      "shop variant the witness was produced under (default: from the file)")
        ->check(CLI::IsMember({"job", "flow", "open", "mixed"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            const SolverParams params =
                gather_params(params_path, seed, solve->count("--seed") > 0);
            const Instance inst = apply_shop_variant(load_instance(instance_path, fmt_flag), shop);
            RunReport report = run_solver(inst, params, algo_from_name(algo_name_flag), budget);
            report.shop = shop;
            const Schedule sched = decode_sequence(inst, report.witness);
            std::cout << "instance " << report.instance << " (" << inst.n << "x" << inst.m
                      << ", shop=" << shop << ", algo=" << report.algo
                      << ", seed=" << report.seed << ")\n"
                      << "best makespan: " << report.best_makespan
                      << "  (lower bound " << lower_bound(inst) << ", " << report.evaluations
                      << " decodes)\n\n"
                      << render_gantt(inst, sched);
            if (!witness_path.empty()) write_witness_file(witness_path, inst, report);
            emit_report({report}, format, out_path);
        } else if (exact->parsed()) {
            const Instance inst = apply_shop_variant(load_instance(instance_path, fmt_flag), shop);
            const auto start = std::chrono::steady_clock::now();
            const ExactResult result = exact_optimum(inst, op_limit);
            const double seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            std::cout << "instance " << inst.name << " (" << inst.n << "x" << inst.m
                      << ", shop=" << shop << ")\n"
                      << "exact optimum makespan: " << result.makespan << "  ("
                      << result.sequences_tried << " sequences, lower bound "
                      << lower_bound(inst) << ")\n\n"
                      << render_gantt(inst, result.schedule);
            RunReport report;
            report.instance = inst.name;
            report.shop = shop;
            report.algo = "exact";
            report.seed = 0;
            report.best_makespan = result.makespan;
            report.evaluations = result.sequences_tried;
            report.seconds = seconds;
            report.witness = result.sequence;
            if (!witness_path.empty()) write_witness_file(witness_path, inst, report);
            emit_report({report}, format, out_path);
        } else if (gen->parsed()) {
            const Instance inst = generate_rnd(gen_n, gen_m, seed, class_policy_from_name(policy));
            const std::string text = write_instance(inst);
            if (out_path.empty()) {
                std::cout << text;
            } else {
                std::ofstream out(out_path);
                if (!out) throw std::runtime_error("cannot write " + out_path);
                out << text;
            }
        } else if (bench->parsed()) {
            BenchSpec spec;
            spec.sizes = parse_size_list(sizes);
            spec.num_seeds = num_seeds;
            spec.base_seed = seed;
            spec.budget = budget;
            spec.threads = jobs;
            spec.params = gather_params(params_path, seed, bench->count("--seed") > 0);
            spec.variants.clear();
            {
                std::istringstream ss(shops_flag);
                for (std::string item; std::getline(ss, item, ',');)
                    if (!item.empty()) spec.variants.push_back(item);
            }
            spec.algos.clear();
            {
                std::istringstream ss(algos_flag);
                for (std::string item; std::getline(ss, item, ',');)
                    if (!item.empty()) spec.algos.push_back(algo_from_name(item));
            }
            const std::vector<RunReport> reports = bench_compare(spec);
            std::cout << aggregate_table(reports);
            emit_report(reports, format, out_path);
        } else if (gantt->parsed()) {
            Instance inst = load_instance(instance_path, fmt_flag);
            std::string witness_shop;
            // read once against the unrestricted instance just to get the shop label
            std::ifstream probe(witness_path);
            if (!probe) throw std::runtime_error("cannot open witness file: " + witness_path);
            if (gantt->count("--shop") == 0) {
                nlohmann::json doc = nlohmann::json::parse(probe);
                if (doc.contains("shop")) shop = doc.at("shop").get<std::string>();
            }
            inst = apply_shop_variant(inst, shop);
            const OperationSequence seq = read_witness_file(witness_path, inst, &witness_shop);
            const Schedule sched = decode_sequence(inst, seq);
            const std::vector<std::string> violations = check_feasible(inst, sched);
            if (!violations.empty()) {
                std::string what = "witness does not decode feasibly:";
                for (const std::string& v : violations) what += "\n  " + v;
                throw std::runtime_error(what);
            }
            std::cout << "instance " << inst.name << " (shop=" << shop << "), makespan "
                      << sched.makespan << "\n\n"
                      << render_gantt(inst, sched);
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
    return 0;
}
