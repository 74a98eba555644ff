#include "mixedshop/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace mixedshop {

ReportFormat report_format_from_name(const std::string& name) {
    if (name == "csv") return ReportFormat::Csv;
    if (name == "json") return ReportFormat::Json;
    throw std::invalid_argument("unknown report format: " + name);
}

namespace {

std::string trim(const std::string& s) {
    const std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

int to_int(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos == v.size()) return x;
    } catch (const std::exception&) {
    }
    throw ParseError(line, "expected an integer, got '" + v + "'");
}

double to_double(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos == v.size()) return x;
    } catch (const std::exception&) {
    }
    throw ParseError(line, "expected a number, got '" + v + "'");
}

bool to_bool(const std::string& v, int line) {
    if (v == "1" || v == "true" || v == "on") return true;
    if (v == "0" || v == "false" || v == "off") return false;
    throw ParseError(line, "expected a boolean (0/1/true/false), got '" + v + "'");
}

std::uint64_t to_u64(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const unsigned long long x = std::stoull(v, &pos);
        if (pos == v.size()) return static_cast<std::uint64_t>(x);
    } catch (const std::exception&) {
    }
    throw ParseError(line, "expected a non-negative integer, got '" + v + "'");
}

}  // namespace

SolverParams parse_params(std::istream& in, const SolverParams& base) {
    SolverParams p = base;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) throw ParseError(line_no, "missing value for '" + key + "'");

        if (key == "S") p.S = to_int(value, line_no);
        else if (key == "Nc") p.Nc = to_int(value, line_no);
        else if (key == "Ns") p.Ns = to_int(value, line_no);
        else if (key == "Nre") p.Nre = to_int(value, line_no);
        else if (key == "Ned") p.Ned = to_int(value, line_no);
        else if (key == "p_ed") p.p_ed = to_double(value, line_no);
        else if (key == "seed") p.seed = to_u64(value, line_no);
        else if (key == "beta") p.transition.beta = to_double(value, line_no);
        else if (key == "q0") p.transition.q0 = to_double(value, line_no);
        else if (key == "rho") p.transition.rho = to_double(value, line_no);
        else if (key == "alpha_g") p.transition.alpha_g = to_double(value, line_no);
        else if (key == "tau0") p.transition.tau0 = to_double(value, line_no);
        else if (key == "enabled") p.swarm.enabled = to_bool(value, line_no);
        else if (key == "M") p.swarm.M = to_double(value, line_no);
        else if (key == "W_a") p.swarm.W_a = to_double(value, line_no);
        else if (key == "W_r") p.swarm.W_r = to_double(value, line_no);
        else throw ParseError(line_no, "unknown parameter '" + key + "'");
    }
    return p;
}

SolverParams parse_params_text(const std::string& text, const SolverParams& base) {
    std::istringstream in(text);
    return parse_params(in, base);
}

SolverParams load_params_file(const std::string& path, const SolverParams& base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open params file: " + path);
    return parse_params(in, base);
}

void sort_reports(std::vector<RunReport>& reports) {
    std::sort(reports.begin(), reports.end(), [](const RunReport& a, const RunReport& b) {
        if (a.instance != b.instance) return a.instance < b.instance;
        if (a.shop != b.shop) return a.shop < b.shop;
        if (a.algo != b.algo) return a.algo < b.algo;
        return a.seed < b.seed;
    });
}

namespace {

std::string format_seconds(double seconds) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(6) << seconds;
    return out.str();
}

}  // namespace

void write_report(const std::vector<RunReport>& reports, ReportFormat format,
                  std::ostream& out) {
    std::vector<RunReport> rows = reports;
    sort_reports(rows);
    if (format == ReportFormat::Csv) {
        out << "instance,shop,algo,seed,best_makespan,evaluations,seconds\n";
        for (const RunReport& r : rows) {
            out << r.instance << ',' << r.shop << ',' << r.algo << ',' << r.seed << ','
                << r.best_makespan << ',' << r.evaluations << ',' << format_seconds(r.seconds)
                << '\n';
        }
        return;
    }
    nlohmann::json arr = nlohmann::json::array();
    for (const RunReport& r : rows) {
        nlohmann::json trace = nlohmann::json::array();
        for (const auto& [step, makespan] : r.trace) trace.push_back({step, makespan});
        arr.push_back({{"instance", r.instance},
                       {"shop", r.shop},
                       {"algo", r.algo},
                       {"seed", r.seed},
                       {"best_makespan", r.best_makespan},
                       {"evaluations", r.evaluations},
                       {"seconds", r.seconds},
                       {"trace", trace}});
    }
    out << arr.dump(2) << '\n';
}

void write_report_file(const std::vector<RunReport>& reports, ReportFormat format,
                       const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report file: " + path);
    write_report(reports, format, out);
}

std::vector<RunReport> read_json_report(std::istream& in) {
    nlohmann::json arr = nlohmann::json::parse(in);
    std::vector<RunReport> out;
    for (const nlohmann::json& item : arr) {
        RunReport r;
        r.instance = item.at("instance").get<std::string>();
        r.shop = item.at("shop").get<std::string>();
        r.algo = item.at("algo").get<std::string>();
        r.seed = item.at("seed").get<std::uint64_t>();
        r.best_makespan = item.at("best_makespan").get<int>();
        r.evaluations = item.at("evaluations").get<long long>();
        r.seconds = item.at("seconds").get<double>();
        for (const nlohmann::json& point : item.at("trace"))
            r.trace.emplace_back(point.at(0).get<long long>(), point.at(1).get<int>());
        out.push_back(std::move(r));
    }
    return out;
}

Instance apply_shop_variant(const Instance& inst, const std::string& variant) {
    if (variant == "mixed") return inst;
    if (variant == "job") return restrict_to_shop(inst, ShopClass::Job);
    if (variant == "flow") return restrict_to_shop(inst, ShopClass::Flow);
    if (variant == "open") return restrict_to_shop(inst, ShopClass::Open);
    throw std::invalid_argument("unknown shop variant: " + variant);
}

std::vector<RunReport> bench_compare(const BenchSpec& spec) {
    struct Cell {
        std::pair<int, int> size;
        std::uint64_t seed;
        std::string variant;
        Algo algo;
    };
    std::vector<Cell> cells;
    for (const auto& size : spec.sizes)
        for (int s = 0; s < spec.num_seeds; ++s)
            for (const std::string& variant : spec.variants)
                for (Algo algo : spec.algos)
                    cells.push_back(Cell{size, spec.base_seed + static_cast<std::uint64_t>(s),
                                         variant, algo});

    std::vector<RunReport> reports(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= cells.size()) return;
            const Cell& cell = cells[idx];
            const Instance base =
                generate_rnd(cell.size.first, cell.size.second, cell.seed, ClassPolicy::MixedCycle);
            const Instance inst = apply_shop_variant(base, cell.variant);
            SolverParams params = spec.params;
            params.seed = cell.seed;
            RunReport report = run_solver(inst, params, cell.algo, spec.budget);
            report.shop = cell.variant;
            reports[idx] = std::move(report);
        }
    };
    const int threads = std::max(1, spec.threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    sort_reports(reports);
    return reports;
}

std::string aggregate_table(const std::vector<RunReport>& reports) {
    // (algo -> instance -> variant -> makespans)
    std::map<std::string, std::map<std::string, std::map<std::string, std::vector<int>>>> cells;
    std::vector<std::string> variant_order;
    for (const RunReport& r : reports) {
        cells[r.algo][r.instance][r.shop].push_back(r.best_makespan);
        if (std::find(variant_order.begin(), variant_order.end(), r.shop) == variant_order.end())
            variant_order.push_back(r.shop);
    }
    // fixed column order when the usual four variants are present
    const std::vector<std::string> preferred = {"job", "flow", "open", "mixed"};
    std::stable_sort(variant_order.begin(), variant_order.end(),
                     [&](const std::string& a, const std::string& b) {
                         const auto pa = std::find(preferred.begin(), preferred.end(), a);
                         const auto pb = std::find(preferred.begin(), preferred.end(), b);
                         return pa - preferred.begin() < pb - preferred.begin();
                     });

    std::ostringstream out;
    for (const auto& [algo, by_instance] : cells) {
        out << "mean best makespan, " << algo << "\n";
        out << std::left << std::setw(16) << "instance";
        for (const std::string& v : variant_order) out << std::right << std::setw(10) << v;
        out << "\n";
        for (const auto& [instance, by_variant] : by_instance) {
            out << std::left << std::setw(16) << instance;
            for (const std::string& v : variant_order) {
                const auto it = by_variant.find(v);
                if (it == by_variant.end() || it->second.empty()) {
                    out << std::right << std::setw(10) << "-";
                    continue;
                }
                double sum = 0.0;
                for (int x : it->second) sum += x;
                out << std::right << std::setw(10) << std::fixed << std::setprecision(1)
                    << sum / static_cast<double>(it->second.size());
            }
            out << "\n";
        }
        out << "\n";
    }
    return out.str();
}

void write_witness_file(const std::string& path, const Instance& inst, const RunReport& report) {
    nlohmann::json seq = nlohmann::json::array();
    for (const OpRef& op : report.witness.order) seq.push_back({op.job, op.op_index});
    const nlohmann::json doc = {{"instance", report.instance},
                                {"shop", report.shop},
                                {"algo", report.algo},
                                {"seed", report.seed},
                                {"makespan", report.best_makespan},
                                {"sequence", seq}};
    (void)inst;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write witness file: " + path);
    out << doc.dump(2) << '\n';
}

OperationSequence read_witness_file(const std::string& path, const Instance& inst,
                                    std::string* shop_out) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open witness file: " + path);
    nlohmann::json doc = nlohmann::json::parse(in);
    OperationSequence seq;
    for (const nlohmann::json& pair : doc.at("sequence")) {
        const int job = pair.at(0).get<int>();
        const int op_index = pair.at(1).get<int>();
        if (job < 0 || job >= inst.n || op_index < 0 || op_index >= inst.m)
            throw std::runtime_error("witness operation out of range for this instance");
        seq.order.push_back(inst.op(job, op_index));
    }
    if (shop_out != nullptr && doc.contains("shop")) *shop_out = doc.at("shop").get<std::string>();
    return seq;
}

std::vector<std::pair<int, int>> parse_size_list(const std::string& text) {
    std::vector<std::pair<int, int>> sizes;
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const std::size_t x = item.find('x');
        if (x == std::string::npos)
            throw std::invalid_argument("bad size '" + item + "' (expected NxM)");
        sizes.emplace_back(to_int(trim(item.substr(0, x)), 0),
                           to_int(trim(item.substr(x + 1)), 0));
    }
    if (sizes.empty()) throw std::invalid_argument("empty size list");
    return sizes;
}

}  // namespace mixedshop
