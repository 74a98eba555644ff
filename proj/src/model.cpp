#include "mixedshop/model.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <sstream>

#include "mixedshop/rng.hpp"

namespace mixedshop {

char shop_class_letter(ShopClass c) {
    switch (c) {
        case ShopClass::Job: return 'J';
        case ShopClass::Flow: return 'F';
        case ShopClass::Open: return 'O';
    }
    return '?';
}

const char* shop_class_name(ShopClass c) {
    switch (c) {
        case ShopClass::Job: return "job";
        case ShopClass::Flow: return "flow";
        case ShopClass::Open: return "open";
    }
    return "?";
}

static bool is_identity(const std::vector<int>& route) {
    for (std::size_t k = 0; k < route.size(); ++k)
        if (route[k] != static_cast<int>(k)) return false;
    return true;
}

static bool is_permutation_of_machines(const std::vector<int>& route, int m) {
    if (static_cast<int>(route.size()) != m) return false;
    std::vector<bool> seen(static_cast<std::size_t>(m), false);
    for (int r : route) {
        if (r < 0 || r >= m || seen[static_cast<std::size_t>(r)]) return false;
        seen[static_cast<std::size_t>(r)] = true;
    }
    return true;
}

std::vector<std::string> validate_instance(const Instance& inst) {
    std::vector<std::string> out;
    if (inst.n < 1) out.push_back("job count must be >= 1");
    if (inst.m < 1) out.push_back("machine count must be >= 1");
    if (static_cast<int>(inst.jobs.size()) != inst.n)
        out.push_back("job list size does not match n");
    for (std::size_t j = 0; j < inst.jobs.size(); ++j) {
        const JobSpec& job = inst.jobs[j];
        const std::string tag = "job " + std::to_string(j);
        if (!is_permutation_of_machines(job.route, inst.m)) {
            out.push_back(tag + ": route is not a permutation of 0.." +
                          std::to_string(inst.m - 1));
        } else if (job.shop == ShopClass::Flow && !is_identity(job.route)) {
            out.push_back(tag + ": flow route must be the identity order");
        }
        if (static_cast<int>(job.durations.size()) != inst.m) {
            out.push_back(tag + ": expected " + std::to_string(inst.m) + " durations");
            continue;
        }
        for (int mach = 0; mach < inst.m; ++mach) {
            if (job.durations[static_cast<std::size_t>(mach)] < 0)
                out.push_back(tag + ": negative duration on machine " + std::to_string(mach));
        }
    }
    return out;
}

int lower_bound(const Instance& inst) {
    int best = 0;
    for (const JobSpec& job : inst.jobs) {
        const int sum = std::accumulate(job.durations.begin(), job.durations.end(), 0);
        best = std::max(best, sum);
    }
    for (int mach = 0; mach < inst.m; ++mach) {
        int load = 0;
        for (const JobSpec& job : inst.jobs) load += job.durations[static_cast<std::size_t>(mach)];
        best = std::max(best, load);
    }
    return best;
}

InstanceFormat instance_format_from_name(const std::string& name) {
    if (name == "mixed") return InstanceFormat::Mixed;
    if (name == "orlib-jss") return InstanceFormat::OrlibJss;
    if (name == "taillard-fs") return InstanceFormat::TaillardFs;
    throw std::invalid_argument("unknown instance format: " + name);
}

const char* instance_format_name(InstanceFormat f) {
    switch (f) {
        case InstanceFormat::Mixed: return "mixed";
        case InstanceFormat::OrlibJss: return "orlib-jss";
        case InstanceFormat::TaillardFs: return "taillard-fs";
    }
    return "?";
}

namespace {

// Line-oriented tokenizer shared by all three formats; '#' starts a comment.
struct LineReader {
    std::istream& in;
    int line_no = 0;

    // next non-empty, non-comment line split into tokens; false at EOF
    bool next(std::vector<std::string>& tokens) {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            tokens.clear();
            std::istringstream ss(line);
            std::string tok;
            while (ss >> tok) tokens.push_back(tok);
            if (!tokens.empty()) return true;
        }
        return false;
    }
};

int parse_int(const std::string& tok, int line) {
    std::size_t pos = 0;
    int value = 0;
    try {
        value = std::stoi(tok, &pos);
    } catch (const std::exception&) {
        throw ParseError(line, "expected an integer, got '" + tok + "'");
    }
    if (pos != tok.size())
        throw ParseError(line, "expected an integer, got '" + tok + "'");
    return value;
}

std::pair<int, int> parse_header(LineReader& rd) {
    std::vector<std::string> tokens;
    if (!rd.next(tokens)) throw ParseError(rd.line_no + 1, "missing 'n m' header");
    if (tokens.size() != 2)
        throw ParseError(rd.line_no, "header must be exactly 'n m'");
    const int n = parse_int(tokens[0], rd.line_no);
    const int m = parse_int(tokens[1], rd.line_no);
    if (n < 1 || m < 1) throw ParseError(rd.line_no, "n and m must be >= 1");
    return {n, m};
}

std::vector<int> identity_route(int m) {
    std::vector<int> route(static_cast<std::size_t>(m));
    std::iota(route.begin(), route.end(), 0);
    return route;
}

std::vector<int> parse_route(const std::vector<std::string>& tokens, std::size_t from,
                             int m, int line) {
    std::vector<int> route;
    std::vector<bool> seen(static_cast<std::size_t>(m), false);
    for (std::size_t t = from; t < from + static_cast<std::size_t>(m); ++t) {
        const int mach = parse_int(tokens[t], line);
        if (mach < 0 || mach >= m)
            throw ParseError(line, "machine index " + std::to_string(mach) + " out of range");
        if (seen[static_cast<std::size_t>(mach)])
            throw ParseError(line, "machine " + std::to_string(mach) + " repeated in route");
        seen[static_cast<std::size_t>(mach)] = true;
        route.push_back(mach);
    }
    return route;
}

Instance parse_mixed(LineReader& rd) {
    auto [n, m] = parse_header(rd);
    Instance inst{n, m, {}, ""};
    std::vector<std::string> tokens;
    for (int j = 0; j < n; ++j) {
        if (!rd.next(tokens))
            throw ParseError(rd.line_no + 1, "expected " + std::to_string(n) +
                                                 " job lines, got " + std::to_string(j));
        JobSpec job;
        const std::string& cls = tokens[0];
        if (cls == "J") job.shop = ShopClass::Job;
        else if (cls == "F") job.shop = ShopClass::Flow;
        else if (cls == "O") job.shop = ShopClass::Open;
        else throw ParseError(rd.line_no, "unknown shop class '" + cls + "' (expected J, F or O)");

        // J lines: "J r_1 .. r_m : t_1 .. t_m"; F/O lines: "F : t_1 .. t_m"
        std::size_t colon = 0;
        for (std::size_t t = 1; t < tokens.size(); ++t)
            if (tokens[t] == ":") { colon = t; break; }
        if (colon == 0) throw ParseError(rd.line_no, "missing ':' separator");
        if (job.shop == ShopClass::Job) {
            if (colon != static_cast<std::size_t>(m) + 1)
                throw ParseError(rd.line_no, "J line needs " + std::to_string(m) +
                                                 " route entries before ':'");
            job.route = parse_route(tokens, 1, m, rd.line_no);
        } else {
            if (colon != 1)
                throw ParseError(rd.line_no, "route block is only allowed on J lines");
            job.route = identity_route(m);
        }
        if (tokens.size() - colon - 1 != static_cast<std::size_t>(m))
            throw ParseError(rd.line_no, "expected " + std::to_string(m) +
                                             " durations after ':'");
        for (std::size_t t = colon + 1; t < tokens.size(); ++t) {
            const int d = parse_int(tokens[t], rd.line_no);
            if (d < 0) throw ParseError(rd.line_no, "negative duration");
            job.durations.push_back(d);
        }
        inst.jobs.push_back(std::move(job));
    }
    return inst;
}

Instance parse_orlib_jss(LineReader& rd) {
    auto [n, m] = parse_header(rd);
    Instance inst{n, m, {}, ""};
    std::vector<std::string> tokens;
    for (int j = 0; j < n; ++j) {
        if (!rd.next(tokens))
            throw ParseError(rd.line_no + 1, "expected " + std::to_string(n) +
                                                 " job lines, got " + std::to_string(j));
        if (tokens.size() != static_cast<std::size_t>(2 * m))
            throw ParseError(rd.line_no, "expected " + std::to_string(m) +
                                             " 'machine duration' pairs");
        JobSpec job;
        job.shop = ShopClass::Job;
        job.durations.assign(static_cast<std::size_t>(m), 0);
        std::vector<bool> seen(static_cast<std::size_t>(m), false);
        for (int k = 0; k < m; ++k) {
            const int mach = parse_int(tokens[static_cast<std::size_t>(2 * k)], rd.line_no);
            const int dur = parse_int(tokens[static_cast<std::size_t>(2 * k + 1)], rd.line_no);
            if (mach < 0 || mach >= m)
                throw ParseError(rd.line_no,
                                 "machine index " + std::to_string(mach) + " out of range");
            if (seen[static_cast<std::size_t>(mach)])
                throw ParseError(rd.line_no,
                                 "machine " + std::to_string(mach) + " repeated in route");
            if (dur < 0) throw ParseError(rd.line_no, "negative duration");
            seen[static_cast<std::size_t>(mach)] = true;
            job.route.push_back(mach);
            job.durations[static_cast<std::size_t>(mach)] = dur;
        }
        inst.jobs.push_back(std::move(job));
    }
    return inst;
}

Instance parse_taillard_fs(LineReader& rd) {
    auto [n, m] = parse_header(rd);
    Instance inst{n, m, {}, ""};
    std::vector<std::string> tokens;
    for (int j = 0; j < n; ++j) {
        if (!rd.next(tokens))
            throw ParseError(rd.line_no + 1, "expected " + std::to_string(n) +
                                                 " job lines, got " + std::to_string(j));
        if (tokens.size() != static_cast<std::size_t>(m))
            throw ParseError(rd.line_no, "expected " + std::to_string(m) + " durations");
        JobSpec job;
        job.shop = ShopClass::Flow;
        job.route = identity_route(m);
        for (const std::string& tok : tokens) {
            const int d = parse_int(tok, rd.line_no);
            if (d < 0) throw ParseError(rd.line_no, "negative duration");
            job.durations.push_back(d);
        }
        inst.jobs.push_back(std::move(job));
    }
    return inst;
}

}  // namespace

Instance parse_instance(InstanceFormat format, std::istream& in) {
    LineReader rd{in};
    switch (format) {
        case InstanceFormat::Mixed: return parse_mixed(rd);
        case InstanceFormat::OrlibJss: return parse_orlib_jss(rd);
        case InstanceFormat::TaillardFs: return parse_taillard_fs(rd);
    }
    throw std::invalid_argument("bad instance format");
}

Instance parse_instance(InstanceFormat format, const std::string& text) {
    std::istringstream in(text);
    return parse_instance(format, in);
}

std::string write_instance(const Instance& inst) {
    std::ostringstream out;
    out << inst.n << ' ' << inst.m << '\n';
    for (const JobSpec& job : inst.jobs) {
        out << shop_class_letter(job.shop);
        if (job.shop == ShopClass::Job)
            for (int mach : job.route) out << ' ' << mach;
        out << " :";
        for (int d : job.durations) out << ' ' << d;
        out << '\n';
    }
    return out.str();
}

ClassPolicy class_policy_from_name(const std::string& name) {
    if (name == "mixed-cycle") return ClassPolicy::MixedCycle;
    if (name == "all-job") return ClassPolicy::AllJob;
    if (name == "all-flow") return ClassPolicy::AllFlow;
    if (name == "all-open") return ClassPolicy::AllOpen;
    throw std::invalid_argument("unknown class policy: " + name);
}

Instance generate_rnd(int n, int m, std::uint64_t seed, ClassPolicy policy) {
    if (n < 1 || m < 1) throw std::invalid_argument("generate_rnd: n and m must be >= 1");
    Rng rng(mix_seed(seed, {0x52D1ULL, static_cast<std::uint64_t>(n),
                            static_cast<std::uint64_t>(m),
                            static_cast<std::uint64_t>(policy)}));
    Instance inst;
    inst.n = n;
    inst.m = m;
    inst.name = "RND[" + std::to_string(n) + "x" + std::to_string(m) + "]";
    for (int j = 0; j < n; ++j) {
        JobSpec job;
        switch (policy) {
            case ClassPolicy::MixedCycle:
                job.shop = static_cast<ShopClass>(j % 3);  // J, F, O, J, ...
                break;
            case ClassPolicy::AllJob: job.shop = ShopClass::Job; break;
            case ClassPolicy::AllFlow: job.shop = ShopClass::Flow; break;
            case ClassPolicy::AllOpen: job.shop = ShopClass::Open; break;
        }
        job.route = identity_route(m);
        if (job.shop == ShopClass::Job) rng.shuffle(job.route);
        for (int mach = 0; mach < m; ++mach) job.durations.push_back(rng.uniform_int(1, 99));
        inst.jobs.push_back(std::move(job));
    }
    return inst;
}

Instance restrict_to_shop(const Instance& inst, ShopClass target) {
    Instance out = inst;
    for (JobSpec& job : out.jobs) {
        switch (target) {
            case ShopClass::Open:
                job.shop = ShopClass::Open;  // route kept as the stored default
                break;
            case ShopClass::Flow:
                job.shop = ShopClass::Flow;
                job.route = identity_route(inst.m);
                break;
            case ShopClass::Job:
                job.shop = ShopClass::Job;  // binds the stored route
                break;
        }
    }
    return out;
}

}  // namespace mixedshop
