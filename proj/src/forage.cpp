#include "mixedshop/forage.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mixedshop {

namespace {

// substream tags, mixed with the base seed and loop counters
constexpr std::uint64_t kInitTag = 0x696e6974;      // population init
constexpr std::uint64_t kChemoTag = 0x6368656d;     // chemotaxis step
constexpr std::uint64_t kDisperseTag = 0x64697370;  // elimination-dispersal

std::uint64_t u64(int v) { return static_cast<std::uint64_t>(v); }

// Shared low-level construction: replay prefix, then extend with `choose`
// until complete. Returns the semi-active makespan via builder.peak().
template <typename ChooseFn>
void construct_into(SequenceBuilder& builder, const std::vector<OpRef>& prefix,
                    std::vector<OpRef>& cand_buf, ChooseFn&& choose) {
    builder.reset();
    for (const OpRef& op : prefix) builder.push(op);
    while (!builder.complete()) {
        builder.collect_candidates(cand_buf);
        builder.push(choose(cand_buf));
    }
}

struct AbfoChooser {
    const Instance& inst;
    PheromoneMatrix& tau;
    const TransitionParams& params;
    Rng& rng;
    int from;

    explicit AbfoChooser(const Instance& inst, PheromoneMatrix& tau,
                         const TransitionParams& params, Rng& rng, int start_node)
        : inst(inst), tau(tau), params(params), rng(rng), from(start_node) {}

    OpRef operator()(const std::vector<OpRef>& cands) {
        const double q = rng.uniform01();
        const double u = rng.uniform01();
        const OpRef chosen = select_next(tau, inst, from, cands, params, q, u);
        const int to = inst.node_id(chosen.job, chosen.op_index);
        local_update(tau, from, to, params);
        from = to;
        return chosen;
    }
};

int prefix_end_node(const Instance& inst, const std::vector<OpRef>& prefix, int source) {
    if (prefix.empty()) return source;
    const OpRef& last = prefix.back();
    return inst.node_id(last.job, last.op_index);
}

std::vector<double> theta_from_builder(const Instance& inst, const SequenceBuilder& builder) {
    const double norm = static_cast<double>(std::max(1, lower_bound(inst)));
    std::vector<double> theta(static_cast<std::size_t>(inst.num_ops()), 0.0);
    for (const OpRef& op : builder.sequence()) {
        const int node = inst.node_id(op.job, op.op_index);
        theta[static_cast<std::size_t>(node)] =
            static_cast<double>(builder.start_of_node(node)) / norm;
    }
    return theta;
}

double swarm_cost_of(const std::vector<double>& theta, const Population& pop,
                     const SwarmParams& params) {
    if (!params.enabled) return 0.0;
    double attract = 0.0;
    double repel = 0.0;
    for (const Bacterium& other : pop.bacteria) {
        double dist2 = 0.0;
        for (std::size_t d = 0; d < theta.size(); ++d) {
            const double diff = theta[d] - other.theta[d];
            dist2 += diff * diff;
        }
        attract += std::exp(-params.W_a * dist2);
        repel += std::exp(-params.W_r * dist2);
    }
    return -params.M * (attract - repel);
}

void observe(Population& pop, const SequenceBuilder& builder, int makespan) {
    if (!pop.best.valid() || makespan < pop.best.makespan) {
        pop.best.sequence = OperationSequence{builder.sequence()};
        pop.best.makespan = makespan;
    }
}

}  // namespace

std::vector<std::string> validate_params(const SolverParams& params) {
    std::vector<std::string> out;
    if (params.S < 2) out.push_back("S must be >= 2");
    if (params.S % 2 != 0) out.push_back("S must be even");
    if (params.Nc < 1) out.push_back("Nc must be >= 1");
    if (params.Ns < 0) out.push_back("Ns must be >= 0");
    if (params.Nre < 1) out.push_back("Nre must be >= 1");
    if (params.Ned < 1) out.push_back("Ned must be >= 1");
    if (params.p_ed < 0.0 || params.p_ed > 1.0) out.push_back("p_ed must be in [0, 1]");
    const TransitionParams& t = params.transition;
    if (t.beta < 0.0) out.push_back("beta must be >= 0");
    if (t.q0 < 0.0 || t.q0 > 1.0) out.push_back("q0 must be in [0, 1]");
    if (t.rho < 0.0 || t.rho > 1.0) out.push_back("rho must be in [0, 1]");
    if (t.alpha_g < 0.0 || t.alpha_g > 1.0) out.push_back("alpha_g must be in [0, 1]");
    if (params.swarm.enabled) {
        if (params.swarm.M < 0.0) out.push_back("M must be >= 0");
        if (params.swarm.W_a <= 0.0) out.push_back("W_a must be > 0");
        if (params.swarm.W_r <= 0.0) out.push_back("W_r must be > 0");
    }
    return out;
}

Algo algo_from_name(const std::string& name) {
    if (name == "abfo") return Algo::Abfo;
    if (name == "bfo") return Algo::Bfo;
    throw std::invalid_argument("unknown algorithm: " + name + " (expected abfo or bfo)");
}

const char* algo_name(Algo algo) { return algo == Algo::Abfo ? "abfo" : "bfo"; }

OperationSequence construct_sequence(const Instance& inst, PheromoneMatrix& tau,
                                     const TransitionParams& params, Rng& rng,
                                     const OperationSequence& prefix) {
    SequenceBuilder builder(inst);
    std::vector<OpRef> cand_buf;
    AbfoChooser chooser(inst, tau, params, rng,
                        prefix_end_node(inst, prefix.order, tau.source_node()));
    construct_into(builder, prefix.order, cand_buf, chooser);
    return builder.take_sequence();
}

OperationSequence construct_uniform(const Instance& inst, Rng& rng,
                                    const OperationSequence& prefix) {
    SequenceBuilder builder(inst);
    std::vector<OpRef> cand_buf;
    construct_into(builder, prefix.order, cand_buf, [&](const std::vector<OpRef>& cands) {
        return cands[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<int>(cands.size()) - 1))];
    });
    return builder.take_sequence();
}

double swarm_cost(const Population& pop, int i, const SwarmParams& params) {
    return swarm_cost_of(pop.bacteria[static_cast<std::size_t>(i)].theta, pop, params);
}

namespace {

// One bacterium's tumble + swim phase. All randomness comes from its own
// substream so results are independent of evaluation order.
void move_bacterium(const Instance& inst, Population& pop, int i, PheromoneMatrix& tau,
                    const SolverParams& params, Algo algo, Rng& rng, EvalBudget& budget,
                    SequenceBuilder& builder, std::vector<OpRef>& cand_buf) {
    Bacterium& b = pop.bacteria[static_cast<std::size_t>(i)];
    const int total_ops = inst.num_ops();

    // The transition rule steers tumbles only; swim moves draw the new
    // operation order uniformly, as random as the tumble direction vector.
    auto build_uniform = [&](const std::vector<OpRef>& prefix) {
        construct_into(builder, prefix, cand_buf, [&](const std::vector<OpRef>& cands) {
            return cands[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<int>(cands.size()) - 1))];
        });
        ++budget.used;
        observe(pop, builder, builder.peak());
    };
    auto build_tumble = [&](const std::vector<OpRef>& prefix) {
        if (algo == Algo::Abfo) {
            AbfoChooser chooser(inst, tau, params.transition, rng,
                                prefix_end_node(inst, prefix, tau.source_node()));
            construct_into(builder, prefix, cand_buf, chooser);
            ++budget.used;
            observe(pop, builder, builder.peak());
        } else {
            build_uniform(prefix);
        }
    };

    auto objective = [&](int makespan, const std::vector<double>& theta) {
        return params.swarm.enabled
                   ? static_cast<double>(makespan) + swarm_cost_of(theta, pop, params.swarm)
                   : static_cast<double>(makespan);
    };

    auto try_accept = [&]() {
        const int makespan = builder.peak();
        if (params.swarm.enabled) {
            const std::vector<double> theta = theta_from_builder(inst, builder);
            if (objective(makespan, theta) < objective(b.fitness, b.theta)) {
                b.position = OperationSequence{builder.sequence()};
                b.fitness = makespan;
                b.theta = theta;
                return true;
            }
            return false;
        }
        if (makespan < b.fitness) {
            b.position = OperationSequence{builder.sequence()};
            b.fitness = makespan;
            b.theta = theta_from_builder(inst, builder);
            return true;
        }
        return false;
    };

    // tumble: fresh direction
    if (budget.exhausted()) return;
    build_tumble({});
    try_accept();

    // swim: rebuild the suffix from a random cut while strictly improving
    std::vector<OpRef> prefix;
    for (int s = 0; s < params.Ns; ++s) {
        if (budget.exhausted()) break;
        const int cut = total_ops >= 2 ? rng.uniform_int(1, total_ops - 1) : 0;
        prefix.assign(b.position.order.begin(), b.position.order.begin() + cut);
        build_uniform(prefix);
        if (!try_accept()) break;
    }

    b.health += b.fitness;
}

}  // namespace

void chemotaxis_step(const Instance& inst, Population& pop, PheromoneMatrix& tau,
                     const SolverParams& params, Algo algo, const StepCounters& counters,
                     EvalBudget& budget) {
    SequenceBuilder builder(inst);
    std::vector<OpRef> cand_buf;
    for (int i = 0; i < static_cast<int>(pop.bacteria.size()); ++i) {
        if (budget.exhausted()) break;
        Rng rng(mix_seed(pop.seed, {kChemoTag, u64(counters.dispersal), u64(counters.reproduction),
                                    u64(counters.chemotaxis), u64(i)}));
        move_bacterium(inst, pop, i, tau, params, algo, rng, budget, builder, cand_buf);
    }
    if (algo == Algo::Abfo && pop.best.valid())
        global_update(tau, inst, pop.best, params.transition);
}

void reproduce(Population& pop) {
    const std::size_t size = pop.bacteria.size();
    if (size % 2 != 0)
        throw std::invalid_argument("reproduce: population size must be even, got " +
                                    std::to_string(size));
    std::stable_sort(pop.bacteria.begin(), pop.bacteria.end(),
                     [](const Bacterium& a, const Bacterium& b) { return a.health < b.health; });
    const std::size_t half = size / 2;
    pop.bacteria.resize(half);
    pop.bacteria.reserve(size);
    for (std::size_t i = 0; i < half; ++i) pop.bacteria.push_back(pop.bacteria[i]);
    for (Bacterium& b : pop.bacteria) b.health = 0;
}

void eliminate_disperse(const Instance& inst, Population& pop, const SolverParams& params,
                        int dispersal_index, EvalBudget& budget) {
    SequenceBuilder builder(inst);
    std::vector<OpRef> cand_buf;
    for (int i = 0; i < static_cast<int>(pop.bacteria.size()); ++i) {
        Rng rng(mix_seed(pop.seed, {kDisperseTag, u64(dispersal_index), u64(i)}));
        if (rng.uniform01() >= params.p_ed) continue;
        if (budget.exhausted()) break;
        construct_into(builder, {}, cand_buf, [&](const std::vector<OpRef>& cands) {
            return cands[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<int>(cands.size()) - 1))];
        });
        ++budget.used;
        observe(pop, builder, builder.peak());
        Bacterium& b = pop.bacteria[static_cast<std::size_t>(i)];
        b.fitness = builder.peak();
        b.theta = theta_from_builder(inst, builder);
        b.position = builder.take_sequence();
        b.health = 0;
    }
}

RunReport run_solver(const Instance& inst, const SolverParams& params, Algo algo,
                     long long max_decodes) {
    {
        std::vector<std::string> errors = validate_instance(inst);
        const std::vector<std::string> param_errors = validate_params(params);
        errors.insert(errors.end(), param_errors.begin(), param_errors.end());
        if (!errors.empty()) {
            std::string what = "run_solver: invalid input:";
            for (const std::string& e : errors) what += "\n  " + e;
            throw std::invalid_argument(what);
        }
    }
    const auto start_time = std::chrono::steady_clock::now();

    SolverParams run_params = params;
    run_params.transition = resolved_transition(inst, params.transition);
    PheromoneMatrix tau = init_pheromone(inst, run_params.transition);
    EvalBudget budget{max_decodes, 0};

    Population pop;
    pop.seed = run_params.seed;
    pop.bacteria.resize(static_cast<std::size_t>(run_params.S));
    {
        SequenceBuilder builder(inst);
        std::vector<OpRef> cand_buf;
        for (int i = 0; i < run_params.S; ++i) {
            Rng rng(mix_seed(pop.seed, {kInitTag, u64(i)}));
            construct_into(builder, {}, cand_buf, [&](const std::vector<OpRef>& cands) {
                return cands[static_cast<std::size_t>(
                    rng.uniform_int(0, static_cast<int>(cands.size()) - 1))];
            });
            ++budget.used;
            observe(pop, builder, builder.peak());
            Bacterium& b = pop.bacteria[static_cast<std::size_t>(i)];
            b.fitness = builder.peak();
            b.theta = theta_from_builder(inst, builder);
            b.position = builder.take_sequence();
            b.health = 0;
        }
    }

    RunReport report;
    report.instance = inst.name;
    report.algo = algo_name(algo);
    report.seed = run_params.seed;
    report.trace.emplace_back(0, pop.best.makespan);

    long long step = 0;
    bool done = false;
    for (int l = 0; l < run_params.Ned && !done; ++l) {
        for (int k = 0; k < run_params.Nre && !done; ++k) {
            for (int j = 0; j < run_params.Nc; ++j) {
                if (budget.exhausted()) { done = true; break; }
                chemotaxis_step(inst, pop, tau, run_params, algo, StepCounters{l, k, j}, budget);
                ++step;
                if (pop.best.makespan < report.trace.back().second)
                    report.trace.emplace_back(step, pop.best.makespan);
            }
            if (!done) reproduce(pop);
        }
        if (!done) eliminate_disperse(inst, pop, run_params, l, budget);
    }

    report.best_makespan = pop.best.makespan;
    report.evaluations = budget.used;
    report.witness = pop.best.sequence;
    report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    return report;
}

}  // namespace mixedshop
