#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mixedshop/colony.hpp"
#include "mixedshop/decode.hpp"
#include "mixedshop/model.hpp"
#include "mixedshop/rng.hpp"

namespace mixedshop {

// Cell-to-cell signaling: attractant / repellent magnitudes over normalized
// start-time vectors. Off by default; the chemotaxis accept rule uses the
// raw makespan unless enabled.
struct SwarmParams {
    bool enabled = false;
    double M = 0.1;
    double W_a = 0.2;
    double W_r = 10.0;
};

struct SolverParams {
    int S = 20;     // population size, even
    int Nc = 50;    // chemotactic steps per reproduction cycle
    int Ns = 4;     // max swims per step
    int Nre = 4;    // reproduction cycles per dispersal event
    int Ned = 2;    // elimination-dispersal events
    double p_ed = 0.25;
    TransitionParams transition;
    SwarmParams swarm;
    std::uint64_t seed = 1;
};

std::vector<std::string> validate_params(const SolverParams& params);

enum class Algo { Abfo, Bfo };

Algo algo_from_name(const std::string& name);
const char* algo_name(Algo algo);

struct Bacterium {
    OperationSequence position;
    int fitness = 0;           // makespan of the decoded position
    long long health = 0;      // accumulated fitness since the last reproduction
    std::vector<double> theta; // start times / max(1, lower_bound), for swarming distance
};

struct Population {
    std::vector<Bacterium> bacteria;
    GlobalBest best;
    std::uint64_t seed = 0;  // base seed; per-bacterium streams derive from it
};

// Decode budget: every completed sequence construction / decode counts one.
struct EvalBudget {
    long long max_evals = 50000;
    long long used = 0;

    bool exhausted() const { return used >= max_evals; }
};

// Loop counters identifying one chemotaxis step; substream seeds derive from
// (seed, counters, bacterium index) so results do not depend on evaluation
// order.
struct StepCounters {
    int dispersal = 0;     // l
    int reproduction = 0;  // k
    int chemotaxis = 0;    // j
};

struct RunReport {
    std::string instance;
    std::string shop = "mixed";
    std::string algo;
    std::uint64_t seed = 0;
    int best_makespan = 0;
    long long evaluations = 0;
    double seconds = 0.0;
    std::vector<std::pair<long long, int>> trace;  // (chemotaxis step, best so far)
    OperationSequence witness;                     // not part of csv/json reports
};

// Extends prefix to a complete feasible sequence by the pseudo-random
// proportional rule, applying the local pheromone update to each chosen edge.
OperationSequence construct_sequence(const Instance& inst, PheromoneMatrix& tau,
                                     const TransitionParams& params, Rng& rng,
                                     const OperationSequence& prefix = {});

// Uniform choice among candidates at every step; no pheromone involved.
OperationSequence construct_uniform(const Instance& inst, Rng& rng,
                                    const OperationSequence& prefix = {});

// J_cc for bacterium i against the whole population (0 when disabled).
double swarm_cost(const Population& pop, int i, const SwarmParams& params);

// One chemotaxis step over all bacteria in index order: tumble, swims while
// strictly improving, health accumulation, then one global pheromone update
// (Abfo only). Evaluations stop when the budget runs out.
void chemotaxis_step(const Instance& inst, Population& pop, PheromoneMatrix& tau,
                     const SolverParams& params, Algo algo, const StepCounters& counters,
                     EvalBudget& budget);

// Sort ascending by health, drop the worst half, duplicate the best half,
// reset all healths. Throws std::invalid_argument for odd population sizes.
void reproduce(Population& pop);

// Each bacterium independently, with probability p_ed, restarts at a
// uniformly random feasible sequence. The global best survives.
void eliminate_disperse(const Instance& inst, Population& pop, const SolverParams& params,
                        int dispersal_index, EvalBudget& budget);

// Full Ned x Nre x Nc run. Deterministic for a fixed seed; the witness
// always decodes feasibly and best_makespan >= lower_bound(inst).
RunReport run_solver(const Instance& inst, const SolverParams& params, Algo algo,
                     long long max_decodes = 50000);

}  // namespace mixedshop
