#pragma once

#include <vector>

#include "mixedshop/decode.hpp"
#include "mixedshop/model.hpp"

namespace mixedshop {

struct TransitionParams {
    double beta = 1.0;     // desirability exponent
    double q0 = 0.5;       // exploitation threshold
    double rho = 0.1;      // local evaporation
    double alpha_g = 0.1;  // global decay / deposit weight
    double tau0 = 0.0;     // initial trail; <= 0 means derive 1/(N * lower_bound)
};

// Trail intensities on directed edges (r, s): r ranges over the N operation
// nodes plus a virtual source (node id N), s over operation nodes.
class PheromoneMatrix {
public:
    PheromoneMatrix() = default;
    PheromoneMatrix(int num_ops, double fill)
        : num_ops_(num_ops),
          tau_(static_cast<std::size_t>(num_ops + 1) * static_cast<std::size_t>(num_ops), fill) {}

    int num_ops() const { return num_ops_; }
    int source_node() const { return num_ops_; }

    double at(int from, int to) const {
        return tau_[static_cast<std::size_t>(from) * static_cast<std::size_t>(num_ops_) +
                    static_cast<std::size_t>(to)];
    }
    void set(int from, int to, double value) {
        tau_[static_cast<std::size_t>(from) * static_cast<std::size_t>(num_ops_) +
             static_cast<std::size_t>(to)] = value;
    }
    void scale_all(double factor) {
        for (double& t : tau_) t *= factor;
    }
    double max_entry() const;
    double min_entry() const;

private:
    int num_ops_ = 0;
    std::vector<double> tau_;
};

struct GlobalBest {
    OperationSequence sequence;
    int makespan = 0;

    bool valid() const { return !sequence.empty(); }
};

// Scale-matched default so global deposits (1/L_gb) neither vanish nor
// dominate: 1 / (N * lower_bound).
double default_tau0(const Instance& inst);

// tau0 <= 0 is resolved to default_tau0(inst); everything else passes through.
TransitionParams resolved_transition(const Instance& inst, TransitionParams params);

// Every edge starts at tau0. Throws std::invalid_argument if tau0 <= 0.
PheromoneMatrix init_pheromone(const Instance& inst, const TransitionParams& params);

// Unscheduled operations whose job-internal predecessors are all in `partial`
// (route order for Job/Flow jobs, none among an Open job's operations),
// in (job, op_index) order. Empty iff partial is complete.
std::vector<OpRef> candidates(const Instance& inst, const OperationSequence& partial);

// Greedy signal: inverse of the operation's processing time, with zero
// durations guarded by eps = 0.5 to keep it finite.
double desirability(const OpRef& op);

// Pseudo-random proportional rule. q is the exploit/explore draw, u drives
// the roulette wheel when q > q0 (both uniform in [0,1)). Exploitation ties
// resolve to the lowest (job, op_index).
OpRef select_next(const PheromoneMatrix& tau, const Instance& inst, int from,
                  const std::vector<OpRef>& cands, const TransitionParams& params,
                  double q, double u);

// tau(r,s) <- (1 - rho) * tau(r,s) + rho * tau0, on one edge
void local_update(PheromoneMatrix& tau, int from, int to, const TransitionParams& params);

// Edges on the best tour (source -> first, then consecutive pairs) gain
// (1 - alpha_g) * tau + alpha_g / L_gb; every other edge decays to
// (1 - alpha_g) * tau.
void global_update(PheromoneMatrix& tau, const Instance& inst, const GlobalBest& best,
                   const TransitionParams& params);

}  // namespace mixedshop
