#include "mixedshop/colony.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mixedshop {

double PheromoneMatrix::max_entry() const {
    return *std::max_element(tau_.begin(), tau_.end());
}

double PheromoneMatrix::min_entry() const {
    return *std::min_element(tau_.begin(), tau_.end());
}

double default_tau0(const Instance& inst) {
    const int lb = std::max(1, lower_bound(inst));
    return 1.0 / (static_cast<double>(inst.num_ops()) * static_cast<double>(lb));
}

TransitionParams resolved_transition(const Instance& inst, TransitionParams params) {
    if (params.tau0 <= 0.0) params.tau0 = default_tau0(inst);
    return params;
}

PheromoneMatrix init_pheromone(const Instance& inst, const TransitionParams& params) {
    if (params.tau0 <= 0.0)
        throw std::invalid_argument("tau0 must be > 0 (got " + std::to_string(params.tau0) + ")");
    return PheromoneMatrix(inst.num_ops(), params.tau0);
}

std::vector<OpRef> candidates(const Instance& inst, const OperationSequence& partial) {
    SequenceBuilder builder(inst);
    for (const OpRef& op : partial.order) builder.push(op);
    std::vector<OpRef> out;
    builder.collect_candidates(out);
    return out;
}

double desirability(const OpRef& op) {
    constexpr double kZeroDurationEps = 0.5;
    return op.duration > 0 ? 1.0 / static_cast<double>(op.duration) : 1.0 / kZeroDurationEps;
}

OpRef select_next(const PheromoneMatrix& tau, const Instance& inst, int from,
                  const std::vector<OpRef>& cands, const TransitionParams& params,
                  double q, double u) {
    if (cands.empty()) throw std::invalid_argument("select_next: empty candidate set");

    auto score = [&](const OpRef& op) {
        return tau.at(from, inst.node_id(op.job, op.op_index)) *
               std::pow(desirability(op), params.beta);
    };

    if (q <= params.q0) {
        const OpRef* best = &cands.front();
        double best_score = score(*best);
        for (std::size_t i = 1; i < cands.size(); ++i) {
            const double s = score(cands[i]);
            const bool lex_smaller = cands[i].job < best->job ||
                                     (cands[i].job == best->job &&
                                      cands[i].op_index < best->op_index);
            if (s > best_score || (s == best_score && lex_smaller)) {
                best = &cands[i];
                best_score = s;
            }
        }
        return *best;
    }

    double total = 0.0;
    for (const OpRef& op : cands) total += score(op);
    const double threshold = u * total;
    double cumulative = 0.0;
    for (const OpRef& op : cands) {
        cumulative += score(op);
        if (cumulative > threshold) return op;
    }
    return cands.back();  // rounding fallthrough
}

void local_update(PheromoneMatrix& tau, int from, int to, const TransitionParams& params) {
    tau.set(from, to, (1.0 - params.rho) * tau.at(from, to) + params.rho * params.tau0);
}

void global_update(PheromoneMatrix& tau, const Instance& inst, const GlobalBest& best,
                   const TransitionParams& params) {
    if (!best.valid()) throw std::invalid_argument("global_update: best tour is empty");
    tau.scale_all(1.0 - params.alpha_g);
    const double deposit = params.alpha_g / static_cast<double>(std::max(1, best.makespan));
    int from = tau.source_node();
    for (const OpRef& op : best.sequence.order) {
        const int to = inst.node_id(op.job, op.op_index);
        tau.set(from, to, tau.at(from, to) + deposit);
        from = to;
    }
}

}  // namespace mixedshop
