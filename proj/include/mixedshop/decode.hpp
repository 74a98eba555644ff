#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "mixedshop/model.hpp"

namespace mixedshop {

// A precedence-feasible total order of all n*m operations; the position a
// bacterium occupies in the discrete search space.
struct OperationSequence {
    std::vector<OpRef> order;

    bool empty() const { return order.empty(); }
    std::size_t size() const { return order.size(); }

    friend bool operator==(const OperationSequence&, const OperationSequence&) = default;
};

struct Interval {
    int start = 0;
    int end = 0;

    friend bool operator==(const Interval&, const Interval&) = default;
};

struct Schedule {
    std::vector<Interval> intervals;  // indexed by node_id(job, op_index)
    int makespan = 0;
};

// Incremental eligibility tracking shared by sequence construction and the
// exhaustive oracle: an operation is eligible once its job-internal
// predecessors are scheduled (route order for Job/Flow; none for Open).
class SequenceBuilder {
public:
    explicit SequenceBuilder(const Instance& inst);

    const Instance& instance() const { return *inst_; }
    int scheduled_count() const { return static_cast<int>(seq_.size()); }
    bool complete() const { return scheduled_count() == inst_->num_ops(); }
    const std::vector<OpRef>& sequence() const { return seq_; }

    // eligible operations in (job, op_index) order
    void collect_candidates(std::vector<OpRef>& out) const;

    void push(const OpRef& op);
    void pop();  // undo the most recent push
    void reset();

    // semi-active timing of the current prefix
    int start_time_of(const OpRef& op) const {
        return std::max(machine_avail_[static_cast<std::size_t>(op.machine)],
                        job_avail_[static_cast<std::size_t>(op.job)]);
    }
    int peak() const { return peak_; }  // max end time so far

    // start assigned at push time; only meaningful for currently scheduled ops
    int start_of_node(int node) const { return start_by_node_[static_cast<std::size_t>(node)]; }

    OperationSequence take_sequence() { return OperationSequence{std::move(seq_)}; }

private:
    const Instance* inst_;
    std::vector<OpRef> seq_;
    std::vector<int> next_op_;              // Job/Flow jobs: next route position
    std::vector<std::vector<bool>> done_;   // Open jobs: which op positions are scheduled
    std::vector<int> scheduled_per_job_;
    std::vector<int> machine_avail_;
    std::vector<int> job_avail_;
    std::vector<int> start_by_node_;
    std::vector<int> peak_stack_;
    int peak_ = 0;
    struct Undo {
        int prev_machine_avail;
        int prev_job_avail;
    };
    std::vector<Undo> undo_;
};

// Semi-active decoding: each operation starts as soon as its machine and its
// job are both free, in sequence order. Throws std::invalid_argument if the
// sequence is not a permutation of the instance's operations or violates a
// job's route order.
Schedule decode_sequence(const Instance& inst, const OperationSequence& seq);

// Every violated Schedule invariant (machine overlap, job overlap, route
// order, duration mismatch, makespan mismatch); empty means feasible.
std::vector<std::string> check_feasible(const Instance& inst, const Schedule& sched);

struct ExactResult {
    int makespan = 0;
    OperationSequence sequence;
    Schedule schedule;
    long long sequences_tried = 0;
};

// Exhaustive minimum over all precedence-feasible sequences (the set of
// semi-active schedules contains an optimum, so this is the true optimum).
// Ties resolve to the lexicographically smallest witness sequence.
// Throws std::invalid_argument when n*m exceeds op_limit.
ExactResult exact_optimum(const Instance& inst, int op_limit = 12);

// Text Gantt chart: one row per machine, highest machine first, '-' marks
// idle time, bottom time axis. Width is 1 column per time unit up to 120
// columns, proportionally rescaled beyond that.
std::string render_gantt(const Instance& inst, const Schedule& sched);

}  // namespace mixedshop
