#include "mixedshop/decode.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace mixedshop {

SequenceBuilder::SequenceBuilder(const Instance& inst) : inst_(&inst) {
    next_op_.assign(static_cast<std::size_t>(inst.n), 0);
    done_.assign(static_cast<std::size_t>(inst.n),
                 std::vector<bool>(static_cast<std::size_t>(inst.m), false));
    scheduled_per_job_.assign(static_cast<std::size_t>(inst.n), 0);
    machine_avail_.assign(static_cast<std::size_t>(inst.m), 0);
    job_avail_.assign(static_cast<std::size_t>(inst.n), 0);
    start_by_node_.assign(static_cast<std::size_t>(inst.num_ops()), 0);
    seq_.reserve(static_cast<std::size_t>(inst.num_ops()));
}

void SequenceBuilder::reset() {
    std::fill(next_op_.begin(), next_op_.end(), 0);
    for (auto& row : done_) std::fill(row.begin(), row.end(), false);
    std::fill(scheduled_per_job_.begin(), scheduled_per_job_.end(), 0);
    std::fill(machine_avail_.begin(), machine_avail_.end(), 0);
    std::fill(job_avail_.begin(), job_avail_.end(), 0);
    seq_.clear();
    peak_stack_.clear();
    undo_.clear();
    peak_ = 0;
}

void SequenceBuilder::collect_candidates(std::vector<OpRef>& out) const {
    out.clear();
    for (int j = 0; j < inst_->n; ++j) {
        const JobSpec& job = inst_->jobs[static_cast<std::size_t>(j)];
        if (job.shop == ShopClass::Open) {
            const auto& done = done_[static_cast<std::size_t>(j)];
            for (int k = 0; k < inst_->m; ++k)
                if (!done[static_cast<std::size_t>(k)]) out.push_back(inst_->op(j, k));
        } else {
            const int k = next_op_[static_cast<std::size_t>(j)];
            if (k < inst_->m) out.push_back(inst_->op(j, k));
        }
    }
}

void SequenceBuilder::push(const OpRef& op) {
    const int start = start_time_of(op);
    const int end = start + op.duration;
    start_by_node_[static_cast<std::size_t>(inst_->node_id(op.job, op.op_index))] = start;
    undo_.push_back(Undo{machine_avail_[static_cast<std::size_t>(op.machine)],
                         job_avail_[static_cast<std::size_t>(op.job)]});
    machine_avail_[static_cast<std::size_t>(op.machine)] = end;
    job_avail_[static_cast<std::size_t>(op.job)] = end;
    peak_stack_.push_back(peak_);
    peak_ = std::max(peak_, end);
    if (inst_->jobs[static_cast<std::size_t>(op.job)].shop == ShopClass::Open)
        done_[static_cast<std::size_t>(op.job)][static_cast<std::size_t>(op.op_index)] = true;
    else
        ++next_op_[static_cast<std::size_t>(op.job)];
    ++scheduled_per_job_[static_cast<std::size_t>(op.job)];
    seq_.push_back(op);
}

void SequenceBuilder::pop() {
    const OpRef op = seq_.back();
    seq_.pop_back();
    machine_avail_[static_cast<std::size_t>(op.machine)] = undo_.back().prev_machine_avail;
    job_avail_[static_cast<std::size_t>(op.job)] = undo_.back().prev_job_avail;
    undo_.pop_back();
    peak_ = peak_stack_.back();
    peak_stack_.pop_back();
    if (inst_->jobs[static_cast<std::size_t>(op.job)].shop == ShopClass::Open)
        done_[static_cast<std::size_t>(op.job)][static_cast<std::size_t>(op.op_index)] = false;
    else
        --next_op_[static_cast<std::size_t>(op.job)];
    --scheduled_per_job_[static_cast<std::size_t>(op.job)];
}

Schedule decode_sequence(const Instance& inst, const OperationSequence& seq) {
    const int total = inst.num_ops();
    if (static_cast<int>(seq.order.size()) != total)
        throw std::invalid_argument("sequence is not a permutation: has " +
                                    std::to_string(seq.order.size()) + " of " +
                                    std::to_string(total) + " operations");

    Schedule sched;
    sched.intervals.assign(static_cast<std::size_t>(total), Interval{});
    std::vector<bool> seen(static_cast<std::size_t>(total), false);
    std::vector<int> next_op(static_cast<std::size_t>(inst.n), 0);
    std::vector<int> machine_avail(static_cast<std::size_t>(inst.m), 0);
    std::vector<int> job_avail(static_cast<std::size_t>(inst.n), 0);

    for (const OpRef& op : seq.order) {
        if (op.job < 0 || op.job >= inst.n || op.op_index < 0 || op.op_index >= inst.m)
            throw std::invalid_argument("sequence is not a permutation: operation out of range");
        if (inst.op(op.job, op.op_index) != op)
            throw std::invalid_argument("sequence operation does not belong to this instance");
        const int node = inst.node_id(op.job, op.op_index);
        if (seen[static_cast<std::size_t>(node)])
            throw std::invalid_argument("sequence is not a permutation: job " +
                                        std::to_string(op.job) + " op " +
                                        std::to_string(op.op_index) + " repeated");
        seen[static_cast<std::size_t>(node)] = true;

        const JobSpec& job = inst.jobs[static_cast<std::size_t>(op.job)];
        if (job.shop != ShopClass::Open) {
            const int expected = next_op[static_cast<std::size_t>(op.job)];
            if (op.op_index != expected)
                throw std::invalid_argument(
                    "precedence violation: job " + std::to_string(op.job) + " op " +
                    std::to_string(op.op_index) + " scheduled before op " +
                    std::to_string(op.op_index - 1));
            ++next_op[static_cast<std::size_t>(op.job)];
        }

        const int start = std::max(machine_avail[static_cast<std::size_t>(op.machine)],
                                   job_avail[static_cast<std::size_t>(op.job)]);
        const int end = start + op.duration;
        machine_avail[static_cast<std::size_t>(op.machine)] = end;
        job_avail[static_cast<std::size_t>(op.job)] = end;
        sched.intervals[static_cast<std::size_t>(node)] = Interval{start, end};
        sched.makespan = std::max(sched.makespan, end);
    }
    return sched;
}

std::vector<std::string> check_feasible(const Instance& inst, const Schedule& sched) {
    std::vector<std::string> out;
    const int total = inst.num_ops();
    if (static_cast<int>(sched.intervals.size()) != total) {
        out.push_back("schedule has " + std::to_string(sched.intervals.size()) +
                      " intervals, instance has " + std::to_string(total) + " operations");
        return out;
    }

    int max_end = 0;
    for (int node = 0; node < total; ++node) {
        const OpRef op = inst.op_from_node(node);
        const Interval iv = sched.intervals[static_cast<std::size_t>(node)];
        const std::string tag =
            "job " + std::to_string(op.job) + " op " + std::to_string(op.op_index);
        if (iv.start < 0) out.push_back(tag + ": negative start time");
        if (iv.end - iv.start != op.duration)
            out.push_back(tag + ": interval length " + std::to_string(iv.end - iv.start) +
                          " does not match duration " + std::to_string(op.duration));
        max_end = std::max(max_end, iv.end);
    }
    if (sched.makespan != max_end)
        out.push_back("makespan " + std::to_string(sched.makespan) +
                      " does not equal max end time " + std::to_string(max_end));

    // pairwise overlap on each machine and within each job (zero-length
    // intervals cannot overlap anything)
    auto overlaps = [](const Interval& a, const Interval& b) {
        return std::max(a.start, b.start) < std::min(a.end, b.end);
    };
    for (int mach = 0; mach < inst.m; ++mach) {
        std::vector<int> nodes;
        for (int j = 0; j < inst.n; ++j) {
            const JobSpec& job = inst.jobs[static_cast<std::size_t>(j)];
            for (int k = 0; k < inst.m; ++k)
                if (job.route[static_cast<std::size_t>(k)] == mach)
                    nodes.push_back(inst.node_id(j, k));
        }
        for (std::size_t a = 0; a < nodes.size(); ++a)
            for (std::size_t b = a + 1; b < nodes.size(); ++b)
                if (overlaps(sched.intervals[static_cast<std::size_t>(nodes[a])],
                             sched.intervals[static_cast<std::size_t>(nodes[b])]))
                    out.push_back("machine " + std::to_string(mach) + ": operations of job " +
                                  std::to_string(nodes[a] / inst.m) + " and job " +
                                  std::to_string(nodes[b] / inst.m) + " overlap");
    }
    for (int j = 0; j < inst.n; ++j) {
        for (int a = 0; a < inst.m; ++a)
            for (int b = a + 1; b < inst.m; ++b)
                if (overlaps(sched.intervals[static_cast<std::size_t>(inst.node_id(j, a))],
                             sched.intervals[static_cast<std::size_t>(inst.node_id(j, b))]))
                    out.push_back("job " + std::to_string(j) + ": ops " + std::to_string(a) +
                                  " and " + std::to_string(b) + " overlap");
        const JobSpec& job = inst.jobs[static_cast<std::size_t>(j)];
        if (job.shop == ShopClass::Open) continue;
        for (int k = 0; k + 1 < inst.m; ++k) {
            const Interval cur = sched.intervals[static_cast<std::size_t>(inst.node_id(j, k))];
            const Interval nxt = sched.intervals[static_cast<std::size_t>(inst.node_id(j, k + 1))];
            if (cur.end > nxt.start)
                out.push_back("job " + std::to_string(j) + ": route order violated between ops " +
                              std::to_string(k) + " and " + std::to_string(k + 1));
        }
    }
    return out;
}

namespace {

struct ExactSearch {
    SequenceBuilder builder;
    std::vector<std::vector<OpRef>> cand_buf;  // one buffer per depth
    int best = std::numeric_limits<int>::max();
    std::vector<OpRef> witness;
    long long leaves = 0;

    explicit ExactSearch(const Instance& inst)
        : builder(inst), cand_buf(static_cast<std::size_t>(inst.num_ops())) {}

    // Depth-first extension in lexicographic (job, op_index) candidate order.
    // Pruning a branch whose partial peak already reaches the incumbent
    // cannot remove any strictly better leaf, nor the first (lexicographically
    // smallest) optimal one, so value and witness match plain enumeration.
    void dfs() {
        if (builder.complete()) {
            ++leaves;
            if (builder.peak() < best) {
                best = builder.peak();
                witness = builder.sequence();
            }
            return;
        }
        auto& cands = cand_buf[static_cast<std::size_t>(builder.scheduled_count())];
        builder.collect_candidates(cands);
        for (const OpRef& op : cands) {
            const int end = builder.start_time_of(op) + op.duration;
            if (std::max(builder.peak(), end) >= best) continue;
            builder.push(op);
            dfs();
            builder.pop();
        }
    }
};

}  // namespace

ExactResult exact_optimum(const Instance& inst, int op_limit) {
    const int total = inst.num_ops();
    if (total > op_limit)
        throw std::invalid_argument("instance has " + std::to_string(total) +
                                    " operations, exhaustive search is limited to " +
                                    std::to_string(op_limit));
    ExactSearch search(inst);
    search.dfs();
    ExactResult result;
    result.makespan = search.best;
    result.sequence = OperationSequence{std::move(search.witness)};
    result.schedule = decode_sequence(inst, result.sequence);
    result.sequences_tried = search.leaves;
    return result;
}

std::string render_gantt(const Instance& inst, const Schedule& sched) {
    std::ostringstream out;
    const int makespan = sched.makespan;
    const int cols = std::min(makespan, 120);
    auto px = [&](int t) {
        return makespan == 0 ? 0
                             : static_cast<int>(static_cast<long long>(t) * cols / makespan);
    };

    int prefix_width = 1 + static_cast<int>(std::to_string(inst.m).size());
    auto row_prefix = [&](const std::string& label) {
        std::string p = label;
        p.resize(static_cast<std::size_t>(prefix_width), ' ');
        return p + "|";
    };

    if (makespan > 0) {
        for (int mach = inst.m - 1; mach >= 0; --mach) {
            std::string canvas(static_cast<std::size_t>(cols), '-');
            for (int j = 0; j < inst.n; ++j) {
                const JobSpec& job = inst.jobs[static_cast<std::size_t>(j)];
                for (int k = 0; k < inst.m; ++k) {
                    if (job.route[static_cast<std::size_t>(k)] != mach) continue;
                    const Interval iv =
                        sched.intervals[static_cast<std::size_t>(inst.node_id(j, k))];
                    const int c0 = px(iv.start), c1 = px(iv.end);
                    if (c1 <= c0) continue;  // zero width at this scale
                    const std::string tag =
                        std::string(1, shop_class_letter(job.shop)) + std::to_string(j + 1);
                    const std::string full = tag + "." + std::to_string(k + 1);
                    const std::size_t w = static_cast<std::size_t>(c1 - c0);
                    const std::string& text = (w >= full.size()) ? full : tag;
                    for (std::size_t c = 0; c < w; ++c)
                        canvas[static_cast<std::size_t>(c0) + c] =
                            c < text.size() ? text[c] : ' ';
                }
            }
            out << row_prefix("M" + std::to_string(mach + 1)) << canvas << '\n';
        }
    }

    // two-line axis: ticks every 5 columns, then the time values under them
    std::string ticks(static_cast<std::size_t>(cols) + 1, '-');
    std::string numbers(static_cast<std::size_t>(cols) + 1, ' ');
    auto place_number = [&](int col, int value) {
        const std::string s = std::to_string(value);
        if (static_cast<std::size_t>(col) + s.size() > numbers.size())
            numbers.resize(static_cast<std::size_t>(col) + s.size(), ' ');
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (numbers[static_cast<std::size_t>(col) + i] != ' ') return;
        }
        for (std::size_t i = 0; i < s.size(); ++i)
            numbers[static_cast<std::size_t>(col) + i] = s[i];
    };
    ticks[static_cast<std::size_t>(cols)] = '+';
    place_number(cols, makespan);
    for (int c = 0; c <= cols; c += 5) {
        ticks[static_cast<std::size_t>(c)] = '+';
        const int value =
            cols == 0 ? 0
                      : static_cast<int>((static_cast<long long>(c) * makespan + cols / 2) / cols);
        place_number(c, value);
    }
    out << std::string(static_cast<std::size_t>(prefix_width) + 1, ' ') << ticks << '\n';
    out << std::string(static_cast<std::size_t>(prefix_width) + 1, ' ') << numbers << '\n';
    return out.str();
}

}  // namespace mixedshop
