#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace mixedshop {

// Constraint regime of a single job inside a mixed-shop instance.
enum class ShopClass { Job, Flow, Open };

char shop_class_letter(ShopClass c);
const char* shop_class_name(ShopClass c);

// One operation of a job: the op_index-th step of the job's route,
// running on `machine` for `duration` time units.
struct OpRef {
    int job = 0;
    int op_index = 0;
    int machine = 0;
    int duration = 0;

    friend bool operator==(const OpRef&, const OpRef&) = default;
};

struct JobSpec {
    ShopClass shop = ShopClass::Job;
    std::vector<int> route;      // permutation of 0..m-1; identity for Flow;
                                 // for Open just a stored default used by restrictions
    std::vector<int> durations;  // indexed by machine, not by route position

    friend bool operator==(const JobSpec&, const JobSpec&) = default;
};

struct Instance {
    int n = 0;  // jobs
    int m = 0;  // machines
    std::vector<JobSpec> jobs;
    std::string name;

    int num_ops() const { return n * m; }

    int node_id(int job, int op_index) const { return job * m + op_index; }

    OpRef op(int job, int op_index) const {
        const int machine = jobs[static_cast<std::size_t>(job)].route[static_cast<std::size_t>(op_index)];
        return OpRef{job, op_index,
                     machine,
                     jobs[static_cast<std::size_t>(job)].durations[static_cast<std::size_t>(machine)]};
    }

    OpRef op_from_node(int node) const { return op(node / m, node % m); }

    // name is a label, not identity
    friend bool operator==(const Instance& a, const Instance& b) {
        return a.n == b.n && a.m == b.m && a.jobs == b.jobs;
    }
};

// Returns one description per violated instance invariant; empty means valid.
std::vector<std::string> validate_instance(const Instance& inst);

// max(max job duration sum, max machine load); every feasible makespan is >= this.
int lower_bound(const Instance& inst);

enum class InstanceFormat { Mixed, OrlibJss, TaillardFs };

InstanceFormat instance_format_from_name(const std::string& name);
const char* instance_format_name(InstanceFormat f);

struct ParseError : std::runtime_error {
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
    int line;
};

Instance parse_instance(InstanceFormat format, std::istream& in);
Instance parse_instance(InstanceFormat format, const std::string& text);

// Canonical mixed-format text; parse(Mixed, write_instance(i)) == i for
// instances whose Open jobs carry the default identity route (all parsed
// and generated instances do).
std::string write_instance(const Instance& inst);

enum class ClassPolicy { MixedCycle, AllJob, AllFlow, AllOpen };

ClassPolicy class_policy_from_name(const std::string& name);

// Random instance: durations uniform in [1, 99], Job routes uniform random
// permutations, MixedCycle assigns classes J,F,O,J,F,... by job index.
// Pure function of its arguments.
Instance generate_rnd(int n, int m, std::uint64_t seed,
                      ClassPolicy policy = ClassPolicy::MixedCycle);

// Same processing times under a different constraint regime. Open keeps
// stored routes as defaults; Job adopts each job's stored route as binding;
// Flow forces identity routes.
Instance restrict_to_shop(const Instance& inst, ShopClass target);

}  // namespace mixedshop
