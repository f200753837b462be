#pragma once

#include "dqc/builder.hpp"
#include "dqc/distribution.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace dqc {

enum class Workflow {
    Annealing,
    Partition,
    PartitionHetero,
    PartitionHeteroEmbed,
    PartitionEmbed,
    Embed,
    EmbedSteiner,
    EmbedSteinerDetach,
};

Workflow workflow_from_name(const std::string& s);   // throws InvalidParams
std::string workflow_name(Workflow w);
const std::vector<Workflow>& all_workflows();

struct WorkflowOptions {
    std::uint64_t seed = 0;
    int anneal_iterations = 10000;
    int rounds = 20;          // boundary reallocation rounds
    int partition_starts = 8;
    int cover_attempts = 8;
};

struct WorkflowResult {
    Distribution dist;
    DistributedCircuit built;
    int unbounded_ebits = 0;   // before link-register enforcement
};

// Allocation and refinement only.
Distribution distribute(std::shared_ptr<const IndexedCircuit> ic, std::shared_ptr<const Network> net, Workflow w,
                        const WorkflowOptions& opt = {});

// distribute, build, then split hyperedges until every link register fits.
WorkflowResult run_workflow(std::shared_ptr<const IndexedCircuit> ic, std::shared_ptr<const Network> net, Workflow w,
                            const WorkflowOptions& opt = {});

} // namespace dqc
