#include "dqc/workflows.hpp"

#include "dqc/allocators.hpp"
#include "dqc/cost.hpp"
#include "dqc/cover.hpp"
#include "dqc/error.hpp"
#include "dqc/refiners.hpp"

#include <spdlog/spdlog.h>

namespace dqc {

namespace {

const std::vector<std::pair<Workflow, std::string>>& names() {
    static const std::vector<std::pair<Workflow, std::string>> n{
        {Workflow::Annealing, "annealing"},
        {Workflow::Partition, "partition"},
        {Workflow::PartitionHetero, "partition-hetero"},
        {Workflow::PartitionHeteroEmbed, "partition-hetero-embed"},
        {Workflow::PartitionEmbed, "partition-embed"},
        {Workflow::Embed, "embed"},
        {Workflow::EmbedSteiner, "embed-steiner"},
        {Workflow::EmbedSteinerDetach, "embed-steiner-detach"},
    };
    return n;
}

} // namespace

Workflow workflow_from_name(const std::string& s) {
    for (const auto& [w, n] : names())
        if (n == s) return w;
    std::string all;
    for (const auto& [w, n] : names()) all += (all.empty() ? "" : ", ") + n;
    throw InvalidParams("unknown workflow '" + s + "' (" + all + ")");
}

std::string workflow_name(Workflow w) {
    for (const auto& [x, n] : names())
        if (x == w) return n;
    return "?";
}

const std::vector<Workflow>& all_workflows() {
    static const std::vector<Workflow> all = [] {
        std::vector<Workflow> v;
        for (const auto& [w, n] : names()) v.push_back(w);
        return v;
    }();
    return all;
}

Distribution distribute(std::shared_ptr<const IndexedCircuit> ic, std::shared_ptr<const Network> net, Workflow w,
                        const WorkflowOptions& opt) {
    check_capacity(*ic, *net);
    auto partition = [&] { return initial_partition(ic, net, opt.seed, opt.partition_starts); };
    auto embed = [&] {
        Distribution p = partition();
        return distribute_by_cover(ic, net, p.phi_q, {opt.cover_attempts, opt.seed});
    };
    switch (w) {
    case Workflow::Annealing: {
        AnnealParams ap;
        ap.iterations = opt.anneal_iterations;
        ap.seed = opt.seed;
        return anneal(random_allocation(ic, net, opt.seed), ap);
    }
    case Workflow::Partition: return partition();
    case Workflow::PartitionHetero: return boundary_reallocate(partition(), opt.rounds, opt.seed);
    case Workflow::PartitionHeteroEmbed:
        return refine_eager_h_merge(boundary_reallocate(partition(), opt.rounds, opt.seed));
    case Workflow::PartitionEmbed:
        if (!net->homogeneous()) spdlog::warn("partition-embed is meant for homogeneous networks");
        return refine_eager_h_merge(partition());
    case Workflow::Embed: return embed();
    case Workflow::EmbedSteiner: return refine_dtype_intertwined(refine_dtype_neighbouring(embed()));
    case Workflow::EmbedSteinerDetach:
        return refine_detached(refine_dtype_intertwined(refine_dtype_neighbouring(embed())), opt.seed);
    }
    throw InvalidParams("unknown workflow");
}

WorkflowResult run_workflow(std::shared_ptr<const IndexedCircuit> ic, std::shared_ptr<const Network> net, Workflow w,
                            const WorkflowOptions& opt) {
    Distribution d = distribute(ic, net, w, opt);
    DistributedCircuit built = build(d);
    const int unbounded = built.ebit_count;
    if (net->bounded_links()) {
        try {
            auto [d2, b2] = enforce_link_bound(d, built);
            return {std::move(d2), std::move(b2), unbounded};
        } catch (const InfeasibleBound& e) {
            // A detached gate needs two links in one module; pull every
            // detached gate back to one of its qubits' modules and retry.
            bool any = false;
            for (int g : d.gate_vertices())
                if (d.is_detached(g)) {
                    const Gate& gt = d.circuit()[static_cast<std::size_t>(g)];
                    int a = d.phi_q[static_cast<std::size_t>(gt.q0)], b = d.phi_q[static_cast<std::size_t>(gt.q1)];
                    d.phi_g[static_cast<std::size_t>(g)] = a;
                    if (move_gain(d, {true, g}, b) > 0) d.phi_g[static_cast<std::size_t>(g)] = b;
                    any = true;
                }
            if (any && is_valid(d)) {
                spdlog::warn("{}; retrying without detached gates", e.what());
                try {
                    auto [d2, b2] = enforce_link_bound(d, build(d));
                    return {std::move(d2), std::move(b2), unbounded};
                } catch (const InfeasibleBound&) {
                }
            }
            // Last resort: drop all embedding. Basic hyperedges have no H
            // inside, so every gap can be split and one link per module is enough.
            spdlog::warn("link register still exceeded; falling back to hyperedges without embedding");
            Distribution basic = make_distribution(ic, net);
            basic.phi_q = d.phi_q;
            for (int g : basic.gate_vertices()) {
                const Gate& gt = basic.circuit()[static_cast<std::size_t>(g)];
                const int a = d.phi_q[static_cast<std::size_t>(gt.q0)], b = d.phi_q[static_cast<std::size_t>(gt.q1)];
                const int m = d.phi_g[static_cast<std::size_t>(g)];
                basic.phi_g[static_cast<std::size_t>(g)] = (m == a || m == b) ? m : a;
            }
            auto [d2, b2] = enforce_link_bound(basic, build(basic));
            return {std::move(d2), std::move(b2), unbounded};
        }
    }
    return {std::move(d), std::move(built), unbounded};
}

} // namespace dqc
