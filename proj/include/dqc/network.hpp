#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

namespace dqc {

struct Module {
    std::string name;
    int comp = 0;                 // computation register size
    std::optional<int> link;      // link register size; nullopt = unbounded
};

struct SteinerTree {
    std::vector<int> terminals;                 // sorted module ids
    std::vector<std::pair<int, int>> edges;     // (a, b) with a < b
    std::vector<int> nodes;                     // sorted module ids touched

    int cost() const { return static_cast<int>(edges.size()); }
    bool contains(int m) const;
};

// Undirected, connected module graph. Module ids are positions in modules().
// Ties everywhere are broken by lexicographic module name.
class Network {
public:
    Network() = default;
    Network(std::vector<Module> modules, const std::vector<std::pair<std::string, std::string>>& edges);

    int size() const { return static_cast<int>(modules_.size()); }
    const std::vector<Module>& modules() const { return modules_; }
    const Module& module(int m) const { return modules_[static_cast<std::size_t>(m)]; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    // Neighbours in name order.
    const std::vector<int>& neighbours(int m) const { return adj_[static_cast<std::size_t>(m)]; }
    bool adjacent(int a, int b) const;

    int index_of(const std::string& name) const;   // throws UnknownModule
    int name_rank(int m) const { return rank_[static_cast<std::size_t>(m)]; }
    int total_comp() const;
    bool bounded_links() const;
    bool homogeneous() const;   // complete graph, equal comp, unbounded links

    int shortest_path_len(int a, int b) const;
    int shortest_path_len(const std::string& a, const std::string& b) const;
    // Deterministic shortest path a -> b inclusive.
    std::vector<int> shortest_path(int a, int b) const;

    // Metric-closure 2-approximation, cached by terminal set.
    std::shared_ptr<const SteinerTree> steiner_tree(std::vector<int> terminals) const;
    SteinerTree steiner_tree_named(const std::vector<std::string>& terminals) const;

private:
    void check(int m) const;

    std::vector<Module> modules_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> rank_;
    std::vector<std::vector<int>> dist_;
    std::map<std::string, int> by_name_;

    // Shared between copies: readers-writer cache of trees.
    struct Cache {
        std::shared_mutex mu;
        std::map<std::vector<int>, std::shared_ptr<const SteinerTree>> trees;
    };
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

enum class NetworkKind { Homogeneous, Unstructured, ScaleFree, SmallWorld };

NetworkKind network_kind_from_name(const std::string& s);
std::string network_kind_name(NetworkKind k);

Network gen_network(NetworkKind kind, int n_modules, int total_qubits, std::uint64_t seed);

std::string network_to_json(const Network& net, int indent = -1);
Network network_from_json(const std::string& text);
Network load_network(const std::string& path);

} // namespace dqc
