#include "dqc/network.hpp"

#include "dqc/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace dqc {

bool SteinerTree::contains(int m) const {
    return std::binary_search(nodes.begin(), nodes.end(), m);
}

Network::Network(std::vector<Module> modules,
                 const std::vector<std::pair<std::string, std::string>>& edges)
    : modules_(std::move(modules)) {
    const int n = size();
    if (n == 0) throw InvalidParams("network has no modules");
    long total = 0;
    for (int i = 0; i < n; ++i) {
        const auto& m = modules_[static_cast<std::size_t>(i)];
        if (m.comp < 0) throw InvalidParams("negative computation capacity on " + m.name);
        if (m.link && *m.link < 0) throw InvalidParams("negative link capacity on " + m.name);
        if (!by_name_.emplace(m.name, i).second) throw InvalidParams("duplicate module " + m.name);
        total += m.comp;
    }
    if (total < 1) throw InvalidParams("network has no computation qubits");

    rank_.assign(static_cast<std::size_t>(n), 0);
    {
        int r = 0;
        for (const auto& [name, id] : by_name_) rank_[static_cast<std::size_t>(id)] = r++;
    }

    adj_.assign(static_cast<std::size_t>(n), {});
    std::set<std::pair<int, int>> seen;
    for (const auto& [a, b] : edges) {
        int x = index_of(a), y = index_of(b);
        if (x == y) throw InvalidParams("self-loop on " + a);
        if (x > y) std::swap(x, y);
        if (!seen.emplace(x, y).second) throw InvalidParams("duplicate edge " + a + "-" + b);
        edges_.emplace_back(x, y);
        adj_[static_cast<std::size_t>(x)].push_back(y);
        adj_[static_cast<std::size_t>(y)].push_back(x);
    }
    for (auto& nb : adj_)
        std::sort(nb.begin(), nb.end(), [&](int a, int b) { return name_rank(a) < name_rank(b); });

    dist_.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), -1));
    for (int s = 0; s < n; ++s) {
        auto& d = dist_[static_cast<std::size_t>(s)];
        std::queue<int> q;
        d[static_cast<std::size_t>(s)] = 0;
        q.push(s);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int v : neighbours(u))
                if (d[static_cast<std::size_t>(v)] < 0) {
                    d[static_cast<std::size_t>(v)] = d[static_cast<std::size_t>(u)] + 1;
                    q.push(v);
                }
        }
        for (int v = 0; v < n; ++v)
            if (d[static_cast<std::size_t>(v)] < 0) throw InvalidParams("network is not connected");
    }
}

void Network::check(int m) const {
    if (m < 0 || m >= size()) throw UnknownModule("module id " + std::to_string(m));
}

bool Network::adjacent(int a, int b) const {
    check(a);
    check(b);
    const auto& nb = neighbours(a);
    return std::find(nb.begin(), nb.end(), b) != nb.end();
}

int Network::index_of(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) throw UnknownModule(name);
    return it->second;
}

int Network::total_comp() const {
    int t = 0;
    for (const auto& m : modules_) t += m.comp;
    return t;
}

bool Network::bounded_links() const {
    return std::any_of(modules_.begin(), modules_.end(), [](const Module& m) { return m.link.has_value(); });
}

bool Network::homogeneous() const {
    const int n = size();
    if (static_cast<int>(edges_.size()) != n * (n - 1) / 2) return false;
    for (const auto& m : modules_)
        if (m.link || m.comp != modules_.front().comp) return false;
    return true;
}

int Network::shortest_path_len(int a, int b) const {
    check(a);
    check(b);
    return dist_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
}

int Network::shortest_path_len(const std::string& a, const std::string& b) const {
    return shortest_path_len(index_of(a), index_of(b));
}

std::vector<int> Network::shortest_path(int a, int b) const {
    check(a);
    check(b);
    // Walk forward choosing the name-smallest neighbour that is one step closer.
    std::vector<int> path{a};
    int cur = a;
    while (cur != b) {
        const int d = dist_[static_cast<std::size_t>(cur)][static_cast<std::size_t>(b)];
        for (int v : neighbours(cur))
            if (dist_[static_cast<std::size_t>(v)][static_cast<std::size_t>(b)] == d - 1) {
                cur = v;
                break;
            }
        path.push_back(cur);
    }
    return path;
}

namespace {

struct Dsu {
    std::vector<int> p;
    explicit Dsu(int n) : p(static_cast<std::size_t>(n)) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[static_cast<std::size_t>(x)] == x ? x : p[static_cast<std::size_t>(x)] = find(p[static_cast<std::size_t>(x)]); }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        p[static_cast<std::size_t>(a)] = b;
        return true;
    }
};

} // namespace

std::shared_ptr<const SteinerTree> Network::steiner_tree(std::vector<int> terminals) const {
    if (terminals.empty()) throw InvalidParams("steiner_tree needs at least one terminal");
    for (int t : terminals) check(t);
    std::sort(terminals.begin(), terminals.end());
    terminals.erase(std::unique(terminals.begin(), terminals.end()), terminals.end());
    {
        std::shared_lock lock(cache_->mu);
        auto it = cache_->trees.find(terminals);
        if (it != cache_->trees.end()) return it->second;
    }

    auto tree = std::make_shared<SteinerTree>();
    tree->terminals = terminals;
    const int n = size();
    auto by_name = [&](int a, int b) {
        return std::make_pair(std::min(name_rank(a), name_rank(b)), std::max(name_rank(a), name_rank(b)));
    };

    if (terminals.size() > 1) {
        // MST of the metric closure over terminals (Kruskal, name tie-break).
        std::vector<std::tuple<int, std::pair<int, int>, int, int>> closure;
        for (std::size_t i = 0; i < terminals.size(); ++i)
            for (std::size_t j = i + 1; j < terminals.size(); ++j) {
                int a = terminals[i], b = terminals[j];
                closure.emplace_back(shortest_path_len(a, b), by_name(a, b), a, b);
            }
        std::sort(closure.begin(), closure.end());
        Dsu dsu(n);
        std::set<std::pair<int, int>> expanded;
        for (const auto& [d, key, a, b] : closure) {
            if (!dsu.unite(a, b)) continue;
            auto p = shortest_path(name_rank(a) < name_rank(b) ? a : b, name_rank(a) < name_rank(b) ? b : a);
            for (std::size_t k = 0; k + 1 < p.size(); ++k)
                expanded.emplace(std::min(p[k], p[k + 1]), std::max(p[k], p[k + 1]));
        }
        // The union of paths may contain cycles: take its MST, then prune.
        std::vector<std::pair<int, int>> sub(expanded.begin(), expanded.end());
        std::sort(sub.begin(), sub.end(), [&](auto x, auto y) { return by_name(x.first, x.second) < by_name(y.first, y.second); });
        Dsu d2(n);
        std::vector<std::pair<int, int>> kept;
        for (auto e : sub)
            if (d2.unite(e.first, e.second)) kept.push_back(e);

        std::vector<char> term(static_cast<std::size_t>(n), 0);
        for (int t : terminals) term[static_cast<std::size_t>(t)] = 1;
        bool changed = true;
        while (changed) {
            changed = false;
            std::vector<int> deg(static_cast<std::size_t>(n), 0);
            for (auto [a, b] : kept) {
                ++deg[static_cast<std::size_t>(a)];
                ++deg[static_cast<std::size_t>(b)];
            }
            std::vector<std::pair<int, int>> next;
            for (auto [a, b] : kept) {
                bool leaf = (deg[static_cast<std::size_t>(a)] == 1 && !term[static_cast<std::size_t>(a)]) ||
                            (deg[static_cast<std::size_t>(b)] == 1 && !term[static_cast<std::size_t>(b)]);
                if (leaf) changed = true;
                else next.emplace_back(a, b);
            }
            kept.swap(next);
        }
        std::sort(kept.begin(), kept.end());
        tree->edges = std::move(kept);
    }
    std::set<int> nodes(terminals.begin(), terminals.end());
    for (auto [a, b] : tree->edges) {
        nodes.insert(a);
        nodes.insert(b);
    }
    tree->nodes.assign(nodes.begin(), nodes.end());

    std::unique_lock lock(cache_->mu);
    auto [it, inserted] = cache_->trees.emplace(terminals, tree);
    return it->second;
}

SteinerTree Network::steiner_tree_named(const std::vector<std::string>& terminals) const {
    std::vector<int> ids;
    for (const auto& t : terminals) ids.push_back(index_of(t));
    return *steiner_tree(ids);
}

// ---------------------------------------------------------------- generators

NetworkKind network_kind_from_name(const std::string& s) {
    if (s == "homogeneous") return NetworkKind::Homogeneous;
    if (s == "unstructured") return NetworkKind::Unstructured;
    if (s == "scale_free" || s == "scale-free") return NetworkKind::ScaleFree;
    if (s == "small_world" || s == "small-world") return NetworkKind::SmallWorld;
    throw InvalidParams("unknown network kind '" + s + "'");
}

std::string network_kind_name(NetworkKind k) {
    switch (k) {
    case NetworkKind::Homogeneous: return "homogeneous";
    case NetworkKind::Unstructured: return "unstructured";
    case NetworkKind::ScaleFree: return "scale_free";
    case NetworkKind::SmallWorld: return "small_world";
    }
    return "?";
}

namespace {

using EdgeSet = std::set<std::pair<int, int>>;

bool connected(int n, const EdgeSet& es) {
    Dsu d(n);
    int comps = n;
    for (auto [a, b] : es)
        if (d.unite(a, b)) --comps;
    return comps == 1;
}

void add_edge(EdgeSet& es, int a, int b) { es.emplace(std::min(a, b), std::max(a, b)); }

EdgeSet erdos_renyi(int n, std::mt19937_64& rng) {
    const double p = std::min(1.0, 2.0 / (n - 1));
    std::bernoulli_distribution coin(p);
    for (;;) {
        EdgeSet es;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (coin(rng)) es.emplace(a, b);
        if (connected(n, es)) return es;
    }
}

EdgeSet barabasi_albert(int n, std::mt19937_64& rng) {
    EdgeSet es;
    std::vector<int> ends{0, 1};   // every edge endpoint, for degree-proportional picks
    add_edge(es, 0, 1);
    std::bernoulli_distribution second(n > 2 ? 1.0 / (n - 2) : 0.0);
    for (int v = 2; v < n; ++v) {
        int m = second(rng) ? 2 : 1;
        std::set<int> targets;
        while (static_cast<int>(targets.size()) < std::min(m, v)) {
            std::uniform_int_distribution<std::size_t> pick(0, ends.size() - 1);
            targets.insert(ends[pick(rng)]);
        }
        for (int t : targets) {
            add_edge(es, v, t);
            ends.push_back(v);
            ends.push_back(t);
        }
    }
    return es;
}

EdgeSet watts_strogatz(int n, std::mt19937_64& rng) {
    const double beta = 0.25;
    for (;;) {
        EdgeSet es;
        for (int v = 0; v < n; ++v)
            if (n > 2 || v == 0) add_edge(es, v, (v + 1) % n);
        std::bernoulli_distribution rewire(beta);
        std::uniform_int_distribution<int> any(0, n - 1);
        std::vector<std::pair<int, int>> ring(es.begin(), es.end());
        for (auto e : ring) {
            if (!rewire(rng)) continue;
            int a = e.first;
            for (int tries = 0; tries < 4 * n; ++tries) {
                int b = any(rng);
                if (b == a || es.count({std::min(a, b), std::max(a, b)})) continue;
                es.erase(e);
                add_edge(es, a, b);
                break;
            }
        }
        if (connected(n, es)) return es;
    }
}

} // namespace

Network gen_network(NetworkKind kind, int n_modules, int total_qubits, std::uint64_t seed) {
    if (n_modules < 2) throw InvalidParams("need at least 2 modules");
    if (total_qubits < n_modules) throw InvalidParams("need at least one qubit per module");
    std::mt19937_64 rng(seed);
    std::vector<Module> mods(static_cast<std::size_t>(n_modules));
    for (int i = 0; i < n_modules; ++i) mods[static_cast<std::size_t>(i)].name = "M" + std::to_string(i);

    EdgeSet es;
    if (kind == NetworkKind::Homogeneous) {
        for (int i = 0; i < n_modules; ++i) {
            mods[static_cast<std::size_t>(i)].comp = total_qubits / n_modules + (i < total_qubits % n_modules ? 1 : 0);
            for (int j = i + 1; j < n_modules; ++j) es.emplace(i, j);
        }
    } else {
        // One qubit each, the rest scattered uniformly.
        for (auto& m : mods) m.comp = 1;
        std::uniform_int_distribution<int> pick(0, n_modules - 1);
        for (int k = n_modules; k < total_qubits; ++k) ++mods[static_cast<std::size_t>(pick(rng))].comp;
        // Largest integer strictly below the average computation register.
        const double avg = static_cast<double>(total_qubits) / n_modules;
        int eps = static_cast<int>(std::ceil(avg)) - 1;
        eps = std::max(eps, 1);
        for (auto& m : mods) m.link = eps;
        switch (kind) {
        case NetworkKind::Unstructured: es = erdos_renyi(n_modules, rng); break;
        case NetworkKind::ScaleFree: es = barabasi_albert(n_modules, rng); break;
        case NetworkKind::SmallWorld: es = watts_strogatz(n_modules, rng); break;
        default: break;
        }
    }
    std::vector<std::pair<std::string, std::string>> named;
    for (auto [a, b] : es) named.emplace_back(mods[static_cast<std::size_t>(a)].name, mods[static_cast<std::size_t>(b)].name);
    return Network(std::move(mods), named);
}

// ---------------------------------------------------------------- JSON

using nlohmann::json;

std::string network_to_json(const Network& net, int indent) {
    json j;
    j["modules"] = json::array();
    for (const auto& m : net.modules()) {
        json o{{"name", m.name}, {"comp", m.comp}};
        o["link"] = m.link ? json(*m.link) : json(nullptr);
        j["modules"].push_back(o);
    }
    j["edges"] = json::array();
    for (auto [a, b] : net.edges()) j["edges"].push_back({net.module(a).name, net.module(b).name});
    return j.dump(indent);
}

Network network_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(e.what());
    }
    try {
        std::vector<Module> mods;
        for (const auto& o : j.at("modules")) {
            Module m;
            m.name = o.at("name").get<std::string>();
            m.comp = o.at("comp").get<int>();
            if (o.contains("link") && !o.at("link").is_null()) m.link = o.at("link").get<int>();
            mods.push_back(std::move(m));
        }
        std::vector<std::pair<std::string, std::string>> edges;
        for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
        return Network(std::move(mods), edges);
    } catch (const json::exception& e) {
        throw ParseError(std::string("network JSON: ") + e.what());
    }
}

Network load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return network_from_json(ss.str());
}

} // namespace dqc
