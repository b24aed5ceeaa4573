#include "bgpl/canon.hpp"

#include <algorithm>
#include <cstring>
#include <optional>
#include <set>
#include <tuple>

namespace bgpl {

namespace {

using Color = std::uint64_t;

Color mix(std::initializer_list<std::uint64_t> parts, Color seed = 0xcbf29ce484222325ULL) {
    Color h = seed;
    for (std::uint64_t p : parts) {
        char bytes[8];
        std::memcpy(bytes, &p, 8);
        h = fnv1a(std::string_view(bytes, 8), h);
    }
    return h;
}

// Incidence graph: vertices 0..n_nodes-1 are pattern nodes, the rest are triples.
struct Graph {
    std::vector<Node> nodes;
    std::vector<bool> relabel;  // non-reserved variables and blank nodes
    // For each vertex: (edge label, neighbour). Labels 0..2 = s/p/o seen from the
    // triple vertex, 3..5 = the same edge seen from the node vertex.
    std::vector<std::vector<std::pair<int, std::size_t>>> adj;
};

Graph build(const GraphPattern& gp) {
    Graph g;
    std::map<Node, std::size_t> index;
    for (const auto& t : gp) {
        for (const Node* n : {&t.s, &t.p, &t.o}) {
            if (!index.count(*n)) {
                index.emplace(*n, g.nodes.size());
                g.nodes.push_back(*n);
            }
        }
    }
    std::size_t n_nodes = g.nodes.size();
    g.adj.resize(n_nodes + gp.size());
    std::size_t tv = n_nodes;
    for (const auto& t : gp) {
        int label = 0;
        for (const Node* n : {&t.s, &t.p, &t.o}) {
            std::size_t nv = index.at(*n);
            g.adj[tv].push_back({label, nv});
            g.adj[nv].push_back({label + 3, tv});
            ++label;
        }
        ++tv;
    }
    for (const auto& n : g.nodes) {
        bool renamed = is_var(n) ? !is_reserved(var_of(n)) : term_of(n).is_blank();
        g.relabel.push_back(renamed);
    }
    return g;
}

std::vector<Color> initial_colors(const Graph& g) {
    std::vector<Color> c(g.adj.size());
    for (std::size_t v = 0; v < c.size(); ++v) {
        std::string label;
        if (v >= g.nodes.size()) {
            label = "triple";
        } else if (g.relabel[v]) {
            label = "var";
        } else if (is_var(g.nodes[v])) {
            label = "?" + var_of(g.nodes[v]).name;
        } else {
            label = "term " + to_ntriples(term_of(g.nodes[v]));
        }
        c[v] = fnv1a(label);
    }
    return c;
}

std::size_t count_distinct(const std::vector<Color>& c) {
    std::vector<Color> s = c;
    std::sort(s.begin(), s.end());
    return static_cast<std::size_t>(std::unique(s.begin(), s.end()) - s.begin());
}

// Refines until the partition stops splitting.
void refine(const Graph& g, std::vector<Color>& colors) {
    std::size_t cells = count_distinct(colors);
    std::vector<std::pair<int, Color>> sig;
    while (true) {
        std::vector<Color> next(colors.size());
        for (std::size_t v = 0; v < colors.size(); ++v) {
            sig.clear();
            for (const auto& [label, u] : g.adj[v]) sig.push_back({label, colors[u]});
            std::sort(sig.begin(), sig.end());
            Color h = mix({colors[v]});
            for (const auto& [label, c] : sig) h = mix({static_cast<std::uint64_t>(label), c}, h);
            next[v] = h;
        }
        std::size_t n = count_distinct(next);
        colors.swap(next);
        if (n == cells) return;
        cells = n;
    }
}

struct Search {
    const GraphPattern& gp;
    const Graph& g;
    std::string best_key;
    std::map<Node, Variable> best_mapping;
    GraphPattern best_pattern;
    bool have_best = false;

    // Smallest non-singleton cell among renamable vertices, identified by color.
    std::optional<Color> target_cell(const std::vector<Color>& colors) const {
        std::map<Color, std::size_t> size;
        for (std::size_t v = 0; v < g.nodes.size(); ++v) {
            if (g.relabel[v]) ++size[colors[v]];
        }
        for (const auto& [c, n] : size) {
            if (n > 1) return c;
        }
        return std::nullopt;
    }

    void leaf(const std::vector<Color>& colors) {
        std::vector<std::pair<Color, std::size_t>> order;
        for (std::size_t v = 0; v < g.nodes.size(); ++v) {
            if (g.relabel[v]) order.push_back({colors[v], v});
        }
        std::sort(order.begin(), order.end());
        std::map<Node, Variable> mapping;
        for (std::size_t i = 0; i < order.size(); ++i) {
            mapping.emplace(g.nodes[order[i].second], Variable{"c" + std::to_string(i)});
        }
        auto map_node = [&](const Node& n) -> Node {
            auto it = mapping.find(n);
            return it == mapping.end() ? n : Node{it->second};
        };
        std::vector<TriplePattern> ts;
        ts.reserve(gp.size());
        for (const auto& t : gp) ts.push_back({map_node(t.s), map_node(t.p), map_node(t.o)});
        GraphPattern relabelled(std::move(ts));
        std::string key = relabelled.to_string();
        if (!have_best || key < best_key) {
            have_best = true;
            best_key = std::move(key);
            best_mapping = std::move(mapping);
            best_pattern = std::move(relabelled);
        }
    }

    void run(std::vector<Color> colors, std::uint64_t depth) {
        refine(g, colors);
        auto cell = target_cell(colors);
        if (!cell) {
            leaf(colors);
            return;
        }
        for (std::size_t v = 0; v < g.nodes.size(); ++v) {
            if (!g.relabel[v] || colors[v] != *cell) continue;
            std::vector<Color> branch = colors;
            branch[v] = mix({colors[v], 0x1d1d1d1dULL, depth});
            run(std::move(branch), depth + 1);
        }
    }
};

}  // namespace

CanonicalForm canonicalize(const GraphPattern& gp) {
    Graph g = build(gp);
    Search s{gp, g, {}, {}, {}, false};
    s.run(initial_colors(g), 0);
    CanonicalForm out;
    out.key = std::move(s.best_key);
    out.pattern = std::move(s.best_pattern);
    out.mapping = std::move(s.best_mapping);
    return out;
}

}  // namespace bgpl
