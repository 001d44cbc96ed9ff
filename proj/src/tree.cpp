#include "qtrees/tree.hpp"

#include <algorithm>
#include <queue>

#include "qtrees/error.hpp"

namespace qtrees {

FiniteTree FiniteTree::from_edges(int n, const std::vector<std::pair<int, int>>& edges, int root) {
    if (n <= 0) throw Error("BadTree", "tree needs at least one vertex");
    if (static_cast<int>(edges.size()) != n - 1) throw Error("BadTree", "edge count != n - 1");
    FiniteTree t;
    t.n = n;
    t.root = root;
    t.adj.assign(n, {});
    for (auto [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n || u == v) throw Error("BadTree", "bad edge");
        t.adj[u].push_back(v);
        t.adj[v].push_back(u);
    }
    t.parent.assign(n, -2);
    t.depth.assign(n, 0);
    std::queue<int> q;
    q.push(root);
    t.parent[root] = -1;
    int seen = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int w : t.adj[v])
            if (t.parent[w] == -2) {
                t.parent[w] = v;
                t.depth[w] = t.depth[v] + 1;
                ++seen;
                q.push(w);
            }
    }
    if (seen != n) throw Error("BadTree", "graph is not connected");
    for (int v = 0; v < n; ++v)
        if (v != root) t.edges.emplace_back(t.parent[v], v);
    std::sort(t.edges.begin(), t.edges.end());
    return t;
}

FiniteTree FiniteTree::from_ball(const bassserre::TreeBall& ball) {
    std::vector<std::pair<int, int>> es;
    es.reserve(ball.edges.size());
    for (const auto& e : ball.edges) es.emplace_back(e.parent, e.child);
    return from_edges(static_cast<int>(ball.vertices.size()), es, ball.root);
}

int FiniteTree::dist(int u, int v) const {
    int d = 0;
    while (u != v) {
        if (depth[u] < depth[v]) std::swap(u, v);
        u = parent[u];
        ++d;
    }
    return d;
}

std::vector<int> FiniteTree::path(int u, int v) const {
    std::vector<int> up, down;
    while (u != v) {
        if (depth[u] >= depth[v]) {
            up.push_back(u);
            u = parent[u];
        } else {
            down.push_back(v);
            v = parent[v];
        }
    }
    up.push_back(u);
    up.insert(up.end(), down.rbegin(), down.rend());
    return up;
}

std::vector<int> FiniteTree::leaves() const {
    std::vector<int> out;
    for (int v = 0; v < n; ++v)
        if (degree(v) <= 1) out.push_back(v);
    return out;
}

} // namespace qtrees
