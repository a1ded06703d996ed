#include "isoscope/tree_canon.hpp"
#include "isoscope/errors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace isoscope {

namespace {

// Children lists indexed 1..n; slot 0 holds the root(s).
std::vector<std::vector<int>> children_of(const DepTree& t) {
    std::vector<std::vector<int>> ch(t.n + 1);
    for (int v = 1; v <= t.n; ++v) ch[t.parent[v - 1]].push_back(v);
    return ch;
}

void check_valid(const DepTree& t) {
    if (t.n < 1 || static_cast<int>(t.parent.size()) != t.n)
        throw TreeError("malformed tree: empty or inconsistent parent array");
    for (int p : t.parent)
        if (p < 0 || p > t.n) throw TreeError("malformed tree: parent out of range");
}

// Nodes in an order where every child precedes its parent (reverse BFS
// from the root set).
std::vector<int> bottom_up_order(const DepTree& t, const std::vector<std::vector<int>>& ch) {
    std::vector<int> order;
    order.reserve(t.n);
    for (int r : ch[0]) order.push_back(r);
    for (std::size_t i = 0; i < order.size(); ++i)
        for (int c : ch[order[i]]) order.push_back(c);
    std::reverse(order.begin(), order.end());
    return order;
}

CanonCode canon_rooted_at(int root, const std::vector<std::vector<int>>& adj, int n) {
    // BFS re-rooting on the undirected adjacency, then AHU bottom-up.
    std::vector<int> parent(n + 1, -1), order;
    order.reserve(n);
    parent[root] = 0;
    order.push_back(root);
    for (std::size_t i = 0; i < order.size(); ++i) {
        int v = order[i];
        for (int w : adj[v])
            if (parent[w] == -1) {
                parent[w] = v;
                order.push_back(w);
            }
    }
    std::vector<std::string> code(n + 1);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        std::vector<std::string> parts;
        for (int w : adj[v])
            if (parent[w] == v) parts.push_back(std::move(code[w]));
        std::sort(parts.begin(), parts.end());
        std::string s = "(";
        for (const std::string& p : parts) s += p;
        s += ')';
        code[v] = std::move(s);
    }
    return CanonCode{std::move(code[root])};
}

std::vector<std::vector<int>> adjacency_of(const DepTree& t) {
    std::vector<std::vector<int>> adj(t.n + 1);
    for (int v = 1; v <= t.n; ++v) {
        int p = t.parent[v - 1];
        if (p != 0) {
            adj[v].push_back(p);
            adj[p].push_back(v);
        }
    }
    return adj;
}

// 1 or 2 centers of the undirected tree by iterative leaf removal.
std::vector<int> tree_centers(const DepTree& t) {
    int n = t.n;
    if (n == 1) return {1};
    auto adj = adjacency_of(t);
    std::vector<int> degree(n + 1, 0);
    for (int v = 1; v <= n; ++v) degree[v] = static_cast<int>(adj[v].size());
    std::vector<int> leaves;
    for (int v = 1; v <= n; ++v)
        if (degree[v] <= 1) leaves.push_back(v);
    int remaining = n;
    while (remaining > 2) {
        remaining -= static_cast<int>(leaves.size());
        std::vector<int> next;
        for (int v : leaves)
            for (int w : adj[v])
                if (--degree[w] == 1) next.push_back(w);
        leaves = std::move(next);
    }
    return leaves;
}

double iso_ratio(const IsoClassSet& train, std::span<const DepTree> test, IsoMode mode,
                 const char* what) {
    if (train.mode != mode)
        throw StatsError(std::string(what) + ": training set was built with the other mode");
    if (test.empty()) throw EmptySubsetError(std::string(what) + ": empty test list");
    std::size_t hit = 0;
    for (const DepTree& t : test)
        if (train.contains(canonical_code(t, mode))) ++hit;
    return static_cast<double>(hit) / static_cast<double>(test.size());
}

} // namespace

DepTree build_tree(const Sentence& s) {
    DepTree t;
    for (const Token& tok : s.tokens) {
        if (!tok.is_word()) continue;
        t.parent.push_back(tok.head);
        ++t.n;
    }
    if (t.n == 0) throw TreeError("sentence '" + sentence_label(s) + "': no syntactic words");

    int roots = 0;
    for (int p : t.parent)
        if (p == 0) ++roots;
    if (roots == 0)
        throw TreeError("sentence '" + sentence_label(s) + "': no root (no head-0 token)");
    if (roots > 1)
        throw TreeError("sentence '" + sentence_label(s) + "': multiple roots");

    // With one root and n-1 edges, unreachable nodes mean a cycle.
    auto ch = children_of(t);
    std::vector<int> stack = ch[0];
    int reached = 0;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        ++reached;
        for (int c : ch[v]) stack.push_back(c);
    }
    if (reached != t.n)
        throw TreeError("sentence '" + sentence_label(s) + "': head cycle detected");
    return t;
}

CanonCode canon_rooted(const DepTree& t) {
    check_valid(t);
    auto ch = children_of(t);
    if (ch[0].size() != 1) throw TreeError("canon_rooted: input must have exactly one root");
    auto order = bottom_up_order(t, ch);
    if (static_cast<int>(order.size()) != t.n)
        throw TreeError("canon_rooted: parent array contains a cycle");
    std::vector<std::string> code(t.n + 1);
    for (int v : order) {
        std::vector<std::string> parts;
        parts.reserve(ch[v].size());
        for (int c : ch[v]) parts.push_back(std::move(code[c]));
        std::sort(parts.begin(), parts.end());
        std::string s = "(";
        for (const std::string& p : parts) s += p;
        s += ')';
        code[v] = std::move(s);
    }
    return CanonCode{std::move(code[ch[0][0]])};
}

CanonCode canon_unrooted(const DepTree& t) {
    check_valid(t);
    auto adj = adjacency_of(t);
    CanonCode best;
    for (int c : tree_centers(t)) {
        CanonCode code = canon_rooted_at(c, adj, t.n);
        if (best.text.empty() || code.text < best.text) best = std::move(code);
    }
    return best;
}

CanonCode canonical_code(const DepTree& t, IsoMode mode) {
    return mode == IsoMode::Directed ? canon_rooted(t) : canon_unrooted(t);
}

IsoClassSet iso_class_set(std::span<const DepTree> trees, IsoMode mode) {
    IsoClassSet set;
    set.mode = mode;
    for (const DepTree& t : trees) set.codes.insert(canonical_code(t, mode).text);
    return set;
}

double dug(const IsoClassSet& train, std::span<const DepTree> test) {
    return iso_ratio(train, test, IsoMode::Directed, "dug");
}

double uug(const IsoClassSet& train, std::span<const DepTree> test) {
    return iso_ratio(train, test, IsoMode::Undirected, "uug");
}

BigInt count_rooted_trees(int n) {
    if (n < 0) throw StatsError("count_rooted_trees: n must be >= 0");
    if (n == 0) return 0;
    // a(m+1) = (1/m) * sum_{k=1..m} (sum_{d|k} d*a(d)) * a(m-k+1), a(1) = 1.
    std::vector<BigInt> a(n + 1), b(n + 1);
    a[1] = 1;
    for (int k = 1; k <= n; ++k) {
        b[k] = 0;
        for (int d = 1; d * d <= k; ++d) {
            if (k % d != 0) continue;
            b[k] += BigInt(d) * a[d];
            int e = k / d;
            if (e != d) b[k] += BigInt(e) * a[e];
        }
        if (k == n) break;
        BigInt sum = 0;
        for (int j = 1; j <= k; ++j) sum += b[j] * a[k - j + 1];
        a[k + 1] = sum / k;
    }
    return a[n];
}

std::vector<CanonCode> enumerate_rooted_trees(int n) {
    constexpr int kMaxEnumerate = 12;
    if (n < 1 || n > kMaxEnumerate)
        throw StatsError("enumerate_rooted_trees: n must be in 1.." +
                         std::to_string(kMaxEnumerate));

    // codes_by_size[s] holds every rooted code on s nodes. A tree of
    // size s is a root plus a multiset of subtrees totalling s-1 nodes;
    // choosing (size, index) pairs in non-increasing order yields each
    // multiset exactly once.
    std::vector<std::vector<std::string>> codes_by_size(n + 1);
    codes_by_size[1] = {"()"};
    for (int s = 2; s <= n; ++s) {
        std::vector<std::string> out;
        std::vector<const std::string*> chosen;
        auto emit = [&]() {
            std::vector<std::string> parts;
            parts.reserve(chosen.size());
            for (auto* p : chosen) parts.push_back(*p);
            std::sort(parts.begin(), parts.end());
            std::string code = "(";
            for (const std::string& p : parts) code += p;
            code += ')';
            out.push_back(std::move(code));
        };
        auto rec = [&](auto&& self, int remaining, int max_size, int max_index) -> void {
            if (remaining == 0) {
                emit();
                return;
            }
            int top = std::min(remaining, max_size);
            for (int sz = top; sz >= 1; --sz) {
                int start = (sz == max_size) ? max_index
                                             : static_cast<int>(codes_by_size[sz].size()) - 1;
                for (int idx = start; idx >= 0; --idx) {
                    chosen.push_back(&codes_by_size[sz][idx]);
                    self(self, remaining - sz, sz, idx);
                    chosen.pop_back();
                }
            }
        };
        int m = s - 1;
        rec(rec, m, m, static_cast<int>(codes_by_size[m].size()) - 1);
        codes_by_size[s] = std::move(out);
    }

    std::vector<std::string>& raw = codes_by_size[n];
    std::sort(raw.begin(), raw.end());
    std::vector<CanonCode> result;
    result.reserve(raw.size());
    for (std::string& s : raw) result.push_back(CanonCode{std::move(s)});
    return result;
}

bool is_isomorphic_bruteforce(const DepTree& a, const DepTree& b, IsoMode mode) {
    constexpr int kMaxBrute = 8;
    if (a.n > kMaxBrute || b.n > kMaxBrute)
        throw StatsError("is_isomorphic_bruteforce: supported only for n <= " +
                         std::to_string(kMaxBrute));
    check_valid(a);
    check_valid(b);
    if (a.n != b.n) return false;
    int n = a.n;

    // perm[v] is the image of a's node v in b (1-based).
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);

    if (mode == IsoMode::Directed) {
        do {
            bool ok = true;
            for (int v = 1; v <= n && ok; ++v) {
                int pa = a.parent[v - 1];
                int image_parent = (pa == 0) ? 0 : perm[pa - 1];
                if (b.parent[perm[v - 1] - 1] != image_parent) ok = false;
            }
            if (ok) return true;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return false;
    }

    auto edge_key = [n](int u, int v) { return std::min(u, v) * (n + 1) + std::max(u, v); };
    std::unordered_set<int> edges_b;
    for (int v = 1; v <= n; ++v)
        if (b.parent[v - 1] != 0) edges_b.insert(edge_key(v, b.parent[v - 1]));
    do {
        bool ok = true;
        for (int v = 1; v <= n && ok; ++v) {
            int p = a.parent[v - 1];
            if (p == 0) continue;
            if (!edges_b.count(edge_key(perm[v - 1], perm[p - 1]))) ok = false;
        }
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

} // namespace isoscope
