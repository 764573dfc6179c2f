#pragma once

// Straight-line re-derivations of the library's numeric contracts, written
// without looking at the production code paths. Tests compare the two
// implementations; agreement is the evidence, so nothing here may call
// into the library's own forward/scoring routines.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "flowcast/graph.hpp"
#include "flowcast/matrix.hpp"

namespace refimpl {

// ----------------------------------------------------------- text hashing

inline std::vector<std::string> tokens(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

inline uint64_t fnv(const std::string& s) {
    uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::vector<double> encode_text(const std::string& text, int dim, uint64_t seed) {
    std::vector<double> v(dim, 0.0);
    for (const std::string& t : tokens(text)) {
        uint64_t h = fnv(t) ^ seed;
        double sign = (h & 0x8000000000000000ULL) ? -1.0 : 1.0;
        v[h % static_cast<uint64_t>(dim)] += sign;
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0)
        for (double& x : v) x /= norm;
    return v;
}

// ------------------------------------------------------------- GNN layers

// Aggregation set of node i: itself first, then in-neighbors (positional).
using Nbr = std::vector<std::vector<int>>;

inline flowcast::Matrix gcn_layer(const Nbr& nbr, const flowcast::Matrix& H,
                                  const flowcast::Matrix& W,
                                  const std::vector<double>& b) {
    int n = H.rows, d_in = H.cols, d_out = W.rows;
    flowcast::Matrix out(n, d_out);
    for (int i = 0; i < n; ++i) {
        std::vector<double> m(d_in, 0.0);
        for (int j : nbr[i])
            for (int c = 0; c < d_in; ++c) m[c] += H.at(j, c);
        for (double& x : m) x /= static_cast<double>(nbr[i].size());
        for (int r = 0; r < d_out; ++r) {
            double z = b[r];
            for (int c = 0; c < d_in; ++c) z += W.at(r, c) * m[c];
            out.at(i, r) = z > 0.0 ? z : 0.0;
        }
    }
    return out;
}

inline flowcast::Matrix gat_layer(const Nbr& nbr, const flowcast::Matrix& H,
                                  const flowcast::Matrix& W,
                                  const std::vector<double>& b,
                                  const std::vector<double>& attn) {
    int n = H.rows, d_in = H.cols, d_out = W.rows;
    flowcast::Matrix Z(n, d_out);
    for (int i = 0; i < n; ++i)
        for (int r = 0; r < d_out; ++r) {
            double z = 0.0;
            for (int c = 0; c < d_in; ++c) z += W.at(r, c) * H.at(i, c);
            Z.at(i, r) = z;
        }
    const double* a1 = attn.data();
    const double* a2 = attn.data() + d_out;
    flowcast::Matrix out(n, d_out);
    for (int i = 0; i < n; ++i) {
        std::vector<double> e;
        for (int j : nbr[i]) {
            double s = 0.0;
            for (int r = 0; r < d_out; ++r) s += a1[r] * Z.at(i, r) + a2[r] * Z.at(j, r);
            e.push_back(s > 0.0 ? s : 0.2 * s);
        }
        double mx = *std::max_element(e.begin(), e.end());
        double denom = 0.0;
        for (double& x : e) {
            x = std::exp(x - mx);
            denom += x;
        }
        for (int r = 0; r < d_out; ++r) {
            double m = 0.0;
            for (size_t k = 0; k < nbr[i].size(); ++k)
                m += (e[k] / denom) * Z.at(nbr[i][k], r);
            double z = m + b[r];
            out.at(i, r) = z > 0.0 ? z : 0.0;
        }
    }
    return out;
}

// Full three-stage forward from raw buffers. `gnn_W/gnn_b/gnn_attn` hold
// one entry per layer; attn entries are ignored for GCN.
struct ForwardParams {
    std::vector<flowcast::Matrix> gnn_W;
    std::vector<std::vector<double>> gnn_b;
    std::vector<std::vector<double>> gnn_attn;
    flowcast::Matrix proj_W;
    std::vector<double> proj_b;
    flowcast::Matrix fuse_wf_W;
    std::vector<double> fuse_wf_b;
    flowcast::Matrix fuse_task_W;
    std::vector<double> fuse_task_b;
    flowcast::Matrix head2_W;
    std::vector<double> head2_b;
};

inline double predict_probability(bool gat, const ForwardParams& p, const Nbr& nbr,
                                  const flowcast::Matrix& X,
                                  const std::vector<double>& u) {
    flowcast::Matrix H = X;
    for (size_t l = 0; l < p.gnn_W.size(); ++l)
        H = gat ? gat_layer(nbr, H, p.gnn_W[l], p.gnn_b[l], p.gnn_attn[l])
                : gcn_layer(nbr, H, p.gnn_W[l], p.gnn_b[l]);
    int hidden = H.cols;
    std::vector<double> g(hidden, 0.0);
    for (int i = 0; i < H.rows; ++i)
        for (int c = 0; c < hidden; ++c) g[c] += H.at(i, c);
    for (double& x : g) x /= static_cast<double>(H.rows);

    std::vector<double> t(hidden, 0.0);
    for (int r = 0; r < hidden; ++r) {
        double z = p.proj_b[r];
        for (size_t c = 0; c < u.size(); ++c) z += p.proj_W.at(r, static_cast<int>(c)) * u[c];
        t[r] = z > 0.0 ? z : 0.0;
    }

    std::vector<double> a1(hidden, 0.0);
    for (int r = 0; r < hidden; ++r) {
        double z = p.fuse_wf_b[r] + p.fuse_task_b[r];
        for (int c = 0; c < hidden; ++c) z += p.fuse_wf_W.at(r, c) * g[c];
        for (int c = 0; c < hidden; ++c) z += p.fuse_task_W.at(r, c) * t[c];
        a1[r] = z > 0.0 ? z : 0.0;
    }
    double logit = p.head2_b[0];
    for (int c = 0; c < hidden; ++c) logit += p.head2_W.at(0, c) * a1[c];
    return 1.0 / (1.0 + std::exp(-logit));
}

// --------------------------------------------------------------- executor

inline std::vector<std::string> skill_tags(const std::string& prompt,
                                           const std::vector<std::string>& vocab) {
    std::vector<std::string> out;
    for (const std::string& t : tokens(prompt))
        if (std::find(vocab.begin(), vocab.end(), t) != vocab.end() &&
            std::find(out.begin(), out.end(), t) == out.end())
            out.push_back(t);
    return out;
}

// Enumerates every directed path (any start node, any end node) and checks
// whether the required sequence appears as an in-order subsequence of the
// path's tag lists, each node consuming at most one element. Exponential,
// fine for N <= 10. Only defined for non-empty sequences (a type
// invariant upstream).
inline bool path_covers(const flowcast::WorkflowGraph& g,
                        const std::vector<std::vector<std::string>>& tags,
                        const std::vector<std::string>& seq) {
    int n = g.node_count();
    std::vector<std::vector<int>> out_adj(n);
    for (const auto& [u, v] : g.edges)
        out_adj[g.index_of(u)].push_back(g.index_of(v));

    // progress = elements of seq already matched before visiting `node`
    std::function<bool(int, size_t)> walk = [&](int node, size_t progress) {
        size_t next = progress;
        if (next < seq.size()) {
            const auto& t = tags[node];
            if (std::find(t.begin(), t.end(), seq[next]) != t.end()) ++next;
        }
        if (next == seq.size()) return true;
        for (int succ : out_adj[node])
            if (walk(succ, next)) return true;
        return false;
    };
    for (int s = 0; s < n; ++s)
        if (walk(s, 0)) return true;
    return false;
}

inline uint64_t splitmix(uint64_t h) {
    h += 0x9e3779b97f4a7c15ULL;
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
    h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
    return h ^ (h >> 31);
}

inline int execute_workflow(const flowcast::WorkflowGraph& g,
                            const flowcast::TaskInstance& task,
                            const std::vector<std::string>& vocab) {
    std::vector<std::vector<std::string>> tags;
    for (const auto& node : g.nodes) tags.push_back(skill_tags(node.prompt, vocab));
    int e = (g.node_count() <= task.eval.max_nodes &&
             path_covers(g, tags, task.eval.required_sequence))
                ? 1
                : 0;
    if (task.eval.noise_rate > 0.0) {
        uint64_t h = splitmix(fnv(g.id + std::string(1, '\x1f') + task.id) ^
                              task.eval.noise_seed);
        double unit = (h >> 11) * 0x1.0p-53;
        if (unit < task.eval.noise_rate) e = 1 - e;
    }
    return e;
}

// ---------------------------------------------------------------- metrics

// Brute-force top-k selection by per-workflow mean label: sort a copy by
// (rate desc, id asc) using long-double rates, take the first k ids.
struct LabelRow {
    std::string id;
    std::vector<int> labels;
};

inline std::vector<std::string> top_k(std::vector<LabelRow> rows, int k) {
    std::stable_sort(rows.begin(), rows.end(), [](const LabelRow& a, const LabelRow& b) {
        long double ra = 0, rb = 0;
        for (int x : a.labels) ra += x;
        for (int x : b.labels) rb += x;
        ra /= a.labels.size();
        rb /= b.labels.size();
        if (ra != rb) return ra > rb;
        return a.id < b.id;
    });
    std::vector<std::string> out;
    for (int i = 0; i < k; ++i) out.push_back(rows[i].id);
    return out;
}

inline double utility(const std::vector<LabelRow>& actual,
                      const std::vector<LabelRow>& predicted, int k) {
    std::vector<std::string> ta = top_k(actual, k), tp = top_k(predicted, k);
    std::set<std::string> sa(ta.begin(), ta.end());
    int hits = 0;
    for (const std::string& id : tp) hits += sa.count(id);
    return static_cast<double>(hits) / k;
}

} // namespace refimpl
