#include "flowcast/model.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "flowcast/errors.hpp"

namespace flowcast {

Arch arch_from_string(const std::string& s) {
    if (s == "gcn") return Arch::gcn;
    if (s == "gat") return Arch::gat;
    throw ConfigError("unknown arch '" + s + "' (expected gcn or gat)");
}

std::string arch_to_string(Arch a) { return a == Arch::gcn ? "gcn" : "gat"; }

void PredictorConfig::check() const {
    if (layers < 1) throw ConfigError("layers must be >= 1");
    if (hidden < 1) throw ConfigError("hidden must be >= 1");
    if (embed_dim < 1) throw ConfigError("embed_dim must be >= 1");
    if (!(threshold > 0.0 && threshold < 1.0))
        throw ConfigError("threshold must lie in (0, 1)");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (batch < 1) throw ConfigError("batch must be >= 1");
    if (!(lr >= 0.0)) throw ConfigError("lr must be >= 0");
    if (!(weight_decay >= 0.0)) throw ConfigError("weight_decay must be >= 0");
}

GraphInput compile_graph(const WorkflowGraph& g, const TextEncoder& encoder,
                         bool bidirectional) {
    GraphInput input;
    auto nbr = in_neighbor_indices(g, bidirectional);
    input.nbr.resize(nbr.size());
    for (size_t i = 0; i < nbr.size(); ++i) {
        // Self first: sources keep a nonempty message set this way.
        input.nbr[i].reserve(nbr[i].size() + 1);
        input.nbr[i].push_back(static_cast<int>(i));
        input.nbr[i].insert(input.nbr[i].end(), nbr[i].begin(), nbr[i].end());
    }
    input.X = encoder.encode_nodes(g);
    return input;
}

PredictorModel::PredictorModel(PredictorConfig cfg) : cfg_(cfg) {
    cfg_.check();
    Rng rng(sub_seed(cfg_.seed, "init"));
    gnn.resize(cfg_.layers);
    for (int l = 0; l < cfg_.layers; ++l) {
        int in = l == 0 ? cfg_.embed_dim : cfg_.hidden;
        gnn[l].lin.init(cfg_.hidden, in, rng);
        if (cfg_.arch == Arch::gat) {
            int n = 2 * cfg_.hidden;
            double limit = std::sqrt(6.0 / (n + 1));
            gnn[l].attn.resize(n);
            for (double& a : gnn[l].attn) a = rng.next_range(-limit, limit);
            gnn[l].grad_attn.assign(n, 0.0);
        }
    }
    proj.init(cfg_.hidden, cfg_.embed_dim, rng);
    fuse_wf.init(cfg_.hidden, cfg_.hidden, rng);
    fuse_task.init(cfg_.hidden, cfg_.hidden, rng);
    head2.init(1, cfg_.hidden, rng);
}

std::vector<ParamRef> PredictorModel::params() {
    std::vector<ParamRef> ps;
    auto add_linear = [&ps](const std::string& base, LinearLayer& lin) {
        ps.push_back({base + ".W", &lin.W.data, &lin.gradW.data, lin.W.rows, lin.W.cols});
        ps.push_back({base + ".b", &lin.b, &lin.gradb, static_cast<int>(lin.b.size()), 1});
    };
    for (size_t l = 0; l < gnn.size(); ++l) {
        std::string base = "gnn." + std::to_string(l);
        add_linear(base, gnn[l].lin);
        if (cfg_.arch == Arch::gat)
            ps.push_back({base + ".attn", &gnn[l].attn, &gnn[l].grad_attn,
                          static_cast<int>(gnn[l].attn.size()), 1});
    }
    add_linear("proj", proj);
    add_linear("fuse_wf", fuse_wf);
    add_linear("fuse_task", fuse_task);
    add_linear("head2", head2);
    return ps;
}

size_t PredictorModel::param_count() const {
    size_t n = 0;
    for (const auto& layer : gnn)
        n += layer.lin.W.data.size() + layer.lin.b.size() + layer.attn.size();
    n += proj.W.data.size() + proj.b.size();
    n += fuse_wf.W.data.size() + fuse_wf.b.size();
    n += fuse_task.W.data.size() + fuse_task.b.size();
    n += head2.W.data.size() + head2.b.size();
    return n;
}

void PredictorModel::zero_grads() {
    for (auto& layer : gnn) {
        layer.lin.zero_grad();
        std::fill(layer.grad_attn.begin(), layer.grad_attn.end(), 0.0);
    }
    proj.zero_grad();
    fuse_wf.zero_grad();
    fuse_task.zero_grad();
    head2.zero_grad();
}

bool PredictorModel::parameters_finite() const {
    for (const auto& layer : gnn) {
        if (!all_finite(layer.lin.W.data.data(), layer.lin.W.data.size())) return false;
        if (!all_finite(layer.lin.b.data(), layer.lin.b.size())) return false;
        if (!all_finite(layer.attn.data(), layer.attn.size())) return false;
    }
    return all_finite(proj.W.data.data(), proj.W.data.size()) &&
           all_finite(proj.b.data(), proj.b.size()) &&
           all_finite(fuse_wf.W.data.data(), fuse_wf.W.data.size()) &&
           all_finite(fuse_wf.b.data(), fuse_wf.b.size()) &&
           all_finite(fuse_task.W.data.data(), fuse_task.W.data.size()) &&
           all_finite(fuse_task.b.data(), fuse_task.b.size()) &&
           all_finite(head2.W.data.data(), head2.W.data.size()) &&
           all_finite(head2.b.data(), head2.b.size());
}

namespace {

inline double leaky_relu(double x) { return x > 0.0 ? x : 0.2 * x; }

} // namespace

void PredictorModel::layer_forward(int layer, const GraphInput& input,
                                   const Matrix& H_in, LayerCache& cache) const {
    const GnnLayer& L = gnn[layer];
    const int N = H_in.rows;
    const int d_in = L.lin.in_dim();
    const int d_out = L.lin.out_dim();
    if (H_in.cols != d_in)
        throw ShapeMismatchError("gnn layer " + std::to_string(layer) + " input width " +
                                 std::to_string(H_in.cols) + " != " + std::to_string(d_in));

    if (cfg_.arch == Arch::gcn) {
        // m_i = mean over {i} ∪ in(i); h' = ReLU(W m + b)
        cache.M = Matrix(N, d_in);
        for (int i = 0; i < N; ++i) {
            const auto& S = input.nbr[i];
            double* mi = cache.M.row(i);
            for (int j : S) axpy(1.0, H_in.row(j), mi, d_in);
            double inv = 1.0 / static_cast<double>(S.size());
            for (int k = 0; k < d_in; ++k) mi[k] *= inv;
        }
        cache.pre = L.lin.forward_rows(cache.M);
    } else {
        // z_j = W h_j; e_ij = LeakyReLU(a1·z_i + a2·z_j) over {i} ∪ in(i);
        // α = softmax; m_i = Σ α_ij z_j; h' = ReLU(m + b)
        cache.Z = Matrix(N, d_out);
        matmul_nt(H_in, L.lin.W, cache.Z);
        const double* a1 = L.attn.data();
        const double* a2 = L.attn.data() + d_out;
        std::vector<double> p(N), q(N);
        for (int n = 0; n < N; ++n) {
            p[n] = dot(a1, cache.Z.row(n), d_out);
            q[n] = dot(a2, cache.Z.row(n), d_out);
        }
        cache.e.assign(N, {});
        cache.alpha.assign(N, {});
        cache.pre = Matrix(N, d_out);
        for (int i = 0; i < N; ++i) {
            const auto& S = input.nbr[i];
            auto& e = cache.e[i];
            auto& alpha = cache.alpha[i];
            e.resize(S.size());
            alpha.resize(S.size());
            double emax = -1e300;
            for (size_t k = 0; k < S.size(); ++k) {
                e[k] = leaky_relu(p[i] + q[S[k]]);
                emax = std::max(emax, e[k]);
            }
            double zsum = 0.0;
            for (size_t k = 0; k < S.size(); ++k) {
                alpha[k] = std::exp(e[k] - emax);
                zsum += alpha[k];
            }
            double* mi = cache.pre.row(i);
            for (size_t k = 0; k < S.size(); ++k) {
                alpha[k] /= zsum;
                axpy(alpha[k], cache.Z.row(S[k]), mi, d_out);
            }
            axpy(1.0, L.lin.b.data(), mi, d_out);
        }
    }

    cache.H = Matrix(N, d_out);
    for (size_t k = 0; k < cache.pre.data.size(); ++k)
        cache.H.data[k] = cache.pre.data[k] > 0.0 ? cache.pre.data[k] : 0.0;
}

Matrix PredictorModel::layer_backward(int layer, const GraphInput& input,
                                      const Matrix& H_in, const LayerCache& cache,
                                      const Matrix& dH) {
    GnnLayer& L = gnn[layer];
    const int N = H_in.rows;
    const int d_in = L.lin.in_dim();
    const int d_out = L.lin.out_dim();

    Matrix dpre(N, d_out);
    for (size_t k = 0; k < dpre.data.size(); ++k)
        dpre.data[k] = cache.pre.data[k] > 0.0 ? dH.data[k] : 0.0;

    Matrix dH_in(N, d_in);
    if (cfg_.arch == Arch::gcn) {
        Matrix dM = L.lin.backward_rows(cache.M, dpre);
        for (int i = 0; i < N; ++i) {
            const auto& S = input.nbr[i];
            double inv = 1.0 / static_cast<double>(S.size());
            for (int j : S) axpy(inv, dM.row(i), dH_in.row(j), d_in);
        }
        return dH_in;
    }

    const double* a1 = L.attn.data();
    const double* a2 = L.attn.data() + d_out;
    double* ga1 = L.grad_attn.data();
    double* ga2 = L.grad_attn.data() + d_out;
    Matrix dZ(N, d_out);
    std::vector<double> dp(N, 0.0), dq(N, 0.0);
    std::vector<double> dalpha;
    for (int i = 0; i < N; ++i) {
        const auto& S = input.nbr[i];
        const auto& alpha = cache.alpha[i];
        const double* dm = dpre.row(i);
        axpy(1.0, dm, L.lin.gradb.data(), d_out);
        dalpha.assign(S.size(), 0.0);
        double asum = 0.0;
        for (size_t k = 0; k < S.size(); ++k) {
            dalpha[k] = dot(dm, cache.Z.row(S[k]), d_out);
            axpy(alpha[k], dm, dZ.row(S[k]), d_out);
            asum += alpha[k] * dalpha[k];
        }
        for (size_t k = 0; k < S.size(); ++k) {
            double de = alpha[k] * (dalpha[k] - asum);
            // LeakyReLU preserves sign, so the stored post-activation
            // logit tells us which branch was taken.
            double deraw = de * (cache.e[i][k] > 0.0 ? 1.0 : 0.2);
            dp[i] += deraw;
            dq[S[k]] += deraw;
        }
    }
    for (int n = 0; n < N; ++n) {
        const double* zn = cache.Z.row(n);
        double* dzn = dZ.row(n);
        if (dp[n] != 0.0) {
            axpy(dp[n], zn, ga1, d_out);
            axpy(dp[n], a1, dzn, d_out);
        }
        if (dq[n] != 0.0) {
            axpy(dq[n], zn, ga2, d_out);
            axpy(dq[n], a2, dzn, d_out);
        }
    }
    for (int n = 0; n < N; ++n) {
        rank1_acc(L.lin.gradW, dZ.row(n), H_in.row(n));
        matvec_t_acc(L.lin.W, dZ.row(n), dH_in.row(n));
    }
    return dH_in;
}

WorkflowCache PredictorModel::encode_workflow(const GraphInput& input) const {
    WorkflowCache cache;
    cache.input = &input;
    cache.layers.resize(gnn.size());
    const Matrix* cur = &input.X;
    for (size_t l = 0; l < gnn.size(); ++l) {
        layer_forward(static_cast<int>(l), input, *cur, cache.layers[l]);
        cur = &cache.layers[l].H;
    }
    cache.g.assign(cfg_.hidden, 0.0);
    for (int i = 0; i < cur->rows; ++i) axpy(1.0, cur->row(i), cache.g.data(), cfg_.hidden);
    double inv = 1.0 / static_cast<double>(cur->rows);
    for (double& v : cache.g) v *= inv;
    return cache;
}

void PredictorModel::workflow_backward(const WorkflowCache& cache, const double* dg) {
    const GraphInput& input = *cache.input;
    const int N = input.X.rows;
    Matrix dH(N, cfg_.hidden);
    double inv = 1.0 / static_cast<double>(N);
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < cfg_.hidden; ++k) dH.at(i, k) = dg[k] * inv;
    for (int l = static_cast<int>(gnn.size()) - 1; l >= 0; --l) {
        const Matrix& H_in = l == 0 ? input.X : cache.layers[l - 1].H;
        dH = layer_backward(l, input, H_in, cache.layers[l], dH);
    }
}

TaskCache PredictorModel::encode_task(const std::vector<double>& u) const {
    if (static_cast<int>(u.size()) != cfg_.embed_dim)
        throw ShapeMismatchError("task embedding width " + std::to_string(u.size()) +
                                 " != " + std::to_string(cfg_.embed_dim));
    TaskCache cache;
    cache.u = u;
    cache.pre_t.resize(cfg_.hidden);
    proj.forward(cache.u.data(), cache.pre_t.data());
    cache.t.resize(cfg_.hidden);
    for (int k = 0; k < cfg_.hidden; ++k)
        cache.t[k] = cache.pre_t[k] > 0.0 ? cache.pre_t[k] : 0.0;
    return cache;
}

void PredictorModel::task_backward(const TaskCache& cache, const double* dt) {
    std::vector<double> dpre(cfg_.hidden);
    for (int k = 0; k < cfg_.hidden; ++k)
        dpre[k] = cache.pre_t[k] > 0.0 ? dt[k] : 0.0;
    proj.backward(cache.u.data(), dpre.data(), nullptr);
}

double PredictorModel::head_forward(const double* g, const double* t,
                                    HeadCache& cache) const {
    const int h = cfg_.hidden;
    cache.g_in.assign(g, g + h);
    cache.t_in.assign(t, t + h);
    cache.pre1.resize(h);
    fuse_wf.forward(g, cache.pre1.data());
    std::vector<double> from_task(h);
    fuse_task.forward(t, from_task.data());
    axpy(1.0, from_task.data(), cache.pre1.data(), h);
    cache.a1.resize(h);
    for (int k = 0; k < h; ++k) cache.a1[k] = cache.pre1[k] > 0.0 ? cache.pre1[k] : 0.0;
    head2.forward(cache.a1.data(), &cache.logit);
    return cache.logit;
}

void PredictorModel::head_backward(const HeadCache& cache, double dlogit, double* dg,
                                   double* dt) {
    const int h = cfg_.hidden;
    std::vector<double> da1(h, 0.0);
    head2.backward(cache.a1.data(), &dlogit, da1.data());
    std::vector<double> dpre1(h);
    for (int k = 0; k < h; ++k) dpre1[k] = cache.pre1[k] > 0.0 ? da1[k] : 0.0;
    fuse_wf.backward(cache.g_in.data(), dpre1.data(), dg);
    fuse_task.backward(cache.t_in.data(), dpre1.data(), dt);
}

double PredictorModel::predict_probability(const GraphInput& input,
                                           const std::vector<double>& task_vec) const {
    WorkflowCache wc = encode_workflow(input);
    TaskCache tc = encode_task(task_vec);
    HeadCache hc;
    return sigmoid(head_forward(wc.g.data(), tc.t.data(), hc));
}

Prediction PredictorModel::predict(const TextEncoder& encoder, const WorkflowGraph& graph,
                                   const TaskInstance& task) const {
    GraphInput input = compile_graph(graph, encoder, cfg_.bidirectional);
    WorkflowCache wc = encode_workflow(input);
    TaskCache tc = encode_task(encoder.encode_text(task.text));
    HeadCache hc;
    double logit = head_forward(wc.g.data(), tc.t.data(), hc);
    Prediction out;
    out.probability = sigmoid(logit);
    out.label = out.probability >= cfg_.threshold ? 1 : 0;
    out.graph_embedding = std::move(wc.g);
    out.task_embedding = std::move(tc.t);
    return out;
}

double PredictorModel::loss_only(const GraphInput& input,
                                 const std::vector<double>& task_vec, int label) const {
    WorkflowCache wc = encode_workflow(input);
    TaskCache tc = encode_task(task_vec);
    HeadCache hc;
    return bce_loss(head_forward(wc.g.data(), tc.t.data(), hc), label).loss;
}

double PredictorModel::loss_and_grads(const GraphInput& input,
                                      const std::vector<double>& task_vec, int label) {
    WorkflowCache wc = encode_workflow(input);
    TaskCache tc = encode_task(task_vec);
    HeadCache hc;
    BceResult r = bce_loss(head_forward(wc.g.data(), tc.t.data(), hc), label);
    std::vector<double> dg(cfg_.hidden, 0.0), dt(cfg_.hidden, 0.0);
    head_backward(hc, r.dlogit, dg.data(), dt.data());
    task_backward(tc, dt.data());
    workflow_backward(wc, dg.data());
    return r.loss;
}

double PredictorModel::batch_gradients(const TrainingData& data,
                                       const std::vector<Sample>& batch) {
    if (batch.empty()) throw DataError("empty gradient batch");
    const int h = cfg_.hidden;
    const int B = static_cast<int>(batch.size());
    const double inv = 1.0 / static_cast<double>(B);

    // Distinct workflows/tasks propagate once; samples index into them.
    std::vector<int> wlist, tlist, wix(B), tix(B);
    std::unordered_map<int, int> wpos, tpos;
    for (int k = 0; k < B; ++k) {
        auto [wit, wnew] = wpos.emplace(batch[k].workflow, static_cast<int>(wlist.size()));
        if (wnew) wlist.push_back(batch[k].workflow);
        wix[k] = wit->second;
        auto [tit, tnew] = tpos.emplace(batch[k].task, static_cast<int>(tlist.size()));
        if (tnew) tlist.push_back(batch[k].task);
        tix[k] = tit->second;
    }
    std::vector<WorkflowCache> wcaches;
    std::vector<TaskCache> tcaches;
    wcaches.reserve(wlist.size());
    tcaches.reserve(tlist.size());
    for (int w : wlist) wcaches.push_back(encode_workflow(data.workflows[w]));
    for (int t : tlist) tcaches.push_back(encode_task(data.tasks[t]));

    // Fuse each distinct row once; per-sample work is then O(h) gathers.
    const int NW = static_cast<int>(wlist.size());
    const int NT = static_cast<int>(tlist.size());
    Matrix G(NW, h), T(NT, h);
    for (int i = 0; i < NW; ++i) std::copy_n(wcaches[i].g.data(), h, G.row(i));
    for (int i = 0; i < NT; ++i) std::copy_n(tcaches[i].t.data(), h, T.row(i));
    Matrix U = fuse_wf.forward_rows(G);
    Matrix V = fuse_task.forward_rows(T);

    Matrix pre1(B, h);
    for (int k = 0; k < B; ++k) {
        std::copy_n(U.row(wix[k]), h, pre1.row(k));
        axpy(1.0, V.row(tix[k]), pre1.row(k), h);
    }
    Matrix a1 = pre1;
    for (double& v : a1.data) v = v > 0.0 ? v : 0.0;

    double loss_sum = 0.0;
    std::vector<double> dlogit(B);
    for (int k = 0; k < B; ++k) {
        double logit = dot(head2.W.row(0), a1.row(k), h) + head2.b[0];
        BceResult r = bce_loss(logit, batch[k].label);
        loss_sum += r.loss;
        dlogit[k] = r.dlogit * inv;
    }

    // Head backward: group per-sample dpre1 by distinct row, then one
    // batched backward per fusion half.
    Matrix dU(NW, h), dV(NT, h);
    {
        std::vector<double> dp(h);
        for (int k = 0; k < B; ++k) {
            head2.gradb[0] += dlogit[k];
            axpy(dlogit[k], a1.row(k), head2.gradW.row(0), h);
            const double* w2 = head2.W.row(0);
            const double* p1 = pre1.row(k);
            for (int c = 0; c < h; ++c) dp[c] = p1[c] > 0.0 ? dlogit[k] * w2[c] : 0.0;
            axpy(1.0, dp.data(), dU.row(wix[k]), h);
            axpy(1.0, dp.data(), dV.row(tix[k]), h);
        }
    }
    // Both halves contribute a bias to the shared pre-activation, so each
    // bias gradient is the full dpre1 sum; backward_rows computes exactly that.
    Matrix dG = fuse_wf.backward_rows(G, dU);
    Matrix dT = fuse_task.backward_rows(T, dV);

    for (int i = 0; i < NT; ++i) task_backward(tcaches[i], dT.row(i));
    for (int i = 0; i < NW; ++i) workflow_backward(wcaches[i], dG.row(i));
    return loss_sum;
}

double PredictorModel::evaluate_accuracy(const TrainingData& data,
                                         const std::vector<Sample>& set) const {
    if (set.empty()) throw DataError("accuracy over an empty sample set");
    const int h = cfg_.hidden;

    // Encode and fuse each distinct workflow/task once; evaluating a sample
    // is then a gather, a ReLU, and a dot product.
    std::vector<int> wpos(data.workflows.size(), -1), tpos(data.tasks.size(), -1);
    std::vector<int> wlist, tlist;
    for (const Sample& s : set) {
        if (wpos[s.workflow] < 0) {
            wpos[s.workflow] = static_cast<int>(wlist.size());
            wlist.push_back(s.workflow);
        }
        if (tpos[s.task] < 0) {
            tpos[s.task] = static_cast<int>(tlist.size());
            tlist.push_back(s.task);
        }
    }
    Matrix G(static_cast<int>(wlist.size()), h);
    Matrix T(static_cast<int>(tlist.size()), h);
    for (size_t i = 0; i < wlist.size(); ++i) {
        std::vector<double> g = encode_workflow(data.workflows[wlist[i]]).g;
        std::copy_n(g.data(), h, G.row(static_cast<int>(i)));
    }
    for (size_t i = 0; i < tlist.size(); ++i) {
        std::vector<double> t = encode_task(data.tasks[tlist[i]]).t;
        std::copy_n(t.data(), h, T.row(static_cast<int>(i)));
    }
    Matrix U = fuse_wf.forward_rows(G);
    Matrix V = fuse_task.forward_rows(T);

    long correct = 0;
    std::vector<double> buf(h);
    for (const Sample& s : set) {
        std::copy_n(U.row(wpos[s.workflow]), h, buf.data());
        axpy(1.0, V.row(tpos[s.task]), buf.data(), h);
        for (double& v : buf) v = v > 0.0 ? v : 0.0;
        double logit = dot(head2.W.row(0), buf.data(), h) + head2.b[0];
        int pred = sigmoid(logit) >= cfg_.threshold ? 1 : 0;
        if (pred == s.label) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(set.size());
}

TrainResult PredictorModel::train(const TrainingData& data,
                                  const std::vector<Sample>& train_set,
                                  const std::vector<Sample>& val_set) {
    if (train_set.empty()) throw EmptySplitError("train");
    if (val_set.empty()) throw EmptySplitError("val");
    auto check_samples = [&](const std::vector<Sample>& set, const char* name) {
        for (const Sample& s : set) {
            if (s.workflow < 0 || s.workflow >= static_cast<int>(data.workflows.size()) ||
                s.task < 0 || s.task >= static_cast<int>(data.tasks.size()))
                throw DataError(std::string(name) + " sample references a missing record");
            if (s.label != 0 && s.label != 1)
                throw DataError(std::string(name) + " label must be 0 or 1");
        }
    };
    check_samples(train_set, "train");
    check_samples(val_set, "val");

    auto ps = params();
    AdamConfig acfg;
    acfg.lr = cfg_.lr;
    acfg.weight_decay = cfg_.weight_decay;
    acfg.decoupled = cfg_.decoupled_decay;
    AdamState adam(acfg);
    Rng rng(sub_seed(cfg_.seed, "train"));

    TrainResult result;
    result.best_val_accuracy = -1.0;
    std::vector<std::vector<double>> best;

    // Workflow-blocked shuffle: samples of one workflow stay contiguous so
    // a batch touches one or two graphs instead of ~batch-many, and each
    // graph propagates about once per epoch. Blocks and the samples inside
    // them are reshuffled every epoch.
    std::vector<std::vector<size_t>> blocks;
    {
        std::unordered_map<int, size_t> block_of;
        for (size_t i = 0; i < train_set.size(); ++i) {
            auto [it, fresh] = block_of.emplace(train_set[i].workflow, blocks.size());
            if (fresh) blocks.emplace_back();
            blocks[it->second].push_back(i);
        }
    }
    std::vector<size_t> block_order(blocks.size());
    for (size_t i = 0; i < blocks.size(); ++i) block_order[i] = i;
    std::vector<size_t> order(train_set.size());
    std::vector<Sample> batch;

    for (int epoch = 1; epoch <= cfg_.epochs; ++epoch) {
        rng.shuffle(block_order);
        size_t at = 0;
        for (size_t b : block_order) {
            rng.shuffle(blocks[b]);
            for (size_t i : blocks[b]) order[at++] = i;
        }

        double loss_sum = 0.0;
        for (size_t start = 0; start < order.size(); start += cfg_.batch) {
            size_t stop = std::min(order.size(), start + cfg_.batch);
            batch.clear();
            for (size_t k = start; k < stop; ++k) batch.push_back(train_set[order[k]]);
            zero_grads();
            loss_sum += batch_gradients(data, batch);
            adam.step(ps);
        }

        if (!parameters_finite())
            throw NumericError("training diverged: non-finite parameters at epoch " +
                               std::to_string(epoch));

        double val_acc = evaluate_accuracy(data, val_set);
        result.history.push_back(
            {epoch, loss_sum / static_cast<double>(train_set.size()), val_acc});
        // Strictly greater: ties keep the earlier epoch's checkpoint.
        if (val_acc > result.best_val_accuracy) {
            result.best_val_accuracy = val_acc;
            result.best_epoch = epoch;
            best.clear();
            for (const auto& p : ps) best.push_back(*p.value);
        }
    }

    for (size_t i = 0; i < ps.size(); ++i) *ps[i].value = best[i];
    return result;
}

} // namespace flowcast
