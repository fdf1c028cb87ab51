#pragma once

// Minimal dense tensor core and a single-layer LSTM binary classifier with
// exact backpropagation through time, including gradients with respect to the
// input window (needed by every gradient attack). All arithmetic is in 64-bit
// floating point.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fddms/dataset.hpp"

namespace fddms {

struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> d;  // row-major

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), d(r * c, 0.0) {}
    double& operator()(std::size_t r, std::size_t c) { return d[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return d[r * cols + c]; }
};

using Vec = std::vector<double>;

inline double sigmoid(double x) {
    return x >= 0 ? 1.0 / (1.0 + std::exp(-x))
                  : std::exp(x) / (1.0 + std::exp(x));
}

struct LstmParams {
    int input_size = 20;
    int hidden_size = 128;
    // gate order: input, forget, cell candidate, output
    Matrix w_i, w_f, w_g, w_o;  // hidden x input
    Matrix u_i, u_f, u_g, u_o;  // hidden x hidden
    Vec b_i, b_f, b_g, b_o;     // hidden
    Vec dense_w;                // hidden
    Vec dense_b;                // single element, kept as a vector so the
                                // tensor traversal yields stable references

    static LstmParams zeros(int input, int hidden) {
        LstmParams p;
        p.input_size = input;
        p.hidden_size = hidden;
        const auto h = static_cast<std::size_t>(hidden);
        const auto in = static_cast<std::size_t>(input);
        for (Matrix* m : {&p.w_i, &p.w_f, &p.w_g, &p.w_o}) *m = Matrix(h, in);
        for (Matrix* m : {&p.u_i, &p.u_f, &p.u_g, &p.u_o}) *m = Matrix(h, h);
        for (Vec* v : {&p.b_i, &p.b_f, &p.b_g, &p.b_o, &p.dense_w})
            v->assign(h, 0.0);
        p.dense_b.assign(1, 0.0);
        return p;
    }

    // Uniform +-1/sqrt(fan_in) per weight matrix, forget-gate bias +1.
    static LstmParams init(int input, int hidden, std::uint64_t seed) {
        LstmParams p = zeros(input, hidden);
        std::mt19937_64 rng(seed);
        auto fill = [&](std::vector<double>& d, int fan_in) {
            const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
            std::uniform_real_distribution<double> u(-bound, bound);
            for (double& v : d) v = u(rng);
        };
        for (Matrix* m : {&p.w_i, &p.w_f, &p.w_g, &p.w_o}) fill(m->d, input);
        for (Matrix* m : {&p.u_i, &p.u_f, &p.u_g, &p.u_o}) fill(m->d, hidden);
        fill(p.dense_w, hidden);
        std::fill(p.b_f.begin(), p.b_f.end(), 1.0);
        return p;
    }

    // Fixed traversal order shared by gradients and optimizer accumulators.
    template <typename Fn>
    void for_each_tensor(Fn&& fn) {
        for (Matrix* m : {&w_i, &w_f, &w_g, &w_o, &u_i, &u_f, &u_g, &u_o})
            fn(m->d);
        for (Vec* v : {&b_i, &b_f, &b_g, &b_o, &dense_w, &dense_b}) fn(*v);
    }

    std::size_t parameter_count() const {
        std::size_t n = 0;
        for (const Matrix* m : {&w_i, &w_f, &w_g, &w_o, &u_i, &u_f, &u_g, &u_o})
            n += m->d.size();
        for (const Vec* v : {&b_i, &b_f, &b_g, &b_o, &dense_w, &dense_b})
            n += v->size();
        return n;
    }
};

struct ModelState {
    LstmParams params;
    Normalizer normalizer;  // carried for deployment-time decoding
};

struct ForwardCache {
    // per timestep: gate activations and states
    std::vector<Vec> i, f, g, o, c, h, tanh_c;
    std::vector<std::vector<double>> x;  // copy of the input window
    double logit = 0.0;
    double probability = 0.5;
};

namespace detail {
inline void gate_preact(const Matrix& w, const Matrix& u, const Vec& b,
                        const std::vector<double>& x, const Vec& h_prev,
                        Vec& out) {
    const std::size_t hidden = w.rows, in = w.cols;
    for (std::size_t r = 0; r < hidden; ++r) {
        double acc = b[r];
        const double* wr = &w.d[r * in];
        for (std::size_t c = 0; c < in; ++c) acc += wr[c] * x[c];
        const double* ur = &u.d[r * hidden];
        for (std::size_t c = 0; c < hidden; ++c) acc += ur[c] * h_prev[c];
        out[r] = acc;
    }
}
}  // namespace detail

inline ForwardCache forward(const ModelState& model,
                            const std::vector<std::vector<double>>& window) {
    const auto& p = model.params;
    const std::size_t hidden = static_cast<std::size_t>(p.hidden_size);
    const std::size_t in = static_cast<std::size_t>(p.input_size);
    if (window.empty() || window[0].size() != in)
        throw std::invalid_argument("forward: window shape mismatch");
    for (const auto& row : window)
        for (double v : row)
            if (!std::isfinite(v))
                throw std::invalid_argument("forward: non-finite input");

    const std::size_t T = window.size();
    ForwardCache cache;
    cache.x = window;
    for (auto* v : {&cache.i, &cache.f, &cache.g, &cache.o, &cache.c, &cache.h,
                    &cache.tanh_c})
        v->assign(T, Vec(hidden, 0.0));

    Vec h_prev(hidden, 0.0), c_prev(hidden, 0.0), pre(hidden, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
        detail::gate_preact(p.w_i, p.u_i, p.b_i, window[t], h_prev, pre);
        for (std::size_t r = 0; r < hidden; ++r) cache.i[t][r] = sigmoid(pre[r]);
        detail::gate_preact(p.w_f, p.u_f, p.b_f, window[t], h_prev, pre);
        for (std::size_t r = 0; r < hidden; ++r) cache.f[t][r] = sigmoid(pre[r]);
        detail::gate_preact(p.w_g, p.u_g, p.b_g, window[t], h_prev, pre);
        for (std::size_t r = 0; r < hidden; ++r) cache.g[t][r] = std::tanh(pre[r]);
        detail::gate_preact(p.w_o, p.u_o, p.b_o, window[t], h_prev, pre);
        for (std::size_t r = 0; r < hidden; ++r) cache.o[t][r] = sigmoid(pre[r]);
        for (std::size_t r = 0; r < hidden; ++r) {
            cache.c[t][r] = cache.f[t][r] * c_prev[r] + cache.i[t][r] * cache.g[t][r];
            cache.tanh_c[t][r] = std::tanh(cache.c[t][r]);
            cache.h[t][r] = cache.o[t][r] * cache.tanh_c[t][r];
        }
        h_prev = cache.h[t];
        c_prev = cache.c[t];
    }

    double logit = p.dense_b[0];
    for (std::size_t r = 0; r < hidden; ++r) logit += p.dense_w[r] * h_prev[r];
    cache.logit = logit;
    cache.probability = sigmoid(logit);
    return cache;
}

constexpr double kProbEps = 1e-12;

// Numerically stable BCE evaluated from the logit.
inline double bce_loss_from_logit(double logit, int label) {
    // -[y ln p + (1-y) ln(1-p)] = softplus(logit) - y*logit
    const double softplus =
        logit > 0 ? logit + std::log1p(std::exp(-logit)) : std::log1p(std::exp(logit));
    return softplus - label * logit;
}

inline double bce_loss(double probability, int label) {
    const double p = std::clamp(probability, kProbEps, 1.0 - kProbEps);
    return -(label * std::log(p) + (1 - label) * std::log(1.0 - p));
}

struct Gradients {
    LstmParams params;  // same shapes, gradient values
    std::vector<std::vector<double>> input;  // W x input_size

    void accumulate(Gradients& other) {
        auto it = [](LstmParams& a, LstmParams& b) {
            std::vector<std::vector<double>*> av, bv;
            a.for_each_tensor([&](std::vector<double>& d) { av.push_back(&d); });
            b.for_each_tensor([&](std::vector<double>& d) { bv.push_back(&d); });
            for (std::size_t i = 0; i < av.size(); ++i)
                for (std::size_t j = 0; j < av[i]->size(); ++j)
                    (*av[i])[j] += (*bv[i])[j];
        };
        it(params, other.params);
        for (std::size_t t = 0; t < input.size(); ++t)
            for (std::size_t c = 0; c < input[t].size(); ++c)
                input[t][c] += other.input[t][c];
    }
    void scale(double k) {
        params.for_each_tensor([&](std::vector<double>& d) {
            for (double& v : d) v *= k;
        });
        for (auto& row : input)
            for (double& v : row) v *= k;
    }
};

// Exact BPTT for the BCE loss. d_logit_override replaces (p - y) as the seed,
// which lets attacks differentiate the raw logit instead of the loss.
inline Gradients backward(const ModelState& model,
                          const ForwardCache& cache, int label,
                          std::optional<double> d_logit_override = {}) {
    const auto& p = model.params;
    const std::size_t hidden = static_cast<std::size_t>(p.hidden_size);
    const std::size_t in = static_cast<std::size_t>(p.input_size);
    const std::size_t T = cache.x.size();
    if (cache.h.size() != T || cache.h.empty() ||
        cache.h[0].size() != hidden || cache.x[0].size() != in)
        throw std::invalid_argument("backward: cache does not match model");

    Gradients grads;
    grads.params = LstmParams::zeros(p.input_size, p.hidden_size);
    grads.input.assign(T, std::vector<double>(in, 0.0));

    const double d_logit =
        d_logit_override ? *d_logit_override : cache.probability - label;

    Vec dh(hidden, 0.0), dc(hidden, 0.0);
    for (std::size_t r = 0; r < hidden; ++r) {
        dh[r] = p.dense_w[r] * d_logit;
        grads.params.dense_w[r] = cache.h[T - 1][r] * d_logit;
    }
    grads.params.dense_b[0] = d_logit;

    Vec da_i(hidden), da_f(hidden), da_g(hidden), da_o(hidden);
    const Vec zero_state(hidden, 0.0);
    for (std::size_t t = T; t-- > 0;) {
        const Vec& c_prev_v = t > 0 ? cache.c[t - 1] : zero_state;
        for (std::size_t r = 0; r < hidden; ++r) {
            const double i_ = cache.i[t][r], f_ = cache.f[t][r];
            const double g_ = cache.g[t][r], o_ = cache.o[t][r];
            const double tc = cache.tanh_c[t][r];
            const double dct = dc[r] + dh[r] * o_ * (1.0 - tc * tc);
            da_o[r] = dh[r] * tc * o_ * (1.0 - o_);
            da_i[r] = dct * g_ * i_ * (1.0 - i_);
            da_f[r] = dct * c_prev_v[r] * f_ * (1.0 - f_);
            da_g[r] = dct * i_ * (1.0 - g_ * g_);
            dc[r] = dct * f_;
        }
        const Vec& h_prev = t > 0 ? cache.h[t - 1] : zero_state;
        struct GateRef {
            const Vec* da;
            Matrix* dw;
            Matrix* du;
            Vec* db;
            const Matrix* w;
            const Matrix* u;
        };
        const GateRef gates[4] = {
            {&da_i, &grads.params.w_i, &grads.params.u_i, &grads.params.b_i, &p.w_i, &p.u_i},
            {&da_f, &grads.params.w_f, &grads.params.u_f, &grads.params.b_f, &p.w_f, &p.u_f},
            {&da_g, &grads.params.w_g, &grads.params.u_g, &grads.params.b_g, &p.w_g, &p.u_g},
            {&da_o, &grads.params.w_o, &grads.params.u_o, &grads.params.b_o, &p.w_o, &p.u_o},
        };
        std::fill(dh.begin(), dh.end(), 0.0);
        for (const auto& gate : gates) {
            for (std::size_t r = 0; r < hidden; ++r) {
                const double da = (*gate.da)[r];
                if (da == 0.0) continue;
                double* dwr = &gate.dw->d[r * in];
                const double* xr = cache.x[t].data();
                for (std::size_t c = 0; c < in; ++c) dwr[c] += da * xr[c];
                double* dur = &gate.du->d[r * hidden];
                for (std::size_t c = 0; c < hidden; ++c) dur[c] += da * h_prev[c];
                (*gate.db)[r] += da;
                const double* wr = &gate.w->d[r * in];
                double* gx = grads.input[t].data();
                for (std::size_t c = 0; c < in; ++c) gx[c] += da * wr[c];
                const double* ur = &gate.u->d[r * hidden];
                for (std::size_t c = 0; c < hidden; ++c) dh[c] += da * ur[c];
            }
        }
    }
    return grads;
}

// Gradient of the raw logit with respect to the input window (DeepFool needs
// the decision score's gradient, not the loss's).
inline std::vector<std::vector<double>> logit_input_gradient(
    const ModelState& model, const ForwardCache& cache) {
    return backward(model, cache, 0, 1.0).input;
}

// --- optimizers --------------------------------------------------------------

enum class OptimizerKind { SGD, Adam, RMSprop, Adagrad };

inline OptimizerKind optimizer_from_string(const std::string& s) {
    if (s == "sgd") return OptimizerKind::SGD;
    if (s == "adam") return OptimizerKind::Adam;
    if (s == "rmsprop") return OptimizerKind::RMSprop;
    if (s == "adagrad") return OptimizerKind::Adagrad;
    throw std::invalid_argument("unknown optimizer: " + s);
}

struct OptimizerState {
    OptimizerKind kind = OptimizerKind::Adam;
    double lr = 0.001;
    double beta1 = 0.9, beta2 = 0.999;  // Adam
    double rho = 0.9;                   // RMSprop
    double eps = 1e-8;
    std::uint64_t step_count = 0;
    bool skipped_non_finite = false;
    std::vector<std::vector<double>> m1, m2;  // per-tensor accumulators

    static OptimizerState make(OptimizerKind kind, double lr) {
        OptimizerState o;
        o.kind = kind;
        o.lr = lr;
        return o;
    }
};

inline void optimizer_step(OptimizerState& opt, LstmParams& params,
                           Gradients& grads) {
    std::vector<std::vector<double>*> pv, gv;
    params.for_each_tensor([&](std::vector<double>& d) { pv.push_back(&d); });
    grads.params.for_each_tensor([&](std::vector<double>& d) { gv.push_back(&d); });

    for (const auto* g : gv)
        for (double v : *g)
            if (!std::isfinite(v)) {
                opt.skipped_non_finite = true;
                return;
            }

    if (opt.m1.empty()) {
        for (const auto* p : pv) opt.m1.emplace_back(p->size(), 0.0);
        for (const auto* p : pv) opt.m2.emplace_back(p->size(), 0.0);
    }
    ++opt.step_count;
    const double t = static_cast<double>(opt.step_count);

    for (std::size_t k = 0; k < pv.size(); ++k) {
        auto& p = *pv[k];
        const auto& g = *gv[k];
        auto& m1 = opt.m1[k];
        auto& m2 = opt.m2[k];
        switch (opt.kind) {
            case OptimizerKind::SGD:
                for (std::size_t i = 0; i < p.size(); ++i) p[i] -= opt.lr * g[i];
                break;
            case OptimizerKind::Adam: {
                const double c1 = 1.0 - std::pow(opt.beta1, t);
                const double c2 = 1.0 - std::pow(opt.beta2, t);
                for (std::size_t i = 0; i < p.size(); ++i) {
                    m1[i] = opt.beta1 * m1[i] + (1.0 - opt.beta1) * g[i];
                    m2[i] = opt.beta2 * m2[i] + (1.0 - opt.beta2) * g[i] * g[i];
                    p[i] -= opt.lr * (m1[i] / c1) /
                            (std::sqrt(m2[i] / c2) + opt.eps);
                }
                break;
            }
            case OptimizerKind::RMSprop:
                for (std::size_t i = 0; i < p.size(); ++i) {
                    m2[i] = opt.rho * m2[i] + (1.0 - opt.rho) * g[i] * g[i];
                    p[i] -= opt.lr * g[i] / (std::sqrt(m2[i]) + opt.eps);
                }
                break;
            case OptimizerKind::Adagrad:
                for (std::size_t i = 0; i < p.size(); ++i) {
                    m2[i] += g[i] * g[i];
                    p[i] -= opt.lr * g[i] / (std::sqrt(m2[i]) + opt.eps);
                }
                break;
        }
    }
}

// --- training / evaluation ---------------------------------------------------

struct EpochRecord {
    double train_loss = 0.0;
    double validation_accuracy = 0.0;
};

struct TrainHistory {
    std::vector<EpochRecord> epochs;
};

struct Metrics {
    double accuracy = 0.0, precision = 0.0, recall = 0.0, f1 = 0.0;
    std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
    bool division_flag = false;  // some ratio had a zero denominator
};

namespace detail {
// Deterministic chunked parallelism: partition by index, reduce in chunk order.
template <typename Fn>
void parallel_chunks(std::size_t n, Fn&& fn) {
    const std::size_t workers =
        std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()),
                              n == 0 ? 1 : n);
    if (workers <= 1 || n < 8) {
        fn(0, 0, n);
        return;
    }
    std::vector<std::thread> threads;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        threads.emplace_back([&, w, lo, hi] { fn(w, lo, hi); });
    }
    for (auto& t : threads) t.join();
}
}  // namespace detail

inline Metrics evaluate(const ModelState& model,
                        const std::vector<Instance>& instances) {
    Metrics m;
    std::vector<int> preds(instances.size(), 0);
    detail::parallel_chunks(instances.size(),
                            [&](std::size_t, std::size_t lo, std::size_t hi) {
                                for (std::size_t k = lo; k < hi; ++k)
                                    preds[k] = forward(model, instances[k].window)
                                                           .probability > 0.5
                                                   ? 1
                                                   : 0;
                            });
    for (std::size_t k = 0; k < instances.size(); ++k) {
        const int y = instances[k].label, yh = preds[k];
        if (y == 1 && yh == 1) ++m.tp;
        else if (y == 0 && yh == 0) ++m.tn;
        else if (y == 0 && yh == 1) ++m.fp;
        else ++m.fn;
    }
    const auto total = m.tp + m.tn + m.fp + m.fn;
    auto ratio = [&m](std::size_t num, std::size_t den) {
        if (den == 0) {
            m.division_flag = true;
            return 0.0;
        }
        return static_cast<double>(num) / static_cast<double>(den);
    };
    m.accuracy = ratio(m.tp + m.tn, total);
    m.precision = ratio(m.tp, m.tp + m.fp);
    m.recall = ratio(m.tp, m.tp + m.fn);
    m.f1 = (m.precision + m.recall) > 0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : (m.division_flag = true, 0.0);
    return m;
}

struct TrainConfig {
    int epochs = 50;
    int batch_size = 32;
    std::uint64_t seed = 0;
    bool verbose = false;
};

// Mini-batch gradient: per-sample grads computed in parallel, reduced in
// deterministic chunk order, then averaged.
inline Gradients batch_gradient(const ModelState& model,
                                const std::vector<const Instance*>& batch,
                                double* loss_sum = nullptr) {
    std::vector<Gradients> partial(batch.size());
    std::vector<double> losses(batch.size(), 0.0);
    detail::parallel_chunks(batch.size(),
                            [&](std::size_t, std::size_t lo, std::size_t hi) {
                                for (std::size_t k = lo; k < hi; ++k) {
                                    ForwardCache cache =
                                        forward(model, batch[k]->window);
                                    losses[k] = bce_loss_from_logit(cache.logit,
                                                                    batch[k]->label);
                                    partial[k] = backward(model, cache,
                                                          batch[k]->label);
                                }
                            });
    Gradients total = std::move(partial[0]);
    for (std::size_t k = 1; k < partial.size(); ++k) total.accumulate(partial[k]);
    total.scale(1.0 / static_cast<double>(batch.size()));
    if (loss_sum)
        *loss_sum += std::accumulate(losses.begin(), losses.end(), 0.0);
    return total;
}

inline TrainHistory train(ModelState& model, const SplitSet& split,
                          OptimizerState& opt, const TrainConfig& cfg) {
    if (split.train.empty())
        throw std::invalid_argument("train: empty training set");
    TrainHistory history;
    std::mt19937_64 rng(cfg.seed);
    std::vector<std::size_t> order(split.train.size());
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double loss_sum = 0.0;
        for (std::size_t from = 0; from < order.size();
             from += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t to =
                std::min(order.size(), from + static_cast<std::size_t>(cfg.batch_size));
            std::vector<const Instance*> batch;
            batch.reserve(to - from);
            for (std::size_t k = from; k < to; ++k)
                batch.push_back(&split.train[order[k]]);
            Gradients g = batch_gradient(model, batch, &loss_sum);
            optimizer_step(opt, model.params, g);
        }
        EpochRecord rec;
        rec.train_loss = loss_sum / static_cast<double>(order.size());
        rec.validation_accuracy =
            split.validation.empty() ? 0.0
                                     : evaluate(model, split.validation).accuracy;
        if (cfg.verbose)
            std::cerr << "epoch " << (epoch + 1) << " loss " << rec.train_loss
                      << " val_acc " << rec.validation_accuracy << '\n';
        history.epochs.push_back(rec);
    }
    return history;
}

// --- checkpoint --------------------------------------------------------------
//
// "FDMC" magic, u32 version, u32 input, u32 hidden, all parameter tensors in
// traversal order, normalizer (u32 F, means, stdevs), u8 has-optimizer flag
// followed by the accumulators.

inline void save_checkpoint(const ModelState& model, std::ostream& out,
                            const OptimizerState* opt = nullptr) {
    out.write("FDMC", 4);
    detail::put<std::uint32_t>(out, 1);
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(model.params.input_size));
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(model.params.hidden_size));
    LstmParams copy = model.params;
    copy.for_each_tensor([&](std::vector<double>& d) {
        for (double v : d) detail::put<double>(out, v);
    });
    detail::put<std::uint32_t>(out,
                               static_cast<std::uint32_t>(model.normalizer.mean.size()));
    for (double v : model.normalizer.mean) detail::put<double>(out, v);
    for (double v : model.normalizer.stdev) detail::put<double>(out, v);
    detail::put<std::uint8_t>(out, opt ? 1 : 0);
    if (opt) {
        detail::put<std::uint8_t>(out, static_cast<std::uint8_t>(opt->kind));
        detail::put<double>(out, opt->lr);
        detail::put<std::uint64_t>(out, opt->step_count);
        detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(opt->m1.size()));
        for (const auto& bank : {opt->m1, opt->m2})
            for (const auto& acc : bank) {
                detail::put<std::uint64_t>(out, acc.size());
                for (double v : acc) detail::put<double>(out, v);
            }
    }
}

inline ModelState load_checkpoint(std::istream& in,
                                  OptimizerState* opt = nullptr) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::string(magic, 4) != "FDMC")
        throw std::runtime_error("checkpoint: bad magic");
    if (detail::get<std::uint32_t>(in) != 1)
        throw std::runtime_error("checkpoint: unsupported version");
    const auto input = static_cast<int>(detail::get<std::uint32_t>(in));
    const auto hidden = static_cast<int>(detail::get<std::uint32_t>(in));
    ModelState model;
    model.params = LstmParams::zeros(input, hidden);
    model.params.for_each_tensor([&](std::vector<double>& d) {
        for (double& v : d) v = detail::get<double>(in);
    });
    const auto f = detail::get<std::uint32_t>(in);
    model.normalizer.mean.resize(f);
    model.normalizer.stdev.resize(f);
    for (double& v : model.normalizer.mean) v = detail::get<double>(in);
    for (double& v : model.normalizer.stdev) v = detail::get<double>(in);
    const auto has_opt = detail::get<std::uint8_t>(in);
    if (has_opt && opt) {
        opt->kind = static_cast<OptimizerKind>(detail::get<std::uint8_t>(in));
        opt->lr = detail::get<double>(in);
        opt->step_count = detail::get<std::uint64_t>(in);
        const auto banks = detail::get<std::uint32_t>(in);
        for (auto* bank : {&opt->m1, &opt->m2}) {
            bank->clear();
            for (std::uint32_t k = 0; k < banks; ++k) {
                const auto len = detail::get<std::uint64_t>(in);
                std::vector<double> acc(len);
                for (double& v : acc) v = detail::get<double>(in);
                bank->push_back(std::move(acc));
            }
        }
    }
    return model;
}

}  // namespace fddms
