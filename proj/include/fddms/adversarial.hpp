#pragma once

// Gradient attacks against the detector: FGSM, BIM, original binary DeepFool,
// and the clipped/scaled DeepFool variant. Attacks operate in the normalized
// feature space where the gradients live; distortion can be reported either
// there or in physical units.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fddms/nn.hpp"

namespace fddms {

enum class AttackMethod { FGSM, BIM, DeepFool, DeepFoolVariant };
enum class AttackNorm { L2, LInf };

struct AttackSpec {
    AttackMethod method = AttackMethod::FGSM;
    AttackNorm norm = AttackNorm::LInf;  // FGSM/BIM only
    double epsilon = 13.0;               // budget (FGSM/BIM) or overshoot (DeepFool)
    int iterations = 20;                 // m (BIM) or T (DeepFool)
    double kappa = 0.5;                  // variant scaling factor
    double alpha_clip = 0.95;            // variant gradient clip bound

    double bim_step() const {
        return epsilon / static_cast<double>(iterations);
    }

    void validate() const {
        if (epsilon < 0) throw std::invalid_argument("attack: epsilon < 0");
        if (iterations < 1) throw std::invalid_argument("attack: iterations < 1");
        if (kappa <= 0 || kappa > 1) throw std::invalid_argument("attack: kappa outside (0,1]");
        if (alpha_clip <= 0) throw std::invalid_argument("attack: alpha_clip <= 0");
    }
};

using Window = std::vector<std::vector<double>>;

struct AdvResult {
    Window original;
    Window perturbed;
    bool success = false;        // prediction flipped to Normal
    int iterations_used = 0;
    bool zero_gradient = false;  // attack stalled on a vanished gradient
};

namespace detail {

inline double l2_norm(const Window& w) {
    double s = 0;
    for (const auto& row : w)
        for (double v : row) s += v * v;
    return std::sqrt(s);
}

inline Window diff(const Window& a, const Window& b) {
    Window d = a;
    for (std::size_t t = 0; t < a.size(); ++t)
        for (std::size_t c = 0; c < a[t].size(); ++c) d[t][c] = a[t][c] - b[t][c];
    return d;
}

inline void check_finite(const Window& g) {
    for (const auto& row : g)
        for (double v : row)
            if (!std::isfinite(v))
                throw std::runtime_error("attack: non-finite gradient");
}

// Projects (x - origin) onto the epsilon ball of the given norm around origin.
inline void project(Window& x, const Window& origin, AttackNorm norm,
                    double epsilon) {
    if (norm == AttackNorm::LInf) {
        for (std::size_t t = 0; t < x.size(); ++t)
            for (std::size_t c = 0; c < x[t].size(); ++c)
                x[t][c] = std::clamp(x[t][c], origin[t][c] - epsilon,
                                     origin[t][c] + epsilon);
    } else {
        const double n = l2_norm(diff(x, origin));
        if (n > epsilon && n > 0) {
            const double k = epsilon / n;
            for (std::size_t t = 0; t < x.size(); ++t)
                for (std::size_t c = 0; c < x[t].size(); ++c)
                    x[t][c] = origin[t][c] + (x[t][c] - origin[t][c]) * k;
        }
    }
}

inline int predict(const ModelState& model, const Window& w) {
    return forward(model, w).probability > 0.5 ? 1 : 0;
}

}  // namespace detail

// Loss gradient ascent step for the given label: x' = x + eps * direction.
inline AdvResult fgsm(const ModelState& model, const Window& window, int label,
                      const AttackSpec& spec) {
    if (spec.method != AttackMethod::FGSM)
        throw std::invalid_argument("fgsm: wrong method in spec");
    spec.validate();
    ForwardCache cache = forward(model, window);
    Gradients g = backward(model, cache, label);
    detail::check_finite(g.input);

    AdvResult res;
    res.original = window;
    res.perturbed = window;
    res.iterations_used = 1;

    double gnorm = 0;
    for (const auto& row : g.input)
        for (double v : row) gnorm += v * v;
    gnorm = std::sqrt(gnorm);
    if (gnorm == 0.0) {
        res.zero_gradient = true;
    } else if (spec.norm == AttackNorm::LInf) {
        for (std::size_t t = 0; t < window.size(); ++t)
            for (std::size_t c = 0; c < window[t].size(); ++c)
                if (g.input[t][c] != 0.0)
                    res.perturbed[t][c] +=
                        spec.epsilon * (g.input[t][c] > 0 ? 1.0 : -1.0);
    } else {
        for (std::size_t t = 0; t < window.size(); ++t)
            for (std::size_t c = 0; c < window[t].size(); ++c)
                res.perturbed[t][c] += spec.epsilon * g.input[t][c] / gnorm;
    }
    res.success = detail::predict(model, res.perturbed) == 0;
    return res;
}

// Iterated FGSM with per-step budget projection; x^0 = x.
inline AdvResult bim(const ModelState& model, const Window& window, int label,
                     const AttackSpec& spec) {
    if (spec.method != AttackMethod::BIM)
        throw std::invalid_argument("bim: wrong method in spec");
    spec.validate();
    const double step = spec.bim_step();

    AdvResult res;
    res.original = window;
    res.perturbed = window;
    for (int it = 0; it < spec.iterations; ++it) {
        ForwardCache cache = forward(model, res.perturbed);
        Gradients g = backward(model, cache, label);
        detail::check_finite(g.input);
        double gnorm = 0;
        for (const auto& row : g.input)
            for (double v : row) gnorm += v * v;
        gnorm = std::sqrt(gnorm);
        if (gnorm == 0.0) {
            res.zero_gradient = true;
            break;
        }
        if (spec.norm == AttackNorm::LInf) {
            for (std::size_t t = 0; t < window.size(); ++t)
                for (std::size_t c = 0; c < window[t].size(); ++c)
                    if (g.input[t][c] != 0.0)
                        res.perturbed[t][c] +=
                            step * (g.input[t][c] > 0 ? 1.0 : -1.0);
        } else {
            for (std::size_t t = 0; t < window.size(); ++t)
                for (std::size_t c = 0; c < window[t].size(); ++c)
                    res.perturbed[t][c] += step * g.input[t][c] / gnorm;
        }
        detail::project(res.perturbed, window, spec.norm, spec.epsilon);
        res.iterations_used = it + 1;
        if (detail::predict(model, res.perturbed) == 0) {
            res.success = true;
            break;
        }
    }
    if (!res.success)
        res.success = detail::predict(model, res.perturbed) == 0;
    return res;
}

// Original binary DeepFool on the pre-sigmoid logit f: each step moves by
// r_i = -f * grad f / ||grad f||^2; the final perturbation gets the (1+eps)
// overshoot.
inline AdvResult deepfool(const ModelState& model, const Window& window,
                          const AttackSpec& spec) {
    if (spec.method != AttackMethod::DeepFool)
        throw std::invalid_argument("deepfool: wrong method in spec");
    spec.validate();

    AdvResult res;
    res.original = window;
    res.perturbed = window;
    if (detail::predict(model, window) == 0) {
        res.success = true;  // already Normal, nothing to do
        return res;
    }

    Window r_tot = window;
    for (auto& row : r_tot) std::fill(row.begin(), row.end(), 0.0);

    for (int it = 0; it < spec.iterations; ++it) {
        Window x_i = window;
        for (std::size_t t = 0; t < x_i.size(); ++t)
            for (std::size_t c = 0; c < x_i[t].size(); ++c)
                x_i[t][c] += r_tot[t][c];
        ForwardCache cache = forward(model, x_i);
        if (cache.probability <= 0.5) {
            // flipped; apply overshoot to the accumulated perturbation
            res.success = true;
            break;
        }
        Window grad = logit_input_gradient(model, cache);
        detail::check_finite(grad);
        double g2 = 0;
        for (const auto& row : grad)
            for (double v : row) g2 += v * v;
        if (g2 == 0.0) {
            res.zero_gradient = true;
            break;
        }
        const double k = -cache.logit / g2;
        for (std::size_t t = 0; t < grad.size(); ++t)
            for (std::size_t c = 0; c < grad[t].size(); ++c)
                r_tot[t][c] += k * grad[t][c];
        res.iterations_used = it + 1;
    }
    const double overshoot = 1.0 + spec.epsilon;
    res.perturbed = window;
    for (std::size_t t = 0; t < window.size(); ++t)
        for (std::size_t c = 0; c < window[t].size(); ++c)
            res.perturbed[t][c] += overshoot * r_tot[t][c];
    res.success = detail::predict(model, res.perturbed) == 0;
    return res;
}

// The DeepFool variant: elementwise gradient clip to [-alpha, +alpha], step
// r_i = score * grad / ||grad||^2 scaled by kappa. Early success returns
// x + r_tot without overshoot; exhaustion returns x + (1+eps) * r_tot.
inline AdvResult deepfool_variant(const ModelState& model, const Window& window,
                                  const AttackSpec& spec) {
    if (spec.method != AttackMethod::DeepFoolVariant)
        throw std::invalid_argument("deepfool_variant: wrong method in spec");
    spec.validate();

    AdvResult res;
    res.original = window;
    res.perturbed = window;
    const int pred0 = detail::predict(model, window);

    Window r_tot = window;
    for (auto& row : r_tot) std::fill(row.begin(), row.end(), 0.0);

    for (int it = 0; it < spec.iterations; ++it) {
        Window x_i = window;
        for (std::size_t t = 0; t < x_i.size(); ++t)
            for (std::size_t c = 0; c < x_i[t].size(); ++c)
                x_i[t][c] += r_tot[t][c];
        if (detail::predict(model, x_i) != pred0) {
            res.perturbed = x_i;  // minimized perturbation, no overshoot
            res.success = pred0 == 1;
            return res;
        }
        ForwardCache cache = forward(model, x_i);
        Window grad = logit_input_gradient(model, cache);
        detail::check_finite(grad);
        // moving toward the boundary means decreasing |logit|
        const double score = -cache.logit;
        for (auto& row : grad)
            for (double& v : row)
                v = std::clamp(v, -spec.alpha_clip, spec.alpha_clip);
        double g2 = 0;
        for (const auto& row : grad)
            for (double v : row) g2 += v * v;
        if (g2 == 0.0) {
            res.zero_gradient = true;
            break;
        }
        const double k = spec.kappa * score / g2;
        for (std::size_t t = 0; t < grad.size(); ++t)
            for (std::size_t c = 0; c < grad[t].size(); ++c)
                r_tot[t][c] += k * grad[t][c];
        res.iterations_used = it + 1;
    }
    const double overshoot = 1.0 + spec.epsilon;
    res.perturbed = window;
    for (std::size_t t = 0; t < window.size(); ++t)
        for (std::size_t c = 0; c < window[t].size(); ++c)
            res.perturbed[t][c] += overshoot * r_tot[t][c];
    res.success = detail::predict(model, res.perturbed) == 0 && pred0 == 1;
    return res;
}

inline AdvResult run_attack(const ModelState& model, const Window& window,
                            int label, const AttackSpec& spec) {
    switch (spec.method) {
        case AttackMethod::FGSM: return fgsm(model, window, label, spec);
        case AttackMethod::BIM: return bim(model, window, label, spec);
        case AttackMethod::DeepFool: return deepfool(model, window, spec);
        case AttackMethod::DeepFoolVariant:
            return deepfool_variant(model, window, spec);
    }
    throw std::logic_error("run_attack: unreachable");
}

// --- reporting ---------------------------------------------------------------

struct DistortionReport {
    double asr = 0.0;  // percent
    double mean_l0 = 0.0, mean_l2 = 0.0, mean_linf = 0.0;
    std::size_t count = 0;
    bool empty_flag = false;
};

constexpr double kL0Threshold = 1e-12;

inline DistortionReport distortion_metrics(const std::vector<AdvResult>& results,
                                           bool successful_only = false) {
    DistortionReport rep;
    double l0 = 0, l2 = 0, linf = 0;
    std::size_t n = 0, flipped = 0;
    for (const auto& r : results) {
        if (r.success) ++flipped;
        if (successful_only && !r.success) continue;
        double cells = 0, sumsq = 0, maxabs = 0;
        for (std::size_t t = 0; t < r.original.size(); ++t)
            for (std::size_t c = 0; c < r.original[t].size(); ++c) {
                const double d = r.perturbed[t][c] - r.original[t][c];
                if (std::abs(d) > kL0Threshold) cells += 1;
                sumsq += d * d;
                maxabs = std::max(maxabs, std::abs(d));
            }
        l0 += cells;
        l2 += std::sqrt(sumsq);
        linf += maxabs;
        ++n;
    }
    if (results.empty() || n == 0) {
        rep.empty_flag = true;
        return rep;
    }
    rep.count = n;
    rep.asr = 100.0 * static_cast<double>(flipped) /
              static_cast<double>(results.size());
    rep.mean_l0 = l0 / static_cast<double>(n);
    rep.mean_l2 = l2 / static_cast<double>(n);
    rep.mean_linf = linf / static_cast<double>(n);
    return rep;
}

inline double attack_success_rate(const std::vector<AdvResult>& results) {
    if (results.empty())
        throw std::invalid_argument("attack_success_rate: empty input");
    std::size_t flipped = 0;
    for (const auto& r : results)
        if (r.success) ++flipped;
    return 100.0 * static_cast<double>(flipped) /
           static_cast<double>(results.size());
}

// Generates adversarial versions of every instance the model currently
// classifies as Attack (true label 1, prediction 1). Parallel across
// instances; output order follows input order.
inline std::vector<AdvResult> attack_instances(
    const ModelState& model, const std::vector<Instance>& instances,
    const AttackSpec& spec) {
    std::vector<const Instance*> targets;
    for (const auto& inst : instances)
        if (inst.label == 1 && detail::predict(model, inst.window) == 1)
            targets.push_back(&inst);
    std::vector<AdvResult> results(targets.size());
    detail::parallel_chunks(targets.size(),
                            [&](std::size_t, std::size_t lo, std::size_t hi) {
                                for (std::size_t k = lo; k < hi; ++k)
                                    results[k] = run_attack(model,
                                                            targets[k]->window,
                                                            targets[k]->label, spec);
                            });
    return results;
}

inline std::string attack_method_name(AttackMethod m) {
    switch (m) {
        case AttackMethod::FGSM: return "fgsm";
        case AttackMethod::BIM: return "bim";
        case AttackMethod::DeepFool: return "deepfool";
        case AttackMethod::DeepFoolVariant: return "deepfool_variant";
    }
    return "?";
}

inline AttackMethod attack_method_from_string(const std::string& s) {
    if (s == "fgsm") return AttackMethod::FGSM;
    if (s == "bim") return AttackMethod::BIM;
    if (s == "deepfool") return AttackMethod::DeepFool;
    if (s == "deepfool_variant") return AttackMethod::DeepFoolVariant;
    throw std::invalid_argument("unknown attack method: " + s);
}

}  // namespace fddms
