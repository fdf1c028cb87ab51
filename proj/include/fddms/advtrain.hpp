#pragma once

// Hardening loop: iteratively draw training instances, generate adversarial
// versions, keep the challenging ones (true-class confidence below threshold)
// in a growing repository, and retrain on mixed batches. Early stopping
// watches FGSM robust accuracy on the validation set.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "fddms/adversarial.hpp"
#include "fddms/nn.hpp"

namespace fddms {

struct AdvTrainConfig {
    int iterations = 10;       // R
    int draw_size = 200;       // N
    int epochs_per_iteration = 30;
    double threshold = 0.5;
    bool use_selection = true;  // "challenging" regimes select; plain ones keep all
    AttackSpec attack;          // generator for repository examples
    OptimizerKind optimizer = OptimizerKind::Adam;
    double lr = 0.001;
    int batch_size = 32;
    int patience = 3;  // early stop on validation FGSM robust accuracy
    AttackSpec validation_attack{AttackMethod::FGSM, AttackNorm::L2, 13.0, 1};
    std::uint64_t seed = 0;
    bool verbose = false;

    void validate() const {
        if (threshold <= 0 || threshold >= 1)
            throw std::invalid_argument("advtrain: threshold outside (0,1)");
        if (draw_size < 1 || iterations < 0)
            throw std::invalid_argument("advtrain: bad iteration/draw sizes");
    }
};

// Probability the model assigns to the instance's true class.
inline double confidence_score(const ModelState& model, const Instance& inst,
                               int label) {
    const double p = forward(model, inst.window).probability;
    return label == 1 ? p : 1.0 - p;
}

// Strict inequality: score == threshold is not selected.
inline bool select(double score, double threshold) {
    return score < threshold;
}

struct RepositoryEntry {
    Instance instance;
    std::size_t source_index = 0;
    AttackMethod method = AttackMethod::FGSM;
    int iteration_added = 0;
    double insertion_score = 0.0;
};

struct AdvTrainIteration {
    std::size_t repository_size = 0;
    std::size_t selected_count = 0;
    double normal_accuracy = 0.0;   // validation, clean
    double robust_accuracy = 0.0;   // validation, FGSM
    bool repository_empty_fallback = false;
};

struct AdvTrainReport {
    std::vector<AdvTrainIteration> iterations;
    std::vector<RepositoryEntry> repository;
    int best_iteration = -1;
    bool early_stopped = false;
};

// Robust accuracy: fraction of perturbed instances still classified with
// their true label.
inline double robust_accuracy(const ModelState& model,
                              const std::vector<Instance>& instances,
                              const AttackSpec& spec) {
    if (instances.empty()) return 0.0;
    std::vector<int> correct(instances.size(), 0);
    detail::parallel_chunks(instances.size(),
                            [&](std::size_t, std::size_t lo, std::size_t hi) {
                                for (std::size_t k = lo; k < hi; ++k) {
                                    AdvResult r = run_attack(model,
                                                             instances[k].window,
                                                             instances[k].label,
                                                             spec);
                                    const int pred =
                                        forward(model, r.perturbed).probability > 0.5
                                            ? 1
                                            : 0;
                                    correct[k] = pred == instances[k].label ? 1 : 0;
                                }
                            });
    std::size_t ok = 0;
    for (int c : correct) ok += static_cast<std::size_t>(c);
    return static_cast<double>(ok) / static_cast<double>(instances.size());
}

inline AdvTrainReport adversarial_retrain(ModelState& model,
                                          const SplitSet& split,
                                          const AdvTrainConfig& cfg) {
    cfg.validate();
    if (split.train.empty())
        throw std::invalid_argument("adversarial_retrain: empty training set");

    AdvTrainReport report;
    std::mt19937_64 rng(cfg.seed);
    ModelState best = model;
    double best_robust = -1.0;
    int stale = 0;

    for (int t = 0; t < cfg.iterations; ++t) {
        // draw N training instances
        std::uniform_int_distribution<std::size_t> pick(0, split.train.size() - 1);
        std::vector<std::size_t> drawn(static_cast<std::size_t>(cfg.draw_size));
        for (auto& d : drawn) d = pick(rng);

        // generate adversarial versions and score them
        std::vector<AdvResult> generated(drawn.size());
        detail::parallel_chunks(drawn.size(),
                                [&](std::size_t, std::size_t lo, std::size_t hi) {
                                    for (std::size_t k = lo; k < hi; ++k) {
                                        const Instance& src = split.train[drawn[k]];
                                        generated[k] = run_attack(model, src.window,
                                                                  src.label,
                                                                  cfg.attack);
                                    }
                                });
        AdvTrainIteration it_rec;
        for (std::size_t k = 0; k < drawn.size(); ++k) {
            const Instance& src = split.train[drawn[k]];
            Instance adv = src;
            adv.window = generated[k].perturbed;
            const double score = confidence_score(model, adv, src.label);
            if (!cfg.use_selection || select(score, cfg.threshold)) {
                report.repository.push_back(
                    {std::move(adv), drawn[k], cfg.attack.method, t, score});
                ++it_rec.selected_count;
            }
        }
        it_rec.repository_size = report.repository.size();

        // assemble S_t + S_t^adv and retrain
        SplitSet stage;
        stage.normalized = split.normalized;
        stage.normalizer = split.normalizer;
        for (std::size_t d : drawn) stage.train.push_back(split.train[d]);
        if (report.repository.empty()) {
            it_rec.repository_empty_fallback = true;
        } else {
            std::uniform_int_distribution<std::size_t> pick_adv(
                0, report.repository.size() - 1);
            for (int k = 0; k < cfg.draw_size; ++k)
                stage.train.push_back(report.repository[pick_adv(rng)].instance);
        }
        OptimizerState opt = OptimizerState::make(cfg.optimizer, cfg.lr);
        TrainConfig tc;
        tc.epochs = cfg.epochs_per_iteration;
        tc.batch_size = cfg.batch_size;
        tc.seed = rng();
        train(model, stage, opt, tc);

        it_rec.normal_accuracy = evaluate(model, split.validation).accuracy;
        it_rec.robust_accuracy =
            robust_accuracy(model, split.validation, cfg.validation_attack);
        report.iterations.push_back(it_rec);
        if (cfg.verbose)
            std::cerr << "advtrain iter " << (t + 1) << " repo "
                      << it_rec.repository_size << " normal "
                      << it_rec.normal_accuracy << " robust "
                      << it_rec.robust_accuracy << '\n';

        if (it_rec.robust_accuracy > best_robust) {
            best_robust = it_rec.robust_accuracy;
            best = model;
            report.best_iteration = t;
            stale = 0;
        } else if (++stale >= cfg.patience) {
            report.early_stopped = true;
            break;
        }
    }
    if (report.best_iteration >= 0) model = best;  // restore best checkpoint
    return report;
}

// Test-time defense: perturb the incoming instance with the named attack's
// noise before classification. Disabled unless a spec is supplied.
inline Instance input_noise_defense(const ModelState& model,
                                    const Instance& inst,
                                    const std::optional<AttackSpec>& spec) {
    if (!spec) return inst;
    AdvResult r = run_attack(model, inst.window, inst.label, *spec);
    Instance out = inst;
    out.window = std::move(r.perturbed);
    return out;
}

}  // namespace fddms
