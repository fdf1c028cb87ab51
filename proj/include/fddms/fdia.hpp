#pragma once

// False data injection: pick instances, pick one second, overwrite the target
// signals with uniform random values inside their valid physical ranges.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fddms/can_codec.hpp"
#include "fddms/dataset.hpp"

namespace fddms {

inline std::vector<std::string> default_attack_targets() {
    return {"TQI_ACOR", "TQI",     "TPS",  "PV_AV_CAN", "TQI_MIN", "TQI_TARGET",
            "N",        "TQFR",    "VB",   "TQI_MAX",   "TQI_EMS16"};
}

struct AttackConfig {
    std::vector<std::string> target_signals = default_attack_targets();
    double fraction_attacked = 0.5;
    std::uint64_t seed = 0;
    bool quantize = true;  // snap injected values onto the signal's raw grid

    void validate(const SignalCatalog& catalog) const {
        for (const auto& name : target_signals)
            if (!catalog.contains(name))
                throw std::invalid_argument("attack target not in catalog: " + name);
        if (fraction_attacked < 0.0 || fraction_attacked > 1.0)
            throw std::invalid_argument("fraction_attacked outside [0,1]");
    }
};

struct InjectionRecord {
    std::size_t instance_index = 0;
    int injected_second = 0;  // relative to window start, [0, 9]
    std::vector<std::pair<std::string, double>> deltas;  // per-signal delta
    bool clamped_normal = false;  // some v_normal fell outside [v_min, v_max]
};

// delta ~ U(v_min - v_normal, v_max - v_normal), so the attacked value stays
// inside [v_min, v_max].
inline double sample_delta(double v_normal, double v_min, double v_max,
                           std::mt19937_64& rng, bool* clamped = nullptr) {
    double base = v_normal;
    if (base < v_min || base > v_max) {
        base = std::clamp(base, v_min, v_max);
        if (clamped) *clamped = true;
    }
    std::uniform_real_distribution<double> u(v_min - base, v_max - base);
    return u(rng);
}

inline double sample_delta(double v_normal, double v_max, std::mt19937_64& rng) {
    return sample_delta(v_normal, 0.0, v_max, rng);
}

inline std::pair<Instance, InjectionRecord> inject_instance(
    const Instance& inst, const AttackConfig& cfg, const SignalCatalog& catalog,
    std::mt19937_64& rng, std::size_t instance_index = 0) {
    if (inst.label != 0)
        throw std::invalid_argument("inject_instance: instance already attacked");

    const int rate = inst.timesteps() >= 10
                         ? static_cast<int>(inst.timesteps()) / 10
                         : 1;
    const int window_seconds = static_cast<int>(inst.timesteps()) / rate;
    std::uniform_int_distribution<int> pick_second(0, window_seconds - 1);
    InjectionRecord rec;
    rec.instance_index = instance_index;
    rec.injected_second = pick_second(rng);

    Instance out = inst;
    out.label = 1;
    out.injected_second = rec.injected_second;

    // One draw per (signal); the drawn attack value holds for the whole second.
    for (const auto& name : cfg.target_signals) {
        const SignalSpec& spec = catalog.at(name);
        const std::size_t col = catalog.index_of(name);
        const std::size_t from = static_cast<std::size_t>(rec.injected_second) * rate;
        const double v_normal = inst.window[from][col];
        bool clamped = false;
        double delta = sample_delta(v_normal, spec.v_min, spec.v_max, rng, &clamped);
        double v_attack = std::clamp(v_normal, spec.v_min, spec.v_max) + delta;
        if (cfg.quantize)
            v_attack = raw_to_physical(physical_to_raw(v_attack, spec).raw, spec);
        rec.clamped_normal |= clamped;
        rec.deltas.emplace_back(name, v_attack - v_normal);
        for (int t = 0; t < rate; ++t) out.window[from + t][col] = v_attack;
    }
    return {std::move(out), std::move(rec)};
}

struct AttackedDataset {
    std::vector<Instance> instances;
    std::vector<InjectionRecord> records;
};

// Replaces round(fraction * N) uniformly chosen instances by attacked copies.
inline AttackedDataset build_attacked_dataset(const std::vector<Instance>& input,
                                              const AttackConfig& cfg,
                                              const SignalCatalog& catalog) {
    cfg.validate(catalog);
    for (const auto& inst : input)
        if (inst.label != 0)
            throw std::invalid_argument("build_attacked_dataset: input must be clean");

    AttackedDataset out;
    out.instances = input;
    const std::size_t n_attack = static_cast<std::size_t>(
        std::llround(cfg.fraction_attacked * static_cast<double>(input.size())));
    std::vector<std::size_t> idx(input.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(cfg.seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(n_attack);
    std::sort(idx.begin(), idx.end());
    for (std::size_t i : idx) {
        auto [attacked, rec] = inject_instance(input[i], cfg, catalog, rng, i);
        out.instances[i] = std::move(attacked);
        out.records.push_back(std::move(rec));
    }
    return out;
}

// Audit manifest: one row per (instance, signal) delta.
inline void export_injection_manifest(const std::vector<InjectionRecord>& records,
                                      std::ostream& out) {
    out << "instance,injected_second,signal,delta\n";
    for (const auto& r : records)
        for (const auto& [signal, delta] : r.deltas)
            out << r.instance_index << ',' << r.injected_second << ',' << signal
                << ',' << delta << '\n';
}

}  // namespace fddms
