#pragma once

// Resampling of decoded CAN records into a fixed-rate signal table, sliding
// window instance construction, Pearson correlation analysis, and the
// 80/10/10 split with train-only normalization.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fddms/can_codec.hpp"

namespace fddms {

struct SignalTable {
    int rate = 10;                      // samples per second
    std::vector<std::string> columns;   // catalog order
    std::vector<std::vector<double>> values;  // [tick][feature]

    std::size_t ticks() const { return values.size(); }
    double duration_seconds() const {
        return static_cast<double>(values.size()) / rate;
    }
};

// Sample-and-hold resampling: cell (t, i) holds the latest record for signal i
// with timestamp <= tick t. Signals never seen before the first tick start at 0.
inline SignalTable resample(const std::vector<DecodedRecord>& records,
                            const SignalCatalog& catalog, int rate) {
    if (rate < 1) throw std::invalid_argument("resample: rate must be >= 1");
    SignalTable table;
    table.rate = rate;
    table.columns = catalog.names();
    if (records.empty()) return table;

    const double t_end = records.back().timestamp;
    const std::size_t n_ticks =
        static_cast<std::size_t>(std::floor(t_end * rate)) + 1;
    const std::size_t n_feat = catalog.size();

    std::vector<double> current(n_feat, 0.0);
    table.values.reserve(n_ticks);
    std::size_t r = 0;
    for (std::size_t tick = 0; tick < n_ticks; ++tick) {
        const double t = static_cast<double>(tick) / rate;
        while (r < records.size() && records[r].timestamp <= t) {
            if (catalog.contains(records[r].signal))
                current[catalog.index_of(records[r].signal)] = records[r].value;
            ++r;
        }
        table.values.push_back(current);
    }
    return table;
}

struct Instance {
    int start_second = 0;
    std::vector<std::vector<double>> window;  // [timestep][feature], W x 20
    int label = 0;                            // 0 Normal, 1 Attack
    std::optional<int> injected_second;       // relative to window start

    std::size_t timesteps() const { return window.size(); }
    std::size_t features() const {
        return window.empty() ? 0 : window[0].size();
    }
};

// Sliding 10 s windows at 1 s stride; count = floor(duration) - window.
inline std::vector<Instance> build_instances(const SignalTable& table,
                                             int window_seconds = 10,
                                             int stride_seconds = 1) {
    std::vector<Instance> out;
    const int duration = static_cast<int>(table.ticks()) / table.rate;
    const int count = duration - window_seconds;
    if (count < 0) return out;
    // duration == window still yields one full window
    const int n = std::max(count, duration == window_seconds ? 1 : count);
    for (int s = 0; s < n; s += stride_seconds) {
        Instance inst;
        inst.start_second = s;
        const std::size_t from = static_cast<std::size_t>(s) * table.rate;
        const std::size_t len = static_cast<std::size_t>(window_seconds) * table.rate;
        inst.window.assign(table.values.begin() + static_cast<std::ptrdiff_t>(from),
                           table.values.begin() + static_cast<std::ptrdiff_t>(from + len));
        out.push_back(std::move(inst));
    }
    return out;
}

struct PearsonResult {
    double r = 0.0;
    bool degenerate = false;  // one of the inputs is constant
};

inline PearsonResult pearson(const std::vector<double>& x,
                             const std::vector<double>& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("pearson: length mismatch");
    if (x.size() < 2)
        throw std::invalid_argument("pearson: need at least 2 samples");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return {0.0, true};
    double r = sxy / std::sqrt(sxx * syy);
    r = std::clamp(r, -1.0, 1.0);
    return {r, false};
}

struct CorrelationMatrix {
    std::vector<std::string> names;
    std::vector<std::vector<double>> r;  // symmetric, diagonal 1
    double threshold = 0.75;
};

inline CorrelationMatrix correlation_matrix(const SignalTable& table,
                                            double threshold = 0.75) {
    CorrelationMatrix m;
    m.names = table.columns;
    m.threshold = threshold;
    const std::size_t f = table.columns.size();
    m.r.assign(f, std::vector<double>(f, 0.0));
    std::vector<std::vector<double>> cols(f,
                                          std::vector<double>(table.ticks()));
    for (std::size_t t = 0; t < table.ticks(); ++t)
        for (std::size_t i = 0; i < f; ++i) cols[i][t] = table.values[t][i];
    for (std::size_t i = 0; i < f; ++i) {
        for (std::size_t j = i; j < f; ++j) {
            PearsonResult p =
                i == j ? PearsonResult{pearson(cols[i], cols[j]).degenerate ? 0.0 : 1.0,
                                       false}
                       : pearson(cols[i], cols[j]);
            m.r[i][j] = m.r[j][i] = p.r;
        }
    }
    return m;
}

// For each signal: all other signals with |r| >= threshold, strongest first.
inline std::map<std::string, std::vector<std::string>> correlated_groups(
    const CorrelationMatrix& m) {
    std::map<std::string, std::vector<std::string>> groups;
    const std::size_t f = m.names.size();
    for (std::size_t i = 0; i < f; ++i) {
        std::vector<std::size_t> partners;
        for (std::size_t j = 0; j < f; ++j)
            if (j != i && std::abs(m.r[i][j]) >= m.threshold) partners.push_back(j);
        std::sort(partners.begin(), partners.end(), [&](std::size_t a, std::size_t b) {
            return std::abs(m.r[i][a]) > std::abs(m.r[i][b]);
        });
        auto& out = groups[m.names[i]];
        for (std::size_t j : partners) out.push_back(m.names[j]);
    }
    return groups;
}

struct Normalizer {
    std::vector<double> mean;
    std::vector<double> stdev;  // 0 marks a pass-through (constant) feature

    void apply(Instance& inst) const {
        for (auto& row : inst.window)
            for (std::size_t i = 0; i < row.size(); ++i)
                if (stdev[i] != 0.0) row[i] = (row[i] - mean[i]) / stdev[i];
    }
};

struct SplitSet {
    std::vector<Instance> train, validation, test;
    Normalizer normalizer;
    bool normalized = false;
    std::uint64_t seed = 0;
};

// Deterministic shuffle-split; floor-based 10% partitions, remainder to train.
inline SplitSet split(const std::vector<Instance>& instances, double r_train,
                      double r_val, double r_test, std::uint64_t seed) {
    if (std::abs(r_train + r_val + r_test - 1.0) > 1e-9)
        throw std::invalid_argument("split: ratios must sum to 1");
    std::vector<std::size_t> idx(instances.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);

    const std::size_t n = instances.size();
    const std::size_t n_val = static_cast<std::size_t>(std::floor(r_val * n));
    const std::size_t n_test = static_cast<std::size_t>(std::floor(r_test * n));
    const std::size_t n_train = n - n_val - n_test;

    SplitSet s;
    s.seed = seed;
    for (std::size_t i = 0; i < n; ++i) {
        const Instance& inst = instances[idx[i]];
        if (i < n_train)
            s.train.push_back(inst);
        else if (i < n_train + n_val)
            s.validation.push_back(inst);
        else
            s.test.push_back(inst);
    }
    return s;
}

// Per-feature z-score with statistics fitted on the train partition only.
inline SplitSet normalize(SplitSet s) {
    if (s.normalized) throw std::invalid_argument("normalize: already normalized");
    if (s.train.empty()) throw std::invalid_argument("normalize: empty train set");
    const std::size_t f = s.train[0].features();
    std::vector<double> mean(f, 0.0), var(f, 0.0);
    std::size_t count = 0;
    for (const auto& inst : s.train)
        for (const auto& row : inst.window) {
            ++count;
            for (std::size_t i = 0; i < f; ++i) mean[i] += row[i];
        }
    for (std::size_t i = 0; i < f; ++i) mean[i] /= static_cast<double>(count);
    for (const auto& inst : s.train)
        for (const auto& row : inst.window)
            for (std::size_t i = 0; i < f; ++i) {
                const double d = row[i] - mean[i];
                var[i] += d * d;
            }
    s.normalizer.mean = mean;
    s.normalizer.stdev.resize(f);
    for (std::size_t i = 0; i < f; ++i) {
        const double sd = std::sqrt(var[i] / static_cast<double>(count));
        s.normalizer.stdev[i] = sd > 0.0 ? sd : 0.0;
    }
    for (auto* part : {&s.train, &s.validation, &s.test})
        for (auto& inst : *part) s.normalizer.apply(inst);
    s.normalized = true;
    return s;
}

// --- instance store ----------------------------------------------------------
//
// Binary container: magic "FDIS", u32 version, u32 rate, u32 W, u32 F,
// feature names (u32 len + bytes each), u64 count, then per instance:
// i32 start_second, u8 label, i32 injected_second (-1 none), W*F f64 payload.

namespace detail {
template <typename T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <typename T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw std::runtime_error("instance store: truncated stream");
    return v;
}
}  // namespace detail

struct InstanceStore {
    int rate = 10;
    std::vector<std::string> feature_names;
    std::vector<Instance> instances;
};

inline void save_instances(const InstanceStore& store, std::ostream& out) {
    out.write("FDIS", 4);
    detail::put<std::uint32_t>(out, 1);
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(store.rate));
    const std::uint32_t w = store.instances.empty()
                                ? 0
                                : static_cast<std::uint32_t>(store.instances[0].timesteps());
    detail::put<std::uint32_t>(out, w);
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(store.feature_names.size()));
    for (const auto& n : store.feature_names) {
        detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(n.size()));
        out.write(n.data(), static_cast<std::streamsize>(n.size()));
    }
    detail::put<std::uint64_t>(out, store.instances.size());
    for (const auto& inst : store.instances) {
        detail::put<std::int32_t>(out, inst.start_second);
        detail::put<std::uint8_t>(out, static_cast<std::uint8_t>(inst.label));
        detail::put<std::int32_t>(out, inst.injected_second.value_or(-1));
        for (const auto& row : inst.window)
            for (double v : row) detail::put<double>(out, v);
    }
}

inline InstanceStore load_instances(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::string(magic, 4) != "FDIS")
        throw std::runtime_error("instance store: bad magic");
    const auto version = detail::get<std::uint32_t>(in);
    if (version != 1)
        throw std::runtime_error("instance store: unsupported version");
    InstanceStore store;
    store.rate = static_cast<int>(detail::get<std::uint32_t>(in));
    const auto w = detail::get<std::uint32_t>(in);
    const auto f = detail::get<std::uint32_t>(in);
    for (std::uint32_t i = 0; i < f; ++i) {
        const auto len = detail::get<std::uint32_t>(in);
        std::string name(len, '\0');
        in.read(name.data(), len);
        store.feature_names.push_back(std::move(name));
    }
    const auto count = detail::get<std::uint64_t>(in);
    for (std::uint64_t k = 0; k < count; ++k) {
        Instance inst;
        inst.start_second = detail::get<std::int32_t>(in);
        inst.label = detail::get<std::uint8_t>(in);
        const auto injected = detail::get<std::int32_t>(in);
        if (injected >= 0) inst.injected_second = injected;
        inst.window.assign(w, std::vector<double>(f));
        for (auto& row : inst.window)
            for (double& v : row) v = detail::get<double>(in);
        store.instances.push_back(std::move(inst));
    }
    return store;
}

inline void export_instances_csv(const InstanceStore& store, std::ostream& out) {
    out << "instance,timestep,label,injected_second";
    for (const auto& n : store.feature_names) out << ',' << n;
    out << '\n';
    for (std::size_t k = 0; k < store.instances.size(); ++k) {
        const auto& inst = store.instances[k];
        for (std::size_t t = 0; t < inst.timesteps(); ++t) {
            out << k << ',' << t << ',' << inst.label << ','
                << (inst.injected_second ? std::to_string(*inst.injected_second)
                                         : std::string("-"));
            for (double v : inst.window[t]) out << ',' << v;
            out << '\n';
        }
    }
}

}  // namespace fddms
