#pragma once

// Bundled synthetic trace generator: per-signal bounded random walks, encoded
// into frames at the bus cadence. Lets the whole pipeline run without the
// real capture.

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "fddms/can_codec.hpp"

namespace fddms {

// Random-walk state over the catalog's physical ranges. Walk steps are a
// small fraction of each signal's range so injected jumps stand out.
class SignalWalk {
  public:
    SignalWalk(const SignalCatalog& catalog, std::uint64_t seed,
               double step_fraction = 0.01)
        : catalog_(&catalog), rng_(seed), step_fraction_(step_fraction) {
        for (const auto& s : catalog.entries()) {
            const double lo = s.v_min, hi = s.v_max;
            std::uniform_real_distribution<double> u(lo, hi);
            values_[s.name] = u(rng_);
        }
    }

    void advance() {
        for (const auto& s : catalog_->entries()) {
            const double range = s.v_max - s.v_min;
            std::normal_distribution<double> step(0.0, step_fraction_ * range);
            double& v = values_[s.name];
            v = std::clamp(v + step(rng_), s.v_min, s.v_max);
        }
    }

    double value(const std::string& name) const { return values_.at(name); }

    // Builds the frame for one message type from the current walk values.
    CanFrame frame_for(const std::string& msg, double timestamp) const {
        CanFrame f;
        f.timestamp = timestamp;
        f.dlc = 8;
        bool found = false;
        for (const auto& s : catalog_->entries()) {
            if (s.msg != msg) continue;
            f.can_id = s.cid;
            found = true;
            deposit_raw_bits(f.data, s.start_bit, s.bit_len,
                             physical_to_raw(values_.at(s.name), s).raw,
                             catalog_->bit_order());
        }
        if (!found) throw std::invalid_argument("unknown message type: " + msg);
        return f;
    }

    std::mt19937_64& rng() { return rng_; }

  private:
    const SignalCatalog* catalog_;
    std::mt19937_64 rng_;
    double step_fraction_;
    std::map<std::string, double> values_;
};

inline std::vector<std::string> catalog_message_types(const SignalCatalog& catalog) {
    std::vector<std::string> out;
    for (const auto& s : catalog.entries())
        if (std::find(out.begin(), out.end(), s.msg) == out.end())
            out.push_back(s.msg);
    return out;
}

// One frame per message type every cadence_ms, for duration_seconds.
inline std::vector<CanFrame> synthetic_trace(const SignalCatalog& catalog,
                                             double duration_seconds,
                                             std::uint64_t seed,
                                             int cadence_ms = 10) {
    SignalWalk walk(catalog, seed);
    const auto msgs = catalog_message_types(catalog);
    std::vector<CanFrame> frames;
    const double dt = cadence_ms / 1000.0;
    for (double t = 0.0; t < duration_seconds; t += dt) {
        walk.advance();
        for (const auto& msg : msgs) frames.push_back(walk.frame_for(msg, t));
    }
    return frames;
}

}  // namespace fddms
