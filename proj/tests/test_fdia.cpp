#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "fddms/fdia.hpp"
#include "fddms/synthetic.hpp"

using namespace fddms;

namespace {

std::vector<Instance> clean_instances(const SignalCatalog& cat,
                                      double seconds = 30.0, int rate = 10,
                                      std::uint64_t seed = 1) {
    auto frames = synthetic_trace(cat, seconds, seed);
    std::vector<DecodedRecord> records;
    for (const auto& f : frames)
        for (auto& r : decode_frame(f, cat)) records.push_back(std::move(r));
    return build_instances(resample(records, cat, rate));
}

}  // namespace

TEST_CASE("sample_delta keeps the attacked value in range") {
    std::mt19937_64 rng(1);
    SUBCASE("boundaries") {
        for (int trial = 0; trial < 500; ++trial) {
            const double at_max = sample_delta(10.0, 10.0, rng);
            CHECK(at_max <= 0.0);
            CHECK(at_max >= -10.0);
            const double at_zero = sample_delta(0.0, 10.0, rng);
            CHECK(at_zero >= 0.0);
            CHECK(at_zero <= 10.0);
        }
    }
    SUBCASE("interior") {
        for (int trial = 0; trial < 500; ++trial) {
            const double v = 3.0, d = sample_delta(v, 10.0, rng);
            CHECK(v + d >= 0.0);
            CHECK(v + d <= 10.0);
        }
    }
    SUBCASE("out-of-range v_normal is clamped and flagged") {
        bool clamped = false;
        const double d = sample_delta(-5.0, 0.0, 10.0, rng, &clamped);
        CHECK(clamped);
        CHECK(d >= 0.0);
        CHECK(d <= 10.0);
    }
}

// Kolmogorov-Smirnov against U(v_min - v, v_max - v) at alpha = 0.01.
TEST_CASE("sample_delta empirical distribution is uniform") {
    std::mt19937_64 rng(42);
    const double v = 3.0, vmax = 10.0;
    const std::size_t n = 10000;
    std::vector<double> draws(n);
    for (auto& d : draws) d = sample_delta(v, vmax, rng);
    std::sort(draws.begin(), draws.end());
    const double lo = -v, hi = vmax - v;
    double ks = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double cdf = (draws[i] - lo) / (hi - lo);
        const double emp_hi = static_cast<double>(i + 1) / n;
        const double emp_lo = static_cast<double>(i) / n;
        ks = std::max({ks, std::abs(cdf - emp_hi), std::abs(cdf - emp_lo)});
    }
    // critical value at alpha = 0.01: 1.628 / sqrt(n)
    CHECK(ks < 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("inject_instance locality and support") {
    const SignalCatalog cat = default_catalog();
    auto instances = clean_instances(cat);
    REQUIRE(!instances.empty());
    AttackConfig cfg;
    std::mt19937_64 rng(7);

    auto [attacked, rec] = inject_instance(instances[0], cfg, cat, rng);
    CHECK(attacked.label == 1);
    CHECK(attacked.injected_second == rec.injected_second);
    CHECK(rec.injected_second >= 0);
    CHECK(rec.injected_second <= 9);

    const int rate = 10;
    std::set<std::size_t> target_cols;
    for (const auto& name : cfg.target_signals)
        target_cols.insert(cat.index_of(name));

    std::size_t changed = 0;
    for (std::size_t t = 0; t < attacked.timesteps(); ++t)
        for (std::size_t c = 0; c < attacked.features(); ++c) {
            if (attacked.window[t][c] != instances[0].window[t][c]) {
                ++changed;
                // change allowed only in the injected second on target columns
                CHECK(target_cols.count(c) == 1);
                const int second = static_cast<int>(t) / rate;
                CHECK(second == rec.injected_second);
            }
        }
    // all timesteps of the chosen second are overwritten per target signal;
    // a draw can coincide with the normal value, so changed <= rate * targets
    CHECK(changed <= static_cast<std::size_t>(rate) * cfg.target_signals.size());

    // support: attacked cells stay within [v_min, v_max]
    for (const auto& name : cfg.target_signals) {
        const auto& spec = cat.at(name);
        const std::size_t c = cat.index_of(name);
        for (std::size_t t = 0; t < attacked.timesteps(); ++t) {
            CHECK(attacked.window[t][c] >= spec.v_min - spec.scale);
            CHECK(attacked.window[t][c] <= spec.v_max + spec.scale);
        }
    }

    CHECK_THROWS_AS(inject_instance(attacked, cfg, cat, rng),
                    std::invalid_argument);
}

TEST_CASE("injected values land on the signal's raw grid") {
    const SignalCatalog cat = default_catalog();
    auto instances = clean_instances(cat);
    AttackConfig cfg;
    std::mt19937_64 rng(3);
    auto [attacked, rec] = inject_instance(instances[1], cfg, cat, rng);
    for (const auto& name : cfg.target_signals) {
        const auto& spec = cat.at(name);
        const std::size_t c = cat.index_of(name);
        const std::size_t t0 =
            static_cast<std::size_t>(rec.injected_second) * 10;
        const double v = attacked.window[t0][c];
        const double regrid = raw_to_physical(physical_to_raw(v, spec).raw, spec);
        CHECK(v == doctest::Approx(regrid).epsilon(1e-12));
    }
}

TEST_CASE("build_attacked_dataset selection counts") {
    const SignalCatalog cat = default_catalog();
    auto instances = clean_instances(cat, 40.0);
    AttackConfig cfg;
    cfg.seed = 5;

    SUBCASE("half selected") {
        cfg.fraction_attacked = 0.5;
        auto out = build_attacked_dataset(instances, cfg, cat);
        const std::size_t expect =
            static_cast<std::size_t>(std::llround(0.5 * instances.size()));
        CHECK(out.records.size() == expect);
        std::size_t labels = 0;
        for (const auto& inst : out.instances) labels += inst.label;
        CHECK(labels == expect);
    }
    SUBCASE("fraction 0 is the identity") {
        cfg.fraction_attacked = 0.0;
        auto out = build_attacked_dataset(instances, cfg, cat);
        CHECK(out.records.empty());
        for (std::size_t k = 0; k < instances.size(); ++k)
            CHECK(out.instances[k].window == instances[k].window);
    }
    SUBCASE("deterministic under seed") {
        cfg.fraction_attacked = 0.5;
        auto a = build_attacked_dataset(instances, cfg, cat);
        auto b = build_attacked_dataset(instances, cfg, cat);
        REQUIRE(a.instances.size() == b.instances.size());
        for (std::size_t k = 0; k < a.instances.size(); ++k)
            CHECK(a.instances[k].window == b.instances[k].window);
    }
    SUBCASE("rejects already attacked input") {
        auto out = build_attacked_dataset(instances, cfg, cat);
        CHECK_THROWS_AS(build_attacked_dataset(out.instances, cfg, cat),
                        std::invalid_argument);
    }
}

TEST_CASE("1894 instances at fraction 0.5 yields 947 attacked") {
    // counting contract only; no need for real windows
    std::vector<Instance> instances(1894);
    for (auto& inst : instances) inst.window.assign(1, std::vector<double>(20, 0.0));
    const SignalCatalog cat = default_catalog();
    AttackConfig cfg;
    auto out = build_attacked_dataset(instances, cfg, cat);
    CHECK(out.records.size() == 947);
}

TEST_CASE("injection manifest export") {
    InjectionRecord rec;
    rec.instance_index = 3;
    rec.injected_second = 7;
    rec.deltas = {{"TQI_ACOR", 1.5}, {"N", -2.0}};
    std::ostringstream out;
    export_injection_manifest({rec}, out);
    CHECK(out.str() ==
          "instance,injected_second,signal,delta\n"
          "3,7,TQI_ACOR,1.5\n"
          "3,7,N,-2\n");
}
