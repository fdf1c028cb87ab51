#include "doctest.h"

#include <random>
#include <sstream>

#include "fddms/dataset.hpp"
#include "fddms/synthetic.hpp"

using namespace fddms;

namespace {

std::vector<DecodedRecord> records_for(const std::string& name,
                                       std::vector<std::pair<double, double>> tv) {
    std::vector<DecodedRecord> out;
    for (auto [t, v] : tv) out.push_back({t, name, 0, v});
    return out;
}

SignalTable table_of(std::size_t seconds, int rate, std::size_t features,
                     std::uint64_t seed = 1) {
    SignalTable t;
    t.rate = rate;
    for (std::size_t i = 0; i < features; ++i)
        t.columns.push_back("f" + std::to_string(i));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0, 100);
    for (std::size_t k = 0; k < seconds * static_cast<std::size_t>(rate); ++k) {
        std::vector<double> row(features);
        for (auto& v : row) v = u(rng);
        t.values.push_back(std::move(row));
    }
    return t;
}

}  // namespace

TEST_CASE("resample holds the last value") {
    const SignalCatalog cat = default_catalog();
    SUBCASE("single update fills the column") {
        auto recs = records_for("TQI_ACOR", {{0.0, 5.0}});
        recs.push_back({3.0, "N", 0, 1.0});  // extends the table to 3 s
        auto table = resample(recs, cat, 2);
        const std::size_t col = cat.index_of("TQI_ACOR");
        for (const auto& row : table.values) CHECK(row[col] == 5.0);
    }
    SUBCASE("step function") {
        auto recs = records_for("TQI_ACOR", {{0.0, 1.0}, {1.0, 2.0}});
        recs.push_back({1.5, "N", 0, 0.0});
        auto table = resample(recs, cat, 2);
        const std::size_t col = cat.index_of("TQI_ACOR");
        REQUIRE(table.ticks() == 4);
        CHECK(table.values[0][col] == 1.0);
        CHECK(table.values[1][col] == 1.0);
        CHECK(table.values[2][col] == 2.0);
        CHECK(table.values[3][col] == 2.0);
    }
    SUBCASE("empty stream yields empty table") {
        CHECK(resample({}, cat, 10).ticks() == 0);
    }
    SUBCASE("column order matches the catalog") {
        auto table = resample(records_for("TQI", {{0.0, 1.0}}), cat, 10);
        CHECK(table.columns == cat.names());
    }
}

TEST_CASE("build_instances window count law") {
    CHECK(build_instances(table_of(1904, 2, 3)).size() == 1894);
    CHECK(build_instances(table_of(10, 2, 3)).size() == 1);
    CHECK(build_instances(table_of(12, 2, 3)).size() == 2);
    CHECK(build_instances(table_of(9, 2, 3)).empty());
    for (std::size_t d : {11, 25, 60})
        CHECK(build_instances(table_of(d, 2, 3)).size() == d - 10);
}

TEST_CASE("instances cover the right slices and start labeled 0") {
    auto table = table_of(13, 4, 2);
    auto instances = build_instances(table);
    REQUIRE(instances.size() == 3);
    for (std::size_t k = 0; k < instances.size(); ++k) {
        const auto& inst = instances[k];
        CHECK(inst.label == 0);
        CHECK(!inst.injected_second.has_value());
        CHECK(inst.timesteps() == 40);
        CHECK(inst.start_second == static_cast<int>(k));
        CHECK(inst.window[0] == table.values[k * 4]);
    }
}

TEST_CASE("pearson") {
    SUBCASE("self correlation is 1") {
        std::vector<double> x{1, 2, 3, 7};
        CHECK(pearson(x, x).r == doctest::Approx(1.0));
    }
    SUBCASE("exact anti-correlation") {
        CHECK(pearson({1, 2, 3}, {3, 2, 1}).r == doctest::Approx(-1.0));
    }
    SUBCASE("constant vector is degenerate, not NaN") {
        auto p = pearson({1, 1, 1}, {1, 2, 3});
        CHECK(p.degenerate);
        CHECK(p.r == 0.0);
    }
    SUBCASE("length mismatch throws") {
        CHECK_THROWS_AS(pearson({1, 2}, {1, 2, 3}), std::invalid_argument);
    }
    SUBCASE("bounds and symmetry on random data") {
        std::mt19937_64 rng(5);
        std::normal_distribution<double> n;
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> x(30), y(30);
            for (auto& v : x) v = n(rng);
            for (auto& v : y) v = n(rng);
            const double rxy = pearson(x, y).r;
            CHECK(std::abs(rxy) <= 1.0 + 1e-12);
            CHECK(rxy == doctest::Approx(pearson(y, x).r));
        }
    }
}

TEST_CASE("correlated_groups") {
    SUBCASE("identity matrix yields empty groups") {
        CorrelationMatrix m;
        m.names = {"a", "b", "c"};
        m.r = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        for (const auto& [name, group] : correlated_groups(m))
            CHECK(group.empty());
    }
    SUBCASE("partners sorted by |r| descending, threshold respected") {
        CorrelationMatrix m;
        m.names = {"a", "b", "c", "d"};
        m.r = {{1.0, 0.8, -0.9, 0.5},
               {0.8, 1.0, 0.0, 0.0},
               {-0.9, 0.0, 1.0, 0.0},
               {0.5, 0.0, 0.0, 1.0}};
        auto groups = correlated_groups(m);
        CHECK(groups["a"] == std::vector<std::string>{"c", "b"});
        CHECK(groups["d"].empty());
    }
    SUBCASE("unreachable threshold empties everything") {
        auto table = table_of(30, 2, 4);
        auto m = correlation_matrix(table, 1.01);
        for (const auto& [name, group] : correlated_groups(m))
            CHECK(group.empty());
    }
}

TEST_CASE("correlation_matrix is symmetric with unit diagonal") {
    auto table = table_of(60, 2, 5);
    auto m = correlation_matrix(table);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(m.r[i][i] == 1.0);
        for (std::size_t j = 0; j < 5; ++j) {
            CHECK(m.r[i][j] == m.r[j][i]);
            CHECK(std::abs(m.r[i][j]) <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("split proportions") {
    std::vector<Instance> instances(1894);
    auto s = split(instances, 0.8, 0.1, 0.1, 42);
    CHECK(s.train.size() == 1516);
    CHECK(s.validation.size() == 189);
    CHECK(s.test.size() == 189);

    auto s10 = split(std::vector<Instance>(10), 0.8, 0.1, 0.1, 0);
    CHECK(s10.train.size() == 8);
    CHECK(s10.validation.size() == 1);
    CHECK(s10.test.size() == 1);

    CHECK_THROWS_AS(split(instances, 0.8, 0.1, 0.2, 0), std::invalid_argument);
}

TEST_CASE("split is deterministic, disjoint, and exhaustive") {
    auto instances = build_instances(table_of(50, 2, 3));
    for (std::size_t k = 0; k < instances.size(); ++k)
        instances[k].start_second = static_cast<int>(k);  // identity tag
    auto a = split(instances, 0.8, 0.1, 0.1, 9);
    auto b = split(instances, 0.8, 0.1, 0.1, 9);

    auto tags = [](const SplitSet& s) {
        std::vector<int> out;
        for (const auto* part : {&s.train, &s.validation, &s.test})
            for (const auto& inst : *part) out.push_back(inst.start_second);
        return out;
    };
    CHECK(tags(a) == tags(b));
    auto all = tags(a);
    std::sort(all.begin(), all.end());
    std::vector<int> expect(instances.size());
    std::iota(expect.begin(), expect.end(), 0);
    CHECK(all == expect);
}

TEST_CASE("normalize uses train statistics only") {
    auto instances = build_instances(table_of(60, 2, 4));
    auto s = normalize(split(instances, 0.8, 0.1, 0.1, 3));

    // train mean ~0, std ~1 per feature
    const std::size_t f = s.train[0].features();
    for (std::size_t i = 0; i < f; ++i) {
        double sum = 0, count = 0;
        for (const auto& inst : s.train)
            for (const auto& row : inst.window) {
                sum += row[i];
                ++count;
            }
        CHECK(std::abs(sum / count) < 1e-9);
    }

    // validation/test are transformed with the train stats: undo and recompute
    auto undone = s;
    for (auto* part : {&undone.validation, &undone.test})
        for (auto& inst : *part)
            for (auto& row : inst.window)
                for (std::size_t i = 0; i < f; ++i)
                    if (s.normalizer.stdev[i] != 0.0)
                        row[i] = row[i] * s.normalizer.stdev[i] + s.normalizer.mean[i];
    auto reference = split(instances, 0.8, 0.1, 0.1, 3);
    for (std::size_t k = 0; k < reference.test.size(); ++k)
        for (std::size_t t = 0; t < reference.test[k].timesteps(); ++t)
            for (std::size_t i = 0; i < f; ++i)
                CHECK(undone.test[k].window[t][i] ==
                      doctest::Approx(reference.test[k].window[t][i]).epsilon(1e-9));
}

TEST_CASE("normalize passes constant features through") {
    std::vector<Instance> instances(12);
    for (auto& inst : instances)
        inst.window.assign(4, {3.14, 1.0});
    // make the second feature non-constant
    for (std::size_t k = 0; k < instances.size(); ++k)
        instances[k].window[0][1] = static_cast<double>(k);
    auto s = normalize(split(instances, 0.8, 0.1, 0.1, 1));
    for (const auto& inst : s.train)
        for (const auto& row : inst.window) CHECK(row[0] == 3.14);
    CHECK_THROWS_AS(normalize(std::move(s)), std::invalid_argument);
}

TEST_CASE("instance store round trip") {
    InstanceStore store;
    store.rate = 4;
    store.feature_names = {"x", "y"};
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int k = 0; k < 7; ++k) {
        Instance inst;
        inst.start_second = k;
        inst.label = k % 2;
        if (inst.label) inst.injected_second = k % 10;
        inst.window.assign(8, std::vector<double>(2));
        for (auto& row : inst.window)
            for (auto& v : row) v = u(rng);
        store.instances.push_back(std::move(inst));
    }
    std::stringstream buf;
    save_instances(store, buf);
    auto loaded = load_instances(buf);
    CHECK(loaded.rate == store.rate);
    CHECK(loaded.feature_names == store.feature_names);
    REQUIRE(loaded.instances.size() == store.instances.size());
    for (std::size_t k = 0; k < store.instances.size(); ++k) {
        CHECK(loaded.instances[k].label == store.instances[k].label);
        CHECK(loaded.instances[k].injected_second ==
              store.instances[k].injected_second);
        CHECK(loaded.instances[k].window == store.instances[k].window);
    }
}

TEST_CASE("instance store rejects corrupt input") {
    std::stringstream buf("not an instance store at all");
    CHECK_THROWS_AS(load_instances(buf), std::runtime_error);
}

TEST_CASE("synthetic trace decodes into a full pipeline table") {
    const SignalCatalog cat = default_catalog();
    auto frames = synthetic_trace(cat, 15.0, 77);
    std::vector<DecodedRecord> records;
    for (const auto& f : frames)
        for (auto& r : decode_frame(f, cat)) records.push_back(std::move(r));
    auto table = resample(records, cat, 10);
    CHECK(table.columns.size() == 20);
    auto instances = build_instances(table);
    CHECK(instances.size() == static_cast<std::size_t>(
                                  static_cast<int>(table.ticks()) / 10 - 10));
}
