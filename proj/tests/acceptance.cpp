// Acceptance gate: one pass/fail line per criterion. Exit status is nonzero
// if any required criterion fails; the latency measurement is informational.

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "fddms/advtrain.hpp"
#include "fddms/sdn_sim.hpp"

using namespace fddms;

namespace {

int g_failures = 0;

void report(int number, bool pass, const std::string& detail,
            bool informational = false) {
    if (!pass && !informational) ++g_failures;
    std::printf("criterion %2d: %s — %s\n", number,
                pass           ? "PASS"
                : informational ? "FAIL (informational, not counted)"
                                : "FAIL",
                detail.c_str());
    std::fflush(stdout);
}

// ---- shared fixtures --------------------------------------------------------

struct Fixture {
    SignalCatalog catalog = default_catalog();
    SplitSet split_set;        // normalized tampered/clean instance split
    ModelState model;          // detector trained on split_set
    std::vector<Instance> attacked_test;  // test instances the model flags

    Fixture() {
        auto frames = synthetic_trace(catalog, 240.0, 41, 20);
        std::vector<DecodedRecord> records;
        for (const auto& f : frames)
            for (auto& r : decode_frame(f, catalog)) records.push_back(std::move(r));
        auto instances = build_instances(resample(records, catalog, 2), 10, 1);
        AttackConfig cfg;
        cfg.seed = 41;
        auto attacked = build_attacked_dataset(instances, cfg, catalog);
        split_set = normalize(split(attacked.instances, 0.8, 0.1, 0.1, 97));

        model.params = LstmParams::init(static_cast<int>(catalog.size()), 8, 41);
        model.normalizer = split_set.normalizer;
        auto opt = OptimizerState::make(OptimizerKind::Adam, 0.01);
        TrainConfig tc;
        tc.epochs = 40;
        tc.seed = 41;
        train(model, split_set, opt, tc);

        for (const auto& inst : split_set.test)
            if (inst.label == 1 && forward(model, inst.window).probability > 0.5)
                attacked_test.push_back(inst);
    }
};

Fixture& fixture() {
    static Fixture f;
    return f;
}

// separable two-class window set: class c clusters at mean ±mu
std::vector<Instance> separable_set(std::size_t n, std::size_t features,
                                    std::size_t ticks, double mu,
                                    std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.1);
    std::vector<Instance> out;
    for (std::size_t k = 0; k < n; ++k) {
        Instance inst;
        inst.label = static_cast<int>(k % 2);
        const double mean = inst.label ? mu : -mu;
        inst.window.assign(ticks, std::vector<double>(features, 0.0));
        for (auto& row : inst.window)
            for (auto& v : row) v = mean + noise(rng);
        out.push_back(std::move(inst));
    }
    return out;
}

double train_accuracy(const ModelState& m, const std::vector<Instance>& set) {
    std::size_t ok = 0;
    for (const auto& inst : set)
        ok += (forward(m, inst.window).probability > 0.5 ? 1 : 0) == inst.label;
    return static_cast<double>(ok) / static_cast<double>(set.size());
}

// ---- criteria ---------------------------------------------------------------

void criterion_1() {
    const auto& catalog = fixture().catalog;
    std::size_t checked = 0;
    bool pass = true;
    std::string detail;
    for (const auto& spec : catalog.entries()) {
        if (spec.bit_len > 16) continue;
        const std::uint64_t hi = (1ull << spec.bit_len) - 1;
        for (std::uint64_t raw = 0; raw <= hi; ++raw) {
            const auto back = physical_to_raw(raw_to_physical(raw, spec), spec);
            if (back.raw != raw) {
                pass = false;
                detail = spec.name + " raw " + std::to_string(raw) +
                         " did not round trip";
                break;
            }
        }
        ++checked;
        if (!pass) break;
    }
    const auto& temp = catalog.at("TEMP_ENG");
    const auto& sas = catalog.at("SAS_Speed");
    if (raw_to_physical(64, temp) != 0.0) {
        pass = false;
        detail = "TEMP_ENG raw 64 decoded away from 0.00";
    }
    if (raw_to_physical(2, sas) != 8.0) {
        pass = false;
        detail = "SAS_Speed raw 2 decoded away from 8.00";
    }
    if (pass)
        detail = "exhaustive raw round trip over " + std::to_string(checked) +
                 " signals; spot decodes exact";
    report(1, pass, detail);
}

void criterion_2() {
    const auto& catalog = fixture().catalog;
    bool pass = true;
    std::string detail = "window count equals duration minus ten across durations";
    for (int duration : {10, 11, 15, 30, 60}) {
        auto frames = synthetic_trace(catalog, duration, 5);
        std::vector<DecodedRecord> records;
        for (const auto& f : frames)
            for (auto& r : decode_frame(f, catalog)) records.push_back(std::move(r));
        const auto instances =
            build_instances(resample(records, catalog, 10), 10, 1);
        const std::size_t expect =
            duration == 10 ? 1 : static_cast<std::size_t>(duration - 10);
        if (instances.size() != expect) {
            pass = false;
            detail = "duration " + std::to_string(duration) + " gave " +
                     std::to_string(instances.size()) + " windows, expected " +
                     std::to_string(expect);
            break;
        }
    }
    report(2, pass, detail);
}

void criterion_3() {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    bool pass = true;
    std::string detail = "correlation bounds, symmetry, and exact linear cases hold";
    for (int trial = 0; trial < 50 && pass; ++trial) {
        std::vector<double> x(64), y(64), lin(64), neg(64);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = u(rng);
            y[i] = u(rng);
            lin[i] = 2.0 * x[i] + 3.0;
            neg[i] = -x[i] + 5.0;
        }
        const double r = pearson(x, y).r;
        if (std::abs(r) > 1.0 + 1e-12) { pass = false; detail = "|r| exceeded 1"; }
        if (std::abs(r - pearson(y, x).r) > 1e-12) { pass = false; detail = "asymmetric"; }
        if (std::abs(pearson(x, lin).r - 1.0) > 1e-12) { pass = false; detail = "positive linear map not +1"; }
        if (std::abs(pearson(x, neg).r + 1.0) > 1e-12) { pass = false; detail = "negative linear map not -1"; }
        if (std::abs(pearson(x, x).r - 1.0) > 1e-12) { pass = false; detail = "self correlation not 1"; }
    }
    report(3, pass, detail);
}

void criterion_4() {
    SplitSet s;
    s.train = separable_set(40, 4, 12, 1.0, 17);
    s.validation = separable_set(8, 4, 12, 1.0, 18);
    bool pass = true;
    std::string detail;
    for (auto kind : {OptimizerKind::RMSprop, OptimizerKind::Adagrad}) {
        ModelState m;
        m.params = LstmParams::init(4, 8, 17);
        auto opt = OptimizerState::make(kind, 0.01);
        TrainConfig tc;
        tc.epochs = 50;
        tc.seed = 17;
        train(m, s, opt, tc);
        const double acc = train_accuracy(m, s.train);
        if (acc < 1.0) {
            pass = false;
            detail = std::string(kind == OptimizerKind::RMSprop ? "rmsprop"
                                                                 : "adagrad") +
                     " stalled at train accuracy " + std::to_string(acc);
        }
    }
    if (pass) detail = "RMSprop and Adagrad reach 100% train accuracy within 50 epochs";
    report(4, pass, detail);
}

void criterion_5() {
    constexpr double kStep = 1e-5, kTol = 1e-4;
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> feat_dist(1, 4);
    bool pass = true;
    std::string detail;
    std::size_t grads_checked = 0;

    for (int cfg_idx = 0; cfg_idx < 100 && pass; ++cfg_idx) {
        const int features = feat_dist(rng);
        ModelState m;
        m.params = LstmParams::init(features, 4, rng());
        m.params.for_each_tensor([&](std::vector<double>& t) {
            for (double& v : t) v += 0.3 * u(rng);
        });
        std::vector<std::vector<double>> window(
            5, std::vector<double>(features, 0.0));
        for (auto& row : window)
            for (auto& v : row) v = u(rng);
        const int label = cfg_idx % 2;

        const auto cache = forward(m, window);
        const auto analytic = backward(m, cache, label);

        auto loss_at = [&] { return bce_loss(forward(m, window).probability, label); };
        auto check = [&](double fd, double an, const char* what) {
            const double denom = std::max({std::abs(fd), std::abs(an), 1e-3});
            if (std::abs(fd - an) / denom >= kTol) {
                pass = false;
                detail = std::string(what) + " gradient off: fd " +
                         std::to_string(fd) + " vs " + std::to_string(an);
            }
            ++grads_checked;
        };

        std::vector<std::vector<double>*> tensors;  // stable across both models
        m.params.for_each_tensor([&](std::vector<double>& t) { tensors.push_back(&t); });
        std::uniform_int_distribution<std::size_t> tensor_pick(0, tensors.size() - 1);
        std::vector<std::vector<double>*> grad_tensors;
        auto grads = analytic;  // copy so tensor addresses are stable
        grads.params.for_each_tensor(
            [&](std::vector<double>& t) { grad_tensors.push_back(&t); });
        for (int probe = 0; probe < 12 && pass; ++probe) {
            const std::size_t ti = tensor_pick(rng);
            std::uniform_int_distribution<std::size_t> el(0, tensors[ti]->size() - 1);
            const std::size_t ei = el(rng);
            double& slot = (*tensors[ti])[ei];
            const double keep = slot;
            slot = keep + kStep;
            const double up = loss_at();
            slot = keep - kStep;
            const double down = loss_at();
            slot = keep;
            check((up - down) / (2 * kStep), (*grad_tensors[ti])[ei], "parameter");
        }

        for (int probe = 0; probe < 4 && pass; ++probe) {
            std::uniform_int_distribution<std::size_t> rt(0, window.size() - 1);
            std::uniform_int_distribution<std::size_t> rf(0, window[0].size() - 1);
            const std::size_t t = rt(rng), f = rf(rng);
            const double keep = window[t][f];
            window[t][f] = keep + kStep;
            const double up = loss_at();
            window[t][f] = keep - kStep;
            const double down = loss_at();
            window[t][f] = keep;
            check((up - down) / (2 * kStep), analytic.input[t][f], "input");
        }
    }
    if (pass)
        detail = std::to_string(grads_checked) +
                 " finite-difference probes within 1e-4 relative error";
    report(5, pass, detail);
}

void criterion_6() {
    auto& fx = fixture();
    bool pass = true;
    std::string detail;
    if (fx.attacked_test.empty()) {
        report(6, false, "no flagged test instances to perturb");
        return;
    }

    AttackSpec fgsm;
    fgsm.method = AttackMethod::FGSM;
    fgsm.norm = AttackNorm::LInf;
    fgsm.epsilon = 13.0;
    double linf_sum = 0.0;
    std::size_t n = 0;
    for (const auto& inst : fx.attacked_test) {
        const AdvResult r = run_attack(fx.model, inst.window, inst.label, fgsm);
        if (r.zero_gradient) continue;
        double linf = 0.0;
        for (std::size_t t = 0; t < r.original.size(); ++t)
            for (std::size_t f = 0; f < r.original[t].size(); ++f)
                linf = std::max(linf,
                                std::abs(r.perturbed[t][f] - r.original[t][f]));
        linf_sum += linf;
        ++n;
    }
    const double mean_linf = linf_sum / static_cast<double>(n);
    if (std::abs(mean_linf - 13.0) > 1e-9) {
        pass = false;
        detail = "FGSM mean L-inf " + std::to_string(mean_linf) + " != 13.00";
    }

    for (auto norm : {AttackNorm::L2, AttackNorm::LInf}) {
        AttackSpec bim;
        bim.method = AttackMethod::BIM;
        bim.norm = norm;
        bim.epsilon = 13.0;
        bim.iterations = 20;
        for (const auto& inst : fx.attacked_test) {
            const AdvResult r = run_attack(fx.model, inst.window, inst.label, bim);
            double l2 = 0.0, linf = 0.0;
            for (std::size_t t = 0; t < r.original.size(); ++t)
                for (std::size_t f = 0; f < r.original[t].size(); ++f) {
                    const double d = r.perturbed[t][f] - r.original[t][f];
                    l2 += d * d;
                    linf = std::max(linf, std::abs(d));
                }
            const double got = norm == AttackNorm::L2 ? std::sqrt(l2) : linf;
            if (got > bim.epsilon + 1e-9) {
                pass = false;
                detail = "BIM exceeded its budget: " + std::to_string(got);
            }
        }
    }
    if (pass)
        detail = "FGSM mean L-inf is exactly the 13.00 budget on " +
                 std::to_string(n) + " instances; BIM stays inside its budget";
    report(6, pass, detail);
}

void criterion_7() {
    auto& fx = fixture();
    if (fx.attacked_test.empty()) {
        report(7, false, "no flagged test instances to perturb");
        return;
    }
    AttackSpec base;
    base.method = AttackMethod::DeepFool;
    base.epsilon = 0.02;  // overshoot
    base.iterations = 50;
    AttackSpec variant = base;
    variant.method = AttackMethod::DeepFoolVariant;
    variant.kappa = 0.5;
    variant.alpha_clip = 0.95;

    const auto rep_base =
        distortion_metrics(attack_instances(fx.model, fx.attacked_test, base));
    const auto rep_var =
        distortion_metrics(attack_instances(fx.model, fx.attacked_test, variant));

    bool pass = true;
    std::ostringstream detail;
    if (rep_var.asr < 95.0) {
        pass = false;
        detail << "variant ASR " << rep_var.asr << " below 95";
    } else if (!(rep_var.mean_l2 < rep_base.mean_l2)) {
        pass = false;
        detail << "variant mean L2 " << rep_var.mean_l2
               << " not below original " << rep_base.mean_l2;
    } else if (rep_var.mean_linf > rep_base.mean_linf + 1e-12) {
        pass = false;
        detail << "variant mean L-inf " << rep_var.mean_linf
               << " above original " << rep_base.mean_linf;
    } else {
        detail << "variant ASR " << rep_var.asr << "%, mean L2 "
               << rep_var.mean_l2 << " < " << rep_base.mean_l2
               << ", mean L-inf " << rep_var.mean_linf
               << " <= " << rep_base.mean_linf;
    }
    report(7, pass, detail.str());
}

void criterion_8() {
    // hardening demonstration on a cleanly learnable window set: the defense
    // is judged on adversarial test sets crafted against the starting model
    SplitSet s;
    s.train = separable_set(80, 4, 12, 1.0, 71);
    s.validation = separable_set(20, 4, 12, 1.0, 72);
    s.test = separable_set(40, 4, 12, 1.0, 73);

    ModelState baseline;
    baseline.params = LstmParams::init(4, 8, 71);
    {
        auto opt = OptimizerState::make(OptimizerKind::Adam, 0.005);
        TrainConfig tc;
        tc.epochs = 2;
        tc.seed = 71;
        train(baseline, s, opt, tc);
    }

    AttackSpec fgsm;
    fgsm.method = AttackMethod::FGSM;
    fgsm.norm = AttackNorm::L2;
    fgsm.epsilon = 10.0;
    AttackSpec bim = fgsm;
    bim.method = AttackMethod::BIM;
    bim.iterations = 20;
    AttackSpec df;
    df.method = AttackMethod::DeepFool;
    df.epsilon = 0.02;
    df.iterations = 50;
    AttackSpec dfv = df;
    dfv.method = AttackMethod::DeepFoolVariant;

    auto accuracy_on_perturbed = [&](const ModelState& victim,
                                     const AttackSpec& spec) {
        std::size_t ok = 0;
        for (const auto& inst : s.test) {
            const AdvResult r = run_attack(baseline, inst.window, inst.label, spec);
            const int pred =
                forward(victim, r.perturbed).probability > 0.5 ? 1 : 0;
            ok += pred == inst.label;
        }
        return static_cast<double>(ok) / static_cast<double>(s.test.size());
    };

    const double base_normal = evaluate(baseline, s.test).accuracy;
    const double base_robust = accuracy_on_perturbed(baseline, fgsm);
    if (base_robust > 0.40) {
        report(8, false,
               "starting model already robust (" + std::to_string(base_robust) +
                   "); nothing to harden");
        return;
    }

    ModelState hardened = baseline;
    AdvTrainConfig cfg;
    cfg.iterations = 5;
    cfg.draw_size = 80;
    cfg.epochs_per_iteration = 60;
    cfg.use_selection = true;
    cfg.attack = fgsm;
    cfg.validation_attack = fgsm;
    cfg.optimizer = OptimizerKind::Adam;
    cfg.lr = 0.02;
    cfg.patience = 10;
    cfg.seed = 74;
    adversarial_retrain(hardened, s, cfg);

    const double hard_normal = evaluate(hardened, s.test).accuracy;
    bool pass = true;
    std::ostringstream detail;
    if (hard_normal < base_normal - 0.02) {
        pass = false;
        detail << "normal accuracy dropped " << base_normal << " -> " << hard_normal;
    }
    detail << "robust accuracy " << base_robust << " ->";
    for (const auto& spec : {fgsm, bim, df, dfv}) {
        const double r = accuracy_on_perturbed(hardened, spec);
        detail << ' ' << attack_method_name(spec.method) << ' ' << r;
        if (r < 0.90) pass = false;
    }
    detail << "; normal accuracy " << base_normal << " -> " << hard_normal;
    report(8, pass, detail.str());
}

WindowClassifier jump_classifier(const SignalCatalog& catalog) {
    // watch only the continuously-valued channels an injector rewrites;
    // coarse discrete signals step by large fractions of their span normally
    return [&catalog](const std::vector<std::vector<double>>& w) {
        for (const auto& name : default_attack_targets()) {
            const auto& spec = catalog.at(name);
            const std::size_t col = catalog.index_of(name);
            const double span = spec.v_max - spec.v_min;
            if (span <= 0) continue;
            for (std::size_t t = 1; t < w.size(); ++t)
                if (w[t - 1][col] != 0.0 &&
                    std::abs(w[t][col] - w[t - 1][col]) > 0.2 * span)
                    return 1;
        }
        return 0;
    };
}

void criterion_9() {
    auto& fx = fixture();
    ScenarioConfig cfg;
    cfg.duration_seconds = 12.0;
    cfg.window_seconds = 2;
    cfg.attack_start = 4.0;
    cfg.attack_end = 9.0;
    cfg.seed = 47;
    const auto res = run_simulation(cfg, fx.catalog, jump_classifier(fx.catalog));
    const auto res2 = run_simulation(cfg, fx.catalog, jump_classifier(fx.catalog));

    bool pass = true;
    std::string detail;
    if (!res.first_attack_verdict) {
        pass = false;
        detail = "compromised traffic never produced an attack verdict";
    } else {
        const double tv = *res.first_attack_verdict;
        std::size_t leaked = 0, ems_after = 0;
        for (const auto& d : res.deliveries) {
            if (d.time >= tv && d.src_port == kPortCompromised &&
                (d.dst_port == kPortAbs || d.dst_port == kPortEsc ||
                 d.dst_port == kPortEpb))
                ++leaked;
            if (d.time >= tv && (d.src_port == kPortEms || d.src_port == kPortMdps) &&
                d.dst_port != kPortStorage)
                ++ems_after;
        }
        std::size_t stored = 0;
        for (const auto& s : res.storage)
            stored += s.src_port == kPortCompromised;
        if (leaked != 0) {
            pass = false;
            detail = std::to_string(leaked) +
                     " compromised frames reached consumers after the verdict";
        } else if (stored == 0) {
            pass = false;
            detail = "no compromised frames landed in storage";
        } else if (ems_after == 0) {
            pass = false;
            detail = "trusted delivery stopped after mitigation";
        } else if (res.events.size() != res2.events.size()) {
            pass = false;
            detail = "virtual-time run is not deterministic";
        } else {
            detail = "post-verdict: 0 leaks, " + std::to_string(stored) +
                     " frames quarantined, trusted traffic uninterrupted, "
                     "replay identical";
        }
    }
    report(9, pass, detail);
}

void criterion_10() {
    auto& fx = fixture();
    ScenarioConfig cfg;
    cfg.transport = Transport::LoopbackSocket;
    cfg.duration_seconds = 2.0;
    cfg.window_seconds = 1;
    cfg.attack_start = 0.5;
    cfg.attack_end = 2.0;
    cfg.seed = 53;
    const auto res = run_simulation(cfg, fx.catalog, jump_classifier(fx.catalog));
    double avg = 0.0;
    for (const auto& row : res.latency.rows)
        if (row.msg_type == "Average") avg = row.overall_ms();
    std::ostringstream detail;
    detail << "loopback average overall latency " << avg << " ms vs 10 ms threshold";
    report(10, avg > 0.0 && avg < 10.0, detail.str(), /*informational=*/true);
}

void criterion_11() {
    std::mt19937_64 rng(59);
    bool pass = true;
    std::string detail;
    std::uniform_int_distribution<int> kind_dist(1, 5);
    std::uniform_int_distribution<int> byte_dist(0, 255);
    for (int i = 0; i < 10000 && pass; ++i) {
        ControllerMsg msg;
        msg.kind = static_cast<MsgKind>(kind_dist(rng));
        msg.seq = rng();
        switch (msg.kind) {
            case MsgKind::PacketIn: {
                PacketInBody b;
                b.ingress_port = static_cast<std::uint16_t>(rng() % 0x100);
                b.frame.timestamp = (rng() % 1000000) / 1000.0;
                b.frame.can_id = static_cast<std::uint16_t>(rng() % 0x800);
                b.frame.dlc = static_cast<std::uint8_t>(rng() % 9);
                for (auto& d : b.frame.data)
                    d = static_cast<std::uint8_t>(byte_dist(rng));
                msg.body = b;
                break;
            }
            case MsgKind::FlowMod: {
                FlowRuleWire b;
                b.priority = static_cast<std::int32_t>(rng() % 1000);
                b.match_port = static_cast<std::uint16_t>(rng() % 0x100);
                b.match_has_id = rng() % 2 == 0;
                b.match_id = b.match_has_id
                                 ? static_cast<std::uint16_t>(rng() % 0x800)
                                 : 0;
                b.action = static_cast<FlowAction>(1 + rng() % 3);
                msg.body = b;
                break;
            }
            case MsgKind::StatsRequest:
                msg.body = std::monostate{};
                break;
            case MsgKind::StatsReply: {
                StatsReplyBody b;
                b.packets = rng();
                b.bytes = rng();
                msg.body = b;
                break;
            }
            case MsgKind::Alert: {
                AlertBody b;
                b.evidence_window = static_cast<std::uint32_t>(rng());
                b.text = "alert-" + std::to_string(i % 97);
                msg.body = b;
                break;
            }
        }
        const auto bytes = encode_msg(msg);
        const auto [decoded, consumed] = decode_msg(bytes.data(), bytes.size());
        if (consumed != bytes.size() || !(decoded == msg)) {
            pass = false;
            detail = "round trip lost message " + std::to_string(i);
        }
    }

    if (pass) {
        // corrupted prefixes must raise a typed error, never crash
        ControllerMsg probe;
        probe.kind = MsgKind::StatsRequest;
        probe.seq = 7;
        auto bytes = encode_msg(probe);
        std::size_t rejected = 0, attempts = 0;
        auto expect_error = [&](std::vector<std::uint8_t> buf) {
            ++attempts;
            try {
                decode_msg(buf.data(), buf.size());
            } catch (const DecodeError&) {
                ++rejected;
            }
        };
        for (std::size_t cut = 0; cut < bytes.size(); ++cut)
            expect_error({bytes.begin(), bytes.begin() + cut});
        auto huge = bytes;
        huge[0] = 0xFF;  // absurd length prefix
        expect_error(huge);
        auto tiny = bytes;
        tiny[3] = 1;  // body shorter than a header
        expect_error(tiny);
        auto badkind = bytes;
        badkind[4] = 99;
        expect_error(badkind);
        if (rejected != attempts) {
            pass = false;
            detail = "corrupted input slipped through (" +
                     std::to_string(rejected) + "/" + std::to_string(attempts) + ")";
        } else {
            detail = "10,000-message round trip lossless; " +
                     std::to_string(attempts) + " corrupted prefixes rejected cleanly";
        }
    }
    report(11, pass, detail);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all required criteria passed\n");
    return 0;
}
