// fddms command line: every stage of the pipeline as one subcommand, each a
// pure function of (inputs, config, seed) writing artifacts into --out.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fddms/advtrain.hpp"
#include "fddms/sdn_sim.hpp"

namespace fs = std::filesystem;
using namespace fddms;

namespace {

struct UserError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string& path, bool binary = false) {
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) throw UserError("cannot open input file: " + path);
    return in;
}

std::ofstream open_output(const fs::path& path, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw UserError("cannot open output file: " + path.string());
    return out;
}

fs::path ensure_out_dir(const std::string& out) {
    fs::path dir(out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw UserError("cannot create output directory: " + out);
    return dir;
}

SignalCatalog catalog_from(const std::string& path) {
    if (path.empty()) return default_catalog();
    auto in = open_input(path);
    return load_catalog(in);
}

InstanceStore load_store(const std::string& path) {
    auto in = open_input(path, true);
    try {
        return load_instances(in);
    } catch (const std::exception& e) {
        throw UserError("bad instance store " + path + ": " + e.what());
    }
}

ModelState load_model(const std::string& path) {
    auto in = open_input(path, true);
    try {
        return load_checkpoint(in);
    } catch (const std::exception& e) {
        throw UserError("bad model checkpoint " + path + ": " + e.what());
    }
}

// normalization for stored feature windows using the model's training stats
std::vector<Instance> normalized_copy(const ModelState& model,
                                      const std::vector<Instance>& instances) {
    if (model.normalizer.mean.empty())
        throw UserError("model checkpoint carries no normalization statistics");
    if (!instances.empty() &&
        instances.front().features() != model.normalizer.mean.size())
        throw UserError("instance store feature count does not match the model");
    std::vector<Instance> out = instances;
    for (auto& inst : out) model.normalizer.apply(inst);
    return out;
}

void write_metrics_csv(const Metrics& m, std::ostream& out, std::uint64_t seed) {
    out << "accuracy,precision,recall,f1,tp,tn,fp,fn,seed\n";
    out << std::setprecision(10) << m.accuracy << ',' << m.precision << ','
        << m.recall << ',' << m.f1 << ',' << m.tp << ',' << m.tn << ',' << m.fp
        << ',' << m.fn << ',' << seed << '\n';
}

AttackSpec attack_spec_from(const std::string& method, const std::string& norm,
                            double epsilon, int iterations, double kappa,
                            double alpha_clip) {
    AttackSpec spec;
    try {
        spec.method = attack_method_from_string(method);
    } catch (const std::exception& e) {
        throw UserError(e.what());
    }
    if (norm == "l2")
        spec.norm = AttackNorm::L2;
    else if (norm == "linf")
        spec.norm = AttackNorm::LInf;
    else
        throw UserError("unknown norm: " + norm + " (expected l2 or linf)");
    spec.epsilon = epsilon;
    spec.iterations = iterations;
    spec.kappa = kappa;
    spec.alpha_clip = alpha_clip;
    try {
        spec.validate();
    } catch (const std::exception& e) {
        throw UserError(e.what());
    }
    return spec;
}

// one place decides what a stored-window classifier looks like in simulation
WindowClassifier classifier_for(const std::optional<ModelState>& model,
                                const SignalCatalog& catalog) {
    if (model)
        return [m = *model](const std::vector<std::vector<double>>& w) {
            return forward(m, w).probability > 0.5 ? 1 : 0;
        };
    // fallback heuristic: injected values are redrawn over the full signal
    // span once per second, normal traffic random-walks in 1% steps; coarse
    // discrete signals and the zero-filled startup samples carry no evidence
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

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"false data detection and mitigation pipeline"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value config file; command-line flags override");
    app.allow_config_extras(false);

    std::string out_dir = ".";
    std::uint64_t seed = 0;
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--seed", seed, "global random seed")->capture_default_str();

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic trace");
    double synth_duration = 60.0;
    int synth_cadence = 10;
    synth->add_option("--duration", synth_duration, "seconds")->capture_default_str();
    synth->add_option("--cadence-ms", synth_cadence, "frame cadence per message")
        ->capture_default_str();

    // decode
    auto* decode = app.add_subcommand("decode", "decode a trace into signal records");
    std::string trace_path, catalog_path;
    decode->add_option("--trace", trace_path, "trace file")->required();
    decode->add_option("--catalog", catalog_path, "catalog csv (default: built-in)");

    // build
    auto* build = app.add_subcommand("build", "build windowed instances from a trace");
    int rate = 10, window_s = 10, stride_s = 1;
    build->add_option("--trace", trace_path, "trace file")->required();
    build->add_option("--catalog", catalog_path, "catalog csv (default: built-in)");
    build->add_option("--rate", rate, "resample rate, Hz")->capture_default_str();
    build->add_option("--window", window_s, "window seconds")->capture_default_str();
    build->add_option("--stride", stride_s, "stride seconds")->capture_default_str();

    // inject
    auto* inject = app.add_subcommand("inject", "inject false data into clean instances");
    std::string instances_path;
    double fraction = 0.5;
    std::vector<std::string> targets;
    inject->add_option("--instances", instances_path, "clean instance store")->required();
    inject->add_option("--catalog", catalog_path, "catalog csv (default: built-in)");
    inject->add_option("--fraction", fraction, "fraction of instances attacked")
        ->capture_default_str();
    inject->add_option("--target", targets, "target signal (repeatable; default: stock list)");

    // train
    auto* train_cmd = app.add_subcommand("train", "train the detector");
    std::string optimizer_name = "adam";
    double lr = 0.001;
    int epochs = 50, batch_size = 32, hidden = 128;
    train_cmd->add_option("--instances", instances_path, "labeled instance store")->required();
    train_cmd->add_option("--optimizer", optimizer_name, "sgd|adam|rmsprop|adagrad")
        ->capture_default_str();
    train_cmd->add_option("--lr", lr, "learning rate")->capture_default_str();
    train_cmd->add_option("--epochs", epochs)->capture_default_str();
    train_cmd->add_option("--batch", batch_size)->capture_default_str();
    train_cmd->add_option("--hidden", hidden, "LSTM hidden units")->capture_default_str();

    // evaluate
    auto* evaluate_cmd = app.add_subcommand("evaluate", "evaluate a checkpoint");
    std::string model_path;
    evaluate_cmd->add_option("--model", model_path, "model checkpoint")->required();
    evaluate_cmd->add_option("--instances", instances_path, "labeled instance store")
        ->required();

    // attack
    auto* attack_cmd = app.add_subcommand("attack", "run gradient attacks on a checkpoint");
    std::string method = "fgsm", norm = "linf";
    double epsilon = 13.0, kappa = 0.5, alpha_clip = 0.95;
    int iterations = 20;
    attack_cmd->add_option("--model", model_path, "model checkpoint")->required();
    attack_cmd->add_option("--instances", instances_path, "labeled instance store")
        ->required();
    attack_cmd->add_option("--method", method, "fgsm|bim|deepfool|deepfool_variant")
        ->capture_default_str();
    attack_cmd->add_option("--norm", norm, "l2|linf")->capture_default_str();
    attack_cmd->add_option("--epsilon", epsilon)->capture_default_str();
    attack_cmd->add_option("--iterations", iterations)->capture_default_str();
    attack_cmd->add_option("--kappa", kappa)->capture_default_str();
    attack_cmd->add_option("--alpha-clip", alpha_clip)->capture_default_str();

    // advtrain
    auto* advtrain_cmd = app.add_subcommand("advtrain", "adversarial hardening loop");
    int adv_iterations = 10, draw_size = 200, adv_epochs = 30, patience = 3;
    double threshold = 0.5;
    bool no_selection = false;
    advtrain_cmd->add_option("--model", model_path, "starting checkpoint")->required();
    advtrain_cmd->add_option("--instances", instances_path, "labeled instance store")
        ->required();
    advtrain_cmd->add_option("--iterations", adv_iterations)->capture_default_str();
    advtrain_cmd->add_option("--draw", draw_size)->capture_default_str();
    advtrain_cmd->add_option("--epochs", adv_epochs)->capture_default_str();
    advtrain_cmd->add_option("--threshold", threshold)->capture_default_str();
    advtrain_cmd->add_option("--patience", patience)->capture_default_str();
    advtrain_cmd->add_flag("--no-selection", no_selection, "keep every generated example");
    advtrain_cmd->add_option("--method", method, "repository attack")->capture_default_str();
    advtrain_cmd->add_option("--norm", norm, "l2|linf")->capture_default_str();
    advtrain_cmd->add_option("--epsilon", epsilon)->capture_default_str();
    advtrain_cmd->add_option("--optimizer", optimizer_name)->capture_default_str();
    advtrain_cmd->add_option("--lr", lr)->capture_default_str();

    // simulate
    auto* simulate_cmd = app.add_subcommand("simulate", "run the network simulation");
    std::string transport = "virtual";
    double sim_duration = 30.0, attack_start = -1.0, attack_end = -1.0;
    simulate_cmd->add_option("--transport", transport, "virtual|socket")
        ->capture_default_str();
    simulate_cmd->add_option("--duration", sim_duration)->capture_default_str();
    simulate_cmd->add_option("--attack-start", attack_start)->capture_default_str();
    simulate_cmd->add_option("--attack-end", attack_end)->capture_default_str();
    simulate_cmd->add_option("--rate", rate)->capture_default_str();
    simulate_cmd->add_option("--window", window_s)->capture_default_str();
    simulate_cmd->add_option("--cadence-ms", synth_cadence)->capture_default_str();
    simulate_cmd->add_option("--model", model_path, "checkpoint (default: heuristic)");
    simulate_cmd->add_option("--catalog", catalog_path, "catalog csv (default: built-in)");

    // report
    auto* report_cmd = app.add_subcommand("report", "aggregate stage artifacts");
    std::string report_in;
    report_cmd->add_option("--in", report_in, "directory holding stage csv files")
        ->required();

    // --out / --seed live on the parent so they can precede or follow the verb
    for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        const fs::path out = ensure_out_dir(out_dir);
        {
            auto snap = open_output(out / "resolved_config.ini");
            snap << app.config_to_str(true, false);
        }

        if (*synth) {
            auto catalog = default_catalog();
            auto frames = synthetic_trace(catalog, synth_duration, seed, synth_cadence);
            open_output(out / "trace.txt") << serialize_trace(frames);
            auto cat = open_output(out / "catalog.csv");
            save_catalog(catalog, cat);
            std::cout << "frames " << frames.size() << " duration "
                      << synth_duration << " seed " << seed << '\n';
        } else if (*decode) {
            auto catalog = catalog_from(catalog_path);
            auto in = open_input(trace_path);
            ParseResult parsed;
            try {
                parsed = parse_trace(in);
            } catch (const std::exception& e) {
                throw UserError(std::string("trace parse failed: ") + e.what());
            }
            std::size_t unknown = 0;
            std::ostringstream records;
            records << "timestamp,signal,raw,value\n" << std::setprecision(10);
            for (const auto& frame : parsed.frames) {
                auto decoded = decode_frame(frame, catalog);
                if (decoded.empty()) {
                    ++unknown;
                    continue;
                }
                for (const auto& rec : decoded)
                    records << rec.timestamp << ',' << rec.signal << ','
                            << rec.raw << ',' << rec.value << '\n';
            }
            open_output(out / "records.csv") << records.str();
            std::cout << "frames " << parsed.frames.size() << " unknown_id "
                      << unknown << '\n';
        } else if (*build) {
            auto catalog = catalog_from(catalog_path);
            auto in = open_input(trace_path);
            ParseResult parsed;
            try {
                parsed = parse_trace(in);
            } catch (const std::exception& e) {
                throw UserError(std::string("trace parse failed: ") + e.what());
            }
            std::vector<DecodedRecord> records;
            for (const auto& frame : parsed.frames)
                for (auto& rec : decode_frame(frame, catalog))
                    records.push_back(std::move(rec));
            SignalTable table = resample(records, catalog, rate);
            InstanceStore store;
            store.rate = rate;
            store.feature_names = table.columns;
            store.instances = build_instances(table, window_s, stride_s);
            auto os = open_output(out / "instances.bin", true);
            save_instances(store, os);
            std::cout << "instances " << store.instances.size() << " window "
                      << window_s << " rate " << rate << '\n';
        } else if (*inject) {
            auto catalog = catalog_from(catalog_path);
            InstanceStore store = load_store(instances_path);
            AttackConfig cfg;
            if (!targets.empty()) cfg.target_signals = targets;
            cfg.fraction_attacked = fraction;
            cfg.seed = seed;
            AttackedDataset attacked;
            try {
                attacked = build_attacked_dataset(store.instances, cfg, catalog);
            } catch (const std::exception& e) {
                throw UserError(e.what());
            }
            InstanceStore out_store = store;
            out_store.instances = std::move(attacked.instances);
            auto os = open_output(out / "attacked.bin", true);
            save_instances(out_store, os);
            auto manifest = open_output(out / "manifest.csv");
            export_injection_manifest(attacked.records, manifest);
            std::cout << "attacked " << attacked.records.size() << " of "
                      << out_store.instances.size() << " seed " << seed << '\n';
        } else if (*train_cmd) {
            InstanceStore store = load_store(instances_path);
            if (store.instances.empty()) throw UserError("instance store is empty");
            SplitSet s = normalize(split(store.instances, 0.8, 0.1, 0.1, seed));
            ModelState model;
            model.params = LstmParams::init(
                static_cast<int>(store.feature_names.size()), hidden, seed);
            model.normalizer = s.normalizer;
            OptimizerKind kind;
            try {
                kind = optimizer_from_string(optimizer_name);
            } catch (const std::exception& e) {
                throw UserError(e.what());
            }
            auto opt = OptimizerState::make(kind, lr);
            TrainConfig cfg;
            cfg.epochs = epochs;
            cfg.batch_size = batch_size;
            cfg.seed = seed;
            auto history = train(model, s, opt, cfg);
            auto ckpt = open_output(out / "model.ckpt", true);
            save_checkpoint(model, ckpt, &opt);
            auto hist = open_output(out / "history.csv");
            hist << "epoch,train_loss,validation_accuracy\n" << std::setprecision(10);
            for (std::size_t e = 0; e < history.epochs.size(); ++e)
                hist << (e + 1) << ',' << history.epochs[e].train_loss << ','
                     << history.epochs[e].validation_accuracy << '\n';
            const Metrics m = evaluate(model, s.test);
            auto met = open_output(out / "metrics.csv");
            write_metrics_csv(m, met, seed);
            std::cout << "test_accuracy " << std::setprecision(10) << m.accuracy
                      << " epochs " << epochs << " optimizer " << optimizer_name
                      << '\n';
        } else if (*evaluate_cmd) {
            ModelState model = load_model(model_path);
            InstanceStore store = load_store(instances_path);
            auto data = normalized_copy(model, store.instances);
            const Metrics m = evaluate(model, data);
            auto met = open_output(out / "metrics.csv");
            write_metrics_csv(m, met, seed);
            std::cout << "accuracy " << std::setprecision(10) << m.accuracy
                      << " instances " << data.size() << '\n';
        } else if (*attack_cmd) {
            ModelState model = load_model(model_path);
            InstanceStore store = load_store(instances_path);
            auto data = normalized_copy(model, store.instances);
            AttackSpec spec = attack_spec_from(method, norm, epsilon, iterations,
                                               kappa, alpha_clip);
            auto results = attack_instances(model, data, spec);
            if (results.empty())
                throw UserError("no instance is both labeled and predicted Attack");
            auto rep = distortion_metrics(results);
            auto csv = open_output(out / ("attack_" + method + ".csv"));
            csv << "method,norm,epsilon,asr,mean_l0,mean_l2,mean_linf,count,seed\n"
                << std::setprecision(10) << method << ',' << norm << ','
                << epsilon << ',' << rep.asr << ',' << rep.mean_l0 << ','
                << rep.mean_l2 << ',' << rep.mean_linf << ',' << rep.count << ','
                << seed << '\n';
            std::cout << "asr " << std::setprecision(10) << rep.asr << " mean_l2 "
                      << rep.mean_l2 << " targets " << rep.count << '\n';
        } else if (*advtrain_cmd) {
            ModelState model = load_model(model_path);
            InstanceStore store = load_store(instances_path);
            if (store.instances.empty()) throw UserError("instance store is empty");
            SplitSet s;
            {
                SplitSet raw = split(store.instances, 0.8, 0.1, 0.1, seed);
                s.normalizer = model.normalizer;
                s.normalized = true;
                s.train = normalized_copy(model, raw.train);
                s.validation = normalized_copy(model, raw.validation);
                s.test = normalized_copy(model, raw.test);
            }
            AdvTrainConfig cfg;
            cfg.iterations = adv_iterations;
            cfg.draw_size = draw_size;
            cfg.epochs_per_iteration = adv_epochs;
            cfg.threshold = threshold;
            cfg.use_selection = !no_selection;
            cfg.patience = patience;
            cfg.attack = attack_spec_from(method, norm, epsilon, iterations,
                                          kappa, alpha_clip);
            cfg.validation_attack = cfg.attack;
            try {
                cfg.optimizer = optimizer_from_string(optimizer_name);
            } catch (const std::exception& e) {
                throw UserError(e.what());
            }
            cfg.lr = lr;
            cfg.seed = seed;
            try {
                cfg.validate();
            } catch (const std::exception& e) {
                throw UserError(e.what());
            }
            auto report = adversarial_retrain(model, s, cfg);
            auto ckpt = open_output(out / "model_hardened.ckpt", true);
            save_checkpoint(model, ckpt);
            auto csv = open_output(out / "advtrain.csv");
            csv << "iteration,repository,selected,normal_accuracy,robust_accuracy,seed\n"
                << std::setprecision(10);
            for (std::size_t k = 0; k < report.iterations.size(); ++k) {
                const auto& it = report.iterations[k];
                csv << (k + 1) << ',' << it.repository_size << ','
                    << it.selected_count << ',' << it.normal_accuracy << ','
                    << it.robust_accuracy << ',' << seed << '\n';
            }
            std::cout << "iterations " << report.iterations.size() << " repository "
                      << report.repository.size() << " best "
                      << (report.best_iteration + 1) << '\n';
        } else if (*simulate_cmd) {
            auto catalog = catalog_from(catalog_path);
            std::optional<ModelState> model;
            if (!model_path.empty()) model = load_model(model_path);
            ScenarioConfig cfg;
            cfg.duration_seconds = sim_duration;
            cfg.cadence_ms = synth_cadence;
            cfg.rate = rate;
            cfg.window_seconds = window_s;
            cfg.seed = seed;
            cfg.attack_start = attack_start;
            cfg.attack_end = attack_end;
            if (transport == "virtual")
                cfg.transport = Transport::VirtualTime;
            else if (transport == "socket")
                cfg.transport = Transport::LoopbackSocket;
            else
                throw UserError("unknown transport: " + transport);
            auto res = run_simulation(cfg, catalog, classifier_for(model, catalog),
                                      model ? &model->normalizer : nullptr);
            auto ev = open_output(out / "events.csv");
            export_event_log(res, ev);
            auto st = open_output(out / "storage.csv");
            export_storage_log(res, st);
            auto lt = open_output(out / "latency.csv");
            export_latency_report(res.latency, lt);
            std::cout << "frames " << res.frames_emitted << " flow_mods "
                      << res.flow_mods << " alerts " << res.alerts
                      << " stored " << res.storage.size() << '\n';
        } else if (*report_cmd) {
            const fs::path in_dir(report_in);
            if (!fs::is_directory(in_dir))
                throw UserError("not a directory: " + report_in);
            std::vector<fs::path> files;
            for (const auto& entry : fs::directory_iterator(in_dir))
                if (entry.is_regular_file() && entry.path().extension() == ".csv")
                    files.push_back(entry.path());
            std::sort(files.begin(), files.end());
            auto rep = open_output(out / "report.txt");
            rep << "seed " << seed << '\n';
            for (const auto& f : files) {
                rep << "\n== " << f.filename().string() << " ==\n";
                auto in = open_input(f.string());
                rep << in.rdbuf();
            }
            std::cout << "sections " << files.size() << '\n';
        }
        return 0;
    } catch (const UserError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
}
