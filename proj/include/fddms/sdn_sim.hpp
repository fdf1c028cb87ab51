#pragma once

// Discrete-event simulation of the SDN-protected in-vehicle network: six ECU
// nodes behind a match-action switch, a monitoring controller running the
// detection pipeline, and flow-rule mitigation that redirects attack traffic
// to backend storage.
//
// Two transports: deterministic in-process virtual time (tests) and loopback
// socketpairs with wall-clock phase timing (latency measurement).

#include <atomic>
#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include "fddms/can_codec.hpp"
#include "fddms/fdia.hpp"
#include "fddms/nn.hpp"
#include "fddms/synthetic.hpp"
#include "fddms/wire.hpp"

namespace fddms {

// fixed port plan
constexpr std::uint16_t kPortEms = 1;
constexpr std::uint16_t kPortMdps = 2;
constexpr std::uint16_t kPortAbs = 3;
constexpr std::uint16_t kPortEsc = 4;
constexpr std::uint16_t kPortEpb = 5;
constexpr std::uint16_t kPortCompromised = 6;
constexpr std::uint16_t kPortStorage = 0xFF;

inline const char* port_name(std::uint16_t port) {
    switch (port) {
        case kPortEms: return "EMS";
        case kPortMdps: return "MDPS";
        case kPortAbs: return "ABS";
        case kPortEsc: return "ESC";
        case kPortEpb: return "EPB";
        case kPortCompromised: return "COMPROMISED";
        case kPortStorage: return "STORAGE";
    }
    return "?";
}

// --- flow table --------------------------------------------------------------

struct FlowStats {
    std::uint64_t packets = 0;
    std::uint64_t bytes = 0;
    double last_matched = -1.0;
};

struct FlowRule {
    std::int32_t priority = 0;
    std::uint16_t match_port = 0;
    std::optional<std::uint16_t> match_id;
    FlowAction action = FlowAction::Broadcast;
    FlowStats stats;

    bool matches(const CanFrame& frame, std::uint16_t ingress) const {
        if (match_port != ingress) return false;
        return !match_id || *match_id == frame.can_id;
    }
    bool same_match(const FlowRule& other) const {
        return priority == other.priority && match_port == other.match_port &&
               match_id == other.match_id;
    }
};

class FlowTable {
  public:
    // Highest priority wins; insertion order breaks ties (oldest first).
    FlowRule* match(const CanFrame& frame, std::uint16_t ingress) {
        FlowRule* best = nullptr;
        for (auto& r : rules_)
            if (r.matches(frame, ingress) && (!best || r.priority > best->priority))
                best = &r;
        return best;
    }

    // Identical match+priority replaces the action and resets stats.
    void flow_mod(FlowRule rule) {
        rule.stats = {};
        for (auto& r : rules_)
            if (r.same_match(rule)) {
                r = rule;
                return;
            }
        rules_.push_back(std::move(rule));
    }

    const std::vector<FlowRule>& rules() const { return rules_; }
    std::uint64_t default_count() const { return default_count_; }
    void count_default() { ++default_count_; }

  private:
    std::vector<FlowRule> rules_;
    std::uint64_t default_count_ = 0;
};

struct ForwardDecision {
    FlowAction action = FlowAction::Broadcast;
    std::vector<std::uint16_t> delivered;  // egress ports
};

// One forwarding decision: matched rule (or default BROADCAST) picks egress,
// matched rule stats increment.
inline ForwardDecision switch_forward(FlowTable& table, const CanFrame& frame,
                                      std::uint16_t ingress,
                                      const std::vector<std::uint16_t>& all_ports,
                                      double now = 0.0) {
    ForwardDecision d;
    FlowRule* rule = table.match(frame, ingress);
    if (rule) {
        d.action = rule->action;
        ++rule->stats.packets;
        rule->stats.bytes += 2 + 1 + frame.dlc;
        rule->stats.last_matched = now;
    } else {
        d.action = FlowAction::Broadcast;
        table.count_default();
    }
    switch (d.action) {
        case FlowAction::Broadcast:
            for (std::uint16_t p : all_ports)
                if (p != ingress && p != kPortStorage) d.delivered.push_back(p);
            break;
        case FlowAction::RedirectStorage:
            d.delivered.push_back(kPortStorage);
            break;
        case FlowAction::Drop:
            break;
    }
    return d;
}

// --- controller --------------------------------------------------------------

using WindowClassifier =
    std::function<int(const std::vector<std::vector<double>>&)>;

inline WindowClassifier model_classifier(const ModelState& model) {
    return [&model](const std::vector<std::vector<double>>& window) {
        return forward(model, window).probability > 0.5 ? 1 : 0;
    };
}

struct ControllerConfig {
    int rate = 10;            // window sampling rate, Hz
    int window_seconds = 10;
    std::vector<std::uint16_t> trusted_ports = {kPortEms, kPortMdps};
};

struct MitigationCommand {
    FlowRuleWire rule;
    AlertBody alert;
};

// Monitors PACKET_IN copies, keeps a rolling 10-second signal window, and
// classifies it once per second. An Attack verdict redirects every untrusted
// port seen in the evidence window.
class Controller {
  public:
    Controller(const SignalCatalog& catalog, ControllerConfig cfg,
               WindowClassifier classifier, const Normalizer* normalizer)
        : catalog_(&catalog),
          cfg_(std::move(cfg)),
          classifier_(std::move(classifier)),
          normalizer_(normalizer),
          current_(catalog.size(), 0.0) {}

    struct IngestOutcome {
        std::optional<int> verdict;
        std::vector<MitigationCommand> commands;
        double detection_seconds = 0.0;  // classifier wall time, when classified
    };

    // now: seconds (virtual or wall). Returns a verdict when a full second has
    // elapsed and the window buffer is full.
    IngestOutcome ingest(const CanFrame& frame, std::uint16_t ingress, double now) {
        IngestOutcome out;
        // sample the pre-arrival state so a sample at time t reflects every
        // frame seen strictly before t, regardless of same-instant ordering
        const double tick = 1.0 / cfg_.rate;
        while (now >= next_sample_) {
            buffer_.push_back(current_);
            const std::size_t cap =
                static_cast<std::size_t>(cfg_.window_seconds) *
                static_cast<std::size_t>(cfg_.rate);
            while (buffer_.size() > cap) buffer_.pop_front();
            next_sample_ += tick;
        }
        if (now >= next_classify_) {
            next_classify_ = std::floor(now) + 1.0;
            const std::size_t cap =
                static_cast<std::size_t>(cfg_.window_seconds) *
                static_cast<std::size_t>(cfg_.rate);
            if (buffer_.size() == cap) {
                std::vector<std::vector<double>> window(buffer_.begin(),
                                                        buffer_.end());
                if (normalizer_) {
                    Instance tmp;
                    tmp.window = std::move(window);
                    normalizer_->apply(tmp);
                    window = std::move(tmp.window);
                }
                const auto t0 = std::chrono::steady_clock::now();
                const int verdict = classifier_(window);
                out.detection_seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                  t0)
                        .count();
                out.verdict = verdict;
                ++windows_classified_;
                if (verdict == 1) out.commands = mitigate(now);
            }
        }

        auto decoded = decode_frame(frame, *catalog_);
        if (decoded.empty()) {
            ++undecodable_;
        } else {
            for (const auto& rec : decoded)
                current_[catalog_->index_of(rec.signal)] = rec.value;
        }
        recent_ports_.push_back({now, ingress});
        while (!recent_ports_.empty() &&
               recent_ports_.front().first < now - cfg_.window_seconds)
            recent_ports_.pop_front();
        return out;
    }

    std::uint64_t undecodable() const { return undecodable_; }
    std::uint64_t windows_classified() const { return windows_classified_; }
    std::uint64_t next_seq() { return seq_++; }

  private:
    std::vector<MitigationCommand> mitigate(double now) {
        std::vector<MitigationCommand> cmds;
        std::vector<std::uint16_t> suspects;
        for (const auto& [t, port] : recent_ports_) {
            if (std::find(cfg_.trusted_ports.begin(), cfg_.trusted_ports.end(),
                          port) != cfg_.trusted_ports.end())
                continue;
            if (std::find(suspects.begin(), suspects.end(), port) == suspects.end())
                suspects.push_back(port);
        }
        for (std::uint16_t port : suspects) {
            if (redirected_.count(port)) continue;
            redirected_.insert(port);
            MitigationCommand cmd;
            cmd.rule.priority = 100;
            cmd.rule.match_port = port;
            cmd.rule.match_has_id = false;
            cmd.rule.action = FlowAction::RedirectStorage;
            cmd.alert.evidence_window =
                static_cast<std::uint32_t>(std::floor(now));
            cmd.alert.text = std::string("attack traffic redirected from port ") +
                             port_name(port);
            cmds.push_back(std::move(cmd));
        }
        return cmds;
    }

    const SignalCatalog* catalog_;
    ControllerConfig cfg_;
    WindowClassifier classifier_;
    const Normalizer* normalizer_;
    std::vector<double> current_;
    std::deque<std::vector<double>> buffer_;
    std::deque<std::pair<double, std::uint16_t>> recent_ports_;
    std::set<std::uint16_t> redirected_;
    double next_sample_ = 0.0;
    double next_classify_ = 1.0;
    std::uint64_t undecodable_ = 0;
    std::uint64_t windows_classified_ = 0;
    std::uint64_t seq_ = 0;
};

// --- scenario and reporting --------------------------------------------------

enum class Transport { VirtualTime, LoopbackSocket };

struct ScenarioConfig {
    double duration_seconds = 30.0;
    int cadence_ms = 10;
    int rate = 10;
    int window_seconds = 10;
    std::uint64_t seed = 0;
    Transport transport = Transport::VirtualTime;
    // compromised node emits tampered EMS11 frames during [attack_start, attack_end)
    double attack_start = -1.0;
    double attack_end = -1.0;
    std::vector<std::string> attack_targets = default_attack_targets();

    bool attack_active(double t) const {
        return attack_start >= 0 && t >= attack_start && t < attack_end;
    }
};

struct SimEvent {
    double time = 0.0;
    std::string node;
    std::string event;  // emit, deliver, flow_mod, alert, verdict
    std::uint16_t cid = 0;
    std::string detail;
};

struct Delivery {
    double time = 0.0;
    std::uint16_t src_port = 0;
    std::uint16_t dst_port = 0;
    std::uint16_t cid = 0;
};

struct StoredFrame {
    double time = 0.0;
    std::uint16_t src_port = 0;
    CanFrame frame;
    std::string verdict;
};

struct LatencyRow {
    std::string msg_type;
    double transmission_ms = 0.0;
    double detection_ms = 0.0;
    double mitigation_ms = 0.0;
    double overall_ms() const {
        return transmission_ms + detection_ms + mitigation_ms;
    }
};

struct LatencyReport {
    std::vector<LatencyRow> rows;  // per message type + Average last
};

struct SimResult {
    std::vector<SimEvent> events;
    std::vector<Delivery> deliveries;
    std::vector<StoredFrame> storage;
    LatencyReport latency;
    std::optional<double> first_attack_verdict;
    std::uint64_t frames_emitted = 0;
    std::uint64_t flow_mods = 0;
    std::uint64_t alerts = 0;
};

namespace sim_detail {

inline std::string msg_type_of(std::uint16_t cid, bool from_compromised) {
    if (from_compromised) return "Attack";
    switch (cid) {
        case 0x0316: return "EMS11";
        case 0x0329: return "EMS12";
        case 0x0545: return "EMS14";
        case 0x0260: return "EMS16";
        case 0x02b0: return "SAS11";
    }
    return "other";
}

struct LatencyAccum {
    std::map<std::string, std::pair<double, std::uint64_t>> transmission;
    std::vector<double> detection;
    std::vector<double> mitigation;

    void add_transmission(const std::string& type, double ms) {
        auto& [sum, n] = transmission[type];
        sum += ms;
        ++n;
    }

    LatencyReport report() const {
        LatencyReport rep;
        auto mean = [](const std::vector<double>& v) {
            if (v.empty()) return 0.0;
            double s = 0;
            for (double x : v) s += x;
            return s / static_cast<double>(v.size());
        };
        const double det = mean(detection);
        const double mit = mean(mitigation);
        double tx_total = 0;
        std::uint64_t tx_n = 0;
        const char* order[] = {"EMS11", "EMS12", "EMS14", "EMS16", "SAS11", "Attack"};
        for (const char* type : order) {
            auto it = transmission.find(type);
            if (it == transmission.end()) continue;
            const auto& [sum, n] = it->second;
            rep.rows.push_back({type, sum / static_cast<double>(n), det, mit});
            tx_total += sum;
            tx_n += n;
        }
        rep.rows.push_back(
            {"Average", tx_n ? tx_total / static_cast<double>(tx_n) : 0.0, det, mit});
        return rep;
    }
};

// Per-second redraw of tampered target values, matching the injection model.
class CompromisedEmitter {
  public:
    CompromisedEmitter(const SignalCatalog& catalog,
                       std::vector<std::string> targets, std::uint64_t seed)
        : catalog_(&catalog), targets_(std::move(targets)), rng_(seed) {}

    CanFrame tamper(const CanFrame& ems11, double now) {
        const int second = static_cast<int>(std::floor(now));
        if (second != drawn_second_) {
            drawn_second_ = second;
            drawn_.clear();
            for (const auto& name : targets_) {
                const SignalSpec& s = catalog_->at(name);
                std::uniform_real_distribution<double> u(s.v_min, s.v_max);
                drawn_[name] = u(rng_);
            }
        }
        CanFrame out = ems11;
        for (const auto& name : targets_) {
            const SignalSpec& s = catalog_->at(name);
            if (s.cid != out.can_id) continue;
            deposit_raw_bits(out.data, s.start_bit, s.bit_len,
                             physical_to_raw(drawn_[name], s).raw,
                             catalog_->bit_order());
        }
        return out;
    }

  private:
    const SignalCatalog* catalog_;
    std::vector<std::string> targets_;
    std::mt19937_64 rng_;
    int drawn_second_ = -1;
    std::map<std::string, double> drawn_;
};

}  // namespace sim_detail

// --- virtual-time simulation -------------------------------------------------

inline SimResult run_simulation_virtual(const ScenarioConfig& cfg,
                                        const SignalCatalog& catalog,
                                        WindowClassifier classifier,
                                        const Normalizer* normalizer = nullptr) {
    SimResult res;
    FlowTable table;
    ControllerConfig ccfg;
    ccfg.rate = cfg.rate;
    ccfg.window_seconds = cfg.window_seconds;
    Controller controller(catalog, ccfg, std::move(classifier), normalizer);
    SignalWalk walk(catalog, cfg.seed);
    sim_detail::CompromisedEmitter compromised(catalog, cfg.attack_targets,
                                               cfg.seed ^ 0x9e3779b97f4a7c15ull);
    sim_detail::LatencyAccum lat;

    const std::vector<std::uint16_t> ports = {kPortEms, kPortMdps,  kPortAbs,
                                              kPortEsc, kPortEpb,   kPortCompromised,
                                              kPortStorage};
    const double dt = cfg.cadence_ms / 1000.0;

    auto push_frame = [&](const CanFrame& frame, std::uint16_t ingress, double now) {
        ++res.frames_emitted;
        res.events.push_back(
            {now, port_name(ingress), "emit", frame.can_id, ""});
        ForwardDecision d = switch_forward(table, frame, ingress, ports, now);
        for (std::uint16_t egress : d.delivered) {
            if (egress == kPortStorage) {
                res.storage.push_back({now, ingress, frame, "redirected"});
            } else {
                res.deliveries.push_back({now, ingress, egress, frame.can_id});
            }
            lat.add_transmission(
                sim_detail::msg_type_of(frame.can_id, ingress == kPortCompromised),
                0.0);
        }
        // monitor copy to the controller
        auto out = controller.ingest(frame, ingress, now);
        if (out.verdict) {
            res.events.push_back({now, "CONTROLLER", "verdict", 0,
                                  *out.verdict == 1 ? "Attack" : "Normal"});
            lat.detection.push_back(out.detection_seconds * 1000.0);
            if (*out.verdict == 1 && !res.first_attack_verdict)
                res.first_attack_verdict = now;
        }
        for (const auto& cmd : out.commands) {
            FlowRule rule;
            rule.priority = cmd.rule.priority;
            rule.match_port = cmd.rule.match_port;
            if (cmd.rule.match_has_id) rule.match_id = cmd.rule.match_id;
            rule.action = cmd.rule.action;
            table.flow_mod(rule);
            ++res.flow_mods;
            ++res.alerts;
            lat.mitigation.push_back(0.0);
            res.events.push_back({now, "CONTROLLER", "flow_mod",
                                  cmd.rule.match_id,
                                  std::string("redirect port ") +
                                      port_name(cmd.rule.match_port)});
            res.events.push_back({now, "CONTROLLER", "alert", 0, cmd.alert.text});
        }
    };

    for (double now = 0.0; now < cfg.duration_seconds; now += dt) {
        walk.advance();
        for (const auto& msg : {"EMS11", "EMS12", "EMS14", "EMS16"})
            push_frame(walk.frame_for(msg, now), kPortEms, now);
        push_frame(walk.frame_for("SAS11", now), kPortMdps, now);
        if (cfg.attack_active(now)) {
            CanFrame tampered =
                compromised.tamper(walk.frame_for("EMS11", now), now);
            push_frame(tampered, kPortCompromised, now);
        }
    }
    res.latency = lat.report();
    return res;
}

// --- loopback socket simulation ----------------------------------------------
//
// One thread per broadcasting ECU, one per receiver, one for the controller;
// the switch runs on the calling thread and serializes all forwarding. Frame
// timestamps carry steady-clock microseconds so receivers can measure
// transmission latency.

inline SimResult run_simulation_sockets(const ScenarioConfig& cfg,
                                        const SignalCatalog& catalog,
                                        WindowClassifier classifier,
                                        const Normalizer* normalizer = nullptr) {
    using clock = std::chrono::steady_clock;
    SimResult res;
    sim_detail::LatencyAccum lat;
    std::mutex lat_mu, res_mu;

    auto now_us = [start = clock::now()]() {
        return std::chrono::duration<double, std::micro>(clock::now() - start)
            .count();
    };

    struct Pipe {
        int sw = -1;    // switch end
        int node = -1;  // node end
    };
    auto make_pipe = [] {
        int fds[2];
        if (::socketpair(AF_UNIX, SOCK_STREAM, 0, fds) != 0)
            throw std::runtime_error("socketpair failed");
        return Pipe{fds[0], fds[1]};
    };

    const std::vector<std::uint16_t> broadcasters = {kPortEms, kPortMdps,
                                                     kPortCompromised};
    const std::vector<std::uint16_t> receivers = {kPortAbs, kPortEsc, kPortEpb};
    std::map<std::uint16_t, Pipe> pipes;
    for (std::uint16_t p : broadcasters) pipes[p] = make_pipe();
    for (std::uint16_t p : receivers) pipes[p] = make_pipe();
    pipes[kPortStorage] = make_pipe();
    Pipe controller_pipe = make_pipe();

    std::atomic<bool> stop{false};

    auto send_msg = [](int fd, const ControllerMsg& msg) {
        auto bytes = encode_msg(msg);
        std::size_t off = 0;
        while (off < bytes.size()) {
            ssize_t n = ::send(fd, bytes.data() + off, bytes.size() - off,
                               MSG_NOSIGNAL);
            if (n <= 0) return false;
            off += static_cast<std::size_t>(n);
        }
        return true;
    };

    // broadcaster threads
    std::vector<std::thread> threads;
    for (std::uint16_t port : broadcasters) {
        threads.emplace_back([&, port] {
            SignalWalk walk(catalog, cfg.seed + port);
            sim_detail::CompromisedEmitter compromised(
                catalog, cfg.attack_targets, cfg.seed ^ 0x9e3779b97f4a7c15ull);
            const auto cadence = std::chrono::milliseconds(cfg.cadence_ms);
            auto next = clock::now();
            const auto t_end =
                clock::now() +
                std::chrono::milliseconds(
                    static_cast<long>(cfg.duration_seconds * 1000));
            std::uint64_t seq = 0;
            while (!stop.load() && clock::now() < t_end) {
                walk.advance();
                const double t_rel = now_us() / 1e6;
                std::vector<CanFrame> frames;
                if (port == kPortEms) {
                    for (const auto& msg : {"EMS11", "EMS12", "EMS14", "EMS16"})
                        frames.push_back(walk.frame_for(msg, 0.0));
                } else if (port == kPortMdps) {
                    frames.push_back(walk.frame_for("SAS11", 0.0));
                } else if (cfg.attack_active(t_rel)) {
                    frames.push_back(
                        compromised.tamper(walk.frame_for("EMS11", 0.0), t_rel));
                }
                for (auto& f : frames) {
                    f.timestamp = now_us();  // microseconds since sim start
                    ControllerMsg msg;
                    msg.kind = MsgKind::PacketIn;
                    msg.seq = seq++;
                    msg.body = PacketInBody{port, f};
                    if (!send_msg(pipes[port].node, msg)) return;
                }
                next += cadence;
                std::this_thread::sleep_until(next);
            }
        });
    }

    // receiver threads: decode, timestamp, log
    for (std::uint16_t port : receivers) {
        threads.emplace_back([&, port] {
            std::vector<std::uint8_t> buf;
            std::uint8_t tmp[4096];
            while (true) {
                ssize_t n = ::read(pipes[port].node, tmp, sizeof tmp);
                if (n <= 0) break;
                buf.insert(buf.end(), tmp, tmp + n);
                while (auto decoded = try_decode_msg(buf)) {
                    const auto& [msg, used] = *decoded;
                    buf.erase(buf.begin(),
                              buf.begin() + static_cast<std::ptrdiff_t>(used));
                    if (msg.kind != MsgKind::PacketIn) continue;
                    const auto& body = std::get<PacketInBody>(msg.body);
                    const double ms =
                        (now_us() - body.frame.timestamp) / 1000.0;
                    std::scoped_lock lk(lat_mu, res_mu);
                    lat.add_transmission(
                        sim_detail::msg_type_of(body.frame.can_id,
                                                body.ingress_port ==
                                                    kPortCompromised),
                        ms);
                    res.deliveries.push_back({body.frame.timestamp / 1e6,
                                              body.ingress_port, port,
                                              body.frame.can_id});
                }
            }
        });
    }

    // storage sink
    threads.emplace_back([&] {
        std::vector<std::uint8_t> buf;
        std::uint8_t tmp[4096];
        while (true) {
            ssize_t n = ::read(pipes[kPortStorage].node, tmp, sizeof tmp);
            if (n <= 0) break;
            buf.insert(buf.end(), tmp, tmp + n);
            while (auto decoded = try_decode_msg(buf)) {
                const auto& [msg, used] = *decoded;
                buf.erase(buf.begin(),
                          buf.begin() + static_cast<std::ptrdiff_t>(used));
                if (msg.kind != MsgKind::PacketIn) continue;
                const auto& body = std::get<PacketInBody>(msg.body);
                std::scoped_lock lk(res_mu);
                res.storage.push_back({body.frame.timestamp / 1e6,
                                       body.ingress_port, body.frame,
                                       "redirected"});
            }
        }
    });

    // controller thread: classify rolling window, emit FLOW_MODs
    std::map<std::uint64_t, double> flow_mod_sent_us;
    std::mutex flow_mod_mu;
    threads.emplace_back([&] {
        ControllerConfig ccfg;
        ccfg.rate = cfg.rate;
        ccfg.window_seconds = cfg.window_seconds;
        Controller controller(catalog, ccfg, classifier, normalizer);
        std::vector<std::uint8_t> buf;
        std::uint8_t tmp[4096];
        while (true) {
            ssize_t n = ::read(controller_pipe.node, tmp, sizeof tmp);
            if (n <= 0) break;
            buf.insert(buf.end(), tmp, tmp + n);
            while (auto decoded = try_decode_msg(buf)) {
                const auto& [msg, used] = *decoded;
                buf.erase(buf.begin(),
                          buf.begin() + static_cast<std::ptrdiff_t>(used));
                if (msg.kind != MsgKind::PacketIn) continue;
                const auto& body = std::get<PacketInBody>(msg.body);
                const double t_rel = now_us() / 1e6;
                auto out = controller.ingest(body.frame, body.ingress_port, t_rel);
                if (out.verdict) {
                    std::scoped_lock lk(lat_mu, res_mu);
                    lat.detection.push_back(out.detection_seconds * 1000.0);
                    if (*out.verdict == 1 && !res.first_attack_verdict)
                        res.first_attack_verdict = t_rel;
                }
                for (const auto& cmd : out.commands) {
                    ControllerMsg fm;
                    fm.kind = MsgKind::FlowMod;
                    fm.seq = controller.next_seq();
                    fm.body = cmd.rule;
                    {
                        std::scoped_lock lk(flow_mod_mu);
                        flow_mod_sent_us[fm.seq] = now_us();
                    }
                    send_msg(controller_pipe.node, fm);
                    std::scoped_lock lk(res_mu);
                    ++res.alerts;
                    res.events.push_back({t_rel, "CONTROLLER", "alert", 0,
                                          cmd.alert.text});
                }
            }
        }
    });

    // switch loop on this thread
    FlowTable table;
    const std::vector<std::uint16_t> all_ports = {
        kPortEms, kPortMdps, kPortAbs,         kPortEsc,
        kPortEpb, kPortCompromised, kPortStorage};
    std::vector<pollfd> pfds;
    std::vector<std::uint16_t> pfd_ports;
    for (std::uint16_t p : broadcasters) {
        pfds.push_back({pipes[p].sw, POLLIN, 0});
        pfd_ports.push_back(p);
    }
    pfds.push_back({controller_pipe.sw, POLLIN, 0});
    pfd_ports.push_back(0);  // 0 marks the controller channel

    std::map<std::uint16_t, std::vector<std::uint8_t>> inbuf;
    const auto deadline =
        clock::now() + std::chrono::milliseconds(
                           static_cast<long>(cfg.duration_seconds * 1000) + 400);
    std::uint64_t sw_seq = 0;
    while (clock::now() < deadline) {
        int rc = ::poll(pfds.data(), pfds.size(), 20);
        if (rc < 0) break;
        for (std::size_t i = 0; i < pfds.size(); ++i) {
            if (!(pfds[i].revents & POLLIN)) continue;
            std::uint8_t tmp[4096];
            ssize_t n = ::read(pfds[i].fd, tmp, sizeof tmp);
            if (n <= 0) continue;
            auto& buf = inbuf[pfd_ports[i]];
            buf.insert(buf.end(), tmp, tmp + n);
            while (auto decoded = try_decode_msg(buf)) {
                const auto& [msg, used] = *decoded;
                buf.erase(buf.begin(),
                          buf.begin() + static_cast<std::ptrdiff_t>(used));
                if (pfd_ports[i] == 0) {
                    // controller channel: FLOW_MOD
                    if (msg.kind != MsgKind::FlowMod) continue;
                    const auto& w = std::get<FlowRuleWire>(msg.body);
                    FlowRule rule;
                    rule.priority = w.priority;
                    rule.match_port = w.match_port;
                    if (w.match_has_id) rule.match_id = w.match_id;
                    rule.action = w.action;
                    table.flow_mod(rule);
                    double sent = 0;
                    {
                        std::scoped_lock lk(flow_mod_mu);
                        auto it = flow_mod_sent_us.find(msg.seq);
                        if (it != flow_mod_sent_us.end()) sent = it->second;
                    }
                    std::scoped_lock lk(lat_mu, res_mu);
                    if (sent > 0) lat.mitigation.push_back((now_us() - sent) / 1000.0);
                    ++res.flow_mods;
                    res.events.push_back(
                        {now_us() / 1e6, "SWITCH", "flow_mod", 0,
                         std::string("redirect port ") + port_name(w.match_port)});
                    continue;
                }
                if (msg.kind != MsgKind::PacketIn) continue;
                const auto& body = std::get<PacketInBody>(msg.body);
                {
                    std::scoped_lock lk(res_mu);
                    ++res.frames_emitted;
                }
                ForwardDecision d = switch_forward(table, body.frame,
                                                   body.ingress_port, all_ports,
                                                   now_us() / 1e6);
                for (std::uint16_t egress : d.delivered) {
                    // pure emitters never read their socket; writing to them
                    // would eventually fill the buffer and wedge the switch
                    if (egress != kPortStorage &&
                        std::find(receivers.begin(), receivers.end(), egress) ==
                            receivers.end())
                        continue;
                    ControllerMsg fwd;
                    fwd.kind = MsgKind::PacketIn;
                    fwd.seq = sw_seq++;
                    fwd.body = body;
                    send_msg(pipes[egress].sw, fwd);
                }
                // monitor copy
                ControllerMsg copy;
                copy.kind = MsgKind::PacketIn;
                copy.seq = sw_seq++;
                copy.body = body;
                send_msg(controller_pipe.sw, copy);
            }
        }
    }
    stop.store(true);
    for (auto& [port, pipe] : pipes) ::close(pipe.sw);
    ::close(controller_pipe.sw);
    for (auto& t : threads) t.join();
    for (auto& [port, pipe] : pipes) ::close(pipe.node);
    ::close(controller_pipe.node);

    res.latency = lat.report();
    return res;
}

inline SimResult run_simulation(const ScenarioConfig& cfg,
                                const SignalCatalog& catalog,
                                WindowClassifier classifier,
                                const Normalizer* normalizer = nullptr) {
    return cfg.transport == Transport::VirtualTime
               ? run_simulation_virtual(cfg, catalog, std::move(classifier),
                                        normalizer)
               : run_simulation_sockets(cfg, catalog, std::move(classifier),
                                        normalizer);
}

// --- text outputs ------------------------------------------------------------

inline void export_event_log(const SimResult& res, std::ostream& out) {
    out << "time,node,event,cid,detail\n";
    char cid[8];
    for (const auto& e : res.events) {
        std::snprintf(cid, sizeof cid, "%04x", e.cid);
        out << e.time << ',' << e.node << ',' << e.event << ',' << cid << ','
            << e.detail << '\n';
    }
}

inline void export_storage_log(const SimResult& res, std::ostream& out) {
    out << "time,src_port,cid,verdict\n";
    char cid[8];
    for (const auto& s : res.storage) {
        std::snprintf(cid, sizeof cid, "%04x", s.frame.can_id);
        out << s.time << ',' << port_name(s.src_port) << ',' << cid << ','
            << s.verdict << '\n';
    }
}

inline void export_latency_report(const LatencyReport& rep, std::ostream& out) {
    out << "msg_type,latency_ms,detection_ms,mitigation_ms,overall_ms\n";
    for (const auto& r : rep.rows)
        out << r.msg_type << ',' << r.transmission_ms << ',' << r.detection_ms
            << ',' << r.mitigation_ms << ',' << r.overall_ms() << '\n';
}

}  // namespace fddms
