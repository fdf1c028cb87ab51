#pragma once

// OpenFlow-lite control channel codec. Length-prefixed binary layout:
//   u32 big-endian length (kind + seq + body), u8 kind, u64 BE sequence, body.
// Frames travel as 19 bytes: u64 timestamp-microseconds, u16 id, u8 dlc,
// 8 data bytes, all big-endian.

#include <array>
#include <cstdint>
#include <cstring>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fddms/can_codec.hpp"

namespace fddms {

enum class MsgKind : std::uint8_t {
    PacketIn = 1,
    FlowMod = 2,
    StatsRequest = 3,
    StatsReply = 4,
    Alert = 5,
};

enum class FlowAction : std::uint8_t {
    Broadcast = 1,
    RedirectStorage = 2,
    Drop = 3,
};

struct FlowRuleWire {
    std::int32_t priority = 0;
    std::uint16_t match_port = 0;
    bool match_has_id = false;
    std::uint16_t match_id = 0;
    FlowAction action = FlowAction::Broadcast;

    bool operator==(const FlowRuleWire&) const = default;
};

struct PacketInBody {
    std::uint16_t ingress_port = 0;
    CanFrame frame;
    bool operator==(const PacketInBody&) const = default;
};

struct StatsReplyBody {
    std::uint64_t packets = 0;
    std::uint64_t bytes = 0;
    bool operator==(const StatsReplyBody&) const = default;
};

struct AlertBody {
    std::uint32_t evidence_window = 0;
    std::string text;
    bool operator==(const AlertBody&) const = default;
};

struct ControllerMsg {
    MsgKind kind = MsgKind::PacketIn;
    std::uint64_t seq = 0;
    std::variant<PacketInBody, FlowRuleWire, std::monostate, StatsReplyBody,
                 AlertBody>
        body;

    bool operator==(const ControllerMsg&) const = default;
};

struct DecodeError : std::runtime_error {
    std::size_t offset;
    DecodeError(std::size_t off, const std::string& reason)
        : std::runtime_error(reason), offset(off) {}
};

namespace wire_detail {

inline void put_u8(std::vector<std::uint8_t>& b, std::uint8_t v) { b.push_back(v); }
inline void put_u16(std::vector<std::uint8_t>& b, std::uint16_t v) {
    b.push_back(static_cast<std::uint8_t>(v >> 8));
    b.push_back(static_cast<std::uint8_t>(v));
}
inline void put_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) b.push_back(static_cast<std::uint8_t>(v >> s));
}
inline void put_u64(std::vector<std::uint8_t>& b, std::uint64_t v) {
    for (int s = 56; s >= 0; s -= 8) b.push_back(static_cast<std::uint8_t>(v >> s));
}

struct Reader {
    const std::uint8_t* p;
    std::size_t len;
    std::size_t off = 0;

    void need(std::size_t n) const {
        if (off + n > len)
            throw DecodeError{off, "truncated buffer"};
    }
    std::uint8_t u8() {
        need(1);
        return p[off++];
    }
    std::uint16_t u16() {
        need(2);
        std::uint16_t v = static_cast<std::uint16_t>((p[off] << 8) | p[off + 1]);
        off += 2;
        return v;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | p[off + static_cast<std::size_t>(i)];
        off += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = (v << 8) | p[off + static_cast<std::size_t>(i)];
        off += 8;
        return v;
    }
};

inline void put_frame(std::vector<std::uint8_t>& b, const CanFrame& f) {
    put_u64(b, static_cast<std::uint64_t>(f.timestamp * 1e6 + 0.5));
    put_u16(b, f.can_id);
    put_u8(b, f.dlc);
    for (std::uint8_t byte : f.data) put_u8(b, byte);
}

inline CanFrame get_frame(Reader& r) {
    CanFrame f;
    f.timestamp = static_cast<double>(r.u64()) / 1e6;
    f.can_id = r.u16();
    f.dlc = r.u8();
    if (f.can_id > 0x7FF) throw DecodeError{r.off, "frame id exceeds 11 bits"};
    if (f.dlc > 8) throw DecodeError{r.off, "frame dlc exceeds 8"};
    for (auto& byte : f.data) byte = r.u8();
    return f;
}

}  // namespace wire_detail

constexpr std::size_t kMaxWireMessage = 1 << 20;

inline std::vector<std::uint8_t> encode_msg(const ControllerMsg& msg) {
    using namespace wire_detail;
    std::vector<std::uint8_t> body;
    put_u8(body, static_cast<std::uint8_t>(msg.kind));
    put_u64(body, msg.seq);
    switch (msg.kind) {
        case MsgKind::PacketIn: {
            const auto& b = std::get<PacketInBody>(msg.body);
            put_u16(body, b.ingress_port);
            put_frame(body, b.frame);
            break;
        }
        case MsgKind::FlowMod: {
            const auto& b = std::get<FlowRuleWire>(msg.body);
            put_u32(body, static_cast<std::uint32_t>(b.priority));
            put_u16(body, b.match_port);
            put_u8(body, b.match_has_id ? 1 : 0);
            put_u16(body, b.match_id);
            put_u8(body, static_cast<std::uint8_t>(b.action));
            break;
        }
        case MsgKind::StatsRequest:
            break;
        case MsgKind::StatsReply: {
            const auto& b = std::get<StatsReplyBody>(msg.body);
            put_u64(body, b.packets);
            put_u64(body, b.bytes);
            break;
        }
        case MsgKind::Alert: {
            const auto& b = std::get<AlertBody>(msg.body);
            put_u32(body, b.evidence_window);
            body.insert(body.end(), b.text.begin(), b.text.end());
            break;
        }
    }
    std::vector<std::uint8_t> out;
    put_u32(out, static_cast<std::uint32_t>(body.size()));
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

// Decodes one message; returns the message and the bytes consumed.
// Throws DecodeError on truncated, oversized, or malformed input.
inline std::pair<ControllerMsg, std::size_t> decode_msg(
    const std::uint8_t* data, std::size_t len) {
    using namespace wire_detail;
    Reader r{data, len};
    const std::uint32_t body_len = r.u32();
    if (body_len < 9) throw DecodeError{0, "length prefix too small"};
    if (body_len > kMaxWireMessage) throw DecodeError{0, "length prefix too large"};
    r.need(body_len);
    Reader br{data + r.off, body_len};

    ControllerMsg msg;
    const std::uint8_t kind = br.u8();
    msg.seq = br.u64();
    switch (kind) {
        case 1: {
            msg.kind = MsgKind::PacketIn;
            PacketInBody b;
            b.ingress_port = br.u16();
            b.frame = get_frame(br);
            msg.body = b;
            break;
        }
        case 2: {
            msg.kind = MsgKind::FlowMod;
            FlowRuleWire b;
            b.priority = static_cast<std::int32_t>(br.u32());
            b.match_port = br.u16();
            b.match_has_id = br.u8() != 0;
            b.match_id = br.u16();
            const std::uint8_t a = br.u8();
            if (a < 1 || a > 3) throw DecodeError{br.off, "bad flow action"};
            b.action = static_cast<FlowAction>(a);
            msg.body = b;
            break;
        }
        case 3:
            msg.kind = MsgKind::StatsRequest;
            msg.body = std::monostate{};
            break;
        case 4: {
            msg.kind = MsgKind::StatsReply;
            StatsReplyBody b;
            b.packets = br.u64();
            b.bytes = br.u64();
            msg.body = b;
            break;
        }
        case 5: {
            msg.kind = MsgKind::Alert;
            AlertBody b;
            b.evidence_window = br.u32();
            b.text.assign(reinterpret_cast<const char*>(data + r.off + br.off),
                          body_len - br.off);
            br.off = body_len;
            msg.body = b;
            break;
        }
        default:
            throw DecodeError{4, "unknown message kind"};
    }
    if (br.off != body_len) throw DecodeError{br.off, "trailing bytes in body"};
    return {msg, 4 + static_cast<std::size_t>(body_len)};
}

inline std::optional<std::pair<ControllerMsg, std::size_t>> try_decode_msg(
    const std::vector<std::uint8_t>& buf) {
    if (buf.size() < 4) return std::nullopt;
    std::uint32_t body_len = 0;
    for (int i = 0; i < 4; ++i) body_len = (body_len << 8) | buf[static_cast<std::size_t>(i)];
    if (body_len > kMaxWireMessage) throw DecodeError{0, "length prefix too large"};
    if (buf.size() < 4 + static_cast<std::size_t>(body_len)) return std::nullopt;
    return decode_msg(buf.data(), buf.size());
}

}  // namespace fddms
