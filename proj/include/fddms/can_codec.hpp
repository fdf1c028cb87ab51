#pragma once

// CAN frame parsing and DBC-lite signal codec.
//
// Bit convention: bits are numbered LSB-first within a little-endian 64-bit
// view of the 8 data bytes (byte 0 holds bits 0..7). Motorola (big-endian)
// ordering is selectable per catalog for users with real DBC files.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fddms {

struct CanFrame {
    double timestamp = 0.0;           // seconds
    std::uint16_t can_id = 0;         // 11-bit identifier
    std::uint8_t dlc = 8;             // 0..8
    std::array<std::uint8_t, 8> data{};

    bool operator==(const CanFrame&) const = default;
};

enum class BitOrder { LsbFirst, Motorola };

struct SignalSpec {
    std::string name;      // unique feature name (duplicates disambiguated)
    std::string msg;       // message name, e.g. EMS11
    std::uint16_t cid = 0; // hex CAN id
    std::uint32_t mid = 0; // cid rendered as decimal
    int start_bit = 0;
    int bit_len = 1;
    double scale = 1.0;
    double offset = 0.0;
    double v_min = 0.0;    // attack-model minimum
    double v_max = 0.0;    // attack-model maximum (V_max)

    std::uint64_t raw_max() const {
        return bit_len >= 64 ? ~0ull : ((1ull << bit_len) - 1);
    }
    double physical_min() const { return offset; }
    double physical_max() const {
        return offset + scale * static_cast<double>(raw_max());
    }
};

// Unsigned bit-field extraction from the 8-byte data field.
inline std::uint64_t extract_raw_bits(const std::array<std::uint8_t, 8>& data,
                                      int start_bit, int bit_len,
                                      BitOrder order = BitOrder::LsbFirst) {
    if (start_bit < 0 || bit_len < 1 || start_bit + bit_len > 64)
        throw std::invalid_argument("extract_raw_bits: bit range outside [0,64)");
    std::uint64_t word = 0;
    if (order == BitOrder::LsbFirst) {
        for (int i = 7; i >= 0; --i) word = (word << 8) | data[static_cast<std::size_t>(i)];
    } else {
        for (int i = 0; i < 8; ++i) word = (word << 8) | data[static_cast<std::size_t>(i)];
    }
    word >>= start_bit;
    if (bit_len < 64) word &= (1ull << bit_len) - 1;
    return word;
}

inline void deposit_raw_bits(std::array<std::uint8_t, 8>& data, int start_bit,
                             int bit_len, std::uint64_t raw,
                             BitOrder order = BitOrder::LsbFirst) {
    if (start_bit < 0 || bit_len < 1 || start_bit + bit_len > 64)
        throw std::invalid_argument("deposit_raw_bits: bit range outside [0,64)");
    const std::uint64_t mask =
        (bit_len >= 64 ? ~0ull : ((1ull << bit_len) - 1)) << start_bit;
    std::uint64_t word = 0;
    if (order == BitOrder::LsbFirst) {
        for (int i = 7; i >= 0; --i) word = (word << 8) | data[static_cast<std::size_t>(i)];
    } else {
        for (int i = 0; i < 8; ++i) word = (word << 8) | data[static_cast<std::size_t>(i)];
    }
    word = (word & ~mask) | ((raw << start_bit) & mask);
    if (order == BitOrder::LsbFirst) {
        for (int i = 0; i < 8; ++i) {
            data[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(word & 0xFF);
            word >>= 8;
        }
    } else {
        for (int i = 7; i >= 0; --i) {
            data[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(word & 0xFF);
            word >>= 8;
        }
    }
}

// V_signal = offset + scale * V_raw
inline double raw_to_physical(std::uint64_t raw, const SignalSpec& spec) {
    return spec.offset + spec.scale * static_cast<double>(raw);
}

struct RawResult {
    std::uint64_t raw = 0;
    bool clamped = false;
};

// Inverse of raw_to_physical: round((v - offset)/scale), clamped to range.
inline RawResult physical_to_raw(double value, const SignalSpec& spec) {
    RawResult out;
    double r = std::round((value - spec.offset) / spec.scale);
    if (r < 0.0) {
        out.raw = 0;
        out.clamped = true;
    } else if (r > static_cast<double>(spec.raw_max())) {
        out.raw = spec.raw_max();
        out.clamped = true;
    } else {
        out.raw = static_cast<std::uint64_t>(r);
    }
    return out;
}

struct DecodedRecord {
    double timestamp = 0.0;
    std::string signal;
    std::uint64_t raw = 0;
    double value = 0.0;
};

class SignalCatalog {
  public:
    SignalCatalog() = default;
    explicit SignalCatalog(std::vector<SignalSpec> entries,
                           BitOrder order = BitOrder::LsbFirst)
        : entries_(std::move(entries)), order_(order) {
        validate();
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            by_name_[entries_[i].name] = i;
            by_cid_[entries_[i].cid].push_back(i);
        }
    }

    const std::vector<SignalSpec>& entries() const { return entries_; }
    BitOrder bit_order() const { return order_; }
    std::size_t size() const { return entries_.size(); }

    const SignalSpec& at(const std::string& name) const {
        auto it = by_name_.find(name);
        if (it == by_name_.end())
            throw std::out_of_range("unknown signal: " + name);
        return entries_[it->second];
    }
    bool contains(const std::string& name) const {
        return by_name_.count(name) != 0;
    }
    const std::vector<std::size_t>* signals_for(std::uint16_t cid) const {
        auto it = by_cid_.find(cid);
        return it == by_cid_.end() ? nullptr : &it->second;
    }
    std::size_t index_of(const std::string& name) const {
        return by_name_.at(name);
    }
    std::vector<std::string> names() const {
        std::vector<std::string> out;
        out.reserve(entries_.size());
        for (const auto& e : entries_) out.push_back(e.name);
        return out;
    }

  private:
    void validate() const {
        for (const auto& e : entries_) {
            if (e.cid > 0x7FF)
                throw std::invalid_argument("catalog: can_id exceeds 11 bits");
            if (e.start_bit + e.bit_len > 64)
                throw std::invalid_argument("catalog: bit range exceeds 64");
            if (e.scale <= 0.0)
                throw std::invalid_argument("catalog: scale must be > 0");
        }
        // no two entries of the same cid may overlap in bits
        for (std::size_t i = 0; i < entries_.size(); ++i)
            for (std::size_t j = i + 1; j < entries_.size(); ++j) {
                const auto& a = entries_[i];
                const auto& b = entries_[j];
                if (a.cid != b.cid) continue;
                int a0 = a.start_bit, a1 = a.start_bit + a.bit_len;
                int b0 = b.start_bit, b1 = b.start_bit + b.bit_len;
                if (a0 < b1 && b0 < a1)
                    throw std::invalid_argument(
                        "catalog: overlapping bit ranges on cid for " + a.name +
                        " / " + b.name);
            }
    }

    std::vector<SignalSpec> entries_;
    BitOrder order_ = BitOrder::LsbFirst;
    std::map<std::string, std::size_t> by_name_;
    std::map<std::uint16_t, std::vector<std::size_t>> by_cid_;
};

inline std::vector<DecodedRecord> decode_frame(const CanFrame& frame,
                                               const SignalCatalog& catalog) {
    std::vector<DecodedRecord> out;
    const auto* idxs = catalog.signals_for(frame.can_id);
    if (!idxs) return out;  // unknown cids are filtered, not errors
    out.reserve(idxs->size());
    for (std::size_t i : *idxs) {
        const SignalSpec& s = catalog.entries()[i];
        std::uint64_t raw =
            extract_raw_bits(frame.data, s.start_bit, s.bit_len, catalog.bit_order());
        out.push_back({frame.timestamp, s.name, raw, raw_to_physical(raw, s)});
    }
    return out;
}

inline CanFrame encode_signal(const CanFrame& frame, const SignalSpec& spec,
                              double value,
                              BitOrder order = BitOrder::LsbFirst) {
    if (spec.cid != frame.can_id)
        throw std::invalid_argument("encode_signal: cid mismatch");
    CanFrame out = frame;
    deposit_raw_bits(out.data, spec.start_bit, spec.bit_len,
                     physical_to_raw(value, spec).raw, order);
    return out;
}

// --- trace parsing -----------------------------------------------------------

struct ParseError {
    std::size_t line_no = 0;
    std::string line;
    std::string reason;
};

struct ParseResult {
    std::vector<CanFrame> frames;
    std::vector<ParseError> errors;
};

// Default column layout matches the OTIDS-style text dump:
//   <timestamp> <hex id> <dlc> <b0> ... <b(dlc-1)>
struct TraceLayout {
    int col_timestamp = 0;
    int col_id = 1;
    int col_dlc = 2;
    int col_data = 3;  // first data byte column
};

inline ParseResult parse_trace(std::istream& in,
                               const TraceLayout& layout = {},
                               bool strict = true) {
    ParseResult res;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::vector<std::string> cols;
        for (std::string tok; ls >> tok;) cols.push_back(tok);
        if (cols.empty()) continue;

        auto fail = [&](const std::string& why) {
            if (strict)
                throw std::runtime_error("parse_trace: line " +
                                         std::to_string(line_no) + ": " + why);
            res.errors.push_back({line_no, line, why});
        };

        const int min_cols =
            std::max({layout.col_timestamp, layout.col_id, layout.col_dlc}) + 1;
        if (static_cast<int>(cols.size()) < min_cols) {
            fail("too few columns");
            continue;
        }
        CanFrame f;
        try {
            f.timestamp = std::stod(cols[static_cast<std::size_t>(layout.col_timestamp)]);
            unsigned long id =
                std::stoul(cols[static_cast<std::size_t>(layout.col_id)], nullptr, 16);
            unsigned long dlc =
                std::stoul(cols[static_cast<std::size_t>(layout.col_dlc)]);
            if (id > 0x7FF) {
                fail("id exceeds 11 bits");
                continue;
            }
            if (dlc > 8) {
                fail("dlc exceeds 8");
                continue;
            }
            if (static_cast<std::size_t>(layout.col_data) + dlc > cols.size()) {
                fail("fewer data bytes than dlc");
                continue;
            }
            f.can_id = static_cast<std::uint16_t>(id);
            f.dlc = static_cast<std::uint8_t>(dlc);
            for (unsigned long i = 0; i < dlc; ++i) {
                unsigned long b = std::stoul(
                    cols[static_cast<std::size_t>(layout.col_data) + i], nullptr, 16);
                if (b > 0xFF) throw std::invalid_argument("byte out of range");
                f.data[i] = static_cast<std::uint8_t>(b);
            }
        } catch (const std::exception& e) {
            fail(e.what());
            continue;
        }
        res.frames.push_back(f);
    }
    return res;
}

inline std::string serialize_trace(const std::vector<CanFrame>& frames) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    for (const auto& f : frames) {
        out.precision(6);
        out << f.timestamp << ' ';
        char buf[8];
        std::snprintf(buf, sizeof buf, "%04x", f.can_id);
        out << buf << ' ' << static_cast<int>(f.dlc);
        for (int i = 0; i < f.dlc; ++i) {
            std::snprintf(buf, sizeof buf, "%02x", f.data[static_cast<std::size_t>(i)]);
            out << ' ' << buf;
        }
        out << '\n';
    }
    return out.str();
}

// --- the default 20-signal catalog -------------------------------------------

// The two TQI rows collide by name; the EMS16 one is published as TQI_EMS16.
inline SignalCatalog default_catalog() {
    auto row = [](std::string name, std::string msg, std::uint16_t cid,
                  int first_bit, int last_bit, double scale, double offset) {
        SignalSpec s;
        s.name = std::move(name);
        s.msg = std::move(msg);
        s.cid = cid;
        s.mid = cid;  // the decimal MID is the hex CID's numeric value
        s.start_bit = first_bit;
        s.bit_len = last_bit - first_bit + 1;  // published ranges are inclusive
        s.scale = scale;
        s.offset = offset;
        s.v_min = 0.0;
        s.v_max = s.physical_max();
        return s;
    };
    std::vector<SignalSpec> rows = {
        row("SAS_Angle", "SAS11", 0x02b0, 0, 15, 0.10, 0.00),
        row("SAS_Speed", "SAS11", 0x02b0, 16, 23, 4.00, 0.00),
        row("MsgCount", "SAS11", 0x02b0, 32, 35, 1.00, 0.00),
        row("CheckSum", "SAS11", 0x02b0, 36, 39, 1.00, 0.00),
        row("TQ_COR_STAT", "EMS11", 0x0316, 4, 5, 1.00, 0.00),
        row("TQI_ACOR", "EMS11", 0x0316, 8, 15, 0.39, 0.00),
        row("N", "EMS11", 0x0316, 16, 31, 0.25, 0.00),
        row("TQI", "EMS11", 0x0316, 32, 39, 0.39, 0.00),
        row("TQFR", "EMS11", 0x0316, 40, 47, 0.39, 0.00),
        row("VS", "EMS11", 0x0316, 48, 55, 1.00, 0.00),
        row("MUL_CODE", "EMS12", 0x0329, 6, 7, 1.00, 0.00),
        row("TEMP_ENG", "EMS12", 0x0329, 8, 15, 0.75, -48.00),
        row("BRAKE_ACT", "EMS12", 0x0329, 32, 33, 1.00, 0.00),
        row("TPS", "EMS12", 0x0329, 40, 47, 0.47, -15.02),
        row("PV_AV_CAN", "EMS12", 0x0329, 48, 55, 0.39, 0.00),
        row("VB", "EMS14", 0x0545, 24, 31, 0.10, 0.00),
        row("TQI_MIN", "EMS16", 0x0260, 0, 7, 0.39, 0.00),
        row("TQI_EMS16", "EMS16", 0x0260, 8, 15, 0.39, 0.00),
        row("TQI_TARGET", "EMS16", 0x0260, 16, 23, 0.39, 0.00),
        row("TQI_MAX", "EMS16", 0x0260, 40, 47, 0.39, 0.00),
    };
    return SignalCatalog(std::move(rows));
}

// --- catalog file I/O (delimited text, one row per signal) -------------------

inline void save_catalog(const SignalCatalog& catalog, std::ostream& out) {
    const auto old_precision = out.precision(17);
    out << "name,msg,cid,mid,start_bit,bit_len,scale,offset,v_min,v_max\n";
    char cid[8];
    for (const auto& s : catalog.entries()) {
        std::snprintf(cid, sizeof cid, "%04x", s.cid);
        out << s.name << ',' << s.msg << ',' << cid << ',' << s.mid << ','
            << s.start_bit << ',' << s.bit_len << ',' << s.scale << ','
            << s.offset << ',' << s.v_min << ',' << s.v_max << '\n';
    }
    out.precision(old_precision);
}

inline SignalCatalog load_catalog(std::istream& in,
                                  BitOrder order = BitOrder::LsbFirst) {
    std::vector<SignalSpec> rows;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        std::istringstream ls(line);
        std::string tok;
        std::vector<std::string> cols;
        while (std::getline(ls, tok, ',')) cols.push_back(tok);
        if (cols.size() != 10)
            throw std::runtime_error("catalog: expected 10 columns, got " +
                                     std::to_string(cols.size()));
        SignalSpec s;
        s.name = cols[0];
        s.msg = cols[1];
        s.cid = static_cast<std::uint16_t>(std::stoul(cols[2], nullptr, 16));
        s.mid = static_cast<std::uint32_t>(std::stoul(cols[3]));
        s.start_bit = std::stoi(cols[4]);
        s.bit_len = std::stoi(cols[5]);
        s.scale = std::stod(cols[6]);
        s.offset = std::stod(cols[7]);
        s.v_min = std::stod(cols[8]);
        s.v_max = std::stod(cols[9]);
        rows.push_back(std::move(s));
    }
    return SignalCatalog(std::move(rows), order);
}

}  // namespace fddms
