#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ropscore/categories.hpp"
#include "ropscore/errors.hpp"
#include "ropscore/registers.hpp"

namespace ropscore {

enum class PreservationMode : std::uint8_t { Relaxed, Strict };

// Instructions that trap in user mode; a gadget containing any of them is
// unusable and gets discarded at ingest. cpuid is unprivileged and kept.
inline const std::set<std::string>& default_privileged_mnemonics() {
    static const std::set<std::string> list{
        "hlt", "in", "out", "ins", "outs", "cli", "sti", "lgdt", "sgdt",
        "lidt", "sidt", "ltr", "lmsw", "clts", "invd", "invlpg", "wbinvd",
        "rdmsr", "wrmsr", "iretq", "iretd", "iret", "sysexit", "sysret",
        "vmcall",
    };
    return list;
}

inline std::vector<Reg> default_arg_registers() {
    return {Reg::Rcx, Reg::Rdx, Reg::R8, Reg::R9};
}

// Shared knobs for ingest and all four metrics. Reports carry a
// fingerprint of this so results from different settings never get
// compared against each other.
struct Config {
    std::size_t max_gadget_len = 15;
    std::set<std::string> privileged = default_privileged_mnemonics();
    std::vector<std::pair<Category, std::vector<std::string>>> category_overrides{};

    std::vector<Reg> arg_registers = default_arg_registers();
    PreservationMode preservation = PreservationMode::Relaxed;
    bool unique_only = false;

    std::int64_t q_threshold_halves = 2; // score <= 1.0
    std::int64_t sps_limit = 4096;       // bytes
    std::int64_t sps_alignment = 8;      // bytes

    CategoryTable make_category_table() const {
        CategoryTable t = CategoryTable::defaults();
        for (const auto& [cat, mnemonics] : category_overrides) {
            t.assign(cat, mnemonics);
        }
        return t;
    }

    double q_threshold() const { return static_cast<double>(q_threshold_halves) / 2.0; }

    std::string fingerprint() const;

    friend bool operator==(const Config&, const Config&) = default;
};

namespace detail {

inline std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    while (!s.empty()) {
        auto comma = s.find(',');
        std::string_view item = trim(s.substr(0, comma));
        if (!item.empty()) out.emplace_back(item);
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

} // namespace detail

inline std::string Config::fingerprint() const {
    std::ostringstream os;
    os << "v1;maxlen=" << max_gadget_len
       << ";mode=" << (preservation == PreservationMode::Strict ? "strict" : "relaxed")
       << ";unique=" << (unique_only ? 1 : 0)
       << ";qthr=" << q_threshold_halves
       << ";spslim=" << sps_limit
       << ";spsalign=" << sps_alignment
       << ";args=";
    for (Reg r : arg_registers) os << register_name(r) << ',';
    os << ";priv=";
    for (const auto& m : privileged) os << m << ',';
    os << ";cats=";
    for (const auto& [cat, mnemonics] : category_overrides) {
        os << category_key(cat) << ':';
        for (const auto& m : mnemonics) os << m << ',';
        os << ';';
    }
    std::uint64_t h = detail::fnv1a(os.str());
    char buf[17];
    snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// Override file: one `key = value` per line, `#` comments.
//   category.<name> = mnemonic[,mnemonic...]   reassigns mnemonics
//   privileged = mnemonic[,...]                replaces the default list
//   arg_registers = reg[,...]                  replaces {rcx,rdx,r8,r9}
//   max_gadget_len / sps_limit / sps_alignment / q_threshold = <number>
inline void load_config(std::istream& in, Config& config) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view s = detail::trim(line);
        if (s.empty() || s.front() == '#') continue;
        auto eq = s.find('=');
        auto fail = [&](std::string_view why) {
            throw ConfigError("config line " + std::to_string(line_no) + ": " + std::string(why));
        };
        if (eq == std::string_view::npos) fail("expected key = value");
        std::string key{detail::trim(s.substr(0, eq))};
        std::string_view value = detail::trim(s.substr(eq + 1));

        if (key.starts_with("category.")) {
            auto cat = parse_category_key(std::string_view(key).substr(9));
            if (!cat || *cat == Category::Uncategorized) fail("unknown category name");
            config.category_overrides.emplace_back(*cat, detail::split_list(value));
        } else if (key == "privileged") {
            auto items = detail::split_list(value);
            config.privileged = std::set<std::string>(items.begin(), items.end());
        } else if (key == "arg_registers") {
            std::vector<Reg> regs;
            for (const auto& name : detail::split_list(value)) {
                auto r = parse_canonical_reg(name);
                if (!r) fail("unknown register: " + name);
                regs.push_back(*r);
            }
            if (regs.empty()) fail("arg_registers must not be empty");
            config.arg_registers = std::move(regs);
        } else if (key == "max_gadget_len" || key == "sps_limit" || key == "sps_alignment" ||
                   key == "q_threshold") {
            try {
                if (key == "q_threshold") {
                    double halves = std::stod(std::string(value)) * 2.0;
                    if (halves < 0 || halves != static_cast<double>(static_cast<std::int64_t>(halves))) {
                        fail("q_threshold must be a non-negative multiple of 0.5");
                    }
                    config.q_threshold_halves = static_cast<std::int64_t>(halves);
                } else {
                    std::int64_t v = std::stoll(std::string(value));
                    if (key == "max_gadget_len") {
                        if (v <= 0) fail("max_gadget_len must be positive");
                        config.max_gadget_len = static_cast<std::size_t>(v);
                    } else if (key == "sps_limit") {
                        config.sps_limit = v;
                    } else {
                        if (v <= 0) fail("sps_alignment must be positive");
                        config.sps_alignment = v;
                    }
                }
            } catch (const ConfigError&) {
                throw;
            } catch (const std::exception&) {
                fail("not a number: " + std::string(value));
            }
        } else {
            fail("unknown key: " + key);
        }
    }
}

} // namespace ropscore
