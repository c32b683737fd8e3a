#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ropscore/registers.hpp"

namespace ropscore {

struct Immediate {
    std::int64_t value{};

    friend bool operator==(const Immediate&, const Immediate&) = default;
};

// [base + index*scale + disp], any component optional. rip-relative
// addressing is kept as a pseudo-base flag; rip is never a GPR here.
struct MemoryOperand {
    std::optional<RegisterRef> base{};
    std::optional<RegisterRef> index{};
    std::uint8_t scale{1};
    std::int64_t displacement{0};
    bool rip_relative{false};

    friend bool operator==(const MemoryOperand&, const MemoryOperand&) = default;
};

// Non-GPR register token (xmm0, mm1, st(0), fs, ...). Kept verbatim so
// vector/x87 instructions stay parseable and render back unchanged; the
// metrics treat these as inert.
struct SymbolicRegister {
    std::string name;

    friend bool operator==(const SymbolicRegister&, const SymbolicRegister&) = default;
};

using Operand = std::variant<RegisterRef, Immediate, MemoryOperand, SymbolicRegister>;

struct Instruction {
    std::string mnemonic; // lowercase, prefix tokens already folded away
    std::vector<Operand> operands;

    friend bool operator==(const Instruction&, const Instruction&) = default;
};

enum class TerminatorKind : std::uint8_t {
    Ret,
    IndirectCall,
    IndirectJmp,
};

// One entry of a gadget dump: address plus the instruction sequence,
// whose last element is the terminator.
struct Gadget {
    std::uint64_t address{0};
    std::vector<Instruction> instructions;
    TerminatorKind terminator{TerminatorKind::Ret};
    std::uint64_t ret_adjust{0}; // n of "ret n"; 0 for plain ret and call/jmp

    const Instruction& first() const { return instructions.front(); }

    friend bool operator==(const Gadget&, const Gadget&) = default;
};

namespace detail {

inline void append_hex_magnitude(std::string& out, std::uint64_t mag) {
    out += "0x";
    char buf[17];
    int i = 16;
    buf[16] = '\0';
    do {
        buf[--i] = "0123456789abcdef"[mag & 0xf];
        mag >>= 4;
    } while (mag != 0);
    out += &buf[i];
}

inline std::uint64_t magnitude(std::int64_t value) {
    auto bits = static_cast<std::uint64_t>(value);
    return value < 0 ? ~bits + 1 : bits;
}

inline void append_hex(std::string& out, std::int64_t value) {
    if (value < 0) out += '-';
    append_hex_magnitude(out, magnitude(value));
}

} // namespace detail

inline std::string to_string(const MemoryOperand& m) {
    std::string out = "[";
    bool have_term = false;
    if (m.rip_relative) {
        out += "rip";
        have_term = true;
    } else if (m.base) {
        out += register_name(*m.base);
        have_term = true;
    }
    if (m.index) {
        if (have_term) out += " + ";
        out += register_name(*m.index);
        if (m.scale != 1) {
            out += '*';
            out += static_cast<char>('0' + m.scale);
        }
        have_term = true;
    }
    if (m.displacement != 0 || !have_term) {
        if (have_term) {
            out += m.displacement < 0 ? " - " : " + ";
            detail::append_hex_magnitude(out, detail::magnitude(m.displacement));
        } else {
            detail::append_hex(out, m.displacement);
        }
    }
    out += ']';
    return out;
}

inline std::string to_string(const Operand& op) {
    struct Visitor {
        std::string operator()(const RegisterRef& r) const { return std::string(register_name(r)); }
        std::string operator()(const Immediate& imm) const {
            std::string out;
            detail::append_hex(out, imm.value);
            return out;
        }
        std::string operator()(const MemoryOperand& m) const { return to_string(m); }
        std::string operator()(const SymbolicRegister& s) const { return s.name; }
    };
    return std::visit(Visitor{}, op);
}

inline std::string to_string(const Instruction& insn) {
    std::string out = insn.mnemonic;
    for (std::size_t i = 0; i < insn.operands.size(); ++i) {
        out += i == 0 ? " " : ", ";
        out += to_string(insn.operands[i]);
    }
    return out;
}

// Canonical gadget text, address excluded. Also the duplicate/unique key.
inline std::string render_gadget(const Gadget& g) {
    std::string out;
    for (std::size_t i = 0; i < g.instructions.size(); ++i) {
        if (i != 0) out += " ; ";
        out += to_string(g.instructions[i]);
    }
    return out;
}

} // namespace ropscore
