#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "ropscore/categories.hpp"
#include "ropscore/instruction.hpp"

namespace ropscore {

enum class EffectKind : std::uint8_t {
    FullOverwrite,
    ZeroExtendingOverwrite, // 32-bit destination clears the upper half
    PartialWrite,           // 16/8-bit destination leaves the rest intact
    ArithmeticModify,
    ShiftRotateModify,
    ExchangeSwap,
    StackPointerChange,
};

// One written location. reg == nullopt means the destination is a memory
// dereference. StackPointerChange with sp_delta == nullopt is a change
// whose offset cannot be determined statically.
struct WriteEffect {
    EffectKind kind{};
    std::optional<RegisterRef> reg{};
    std::optional<std::int64_t> sp_delta{};

    bool memory_target() const { return !reg.has_value(); }

    friend bool operator==(const WriteEffect&, const WriteEffect&) = default;
};

inline EffectKind overwrite_kind(Width w) {
    switch (w) {
        case Width::W64: return EffectKind::FullOverwrite;
        case Width::W32: return EffectKind::ZeroExtendingOverwrite;
        default: return EffectKind::PartialWrite;
    }
}

namespace detail {

inline bool is_overwriting_mnemonic(std::string_view m) {
    return m == "pop" || m == "mov" || m == "movabs" || m == "lea" || m.starts_with("cmov");
}

inline bool is_arith_mnemonic(std::string_view m) {
    return m == "add" || m == "sub" || m == "adc" || m == "sbb" || m == "inc" || m == "dec" ||
           m == "neg" || m == "not" || m == "xor";
}

inline bool is_muldiv_mnemonic(std::string_view m) {
    return m == "mul" || m == "imul" || m == "div" || m == "idiv";
}

inline bool is_shift_mnemonic(std::string_view m) {
    return m == "shl" || m == "shr" || m == "sar" || m == "sal" || m == "ror" || m == "rol" ||
           m == "rcr" || m == "rcl";
}

inline const RegisterRef* reg_operand(const Instruction& insn, std::size_t i) {
    if (i >= insn.operands.size()) return nullptr;
    return std::get_if<RegisterRef>(&insn.operands[i]);
}

inline const MemoryOperand* mem_operand(const Instruction& insn, std::size_t i) {
    if (i >= insn.operands.size()) return nullptr;
    return std::get_if<MemoryOperand>(&insn.operands[i]);
}

inline const Immediate* imm_operand(const Instruction& insn, std::size_t i) {
    if (i >= insn.operands.size()) return nullptr;
    return std::get_if<Immediate>(&insn.operands[i]);
}

inline bool is_rsp64(const RegisterRef* r) {
    return r != nullptr && r->reg == Reg::Rsp && r->width == Width::W64;
}

inline std::int64_t negate_wrapping(std::int64_t v) {
    return static_cast<std::int64_t>(~static_cast<std::uint64_t>(v) + 1);
}

// Register destinations the effect model attributes to an instruction,
// at operand width. Used for preservation checks and active registers.
inline std::vector<RegisterRef> written_registers(const Instruction& insn) {
    std::string_view m = insn.mnemonic;
    std::vector<RegisterRef> out;
    const RegisterRef* r0 = reg_operand(insn, 0);
    if (m == "xchg" && insn.operands.size() == 2) {
        for (std::size_t i = 0; i < 2; ++i) {
            if (const RegisterRef* r = reg_operand(insn, i)) out.push_back(*r);
        }
        return out;
    }
    if (is_muldiv_mnemonic(m)) {
        if (m == "imul" && insn.operands.size() >= 2) {
            if (r0) out.push_back(*r0);
        } else if (insn.operands.size() == 1) {
            Width w = r0 ? r0->width : Width::W64;
            out.push_back({Reg::Rax, w});
            out.push_back({Reg::Rdx, w});
        }
        return out;
    }
    if (is_overwriting_mnemonic(m) || is_arith_mnemonic(m) || is_shift_mnemonic(m)) {
        if (r0) out.push_back(*r0);
    }
    return out;
}

// Table-free effect computation; mnemonics outside the modeled families
// yield no effects (flag writes and exotic semantics are out of scope).
inline std::vector<WriteEffect> raw_write_effects(const Instruction& insn) {
    std::string_view m = insn.mnemonic;
    std::vector<WriteEffect> out;
    const RegisterRef* r0 = reg_operand(insn, 0);
    const MemoryOperand* m0 = mem_operand(insn, 0);

    if (m == "pop") {
        if (insn.operands.size() != 1) return out;
        if (r0) out.push_back({overwrite_kind(r0->width), *r0});
        else if (m0) out.push_back({EffectKind::FullOverwrite, std::nullopt});
        else return out;
        out.push_back({EffectKind::StackPointerChange, canonical64(Reg::Rsp), 8});
        return out;
    }
    if (m == "push") {
        if (insn.operands.size() == 1) {
            out.push_back({EffectKind::StackPointerChange, canonical64(Reg::Rsp), -8});
        }
        return out;
    }
    if (m == "mov" || m == "movabs" || m == "lea" || m.starts_with("cmov")) {
        if (insn.operands.size() == 2) {
            if (r0) out.push_back({overwrite_kind(r0->width), *r0});
            else if (m0) out.push_back({EffectKind::FullOverwrite, std::nullopt});
        }
        return out;
    }
    if (m == "xchg") {
        if (insn.operands.size() == 2) {
            for (std::size_t i = 0; i < 2; ++i) {
                if (const RegisterRef* r = reg_operand(insn, i)) {
                    out.push_back({EffectKind::ExchangeSwap, *r});
                } else if (mem_operand(insn, i)) {
                    out.push_back({EffectKind::ExchangeSwap, std::nullopt});
                }
            }
        }
        return out;
    }
    if (is_arith_mnemonic(m)) {
        bool unary = m == "inc" || m == "dec" || m == "neg" || m == "not";
        if (insn.operands.size() != (unary ? 1u : 2u)) return out;
        if (is_rsp64(r0)) {
            const Immediate* imm = imm_operand(insn, 1);
            if ((m == "add" || m == "sub") && imm) {
                std::int64_t delta = m == "add" ? imm->value : negate_wrapping(imm->value);
                out.push_back({EffectKind::StackPointerChange, canonical64(Reg::Rsp), delta});
            } else if (m == "inc" || m == "dec") {
                out.push_back({EffectKind::StackPointerChange, canonical64(Reg::Rsp),
                               m == "inc" ? 1 : -1});
            } else {
                out.push_back({EffectKind::StackPointerChange, canonical64(Reg::Rsp), std::nullopt});
            }
        } else if (r0) {
            out.push_back({EffectKind::ArithmeticModify, *r0});
        } else if (m0) {
            out.push_back({EffectKind::ArithmeticModify, std::nullopt});
        }
        return out;
    }
    if (is_muldiv_mnemonic(m)) {
        if (m == "imul" && insn.operands.size() >= 2) {
            if (is_rsp64(r0)) {
                out.push_back({EffectKind::StackPointerChange, canonical64(Reg::Rsp), std::nullopt});
            } else if (r0) {
                out.push_back({EffectKind::ArithmeticModify, *r0});
            }
        } else if (insn.operands.size() == 1) {
            Width w = r0 ? r0->width : Width::W64;
            out.push_back({EffectKind::ArithmeticModify, RegisterRef{Reg::Rax, w}});
            out.push_back({EffectKind::ArithmeticModify, RegisterRef{Reg::Rdx, w}});
        }
        return out;
    }
    if (is_shift_mnemonic(m)) {
        if (insn.operands.empty()) return out;
        if (is_rsp64(r0)) {
            out.push_back({EffectKind::StackPointerChange, canonical64(Reg::Rsp), std::nullopt});
        } else if (r0) {
            out.push_back({EffectKind::ShiftRotateModify, *r0});
        } else if (m0) {
            out.push_back({EffectKind::ShiftRotateModify, std::nullopt});
        }
        return out;
    }
    if (m == "leave") {
        // rsp <- rbp (statically unknown target), rbp <- popped value
        out.push_back({EffectKind::FullOverwrite, canonical64(Reg::Rsp)});
        out.push_back({EffectKind::FullOverwrite, canonical64(Reg::Rbp)});
        return out;
    }
    if (m == "ret") {
        std::int64_t delta = 0;
        if (const Immediate* imm = imm_operand(insn, 0); imm && insn.operands.size() == 1) {
            delta = negate_wrapping(imm->value);
        }
        out.push_back({EffectKind::StackPointerChange, canonical64(Reg::Rsp), delta});
        return out;
    }
    if (m == "call") {
        out.push_back({EffectKind::StackPointerChange, canonical64(Reg::Rsp), -8});
        return out;
    }
    return out;
}

} // namespace detail

// Locations an instruction writes, with effect kinds. nullopt when the
// mnemonic is not in the category table at all, so callers can decide
// whether unknown semantics are fatal for their metric.
inline std::optional<std::vector<WriteEffect>> write_effects(const Instruction& insn,
                                                             const CategoryTable& table) {
    if (table.categorize(insn) == Category::Uncategorized) return std::nullopt;
    return detail::raw_write_effects(insn);
}

// Destination register(s) of a gadget's first instruction, canonicalized.
// Empty when the destination is memory or the instruction writes no GPR.
inline std::vector<RegisterRef> active_registers(const Instruction& first_insn) {
    std::vector<RegisterRef> out;
    for (const RegisterRef& r : detail::written_registers(first_insn)) {
        RegisterRef c = canonical64(r);
        if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
    return out;
}

} // namespace ropscore
