#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ropscore/config.hpp"
#include "ropscore/effects.hpp"
#include "ropscore/parse.hpp"

namespace ropscore {

// True when no instruction after the first destroys rd's value.
//
// Relaxed follows the argument-loading refinement: only pop and mov
// (incl. movabs) into rd at 64/32-bit width destroy; a 32-bit write
// destroys through zero-extension, 16/8-bit writes leave enough intact.
// Strict additionally treats any data-move/arithmetic/shift-rotate write
// to rd at 64/32-bit width as destructive. xchg on rd at 64/32-bit width
// is a full swap and destroys under both modes.
inline bool preserves_rd(const Gadget& gadget, RegisterRef rd, PreservationMode mode,
                         const CategoryTable& table) {
    const Reg target = rd.reg;
    auto destroys_width = [](Width w) { return w == Width::W64 || w == Width::W32; };

    for (std::size_t i = 1; i < gadget.instructions.size(); ++i) {
        const Instruction& insn = gadget.instructions[i];
        const std::string& m = insn.mnemonic;

        if (m == "xchg" && insn.operands.size() == 2) {
            for (std::size_t k = 0; k < 2; ++k) {
                const RegisterRef* r = detail::reg_operand(insn, k);
                if (r && r->reg == target && destroys_width(r->width)) return false;
            }
            continue;
        }
        if (m == "pop" || m == "mov" || m == "movabs") {
            const RegisterRef* r = detail::reg_operand(insn, 0);
            if (r && r->reg == target && destroys_width(r->width)) return false;
        }
        if (mode == PreservationMode::Strict) {
            Category cat = table.categorize(insn);
            if (cat == Category::DataMove || cat == Category::Arithmetic ||
                cat == Category::ShiftRotate) {
                for (const RegisterRef& r : detail::written_registers(insn)) {
                    if (r.reg == target && destroys_width(r.width)) return false;
                }
            }
        }
    }
    return true;
}

struct PairCount {
    std::uint64_t clean{0};
    std::uint64_t side_effect{0};

    std::uint64_t sum() const { return clean + side_effect; }

    friend bool operator==(const PairCount&, const PairCount&) = default;
};

struct PivotFormCounts {
    std::uint64_t xchg_rsp{0};
    std::uint64_t mov_rsp_reg{0};
    std::uint64_t arith_rsp_reg{0};
    std::uint64_t pop_rsp{0};
    std::uint64_t leave{0};

    friend bool operator==(const PivotFormCounts&, const PivotFormCounts&) = default;
};

struct EnvSetupReport {
    // One entry per configured argument register, in config order.
    std::vector<std::pair<Reg, PairCount>> arg_loads;
    PairCount pivots;
    PivotFormCounts pivot_forms;
    std::uint64_t call_gadgets{0};

    friend bool operator==(const EnvSetupReport&, const EnvSetupReport&) = default;
};

namespace detail {

// pop R / mov R, imm|reg|mem / movabs R, ... with R one of the argument
// registers at a width that overwrites the full register.
inline std::optional<Reg> loader_target(const Instruction& first, const std::vector<Reg>& arg_registers) {
    const std::string& m = first.mnemonic;
    const RegisterRef* r0 = reg_operand(first, 0);
    if (!r0) return std::nullopt;
    bool found = false;
    for (Reg r : arg_registers) {
        if (r0->reg == r) found = true;
    }
    if (!found) return std::nullopt;
    if (m == "pop") {
        if (first.operands.size() == 1 && r0->width == Width::W64) return r0->reg;
        return std::nullopt;
    }
    if (m == "mov" || m == "movabs") {
        if (first.operands.size() != 2) return std::nullopt;
        if (r0->width != Width::W64 && r0->width != Width::W32) return std::nullopt;
        const Operand& src = first.operands[1];
        if (std::holds_alternative<Immediate>(src) || std::holds_alternative<RegisterRef>(src) ||
            std::holds_alternative<MemoryOperand>(src)) {
            return r0->reg;
        }
    }
    return std::nullopt;
}

enum class PivotForm { XchgRsp, MovRspReg, ArithRspReg, PopRsp, Leave };

// First-instruction forms that retarget rsp wholesale. ret n only
// advances the stack pointer and is not a pivot.
inline std::optional<PivotForm> pivot_form(const Instruction& first) {
    const std::string& m = first.mnemonic;
    auto is_rsp_full = [](const RegisterRef* r) {
        return r && r->reg == Reg::Rsp && (r->width == Width::W64 || r->width == Width::W32);
    };
    const RegisterRef* r0 = reg_operand(first, 0);
    const RegisterRef* r1 = reg_operand(first, 1);
    if (m == "xchg" && first.operands.size() == 2) {
        if ((is_rsp_full(r0) && r1) || (is_rsp_full(r1) && r0)) return PivotForm::XchgRsp;
        return std::nullopt;
    }
    if (m == "mov" && first.operands.size() == 2 && is_rsp_full(r0) && r1) {
        return PivotForm::MovRspReg;
    }
    if ((m == "add" || m == "sub") && first.operands.size() == 2 && is_rsp_full(r0) && r1) {
        return PivotForm::ArithRspReg;
    }
    if (m == "pop" && first.operands.size() == 1 && r0 && r0->reg == Reg::Rsp &&
        r0->width == Width::W64) {
        return PivotForm::PopRsp;
    }
    if (m == "leave") return PivotForm::Leave;
    return std::nullopt;
}

inline bool bare_gadget(const Gadget& g) {
    return g.instructions.size() == 2 && g.terminator == TerminatorKind::Ret && g.ret_adjust == 0;
}

} // namespace detail

// Metric: argument-register loaders, stack pivots, and call gadgets for
// the register-calling-convention API-call scenario. A gadget is clean
// when it consists of exactly the working instruction plus a plain ret.
inline EnvSetupReport metric2_env_setup(const Corpus& corpus, const Config& config,
                                        const CategoryTable& table) {
    EnvSetupReport report;
    report.arg_loads.reserve(config.arg_registers.size());
    for (Reg r : config.arg_registers) report.arg_loads.emplace_back(r, PairCount{});

    for (const Gadget& g : corpus.gadgets) {
        if (g.terminator == TerminatorKind::IndirectCall || g.terminator == TerminatorKind::IndirectJmp) {
            ++report.call_gadgets;
        }
        const Instruction& first = g.first();
        if (auto target = detail::loader_target(first, config.arg_registers)) {
            if (preserves_rd(g, canonical64(*target), config.preservation, table)) {
                for (auto& [reg, counts] : report.arg_loads) {
                    if (reg == *target) {
                        ++(detail::bare_gadget(g) ? counts.clean : counts.side_effect);
                        break;
                    }
                }
            }
        } else if (auto form = detail::pivot_form(first)) {
            ++(detail::bare_gadget(g) ? report.pivots.clean : report.pivots.side_effect);
            switch (*form) {
                case detail::PivotForm::XchgRsp: ++report.pivot_forms.xchg_rsp; break;
                case detail::PivotForm::MovRspReg: ++report.pivot_forms.mov_rsp_reg; break;
                case detail::PivotForm::ArithRspReg: ++report.pivot_forms.arith_rsp_reg; break;
                case detail::PivotForm::PopRsp: ++report.pivot_forms.pop_rsp; break;
                case detail::PivotForm::Leave: ++report.pivot_forms.leave; break;
            }
        }
    }
    return report;
}

struct UsefulReport {
    std::uint64_t useful_count{0};
    std::vector<std::uint32_t> useful_indices; // into Corpus::gadgets

    friend bool operator==(const UsefulReport&, const UsefulReport&) = default;
};

inline bool is_useful_mnemonic(std::string_view m) {
    return m == "pop" || m == "push" || m == "add" || m == "sub" || m == "adc" || m == "dec" ||
           m == "inc" || m == "neg" || m == "not" || m == "mov" || m == "sbb" || m == "xchg" ||
           m == "xor";
}

// Metric: gadgets that move data or compute values for the restricted
// injection scenario. Gadgets whose first instruction writes no register
// (push, memory destinations) qualify on mnemonic alone.
inline UsefulReport metric3_useful(const Corpus& corpus, const Config& config,
                                   const CategoryTable& table) {
    UsefulReport report;
    for (std::size_t i = 0; i < corpus.gadgets.size(); ++i) {
        const Gadget& g = corpus.gadgets[i];
        if (!is_useful_mnemonic(g.first().mnemonic)) continue;
        bool preserved = true;
        for (const RegisterRef& rd : active_registers(g.first())) {
            if (!preserves_rd(g, rd, config.preservation, table)) {
                preserved = false;
                break;
            }
        }
        if (!preserved) continue;
        ++report.useful_count;
        report.useful_indices.push_back(static_cast<std::uint32_t>(i));
    }
    return report;
}

} // namespace ropscore
