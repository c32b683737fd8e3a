#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string_view>

namespace ropscore {

// The 16 x86-64 general-purpose registers, by canonical 64-bit name.
enum class Reg : std::uint8_t {
    Rax, Rbx, Rcx, Rdx, Rsi, Rdi, Rbp, Rsp,
    R8, R9, R10, R11, R12, R13, R14, R15,
};

inline constexpr std::size_t kRegCount = 16;

enum class Width : std::uint8_t {
    W64,
    W32,
    W16,
    W8Lo,
    W8Hi, // ah/bh/ch/dh only
};

// A named view of a general-purpose register: canonical register plus
// the access width the alias denotes (eax -> {Rax, W32}).
struct RegisterRef {
    Reg reg{};
    Width width{Width::W64};

    friend bool operator==(const RegisterRef&, const RegisterRef&) = default;
    friend auto operator<=>(const RegisterRef&, const RegisterRef&) = default;
};

constexpr RegisterRef canonical64(Reg r) { return {r, Width::W64}; }
constexpr RegisterRef canonical64(RegisterRef r) { return {r.reg, Width::W64}; }

// ah/bh/ch/dh exist only for the legacy rax..rdx lineages.
constexpr bool has_high_byte(Reg r) {
    return r == Reg::Rax || r == Reg::Rbx || r == Reg::Rcx || r == Reg::Rdx;
}

struct RegisterAlias {
    std::string_view name;
    RegisterRef ref;
};

// Recognized alias table. One spelling per (canonical, width) pair.
inline constexpr std::array<RegisterAlias, 68> kRegisterAliases{{
    {"rax", {Reg::Rax, Width::W64}}, {"eax", {Reg::Rax, Width::W32}},
    {"ax", {Reg::Rax, Width::W16}},  {"al", {Reg::Rax, Width::W8Lo}},
    {"ah", {Reg::Rax, Width::W8Hi}},

    {"rbx", {Reg::Rbx, Width::W64}}, {"ebx", {Reg::Rbx, Width::W32}},
    {"bx", {Reg::Rbx, Width::W16}},  {"bl", {Reg::Rbx, Width::W8Lo}},
    {"bh", {Reg::Rbx, Width::W8Hi}},

    {"rcx", {Reg::Rcx, Width::W64}}, {"ecx", {Reg::Rcx, Width::W32}},
    {"cx", {Reg::Rcx, Width::W16}},  {"cl", {Reg::Rcx, Width::W8Lo}},
    {"ch", {Reg::Rcx, Width::W8Hi}},

    {"rdx", {Reg::Rdx, Width::W64}}, {"edx", {Reg::Rdx, Width::W32}},
    {"dx", {Reg::Rdx, Width::W16}},  {"dl", {Reg::Rdx, Width::W8Lo}},
    {"dh", {Reg::Rdx, Width::W8Hi}},

    {"rsi", {Reg::Rsi, Width::W64}}, {"esi", {Reg::Rsi, Width::W32}},
    {"si", {Reg::Rsi, Width::W16}},  {"sil", {Reg::Rsi, Width::W8Lo}},

    {"rdi", {Reg::Rdi, Width::W64}}, {"edi", {Reg::Rdi, Width::W32}},
    {"di", {Reg::Rdi, Width::W16}},  {"dil", {Reg::Rdi, Width::W8Lo}},

    {"rbp", {Reg::Rbp, Width::W64}}, {"ebp", {Reg::Rbp, Width::W32}},
    {"bp", {Reg::Rbp, Width::W16}},  {"bpl", {Reg::Rbp, Width::W8Lo}},

    {"rsp", {Reg::Rsp, Width::W64}}, {"esp", {Reg::Rsp, Width::W32}},
    {"sp", {Reg::Rsp, Width::W16}},  {"spl", {Reg::Rsp, Width::W8Lo}},

    {"r8", {Reg::R8, Width::W64}},   {"r8d", {Reg::R8, Width::W32}},
    {"r8w", {Reg::R8, Width::W16}},  {"r8b", {Reg::R8, Width::W8Lo}},

    {"r9", {Reg::R9, Width::W64}},   {"r9d", {Reg::R9, Width::W32}},
    {"r9w", {Reg::R9, Width::W16}},  {"r9b", {Reg::R9, Width::W8Lo}},

    {"r10", {Reg::R10, Width::W64}}, {"r10d", {Reg::R10, Width::W32}},
    {"r10w", {Reg::R10, Width::W16}}, {"r10b", {Reg::R10, Width::W8Lo}},

    {"r11", {Reg::R11, Width::W64}}, {"r11d", {Reg::R11, Width::W32}},
    {"r11w", {Reg::R11, Width::W16}}, {"r11b", {Reg::R11, Width::W8Lo}},

    {"r12", {Reg::R12, Width::W64}}, {"r12d", {Reg::R12, Width::W32}},
    {"r12w", {Reg::R12, Width::W16}}, {"r12b", {Reg::R12, Width::W8Lo}},

    {"r13", {Reg::R13, Width::W64}}, {"r13d", {Reg::R13, Width::W32}},
    {"r13w", {Reg::R13, Width::W16}}, {"r13b", {Reg::R13, Width::W8Lo}},

    {"r14", {Reg::R14, Width::W64}}, {"r14d", {Reg::R14, Width::W32}},
    {"r14w", {Reg::R14, Width::W16}}, {"r14b", {Reg::R14, Width::W8Lo}},

    {"r15", {Reg::R15, Width::W64}}, {"r15d", {Reg::R15, Width::W32}},
    {"r15w", {Reg::R15, Width::W16}}, {"r15b", {Reg::R15, Width::W8Lo}},
}};

inline std::optional<RegisterRef> parse_register(std::string_view name) {
    for (const auto& a : kRegisterAliases) {
        if (a.name == name) return a.ref;
    }
    return std::nullopt;
}

// Inverse of parse_register; total over valid (canonical, width) pairs.
inline std::string_view register_name(RegisterRef ref) {
    for (const auto& a : kRegisterAliases) {
        if (a.ref == ref) return a.name;
    }
    return "?";
}

inline std::string_view register_name(Reg r) { return register_name(canonical64(r)); }

inline std::optional<Reg> parse_canonical_reg(std::string_view name) {
    if (auto ref = parse_register(name); ref && ref->width == Width::W64) return ref->reg;
    return std::nullopt;
}

} // namespace ropscore
