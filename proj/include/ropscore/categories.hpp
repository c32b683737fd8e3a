#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>

#include "ropscore/instruction.hpp"

namespace ropscore {

// Broad operation classes used to bucket gadgets by their first
// instruction and to weight side-effects when grading.
enum class Category : std::uint8_t {
    DataMove,
    Arithmetic,
    Logic,
    ControlFlow,
    ShiftRotate,
    SettingFlags,
    String,
    FloatingPoint,
    Misc,
    Mmx,
    Nop,
    Ret,
    Uncategorized,
};

inline constexpr std::size_t kCategoryCount = 12; // excluding Uncategorized

inline constexpr std::array<Category, kCategoryCount> kAllCategories{
    Category::DataMove,    Category::Arithmetic, Category::Logic,
    Category::ControlFlow, Category::ShiftRotate, Category::SettingFlags,
    Category::String,      Category::FloatingPoint, Category::Misc,
    Category::Mmx,         Category::Nop,        Category::Ret,
};

inline std::string_view category_key(Category c) {
    switch (c) {
        case Category::DataMove: return "data_move";
        case Category::Arithmetic: return "arithmetic";
        case Category::Logic: return "logic";
        case Category::ControlFlow: return "control_flow";
        case Category::ShiftRotate: return "shift_rotate";
        case Category::SettingFlags: return "setting_flags";
        case Category::String: return "string";
        case Category::FloatingPoint: return "floating_point";
        case Category::Misc: return "misc";
        case Category::Mmx: return "mmx";
        case Category::Nop: return "nop";
        case Category::Ret: return "ret";
        case Category::Uncategorized: return "uncategorized";
    }
    return "uncategorized";
}

inline std::string_view category_display_name(Category c) {
    switch (c) {
        case Category::DataMove: return "Data move";
        case Category::Arithmetic: return "Arithmetic";
        case Category::Logic: return "Logic";
        case Category::ControlFlow: return "Control flow";
        case Category::ShiftRotate: return "Shift & rotate";
        case Category::SettingFlags: return "Setting flags";
        case Category::String: return "String";
        case Category::FloatingPoint: return "Floating point";
        case Category::Misc: return "Misc";
        case Category::Mmx: return "MMX";
        case Category::Nop: return "NOP";
        case Category::Ret: return "RET";
        case Category::Uncategorized: return "Uncategorized";
    }
    return "Uncategorized";
}

inline std::optional<Category> parse_category_key(std::string_view key) {
    for (Category c : kAllCategories) {
        if (category_key(c) == key) return c;
    }
    if (key == "uncategorized") return Category::Uncategorized;
    return std::nullopt;
}

struct CategoryEntry {
    std::string_view mnemonic;
    Category category;
};

// Default mnemonic classification. xor/neg/not sit under Arithmetic:
// exploit code uses them to synthesize values that cannot be written
// directly (null-byte avoidance), not for bit logic.
inline constexpr std::array<CategoryEntry, 117> kDefaultCategoryEntries{{
    {"pop", Category::DataMove},     {"push", Category::DataMove},
    {"mov", Category::DataMove},     {"xchg", Category::DataMove},
    {"lea", Category::DataMove},     {"cmov", Category::DataMove},
    {"movabs", Category::DataMove},

    {"add", Category::Arithmetic},   {"sub", Category::Arithmetic},
    {"inc", Category::Arithmetic},   {"dec", Category::Arithmetic},
    {"sbb", Category::Arithmetic},   {"adc", Category::Arithmetic},
    {"mul", Category::Arithmetic},   {"div", Category::Arithmetic},
    {"imul", Category::Arithmetic},  {"idiv", Category::Arithmetic},
    {"xor", Category::Arithmetic},   {"neg", Category::Arithmetic},
    {"not", Category::Arithmetic},

    {"cmp", Category::Logic},        {"and", Category::Logic},
    {"or", Category::Logic},         {"test", Category::Logic},

    {"call", Category::ControlFlow}, {"sysenter", Category::ControlFlow},
    {"enter", Category::ControlFlow}, {"int", Category::ControlFlow},
    {"jmp", Category::ControlFlow},  {"je", Category::ControlFlow},
    {"jne", Category::ControlFlow},  {"jo", Category::ControlFlow},
    {"jp", Category::ControlFlow},   {"js", Category::ControlFlow},
    {"lcall", Category::ControlFlow}, {"ljmp", Category::ControlFlow},
    {"jg", Category::ControlFlow},   {"jge", Category::ControlFlow},
    {"ja", Category::ControlFlow},   {"jae", Category::ControlFlow},
    {"jb", Category::ControlFlow},   {"jbe", Category::ControlFlow},
    {"jl", Category::ControlFlow},   {"jle", Category::ControlFlow},
    {"jno", Category::ControlFlow},  {"jnp", Category::ControlFlow},
    {"jns", Category::ControlFlow},  {"loop", Category::ControlFlow},
    {"jrcxz", Category::ControlFlow},

    {"shl", Category::ShiftRotate},  {"shr", Category::ShiftRotate},
    {"sar", Category::ShiftRotate},  {"sal", Category::ShiftRotate},
    {"ror", Category::ShiftRotate},  {"rol", Category::ShiftRotate},
    {"rcr", Category::ShiftRotate},  {"rcl", Category::ShiftRotate},

    {"xlatb", Category::SettingFlags}, {"std", Category::SettingFlags},
    {"stc", Category::SettingFlags},  {"lahf", Category::SettingFlags},
    {"cwde", Category::SettingFlags}, {"cmc", Category::SettingFlags},
    {"cld", Category::SettingFlags},  {"clc", Category::SettingFlags},
    {"cdq", Category::SettingFlags},

    {"stosd", Category::String},     {"stosb", Category::String},
    {"scas", Category::String},      {"salc", Category::String},
    {"sahf", Category::String},      {"lods", Category::String},
    {"movs", Category::String},

    {"divps", Category::FloatingPoint}, {"mulps", Category::FloatingPoint},
    {"movups", Category::FloatingPoint}, {"movaps", Category::FloatingPoint},
    {"addps", Category::FloatingPoint}, {"rcpss", Category::FloatingPoint},
    {"sqrtss", Category::FloatingPoint}, {"maxps", Category::FloatingPoint},
    {"minps", Category::FloatingPoint}, {"andps", Category::FloatingPoint},
    {"orps", Category::FloatingPoint}, {"xorps", Category::FloatingPoint},
    {"cmpps", Category::FloatingPoint}, {"vsubpd", Category::FloatingPoint},
    {"vpsubsb", Category::FloatingPoint}, {"vmulss", Category::FloatingPoint},
    {"vminsd", Category::FloatingPoint}, {"ucomiss", Category::FloatingPoint},
    {"subss", Category::FloatingPoint}, {"subps", Category::FloatingPoint},
    {"subsd", Category::FloatingPoint}, {"divss", Category::FloatingPoint},
    {"addss", Category::FloatingPoint}, {"addsd", Category::FloatingPoint},
    {"cvtpi2ps", Category::FloatingPoint}, {"cvtps2pd", Category::FloatingPoint},
    {"cvtsd2ss", Category::FloatingPoint}, {"cvtsi2sd", Category::FloatingPoint},
    {"cvtsi2ss", Category::FloatingPoint}, {"cvtss2sd", Category::FloatingPoint},
    {"mulsd", Category::FloatingPoint}, {"mulss", Category::FloatingPoint},
    {"fmul", Category::FloatingPoint}, {"fdiv", Category::FloatingPoint},
    {"fcomp", Category::FloatingPoint}, {"fadd", Category::FloatingPoint},

    {"wait", Category::Misc},        {"set", Category::Misc},
    {"leave", Category::Misc},

    {"pxor", Category::Mmx},         {"movd", Category::Mmx},
    {"movq", Category::Mmx},

    {"nop", Category::Nop},

    {"ret", Category::Ret},
}};

namespace detail {

struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
        return std::hash<std::string_view>{}(s);
    }
    std::size_t operator()(const std::string& s) const noexcept {
        return std::hash<std::string_view>{}(s);
    }
};

} // namespace detail

using MnemonicMap = std::unordered_map<std::string, Category, detail::StringHash, std::equal_to<>>;

// Mnemonic -> category lookup: exact match first, then the three family
// rules (cmov*, set*, j*), everything else Uncategorized.
class CategoryTable {
public:
    static CategoryTable defaults() {
        CategoryTable t;
        for (const auto& e : kDefaultCategoryEntries) {
            t.map_.emplace(std::string(e.mnemonic), e.category);
        }
        return t;
    }

    // Reassigns the given mnemonics to `cat`, on top of the current map.
    void assign(Category cat, std::span<const std::string> mnemonics) {
        for (const auto& m : mnemonics) {
            map_[m] = cat;
        }
    }

    Category categorize(std::string_view mnemonic) const {
        if (auto it = map_.find(mnemonic); it != map_.end()) return it->second;
        if (mnemonic.starts_with("cmov")) return Category::DataMove;
        if (mnemonic.starts_with("set")) return Category::Misc;
        if (!mnemonic.empty() && mnemonic.front() == 'j') return Category::ControlFlow;
        return Category::Uncategorized;
    }

    Category categorize(const Instruction& insn) const { return categorize(insn.mnemonic); }

    const MnemonicMap& entries() const { return map_; }

private:
    MnemonicMap map_;
};

} // namespace ropscore
