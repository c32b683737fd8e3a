#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ropscore/config.hpp"
#include "ropscore/errors.hpp"
#include "ropscore/instruction.hpp"

namespace ropscore {

struct ParseDiagnostic {
    std::size_t line_no{0};
    std::string message;
};

struct ParseStats {
    std::uint64_t accepted{0};
    std::uint64_t discarded_privileged{0};
    std::uint64_t discarded_unparseable{0};
    std::uint64_t skipped_lines{0};

    friend bool operator==(const ParseStats&, const ParseStats&) = default;
};

// Ordered multiset of gadgets; duplicate lines stay distinct entries.
struct Corpus {
    std::vector<Gadget> gadgets;
    std::string source_label;
    ParseStats stats;
    std::vector<ParseDiagnostic> diagnostics;
};

namespace detail {

inline std::string lowercase(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

inline bool parse_int_token(std::string_view tok, std::int64_t& out) {
    bool neg = false;
    if (!tok.empty() && (tok.front() == '-' || tok.front() == '+')) {
        neg = tok.front() == '-';
        tok.remove_prefix(1);
    }
    if (tok.empty()) return false;
    std::uint64_t mag = 0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    std::from_chars_result r{};
    if (tok.starts_with("0x")) {
        if (tok.size() == 2) return false;
        r = std::from_chars(first + 2, last, mag, 16);
    } else {
        r = std::from_chars(first, last, mag, 10);
    }
    if (r.ec != std::errc() || r.ptr != last) return false;
    out = static_cast<std::int64_t>(neg ? ~mag + 1 : mag);
    return true;
}

inline bool is_immediate_token(std::string_view tok) {
    std::int64_t ignored;
    return parse_int_token(tok, ignored);
}

// xmm5, st(2), fs, k1... anything register-shaped that is not a GPR.
inline bool is_symbolic_register_token(std::string_view tok) {
    if (tok.empty() || tok.front() < 'a' || tok.front() > 'z') return false;
    for (char c : tok) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '(' || c == ')' || c == '_';
        if (!ok) return false;
    }
    return true;
}

inline std::string_view next_word(std::string_view& s) {
    s = trim(s);
    std::size_t i = 0;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    std::string_view word = s.substr(0, i);
    s.remove_prefix(i);
    s = trim(s);
    return word;
}

inline bool is_size_keyword(std::string_view w) {
    return w == "byte" || w == "word" || w == "dword" || w == "qword" || w == "tbyte" ||
           w == "fword" || w == "xmmword" || w == "ymmword" || w == "zmmword";
}

inline bool is_segment_name(std::string_view w) {
    return w == "cs" || w == "ds" || w == "es" || w == "fs" || w == "gs" || w == "ss";
}

// "qword ptr fs:[rax + 8]" -> "[rax + 8]"; size and segment carry no
// weight in the metrics and are normalized away.
inline std::string_view strip_operand_decorations(std::string_view tok) {
    std::string_view probe = tok;
    std::string_view w1 = next_word(probe);
    if (is_size_keyword(w1)) {
        std::string_view w2 = next_word(probe);
        if (w2 == "ptr") tok = probe;
    }
    auto colon = tok.find(':');
    if (colon != std::string_view::npos && colon + 1 < tok.size() && tok[colon + 1] == '[' &&
        is_segment_name(trim(tok.substr(0, colon)))) {
        tok = trim(tok.substr(colon + 1));
    }
    return tok;
}

inline bool parse_memory_operand(std::string_view inner, MemoryOperand& mem, std::string& error) {
    inner = trim(inner);
    auto colon = inner.find(':');
    if (colon != std::string_view::npos && is_segment_name(trim(inner.substr(0, colon)))) {
        inner = trim(inner.substr(colon + 1));
    }
    bool saw_term = false;
    while (true) {
        inner = trim(inner);
        if (inner.empty()) break;
        int sign = 1;
        if (saw_term) {
            if (inner.front() != '+' && inner.front() != '-') {
                error = "malformed memory expression";
                return false;
            }
            sign = inner.front() == '-' ? -1 : 1;
            inner = trim(inner.substr(1));
        } else if (inner.front() == '-') {
            sign = -1;
            inner = trim(inner.substr(1));
        }
        std::size_t i = 0;
        while (i < inner.size() && inner[i] != '+' && inner[i] != '-') ++i;
        std::string_view term = trim(inner.substr(0, i));
        inner.remove_prefix(i);
        if (term.empty()) {
            error = "malformed memory expression";
            return false;
        }

        auto star = term.find('*');
        if (star != std::string_view::npos) {
            std::string_view lhs = trim(term.substr(0, star));
            std::string_view rhs = trim(term.substr(star + 1));
            std::string_view reg_tok = lhs;
            std::string_view scale_tok = rhs;
            if (!parse_register(reg_tok)) std::swap(reg_tok, scale_tok);
            auto reg = parse_register(reg_tok);
            std::int64_t scale = 0;
            if (!reg || !parse_int_token(scale_tok, scale) ||
                (scale != 1 && scale != 2 && scale != 4 && scale != 8) || sign < 0) {
                error = "bad scaled-index term: " + std::string(term);
                return false;
            }
            if (mem.index) {
                error = "two index registers in memory operand";
                return false;
            }
            mem.index = *reg;
            mem.scale = static_cast<std::uint8_t>(scale);
        } else if (term == "rip") {
            if (mem.rip_relative || mem.base || sign < 0) {
                error = "malformed rip-relative operand";
                return false;
            }
            mem.rip_relative = true;
        } else if (auto reg = parse_register(term)) {
            if (sign < 0) {
                error = "negated register in memory operand";
                return false;
            }
            if (!mem.base && !mem.rip_relative) {
                mem.base = *reg;
            } else if (!mem.index) {
                mem.index = *reg;
                mem.scale = 1;
            } else {
                error = "too many registers in memory operand";
                return false;
            }
        } else if (std::int64_t value = 0; parse_int_token(term, value)) {
            mem.displacement += sign * value;
        } else {
            error = "unknown register-like token in memory operand: " + std::string(term);
            return false;
        }
        saw_term = true;
    }
    if (!saw_term) {
        error = "empty memory operand";
        return false;
    }
    return true;
}

inline std::optional<Operand> parse_operand(std::string_view tok, std::string& error) {
    tok = strip_operand_decorations(trim(tok));
    if (tok.empty()) {
        error = "empty operand";
        return std::nullopt;
    }
    if (tok.front() == '[') {
        if (tok.back() != ']') {
            error = "unterminated memory operand";
            return std::nullopt;
        }
        MemoryOperand mem;
        if (!parse_memory_operand(tok.substr(1, tok.size() - 2), mem, error)) return std::nullopt;
        return Operand{mem};
    }
    if (auto reg = parse_register(tok)) return Operand{*reg};
    if (std::int64_t value = 0; parse_int_token(tok, value)) return Operand{Immediate{value}};
    if (is_symbolic_register_token(tok)) return Operand{SymbolicRegister{std::string(tok)}};
    error = "unrecognized operand: " + std::string(tok);
    return std::nullopt;
}

inline bool is_prefix_token(std::string_view w) {
    return w == "rep" || w == "repe" || w == "repz" || w == "repne" || w == "repnz" ||
           w == "lock" || w == "bnd" || w == "notrack";
}

inline bool is_mnemonic_token(std::string_view w) {
    if (w.empty() || w.front() < 'a' || w.front() > 'z') return false;
    for (char c : w) {
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'))) return false;
    }
    return true;
}

} // namespace detail

// Parses one `;`-separated segment of a gadget line. Returns nullopt and
// fills `error` when the segment does not fit the instruction grammar.
inline std::optional<Instruction> parse_instruction(std::string_view segment, std::string* error = nullptr) {
    std::string lowered = detail::lowercase(detail::trim(segment));
    std::string_view rest = lowered;
    auto fail = [&](std::string_view why) -> std::optional<Instruction> {
        if (error) *error = std::string(why) + " in \"" + lowered + "\"";
        return std::nullopt;
    };

    std::string_view mnemonic = detail::next_word(rest);
    while (detail::is_prefix_token(mnemonic) && !rest.empty()) {
        mnemonic = detail::next_word(rest);
    }
    if (!detail::is_mnemonic_token(mnemonic)) return fail("bad mnemonic");

    Instruction insn;
    insn.mnemonic = std::string(mnemonic);
    if (!rest.empty()) {
        // split on commas outside brackets
        int depth = 0;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= rest.size(); ++i) {
            if (i < rest.size() && rest[i] == '[') ++depth;
            if (i < rest.size() && rest[i] == ']') --depth;
            if (i == rest.size() || (rest[i] == ',' && depth == 0)) {
                std::string err;
                auto op = detail::parse_operand(rest.substr(start, i - start), err);
                if (!op) return fail(err);
                insn.operands.push_back(std::move(*op));
                start = i + 1;
            }
        }
    }
    if (insn.operands.size() > 3) return fail("too many operands");
    return insn;
}

inline std::optional<std::pair<TerminatorKind, std::uint64_t>> classify_terminator(const Instruction& insn) {
    if (insn.mnemonic == "ret") {
        if (insn.operands.empty()) return {{TerminatorKind::Ret, 0}};
        if (insn.operands.size() == 1) {
            if (const auto* imm = std::get_if<Immediate>(&insn.operands[0]); imm && imm->value >= 0) {
                return {{TerminatorKind::Ret, static_cast<std::uint64_t>(imm->value)}};
            }
        }
        return std::nullopt;
    }
    if ((insn.mnemonic == "call" || insn.mnemonic == "jmp") && insn.operands.size() == 1) {
        const Operand& op = insn.operands[0];
        if (std::holds_alternative<RegisterRef>(op) || std::holds_alternative<MemoryOperand>(op)) {
            return {{insn.mnemonic == "call" ? TerminatorKind::IndirectCall : TerminatorKind::IndirectJmp, 0}};
        }
    }
    return std::nullopt;
}

namespace detail {

enum class LineResult { Accepted, Skipped, Unparseable, Privileged };

inline LineResult parse_gadget_line(std::string_view raw, const Config& config, Gadget& out,
                                    std::string& error) {
    std::string lowered = lowercase(trim(raw));
    std::string_view s = lowered;
    if (!s.starts_with("0x")) return LineResult::Skipped;
    s.remove_prefix(2);
    std::size_t hex_len = 0;
    while (hex_len < s.size() &&
           ((s[hex_len] >= '0' && s[hex_len] <= '9') || (s[hex_len] >= 'a' && s[hex_len] <= 'f'))) {
        ++hex_len;
    }
    if (hex_len == 0 || hex_len > 16) return LineResult::Skipped;
    std::string_view hex = s.substr(0, hex_len);
    s = trim(s.substr(hex_len));
    if (s.empty() || s.front() != ':') return LineResult::Skipped;
    s = trim(s.substr(1));

    std::uint64_t address = 0;
    std::from_chars(hex.data(), hex.data() + hex.size(), address, 16);

    std::vector<Instruction> instructions;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i < s.size() && s[i] != ';') continue;
        std::string_view segment = trim(s.substr(start, i - start));
        start = i + 1;
        if (segment.empty()) {
            if (i == s.size() && !instructions.empty()) continue; // trailing separator
            error = "empty instruction segment";
            return LineResult::Unparseable;
        }
        auto insn = parse_instruction(segment, &error);
        if (!insn) return LineResult::Unparseable;
        instructions.push_back(std::move(*insn));
    }
    if (instructions.empty()) {
        error = "no instructions";
        return LineResult::Unparseable;
    }
    for (const auto& insn : instructions) {
        if (config.privileged.count(insn.mnemonic) != 0) return LineResult::Privileged;
    }
    if (instructions.size() > config.max_gadget_len) {
        error = "gadget exceeds maximum length of " + std::to_string(config.max_gadget_len);
        return LineResult::Unparseable;
    }
    auto term = classify_terminator(instructions.back());
    if (!term) {
        error = "gadget does not end in ret/ret n/call reg|mem/jmp reg|mem";
        return LineResult::Unparseable;
    }
    out.address = address;
    out.instructions = std::move(instructions);
    out.terminator = term->first;
    out.ret_adjust = term->second;
    return LineResult::Accepted;
}

} // namespace detail

// Parses a whole dump. Lines that do not match the `0x... : insn ; ...`
// shape are counted and skipped (dump files carry headers and footers);
// matching lines that fail to parse are counted with a diagnostic and
// never abort the run.
inline Corpus parse_dump(std::string_view text, const Config& config, std::string source_label = {}) {
    Corpus corpus;
    corpus.source_label = std::move(source_label);
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        if (nl == std::string_view::npos && line.empty() && pos == text.size()) break;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        Gadget gadget;
        std::string error;
        switch (detail::parse_gadget_line(line, config, gadget, error)) {
            case detail::LineResult::Accepted:
                corpus.gadgets.push_back(std::move(gadget));
                ++corpus.stats.accepted;
                break;
            case detail::LineResult::Skipped:
                ++corpus.stats.skipped_lines;
                break;
            case detail::LineResult::Privileged:
                ++corpus.stats.discarded_privileged;
                break;
            case detail::LineResult::Unparseable:
                ++corpus.stats.discarded_unparseable;
                corpus.diagnostics.push_back({line_no, error});
                break;
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    if (corpus.gadgets.empty()) {
        throw EmptyCorpusError("no gadgets parsed" +
                               (corpus.source_label.empty() ? std::string{} : " from " + corpus.source_label) +
                               " (" + std::to_string(corpus.stats.skipped_lines) + " lines skipped, " +
                               std::to_string(corpus.stats.discarded_unparseable) + " unparseable, " +
                               std::to_string(corpus.stats.discarded_privileged) + " privileged)");
    }
    return corpus;
}

} // namespace ropscore
