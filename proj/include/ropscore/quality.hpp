#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ropscore/config.hpp"
#include "ropscore/effects.hpp"
#include "ropscore/parse.hpp"
#include "ropscore/setup.hpp"

namespace ropscore {

// Net stack-pointer displacement of an instruction sequence, in bytes.
// pop +8, push -8, ret n -n (n injected bytes are consumed from the
// chain), add/sub rsp,imm by the immediate, inc/dec rsp by 1. Any other
// write to rsp (leave, pop rsp, register-amount arithmetic, shifts, ...)
// makes the offset statically indeterminate.
inline std::optional<std::int64_t> track_sps(std::span<const Instruction> instructions) {
    std::int64_t sps = 0;
    for (const Instruction& insn : instructions) {
        for (const WriteEffect& e : detail::raw_write_effects(insn)) {
            if (e.kind == EffectKind::StackPointerChange) {
                if (!e.sp_delta) return std::nullopt;
                sps += *e.sp_delta;
            } else if (e.reg && e.reg->reg == Reg::Rsp) {
                return std::nullopt; // rsp retargeted or partially written
            }
        }
    }
    return sps;
}

inline std::optional<std::int64_t> track_sps(const Gadget& gadget) {
    return track_sps(std::span<const Instruction>(gadget.instructions));
}

struct PenaltyEntry {
    std::uint32_t instruction_index{0}; // == instruction count for the final SPS penalties
    std::string rule;
    std::int64_t halves{0};

    friend bool operator==(const PenaltyEntry&, const PenaltyEntry&) = default;
};

// Score in exact half-point units, plus the SPS value and the trace of
// applied rules. graded == false means the gadget contained an
// uncategorized instruction and is discarded from the quality metric.
struct GadgetScore {
    bool graded{true};
    std::int64_t score_halves{0};
    std::optional<std::int64_t> sps{0};
    std::vector<PenaltyEntry> penalty_trace;

    double score() const { return static_cast<double>(score_halves) / 2.0; }

    friend bool operator==(const GadgetScore&, const GadgetScore&) = default;
};

namespace detail {

struct CategoryWeights {
    std::int64_t rsp_halves{0};
    std::int64_t rd_halves{0};
    std::int64_t other_halves{0};
};

// Grading rules by category: rsp / rd / other destination weights.
// Categories outside the table do not affect the score.
inline CategoryWeights grading_weights(Category c) {
    switch (c) {
        case Category::DataMove: return {4, 2, 1};
        case Category::Arithmetic: return {4, 2, 1};
        case Category::ShiftRotate: return {6, 4, 1};
        default: return {0, 0, 0};
    }
}

} // namespace detail

// Grades one gadget's side-effects and preconditions. The first
// instruction defines the gadget's purpose and is never penalized; its
// stack effect still enters the SPS. Walk rules:
//  - push never scores; its rsp effect is covered by the SPS.
//  - statically determinate rsp offsets flow into the SPS, not the score;
//    indeterminate rsp changes score at the category's rsp weight
//    (leave counts as a data move targeting rsp).
//  - memory-dereference destinations score at the category's Other
//    weight: a writable-memory precondition.
//  - register writes score at the rsp / rd / other weight, one increment
//    per written register.
//  - an uncategorized instruction anywhere makes the gadget ungradable.
// Afterwards a negative SPS adds 2, and an SPS beyond the size limit or
// off alignment adds 1 (one increment for the disjunction).
inline GadgetScore grade_gadget(const Gadget& gadget, std::span<const RegisterRef> rd_set,
                                const CategoryTable& table, const Config& config) {
    GadgetScore result;
    for (const Instruction& insn : gadget.instructions) {
        if (table.categorize(insn) == Category::Uncategorized) {
            result.graded = false;
            result.sps = std::nullopt;
            return result;
        }
    }

    auto in_rd_set = [&](Reg r) {
        for (const RegisterRef& rd : rd_set) {
            if (rd.reg == r) return true;
        }
        return false;
    };
    auto add = [&](std::uint32_t index, std::string rule, std::int64_t halves) {
        if (halves == 0) return;
        result.score_halves += halves;
        result.penalty_trace.push_back({index, std::move(rule), halves});
    };

    for (std::size_t i = 1; i < gadget.instructions.size(); ++i) {
        const Instruction& insn = gadget.instructions[i];
        auto index = static_cast<std::uint32_t>(i);
        if (insn.mnemonic == "push") continue;
        Category cat = table.categorize(insn);
        detail::CategoryWeights weights = detail::grading_weights(cat);
        if (insn.mnemonic == "leave") {
            add(index, "indeterminate rsp change (leave)",
                detail::grading_weights(Category::DataMove).rsp_halves);
            continue;
        }
        for (const WriteEffect& e : detail::raw_write_effects(insn)) {
            if (e.kind == EffectKind::StackPointerChange) {
                if (!e.sp_delta) add(index, "indeterminate rsp change", weights.rsp_halves);
                // determinate offsets are handled by the SPS below
            } else if (e.memory_target()) {
                add(index, "memory-destination write precondition", weights.other_halves);
            } else if (e.reg->reg == Reg::Rsp) {
                add(index, "rsp overwrite", weights.rsp_halves);
            } else if (in_rd_set(e.reg->reg)) {
                add(index, "active-register write", weights.rd_halves);
            } else {
                add(index, "register side-effect", weights.other_halves);
            }
        }
    }

    result.sps = track_sps(gadget);
    if (result.sps) {
        auto sps_index = static_cast<std::uint32_t>(gadget.instructions.size());
        std::int64_t sps = *result.sps;
        if (sps < 0) add(sps_index, "negative sps", 4);
        std::uint64_t magnitude = detail::magnitude(sps);
        bool too_large = magnitude > static_cast<std::uint64_t>(config.sps_limit);
        bool unaligned = config.sps_alignment != 0 && sps % config.sps_alignment != 0;
        if (too_large || unaligned) add(sps_index, "sps large or unaligned", 2);
    }
    return result;
}

struct QualityReport {
    std::uint64_t graded_count{0};
    std::uint64_t discarded_count{0};
    std::uint64_t q_count{0}; // graded gadgets at or below the threshold
    std::map<std::int64_t, std::uint64_t> score_histogram; // key: score halves
    std::int64_t total_score_halves{0};

    double mean_score() const {
        if (graded_count == 0) return 0.0;
        return static_cast<double>(total_score_halves) / 2.0 / static_cast<double>(graded_count);
    }

    friend bool operator==(const QualityReport&, const QualityReport&) = default;
};

// Metric: grade every useful gadget and summarize.
inline QualityReport metric4_summary(const Corpus& corpus, const UsefulReport& useful,
                                     const CategoryTable& table, const Config& config) {
    QualityReport report;
    for (std::uint32_t index : useful.useful_indices) {
        const Gadget& g = corpus.gadgets[index];
        std::vector<RegisterRef> rd_set = active_registers(g.first());
        GadgetScore score = grade_gadget(g, rd_set, table, config);
        if (!score.graded) {
            ++report.discarded_count;
            continue;
        }
        ++report.graded_count;
        ++report.score_histogram[score.score_halves];
        report.total_score_halves += score.score_halves;
        if (score.score_halves <= config.q_threshold_halves) ++report.q_count;
    }
    return report;
}

} // namespace ropscore
