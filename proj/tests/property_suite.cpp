#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include <ropscore/ropscore.hpp>

#include "generators.hpp"
#include "helpers.hpp"
#include "oracle.hpp"

using namespace ropscore;

namespace {
const CategoryTable& table() {
    static const CategoryTable t = CategoryTable::defaults();
    return t;
}
} // namespace

TEST_CASE("property: parsed instructions round-trip through rendering") {
    testgen::Rng rng(101);
    for (int i = 0; i < 10000; ++i) {
        Instruction insn = testgen::random_instruction(rng);
        std::string rendered = to_string(insn);
        std::string error;
        auto back = parse_instruction(rendered, &error);
        INFO(rendered << " : " << error);
        REQUIRE(back.has_value());
        CHECK(*back == insn);
    }
}

TEST_CASE("property: gadget lines round-trip through rendering") {
    testgen::Rng rng(102);
    for (int i = 0; i < 2000; ++i) {
        Gadget g = testgen::random_gadget(rng);
        Corpus again = parse_dump("0x400000 : " + render_gadget(g), {}, "t");
        REQUIRE(again.gadgets.size() == 1);
        CHECK(again.gadgets[0].instructions == g.instructions);
        CHECK(again.gadgets[0].terminator == g.terminator);
        CHECK(again.gadgets[0].ret_adjust == g.ret_adjust);
    }
}

TEST_CASE("property: corpus size equals matching non-privileged lines, duplicates included") {
    testgen::Rng rng(103);
    for (int round = 0; round < 50; ++round) {
        std::string text = "noise header\n";
        std::size_t expected = 0;
        std::vector<std::string> bodies;
        for (int i = 0; i < 40; ++i) bodies.push_back(testgen::random_gadget_body(rng));
        for (int i = 0; i < 60; ++i) {
            const std::string& body = bodies[testgen::pick(rng, bodies.size())];
            char buf[32];
            snprintf(buf, sizeof buf, "0x%llx : ", 0x400000ull + testgen::pick(rng, 16));
            text += buf + body + "\n";
            ++expected;
            if (testgen::pick(rng, 5) == 0) text += "stray line without separator\n";
        }
        Corpus corpus = parse_dump(text, {}, "t");
        CHECK(corpus.gadgets.size() == expected);
        CHECK(corpus.stats.discarded_unparseable == 0);
    }
}

TEST_CASE("property: distribution is invariant under order and addresses") {
    testgen::Rng rng(104);
    Corpus corpus = testgen::random_corpus(rng, 300);
    DistributionReport base = distribution(corpus, table());
    CHECK(base.categorized_total() + base.uncategorized.total == corpus.gadgets.size());
    for (Category c : kAllCategories) {
        CHECK(base.tally(c).unique <= base.tally(c).total);
    }
    for (int round = 0; round < 10; ++round) {
        Corpus shuffled = corpus;
        std::shuffle(shuffled.gadgets.begin(), shuffled.gadgets.end(), rng);
        for (Gadget& g : shuffled.gadgets) g.address = rng();
        CHECK(distribution(shuffled, table()) == base);
    }
}

TEST_CASE("property: strict preservation implies relaxed preservation") {
    testgen::Rng rng(105);
    for (int i = 0; i < 5000; ++i) {
        Gadget g = testgen::random_gadget(rng);
        for (const RegisterRef& rd : active_registers(g.first())) {
            if (preserves_rd(g, rd, PreservationMode::Strict, table())) {
                CHECK(preserves_rd(g, rd, PreservationMode::Relaxed, table()));
            }
        }
    }
}

TEST_CASE("property: inserting a nop before the terminator never flips preservation to false") {
    testgen::Rng rng(106);
    for (int i = 0; i < 3000; ++i) {
        Gadget g = testgen::random_gadget(rng, 3);
        Gadget with_nop = g;
        with_nop.instructions.insert(with_nop.instructions.end() - 1, testutil::insn("nop"));
        for (const RegisterRef& rd : active_registers(g.first())) {
            for (PreservationMode mode : {PreservationMode::Relaxed, PreservationMode::Strict}) {
                if (preserves_rd(g, rd, mode, table())) {
                    CHECK(preserves_rd(with_nop, rd, mode, table()));
                }
            }
        }
    }
}

TEST_CASE("property: SPS is additive over concatenation when determinate") {
    testgen::Rng rng(107);
    for (int i = 0; i < 3000; ++i) {
        std::vector<Instruction> a;
        std::vector<Instruction> b;
        for (std::size_t k = testgen::pick(rng, 4); k > 0; --k) {
            a.push_back(testutil::insn(testgen::random_body_instruction(rng)));
        }
        for (std::size_t k = testgen::pick(rng, 4); k > 0; --k) {
            b.push_back(testutil::insn(testgen::random_body_instruction(rng)));
        }
        std::vector<Instruction> ab = a;
        ab.insert(ab.end(), b.begin(), b.end());
        auto sa = track_sps(std::span<const Instruction>(a));
        auto sb = track_sps(std::span<const Instruction>(b));
        auto sab = track_sps(std::span<const Instruction>(ab));
        if (sa && sb) {
            REQUIRE(sab.has_value());
            CHECK(*sab == *sa + *sb);
        } else {
            CHECK_FALSE(sab.has_value());
        }
    }
}

TEST_CASE("property: SPS closed form for pop/push/ret-n gadgets") {
    testgen::Rng rng(108);
    static const Reg regs[] = {Reg::Rax, Reg::Rbx, Reg::Rcx};
    for (int i = 0; i < 2000; ++i) {
        std::string body;
        std::int64_t pops = 0;
        std::int64_t pushes = 0;
        for (std::size_t k = testgen::pick(rng, 5); k > 0; --k) {
            Reg r = regs[testgen::pick(rng, 3)];
            if (testgen::pick(rng, 2) == 0) {
                body += "pop " + std::string(register_name(r)) + " ; ";
                ++pops;
            } else {
                body += "push " + std::string(register_name(r)) + " ; ";
                ++pushes;
            }
        }
        std::int64_t adjust = static_cast<std::int64_t>(testgen::pick(rng, 3)) * 8;
        body += adjust == 0 ? "ret" : "ret " + std::to_string(adjust);
        Gadget g = testutil::gadget(body);
        auto sps = track_sps(g);
        REQUIRE(sps.has_value());
        CHECK(*sps == 8 * pops - 8 * pushes - adjust);
    }
}

TEST_CASE("property: grading agrees with the reference oracle on random gadgets") {
    testgen::Rng rng(109);
    Config config;
    for (int i = 0; i < 5000; ++i) {
        Gadget g = testgen::random_gadget(rng);
        GadgetScore mine = grade_gadget(g, active_registers(g.first()), table(), config);
        testoracle::Grade expected = testoracle::grade(g);
        INFO(render_gadget(g));
        CHECK(mine.graded == expected.graded);
        if (mine.graded) {
            CHECK(mine.score() == expected.score);
            CHECK(mine.sps == expected.sps);
        }
    }
}

TEST_CASE("property: zero score exactly characterizes side-effect-free gadgets") {
    testgen::Rng rng(110);
    Config config;
    for (int i = 0; i < 5000; ++i) {
        Gadget g = testgen::random_gadget(rng);
        GadgetScore mine = grade_gadget(g, active_registers(g.first()), table(), config);
        if (!mine.graded) continue;
        testoracle::Grade expected = testoracle::grade(g);
        bool clean = expected.instruction_subtotal == 0.0 && expected.sps.has_value() &&
                     *expected.sps >= 0 && *expected.sps <= 4096 && *expected.sps % 8 == 0;
        INFO(render_gadget(g));
        CHECK((mine.score_halves == 0) == clean);
    }
}

TEST_CASE("property: removing a penalized instruction lowers the per-instruction subtotal") {
    testgen::Rng rng(111);
    Config config;
    auto subtotal = [](const GadgetScore& s, std::size_t n_insns) {
        std::int64_t sum = 0;
        for (const auto& e : s.penalty_trace) {
            if (e.instruction_index < n_insns) sum += e.halves;
        }
        return sum;
    };
    int exercised = 0;
    for (int i = 0; i < 4000 && exercised < 500; ++i) {
        Gadget g = testgen::random_gadget(rng);
        std::vector<RegisterRef> rd = active_registers(g.first());
        GadgetScore full = grade_gadget(g, rd, table(), config);
        if (!full.graded) continue;
        for (const auto& entry : full.penalty_trace) {
            if (entry.instruction_index >= g.instructions.size() - 1) continue; // SPS rows, terminator
            Gadget removed = g;
            removed.instructions.erase(removed.instructions.begin() + entry.instruction_index);
            GadgetScore less = grade_gadget(removed, rd, table(), config);
            REQUIRE(less.graded);
            CHECK(subtotal(less, removed.instructions.size()) <=
                  subtotal(full, g.instructions.size()));
            ++exercised;
            break;
        }
    }
    CHECK(exercised > 0);
}

TEST_CASE("property: loader gadgets with pop or mov are always metric-3 useful") {
    testgen::Rng rng(112);
    Config config;
    for (int round = 0; round < 20; ++round) {
        Corpus corpus = testgen::random_corpus(rng, 200);
        UsefulReport useful = metric3_useful(corpus, config, table());
        std::set<std::uint32_t> useful_set(useful.useful_indices.begin(), useful.useful_indices.end());
        for (std::size_t i = 0; i < corpus.gadgets.size(); ++i) {
            const Gadget& g = corpus.gadgets[i];
            const std::string& m = g.first().mnemonic;
            if (m != "pop" && m != "mov") continue;
            auto target = ropscore::detail::loader_target(g.first(), config.arg_registers);
            if (!target) continue;
            if (!preserves_rd(g, canonical64(*target), config.preservation, table())) continue;
            INFO(render_gadget(g));
            CHECK(useful_set.count(static_cast<std::uint32_t>(i)) == 1);
        }
    }
}

TEST_CASE("property: duplicating the corpus doubles every duplicate-aware count") {
    testgen::Rng rng(113);
    Config config;
    Corpus corpus = testgen::random_corpus(rng, 150);
    Corpus doubled = corpus;
    for (Gadget g : corpus.gadgets) {
        g.address += 0x1000000;
        doubled.gadgets.push_back(std::move(g));
    }
    AnalysisReport once = analyze(corpus, config);
    AnalysisReport twice = analyze(doubled, config);
    CHECK(twice.corpus.total == 2 * once.corpus.total);
    CHECK(twice.corpus.unique == once.corpus.unique);
    CHECK(twice.useful_count == 2 * once.useful_count);
    CHECK(twice.quality.q_count == 2 * once.quality.q_count);
    CHECK(twice.quality.graded_count == 2 * once.quality.graded_count);
    CHECK(twice.env_setup.call_gadgets == 2 * once.env_setup.call_gadgets);
    CHECK(twice.env_setup.pivots.clean == 2 * once.env_setup.pivots.clean);
    CHECK(twice.env_setup.pivots.side_effect == 2 * once.env_setup.pivots.side_effect);
    for (std::size_t i = 0; i < once.env_setup.arg_loads.size(); ++i) {
        CHECK(twice.env_setup.arg_loads[i].second.clean == 2 * once.env_setup.arg_loads[i].second.clean);
        CHECK(twice.env_setup.arg_loads[i].second.side_effect ==
              2 * once.env_setup.arg_loads[i].second.side_effect);
    }
    for (Category c : kAllCategories) {
        CHECK(twice.distribution.tally(c).total == 2 * once.distribution.tally(c).total);
        CHECK(twice.distribution.tally(c).unique == once.distribution.tally(c).unique);
    }
}

TEST_CASE("property: json round-trip over random reports") {
    testgen::Rng rng(114);
    Config config;
    for (int round = 0; round < 10; ++round) {
        Corpus corpus = testgen::random_corpus(rng, 80);
        AnalysisReport report = analyze(corpus, config);
        CHECK(analysis_from_json_text(render_json(report)) == report);
    }
}

TEST_CASE("property: comparison of a report with itself is zero and deltas antisymmetric") {
    testgen::Rng rng(115);
    Config config;
    Corpus a = testgen::random_corpus(rng, 120);
    Corpus b = testgen::random_corpus(rng, 150);
    AnalysisReport ra = analyze(a, config);
    AnalysisReport rb = analyze(b, config);

    ComparisonReport self = compare(ra, ra);
    for (const auto& c : self.categories) {
        CHECK(c.total == Delta{0, 0.0});
        CHECK(c.unique == Delta{0, 0.0});
    }
    CHECK(self.useful.delta == Delta{0, 0.0});
    CHECK(self.q_count.delta == Delta{0, 0.0});

    ComparisonReport ab = compare(ra, rb);
    ComparisonReport ba = compare(rb, ra);
    CHECK(ab.useful.delta.absolute == -ba.useful.delta.absolute);
    CHECK(ab.q_count.delta.absolute == -ba.q_count.delta.absolute);
    CHECK(ab.total_gadgets.delta.absolute == -ba.total_gadgets.delta.absolute);
    for (std::size_t i = 0; i < kCategoryCount; ++i) {
        CHECK(ab.categories[i].total.absolute == -ba.categories[i].total.absolute);
        CHECK(ab.categories[i].unique.absolute == -ba.categories[i].unique.absolute);
    }
    CHECK(compare(ra, rb) == compare(ra, rb));
}

TEST_CASE("property: effects never target rip or immediates") {
    testgen::Rng rng(116);
    for (int i = 0; i < 5000; ++i) {
        Gadget g = testgen::random_gadget(rng);
        for (const Instruction& insn : g.instructions) {
            auto effects = write_effects(insn, table());
            if (!effects) continue;
            for (const WriteEffect& e : *effects) {
                if (e.reg) {
                    CHECK(static_cast<std::size_t>(e.reg->reg) < kRegCount);
                }
            }
        }
    }
}
