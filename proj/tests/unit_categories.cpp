#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include <ropscore/ropscore.hpp>

#include "helpers.hpp"
#include "table_fixture.hpp"

using namespace ropscore;

TEST_CASE("default table covers every listed mnemonic exactly") {
    CategoryTable table = CategoryTable::defaults();
    for (const auto& [mnemonic, expected] : testutil::expected_category_table()) {
        INFO(mnemonic);
        CHECK(table.categorize(mnemonic) == expected);
    }
    CHECK(testutil::expected_category_table().size() == 117);
    CHECK(table.entries().size() == 117);
}

TEST_CASE("categorize examples") {
    CategoryTable table = CategoryTable::defaults();
    CHECK(table.categorize("add") == Category::Arithmetic);
    CHECK(table.categorize("xor") == Category::Arithmetic);
    CHECK(table.categorize("cmova") == Category::DataMove);
    CHECK(table.categorize("vfmadd231ps") == Category::Uncategorized);
}

TEST_CASE("family prefix rules apply after exact lookup") {
    CategoryTable table = CategoryTable::defaults();
    CHECK(table.categorize("cmovne") == Category::DataMove);
    CHECK(table.categorize("sete") == Category::Misc);
    CHECK(table.categorize("setnz") == Category::Misc);
    CHECK(table.categorize("jz") == Category::ControlFlow);
    CHECK(table.categorize("jnz") == Category::ControlFlow);
    // exact entries win over the j* family rule
    CHECK(table.categorize("jmp") == Category::ControlFlow);
    // common instructions absent from the table stay uncategorized
    CHECK(table.categorize("movzx") == Category::Uncategorized);
    CHECK(table.categorize("movsx") == Category::Uncategorized);
    CHECK(table.categorize("bndmk") == Category::Uncategorized);
}

TEST_CASE("categorize uses the gadget's first instruction mnemonic") {
    CategoryTable table = CategoryTable::defaults();
    CHECK(table.categorize(testutil::insn("add rax, 0x40")) == Category::Arithmetic);
    CHECK(table.categorize(testutil::insn("pop rax")) == Category::DataMove);
}

TEST_CASE("config file overrides reassign mnemonics") {
    Config config;
    std::istringstream in("# comment\n"
                          "category.misc = bndmk, bndcl\n"
                          "privileged = hlt\n"
                          "arg_registers = rcx, rdx\n"
                          "q_threshold = 1.5\n"
                          "sps_limit = 8192\n"
                          "max_gadget_len = 10\n");
    load_config(in, config);
    CategoryTable table = config.make_category_table();
    CHECK(table.categorize("bndmk") == Category::Misc);
    CHECK(table.categorize("bndcl") == Category::Misc);
    CHECK(config.privileged == std::set<std::string>{"hlt"});
    CHECK(config.arg_registers == std::vector<Reg>{Reg::Rcx, Reg::Rdx});
    CHECK(config.q_threshold_halves == 3);
    CHECK(config.sps_limit == 8192);
    CHECK(config.max_gadget_len == 10);
}

TEST_CASE("config file rejects bad input") {
    auto load = [](const char* text) {
        Config config;
        std::istringstream in(text);
        load_config(in, config);
    };
    CHECK_THROWS_AS(load("category.bogus = foo"), ConfigError);
    CHECK_THROWS_AS(load("nonsense line"), ConfigError);
    CHECK_THROWS_AS(load("unknown_key = 1"), ConfigError);
    CHECK_THROWS_AS(load("arg_registers = rax, xmm0"), ConfigError);
    CHECK_THROWS_AS(load("q_threshold = 0.75"), ConfigError);
    CHECK_THROWS_AS(load("max_gadget_len = zero"), ConfigError);
}

TEST_CASE("fingerprint changes with any knob") {
    Config base;
    CHECK(base.fingerprint() == Config{}.fingerprint());

    Config strict = base;
    strict.preservation = PreservationMode::Strict;
    CHECK(strict.fingerprint() != base.fingerprint());

    Config threshold = base;
    threshold.q_threshold_halves = 4;
    CHECK(threshold.fingerprint() != base.fingerprint());

    Config regs = base;
    regs.arg_registers = {Reg::Rcx};
    CHECK(regs.fingerprint() != base.fingerprint());

    Config cats = base;
    cats.category_overrides.emplace_back(Category::Misc, std::vector<std::string>{"bndmk"});
    CHECK(cats.fingerprint() != base.fingerprint());
}
