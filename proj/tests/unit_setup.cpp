#include <catch2/catch_amalgamated.hpp>

#include <ropscore/ropscore.hpp>

#include "helpers.hpp"

using namespace ropscore;

namespace {
const CategoryTable& table() {
    static const CategoryTable t = CategoryTable::defaults();
    return t;
}

bool preserved(const std::string& body, Reg rd, PreservationMode mode = PreservationMode::Relaxed) {
    return preserves_rd(testutil::gadget(body), canonical64(rd), mode, table());
}
} // namespace

TEST_CASE("preservation examples") {
    CHECK(preserved("pop rax ; ret", Reg::Rax));
    CHECK_FALSE(preserved("pop rax ; mov eax, 0x1 ; ret", Reg::Rax)); // zero-extension destroys
    CHECK(preserved("pop rax ; mov al, 0x1 ; ret", Reg::Rax));        // partial write is fine
    CHECK(preserved("pop r9 ; add r8, 0x10 ; ret", Reg::R9));
}

TEST_CASE("relaxed mode only counts pop and mov as destructive") {
    CHECK_FALSE(preserved("pop rax ; pop rax ; ret", Reg::Rax));
    CHECK_FALSE(preserved("pop rax ; mov rax, rbx ; ret", Reg::Rax));
    CHECK_FALSE(preserved("pop rax ; mov rax, [rbx] ; ret", Reg::Rax));
    CHECK_FALSE(preserved("pop rax ; movabs rax, 0x11223344556677 ; ret", Reg::Rax));
    CHECK(preserved("pop rax ; add rax, 0x10 ; ret", Reg::Rax));
    CHECK(preserved("pop rax ; lea rax, [rbx + 0x8] ; ret", Reg::Rax));
    CHECK(preserved("pop rax ; xor rax, rax ; ret", Reg::Rax));
    CHECK(preserved("pop rax ; shl rax, 0x4 ; ret", Reg::Rax));
    CHECK(preserved("pop rax ; mul rbx ; ret", Reg::Rax)); // implicit rax write, still not pop/mov
    CHECK(preserved("pop rax ; mov ax, 0x1 ; ret", Reg::Rax));
}

TEST_CASE("strict mode counts any data-move, arithmetic, or shift write") {
    auto strict = [](const std::string& body, Reg rd) {
        return preserved(body, rd, PreservationMode::Strict);
    };
    CHECK_FALSE(strict("pop rax ; add rax, 0x10 ; ret", Reg::Rax));
    CHECK_FALSE(strict("pop rax ; lea rax, [rbx + 0x8] ; ret", Reg::Rax));
    CHECK_FALSE(strict("pop rax ; shl rax, 0x4 ; ret", Reg::Rax));
    CHECK_FALSE(strict("pop rax ; mul rbx ; ret", Reg::Rax)); // implicit rax/rdx overwrite
    CHECK_FALSE(strict("pop rdx ; mul rbx ; ret", Reg::Rdx));
    CHECK(strict("pop rax ; mov ax, 0x1 ; ret", Reg::Rax));  // 16-bit stays partial
    CHECK(strict("pop rax ; and rax, 0xff ; ret", Reg::Rax)); // logic writes are unmodeled
    CHECK(strict("pop rax ; cmp rax, rbx ; ret", Reg::Rax));
}

TEST_CASE("xchg destroys the active register in both modes at full width") {
    CHECK_FALSE(preserved("pop rax ; xchg rax, rbx ; ret", Reg::Rax));
    CHECK_FALSE(preserved("pop rax ; xchg rbx, rax ; ret", Reg::Rax));
    CHECK_FALSE(preserved("pop rax ; xchg eax, ebx ; ret", Reg::Rax));
    CHECK(preserved("pop rax ; xchg ax, bx ; ret", Reg::Rax));
    CHECK_FALSE(preserved("pop rax ; xchg rax, rbx ; ret", Reg::Rax, PreservationMode::Strict));
}

TEST_CASE("loader counting") {
    Config config;
    Corpus corpus = testutil::corpus_of({
        "pop rcx ; ret",             // rcx clean
        "pop rcx ; pop rbx ; ret",   // rcx side-effect
        "xchg rax, rsp ; ret",       // pivot clean
        "pop rcx ; mov ecx, 0x5 ; ret", // destroyed, not counted
        "mov rdx, rax ; ret",        // rdx clean
        "movabs r8, 0x1122334455667788 ; ret", // r8 clean
        "pop r9 ; ret 0x8",          // r9 side-effect: ret n is not bare
        "pop rbx ; ret",             // rbx is not an argument register
    });
    EnvSetupReport report = metric2_env_setup(corpus, config, table());
    REQUIRE(report.arg_loads.size() == 4);
    CHECK(report.arg_loads[0] == std::pair<Reg, PairCount>{Reg::Rcx, {1, 1}});
    CHECK(report.arg_loads[1] == std::pair<Reg, PairCount>{Reg::Rdx, {1, 0}});
    CHECK(report.arg_loads[2] == std::pair<Reg, PairCount>{Reg::R8, {1, 0}});
    CHECK(report.arg_loads[3] == std::pair<Reg, PairCount>{Reg::R9, {0, 1}});
    CHECK(report.pivots == PairCount{1, 0});
}

TEST_CASE("narrow loads do not count as loaders") {
    Config config;
    Corpus corpus = testutil::corpus_of({"mov cl, 0x5 ; ret", "mov cx, 0x5 ; ret",
                                         "mov ecx, 0x5 ; ret"});
    EnvSetupReport report = metric2_env_setup(corpus, config, table());
    CHECK(report.arg_loads[0].second == PairCount{1, 0}); // only the 32-bit form loads rcx
}

TEST_CASE("pivot forms") {
    Config config;
    Corpus corpus = testutil::corpus_of({
        "xchg rax, rsp ; ret",
        "xchg esp, ebx ; ret",
        "mov rsp, rbp ; ret",
        "add rsp, rcx ; ret",
        "sub rsp, rbx ; pop rbp ; ret",
        "pop rsp ; ret",
        "leave ; ret",
        "mov rsp, [rax] ; ret",   // memory source: not a pivot form
        "add rsp, 0x10 ; ret",    // immediate advance: not a pivot
        "ret 0x10",               // ret n alone is not a pivot
    });
    EnvSetupReport report = metric2_env_setup(corpus, config, table());
    CHECK(report.pivots == PairCount{6, 1});
    CHECK(report.pivot_forms.xchg_rsp == 2);
    CHECK(report.pivot_forms.mov_rsp_reg == 1);
    CHECK(report.pivot_forms.arith_rsp_reg == 2);
    CHECK(report.pivot_forms.pop_rsp == 1);
    CHECK(report.pivot_forms.leave == 1);
}

TEST_CASE("call gadget counting by terminator") {
    Config config;
    Corpus corpus = testutil::corpus_of({"call rax", "jmp qword ptr [rbx]", "pop rcx ; call rbx",
                                         "pop rax ; ret"});
    EnvSetupReport report = metric2_env_setup(corpus, config, table());
    CHECK(report.call_gadgets == 3);
    // the call-terminated loader still counts for rcx, as a side-effect form
    CHECK(report.arg_loads[0].second == PairCount{0, 1});
}

TEST_CASE("argument register set is configurable") {
    Config config;
    config.arg_registers = {Reg::Rdi, Reg::Rsi};
    Corpus corpus = testutil::corpus_of({"pop rdi ; ret", "pop rcx ; ret"});
    EnvSetupReport report = metric2_env_setup(corpus, config, table());
    REQUIRE(report.arg_loads.size() == 2);
    CHECK(report.arg_loads[0] == std::pair<Reg, PairCount>{Reg::Rdi, {1, 0}});
    CHECK(report.arg_loads[1] == std::pair<Reg, PairCount>{Reg::Rsi, {0, 0}});
}

TEST_CASE("useful gadget examples") {
    Config config;
    Corpus corpus = testutil::corpus_of({
        "pop rax ; ret",               // useful
        "cmp rax, rbx ; ret",          // cmp not in the mnemonic set
        "pop rax ; mov rax, rbx ; ret" // destroyed
    });
    UsefulReport report = metric3_useful(corpus, config, table());
    CHECK(report.useful_count == 1);
    REQUIRE(report.useful_indices.size() == 1);
    CHECK(report.useful_indices[0] == 0);
}

TEST_CASE("memory-destination and push gadgets qualify on mnemonic alone") {
    Config config;
    Corpus corpus = testutil::corpus_of({"mov [rdi+0x34fa], rsp ; ret", "push rbx ; ret",
                                         "movabs rcx, 0x11 ; ret"});
    UsefulReport report = metric3_useful(corpus, config, table());
    CHECK(report.useful_count == 2); // movabs is not in the thirteen-mnemonic set
}

TEST_CASE("strict preservation mode narrows the useful set") {
    Config relaxed;
    Config strict;
    strict.preservation = PreservationMode::Strict;
    Corpus corpus = testutil::corpus_of({"pop rax ; add rax, 0x8 ; ret"});
    CHECK(metric3_useful(corpus, relaxed, table()).useful_count == 1);
    CHECK(metric3_useful(corpus, strict, table()).useful_count == 0);
}
