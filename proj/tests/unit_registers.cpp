#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include <ropscore/registers.hpp>

using namespace ropscore;

TEST_CASE("register aliases resolve to canonical register and width") {
    CHECK(parse_register("rax") == RegisterRef{Reg::Rax, Width::W64});
    CHECK(parse_register("eax") == RegisterRef{Reg::Rax, Width::W32});
    CHECK(parse_register("ax") == RegisterRef{Reg::Rax, Width::W16});
    CHECK(parse_register("al") == RegisterRef{Reg::Rax, Width::W8Lo});
    CHECK(parse_register("ah") == RegisterRef{Reg::Rax, Width::W8Hi});
    CHECK(parse_register("r8d") == RegisterRef{Reg::R8, Width::W32});
    CHECK(parse_register("sil") == RegisterRef{Reg::Rsi, Width::W8Lo});
    CHECK(parse_register("spl") == RegisterRef{Reg::Rsp, Width::W8Lo});
    CHECK_FALSE(parse_register("xmm0").has_value());
    CHECK_FALSE(parse_register("rip").has_value());
    CHECK_FALSE(parse_register("").has_value());
}

TEST_CASE("alias table is bijective over recognized registers") {
    std::set<std::string_view> names;
    std::map<std::pair<int, int>, std::string_view> by_ref;
    for (const auto& a : kRegisterAliases) {
        CHECK(names.insert(a.name).second);
        auto key = std::make_pair(static_cast<int>(a.ref.reg), static_cast<int>(a.ref.width));
        CHECK(by_ref.emplace(key, a.name).second);
        CHECK(parse_register(a.name) == a.ref);
        CHECK(register_name(a.ref) == a.name);
    }
    CHECK(names.size() == 68);
}

TEST_CASE("high-byte aliases exist only for the legacy lineages") {
    for (const auto& a : kRegisterAliases) {
        if (a.ref.width == Width::W8Hi) {
            CHECK(has_high_byte(a.ref.reg));
        }
    }
    CHECK_FALSE(has_high_byte(Reg::Rsi));
    CHECK_FALSE(has_high_byte(Reg::R8));
}
