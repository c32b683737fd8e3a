#pragma once

#include <cstdio>
#include <initializer_list>
#include <stdexcept>
#include <string>

#include <ropscore/ropscore.hpp>

namespace testutil {

inline ropscore::Corpus corpus_of(std::initializer_list<std::string> bodies,
                                  const ropscore::Config& config = {}) {
    std::string text;
    std::uint64_t address = 0x400000;
    for (const auto& body : bodies) {
        char buf[32];
        snprintf(buf, sizeof buf, "0x%llx : ", static_cast<unsigned long long>(address++));
        text += buf;
        text += body;
        text += '\n';
    }
    return ropscore::parse_dump(text, config, "inline");
}

// Builds a single gadget from its body text ("pop rax ; ret").
inline ropscore::Gadget gadget(const std::string& body, const ropscore::Config& config = {}) {
    ropscore::Corpus corpus = corpus_of({body}, config);
    if (corpus.gadgets.size() != 1) throw std::runtime_error("fixture did not parse: " + body);
    return corpus.gadgets.front();
}

inline ropscore::Instruction insn(const std::string& text) {
    std::string error;
    auto parsed = ropscore::parse_instruction(text, &error);
    if (!parsed) throw std::runtime_error("fixture instruction did not parse: " + text + ": " + error);
    return *parsed;
}

} // namespace testutil
