#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ropscore/report.hpp"

namespace ropscore {

enum class OutputFormat { Text, Csv, Json };

inline std::optional<OutputFormat> parse_output_format(std::string_view s) {
    if (s == "text") return OutputFormat::Text;
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    return std::nullopt;
}

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline std::string fmt2(double v) {
    char buf[64];
    snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string fmt_score(double v) {
    char buf[64];
    snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

inline std::string fmt_half(std::int64_t halves) {
    char buf[64];
    if (halves % 2 == 0) {
        snprintf(buf, sizeof buf, "%lld", static_cast<long long>(halves / 2));
    } else {
        snprintf(buf, sizeof buf, "%.1f", static_cast<double>(halves) / 2.0);
    }
    return buf;
}

inline std::string fmt_delta(const Delta& d) {
    std::string out = (d.absolute >= 0 ? "+" : "") + std::to_string(d.absolute);
    if (d.is_new()) {
        out += " (new)";
    } else {
        out += " (" + std::string(*d.percent >= 0 ? "+" : "") + fmt2(*d.percent) + "%)";
    }
    return out;
}

// ---- json helpers ----

inline nlohmann::json json_config(const Config& c) {
    nlohmann::json j;
    j["fingerprint"] = c.fingerprint();
    j["max_gadget_len"] = c.max_gadget_len;
    j["preservation"] = c.preservation == PreservationMode::Strict ? "strict" : "relaxed";
    j["unique_only"] = c.unique_only;
    j["q_threshold"] = c.q_threshold();
    j["sps_limit"] = c.sps_limit;
    j["sps_alignment"] = c.sps_alignment;
    j["arg_registers"] = nlohmann::json::array();
    for (Reg r : c.arg_registers) j["arg_registers"].push_back(std::string(register_name(r)));
    j["privileged"] = nlohmann::json::array();
    for (const auto& m : c.privileged) j["privileged"].push_back(m);
    j["category_overrides"] = nlohmann::json::array();
    for (const auto& [cat, mnemonics] : c.category_overrides) {
        j["category_overrides"].push_back({{"category", std::string(category_key(cat))},
                                           {"mnemonics", mnemonics}});
    }
    j["conventions"] = {{"sps_ret_imm", std::string(kSpsRetConvention)}};
    return j;
}

inline Config config_from_json(const nlohmann::json& j) {
    Config c;
    c.max_gadget_len = j.at("max_gadget_len").get<std::size_t>();
    c.preservation = j.at("preservation").get<std::string>() == "strict" ? PreservationMode::Strict
                                                                         : PreservationMode::Relaxed;
    c.unique_only = j.at("unique_only").get<bool>();
    c.q_threshold_halves = static_cast<std::int64_t>(j.at("q_threshold").get<double>() * 2.0);
    c.sps_limit = j.at("sps_limit").get<std::int64_t>();
    c.sps_alignment = j.at("sps_alignment").get<std::int64_t>();
    c.arg_registers.clear();
    for (const auto& name : j.at("arg_registers")) {
        auto r = parse_canonical_reg(name.get<std::string>());
        if (!r) throw Error("bad register name in report json");
        c.arg_registers.push_back(*r);
    }
    c.privileged.clear();
    for (const auto& m : j.at("privileged")) c.privileged.insert(m.get<std::string>());
    c.category_overrides.clear();
    for (const auto& entry : j.at("category_overrides")) {
        auto cat = parse_category_key(entry.at("category").get<std::string>());
        if (!cat) throw Error("bad category key in report json");
        std::vector<std::string> mnemonics;
        for (const auto& m : entry.at("mnemonics")) mnemonics.push_back(m.get<std::string>());
        c.category_overrides.emplace_back(*cat, std::move(mnemonics));
    }
    return c;
}

inline nlohmann::json json_delta(const Delta& d) {
    nlohmann::json j;
    j["absolute"] = d.absolute;
    if (d.is_new()) {
        j["percent"] = nullptr;
    } else {
        j["percent"] = *d.percent;
    }
    return j;
}

} // namespace detail

// ---------------------------------------------------------------------
// analysis report
// ---------------------------------------------------------------------

inline nlohmann::json to_json(const AnalysisReport& r) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "analysis";
    j["label"] = r.source_label;
    j["config"] = detail::json_config(r.config);
    j["corpus"] = {
        {"total", r.corpus.total},
        {"unique", r.corpus.unique},
        {"discarded_privileged", r.corpus.discarded_privileged},
        {"discarded_unparseable", r.corpus.discarded_unparseable},
        {"skipped_lines", r.corpus.skipped_lines},
    };
    nlohmann::json cats = nlohmann::json::array();
    for (Category c : kAllCategories) {
        const CategoryTally& t = r.distribution.tally(c);
        cats.push_back({{"category", std::string(category_key(c))},
                        {"total", t.total},
                        {"unique", t.unique},
                        {"total_pct", r.distribution.total_pct(c)},
                        {"unique_pct", r.distribution.unique_pct(c)}});
    }
    j["distribution"] = {
        {"categories", std::move(cats)},
        {"uncategorized",
         {{"total", r.distribution.uncategorized.total}, {"unique", r.distribution.uncategorized.unique}}},
    };
    nlohmann::json loads = nlohmann::json::array();
    for (const auto& [reg, counts] : r.env_setup.arg_loads) {
        loads.push_back({{"register", std::string(register_name(reg))},
                         {"clean", counts.clean},
                         {"side_effect", counts.side_effect}});
    }
    j["env_setup"] = {
        {"arg_loads", std::move(loads)},
        {"pivot", {{"clean", r.env_setup.pivots.clean}, {"side_effect", r.env_setup.pivots.side_effect}}},
        {"pivot_forms",
         {{"xchg", r.env_setup.pivot_forms.xchg_rsp},
          {"mov", r.env_setup.pivot_forms.mov_rsp_reg},
          {"arith", r.env_setup.pivot_forms.arith_rsp_reg},
          {"pop_rsp", r.env_setup.pivot_forms.pop_rsp},
          {"leave", r.env_setup.pivot_forms.leave}}},
        {"call_gadgets", r.env_setup.call_gadgets},
    };
    j["useful"] = {{"count", r.useful_count}};
    nlohmann::json hist = nlohmann::json::array();
    for (const auto& [halves, count] : r.quality.score_histogram) {
        hist.push_back({{"score", static_cast<double>(halves) / 2.0}, {"count", count}});
    }
    j["quality"] = {
        {"graded", r.quality.graded_count},
        {"discarded", r.quality.discarded_count},
        {"q_count", r.quality.q_count},
        {"total_score_halves", r.quality.total_score_halves},
        {"mean_score", r.quality.mean_score()},
        {"histogram", std::move(hist)},
    };
    return j;
}

inline AnalysisReport analysis_from_json(const nlohmann::json& j) {
    if (j.at("schema_version").get<int>() != kSchemaVersion || j.at("kind") != "analysis") {
        throw Error("unsupported report schema");
    }
    AnalysisReport r;
    r.source_label = j.at("label").get<std::string>();
    r.config = detail::config_from_json(j.at("config"));
    r.config_fingerprint = j.at("config").at("fingerprint").get<std::string>();
    const auto& corpus = j.at("corpus");
    r.corpus.total = corpus.at("total").get<std::uint64_t>();
    r.corpus.unique = corpus.at("unique").get<std::uint64_t>();
    r.corpus.discarded_privileged = corpus.at("discarded_privileged").get<std::uint64_t>();
    r.corpus.discarded_unparseable = corpus.at("discarded_unparseable").get<std::uint64_t>();
    r.corpus.skipped_lines = corpus.at("skipped_lines").get<std::uint64_t>();
    for (const auto& entry : j.at("distribution").at("categories")) {
        auto cat = parse_category_key(entry.at("category").get<std::string>());
        if (!cat || *cat == Category::Uncategorized) throw Error("bad category key in report json");
        r.distribution.tally(*cat) = {entry.at("total").get<std::uint64_t>(),
                                      entry.at("unique").get<std::uint64_t>()};
    }
    const auto& unc = j.at("distribution").at("uncategorized");
    r.distribution.uncategorized = {unc.at("total").get<std::uint64_t>(),
                                    unc.at("unique").get<std::uint64_t>()};
    r.distribution.privileged_discarded = r.corpus.discarded_privileged;
    for (const auto& entry : j.at("env_setup").at("arg_loads")) {
        auto reg = parse_canonical_reg(entry.at("register").get<std::string>());
        if (!reg) throw Error("bad register name in report json");
        r.env_setup.arg_loads.emplace_back(
            *reg, PairCount{entry.at("clean").get<std::uint64_t>(),
                            entry.at("side_effect").get<std::uint64_t>()});
    }
    const auto& pivot = j.at("env_setup").at("pivot");
    r.env_setup.pivots = {pivot.at("clean").get<std::uint64_t>(),
                          pivot.at("side_effect").get<std::uint64_t>()};
    const auto& forms = j.at("env_setup").at("pivot_forms");
    r.env_setup.pivot_forms = {forms.at("xchg").get<std::uint64_t>(),
                               forms.at("mov").get<std::uint64_t>(),
                               forms.at("arith").get<std::uint64_t>(),
                               forms.at("pop_rsp").get<std::uint64_t>(),
                               forms.at("leave").get<std::uint64_t>()};
    r.env_setup.call_gadgets = j.at("env_setup").at("call_gadgets").get<std::uint64_t>();
    r.useful_count = j.at("useful").at("count").get<std::uint64_t>();
    const auto& quality = j.at("quality");
    r.quality.graded_count = quality.at("graded").get<std::uint64_t>();
    r.quality.discarded_count = quality.at("discarded").get<std::uint64_t>();
    r.quality.q_count = quality.at("q_count").get<std::uint64_t>();
    r.quality.total_score_halves = quality.at("total_score_halves").get<std::int64_t>();
    for (const auto& entry : quality.at("histogram")) {
        auto halves = static_cast<std::int64_t>(entry.at("score").get<double>() * 2.0);
        r.quality.score_histogram[halves] = entry.at("count").get<std::uint64_t>();
    }
    return r;
}

inline std::string render_json(const AnalysisReport& r) { return to_json(r).dump(2) + "\n"; }

inline AnalysisReport analysis_from_json_text(std::string_view text) {
    try {
        return analysis_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("bad report json: ") + e.what());
    }
}

inline std::string render_text(const AnalysisReport& r) {
    std::string out;
    out += "== gadget corpus analysis ==\n";
    out += "corpus: " + (r.source_label.empty() ? std::string("<unnamed>") : r.source_label) + "\n";
    out += "gadgets: " + std::to_string(r.corpus.total) + " total, " + std::to_string(r.corpus.unique) +
           " unique\n";
    out += "discarded: " + std::to_string(r.corpus.discarded_privileged) + " privileged, " +
           std::to_string(r.corpus.discarded_unparseable) + " unparseable; skipped lines: " +
           std::to_string(r.corpus.skipped_lines) + "\n";
    out += "config: fingerprint=" + r.config_fingerprint +
           " max_gadget_len=" + std::to_string(r.config.max_gadget_len) +
           " preservation=" + (r.config.preservation == PreservationMode::Strict ? "strict" : "relaxed") +
           " unique_only=" + (r.config.unique_only ? "yes" : "no") +
           " q_threshold=" + detail::fmt_half(r.config.q_threshold_halves) +
           " sps_limit=" + std::to_string(r.config.sps_limit) +
           " sps_alignment=" + std::to_string(r.config.sps_alignment) + "\n";
    out += "note: " + std::string(kSpsRetConvention) + "\n";
    out += "\n";

    out += "category distribution (percentages over categorized gadgets):\n";
    char line[160];
    snprintf(line, sizeof line, "  %-16s %10s %8s %10s %8s\n", "category", "total", "total%", "unique",
             "unique%");
    out += line;
    for (Category c : kAllCategories) {
        const CategoryTally& t = r.distribution.tally(c);
        snprintf(line, sizeof line, "  %-16s %10llu %8s %10llu %8s\n",
                 std::string(category_display_name(c)).c_str(),
                 static_cast<unsigned long long>(t.total), detail::fmt2(r.distribution.total_pct(c)).c_str(),
                 static_cast<unsigned long long>(t.unique),
                 detail::fmt2(r.distribution.unique_pct(c)).c_str());
        out += line;
    }
    snprintf(line, sizeof line, "  %-16s %10llu %8s %10llu %8s\n", "Uncategorized",
             static_cast<unsigned long long>(r.distribution.uncategorized.total), "-",
             static_cast<unsigned long long>(r.distribution.uncategorized.unique), "-");
    out += line;
    out += "\n";

    // summary row in the classic results-table shape
    std::string header;
    std::string values;
    for (const auto& [reg, counts] : r.env_setup.arg_loads) {
        header += std::string(register_name(reg)) + " | ";
        values += std::to_string(counts.clean) + " / " + std::to_string(counts.side_effect) + " | ";
    }
    header += "pivot | call | useful | Q";
    values += std::to_string(r.env_setup.pivots.clean) + " / " +
              std::to_string(r.env_setup.pivots.side_effect) + " | " +
              std::to_string(r.env_setup.call_gadgets) + " | " + std::to_string(r.useful_count) + " | " +
              std::to_string(r.quality.q_count);
    out += header + "\n" + values + "\n\n";

    out += "pivot forms: xchg=" + std::to_string(r.env_setup.pivot_forms.xchg_rsp) +
           " mov=" + std::to_string(r.env_setup.pivot_forms.mov_rsp_reg) +
           " arith=" + std::to_string(r.env_setup.pivot_forms.arith_rsp_reg) +
           " pop_rsp=" + std::to_string(r.env_setup.pivot_forms.pop_rsp) +
           " leave=" + std::to_string(r.env_setup.pivot_forms.leave) + "\n";
    out += "quality: graded=" + std::to_string(r.quality.graded_count) +
           " discarded=" + std::to_string(r.quality.discarded_count) +
           " q=" + std::to_string(r.quality.q_count) +
           " mean=" + detail::fmt_score(r.quality.mean_score()) + "\n";
    out += "score histogram:";
    if (r.quality.score_histogram.empty()) {
        out += " (empty)";
    } else {
        for (const auto& [halves, count] : r.quality.score_histogram) {
            out += " " + detail::fmt_half(halves) + ":" + std::to_string(count);
        }
    }
    out += "\n";
    return out;
}

namespace detail {

inline void csv_analysis_header(const AnalysisReport& r, std::string& out) {
    out += "label,total,unique,discarded_privileged,discarded_unparseable,skipped_lines";
    for (Category c : kAllCategories) {
        out += "," + std::string(category_key(c)) + "_total," + std::string(category_key(c)) + "_unique";
    }
    out += ",uncategorized_total,uncategorized_unique";
    for (const auto& [reg, counts] : r.env_setup.arg_loads) {
        (void)counts;
        out += "," + std::string(register_name(reg)) + "_clean," + std::string(register_name(reg)) +
               "_side_effect";
    }
    out += ",pivot_clean,pivot_side_effect,call_gadgets,useful,graded,discarded,q_count,mean_score\n";
}

} // namespace detail

inline std::string render_csv(const AnalysisReport& r) {
    std::string out;
    detail::csv_analysis_header(r, out);
    out += r.source_label;
    out += "," + std::to_string(r.corpus.total) + "," + std::to_string(r.corpus.unique) + "," +
           std::to_string(r.corpus.discarded_privileged) + "," +
           std::to_string(r.corpus.discarded_unparseable) + "," + std::to_string(r.corpus.skipped_lines);
    for (Category c : kAllCategories) {
        const CategoryTally& t = r.distribution.tally(c);
        out += "," + std::to_string(t.total) + "," + std::to_string(t.unique);
    }
    out += "," + std::to_string(r.distribution.uncategorized.total) + "," +
           std::to_string(r.distribution.uncategorized.unique);
    for (const auto& [reg, counts] : r.env_setup.arg_loads) {
        out += "," + std::to_string(counts.clean) + "," + std::to_string(counts.side_effect);
    }
    out += "," + std::to_string(r.env_setup.pivots.clean) + "," +
           std::to_string(r.env_setup.pivots.side_effect) + "," +
           std::to_string(r.env_setup.call_gadgets) + "," + std::to_string(r.useful_count) + "," +
           std::to_string(r.quality.graded_count) + "," + std::to_string(r.quality.discarded_count) +
           "," + std::to_string(r.quality.q_count) + "," + detail::fmt_score(r.quality.mean_score());
    out += "\n";
    return out;
}

inline std::string render(const AnalysisReport& r, OutputFormat format) {
    switch (format) {
        case OutputFormat::Text: return render_text(r);
        case OutputFormat::Csv: return render_csv(r);
        case OutputFormat::Json: return render_json(r);
    }
    return {};
}

// ---------------------------------------------------------------------
// comparison report
// ---------------------------------------------------------------------

inline nlohmann::json to_json(const ComparisonReport& r) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "comparison";
    j["before_label"] = r.before_label;
    j["after_label"] = r.after_label;
    j["config_fingerprint"] = r.config_fingerprint;
    nlohmann::json cats = nlohmann::json::array();
    for (std::size_t i = 0; i < kCategoryCount; ++i) {
        const CategoryComparison& c = r.categories[i];
        cats.push_back({{"category", std::string(category_key(kAllCategories[i]))},
                        {"before_total", c.before_total},
                        {"after_total", c.after_total},
                        {"total_delta", detail::json_delta(c.total)},
                        {"before_unique", c.before_unique},
                        {"after_unique", c.after_unique},
                        {"unique_delta", detail::json_delta(c.unique)},
                        {"before_total_pct", r.before_total_pct[i]},
                        {"after_total_pct", r.after_total_pct[i]}});
    }
    j["categories"] = std::move(cats);
    j["uncategorized"] = {{"before_total", r.uncategorized.before_total},
                          {"after_total", r.uncategorized.after_total},
                          {"total_delta", detail::json_delta(r.uncategorized.total)},
                          {"before_unique", r.uncategorized.before_unique},
                          {"after_unique", r.uncategorized.after_unique},
                          {"unique_delta", detail::json_delta(r.uncategorized.unique)}};
    auto value_cmp = [](const ValueComparison& v) {
        return nlohmann::json{{"before", v.before}, {"after", v.after}, {"delta", detail::json_delta(v.delta)}};
    };
    j["total_gadgets"] = value_cmp(r.total_gadgets);
    j["unique_gadgets"] = value_cmp(r.unique_gadgets);
    nlohmann::json loads = nlohmann::json::array();
    for (const auto& [reg, p] : r.arg_loads) {
        loads.push_back({{"register", std::string(register_name(reg))},
                         {"before_clean", p.before.clean},
                         {"before_side_effect", p.before.side_effect},
                         {"after_clean", p.after.clean},
                         {"after_side_effect", p.after.side_effect},
                         {"clean_delta", detail::json_delta(p.clean)},
                         {"side_effect_delta", detail::json_delta(p.side_effect)}});
    }
    j["arg_loads"] = std::move(loads);
    j["pivot"] = {{"before_clean", r.pivots.before.clean},
                  {"before_side_effect", r.pivots.before.side_effect},
                  {"after_clean", r.pivots.after.clean},
                  {"after_side_effect", r.pivots.after.side_effect},
                  {"clean_delta", detail::json_delta(r.pivots.clean)},
                  {"side_effect_delta", detail::json_delta(r.pivots.side_effect)}};
    j["call_gadgets"] = value_cmp(r.call_gadgets);
    j["useful"] = value_cmp(r.useful);
    j["q_count"] = value_cmp(r.q_count);
    return j;
}

inline ComparisonReport comparison_from_json(const nlohmann::json& j) {
    if (j.at("schema_version").get<int>() != kSchemaVersion || j.at("kind") != "comparison") {
        throw Error("unsupported report schema");
    }
    ComparisonReport r;
    r.before_label = j.at("before_label").get<std::string>();
    r.after_label = j.at("after_label").get<std::string>();
    r.config_fingerprint = j.at("config_fingerprint").get<std::string>();
    std::size_t i = 0;
    for (const auto& entry : j.at("categories")) {
        if (i >= kCategoryCount) throw Error("too many categories in report json");
        CategoryComparison c;
        c.before_total = entry.at("before_total").get<std::uint64_t>();
        c.after_total = entry.at("after_total").get<std::uint64_t>();
        c.before_unique = entry.at("before_unique").get<std::uint64_t>();
        c.after_unique = entry.at("after_unique").get<std::uint64_t>();
        c.total = make_delta(c.before_total, c.after_total);
        c.unique = make_delta(c.before_unique, c.after_unique);
        r.categories[i] = c;
        r.before_total_pct[i] = entry.at("before_total_pct").get<double>();
        r.after_total_pct[i] = entry.at("after_total_pct").get<double>();
        ++i;
    }
    const auto& unc = j.at("uncategorized");
    r.uncategorized.before_total = unc.at("before_total").get<std::uint64_t>();
    r.uncategorized.after_total = unc.at("after_total").get<std::uint64_t>();
    r.uncategorized.before_unique = unc.at("before_unique").get<std::uint64_t>();
    r.uncategorized.after_unique = unc.at("after_unique").get<std::uint64_t>();
    r.uncategorized.total = make_delta(r.uncategorized.before_total, r.uncategorized.after_total);
    r.uncategorized.unique = make_delta(r.uncategorized.before_unique, r.uncategorized.after_unique);
    auto value_cmp = [](const nlohmann::json& v) {
        return detail::compare_values(v.at("before").get<std::uint64_t>(), v.at("after").get<std::uint64_t>());
    };
    r.total_gadgets = value_cmp(j.at("total_gadgets"));
    r.unique_gadgets = value_cmp(j.at("unique_gadgets"));
    for (const auto& entry : j.at("arg_loads")) {
        auto reg = parse_canonical_reg(entry.at("register").get<std::string>());
        if (!reg) throw Error("bad register name in report json");
        PairCount before{entry.at("before_clean").get<std::uint64_t>(),
                         entry.at("before_side_effect").get<std::uint64_t>()};
        PairCount after{entry.at("after_clean").get<std::uint64_t>(),
                        entry.at("after_side_effect").get<std::uint64_t>()};
        r.arg_loads.emplace_back(*reg, detail::compare_pairs(before, after));
    }
    const auto& pivot = j.at("pivot");
    r.pivots = detail::compare_pairs(PairCount{pivot.at("before_clean").get<std::uint64_t>(),
                                               pivot.at("before_side_effect").get<std::uint64_t>()},
                                     PairCount{pivot.at("after_clean").get<std::uint64_t>(),
                                               pivot.at("after_side_effect").get<std::uint64_t>()});
    r.call_gadgets = value_cmp(j.at("call_gadgets"));
    r.useful = value_cmp(j.at("useful"));
    r.q_count = value_cmp(j.at("q_count"));
    return r;
}

inline std::string render_json(const ComparisonReport& r) { return to_json(r).dump(2) + "\n"; }

inline ComparisonReport comparison_from_json_text(std::string_view text) {
    try {
        return comparison_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("bad report json: ") + e.what());
    }
}

inline std::string render_text(const ComparisonReport& r) {
    std::string out;
    out += "== gadget corpus comparison ==\n";
    out += "before: " + r.before_label + "\n";
    out += "after:  " + r.after_label + "\n";
    out += "config: fingerprint=" + r.config_fingerprint + "\n\n";

    char line[240];
    snprintf(line, sizeof line, "  %-16s %10s %10s %-18s %10s %10s %-18s %8s %8s\n", "category", "before",
             "after", "delta", "uniq_b", "uniq_a", "uniq_delta", "share_b", "share_a");
    out += line;
    for (std::size_t i = 0; i < kCategoryCount; ++i) {
        const CategoryComparison& c = r.categories[i];
        snprintf(line, sizeof line, "  %-16s %10llu %10llu %-18s %10llu %10llu %-18s %8s %8s\n",
                 std::string(category_display_name(kAllCategories[i])).c_str(),
                 static_cast<unsigned long long>(c.before_total),
                 static_cast<unsigned long long>(c.after_total), detail::fmt_delta(c.total).c_str(),
                 static_cast<unsigned long long>(c.before_unique),
                 static_cast<unsigned long long>(c.after_unique), detail::fmt_delta(c.unique).c_str(),
                 detail::fmt2(r.before_total_pct[i]).c_str(), detail::fmt2(r.after_total_pct[i]).c_str());
        out += line;
    }
    const CategoryComparison& u = r.uncategorized;
    snprintf(line, sizeof line, "  %-16s %10llu %10llu %-18s %10llu %10llu %-18s %8s %8s\n", "Uncategorized",
             static_cast<unsigned long long>(u.before_total), static_cast<unsigned long long>(u.after_total),
             detail::fmt_delta(u.total).c_str(), static_cast<unsigned long long>(u.before_unique),
             static_cast<unsigned long long>(u.after_unique), detail::fmt_delta(u.unique).c_str(), "-", "-");
    out += line;
    out += "\n";

    auto value_line = [&](std::string_view name, const ValueComparison& v) {
        return std::string(name) + ": " + std::to_string(v.before) + " -> " + std::to_string(v.after) +
               " " + detail::fmt_delta(v.delta) + "\n";
    };
    out += value_line("gadgets", r.total_gadgets);
    out += value_line("unique gadgets", r.unique_gadgets);
    for (const auto& [reg, p] : r.arg_loads) {
        out += std::string(register_name(reg)) + ": clean " + std::to_string(p.before.clean) + " -> " +
               std::to_string(p.after.clean) + " " + detail::fmt_delta(p.clean) + ", side-effect " +
               std::to_string(p.before.side_effect) + " -> " + std::to_string(p.after.side_effect) + " " +
               detail::fmt_delta(p.side_effect) + "\n";
    }
    out += "pivot: clean " + std::to_string(r.pivots.before.clean) + " -> " +
           std::to_string(r.pivots.after.clean) + " " + detail::fmt_delta(r.pivots.clean) +
           ", side-effect " + std::to_string(r.pivots.before.side_effect) + " -> " +
           std::to_string(r.pivots.after.side_effect) + " " + detail::fmt_delta(r.pivots.side_effect) + "\n";
    out += value_line("call gadgets", r.call_gadgets);
    out += value_line("useful", r.useful);
    out += value_line("q count", r.q_count);
    return out;
}

inline std::string render_csv(const ComparisonReport& r) {
    std::string out = "label,total,unique";
    for (std::size_t i = 0; i < kCategoryCount; ++i) {
        out += "," + std::string(category_key(kAllCategories[i])) + "_total," +
               std::string(category_key(kAllCategories[i])) + "_unique";
    }
    out += ",uncategorized_total,uncategorized_unique";
    for (const auto& [reg, p] : r.arg_loads) {
        (void)p;
        out += "," + std::string(register_name(reg)) + "_clean," + std::string(register_name(reg)) +
               "_side_effect";
    }
    out += ",pivot_clean,pivot_side_effect,call_gadgets,useful,q_count\n";

    auto row = [&](std::string_view label, auto cat_total, auto cat_unique, auto total, auto unique,
                   auto load_clean, auto load_side, auto pivot_clean, auto pivot_side, auto call,
                   auto useful, auto q) {
        out += std::string(label) + "," + std::to_string(total) + "," + std::to_string(unique);
        for (std::size_t i = 0; i < kCategoryCount; ++i) {
            out += "," + std::to_string(cat_total(i)) + "," + std::to_string(cat_unique(i));
        }
        out += "," + std::to_string(cat_total(kCategoryCount)) + "," + std::to_string(cat_unique(kCategoryCount));
        for (std::size_t i = 0; i < r.arg_loads.size(); ++i) {
            out += "," + std::to_string(load_clean(i)) + "," + std::to_string(load_side(i));
        }
        out += "," + std::to_string(pivot_clean) + "," + std::to_string(pivot_side) + "," +
               std::to_string(call) + "," + std::to_string(useful) + "," + std::to_string(q) + "\n";
    };
    auto cat_at = [&](std::size_t i) -> const CategoryComparison& {
        return i < kCategoryCount ? r.categories[i] : r.uncategorized;
    };
    row(
        r.before_label, [&](std::size_t i) { return cat_at(i).before_total; },
        [&](std::size_t i) { return cat_at(i).before_unique; }, r.total_gadgets.before,
        r.unique_gadgets.before, [&](std::size_t i) { return r.arg_loads[i].second.before.clean; },
        [&](std::size_t i) { return r.arg_loads[i].second.before.side_effect; }, r.pivots.before.clean,
        r.pivots.before.side_effect, r.call_gadgets.before, r.useful.before, r.q_count.before);
    row(
        r.after_label, [&](std::size_t i) { return cat_at(i).after_total; },
        [&](std::size_t i) { return cat_at(i).after_unique; }, r.total_gadgets.after,
        r.unique_gadgets.after, [&](std::size_t i) { return r.arg_loads[i].second.after.clean; },
        [&](std::size_t i) { return r.arg_loads[i].second.after.side_effect; }, r.pivots.after.clean,
        r.pivots.after.side_effect, r.call_gadgets.after, r.useful.after, r.q_count.after);
    row(
        "delta", [&](std::size_t i) { return cat_at(i).total.absolute; },
        [&](std::size_t i) { return cat_at(i).unique.absolute; }, r.total_gadgets.delta.absolute,
        r.unique_gadgets.delta.absolute,
        [&](std::size_t i) { return r.arg_loads[i].second.clean.absolute; },
        [&](std::size_t i) { return r.arg_loads[i].second.side_effect.absolute; },
        r.pivots.clean.absolute, r.pivots.side_effect.absolute, r.call_gadgets.delta.absolute,
        r.useful.delta.absolute, r.q_count.delta.absolute);
    return out;
}

inline std::string render(const ComparisonReport& r, OutputFormat format) {
    switch (format) {
        case OutputFormat::Text: return render_text(r);
        case OutputFormat::Csv: return render_csv(r);
        case OutputFormat::Json: return render_json(r);
    }
    return {};
}

} // namespace ropscore
