#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ropscore/config.hpp"
#include "ropscore/distribution.hpp"
#include "ropscore/errors.hpp"
#include "ropscore/parse.hpp"
#include "ropscore/quality.hpp"
#include "ropscore/setup.hpp"

namespace ropscore {

struct CorpusStats {
    std::uint64_t total{0};
    std::uint64_t unique{0};
    std::uint64_t discarded_privileged{0};
    std::uint64_t discarded_unparseable{0};
    std::uint64_t skipped_lines{0};

    friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

// The stack-adjust of "ret n" is treated as consuming n injected bytes,
// i.e. it decreases the SPS; flagged here so report consumers know the
// sign convention in use.
inline constexpr std::string_view kSpsRetConvention = "ret-imm-decrements-sps";

struct AnalysisReport {
    std::string source_label;
    CorpusStats corpus;
    DistributionReport distribution;
    EnvSetupReport env_setup;
    std::uint64_t useful_count{0};
    QualityReport quality;
    Config config;
    std::string config_fingerprint;

    friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

// Runs all four metrics under one configuration. Deterministic for a
// fixed (corpus, config) pair.
inline AnalysisReport analyze(const Corpus& corpus, const Config& config) {
    if (corpus.gadgets.empty()) {
        throw EmptyCorpusError("cannot analyze an empty corpus");
    }
    const CategoryTable table = config.make_category_table();

    const Corpus* working = &corpus;
    Corpus deduped;
    if (config.unique_only) {
        deduped.source_label = corpus.source_label;
        deduped.stats = corpus.stats;
        std::unordered_set<std::string> seen;
        for (const Gadget& g : corpus.gadgets) {
            if (seen.insert(render_gadget(g)).second) deduped.gadgets.push_back(g);
        }
        working = &deduped;
    }

    AnalysisReport report;
    report.source_label = working->source_label;
    report.config = config;
    report.config_fingerprint = config.fingerprint();

    std::unordered_set<std::string> unique_keys;
    for (const Gadget& g : working->gadgets) unique_keys.insert(render_gadget(g));
    report.corpus.total = working->gadgets.size();
    report.corpus.unique = unique_keys.size();
    report.corpus.discarded_privileged = working->stats.discarded_privileged;
    report.corpus.discarded_unparseable = working->stats.discarded_unparseable;
    report.corpus.skipped_lines = working->stats.skipped_lines;

    report.distribution = distribution(*working, table);
    report.env_setup = metric2_env_setup(*working, config, table);
    UsefulReport useful = metric3_useful(*working, config, table);
    report.useful_count = useful.useful_count;
    report.quality = metric4_summary(*working, useful, table, config);
    return report;
}

// after - before, with a percentage where the baseline allows one.
// percent is empty when before == 0 and after > 0 ("new").
struct Delta {
    std::int64_t absolute{0};
    std::optional<double> percent{0.0};

    bool is_new() const { return !percent.has_value(); }

    friend bool operator==(const Delta&, const Delta&) = default;
};

inline Delta make_delta(std::uint64_t before, std::uint64_t after) {
    Delta d;
    d.absolute = static_cast<std::int64_t>(after) - static_cast<std::int64_t>(before);
    if (before != 0) {
        d.percent = 100.0 * static_cast<double>(d.absolute) / static_cast<double>(before);
    } else if (after == 0) {
        d.percent = 0.0;
    } else {
        d.percent = std::nullopt;
    }
    return d;
}

struct CategoryComparison {
    std::uint64_t before_total{0};
    std::uint64_t after_total{0};
    std::uint64_t before_unique{0};
    std::uint64_t after_unique{0};
    Delta total;
    Delta unique;

    friend bool operator==(const CategoryComparison&, const CategoryComparison&) = default;
};

struct PairComparison {
    PairCount before;
    PairCount after;
    Delta clean;
    Delta side_effect;

    friend bool operator==(const PairComparison&, const PairComparison&) = default;
};

struct ValueComparison {
    std::uint64_t before{0};
    std::uint64_t after{0};
    Delta delta;

    friend bool operator==(const ValueComparison&, const ValueComparison&) = default;
};

struct ComparisonReport {
    std::string before_label;
    std::string after_label;
    std::string config_fingerprint;

    std::array<CategoryComparison, kCategoryCount> categories{};
    CategoryComparison uncategorized;
    // before/after percentage shares per category (over categorized gadgets)
    std::array<double, kCategoryCount> before_total_pct{};
    std::array<double, kCategoryCount> after_total_pct{};

    ValueComparison total_gadgets;
    ValueComparison unique_gadgets;
    std::vector<std::pair<Reg, PairComparison>> arg_loads;
    PairComparison pivots;
    ValueComparison call_gadgets;
    ValueComparison useful;
    ValueComparison q_count;

    friend bool operator==(const ComparisonReport&, const ComparisonReport&) = default;
};

namespace detail {

inline CategoryComparison compare_tallies(const CategoryTally& before, const CategoryTally& after) {
    CategoryComparison c;
    c.before_total = before.total;
    c.after_total = after.total;
    c.before_unique = before.unique;
    c.after_unique = after.unique;
    c.total = make_delta(before.total, after.total);
    c.unique = make_delta(before.unique, after.unique);
    return c;
}

inline ValueComparison compare_values(std::uint64_t before, std::uint64_t after) {
    return {before, after, make_delta(before, after)};
}

inline PairComparison compare_pairs(const PairCount& before, const PairCount& after) {
    PairComparison p;
    p.before = before;
    p.after = after;
    p.clean = make_delta(before.clean, after.clean);
    p.side_effect = make_delta(before.side_effect, after.side_effect);
    return p;
}

} // namespace detail

// Corpus-to-corpus deltas in the shape of the growth/distribution
// figures: per-category absolute and percentage changes for unique and
// total counts, plus the per-column metric deltas.
inline ComparisonReport compare(const AnalysisReport& before, const AnalysisReport& after) {
    if (before.config_fingerprint != after.config_fingerprint) {
        throw ConfigMismatchError("reports were produced under different configurations (" +
                                  before.config_fingerprint + " vs " + after.config_fingerprint + ")");
    }
    ComparisonReport cmp;
    cmp.before_label = before.source_label;
    cmp.after_label = after.source_label;
    cmp.config_fingerprint = before.config_fingerprint;

    for (std::size_t i = 0; i < kCategoryCount; ++i) {
        Category c = kAllCategories[i];
        cmp.categories[i] = detail::compare_tallies(before.distribution.tally(c), after.distribution.tally(c));
        cmp.before_total_pct[i] = before.distribution.total_pct(c);
        cmp.after_total_pct[i] = after.distribution.total_pct(c);
    }
    cmp.uncategorized = detail::compare_tallies(before.distribution.uncategorized, after.distribution.uncategorized);

    cmp.total_gadgets = detail::compare_values(before.corpus.total, after.corpus.total);
    cmp.unique_gadgets = detail::compare_values(before.corpus.unique, after.corpus.unique);

    for (std::size_t i = 0; i < before.env_setup.arg_loads.size(); ++i) {
        const auto& [reg, b] = before.env_setup.arg_loads[i];
        const PairCount& a = after.env_setup.arg_loads[i].second;
        cmp.arg_loads.emplace_back(reg, detail::compare_pairs(b, a));
    }
    cmp.pivots = detail::compare_pairs(before.env_setup.pivots, after.env_setup.pivots);
    cmp.call_gadgets = detail::compare_values(before.env_setup.call_gadgets, after.env_setup.call_gadgets);
    cmp.useful = detail::compare_values(before.useful_count, after.useful_count);
    cmp.q_count = detail::compare_values(before.quality.q_count, after.quality.q_count);
    return cmp;
}

} // namespace ropscore
