#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_set>

#include "ropscore/categories.hpp"
#include "ropscore/parse.hpp"

namespace ropscore {

struct CategoryTally {
    std::uint64_t total{0};  // duplicates included
    std::uint64_t unique{0}; // distinct gadget text, address excluded

    friend bool operator==(const CategoryTally&, const CategoryTally&) = default;
};

struct DistributionReport {
    std::array<CategoryTally, kCategoryCount> categories{};
    CategoryTally uncategorized{};
    std::uint64_t privileged_discarded{0};

    const CategoryTally& tally(Category c) const { return categories[static_cast<std::size_t>(c)]; }
    CategoryTally& tally(Category c) { return categories[static_cast<std::size_t>(c)]; }

    std::uint64_t categorized_total() const {
        std::uint64_t sum = 0;
        for (const auto& t : categories) sum += t.total;
        return sum;
    }
    std::uint64_t categorized_unique() const {
        std::uint64_t sum = 0;
        for (const auto& t : categories) sum += t.unique;
        return sum;
    }

    // Percentages are over categorized gadgets; the Uncategorized bucket
    // is reported separately.
    double total_pct(Category c) const {
        std::uint64_t denom = categorized_total();
        return denom == 0 ? 0.0 : 100.0 * static_cast<double>(tally(c).total) / static_cast<double>(denom);
    }
    double unique_pct(Category c) const {
        std::uint64_t denom = categorized_unique();
        return denom == 0 ? 0.0 : 100.0 * static_cast<double>(tally(c).unique) / static_cast<double>(denom);
    }

    friend bool operator==(const DistributionReport&, const DistributionReport&) = default;
};

// Metric: partition gadgets into categories by their first instruction,
// tallying both duplicate-aware and unique counts.
inline DistributionReport distribution(const Corpus& corpus, const CategoryTable& table) {
    DistributionReport report;
    report.privileged_discarded = corpus.stats.discarded_privileged;
    std::array<std::unordered_set<std::string>, kCategoryCount> seen;
    std::unordered_set<std::string> seen_uncategorized;
    for (const Gadget& g : corpus.gadgets) {
        Category cat = table.categorize(g.first());
        std::string key = render_gadget(g);
        if (cat == Category::Uncategorized) {
            ++report.uncategorized.total;
            if (seen_uncategorized.insert(std::move(key)).second) ++report.uncategorized.unique;
        } else {
            auto& tally = report.tally(cat);
            ++tally.total;
            if (seen[static_cast<std::size_t>(cat)].insert(std::move(key)).second) ++tally.unique;
        }
    }
    return report;
}

} // namespace ropscore
