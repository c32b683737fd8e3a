// Batch CLI over the ropscore library: analyze one gadget dump or
// compare two dumps under a shared configuration.
//
// Exit codes: 0 success, 1 parse failure (no gadgets / unreadable
// input), 2 configuration error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <ropscore/ropscore.hpp>

namespace {

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Options {
    std::string format = "text";
    bool unique_only = false;
    bool strict_preservation = false;
    double q_threshold = 1.0;
    std::int64_t sps_limit = 4096;
    std::int64_t max_gadget_len = 15;
    std::string config_path;
    std::string out_path;
};

void add_common_options(CLI::App& cmd, Options& opts) {
    cmd.add_option("--format", opts.format, "Output format: text, csv, or json")
        ->check(CLI::IsMember({"text", "csv", "json"}))
        ->capture_default_str();
    cmd.add_flag("--unique-only", opts.unique_only, "Drop duplicate gadgets before analysis");
    cmd.add_flag("--strict-preservation", opts.strict_preservation,
                 "Treat every data-move/arithmetic/shift write to the active register as destructive");
    cmd.add_option("--q-threshold", opts.q_threshold, "Quality score cutoff for the Q count")
        ->capture_default_str();
    cmd.add_option("--sps-limit", opts.sps_limit, "Stack-pointer offset size bound in bytes")
        ->capture_default_str();
    cmd.add_option("--max-gadget-len", opts.max_gadget_len, "Maximum instructions per gadget")
        ->capture_default_str();
    cmd.add_option("--config", opts.config_path, "Category/privileged/threshold override file");
    cmd.add_option("--out", opts.out_path, "Write the report to a file instead of stdout");
}

ropscore::Config build_config(const CLI::App& cmd, const Options& opts) {
    ropscore::Config config;
    if (!opts.config_path.empty()) {
        std::ifstream in(opts.config_path);
        if (!in) throw ropscore::ConfigError("cannot open config file: " + opts.config_path);
        ropscore::load_config(in, config);
    }
    // explicit flags win over the config file
    if (cmd.count("--max-gadget-len") != 0) {
        if (opts.max_gadget_len <= 0) throw ropscore::ConfigError("--max-gadget-len must be positive");
        config.max_gadget_len = static_cast<std::size_t>(opts.max_gadget_len);
    }
    if (cmd.count("--q-threshold") != 0) {
        double halves = opts.q_threshold * 2.0;
        if (halves < 0 || halves != static_cast<double>(static_cast<std::int64_t>(halves))) {
            throw ropscore::ConfigError("--q-threshold must be a non-negative multiple of 0.5");
        }
        config.q_threshold_halves = static_cast<std::int64_t>(halves);
    }
    if (cmd.count("--sps-limit") != 0) config.sps_limit = opts.sps_limit;
    if (opts.unique_only) config.unique_only = true;
    if (opts.strict_preservation) config.preservation = ropscore::PreservationMode::Strict;
    return config;
}

ropscore::Corpus load_corpus(const std::string& path, const ropscore::Config& config) {
    auto text = read_file(path);
    if (!text) throw ropscore::Error("cannot read dump file: " + path);
    return ropscore::parse_dump(*text, config, path);
}

int emit(const std::string& rendered, const Options& opts) {
    if (opts.out_path.empty()) {
        std::cout << rendered;
        return 0;
    }
    std::ofstream out(opts.out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << opts.out_path << "\n";
        return 1;
    }
    out << rendered;
    return 0;
}

void print_diagnostics(const ropscore::Corpus& corpus) {
    for (const auto& d : corpus.diagnostics) {
        std::cerr << corpus.source_label << ":" << d.line_no << ": " << d.message << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ROP gadget dump analyzer: category distribution, environment-setup, "
                 "usefulness, and quality metrics"};
    app.require_subcommand(1);

    Options analyze_opts;
    std::string analyze_dump;
    CLI::App* analyze_cmd = app.add_subcommand("analyze", "Analyze one gadget dump");
    analyze_cmd->add_option("dump", analyze_dump, "Gadget dump file")->required();
    add_common_options(*analyze_cmd, analyze_opts);

    Options compare_opts;
    std::string compare_before;
    std::string compare_after;
    CLI::App* compare_cmd = app.add_subcommand("compare", "Compare two gadget dumps");
    compare_cmd->add_option("dump-a", compare_before, "Baseline gadget dump")->required();
    compare_cmd->add_option("dump-b", compare_after, "Transformed gadget dump")->required();
    add_common_options(*compare_cmd, compare_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (analyze_cmd->parsed()) {
            ropscore::Config config = build_config(*analyze_cmd, analyze_opts);
            ropscore::Corpus corpus = load_corpus(analyze_dump, config);
            print_diagnostics(corpus);
            ropscore::AnalysisReport report = ropscore::analyze(corpus, config);
            auto format = ropscore::parse_output_format(analyze_opts.format);
            return emit(ropscore::render(report, *format), analyze_opts);
        }
        ropscore::Config config = build_config(*compare_cmd, compare_opts);
        ropscore::Corpus before = load_corpus(compare_before, config);
        ropscore::Corpus after = load_corpus(compare_after, config);
        print_diagnostics(before);
        print_diagnostics(after);
        ropscore::ComparisonReport report =
            ropscore::compare(ropscore::analyze(before, config), ropscore::analyze(after, config));
        auto format = ropscore::parse_output_format(compare_opts.format);
        return emit(ropscore::render(report, *format), compare_opts);
    } catch (const ropscore::ConfigMismatchError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ropscore::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ropscore::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
