// trex command line: evaluate temporal row-pattern queries against CSV
// traces, inspect how a query compiles, or append a match-flag column.

#include <cstdio>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trex/trex.hpp"

namespace {

struct common_options {
    std::string input;
    std::string query;
    std::vector<std::string> defines;
    std::string bool_cols;
    std::string ignore_cols;
    std::string delimiter = ",";
    bool infer_booleans = false;
};

std::set<std::string> split_names(const std::string& csv) {
    std::set<std::string> out;
    std::size_t b = 0;
    while (b <= csv.size()) {
        std::size_t e = csv.find(',', b);
        if (e == std::string::npos) e = csv.size();
        std::string name = csv.substr(b, e - b);
        if (!name.empty()) out.insert(name);
        b = e + 1;
    }
    return out;
}

std::map<std::string, std::string> parse_defines(const std::vector<std::string>& defs) {
    std::map<std::string, std::string> out;
    for (const auto& d : defs) {
        std::size_t eq = d.find('=');
        if (eq == std::string::npos || eq == 0)
            trex::throw_usage("--define expects NAME=EXPR, got '" + d + "'");
        std::string name = d.substr(0, eq);
        if (!trex::is_identifier(name))
            trex::throw_usage("define name '" + name + "' is not a valid identifier");
        out[name] = d.substr(eq + 1);
    }
    return out;
}

trex::csv_options csv_options_of(const common_options& o) {
    trex::csv_options opts;
    opts.boolean_columns = split_names(o.bool_cols);
    opts.ignore_columns = split_names(o.ignore_cols);
    if (o.delimiter.size() != 1)
        trex::throw_usage("--delimiter expects a single character");
    opts.delimiter = o.delimiter[0];
    opts.infer_booleans = o.infer_booleans;
    return opts;
}

void add_common_flags(CLI::App* cmd, common_options& o, bool input_required) {
    auto* in = cmd->add_option("--input,-i", o.input, "CSV trace file");
    if (input_required) in->required();
    cmd->add_option("--query,-q", o.query, "query text")->required();
    cmd->add_option("--define,-d", o.defines, "named sub-expression NAME=EXPR (repeatable)");
    cmd->add_option("--bool-cols", o.bool_cols, "comma-separated boolean column names");
    cmd->add_option("--ignore-cols", o.ignore_cols, "comma-separated columns to skip on load");
    cmd->add_option("--delimiter", o.delimiter, "CSV delimiter (default ',')");
    cmd->add_flag("--infer-bools", o.infer_booleans,
                  "treat columns whose cells are all 0/1/true/false as boolean");
}

trex::engine_config config_of(const std::string& mode, const std::string& backend,
                              bool include_empty) {
    trex::engine_config cfg;
    if (mode == "disjoint") cfg.mode = trex::match_mode::disjoint;
    else if (mode == "scan") cfg.mode = trex::match_mode::scan;
    else if (mode == "all") cfg.mode = trex::match_mode::all;
    else trex::throw_usage("--mode must be disjoint, scan or all");
    if (backend == "auto") cfg.backend = trex::backend_kind::autoselect;
    else if (backend == "nfa") cfg.backend = trex::backend_kind::automaton;
    else if (backend == "regex") cfg.backend = trex::backend_kind::regex;
    else trex::throw_usage("--backend must be auto, nfa or regex");
    cfg.include_empty = include_empty;
    return cfg;
}

int run_eval(const common_options& o, const std::string& mode, const std::string& backend,
             bool include_empty, const std::string& format) {
    if (format != "json" && format != "csv")
        trex::throw_usage("--format must be json or csv");
    trex::engine_config cfg = config_of(mode, backend, include_empty);
    auto doc = trex::load_csv_file(o.input, csv_options_of(o));
    auto result = trex::find_matches(doc.data, o.query, cfg, parse_defines(o.defines));
    trex::match_report rep = trex::make_report(o.query, cfg, result);
    if (format == "csv")
        std::cout << trex::to_csv(rep);
    else
        std::cout << trex::to_json(rep).dump(2) << "\n";
    return 0;
}

int run_explain(const common_options& o, std::size_t preview_rows) {
    auto defines = parse_defines(o.defines);
    std::string expanded = trex::expand_defines(o.query, defines);
    trex::sere_ptr ast = trex::parse(expanded);
    trex::sere_ptr core = trex::desugar(ast);
    trex::atom_table atoms = trex::extract_atoms(core);
    trex::compiled_pattern pattern = trex::compile_pattern(core, atoms);

    std::cout << "query:     " << o.query << "\n";
    if (expanded != o.query) std::cout << "expanded:  " << expanded << "\n";
    std::cout << "parsed:    " << trex::to_string(ast) << "\n";
    std::cout << "desugared: " << trex::to_string(core) << "\n";
    std::cout << "atoms:\n";
    for (std::size_t j = 0; j < atoms.size(); ++j)
        std::cout << "  [" << j << "] " << atoms.keys[j] << "\n";
    std::cout << "pattern:   " << pattern.text << "\n";
    std::cout << "features: ";
    if (pattern.features.alternation) std::cout << " alternation";
    if (pattern.features.quantifier) std::cout << " quantifiers";
    if (pattern.features.lookahead) std::cout << " lookahead";
    std::cout << "\n";

    if (!o.input.empty()) {
        auto doc = trex::load_csv_file(o.input, csv_options_of(o));
        trex::bool_trace bt = trex::booleanize(doc.data, atoms);
        trex::encoded_trace et = trex::encode(bt);
        std::size_t rows = std::min<std::size_t>(preview_rows, et.n_rows);
        std::cout << "encoded (first " << rows << " of " << et.n_rows
                  << " rows): " << et.text.substr(0, rows * et.token_width()) << "\n";
        for (const auto& d : bt.diagnostics) std::cerr << "note: " << d << "\n";
    }
    return 0;
}

int run_filter(const common_options& o, const std::string& flag_column, const std::string& mode,
               const std::string& backend) {
    if (!trex::is_identifier(flag_column))
        trex::throw_usage("--flag-column '" + flag_column + "' is not a valid identifier");
    auto doc = trex::load_csv_file(o.input, csv_options_of(o));
    if (doc.data.find(flag_column))
        trex::throw_usage("--flag-column '" + flag_column + "' already exists in the input");

    trex::engine_config cfg = config_of(mode, backend, false);
    auto result = trex::find_matches(doc.data, o.query, cfg, parse_defines(o.defines));

    std::vector<char> covered(doc.data.n_rows(), 0);
    for (const auto& s : result.spans) {
        if (s.empty) continue;
        for (std::int64_t r = s.start; r <= s.end; ++r) covered[static_cast<std::size_t>(r)] = 1;
    }

    // Splice the new column in front of each record's own line ending so
    // every original byte (quoting, CR/LF mix, BOM) survives untouched.
    std::string out;
    out.reserve(doc.raw.size() + doc.records.size() * (flag_column.size() + 2));
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < doc.records.size(); ++i) {
        const auto& rec = doc.records[i];
        out.append(doc.raw, cursor, rec.end - cursor);
        out += ',';
        if (i == 0)
            out += flag_column;
        else
            out += covered[i - 1] ? '1' : '0';
        cursor = rec.end;
    }
    out.append(doc.raw, cursor, doc.raw.size() - cursor);
    std::cout << out;
    for (const auto& d : result.diagnostics) std::cerr << "note: " << d << "\n";
    return 0;
}

int exit_code_of(const trex::error& e) {
    switch (e.error_kind()) {
    case trex::error::kind::usage: return 2;
    case trex::error::kind::parse: return 3;
    default: return 4;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"temporal row-pattern queries over CSV traces"};
    app.require_subcommand(1);

    common_options eval_opts, explain_opts, filter_opts;
    std::string mode = "disjoint", backend = "nfa", format = "json";
    std::string filter_mode = "disjoint", filter_backend = "nfa";
    bool include_empty = false;
    std::size_t preview_rows = 10;
    std::string flag_column;

    auto* eval = app.add_subcommand("eval", "run a query and report match spans");
    add_common_flags(eval, eval_opts, true);
    eval->add_option("--mode", mode, "disjoint | scan | all (default disjoint)");
    eval->add_option("--backend", backend, "auto | nfa | regex (default nfa)");
    eval->add_flag("--include-empty", include_empty, "report empty matches as (i, i-1) records");
    eval->add_option("--format", format, "json | csv (default json)");

    auto* explain = app.add_subcommand("explain", "show how a query parses and compiles");
    add_common_flags(explain, explain_opts, false);
    explain->add_option("--preview-rows", preview_rows,
                        "rows of the encoded trace to print (with --input)");

    auto* filter = app.add_subcommand("filter", "append a 0/1 column marking matched rows");
    add_common_flags(filter, filter_opts, true);
    filter->add_option("--flag-column", flag_column, "name of the appended column")->required();
    filter->add_option("--mode", filter_mode, "disjoint | scan | all (default disjoint)");
    filter->add_option("--backend", filter_backend, "auto | nfa | regex (default nfa)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (app.got_subcommand(eval))
            return run_eval(eval_opts, mode, backend, include_empty, format);
        if (app.got_subcommand(explain))
            return run_explain(explain_opts, preview_rows);
        return run_filter(filter_opts, flag_column, filter_mode, filter_backend);
    } catch (const trex::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_of(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
