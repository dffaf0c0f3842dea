#include "cli.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "abcde/design_check.hpp"
#include "abcde/diagram.hpp"
#include "abcde/dsl.hpp"
#include "abcde/gas.hpp"
#include "abcde/lint.hpp"
#include "abcde/report.hpp"
#include "abcde/scaffold.hpp"
#include "abcde/sol_parser.hpp"
#include "config.hpp"

namespace abcde::cli {

namespace fs = std::filesystem;

namespace {

/// Failure that maps to exit code 2 after printing `what()`.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw UsageError("cannot write '" + path.string() + "'");
}

template <class T>
T take(ParseResult<T>&& r, std::ostream& err) {
    if (!r.ok()) {
        for (const auto& e : r.errors()) err << e.to_string() << "\n";
        throw UsageError("");
    }
    return std::move(r).value();
}

model::SystemModel load_model(const std::string& path, std::ostream& err) {
    return take(dsl::parse_model(read_file(path), path), err);
}

sol::SourceUnit load_solidity(const std::string& path, std::ostream& err) {
    return take(sol::parse_solidity(read_file(path), path), err);
}

/// Applies `work` to every input on up to `jobs` threads; results keep input
/// order so output is independent of scheduling.
template <class F>
auto per_file(const std::vector<std::string>& files, unsigned jobs, F work) {
    using R = decltype(work(files.front()));
    std::vector<std::optional<R>> results(files.size());
    std::vector<std::exception_ptr> errors(files.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < files.size();) {
            try {
                results[i] = work(files[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(files.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<R> out;
    for (auto& r : results) out.push_back(std::move(*r));
    return out;
}

bool reaches(const std::vector<Diagnostic>& diags, Severity level) {
    return std::any_of(diags.begin(), diags.end(), [&](const Diagnostic& d) { return at_or_above(d.severity, level); });
}

void print_diagnostics(const std::vector<Diagnostic>& diags, bool json, std::ostream& out) {
    if (json) {
        out << "[";
        for (std::size_t i = 0; i < diags.size(); ++i) out << (i ? ",\n " : "") << diagnostic_json(diags[i]);
        out << "]\n";
        return;
    }
    for (const auto& d : diags) out << format_diagnostic(d) << "\n";
}

std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct Options {
    std::string config_path;
    std::string fail_level;
    bool no_color = false;
    unsigned jobs = 1;
    bool json = false;
    bool reproducible = false;
    bool layout = false;
    std::string output;
    std::string scenario;
    std::string kind;
    std::vector<std::string> inputs;
};

class Runner {
public:
    Runner(const Options& opt, std::ostream& out, std::ostream& err) : o_(opt), out_(out), err_(err) {
        config_ = load_config(opt.config_path);
        if (!opt.fail_level.empty()) {
            auto s = parse_severity(opt.fail_level);
            if (!s || *s == Severity::manual) throw UsageError("--fail-level: expected error, warning or info");
            config_.lint.fail_level = *s;
            config_.gas.fail_level = *s;
        }
    }

    int parse() {
        const std::string& path = o_.inputs.at(0);
        if (path.ends_with(".abcde")) {
            const auto m = load_model(path, err_);
            const auto problems = model::validate_model(m);
            if (!problems.empty()) {
                print_diagnostics(problems, o_.json, err_);
                return kExitFindings;
            }
            out_ << dsl::format_model(m);
            return kExitOk;
        }
        const auto unit = load_solidity(path, err_);
        if (unit.pragma) out_ << "pragma solidity " << unit.pragma->raw << (unit.pragma->locked ? " (locked)" : "") << "\n";
        for (const auto& c : unit.contracts) {
            const char* kind = c.kind == sol::ContractKind::interface ? "interface"
                               : c.kind == sol::ContractKind::library ? "library"
                                                                      : "contract";
            out_ << kind << " " << c.name << ": " << c.state_vars.size() << " state variables, " << c.functions.size()
                 << " functions, " << c.modifiers.size() << " modifiers, " << c.events.size() << " events\n";
        }
        return kExitOk;
    }

    int check_design() {
        const auto m = load_model(o_.inputs.at(0), err_);
        auto diags = model::validate_model(m);
        if (diags.empty()) diags = abcde::check_design(m);
        print_diagnostics(diags, o_.json, out_);
        return reaches(diags, config_.lint.fail_level) ? kExitFindings : kExitOk;
    }

    int check_code() {
        const auto all = per_file(o_.inputs, o_.jobs, [&](const std::string& f) {
            std::ostringstream errs;
            try {
                return lint(load_solidity(f, errs), config_.lint);
            } catch (const UsageError&) {
                throw UsageError(errs.str());
            }
        });
        return emit_code_findings(all, config_.lint.fail_level);
    }

    int gas() {
        if (o_.layout) {
            for (const auto& f : o_.inputs) {
                const auto unit = load_solidity(f, err_);
                for (const auto& c : unit.contracts) {
                    if (c.kind != sol::ContractKind::contract) continue;
                    try {
                        out_ << layout_json(c, unit) << "\n";
                    } catch (const std::exception& e) {
                        throw UsageError(f + ": " + c.name + ": " + e.what());
                    }
                }
            }
            return kExitOk;
        }
        const auto all = per_file(o_.inputs, o_.jobs, [&](const std::string& f) {
            std::ostringstream errs;
            try {
                return analyze_gas(load_solidity(f, errs), config_.gas);
            } catch (const UsageError&) {
                throw UsageError(errs.str());
            }
        });
        return emit_code_findings(all, config_.gas.fail_level);
    }

    int diagram() {
        const auto m = load_model(o_.inputs.at(0), err_);
        if (auto problems = model::validate_model(m); !problems.empty()) {
            print_diagnostics(problems, false, err_);
            return kExitFindings;
        }
        DiagramText text;
        if (o_.kind == "class") {
            text = class_diagram(m);
        } else {
            const model::Scenario* sc = nullptr;
            if (!o_.scenario.empty()) {
                for (const auto& s : m.scenarios)
                    if (s.name == o_.scenario) sc = &s;
                if (!sc) throw UsageError("no scenario named '" + o_.scenario + "'");
            } else if (m.scenarios.size() == 1) {
                sc = &m.scenarios.front();
            } else {
                throw UsageError(m.scenarios.empty() ? "the model has no scenarios"
                                                     : "the model has several scenarios; pick one with --scenario");
            }
            text = sequence_diagram(*sc);
        }
        if (o_.output.empty() || o_.output == "-") out_ << text.str();
        else write_file(o_.output, text.str());
        return kExitOk;
    }

    int scaffold() {
        const auto m = load_model(o_.inputs.at(0), err_);
        if (auto problems = model::validate_model(m); !problems.empty()) {
            print_diagnostics(problems, false, err_);
            return kExitFindings;
        }
        for (const auto& [name, text] : generate_solidity(m, config_.scaffold)) {
            write_file(fs::path(o_.output) / name, text);
            out_ << (fs::path(o_.output) / name).string() << "\n";
        }
        return kExitOk;
    }

    int report() {
        std::vector<Diagnostic> diags;
        Severity level = config_.lint.fail_level;
        if (o_.kind == "design") {
            for (const auto& f : o_.inputs) {
                const auto m = load_model(f, err_);
                auto found = model::validate_model(m);
                if (!found.empty()) {
                    print_diagnostics(found, false, err_);
                    return kExitFindings;
                }
                found = abcde::check_design(m);
                diags.insert(diags.end(), found.begin(), found.end());
            }
            dedupe_manual(diags);
        } else {
            const auto all = per_file(o_.inputs, o_.jobs, [&](const std::string& f) {
                std::ostringstream errs;
                try {
                    return lint(load_solidity(f, errs), config_.lint);
                } catch (const UsageError&) {
                    throw UsageError(errs.str());
                }
            });
            for (const auto& d : all) diags.insert(diags.end(), d.begin(), d.end());
            dedupe_manual(diags);
        }
        const Phase phase = o_.kind == "design" ? Phase::design : Phase::coding;
        const auto rep = build_report(phase, diags, o_.reproducible ? "1970-01-01T00:00:00Z" : utc_now());
        out_ << (o_.json ? render_json(rep) : render_text(rep));
        return reaches(diags, level) ? kExitFindings : kExitOk;
    }

private:
    int emit_code_findings(const std::vector<std::vector<Diagnostic>>& per_file_diags, Severity level) {
        std::vector<Diagnostic> all;
        for (const auto& d : per_file_diags) all.insert(all.end(), d.begin(), d.end());
        dedupe_manual(all);
        print_diagnostics(all, o_.json, out_);
        return reaches(all, level) ? kExitFindings : kExitOk;
    }

    /// Manual items are per run, not per input file.
    static void dedupe_manual(std::vector<Diagnostic>& diags) {
        std::set<std::string> seen;
        std::vector<Diagnostic> kept;
        for (auto& d : diags) {
            if (d.severity == Severity::manual && !d.span && !seen.insert(d.rule_id).second) continue;
            kept.push_back(std::move(d));
        }
        sort_by_location(kept);
        diags = std::move(kept);
    }

    const Options& o_;
    std::ostream& out_;
    std::ostream& err_;
    ToolConfig config_;
};

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Design and audit toolchain for smart contracts", "abcde"};
    app.set_version_flag("--version", std::string(tool_version()));
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--config", o.config_path, "Config file (default: ./abcde.toml when present)");
    app.add_option("--fail-level", o.fail_level, "Lowest severity that makes the exit code 1")
        ->check(CLI::IsMember({"error", "warning", "info"}));
    app.add_flag("--no-color", o.no_color, "Plain output (output is never colored; kept for scripts)");
    app.add_option("-j,--jobs", o.jobs, "Files analyzed in parallel")->check(CLI::Range(1u, 256u));
    app.add_flag("--reproducible", o.reproducible, "Pin timestamps so repeated runs are byte-identical");

    auto* parse = app.add_subcommand("parse", "Parse a .sol or .abcde file");
    parse->add_option("file", o.inputs, "Input file")->required()->expected(1);
    parse->add_flag("--json", o.json, "JSON diagnostics");

    auto* design = app.add_subcommand("check-design", "Run the design checklist on a model");
    design->add_option("model", o.inputs, "Model file")->required()->expected(1);
    design->add_flag("--json", o.json, "JSON output");

    auto* code = app.add_subcommand("check-code", "Run the coding checklist on Solidity files");
    code->add_option("files", o.inputs, "Solidity files")->required();
    code->add_flag("--json", o.json, "JSON output");

    auto* gas = app.add_subcommand("gas", "Apply the GAS-saving patterns");
    gas->add_option("files", o.inputs, "Solidity files")->required();
    gas->add_flag("--json", o.json, "JSON output");
    gas->add_flag("--layout", o.layout, "Print storage layouts as JSON instead");

    auto* diagram = app.add_subcommand("diagram", "Emit a class or sequence diagram");
    diagram->add_option("kind", o.kind, "class or sequence")->required()->check(CLI::IsMember({"class", "sequence"}));
    diagram->add_option("model", o.inputs, "Model file")->required()->expected(1);
    diagram->add_option("--scenario", o.scenario, "Scenario for sequence diagrams");
    diagram->add_option("-o,--output", o.output, "Output file (default: stdout)");

    auto* scaffold = app.add_subcommand("scaffold", "Generate Solidity skeletons");
    scaffold->add_option("model", o.inputs, "Model file")->required()->expected(1);
    scaffold->add_option("-o,--output", o.output, "Output directory")->required();

    auto* report = app.add_subcommand("report", "Render a checklist report");
    report->add_option("phase", o.kind, "design or coding")->required()->check(CLI::IsMember({"design", "coding"}));
    report->add_option("inputs", o.inputs, "Models (design) or Solidity files (coding)")->required();
    report->add_flag("--json", o.json, "JSON report");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        Runner r(o, out, err);
        if (parse->parsed()) return r.parse();
        if (design->parsed()) return r.check_design();
        if (code->parsed()) return r.check_code();
        if (gas->parsed()) return r.gas();
        if (diagram->parsed()) return r.diagram();
        if (scaffold->parsed()) return r.scaffold();
        if (report->parsed()) return r.report();
    } catch (const UsageError& e) {
        if (*e.what()) err << "abcde: " << e.what() << (std::string_view(e.what()).ends_with('\n') ? "" : "\n");
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "abcde: config: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "abcde: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace abcde::cli
