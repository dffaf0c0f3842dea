#include "abcde/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace abcde {

namespace {

using Json = nlohmann::ordered_json;

Json to_json(const Diagnostic& d) {
    Json j;
    j["rule_id"] = d.rule_id;
    j["severity"] = std::string(to_string(d.severity));
    // Fixed key set; span fields are null for findings without a location.
    j["file"] = d.span ? Json(d.span->file) : Json();
    j["line"] = d.span ? Json(d.span->line) : Json();
    j["column"] = d.span ? Json(d.span->column) : Json();
    j["length"] = d.span ? Json(d.span->length) : Json();
    j["path"] = d.path;
    j["message"] = d.message;
    j["checklist_ref"] = d.checklist_ref;
    j["patterns"] = Json::array();
    for (PatternId p : d.patterns) j["patterns"].push_back(std::string(to_string(p)));
    return j;
}

bool is_automated(std::string_view rule_id) {
    const RuleInfo* r = find_rule(rule_id);
    return r && r->classification == RuleClass::automatic;
}

}  // namespace

std::string_view to_string(RowStatus s) {
    switch (s) {
    case RowStatus::pass: return "pass";
    case RowStatus::findings: return "findings";
    case RowStatus::manual: return "manual";
    }
    return "pass";
}

std::string_view tool_version() { return ABCDE_VERSION; }

ChecklistReport build_report(Phase phase, const std::vector<Diagnostic>& diagnostics, std::string generated_at) {
    ChecklistReport report;
    report.phase = phase;
    report.generated_at = std::move(generated_at);
    report.tool_version = std::string(tool_version());
    std::vector<bool> placed(diagnostics.size(), false);
    for (const auto& row : checklist_rows(phase)) {
        ReportRow r;
        r.title = std::string(row.title);
        bool any_automated = false;
        for (auto id : row.rule_ids) {
            r.rule_ids.emplace_back(id);
            any_automated = any_automated || is_automated(id);
        }
        for (std::size_t i = 0; i < diagnostics.size(); ++i) {
            const Diagnostic& d = diagnostics[i];
            if (std::find(r.rule_ids.begin(), r.rule_ids.end(), d.rule_id) == r.rule_ids.end()) continue;
            placed[i] = true;
            r.diagnostics.push_back(d);
            if (is_automated(d.rule_id)) ++r.findings;
        }
        r.status = !any_automated ? RowStatus::manual : r.findings > 0 ? RowStatus::findings : RowStatus::pass;
        report.rows.push_back(std::move(r));
    }
    for (std::size_t i = 0; i < diagnostics.size(); ++i)
        if (!placed[i]) report.additional.push_back(diagnostics[i]);
    return report;
}

std::string render_text(const ChecklistReport& report) {
    std::ostringstream out;
    out << "Security assessment checklist: " << to_string(report.phase) << " phase\n";
    out << "abcde " << report.tool_version;
    if (!report.generated_at.empty()) out << ", generated " << report.generated_at;
    out << "\n\n";
    std::size_t pass = 0, failing = 0, manual = 0, findings = 0;
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const ReportRow& r = report.rows[i];
        std::string status;
        switch (r.status) {
        case RowStatus::pass: status = "PASS"; ++pass; break;
        case RowStatus::findings: status = "FINDINGS(" + std::to_string(r.findings) + ")"; ++failing; break;
        case RowStatus::manual: status = "MANUAL"; ++manual; break;
        }
        findings += r.findings;
        out << std::setw(2) << i + 1 << ". [" << status << "] " << r.title << " (";
        for (std::size_t k = 0; k < r.rule_ids.size(); ++k) out << (k ? ", " : "") << r.rule_ids[k];
        out << ")\n";
        for (const auto& d : r.diagnostics) out << "      " << format_diagnostic(d) << "\n";
    }
    if (!report.additional.empty()) {
        out << "\nOther findings:\n";
        for (const auto& d : report.additional) out << "      " << format_diagnostic(d) << "\n";
    }
    out << "\n" << report.rows.size() << " rows: " << pass << " pass, " << failing << " with findings (" << findings
        << " total), " << manual << " manual\n";
    return out.str();
}

std::string render_json(const ChecklistReport& report) {
    Json j;
    j["phase"] = std::string(to_string(report.phase));
    j["tool_version"] = report.tool_version;
    j["generated_at"] = report.generated_at;
    j["rows"] = Json::array();
    for (const auto& r : report.rows) {
        Json row;
        row["title"] = r.title;
        row["rule_ids"] = r.rule_ids;
        row["status"] = std::string(to_string(r.status));
        row["findings"] = r.findings;
        row["diagnostics"] = Json::array();
        for (const auto& d : r.diagnostics) row["diagnostics"].push_back(to_json(d));
        j["rows"].push_back(std::move(row));
    }
    j["additional"] = Json::array();
    for (const auto& d : report.additional) j["additional"].push_back(to_json(d));
    return j.dump(2) + "\n";
}

std::string diagnostic_json(const Diagnostic& d) { return to_json(d).dump(); }

}  // namespace abcde
