#include <gtest/gtest.h>

#include "abcde/catalog.hpp"
#include "abcde/report.hpp"
#include "json.hpp"

using namespace abcde;

namespace {

Diagnostic diag(const std::string& id, std::uint32_t line = 1) {
    auto d = make_diagnostic(id, "message for " + id);
    d.span = SourceSpan{"x.sol", line, 1, 1};
    return d;
}

const ReportRow& row(const ChecklistReport& r, const std::string& title) {
    for (const auto& x : r.rows)
        if (x.title == title) return x;
    throw std::runtime_error("no row " + title);
}

}  // namespace

TEST(Report, EmptyCodingReport) {
    auto r = build_report(Phase::coding, {});
    ASSERT_EQ(r.rows.size(), 13u);
    for (const auto& x : r.rows) {
        const bool manual = x.title == "Fix compiler warnings" || x.title == "Testing";
        EXPECT_EQ(x.status, manual ? RowStatus::manual : RowStatus::pass) << x.title;
        EXPECT_EQ(x.findings, 0u);
    }
}

TEST(Report, DesignRowCount) {
    EXPECT_EQ(build_report(Phase::design, {}).rows.size(), 9u);
}

TEST(Report, UnboundedLoopFinding) {
    auto r = build_report(Phase::coding, {diag("CL-UNBOUNDED")});
    const auto& x = row(r, "Prevent unbounded loops");
    EXPECT_EQ(x.status, RowStatus::findings);
    EXPECT_EQ(x.findings, 1u);
    EXPECT_EQ(x.diagnostics.size(), 1u);
    EXPECT_NE(render_text(r).find("[FINDINGS(1)] Prevent unbounded loops"), std::string::npos);
}

TEST(Report, ReentrancyFinding) {
    auto r = build_report(Phase::design, {diag("DC-REENTRANCY")});
    const auto& x = row(r, "Re-entrancy");
    EXPECT_EQ(x.status, RowStatus::findings);
    EXPECT_EQ(x.findings, 1u);
}

TEST(Report, ManualItemsDoNotCountAsFindings) {
    auto r = build_report(Phase::design, {make_diagnostic("DC-DEPS", "deps")});
    const auto& x = row(r, "Dependencies");
    EXPECT_EQ(x.status, RowStatus::manual);
    EXPECT_EQ(x.findings, 0u);
    EXPECT_EQ(x.diagnostics.size(), 1u);
}

TEST(Report, SharedRowCountsBothRules) {
    auto r = build_report(Phase::coding, {diag("CL-LOWLEVEL", 3), diag("CL-MULTISEND", 5)});
    EXPECT_EQ(row(r, "External calls").findings, 2u);
}

TEST(Report, UnplacedDiagnosticsGoToAdditional) {
    auto r = build_report(Phase::coding, {diag("GA-PACK"), diag("DC-REENTRANCY")});
    EXPECT_EQ(r.additional.size(), 2u);
    for (const auto& x : r.rows) EXPECT_EQ(x.findings, 0u);
}

TEST(Report, JsonShape) {
    auto r = build_report(Phase::coding, {diag("CL-TXORIGIN", 7)}, "1970-01-01T00:00:00Z");
    auto j = nlohmann::json::parse(render_json(r));
    EXPECT_EQ(j.at("phase"), "coding");
    EXPECT_EQ(j.at("generated_at"), "1970-01-01T00:00:00Z");
    EXPECT_EQ(j.at("tool_version"), std::string(tool_version()));
    ASSERT_EQ(j.at("rows").size(), 13u);
    const auto& tx = j.at("rows")[5];
    EXPECT_EQ(tx.at("title"), "tx.origin");
    EXPECT_EQ(tx.at("status"), "findings");
    EXPECT_EQ(tx.at("findings"), 1);
    EXPECT_EQ(tx.at("rule_ids"), nlohmann::json::array({"CL-TXORIGIN"}));
    const auto& d = tx.at("diagnostics")[0];
    for (const char* key : {"rule_id", "severity", "file", "line", "column", "length", "path", "message",
                            "checklist_ref", "patterns"})
        EXPECT_TRUE(d.contains(key)) << key;
    EXPECT_EQ(d.at("line"), 7);
    EXPECT_TRUE(j.at("additional").is_array());
}

TEST(Report, RenderingIsDeterministic) {
    const std::vector<Diagnostic> ds{diag("CL-DIV", 2), diag("CL-PRAGMA", 1), make_diagnostic("CL-FIXWARN", "w")};
    auto a = build_report(Phase::coding, ds, "t");
    auto b = build_report(Phase::coding, ds, "t");
    EXPECT_EQ(render_text(a), render_text(b));
    EXPECT_EQ(render_json(a), render_json(b));
}
