#include "abcde/sol_parser.hpp"

#include <algorithm>
#include <regex>

#include "sol_lexer.hpp"

namespace abcde::sol {

using detail::Tok;
using detail::Token;

namespace {

constexpr int kMaxDepth = 200;

struct SyntaxError {};

const std::set<std::string_view> kUnits = {"wei",     "gwei",    "szabo", "finney", "ether", "seconds",
                                           "minutes", "hours",   "days",  "weeks",  "years"};

int binary_precedence(std::string_view op) {
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "==" || op == "!=") return 3;
    if (op == "<" || op == ">" || op == "<=" || op == ">=") return 4;
    if (op == "|") return 5;
    if (op == "^") return 6;
    if (op == "&") return 7;
    if (op == "<<" || op == ">>" || op == ">>>") return 8;
    if (op == "+" || op == "-") return 9;
    if (op == "*" || op == "/" || op == "%") return 10;
    if (op == "**") return 11;
    return 0;
}

bool is_assign_op(std::string_view op) {
    return op == "=" || op == "+=" || op == "-=" || op == "*=" || op == "/=" || op == "%=" || op == "|=" ||
           op == "&=" || op == "^=" || op == "<<=" || op == ">>=" || op == ">>>=";
}

bool is_elementary_word(std::string_view w) {
    return canonical_elementary(w).has_value() || w == "fixed" || w == "ufixed";
}

class Parser {
public:
    Parser(detail::LexResult lexed, std::string_view src, std::string file)
        : toks_(std::move(lexed.tokens)), partner_(std::move(lexed.partner)), src_(src), file_(std::move(file)) {
        unit_.file = file_;
        unit_.suppressions = std::move(lexed.suppressions);
        limit_ = toks_.size() - 1;
    }

    ParseResult<SourceUnit> parse() {
        while (!at_end()) {
            try {
                parse_top_level();
            } catch (const SyntaxError&) {
                too_deep_ = false;
                recover_top_level();
            }
        }
        if (!errors_.empty()) return std::move(errors_);
        return std::move(unit_);
    }

private:
    // ---- token access -------------------------------------------------

    const Token& peek(std::size_t ahead = 0) const {
        const std::size_t idx = pos_ + ahead;
        return idx < limit_ ? toks_[idx] : end_token();
    }
    const Token& end_token() const {
        static thread_local Token t;
        t = toks_[std::min(limit_, toks_.size() - 1)];
        t.kind = Tok::end;
        t.text.clear();
        return t;
    }
    const Token& next() {
        const Token& t = peek();
        if (pos_ < limit_) ++pos_;
        return t;
    }
    bool at_end() const { return pos_ >= limit_; }
    bool is_op(std::string_view op, std::size_t ahead = 0) const {
        const Token& t = peek(ahead);
        return t.kind == Tok::op && t.text == op;
    }
    bool is_word(std::string_view w, std::size_t ahead = 0) const {
        const Token& t = peek(ahead);
        return t.kind == Tok::ident && t.text == w;
    }

    static std::string describe(const Token& t) {
        switch (t.kind) {
        case Tok::end: return "end of input";
        case Tok::string: return "string literal";
        case Tok::hex_string: return "hex literal";
        default: return "'" + t.text + "'";
        }
    }

    [[noreturn]] void fail(std::string expected) {
        if (speculating_ == 0) errors_.push_back({peek().span, std::move(expected), describe(peek())});
        throw SyntaxError{};
    }

    void expect_op(std::string_view op) {
        if (!is_op(op)) fail("'" + std::string(op) + "'");
        next();
    }

    std::string expect_ident() {
        if (peek().kind != Tok::ident) fail("identifier");
        return next().text;
    }

    SourceSpan span_from(std::size_t start) const {
        const Token& first = toks_[std::min(start, toks_.size() - 1)];
        SourceSpan s = first.span;
        if (pos_ > start) {
            const Token& last = toks_[pos_ - 1];
            s.length = static_cast<std::uint32_t>(last.offset + last.length - first.offset);
        }
        return s;
    }

    std::size_t partner_of(std::size_t open) const {
        auto it = partner_.find(open);
        return it == partner_.end() ? toks_.size() - 1 : it->second;
    }

    struct DepthGuard {
        Parser& p;
        explicit DepthGuard(Parser& parser) : p(parser) {
            if (++p.depth_ > kMaxDepth) {
                --p.depth_;
                p.too_deep_ = true;
                p.errors_.push_back({p.peek().span, "shallower nesting", p.describe(p.peek())});
                throw SyntaxError{};
            }
        }
        ~DepthGuard() { --p.depth_; }
    };

    // Restricts parsing to tokens before `end` for the lifetime of the scope.
    struct Limit {
        Parser& p;
        std::size_t saved;
        Limit(Parser& parser, std::size_t end) : p(parser), saved(parser.limit_) { p.limit_ = std::min(end, saved); }
        ~Limit() { p.limit_ = saved; }
    };

    // ---- top level ----------------------------------------------------

    void recover_top_level() {
        if (!at_end()) next();
        while (!at_end()) {
            const Token& t = peek();
            if (t.kind == Tok::ident && (t.text == "contract" || t.text == "interface" || t.text == "library" ||
                                         t.text == "pragma" || t.text == "import" || t.text == "abstract")) {
                // Only at file level: contract bodies are skipped as a whole below.
                return;
            }
            if (t.kind == Tok::op && t.text == "{") {
                pos_ = partner_of(pos_);
            }
            next();
        }
    }

    void parse_top_level() {
        if (is_op(";")) {
            next();
            return;
        }
        if (peek().kind != Tok::ident) fail("'pragma', 'import', 'contract', 'interface' or 'library'");
        const std::string& w = peek().text;
        if (w == "pragma") return parse_pragma();
        if (w == "import") return parse_import();
        if (w == "contract" || w == "interface" || w == "library" || w == "abstract") {
            unit_.contracts.push_back(parse_contract());
            return;
        }
        if (w == "struct") {
            unit_.structs.push_back(parse_struct());
            return;
        }
        if (w == "enum") {
            unit_.enums.push_back(parse_enum());
            return;
        }
        fail("'pragma', 'import', 'contract', 'interface' or 'library'");
    }

    void parse_pragma() {
        const Token& kw = next();
        SourceSpan span = kw.span;
        const std::size_t start_idx = pos_;
        std::string name = expect_ident();
        while (!at_end() && !is_op(";")) next();
        if (!is_op(";")) fail("';'");
        const std::size_t begin = toks_[start_idx].offset + toks_[start_idx].length;
        const std::size_t end = peek().offset;
        next();
        if (name != "solidity" || unit_.pragma) return;
        std::string raw(src_.substr(begin, end - begin));
        raw.erase(0, raw.find_first_not_of(" \t\r\n"));
        raw.erase(raw.find_last_not_of(" \t\r\n") + 1);
        PragmaDirective p = parse_pragma_constraint(raw);
        p.span = span;
        p.span.length = static_cast<std::uint32_t>(end + 1 - kw.offset);
        unit_.pragma = std::move(p);
    }

    void parse_import() {
        next();
        std::optional<std::string> path;
        while (!at_end() && !is_op(";")) {
            if (peek().kind == Tok::string && !path) path = peek().text;
            next();
        }
        expect_op(";");
        if (!path) {
            if (speculating_ == 0) errors_.push_back({peek().span, "import path", "no path"});
            throw SyntaxError{};
        }
        unit_.imports.push_back(*path);
    }

    ContractDef parse_contract() {
        ContractDef c;
        if (is_word("abstract")) {
            next();
            c.is_abstract = true;
        }
        const std::string kind = expect_ident();
        if (kind == "interface") c.kind = ContractKind::interface;
        else if (kind == "library") c.kind = ContractKind::library;
        else if (kind != "contract") fail("'contract', 'interface' or 'library'");
        c.span = peek().span;
        c.name = expect_ident();
        if (is_word("is")) {
            next();
            for (;;) {
                c.parents.push_back(parse_path());
                if (is_op("(")) pos_ = partner_of(pos_) + 1;  // base constructor arguments
                if (!is_op(",")) break;
                next();
            }
        }
        if (!is_op("{")) fail("'{'");
        const std::size_t close = partner_of(pos_);
        next();
        {
            Limit lim(*this, close);
            while (!at_end()) parse_member(c);
        }
        pos_ = close + 1;
        return c;
    }

    std::string parse_path() {
        std::string name = expect_ident();
        while (is_op(".") && peek(1).kind == Tok::ident) {
            next();
            name += "." + next().text;
        }
        return name;
    }

    StructDef parse_struct() {
        next();
        StructDef s;
        s.span = peek().span;
        s.name = expect_ident();
        expect_op("{");
        while (!is_op("}")) {
            if (at_end()) fail("'}'");
            Param p;
            p.type = parse_type();
            p.span = peek().span;
            p.name = expect_ident();
            expect_op(";");
            s.members.push_back(std::move(p));
        }
        next();
        return s;
    }

    EnumDef parse_enum() {
        next();
        EnumDef e;
        e.span = peek().span;
        e.name = expect_ident();
        expect_op("{");
        while (!is_op("}")) {
            e.values.push_back(expect_ident());
            if (is_op(",")) next();
            else if (!is_op("}")) fail("',' or '}'");
        }
        next();
        return e;
    }

    // ---- contract members ---------------------------------------------

    void parse_member(ContractDef& c) {
        if (is_op(";")) {
            next();
            return;
        }
        if (peek().kind != Tok::ident) fail("contract member");
        const std::string w = peek().text;
        if (w == "using") return parse_using(c);
        if (w == "struct") {
            c.structs.push_back(parse_struct());
            return;
        }
        if (w == "enum") {
            c.enums.push_back(parse_enum());
            return;
        }
        if (w == "event") return parse_event(c);
        if (w == "modifier") return parse_modifier(c);
        if (w == "error") {
            while (!at_end() && !is_op(";")) next();
            expect_op(";");
            return;
        }
        if (w == "function" || w == "constructor" || w == "fallback" || w == "receive") {
            if (w != "function" && !is_op("(", 1)) return parse_state_var(c);
            c.functions.push_back(parse_function(c.name));
            return;
        }
        parse_state_var(c);
    }

    void parse_using(ContractDef& c) {
        next();
        UsingFor u;
        u.library = parse_path();
        if (!is_word("for")) fail("'for'");
        next();
        if (is_op("*")) {
            next();
        } else {
            u.target = parse_type();
        }
        while (!at_end() && !is_op(";")) next();  // `global` and similar suffixes
        expect_op(";");
        c.using_declarations.push_back(std::move(u));
    }

    void parse_event(ContractDef& c) {
        next();
        EventDef e;
        e.span = peek().span;
        e.name = expect_ident();
        e.params = parse_param_list(true);
        if (is_word("anonymous")) next();
        expect_op(";");
        c.events.push_back(std::move(e));
    }

    void parse_modifier(ContractDef& c) {
        next();
        ModifierDef m;
        m.span = peek().span;
        m.name = expect_ident();
        if (is_op("(")) m.params = parse_param_list(false);
        while (is_word("virtual") || is_word("override")) {
            const bool has_paths = is_word("override") && is_op("(", 1);
            next();
            if (has_paths) pos_ = partner_of(pos_) + 1;
        }
        if (is_op(";")) {
            next();
        } else {
            m.body = parse_body();
        }
        c.modifiers.push_back(std::move(m));
    }

    FuncDef parse_function(const std::string& contract_name) {
        FuncDef f;
        const Token& kw = next();
        f.span = kw.span;
        if (kw.text == "constructor") {
            f.is_constructor = true;
        } else if (kw.text == "fallback") {
            f.is_fallback = true;
        } else if (kw.text == "receive") {
            f.is_receive = true;
        } else if (peek().kind == Tok::ident) {
            f.span = peek().span;
            f.name = next().text;
            if (f.name == contract_name) f.is_constructor = true;
        } else {
            f.is_fallback = true;
        }
        f.params = parse_param_list(false);
        for (;;) {
            if (peek().kind != Tok::ident) break;
            const std::string w = peek().text;
            if (w == "public") f.visibility = Visibility::public_;
            else if (w == "external") f.visibility = Visibility::external;
            else if (w == "internal") f.visibility = Visibility::internal;
            else if (w == "private") f.visibility = Visibility::private_;
            else if (w == "payable") f.mutability = Mutability::payable;
            else if (w == "view" || w == "constant") f.mutability = Mutability::view;
            else if (w == "pure") f.mutability = Mutability::pure;
            else if (w == "virtual") {
            } else if (w == "override") {
                if (is_op("(", 1)) {
                    next();
                    pos_ = partner_of(pos_);
                }
            } else if (w == "returns") {
                next();
                f.returns = parse_param_list(false);
                continue;
            } else {
                ModifierInvocation inv;
                const std::size_t start = pos_;
                inv.name = parse_path();
                if (is_op("(")) inv.args = parse_call_args();
                inv.span = span_from(start);
                f.modifiers.push_back(std::move(inv));
                continue;
            }
            next();
        }
        if (is_op(";")) {
            next();
        } else {
            f.body = parse_body();
        }
        return f;
    }

    void parse_state_var(ContractDef& c) {
        VarDecl v;
        v.type_name = parse_type();
        for (;;) {
            if (peek().kind != Tok::ident || is_op("=", 1) || is_op(";", 1)) break;
            const std::string w = peek().text;
            if (w == "public") v.visibility = Visibility::public_;
            else if (w == "internal") v.visibility = Visibility::internal;
            else if (w == "private") v.visibility = Visibility::private_;
            else if (w == "constant") v.is_constant = true;
            else if (w == "immutable") v.is_immutable = true;
            else if (w == "override") {
                if (is_op("(", 1)) {
                    next();
                    pos_ = partner_of(pos_);
                }
            } else {
                break;
            }
            next();
        }
        v.span = peek().span;
        v.name = expect_ident();
        if (is_op("=")) {
            next();
            v.initializer = parse_expr();
        }
        expect_op(";");
        c.state_vars.push_back(std::move(v));
    }

    std::vector<Param> parse_param_list(bool allow_indexed) {
        if (!is_op("(")) fail("'('");
        const std::size_t close = partner_of(pos_);
        next();
        std::vector<Param> params;
        {
            Limit lim(*this, close);
            while (!at_end()) {
                Param p;
                p.span = peek().span;
                p.type = parse_type();
                while (peek().kind == Tok::ident &&
                       (peek().text == "memory" || peek().text == "storage" || peek().text == "calldata" ||
                        (allow_indexed && peek().text == "indexed")))
                    next();
                if (peek().kind == Tok::ident) {
                    p.span = peek().span;
                    p.name = next().text;
                }
                params.push_back(std::move(p));
                if (is_op(",")) next();
                else if (!at_end()) fail("',' or ')'");
            }
        }
        pos_ = close + 1;
        return params;
    }

    // ---- types ----------------------------------------------------------

    TypeName parse_type() {
        DepthGuard guard(*this);
        TypeName t;
        if (is_word("mapping") && is_op("(", 1)) {
            next();
            next();
            TypeName key = parse_type();
            if (peek().kind == Tok::ident) next();  // named key
            expect_op("=>");
            TypeName value = parse_type();
            if (peek().kind == Tok::ident) next();  // named value
            expect_op(")");
            t = TypeName::mapping(std::move(key), std::move(value));
        } else if (peek().kind == Tok::ident) {
            const std::string word = peek().text;
            if (word == "function") fail("type other than function type");
            if (auto e = canonical_elementary(word)) {
                next();
                if (*e == "address" && is_word("payable")) {
                    next();
                    t = TypeName::elementary("address payable");
                } else {
                    t = TypeName::elementary(*e);
                }
            } else if (word == "fixed" || word == "ufixed" || word.starts_with("fixed") || word.starts_with("ufixed")) {
                next();
                t = TypeName::elementary(word);
            } else {
                t = TypeName::user(parse_path());
            }
        } else {
            fail("type name");
        }
        while (is_op("[")) {
            const std::size_t close = partner_of(pos_);
            if (close == pos_ + 1) {
                pos_ = close + 1;
                t = TypeName::array_of(std::move(t));
                continue;
            }
            std::optional<std::uint64_t> length = 0;
            if (close == pos_ + 2 && peek(1).kind == Tok::number) {
                try {
                    length = std::stoull(peek(1).text, nullptr, 0);
                } catch (...) {
                    length = 0;
                }
            } else {
                // Lengths given by constant expressions are left unresolved (0).
                Limit lim(*this, close);
                ++speculating_;
                try {
                    next();
                    (void)parse_expr();
                } catch (const SyntaxError&) {
                    --speculating_;
                    throw;
                }
                --speculating_;
                if (!at_end()) fail("']'");
            }
            pos_ = close + 1;
            t = TypeName::array_of(std::move(t), length);
        }
        return t;
    }

    // ---- statements -----------------------------------------------------

    std::vector<Stmt> parse_body() {
        if (!is_op("{")) fail("'{' or ';'");
        Stmt block = parse_block();
        return std::move(block.body);
    }

    Stmt parse_block() {
        Stmt s;
        s.kind = StmtKind::block;
        const std::size_t start = pos_;
        const std::size_t close = partner_of(pos_);
        next();
        {
            Limit lim(*this, close);
            while (!at_end()) s.body.push_back(parse_statement_or_opaque());
        }
        pos_ = close + 1;
        s.span = span_from(start);
        return s;
    }

    Stmt parse_statement_or_opaque() {
        const std::size_t start = pos_;
        const std::size_t saved_errors = errors_.size();
        ++speculating_;
        try {
            Stmt s = parse_statement();
            --speculating_;
            return s;
        } catch (const SyntaxError&) {
            --speculating_;
            // Too-deep input is an error, not an unsupported construct.
            if (too_deep_) throw;
            errors_.resize(saved_errors);
        }
        pos_ = start;
        return skip_opaque();
    }

    // Skips one unsupported statement: up to `;` or a brace group at depth 0.
    Stmt skip_opaque() {
        const std::size_t start = pos_;
        while (!at_end()) {
            if (is_op("(") || is_op("[")) {
                pos_ = partner_of(pos_) + 1;
                continue;
            }
            if (is_op("{")) {
                pos_ = partner_of(pos_) + 1;
                if (is_op(";")) next();
                break;
            }
            if (is_op(";")) {
                next();
                break;
            }
            next();
        }
        if (pos_ == start) next();
        Stmt s;
        s.kind = StmtKind::opaque;
        s.span = span_from(start);
        return s;
    }

    Stmt parse_statement() {
        DepthGuard guard(*this);
        const std::size_t start = pos_;
        Stmt s;
        if (is_op("{")) return parse_block();
        const Token& t = peek();
        const std::string w = t.kind == Tok::ident ? t.text : std::string();
        if (w == "unchecked" && is_op("{", 1)) {
            next();
            s = parse_block();
        } else if (w == "if") {
            next();
            s.kind = StmtKind::if_;
            s.condition = parse_paren_expr();
            s.body.push_back(parse_statement_or_opaque());
            if (is_word("else")) {
                next();
                s.else_body.push_back(parse_statement_or_opaque());
            }
        } else if (w == "while") {
            next();
            s.kind = StmtKind::while_;
            s.condition = parse_paren_expr();
            s.body.push_back(parse_statement_or_opaque());
        } else if (w == "do") {
            next();
            s.kind = StmtKind::do_while;
            s.body.push_back(parse_statement_or_opaque());
            if (!is_word("while")) fail("'while'");
            next();
            s.condition = parse_paren_expr();
            expect_op(";");
        } else if (w == "for") {
            next();
            parse_for(s);
        } else if (w == "return") {
            next();
            s.kind = StmtKind::return_;
            if (!is_op(";")) s.expr = parse_expr();
            expect_op(";");
        } else if (w == "emit") {
            next();
            s.kind = StmtKind::emit;
            s.expr = parse_expr();
            expect_op(";");
        } else if (w == "delete") {
            next();
            s.kind = StmtKind::delete_;
            s.expr = parse_expr();
            expect_op(";");
        } else if (w == "assembly" || w == "try" || w == "break" || w == "continue" || w == "throw") {
            fail("supported statement");
        } else {
            s = parse_simple_statement();
            expect_op(";");
        }
        s.span = span_from(start);
        return s;
    }

    Expr parse_paren_expr() {
        if (!is_op("(")) fail("'('");
        const std::size_t close = partner_of(pos_);
        next();
        Expr e;
        {
            Limit lim(*this, close);
            e = parse_expr();
            if (!at_end()) fail("')'");
        }
        pos_ = close + 1;
        return e;
    }

    void parse_for(Stmt& s) {
        s.kind = StmtKind::for_;
        if (!is_op("(")) fail("'('");
        const std::size_t close = partner_of(pos_);
        next();
        {
            Limit lim(*this, close);
            if (is_op(";")) {
                next();
            } else {
                const std::size_t init_start = pos_;
                Stmt init = parse_simple_statement();
                init.span = span_from(init_start);
                s.init.push_back(std::move(init));
                expect_op(";");
            }
            if (!is_op(";")) s.condition = parse_expr();
            expect_op(";");
            if (!at_end()) s.expr = parse_expr();
            if (!at_end()) fail("')'");
        }
        pos_ = close + 1;
        s.body.push_back(parse_statement_or_opaque());
    }

    // Variable declaration or expression, without the trailing `;`.
    Stmt parse_simple_statement() {
        const std::size_t start = pos_;
        if (auto decl = try_local_declaration()) return std::move(*decl);
        pos_ = start;
        Stmt s;
        s.kind = StmtKind::expr;
        s.expr = parse_expr();
        return s;
    }

    bool at_data_location() const {
        return is_word("memory") || is_word("storage") || is_word("calldata");
    }

    std::optional<Stmt> try_local_declaration() {
        const std::size_t start = pos_;
        Stmt s;
        s.kind = StmtKind::local_var;
        ++speculating_;
        struct Restore {
            int& n;
            ~Restore() { --n; }
        } restore{speculating_};
        try {
            if (is_op("(")) {
                const std::size_t close = partner_of(pos_);
                next();
                bool typed = false;
                {
                    Limit lim(*this, close);
                    while (!at_end()) {
                        LocalVar v;
                        if (!is_op(",")) {
                            v.type = parse_type();
                            if (at_data_location()) next();
                            v.span = peek().span;
                            v.name = expect_ident();
                            typed = true;
                        }
                        s.vars.push_back(std::move(v));
                        if (is_op(",")) {
                            next();
                            if (at_end()) s.vars.emplace_back();
                        } else if (!at_end()) {
                            fail("','");
                        }
                    }
                }
                pos_ = close + 1;
                if (!typed || !is_op("=")) throw SyntaxError{};
            } else {
                LocalVar v;
                if (is_word("var")) {
                    next();
                    v.type = TypeName::user("var");
                } else {
                    v.type = parse_type();
                }
                if (at_data_location()) next();
                if (peek().kind != Tok::ident) throw SyntaxError{};
                v.span = peek().span;
                v.name = next().text;
                if (!is_op("=") && !is_op(";") && !at_end()) throw SyntaxError{};
                s.vars.push_back(std::move(v));
            }
        } catch (const SyntaxError&) {
            pos_ = start;
            return std::nullopt;
        }
        if (is_op("=")) {
            next();
            --speculating_;
            try {
                s.expr = parse_expr();
            } catch (...) {
                ++speculating_;
                throw;
            }
            ++speculating_;
        }
        return s;
    }

    // ---- expressions ----------------------------------------------------

    Expr parse_expr() {
        DepthGuard guard(*this);
        const std::size_t start = pos_;
        Expr lhs = parse_conditional();
        if (peek().kind == Tok::op && is_assign_op(peek().text)) {
            Expr e;
            e.kind = ExprKind::assignment;
            e.text = next().text;
            e.children.push_back(std::move(lhs));
            e.children.push_back(parse_expr());
            e.span = span_from(start);
            return e;
        }
        return lhs;
    }

    Expr parse_conditional() {
        const std::size_t start = pos_;
        Expr cond = parse_binary(1);
        if (!is_op("?")) return cond;
        next();
        Expr e;
        e.kind = ExprKind::conditional;
        e.children.push_back(std::move(cond));
        e.children.push_back(parse_expr());
        expect_op(":");
        e.children.push_back(parse_expr());
        e.span = span_from(start);
        return e;
    }

    Expr parse_binary(int min_prec) {
        DepthGuard guard(*this);
        const std::size_t start = pos_;
        Expr lhs = parse_unary();
        for (;;) {
            if (peek().kind != Tok::op) break;
            const std::string op = peek().text;
            const int prec = binary_precedence(op);
            if (prec == 0 || prec < min_prec) break;
            next();
            Expr rhs = op == "**" ? parse_binary(prec) : parse_binary(prec + 1);
            Expr e;
            e.kind = ExprKind::binary;
            e.text = op;
            e.children.push_back(std::move(lhs));
            e.children.push_back(std::move(rhs));
            e.span = span_from(start);
            lhs = std::move(e);
        }
        return lhs;
    }

    Expr parse_unary() {
        DepthGuard guard(*this);
        const std::size_t start = pos_;
        const Token& t = peek();
        const bool prefix_op = t.kind == Tok::op && (t.text == "!" || t.text == "~" || t.text == "-" ||
                                                     t.text == "+" || t.text == "++" || t.text == "--");
        if (prefix_op || (t.kind == Tok::ident && t.text == "delete")) {
            Expr e;
            e.kind = ExprKind::unary;
            e.text = next().text;
            e.children.push_back(parse_unary());
            e.span = span_from(start);
            return e;
        }
        if (is_word("new")) {
            next();
            Expr e;
            e.kind = ExprKind::new_expr;
            e.text = parse_type().to_string();
            e.span = span_from(start);
            return parse_postfix(std::move(e), start);
        }
        return parse_postfix(parse_primary(), start);
    }

    std::vector<Expr> parse_call_args() {
        const std::size_t close = partner_of(pos_);
        next();
        std::vector<Expr> args;
        {
            Limit lim(*this, close);
            if (is_op("{")) {
                // named arguments: f({a: 1, b: 2})
                const std::size_t inner = partner_of(pos_);
                next();
                {
                    Limit lim2(*this, inner);
                    while (!at_end()) {
                        expect_ident();
                        expect_op(":");
                        args.push_back(parse_expr());
                        if (is_op(",")) next();
                        else if (!at_end()) fail("',' or '}'");
                    }
                }
                pos_ = inner + 1;
            } else {
                while (!at_end()) {
                    args.push_back(parse_expr());
                    if (is_op(",")) next();
                    else if (!at_end()) fail("',' or ')'");
                }
            }
            if (!at_end()) fail("')'");
        }
        pos_ = close + 1;
        return args;
    }

    Expr parse_postfix(Expr base, std::size_t start) {
        for (;;) {
            if (is_op(".")) {
                next();
                Expr e;
                e.kind = ExprKind::member;
                e.text = expect_ident();
                e.children.push_back(std::move(base));
                e.span = span_from(start);
                base = std::move(e);
            } else if (is_op("[")) {
                const std::size_t close = partner_of(pos_);
                next();
                Expr e;
                e.kind = ExprKind::index;
                e.children.push_back(std::move(base));
                {
                    Limit lim(*this, close);
                    if (!at_end() && !is_op(":")) e.children.push_back(parse_expr());
                    if (is_op(":")) {
                        next();
                        e.kind = ExprKind::opaque;  // slice
                        if (!at_end()) e.children.push_back(parse_expr());
                    }
                    if (!at_end()) fail("']'");
                }
                pos_ = close + 1;
                e.span = span_from(start);
                base = std::move(e);
            } else if (is_op("(")) {
                Expr e;
                e.kind = ExprKind::call;
                e.children.push_back(std::move(base));
                for (auto& a : parse_call_args()) e.children.push_back(std::move(a));
                e.span = span_from(start);
                base = std::move(e);
            } else if (is_op("{") && peek(1).kind == Tok::ident && is_op(":", 2)) {
                // call options: x.call{value: v, gas: g}(...)
                const std::size_t close = partner_of(pos_);
                next();
                std::vector<std::pair<std::string, Expr>> opts;
                {
                    Limit lim(*this, close);
                    while (!at_end()) {
                        std::string name = expect_ident();
                        expect_op(":");
                        opts.emplace_back(std::move(name), parse_expr());
                        if (is_op(",")) next();
                        else if (!at_end()) fail("',' or '}'");
                    }
                }
                pos_ = close + 1;
                if (!is_op("(")) fail("'('");
                Expr e;
                e.kind = ExprKind::call;
                e.children.push_back(std::move(base));
                for (auto& a : parse_call_args()) e.children.push_back(std::move(a));
                e.options = std::move(opts);
                e.span = span_from(start);
                base = std::move(e);
            } else if (is_op("++") || is_op("--")) {
                Expr e;
                e.kind = ExprKind::unary;
                e.prefix = false;
                e.text = next().text;
                e.children.push_back(std::move(base));
                e.span = span_from(start);
                base = std::move(e);
            } else {
                return base;
            }
        }
    }

    Expr parse_primary() {
        DepthGuard guard(*this);
        const std::size_t start = pos_;
        const Token& t = peek();
        Expr e;
        switch (t.kind) {
        case Tok::number:
            e.kind = ExprKind::literal;
            e.literal = LiteralKind::number;
            e.text = next().text;
            if (peek().kind == Tok::ident && kUnits.count(peek().text)) e.text += " " + next().text;
            break;
        case Tok::string:
            e.kind = ExprKind::literal;
            e.literal = LiteralKind::string;
            e.text = next().text;
            while (peek().kind == Tok::string) e.text += next().text;
            break;
        case Tok::hex_string:
            e.kind = ExprKind::literal;
            e.literal = LiteralKind::hex;
            e.text = next().text;
            break;
        case Tok::ident:
            if (t.text == "true" || t.text == "false") {
                e.kind = ExprKind::literal;
                e.literal = LiteralKind::boolean;
                e.text = next().text;
            } else if (is_elementary_word(t.text) || t.text == "mapping") {
                if (t.text == "mapping") fail("expression");
                e.kind = ExprKind::elementary;
                {
                    const std::string word = next().text;
                    e.text = canonical_elementary(word).value_or(word);
                }
                if (e.text == "address" && is_word("payable")) next();
                if (is_op("[")) {
                    // `uint[]` in expressions such as abi.decode(x, (uint[]))
                    pos_ = start;
                    e.text = parse_type().to_string();
                }
            } else {
                e.kind = ExprKind::identifier;
                e.text = next().text;
            }
            break;
        case Tok::op:
            if (t.text == "(") {
                const std::size_t close = partner_of(pos_);
                next();
                std::vector<Expr> items;
                bool comma = false;
                {
                    Limit lim(*this, close);
                    while (!at_end()) {
                        if (is_op(",")) {
                            items.emplace_back();
                            comma = true;
                            next();
                            if (at_end()) items.emplace_back();
                            continue;
                        }
                        items.push_back(parse_expr());
                        if (is_op(",")) {
                            comma = true;
                            next();
                            if (at_end()) items.emplace_back();
                        } else if (!at_end()) {
                            fail("',' or ')'");
                        }
                    }
                }
                pos_ = close + 1;
                if (items.size() == 1 && !comma) return std::move(items.front());
                e.kind = ExprKind::tuple;
                e.children = std::move(items);
            } else if (t.text == "[") {
                const std::size_t close = partner_of(pos_);
                next();
                {
                    Limit lim(*this, close);
                    while (!at_end()) {
                        e.children.push_back(parse_expr());
                        if (is_op(",")) next();
                        else if (!at_end()) fail("',' or ']'");
                    }
                }
                pos_ = close + 1;
                e.kind = ExprKind::opaque;  // inline array
            } else {
                fail("expression");
            }
            break;
        case Tok::end: fail("expression");
        }
        e.span = span_from(start);
        return e;
    }

    std::vector<Token> toks_;
    std::map<std::size_t, std::size_t> partner_;
    std::string_view src_;
    std::string file_;
    std::size_t pos_ = 0;
    std::size_t limit_ = 0;
    int depth_ = 0;
    bool too_deep_ = false;
    int speculating_ = 0;
    SourceUnit unit_;
    std::vector<ParseError> errors_;
};

std::optional<std::array<int, 3>> parse_version(const std::string& text) {
    static const std::regex kVersion(R"((\d+)(?:\.(\d+))?(?:\.(\d+))?)");
    std::smatch m;
    if (!std::regex_match(text, m, kVersion)) return std::nullopt;
    auto part = [&](int i) { return m[i].matched ? std::stoi(m[i].str()) : 0; };
    return std::array<int, 3>{part(1), part(2), part(3)};
}

}  // namespace

PragmaDirective parse_pragma_constraint(std::string raw) {
    PragmaDirective p;
    p.raw = std::move(raw);
    static const std::regex kLocked(R"(^\s*=?\s*(\d+\.\d+\.\d+)\s*$)");
    std::smatch m;
    if (std::regex_match(p.raw, m, kLocked)) {
        p.locked = true;
        p.version = parse_version(m[1].str());
        p.min_version = p.version;
        return p;
    }
    static const std::regex kTerm(R"((\^|~|>=|<=|>|<|=)?\s*v?(\d+(?:\.\d+){0,2}))");
    for (std::sregex_iterator it(p.raw.begin(), p.raw.end(), kTerm), end; it != end; ++it) {
        const std::string op = (*it)[1].str();
        if (op == "<" || op == "<=") continue;
        auto v = parse_version((*it)[2].str());
        if (v && (!p.min_version || *v < *p.min_version)) p.min_version = v;
    }
    return p;
}

bool Expr::is_member_of(std::string_view object_name, std::string_view member_name) const {
    return kind == ExprKind::member && text == member_name && !children.empty() &&
           children[0].is_identifier(object_name);
}

const Expr& Expr::callee() const {
    const Expr* c = &children.at(0);
    while (c->kind == ExprKind::call && !c->children.empty() && c->children[0].kind == ExprKind::member &&
           (c->children[0].text == "value" || c->children[0].text == "gas"))
        c = &c->children[0].children.at(0);
    return *c;
}

std::string_view Expr::call_name() const {
    if (kind != ExprKind::call) return {};
    const Expr& c = callee();
    return c.kind == ExprKind::identifier ? std::string_view(c.text) : std::string_view();
}

const FuncDef* ContractDef::fallback() const {
    for (const auto& f : functions)
        if (f.is_fallback) return &f;
    return nullptr;
}

const ContractDef* SourceUnit::find_contract(std::string_view name) const {
    for (const auto& c : contracts)
        if (c.name == name) return &c;
    return nullptr;
}

bool SourceUnit::suppressed(const std::string& rule_id, std::uint32_t line) const {
    auto it = suppressions.find(line);
    return it != suppressions.end() && it->second.count(rule_id) > 0;
}

ParseResult<SourceUnit> parse_solidity(std::string_view text, const std::string& file) {
    auto lexed = detail::lex(text, file);
    if (!lexed.errors.empty()) return std::move(lexed.errors);
    return Parser(std::move(lexed), text, file).parse();
}

}  // namespace abcde::sol
