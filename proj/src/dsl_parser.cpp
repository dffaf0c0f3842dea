#include <cctype>
#include <set>

#include "abcde/dsl.hpp"

namespace abcde::dsl {

using namespace abcde::model;

namespace {

enum class Tok { ident, string, punct, arrow, dashed_arrow, fat_arrow, minus, end, invalid };

struct Token {
    Tok kind;
    std::string text;
    SourceSpan span;
    int depth = 0;  // brace depth before this token
};

constexpr int kMaxTypeDepth = 64;

std::vector<Token> lex(std::string_view src, const std::string& file) {
    std::vector<Token> out;
    std::uint32_t line = 1, col = 1;
    std::size_t i = 0;
    int depth = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto push = [&](Tok kind, std::string text, std::size_t len) {
        Token t{kind, std::move(text), SourceSpan{file, line, col, static_cast<std::uint32_t>(len)}, depth};
        advance(len);
        out.push_back(std::move(t));
    };
    while (i < src.size()) {
        const char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
        } else if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') advance(1);
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            push(Tok::ident, std::string(src.substr(i, j - i)), j - i);
        } else if (c == '"') {
            std::string value;
            std::size_t j = i + 1;
            bool closed = false;
            while (j < src.size() && src[j] != '\n') {
                if (src[j] == '"') {
                    closed = true;
                    break;
                }
                if (src[j] == '\\' && j + 1 < src.size()) {
                    const char e = src[j + 1];
                    value += e == 'n' ? '\n' : e == 't' ? '\t' : e;
                    j += 2;
                    continue;
                }
                value += src[j++];
            }
            if (!closed) {
                push(Tok::invalid, "unterminated string", j - i);
            } else {
                push(Tok::string, std::move(value), j + 1 - i);
            }
        } else if (src.substr(i, 3) == "-->") {
            push(Tok::dashed_arrow, "-->", 3);
        } else if (src.substr(i, 2) == "->") {
            push(Tok::arrow, "->", 2);
        } else if (src.substr(i, 2) == "=>") {
            push(Tok::fat_arrow, "=>", 2);
        } else if (c == '-') {
            push(Tok::minus, "-", 1);
        } else if (std::string_view("{}()[]:,;@").find(c) != std::string_view::npos) {
            if (c == '}') --depth;
            push(Tok::punct, std::string(1, c), 1);
            if (c == '{') ++depth;
        } else {
            std::size_t len = 1;
            auto uc = static_cast<unsigned char>(c);
            if (uc >= 0xC0) len = uc >= 0xF0 ? 4 : uc >= 0xE0 ? 3 : 2;
            len = std::min(len, src.size() - i);
            push(Tok::invalid, std::string(src.substr(i, len)), len);
        }
    }
    out.push_back(Token{Tok::end, "", SourceSpan{file, line, col, 0}, depth});
    return out;
}

struct SyntaxError {};

bool is_visibility(std::string_view w) {
    return w == "public" || w == "external" || w == "internal" || w == "private";
}

Visibility to_visibility(std::string_view w) {
    if (w == "external") return Visibility::external;
    if (w == "internal") return Visibility::internal;
    if (w == "private") return Visibility::private_;
    return Visibility::public_;
}

bool is_mutability(std::string_view w) { return w == "payable" || w == "view" || w == "pure"; }

Mutability to_mutability(std::string_view w) {
    if (w == "payable") return Mutability::payable;
    if (w == "view") return Mutability::view;
    return Mutability::pure;
}

bool is_decl_keyword(std::string_view w) {
    return w == "actor" || w == "contract" || w == "interface" || w == "library" || w == "struct" ||
           w == "enum" || w == "scenario" || w == "goal";
}

class Parser {
public:
    Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    ParseResult<SystemModel> parse() {
        SystemModel m;
        try {
            expect_word("system");
            m.name = expect_ident(&m.span);
            expect_punct("{");
        } catch (const SyntaxError&) {
            return std::move(errors_);
        }
        enum Stage { actors, decls, scenarios } stage = actors;
        bool first = true;
        while (!at_end() && !(is_punct("}") && peek().depth == 0)) {
            try {
                const std::string word = peek().kind == Tok::ident ? peek().text : std::string();
                if (word == "goal" && first) {
                    next();
                    m.goal = expect_string("goal text");
                } else if (word == "actor" && stage == actors) {
                    m.actors.push_back(parse_actor());
                } else if ((word == "contract" || word == "interface" || word == "library" || word == "struct" ||
                            word == "enum") && stage <= decls) {
                    stage = decls;
                    parse_decl(m);
                } else if (word == "scenario") {
                    stage = scenarios;
                    m.scenarios.push_back(parse_scenario());
                } else {
                    fail(stage == actors    ? "'actor', a declaration, 'scenario' or '}'"
                         : stage == decls   ? "a declaration, 'scenario' or '}'"
                                            : "'scenario' or '}'");
                }
            } catch (const SyntaxError&) {
                recover();
            }
            first = false;
        }
        if (at_end()) {
            error_here("'}'");
        } else {
            next();
            if (!at_end()) error_here("end of input");
        }
        if (!errors_.empty()) return std::move(errors_);
        return m;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    const Token& next() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    bool at_end() const { return peek().kind == Tok::end; }
    bool is_punct(std::string_view p, std::size_t ahead = 0) const {
        return peek(ahead).kind == Tok::punct && peek(ahead).text == p;
    }
    bool is_word(std::string_view w, std::size_t ahead = 0) const {
        return peek(ahead).kind == Tok::ident && peek(ahead).text == w;
    }

    static std::string describe(const Token& t) {
        switch (t.kind) {
        case Tok::end: return "end of input";
        case Tok::string: return "string \"" + t.text + "\"";
        case Tok::invalid: return t.text == "unterminated string" ? t.text : "'" + t.text + "'";
        default: return "'" + t.text + "'";
        }
    }

    void error_here(std::string expected) {
        errors_.push_back({peek().span, std::move(expected), describe(peek())});
    }

    [[noreturn]] void fail(std::string expected) {
        error_here(std::move(expected));
        throw SyntaxError{};
    }

    void recover() {
        if (!at_end()) next();
        while (!at_end()) {
            const Token& t = peek();
            if (t.depth == 1 && t.kind == Tok::ident && is_decl_keyword(t.text)) return;
            if (t.depth == 0 && t.kind == Tok::punct && t.text == "}") return;
            next();
        }
    }

    void expect_punct(std::string_view p) {
        if (!is_punct(p)) fail("'" + std::string(p) + "'");
        next();
    }

    void expect_word(std::string_view w) {
        if (!is_word(w)) fail("'" + std::string(w) + "'");
        next();
    }

    std::string expect_ident(SourceSpan* span = nullptr) {
        if (peek().kind != Tok::ident) fail("identifier");
        if (span) *span = peek().span;
        return next().text;
    }

    std::string expect_string(std::string_view what) {
        if (peek().kind != Tok::string) fail(std::string(what));
        return next().text;
    }

    void skip_semicolons() {
        while (is_punct(";")) next();
    }

    ActorDecl parse_actor() {
        next();
        ActorDecl a;
        a.name = expect_ident(&a.span);
        expect_punct(":");
        a.kind = parse_kind();
        return a;
    }

    ActorKind parse_kind() {
        if (peek().kind == Tok::ident)
            if (auto k = parse_actor_kind(peek().text)) {
                next();
                return *k;
            }
        fail("actor kind (person, system, device, contract, external_contract, oracle, account)");
    }

    TypeName parse_base_type() {
        std::string word = expect_ident();
        if (auto e = canonical_elementary(word)) return TypeName::elementary(*e);
        return TypeName::user(std::move(word));
    }

    TypeName parse_type(int depth = 0) {
        if (depth > kMaxTypeDepth) fail("a shallower type");
        TypeName t;
        if (is_word("mapping") && is_punct("(", 1)) {
            next();
            next();
            if (is_word("mapping")) fail("elementary key type");
            TypeName key = parse_base_type();
            if (peek().kind != Tok::fat_arrow) fail("'=>'");
            next();
            TypeName value = parse_type(depth + 1);
            expect_punct(")");
            t = TypeName::mapping(std::move(key), std::move(value));
        } else {
            t = parse_base_type();
        }
        while (is_punct("[") && is_punct("]", 1)) {
            next();
            next();
            t = TypeName::array_of(std::move(t));
        }
        return t;
    }

    std::vector<Param> parse_params() {
        std::vector<Param> params;
        expect_punct("(");
        if (!is_punct(")")) {
            for (;;) {
                Param p;
                p.name = expect_ident();
                expect_punct(":");
                p.type = parse_type();
                params.push_back(std::move(p));
                if (!is_punct(",")) break;
                next();
            }
        }
        expect_punct(")");
        return params;
    }

    std::vector<std::string> parse_ident_list() {
        std::vector<std::string> out;
        out.push_back(expect_ident());
        while (is_punct(",")) {
            next();
            out.push_back(expect_ident());
        }
        return out;
    }

    void parse_decl(SystemModel& m) {
        const std::string word = next().text;
        if (word == "struct") {
            StructDecl s;
            s.name = expect_ident(&s.span);
            expect_punct("{");
            while (!is_punct("}")) {
                Param f;
                f.name = expect_ident();
                expect_punct(":");
                f.type = parse_type();
                s.fields.push_back(std::move(f));
                skip_semicolons();
            }
            next();
            m.add(std::move(s));
            return;
        }
        if (word == "enum") {
            EnumDecl e;
            e.name = expect_ident(&e.span);
            expect_punct("{");
            e.values = parse_ident_list();
            expect_punct("}");
            m.add(std::move(e));
            return;
        }

        ContractDecl c;
        c.kind = word == "interface" ? ContractKind::interface
                 : word == "library" ? ContractKind::library_contract
                                     : ContractKind::contract;
        c.name = expect_ident(&c.span);
        if (c.kind == ContractKind::contract) {
            if (is_word("is")) {
                next();
                c.parents = parse_ident_list();
            }
            if (is_punct("@")) {
                next();
                expect_word("pattern");
                expect_punct("(");
                for (;;) {
                    if (peek().kind != Tok::ident || !parse_pattern(peek().text))
                        fail("pattern id (CEI, ES, SB, RL, MU, BL, GC, WF, AU, OR, RN, TC, TE, MH, PD)");
                    c.pattern_tags.insert(*parse_pattern(next().text));
                    if (!is_punct(",")) break;
                    next();
                }
                expect_punct(")");
            }
        }
        expect_punct("{");
        while (!is_punct("}")) {
            if (at_end()) fail("'}'");
            if (peek().kind == Tok::ident && is_punct("{", 1) &&
                (peek().text == "state" || peek().text == "events" || peek().text == "modifiers" ||
                 peek().text == "functions")) {
                parse_section(c);
            } else if (c.kind != ContractKind::contract) {
                c.functions.push_back(parse_fnsig());
            } else {
                fail("section ('state', 'events', 'modifiers' or 'functions')");
            }
        }
        next();
        m.add(std::move(c));
    }

    void parse_section(ContractDecl& c) {
        const std::string section = next().text;
        next();  // {
        while (!is_punct("}")) {
            if (at_end()) fail("'}'");
            if (section == "state") {
                StateVar v;
                v.name = expect_ident(&v.span);
                expect_punct(":");
                v.type = parse_type();
                if (peek().kind == Tok::ident && is_visibility(peek().text) && !is_punct(":", 1)) {
                    v.visibility = to_visibility(next().text);
                }
                c.state_vars.push_back(std::move(v));
            } else if (section == "events") {
                EventDecl e;
                e.name = expect_ident(&e.span);
                e.params = parse_params();
                c.events.push_back(std::move(e));
            } else if (section == "modifiers") {
                ModifierDecl mod;
                mod.name = expect_ident(&mod.span);
                if (is_punct("(")) mod.params = parse_params();
                if (peek().kind == Tok::string) mod.guard = next().text;
                c.modifiers.push_back(std::move(mod));
            } else {
                c.functions.push_back(parse_fnsig());
            }
            skip_semicolons();
        }
        next();
    }

    FunctionSig parse_fnsig() {
        FunctionSig f;
        f.name = expect_ident(&f.span);
        f.params = parse_params();
        if (peek().kind == Tok::ident && is_visibility(peek().text) && !is_punct("(", 1))
            f.visibility = to_visibility(next().text);
        if (peek().kind == Tok::ident && is_mutability(peek().text) && !is_punct("(", 1))
            f.mutability = to_mutability(next().text);
        if (is_word("uses") && is_punct("(", 1)) {
            next();
            next();
            f.applied_modifiers = parse_ident_list();
            expect_punct(")");
        }
        if (is_word("returns") && is_punct("(", 1)) {
            next();
            next();
            f.returns.push_back(parse_type());
            while (is_punct(",")) {
                next();
                f.returns.push_back(parse_type());
            }
            expect_punct(")");
        }
        skip_semicolons();
        return f;
    }

    Scenario parse_scenario() {
        next();
        Scenario sc;
        sc.name = expect_ident(&sc.span);
        expect_punct("{");
        while (is_word("participant") && peek(1).kind == Tok::ident) {
            next();
            Participant p;
            p.alias = expect_ident(&p.span);
            expect_punct(":");
            const bool contract_ref = is_word("contract") && peek(1).kind == Tok::ident &&
                                      peek(2).kind != Tok::arrow && peek(2).kind != Tok::dashed_arrow &&
                                      !(is_word("participant", 1) && peek(2).kind == Tok::ident);
            if (contract_ref) {
                next();
                p.kind = ActorKind::contract;
                p.contract = expect_ident();
            } else {
                p.kind = parse_kind();
            }
            sc.participants.push_back(std::move(p));
        }
        while (!is_punct("}")) {
            if (at_end()) fail("'}'");
            sc.messages.push_back(parse_message());
        }
        next();
        return sc;
    }

    Message parse_message() {
        Message msg;
        if (peek().kind != Tok::ident) fail("participant alias or '}'");
        msg.span = peek().span;
        msg.from = next().text;
        if (peek().kind != Tok::arrow && peek().kind != Tok::dashed_arrow) fail("'->' or '-->'");
        const Token arrow = next();
        msg.dashed = arrow.kind == Tok::dashed_arrow;
        msg.to = expect_ident();
        expect_punct(":");
        msg.label = expect_string("message label string");
        expect_punct("[");
        const Token& kind_tok = peek();
        std::string tag = expect_ident();
        if (peek().kind == Tok::minus) {
            next();
            tag += "-" + expect_ident();
        }
        auto kind = parse_message_tag(tag);
        if (!kind) {
            errors_.push_back({kind_tok.span,
                               "message kind (trans-msg, direct-msg, view, pure, fallback, ethers, create)",
                               "'" + tag + "'"});
            throw SyntaxError{};
        }
        msg.kind = *kind;
        expect_punct("]");
        if (msg.dashed && msg.kind != MessageKind::ether_transfer) {
            errors_.push_back({arrow.span, "'->' (dashed arrows carry [ethers] only)", "'-->'"});
            throw SyntaxError{};
        }
        return msg;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<ParseError> errors_;
};

}  // namespace

ParseResult<SystemModel> parse_model(std::string_view text, const std::string& file) {
    return Parser(lex(text, file)).parse();
}

}  // namespace abcde::dsl
