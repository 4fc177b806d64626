#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "plankb/errors.hpp"
#include "plankb/kg.hpp"

namespace plankb::kg {

namespace {

struct Prefix {
    std::string_view name;
    std::string_view ns;
};

constexpr Prefix kPrefixes[] = {
    {"plan", kOntologyNs}, {"owl", kOwlNs}, {"rdf", kRdfNs}, {"rdfs", kRdfsNs}, {"xsd", kXsdNs}};

bool safe_local(std::string_view local) {
    if (local.empty())
        return false;
    auto ok = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    };
    if (local.front() == '-')
        return false;
    return std::all_of(local.begin(), local.end(), ok);
}

std::string write_iri(const Iri &iri) {
    for (const Prefix &p : kPrefixes) {
        if (iri.value.size() > p.ns.size() && iri.value.compare(0, p.ns.size(), p.ns) == 0) {
            std::string_view local = std::string_view(iri.value).substr(p.ns.size());
            if (safe_local(local))
                return std::string(p.name) + ":" + std::string(local);
        }
    }
    return "<" + iri.value + ">";
}

std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    return out;
}

std::string write_object(const Term &t) {
    if (const auto *iri = std::get_if<Iri>(&t))
        return write_iri(*iri);
    const auto &lit = std::get<Literal>(t);
    std::string s = "\"" + escape(lit.lexical) + "\"";
    if (lit.datatype != xsd("string"))
        s += "^^" + write_iri(lit.datatype);
    return s;
}

class TurtleReader {
public:
    explicit TurtleReader(std::string_view text) : text_(text) {}

    Graph read() {
        Graph g;
        for (;;) {
            skip_blank();
            if (at_end())
                break;
            if (peek() == '@') {
                directive();
                continue;
            }
            if (starts_with_keyword("PREFIX")) {
                pos_ += 6;
                column_ += 6;
                prefix_body(false);
                continue;
            }
            statement(g);
        }
        return g;
    }

private:
    [[noreturn]] void fail(const std::string &message) const {
        throw TurtleSyntaxError(line_, column_, message);
    }

    bool at_end() const noexcept { return pos_ >= text_.size(); }
    char peek() const noexcept { return text_[pos_]; }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_blank() {
        while (!at_end()) {
            char c = peek();
            if (c == '#') {
                while (!at_end() && peek() != '\n')
                    advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    void expect(char c) {
        skip_blank();
        if (at_end() || peek() != c)
            fail(std::string("expected '") + c + "'");
        advance();
    }

    bool starts_with_keyword(std::string_view kw) const {
        if (text_.size() - pos_ < kw.size())
            return false;
        for (std::size_t i = 0; i < kw.size(); ++i)
            if (std::toupper(static_cast<unsigned char>(text_[pos_ + i])) != kw[i])
                return false;
        return text_.size() - pos_ == kw.size() ||
               std::isspace(static_cast<unsigned char>(text_[pos_ + kw.size()]));
    }

    void directive() {
        advance(); // '@'
        std::string word;
        while (!at_end() && std::isalpha(static_cast<unsigned char>(peek()))) {
            word += peek();
            advance();
        }
        if (word == "prefix")
            prefix_body(true);
        else
            fail("unsupported directive '@" + word + "'");
    }

    void prefix_body(bool needs_dot) {
        skip_blank();
        std::string name;
        while (!at_end() && peek() != ':') {
            if (std::isspace(static_cast<unsigned char>(peek())))
                fail("expected ':' after prefix name");
            name += peek();
            advance();
        }
        expect(':');
        skip_blank();
        prefixes_[name] = iri_ref().value;
        if (needs_dot)
            expect('.');
    }

    Iri iri_ref() {
        if (at_end() || peek() != '<')
            fail("expected '<'");
        advance();
        std::string value;
        while (!at_end() && peek() != '>') {
            if (peek() == '\n' || peek() == ' ')
                fail("unterminated IRI");
            value += peek();
            advance();
        }
        if (at_end())
            fail("unterminated IRI");
        advance();
        return Iri{value};
    }

    static bool name_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' ||
               c == ':' || c == '%';
    }

    /// Prefixed name, `a`, or a bare number/boolean token.
    std::string bare_token() {
        std::string tok;
        while (!at_end() && name_char(peek())) {
            tok += peek();
            advance();
        }
        // A trailing '.' terminates the statement, it is not part of the name.
        while (!tok.empty() && tok.back() == '.') {
            tok.pop_back();
            --pos_;
            --column_;
        }
        return tok;
    }

    Iri expand(const std::string &tok) {
        auto colon = tok.find(':');
        if (colon == std::string::npos)
            fail("expected prefixed name but found '" + tok + "'");
        auto it = prefixes_.find(tok.substr(0, colon));
        if (it == prefixes_.end())
            fail("undeclared prefix '" + tok.substr(0, colon) + "'");
        return Iri{it->second + tok.substr(colon + 1)};
    }

    Iri iri_term() {
        skip_blank();
        if (at_end())
            fail("expected IRI but reached end of input");
        if (peek() == '<')
            return iri_ref();
        if (peek() == '_')
            fail("blank nodes are not supported");
        if (peek() == '[' || peek() == '(')
            fail("blank nodes and collections are not supported");
        std::string tok = bare_token();
        if (tok.empty())
            fail(std::string("unexpected character '") + peek() + "'");
        return expand(tok);
    }

    Iri predicate() {
        skip_blank();
        if (!at_end() && peek() == 'a' && pos_ + 1 < text_.size() &&
            std::isspace(static_cast<unsigned char>(text_[pos_ + 1]))) {
            advance();
            return rdf("type");
        }
        return iri_term();
    }

    Term object() {
        skip_blank();
        if (at_end())
            fail("expected object but reached end of input");
        if (peek() == '"')
            return string_term();
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+') {
            std::string tok = bare_token();
            bool decimal = tok.find('.') != std::string::npos;
            return Literal{tok, xsd(decimal ? "decimal" : "integer")};
        }
        if (c == '<' || c == '_' || c == '[' || c == '(')
            return iri_term();
        std::string tok = bare_token();
        if (tok == "true" || tok == "false")
            return Literal{tok, xsd("boolean")};
        if (tok.empty())
            fail(std::string("unexpected character '") + c + "'");
        return expand(tok);
    }

    Term string_term() {
        advance(); // opening quote
        std::string value;
        for (;;) {
            if (at_end())
                fail("unterminated string literal");
            char c = peek();
            if (c == '"') {
                advance();
                break;
            }
            if (c == '\n')
                fail("newline in string literal");
            if (c == '\\') {
                advance();
                if (at_end())
                    fail("unterminated escape");
                switch (peek()) {
                case 'n': value += '\n'; break;
                case 't': value += '\t'; break;
                case 'r': value += '\r'; break;
                case '"': value += '"'; break;
                case '\\': value += '\\'; break;
                default: fail(std::string("unsupported escape '\\") + peek() + "'");
                }
                advance();
                continue;
            }
            value += c;
            advance();
        }
        if (!at_end() && peek() == '@')
            fail("language-tagged literals are not supported");
        if (pos_ + 1 < text_.size() && peek() == '^' && text_[pos_ + 1] == '^') {
            advance();
            advance();
            return Literal{value, iri_term()};
        }
        return string_literal(value);
    }

    void statement(Graph &g) {
        Iri subject = iri_term();
        for (;;) {
            Iri pred = predicate();
            for (;;) {
                g.insert(Triple{subject, pred, object()});
                skip_blank();
                if (!at_end() && peek() == ',') {
                    advance();
                    continue;
                }
                break;
            }
            skip_blank();
            if (!at_end() && peek() == ';') {
                advance();
                skip_blank();
                if (!at_end() && peek() == '.')
                    break;
                continue;
            }
            break;
        }
        expect('.');
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
    std::map<std::string, std::string> prefixes_;
};

} // namespace

std::string export_turtle(const Graph &graph) {
    std::ostringstream out;
    for (const Prefix &p : kPrefixes)
        out << "@prefix " << p.name << ": <" << p.ns << "> .\n";
    const std::vector<Triple> triples = graph.triples();
    if (!triples.empty())
        out << '\n';
    for (const Triple &t : triples)
        out << write_iri(t.subject) << ' ' << write_iri(t.predicate) << ' ' << write_object(t.object)
            << " .\n";
    return out.str();
}

Graph import_turtle(std::string_view text) { return TurtleReader(text).read(); }

} // namespace plankb::kg
