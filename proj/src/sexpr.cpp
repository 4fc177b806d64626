#include "sexpr.hpp"

#include <cctype>

#include "plankb/errors.hpp"

namespace plankb::detail {

namespace {

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    SExpr read_top() {
        skip_blank();
        if (at_end())
            throw SyntaxError(line_, column_, "expected '(' but input is empty");
        SExpr e = read();
        skip_blank();
        if (!at_end())
            throw SyntaxError(line_, column_, "expected end of input after top-level expression");
        return e;
    }

private:
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
            if (c == ';') {
                while (!at_end() && peek() != '\n')
                    advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    SExpr read() {
        skip_blank();
        if (at_end())
            throw SyntaxError(line_, column_, "expected expression or ')' but reached end of input");
        SExpr e;
        e.line = line_;
        e.column = column_;
        char c = peek();
        if (c == '(') {
            e.is_list = true;
            advance();
            for (;;) {
                skip_blank();
                if (at_end())
                    throw SyntaxError(line_, column_, "expected ')' to close list opened at " +
                                                          std::to_string(e.line) + ":" +
                                                          std::to_string(e.column));
                if (peek() == ')') {
                    advance();
                    break;
                }
                e.items.push_back(read());
            }
            return e;
        }
        if (c == ')')
            throw SyntaxError(line_, column_, "unexpected ')'");
        while (!at_end()) {
            char ch = peek();
            if (ch == '(' || ch == ')' || ch == ';' || std::isspace(static_cast<unsigned char>(ch)))
                break;
            e.text.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
            advance();
        }
        return e;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

} // namespace

SExpr read_sexpr(std::string_view text) { return Reader(text).read_top(); }

} // namespace plankb::detail
