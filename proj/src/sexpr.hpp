#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace plankb::detail {

/// Node of a parsed s-expression. Atoms are lowercased on read.
struct SExpr {
    bool is_list = false;
    std::string text;
    std::vector<SExpr> items;
    std::size_t line = 1;
    std::size_t column = 1;

    bool is_atom() const noexcept { return !is_list; }
    bool is_atom(std::string_view s) const noexcept { return !is_list && text == s; }
    bool head_is(std::string_view s) const noexcept {
        return is_list && !items.empty() && items.front().is_atom(s);
    }
};

/// Reads exactly one top-level expression; trailing non-comment text is an error.
SExpr read_sexpr(std::string_view text);

} // namespace plankb::detail
