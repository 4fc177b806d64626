#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "plankb/errors.hpp"
#include "plankb/pddl.hpp"
#include "sexpr.hpp"

namespace plankb::pddl {

using detail::SExpr;

namespace {

constexpr std::string_view kSupportedRequirements[] = {
    "strips", "typing", "negative-preconditions", "equality"};

constexpr std::string_view kNumericHeads[] = {
    "increase", "decrease", "assign", "scale-up", "scale-down"};

[[noreturn]] void fail(const SExpr &at, const std::string &message) {
    throw SyntaxError(at.line, at.column, message);
}

std::string describe(const SExpr &e) {
    if (e.is_atom())
        return "'" + e.text + "'";
    if (e.items.empty())
        return "'()'";
    if (e.items.front().is_atom())
        return "'(" + e.items.front().text + " ...)'";
    return "list";
}

const std::string &expect_name(const SExpr &e, std::string_view what) {
    if (!e.is_atom() || e.text.empty() || e.text.front() == ':' || e.text == "-" ||
        is_variable(e.text))
        fail(e, "expected " + std::string(what) + " but found " + describe(e));
    return e.text;
}

const SExpr &expect_list(const SExpr &e, std::string_view what) {
    if (!e.is_list)
        fail(e, "expected " + std::string(what) + " but found " + describe(e));
    return e;
}

/// `a b - t c` style list. Elements before a `- type` marker take that type.
std::vector<TypedName> parse_typed_list(const std::vector<SExpr> &items, std::size_t first,
                                        bool variables) {
    std::vector<TypedName> out;
    std::size_t pending_from = 0;
    for (std::size_t i = first; i < items.size(); ++i) {
        const SExpr &e = items[i];
        if (e.is_atom("-")) {
            if (i + 1 >= items.size())
                fail(e, "expected type name after '-'");
            const SExpr &t = items[i + 1];
            if (t.head_is("either"))
                throw UnsupportedConstruct("either-types at " + std::to_string(t.line) + ":" +
                                           std::to_string(t.column));
            const std::string &type = expect_name(t, "type name");
            if (pending_from == out.size())
                fail(e, "expected name before '-'");
            for (std::size_t k = pending_from; k < out.size(); ++k)
                out[k].type = type;
            pending_from = out.size();
            ++i;
            continue;
        }
        if (!e.is_atom())
            fail(e, std::string("expected ") + (variables ? "variable" : "name") + " but found " +
                        describe(e));
        if (variables != is_variable(e.text))
            fail(e, std::string("expected ") + (variables ? "variable" : "name") + " but found " +
                        describe(e));
        if (!variables)
            expect_name(e, "name");
        out.push_back(TypedName{e.text, std::string(kObjectType)});
    }
    return out;
}

Atom parse_atom(const SExpr &e, bool allow_variables) {
    expect_list(e, "atom");
    if (e.items.empty())
        fail(e, "expected predicate name in atom but found '()'");
    const SExpr &head = e.items.front();
    if (!head.is_atom() || head.text.empty() || is_variable(head.text) || head.text.front() == ':')
        fail(head, "expected predicate name but found " + describe(head));
    Atom atom;
    atom.predicate = head.text;
    for (std::size_t i = 1; i < e.items.size(); ++i) {
        const SExpr &t = e.items[i];
        if (!t.is_atom())
            fail(t, "expected term but found " + describe(t));
        if (is_variable(t.text) && !allow_variables)
            fail(t, "expected ground term but found variable " + describe(t));
        if (t.text == "-" || t.text.front() == ':')
            fail(t, "expected term but found " + describe(t));
        atom.args.push_back(t.text);
    }
    return atom;
}

void reject_unsupported_condition(const SExpr &e) {
    for (std::string_view head : {"or", "imply", "exists", "forall", "when", "preference"}) {
        if (e.head_is(head))
            throw UnsupportedConstruct(std::string(head) + " in condition at " +
                                       std::to_string(e.line) + ":" + std::to_string(e.column));
    }
    for (std::string_view head : {"<", ">", "<=", ">="}) {
        if (e.head_is(head))
            throw UnsupportedConstruct("numeric comparison at " + std::to_string(e.line) + ":" +
                                       std::to_string(e.column));
    }
}

void push_unique(std::vector<Literal> &out, Literal lit) {
    if (std::find(out.begin(), out.end(), lit) == out.end())
        out.push_back(std::move(lit));
}

void push_unique(std::vector<Atom> &out, Atom atom) {
    if (std::find(out.begin(), out.end(), atom) == out.end())
        out.push_back(std::move(atom));
}

/// Flattens a goal description into a conjunction of literals.
void parse_condition(const SExpr &e, bool allow_variables, bool allow_equality,
                     std::vector<Literal> &out) {
    expect_list(e, "condition");
    if (e.head_is("and")) {
        for (std::size_t i = 1; i < e.items.size(); ++i)
            parse_condition(e.items[i], allow_variables, allow_equality, out);
        return;
    }
    if (e.head_is("or") && e.items.size() == 2) {
        parse_condition(e.items[1], allow_variables, allow_equality, out);
        return;
    }
    reject_unsupported_condition(e);
    if (e.head_is("not")) {
        if (e.items.size() != 2)
            fail(e, "expected exactly one argument to 'not'");
        const SExpr &inner = e.items[1];
        expect_list(inner, "atom under 'not'");
        reject_unsupported_condition(inner);
        if (inner.head_is("and") || inner.head_is("not"))
            throw UnsupportedConstruct("negated compound condition at " +
                                       std::to_string(inner.line) + ":" +
                                       std::to_string(inner.column));
        Atom atom = parse_atom(inner, allow_variables);
        if (atom.is_equality() && !allow_equality)
            throw UnsupportedConstruct("equality outside action preconditions at " +
                                       std::to_string(inner.line) + ":" +
                                       std::to_string(inner.column));
        push_unique(out, Literal{false, std::move(atom)});
        return;
    }
    Atom atom = parse_atom(e, allow_variables);
    if (atom.is_equality() && !allow_equality)
        throw UnsupportedConstruct("equality outside action preconditions at " +
                                   std::to_string(e.line) + ":" + std::to_string(e.column));
    push_unique(out, Literal{true, std::move(atom)});
}

void parse_effect(const SExpr &e, ActionSchema &action) {
    expect_list(e, "effect");
    if (e.head_is("and")) {
        for (std::size_t i = 1; i < e.items.size(); ++i)
            parse_effect(e.items[i], action);
        return;
    }
    for (std::string_view head : kNumericHeads) {
        if (e.head_is(head))
            throw UnsupportedConstruct("numeric fluent effect '" + std::string(head) + "' at " +
                                       std::to_string(e.line) + ":" + std::to_string(e.column));
    }
    for (std::string_view head : {"when", "forall"}) {
        if (e.head_is(head))
            throw UnsupportedConstruct(std::string(head) + " effect at " + std::to_string(e.line) +
                                       ":" + std::to_string(e.column));
    }
    if (e.head_is("not")) {
        if (e.items.size() != 2)
            fail(e, "expected exactly one argument to 'not'");
        Atom atom = parse_atom(e.items[1], true);
        if (atom.is_equality())
            throw UnsupportedConstruct("equality in effect at " + std::to_string(e.line) + ":" +
                                       std::to_string(e.column));
        push_unique(action.del, std::move(atom));
        return;
    }
    Atom atom = parse_atom(e, true);
    if (atom.is_equality())
        throw UnsupportedConstruct("equality in effect at " + std::to_string(e.line) + ":" +
                                   std::to_string(e.column));
    push_unique(action.add, std::move(atom));
}

ActionSchema parse_action(const SExpr &e) {
    if (e.items.size() < 2)
        fail(e, "expected action name after ':action'");
    ActionSchema action;
    action.name = expect_name(e.items[1], "action name");
    bool seen_parameters = false, seen_precondition = false, seen_effect = false;
    for (std::size_t i = 2; i < e.items.size(); i += 2) {
        const SExpr &key = e.items[i];
        if (!key.is_atom())
            fail(key, "expected ':parameters', ':precondition' or ':effect' but found " +
                          describe(key));
        if (i + 1 >= e.items.size())
            fail(key, "expected value after " + describe(key));
        const SExpr &value = e.items[i + 1];
        if (key.text == ":parameters") {
            if (seen_parameters)
                fail(key, "duplicate ':parameters'");
            seen_parameters = true;
            expect_list(value, "parameter list");
            action.params = parse_typed_list(value.items, 0, true);
        } else if (key.text == ":precondition") {
            if (seen_precondition)
                fail(key, "duplicate ':precondition'");
            seen_precondition = true;
            if (value.is_list && value.items.empty())
                continue;
            parse_condition(value, true, true, action.precondition);
        } else if (key.text == ":effect") {
            if (seen_effect)
                fail(key, "duplicate ':effect'");
            seen_effect = true;
            if (value.is_list && value.items.empty())
                continue;
            parse_effect(value, action);
        } else {
            fail(key, "expected ':parameters', ':precondition' or ':effect' but found " +
                          describe(key));
        }
    }
    return action;
}

const SExpr &expect_define(const SExpr &root, std::string_view kind) {
    if (!root.head_is("define"))
        fail(root, "expected '(define ...)'");
    if (root.items.size() < 2 || !root.items[1].head_is(kind) || root.items[1].items.size() != 2)
        fail(root.items.size() < 2 ? root : root.items[1],
             "expected '(" + std::string(kind) + " <name>)'");
    return root.items[1].items[1];
}

void check_section_head(const SExpr &section) {
    if (!section.is_list || section.items.empty() || !section.items.front().is_atom() ||
        section.items.front().text.empty() || section.items.front().text.front() != ':')
        fail(section, "expected section '(:keyword ...)' but found " + describe(section));
}

} // namespace

DomainDef parse_domain(std::string_view text) {
    SExpr root = detail::read_sexpr(text);
    DomainDef d;
    d.name = expect_name(expect_define(root, "domain"), "domain name");
    for (std::size_t i = 2; i < root.items.size(); ++i) {
        const SExpr &section = root.items[i];
        check_section_head(section);
        const std::string &key = section.items.front().text;
        if (key == ":requirements") {
            for (std::size_t k = 1; k < section.items.size(); ++k) {
                const SExpr &r = section.items[k];
                if (!r.is_atom() || r.text.size() < 2 || r.text.front() != ':')
                    fail(r, "expected requirement keyword but found " + describe(r));
                d.requirements.insert(r.text.substr(1));
            }
        } else if (key == ":types") {
            for (TypedName &t : parse_typed_list(section.items, 1, false))
                d.types.push_back(TypeName{std::move(t.name), std::move(t.type)});
        } else if (key == ":constants") {
            for (TypedName &c : parse_typed_list(section.items, 1, false))
                d.constants.push_back(std::move(c));
        } else if (key == ":predicates") {
            for (std::size_t k = 1; k < section.items.size(); ++k) {
                const SExpr &p = section.items[k];
                expect_list(p, "predicate declaration");
                if (p.items.empty())
                    fail(p, "expected predicate name but found '()'");
                PredicateSchema schema;
                schema.name = expect_name(p.items.front(), "predicate name");
                schema.params = parse_typed_list(p.items, 1, true);
                d.predicates.push_back(std::move(schema));
            }
        } else if (key == ":action") {
            d.actions.push_back(parse_action(section));
        } else if (key == ":functions") {
            throw UnsupportedConstruct("numeric fluents (:functions) at " +
                                       std::to_string(section.line) + ":" +
                                       std::to_string(section.column));
        } else if (key == ":durative-action" || key == ":derived" || key == ":constraints") {
            throw UnsupportedConstruct(key + " at " + std::to_string(section.line) + ":" +
                                       std::to_string(section.column));
        } else {
            fail(section.items.front(), "unknown domain section " + describe(section.items.front()));
        }
    }
    return d;
}

ProblemDef parse_problem(std::string_view text, const DomainDef &domain) {
    SExpr root = detail::read_sexpr(text);
    ProblemDef p;
    p.name = expect_name(expect_define(root, "problem"), "problem name");
    bool seen_domain = false;

    for (std::size_t i = 2; i < root.items.size(); ++i) {
        const SExpr &section = root.items[i];
        check_section_head(section);
        const std::string &key = section.items.front().text;
        if (key == ":domain") {
            if (section.items.size() != 2)
                fail(section, "expected '(:domain <name>)'");
            p.domain_name = expect_name(section.items[1], "domain name");
            seen_domain = true;
        } else if (key == ":requirements") {
            // Problem-level requirements add nothing to the STRIPS subset.
        } else if (key == ":objects") {
            for (TypedName &o : parse_typed_list(section.items, 1, false))
                p.objects.push_back(std::move(o));
        } else if (key == ":init") {
            for (std::size_t k = 1; k < section.items.size(); ++k) {
                const SExpr &a = section.items[k];
                if (a.head_is("="))
                    throw UnsupportedConstruct("numeric initial fact at " +
                                               std::to_string(a.line) + ":" +
                                               std::to_string(a.column));
                if (a.head_is("not"))
                    fail(a, "expected positive ground atom in ':init'");
                push_unique(p.init, parse_atom(a, false));
            }
        } else if (key == ":goal") {
            if (section.items.size() != 2)
                fail(section, "expected exactly one goal description");
            const SExpr &g = section.items[1];
            if (!(g.is_list && g.items.empty()))
                parse_condition(g, false, false, p.goal);
        } else if (key == ":metric" || key == ":constraints") {
            throw UnsupportedConstruct(key + " at " + std::to_string(section.line) + ":" +
                                       std::to_string(section.column));
        } else {
            fail(section.items.front(), "unknown problem section " + describe(section.items.front()));
        }
    }
    if (!seen_domain)
        fail(root, "expected '(:domain <name>)' section");

    for (const TypedName &o : p.objects) {
        if (!domain.has_type(o.type))
            throw UnknownType("object '" + o.name + "' has undeclared type '" + o.type + "'");
    }
    auto check_atom = [&](const Atom &atom) {
        const PredicateSchema *schema = domain.find_predicate(atom.predicate);
        if (schema == nullptr)
            throw UnknownPredicate("'" + atom.predicate + "' in problem '" + p.name + "'");
        if (schema->arity() != atom.args.size())
            throw ArityMismatch(to_string(atom) + " expects " + std::to_string(schema->arity()) +
                                " argument(s)");
        for (const std::string &arg : atom.args) {
            bool known = domain.find_constant(arg) != nullptr ||
                         std::any_of(p.objects.begin(), p.objects.end(),
                                     [&](const TypedName &o) { return o.name == arg; });
            if (!known)
                throw UnknownObject("'" + arg + "' in " + to_string(atom));
        }
    };
    for (const Atom &a : p.init)
        check_atom(a);
    for (const Literal &l : p.goal)
        check_atom(l.atom);
    return p;
}

namespace {

std::string slurp(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("IoError", "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

DomainDef load_domain(const std::filesystem::path &path) { return parse_domain(slurp(path)); }

ProblemDef load_problem(const std::filesystem::path &path, const DomainDef &domain) {
    return parse_problem(slurp(path), domain);
}

bool is_supported_requirement(std::string_view keyword) noexcept {
    return std::find(std::begin(kSupportedRequirements), std::end(kSupportedRequirements),
                     keyword) != std::end(kSupportedRequirements);
}

} // namespace plankb::pddl
