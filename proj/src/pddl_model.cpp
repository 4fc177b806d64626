#include <algorithm>
#include <map>
#include <sstream>

#include "plankb/pddl.hpp"

namespace plankb::pddl {

bool is_variable(std::string_view term) noexcept { return !term.empty() && term.front() == '?'; }

bool Atom::is_ground() const noexcept {
    return std::none_of(args.begin(), args.end(), [](const std::string &a) { return is_variable(a); });
}

const TypedName *ActionSchema::find_param(std::string_view variable) const noexcept {
    for (const TypedName &p : params)
        if (p.name == variable)
            return &p;
    return nullptr;
}

const ActionSchema *DomainDef::find_action(std::string_view n) const noexcept {
    for (const ActionSchema &a : actions)
        if (a.name == n)
            return &a;
    return nullptr;
}

const PredicateSchema *DomainDef::find_predicate(std::string_view n) const noexcept {
    for (const PredicateSchema &p : predicates)
        if (p.name == n)
            return &p;
    return nullptr;
}

const TypedName *DomainDef::find_constant(std::string_view n) const noexcept {
    for (const TypedName &c : constants)
        if (c.name == n)
            return &c;
    return nullptr;
}

bool DomainDef::has_type(std::string_view type) const noexcept {
    if (type == kObjectType)
        return true;
    return std::any_of(types.begin(), types.end(), [&](const TypeName &t) { return t.name == type; });
}

bool DomainDef::is_subtype(std::string_view type, std::string_view ancestor) const {
    if (ancestor == kObjectType || type == ancestor)
        return true;
    std::string current(type);
    // Bounded walk so a malformed (cyclic) hierarchy cannot loop forever.
    for (std::size_t steps = 0; steps <= types.size(); ++steps) {
        auto it = std::find_if(types.begin(), types.end(),
                               [&](const TypeName &t) { return t.name == current; });
        if (it == types.end())
            return false;
        if (it->parent == ancestor)
            return true;
        current = it->parent;
    }
    return false;
}

std::vector<std::string> DomainDef::unsupported_requirements() const {
    std::vector<std::string> out;
    for (const std::string &r : requirements)
        if (!is_supported_requirement(r))
            out.push_back(r);
    return out;
}

std::string to_string(const Atom &atom) {
    std::string s = "(" + atom.predicate;
    for (const std::string &a : atom.args)
        s += " " + a;
    return s + ")";
}

std::string to_string(const Literal &literal) {
    return literal.positive ? to_string(literal.atom) : "(not " + to_string(literal.atom) + ")";
}

namespace {

/// `- object` is only omitted on a trailing run, where it is implied.
void print_typed(std::ostringstream &out, const std::vector<std::pair<std::string, std::string>> &names) {
    std::size_t implicit_from = names.size();
    while (implicit_from > 0 && names[implicit_from - 1].second == kObjectType)
        --implicit_from;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i > 0)
            out << ' ';
        out << names[i].first;
        if (i < implicit_from)
            out << " - " << names[i].second;
    }
}

void print_typed(std::ostringstream &out, const std::vector<TypedName> &names) {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const TypedName &n : names)
        pairs.emplace_back(n.name, n.type);
    print_typed(out, pairs);
}

void print_conjunction(std::ostringstream &out, const std::vector<std::string> &parts) {
    if (parts.size() == 1) {
        out << parts.front();
        return;
    }
    out << "(and";
    for (const std::string &p : parts)
        out << ' ' << p;
    out << ')';
}

} // namespace

std::string print_domain(const DomainDef &d) {
    std::ostringstream out;
    out << "(define (domain " << d.name << ")\n";
    if (!d.requirements.empty()) {
        out << "  (:requirements";
        for (const std::string &r : d.requirements) // std::set keeps them sorted
            out << " :" << r;
        out << ")\n";
    }
    if (!d.types.empty()) {
        std::vector<std::pair<std::string, std::string>> pairs;
        for (const TypeName &t : d.types)
            pairs.emplace_back(t.name, t.parent);
        out << "  (:types ";
        print_typed(out, pairs);
        out << ")\n";
    }
    if (!d.constants.empty()) {
        out << "  (:constants ";
        print_typed(out, d.constants);
        out << ")\n";
    }
    if (!d.predicates.empty()) {
        out << "  (:predicates";
        for (const PredicateSchema &p : d.predicates) {
            out << "\n    (" << p.name;
            if (!p.params.empty()) {
                out << ' ';
                print_typed(out, p.params);
            }
            out << ')';
        }
        out << ")\n";
    }
    for (const ActionSchema &a : d.actions) {
        out << "  (:action " << a.name << "\n    :parameters (";
        print_typed(out, a.params);
        out << ")\n    :precondition ";
        std::vector<std::string> pre;
        for (const Literal &l : a.precondition)
            pre.push_back(to_string(l));
        print_conjunction(out, pre);
        out << "\n    :effect ";
        std::vector<std::string> eff;
        for (const Atom &x : a.add)
            eff.push_back(to_string(x));
        for (const Atom &x : a.del)
            eff.push_back("(not " + to_string(x) + ")");
        print_conjunction(out, eff);
        out << ")\n";
    }
    out << ")\n";
    return out.str();
}

std::string print_problem(const ProblemDef &p) {
    std::ostringstream out;
    out << "(define (problem " << p.name << ")\n";
    out << "  (:domain " << p.domain_name << ")\n";
    if (!p.objects.empty()) {
        out << "  (:objects ";
        print_typed(out, p.objects);
        out << ")\n";
    }
    out << "  (:init";
    for (const Atom &a : p.init)
        out << "\n    " << to_string(a);
    out << ")\n";
    out << "  (:goal ";
    std::vector<std::string> goal;
    for (const Literal &l : p.goal)
        goal.push_back(to_string(l));
    print_conjunction(out, goal);
    out << "))\n";
    return out.str();
}

std::string_view to_string(IssueCode code) noexcept {
    switch (code) {
    case IssueCode::DuplicateType: return "DuplicateType";
    case IssueCode::DuplicatePredicate: return "DuplicatePredicate";
    case IssueCode::DuplicateAction: return "DuplicateAction";
    case IssueCode::DuplicateConstant: return "DuplicateConstant";
    case IssueCode::DuplicateParameter: return "DuplicateParameter";
    case IssueCode::UnknownType: return "UnknownType";
    case IssueCode::TypeCycle: return "TypeCycle";
    case IssueCode::UnknownPredicate: return "UnknownPredicate";
    case IssueCode::UnknownConstant: return "UnknownConstant";
    case IssueCode::ArityMismatch: return "ArityMismatch";
    case IssueCode::UnboundVariable: return "UnboundVariable";
    case IssueCode::AddDeleteOverlap: return "AddDeleteOverlap";
    }
    return "Unknown";
}

std::vector<WellFormednessIssue> validate_domain(const DomainDef &d) {
    std::vector<WellFormednessIssue> issues;
    auto report = [&](IssueCode code, std::string location, std::string detail) {
        issues.push_back({code, std::move(location), std::move(detail)});
    };

    std::map<std::string, int> seen;
    for (const TypeName &t : d.types) {
        if (t.name == kObjectType)
            continue;
        if (seen[t.name]++ == 1)
            report(IssueCode::DuplicateType, "types", t.name);
        if (!d.has_type(t.parent))
            report(IssueCode::UnknownType, "type " + t.name, t.parent);
    }
    for (const TypeName &t : d.types) {
        std::string current = t.name;
        for (std::size_t steps = 0; steps <= d.types.size() + 1; ++steps) {
            auto it = std::find_if(d.types.begin(), d.types.end(),
                                   [&](const TypeName &x) { return x.name == current; });
            if (it == d.types.end() || it->parent == kObjectType)
                break;
            current = it->parent;
            if (current == t.name) {
                report(IssueCode::TypeCycle, "type " + t.name, "");
                break;
            }
        }
    }

    seen.clear();
    for (const TypedName &c : d.constants) {
        if (seen[c.name]++ == 1)
            report(IssueCode::DuplicateConstant, "constants", c.name);
        if (!d.has_type(c.type))
            report(IssueCode::UnknownType, "constant " + c.name, c.type);
    }

    auto check_params = [&](const std::vector<TypedName> &params, const std::string &where) {
        std::map<std::string, int> names;
        for (const TypedName &p : params) {
            if (names[p.name]++ == 1)
                report(IssueCode::DuplicateParameter, where, p.name);
            if (!d.has_type(p.type))
                report(IssueCode::UnknownType, where, p.type);
        }
    };

    seen.clear();
    for (const PredicateSchema &p : d.predicates) {
        if (seen[p.name]++ == 1)
            report(IssueCode::DuplicatePredicate, "predicates", p.name);
        check_params(p.params, "predicate " + p.name);
    }

    seen.clear();
    for (const ActionSchema &a : d.actions) {
        const std::string where = "action " + a.name;
        if (seen[a.name]++ == 1)
            report(IssueCode::DuplicateAction, "actions", a.name);
        check_params(a.params, where);

        auto check_atom = [&](const Atom &atom) {
            if (atom.is_equality()) {
                if (atom.args.size() != 2)
                    report(IssueCode::ArityMismatch, where, to_string(atom));
            } else if (const PredicateSchema *schema = d.find_predicate(atom.predicate)) {
                if (schema->arity() != atom.args.size())
                    report(IssueCode::ArityMismatch, where, to_string(atom));
            } else {
                report(IssueCode::UnknownPredicate, where, atom.predicate);
            }
            for (const std::string &arg : atom.args) {
                if (is_variable(arg)) {
                    if (a.find_param(arg) == nullptr)
                        report(IssueCode::UnboundVariable, where, arg);
                } else if (d.find_constant(arg) == nullptr) {
                    report(IssueCode::UnknownConstant, where, arg);
                }
            }
        };
        for (const Literal &l : a.precondition)
            check_atom(l.atom);
        for (const Atom &x : a.add)
            check_atom(x);
        for (const Atom &x : a.del) {
            check_atom(x);
            if (std::find(a.add.begin(), a.add.end(), x) != a.add.end())
                report(IssueCode::AddDeleteOverlap, where, to_string(x));
        }
    }
    return issues;
}

} // namespace plankb::pddl
