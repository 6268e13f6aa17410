#include "crepair/stl.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace crepair {

struct StlFormula::Node {
    enum class Kind { pred, neg, conj, disj, eventually, always } kind;
    // predicate
    Vec coeffs;
    Cmp cmp = Cmp::geq;
    double bound = 0.0;
    // temporal bounds
    int t1 = 0, t2 = 0;
    std::vector<StlFormula> children;

    bool eval(std::span<const Vec> trace, int t) const;
    int max_time() const;
    std::string text() const;
};

namespace {

const Vec& state_at(std::span<const Vec> trace, int t) {
    const auto last = static_cast<int>(trace.size()) - 1;
    return trace[static_cast<std::size_t>(std::min(t, last))];
}

bool compare(double lhs, StlFormula::Cmp cmp, double rhs) {
    switch (cmp) {
        case StlFormula::Cmp::geq: return lhs >= rhs;
        case StlFormula::Cmp::leq: return lhs <= rhs;
        case StlFormula::Cmp::gt: return lhs > rhs;
        case StlFormula::Cmp::lt: return lhs < rhs;
    }
    return false;
}

} // namespace

bool StlFormula::Node::eval(std::span<const Vec> trace, int t) const {
    switch (kind) {
        case Kind::pred: {
            const Vec& s = state_at(trace, t);
            if (s.size() != coeffs.size()) {
                throw DimensionError("stl predicate dimension does not match trace states");
            }
            return compare(coeffs.dot(s), cmp, bound);
        }
        case Kind::neg:
            return !children[0].node_->eval(trace, t);
        case Kind::conj:
            return std::all_of(children.begin(), children.end(), [&](const StlFormula& c) {
                return c.node_->eval(trace, t);
            });
        case Kind::disj:
            return std::any_of(children.begin(), children.end(), [&](const StlFormula& c) {
                return c.node_->eval(trace, t);
            });
        case Kind::eventually:
            for (int u = t + t1; u <= t + t2; ++u) {
                if (children[0].node_->eval(trace, u)) return true;
            }
            return false;
        case Kind::always:
            for (int u = t + t1; u <= t + t2; ++u) {
                if (!children[0].node_->eval(trace, u)) return false;
            }
            return true;
    }
    return false;
}

int StlFormula::Node::max_time() const {
    switch (kind) {
        case Kind::pred: return 0;
        case Kind::neg: return children[0].node_->max_time();
        case Kind::conj:
        case Kind::disj: {
            int m = 0;
            for (const auto& c : children) m = std::max(m, c.node_->max_time());
            return m;
        }
        case Kind::eventually:
        case Kind::always: return t2 + children[0].node_->max_time();
    }
    return 0;
}

std::string StlFormula::Node::text() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::pred: {
            const char* op = cmp == Cmp::geq   ? ">="
                             : cmp == Cmp::leq ? "<="
                             : cmp == Cmp::gt  ? ">"
                                               : "<";
            os << "(" << op << " [";
            for (int k = 0; k < coeffs.size(); ++k) {
                os << coeffs[k] << (k + 1 < coeffs.size() ? " " : "");
            }
            os << "] " << bound << ")";
            break;
        }
        case Kind::neg: os << "(not " << children[0].text() << ")"; break;
        case Kind::conj:
        case Kind::disj:
            os << (kind == Kind::conj ? "(and" : "(or");
            for (const auto& c : children) os << " " << c.text();
            os << ")";
            break;
        case Kind::eventually:
        case Kind::always:
            os << (kind == Kind::eventually ? "(F " : "(G ") << t1 << " " << t2 << " "
               << children[0].text() << ")";
            break;
    }
    return os.str();
}

StlFormula StlFormula::predicate(Vec coeffs, Cmp cmp, double bound) {
    if (coeffs.size() == 0) {
        throw DimensionError("stl predicate requires a nonempty coefficient vector");
    }
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::pred;
    n->coeffs = std::move(coeffs);
    n->cmp = cmp;
    n->bound = bound;
    StlFormula f;
    f.node_ = std::move(n);
    return f;
}

StlFormula StlFormula::negation(StlFormula f) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::neg;
    n->children.push_back(std::move(f));
    StlFormula r;
    r.node_ = std::move(n);
    return r;
}

StlFormula StlFormula::conjunction(std::vector<StlFormula> fs) {
    if (fs.empty()) throw ContractError("stl conjunction requires at least one operand");
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::conj;
    n->children = std::move(fs);
    StlFormula r;
    r.node_ = std::move(n);
    return r;
}

StlFormula StlFormula::disjunction(std::vector<StlFormula> fs) {
    if (fs.empty()) throw ContractError("stl disjunction requires at least one operand");
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::disj;
    n->children = std::move(fs);
    StlFormula r;
    r.node_ = std::move(n);
    return r;
}

StlFormula StlFormula::eventually(int t1, int t2, StlFormula f) {
    if (t1 < 0 || t2 < t1) throw ContractError("stl bounds require 0 <= t1 <= t2");
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::eventually;
    n->t1 = t1;
    n->t2 = t2;
    n->children.push_back(std::move(f));
    StlFormula r;
    r.node_ = std::move(n);
    return r;
}

StlFormula StlFormula::always(int t1, int t2, StlFormula f) {
    if (t1 < 0 || t2 < t1) throw ContractError("stl bounds require 0 <= t1 <= t2");
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::always;
    n->t1 = t1;
    n->t2 = t2;
    n->children.push_back(std::move(f));
    StlFormula r;
    r.node_ = std::move(n);
    return r;
}

int StlFormula::max_time() const { return node_->max_time(); }

const StlFormula* StlFormula::goal_predicate() const {
    if (node_->kind == Node::Kind::eventually && node_->children[0].is_predicate()) {
        return &node_->children[0];
    }
    return nullptr;
}

bool StlFormula::is_predicate() const { return node_->kind == Node::Kind::pred; }

bool StlFormula::eval_predicate(const Vec& state) const {
    if (!is_predicate()) throw ContractError("eval_predicate on a non-predicate formula");
    return compare(node_->coeffs.dot(state), node_->cmp, node_->bound);
}

std::string StlFormula::text() const { return node_->text(); }

bool stl_eval(const StlFormula& f, std::span<const Vec> trace) {
    if (trace.empty()) throw ContractError("stl_eval: empty trace");
    return f.node_->eval(trace, 0);
}

bool stl_eval(const StlFormula& f, const std::vector<Vec>& trace) {
    return stl_eval(f, std::span<const Vec>(trace.data(), trace.size()));
}

// ---------------------------------------------------------------------------
// Prefix parser

namespace {

struct Tokenizer {
    std::string s;
    std::size_t pos = 0;

    std::string next() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos >= s.size()) return {};
        if (s[pos] == '(' || s[pos] == ')') return std::string(1, s[pos++]);
        std::size_t start = pos;
        while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) &&
               s[pos] != '(' && s[pos] != ')') {
            ++pos;
        }
        return s.substr(start, pos - start);
    }

    std::string expect() {
        std::string t = next();
        if (t.empty()) throw ConfigError("property: unexpected end of input");
        return t;
    }
};

int parse_int(const std::string& t) {
    try {
        std::size_t used = 0;
        int v = std::stoi(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("property: expected integer, got '" + t + "'");
    }
}

double parse_num(const std::string& t) {
    try {
        std::size_t used = 0;
        double v = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("property: expected number, got '" + t + "'");
    }
}

StlFormula parse_expr(Tokenizer& tz, const std::map<std::string, int>& vars, int dims) {
    std::string t = tz.expect();
    if (t != "(") throw ConfigError("property: expected '(', got '" + t + "'");
    std::string head = tz.expect();

    auto close = [&] {
        std::string c = tz.expect();
        if (c != ")") throw ConfigError("property: expected ')', got '" + c + "'");
    };

    if (head == "F" || head == "G") {
        int t1 = parse_int(tz.expect());
        int t2 = parse_int(tz.expect());
        StlFormula inner = parse_expr(tz, vars, dims);
        close();
        return head == "F" ? StlFormula::eventually(t1, t2, std::move(inner))
                           : StlFormula::always(t1, t2, std::move(inner));
    }
    if (head == "not") {
        StlFormula inner = parse_expr(tz, vars, dims);
        close();
        return StlFormula::negation(std::move(inner));
    }
    if (head == "and" || head == "or") {
        std::vector<StlFormula> children;
        for (;;) {
            std::size_t mark = tz.pos;
            std::string peek = tz.next();
            if (peek == ")") break;
            if (peek.empty()) throw ConfigError("property: unexpected end of input");
            tz.pos = mark;
            children.push_back(parse_expr(tz, vars, dims));
        }
        if (children.empty()) throw ConfigError("property: '" + head + "' needs operands");
        return head == "and" ? StlFormula::conjunction(std::move(children))
                             : StlFormula::disjunction(std::move(children));
    }
    if (head == ">=" || head == "<=" || head == ">" || head == "<") {
        std::string var = tz.expect();
        auto it = vars.find(var);
        if (it == vars.end()) throw ConfigError("property: unknown variable '" + var + "'");
        double bound = parse_num(tz.expect());
        close();
        Vec coeffs = Vec::Zero(dims);
        coeffs[it->second] = 1.0;
        StlFormula::Cmp cmp = head == ">="   ? StlFormula::Cmp::geq
                              : head == "<=" ? StlFormula::Cmp::leq
                              : head == ">"  ? StlFormula::Cmp::gt
                                             : StlFormula::Cmp::lt;
        return StlFormula::predicate(std::move(coeffs), cmp, bound);
    }
    throw ConfigError("property: unknown operator '" + head + "'");
}

} // namespace

StlFormula parse_stl(const std::string& text, const std::map<std::string, int>& vars,
                     int state_dims) {
    Tokenizer tz{text};
    StlFormula f = parse_expr(tz, vars, state_dims);
    std::string rest = tz.next();
    if (!rest.empty()) throw ConfigError("property: trailing input '" + rest + "'");
    return f;
}

} // namespace crepair
