#include "core/plan.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "core/canonical.hpp"
#include "core/error.hpp"

namespace lbex {

namespace {

struct TreeParser {
    const std::string& text;
    size_t pos = 0;
    FactorTree tree;

    explicit TreeParser(const std::string& t) : text(t) {}

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    [[noreturn]] void error(const std::string& what) {
        fail(ErrorKind::Syntax,
             "factor tree '" + text + "' at offset " + std::to_string(pos) + ": " + what);
    }

    int parse_primary() {
        skip_ws();
        if (pos >= text.size()) error("unexpected end");
        if (text[pos] == '(') {
            ++pos;
            int node = parse_chain();
            skip_ws();
            if (pos >= text.size() || text[pos] != ')') error("expected ')'");
            ++pos;
            return node;
        }
        const char c = text[pos];
        if (c == 'c') {
            ++pos;
            FactorTree::Node n;
            n.kind = FactorTree::NodeKind::Coefficient;
            tree.nodes.push_back(n);
            return static_cast<int>(tree.nodes.size()) - 1;
        }
        if (c == 'y' || c == 'u') {
            ++pos;
            size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (pos == start) error("expected a lag after '" + std::string(1, c) + "'");
            FactorTree::Node n;
            n.kind = FactorTree::NodeKind::Regressor;
            n.reg.kind = c == 'y' ? RegressorKind::Output : RegressorKind::Input;
            n.reg.lag = std::stoi(text.substr(start, pos - start));
            tree.nodes.push_back(n);
            return static_cast<int>(tree.nodes.size()) - 1;
        }
        error("expected 'c', 'y<lag>', 'u<lag>' or '('");
    }

    // primary ('*' primary)*, associating left.
    int parse_chain() {
        int node = parse_primary();
        while (true) {
            skip_ws();
            if (pos < text.size() && text[pos] == '*') {
                ++pos;
                int rhs = parse_primary();
                FactorTree::Node n;
                n.kind = FactorTree::NodeKind::Mul;
                n.left = node;
                n.right = rhs;
                tree.nodes.push_back(n);
                node = static_cast<int>(tree.nodes.size()) - 1;
            } else {
                return node;
            }
        }
    }
};

void render_node(const FactorTree& t, int index, std::ostringstream& os, bool parenthesize) {
    const FactorTree::Node& n = t.nodes[static_cast<size_t>(index)];
    switch (n.kind) {
        case FactorTree::NodeKind::Coefficient:
            os << 'c';
            return;
        case FactorTree::NodeKind::Regressor:
            os << regressor_name(n.reg);
            return;
        case FactorTree::NodeKind::Mul:
            if (parenthesize) os << '(';
            render_node(t, n.left, os, true);
            os << '*';
            render_node(t, n.right, os, true);
            if (parenthesize) os << ')';
            return;
    }
}

bool nodes_equal(const FactorTree& a, int ia, const FactorTree& b, int ib) {
    const FactorTree::Node& na = a.nodes[static_cast<size_t>(ia)];
    const FactorTree::Node& nb = b.nodes[static_cast<size_t>(ib)];
    if (na.kind != nb.kind) return false;
    switch (na.kind) {
        case FactorTree::NodeKind::Coefficient:
            return true;
        case FactorTree::NodeKind::Regressor:
            return na.reg == nb.reg;
        case FactorTree::NodeKind::Mul:
            return nodes_equal(a, na.left, b, nb.left) && nodes_equal(a, na.right, b, nb.right);
    }
    return false;
}

void check_grouping_matches_term(const FactorTree& grouping, const Term& term, int term_index) {
    int coefficient_leaves = 0;
    std::vector<Regressor> leaves;
    grouping.collect_leaves(coefficient_leaves, leaves);
    std::vector<Regressor> expected = term.regressors;
    std::sort(leaves.begin(), leaves.end());
    std::sort(expected.begin(), expected.end());
    if (coefficient_leaves != 1 || leaves != expected) {
        std::ostringstream os;
        os << "grouping leaves {";
        for (int i = 0; i < coefficient_leaves; ++i) os << (i ? "," : "") << "c";
        for (const Regressor& r : leaves) os << "," << regressor_name(r);
        os << "} do not match term " << term_index << " factors {c";
        for (const Regressor& r : expected) os << "," << regressor_name(r);
        os << "}";
        fail(ErrorKind::Validation, os.str());
    }
}

void verify_still_equivalent(const EvaluationPlan& before, const EvaluationPlan& after,
                             const char* transform) {
    if (!equivalent(before, after)) {
        fail(ErrorKind::Internal,
             std::string(transform) + " produced a non-equivalent plan; this is a bug");
    }
}

}  // namespace

FactorTree FactorTree::canonical_for(const Term& term) {
    FactorTree t;
    Node c;
    c.kind = NodeKind::Coefficient;
    t.nodes.push_back(c);
    int acc = 0;
    for (const Regressor& r : term.regressors) {
        Node leaf;
        leaf.kind = NodeKind::Regressor;
        leaf.reg = r;
        t.nodes.push_back(leaf);
        int leaf_index = static_cast<int>(t.nodes.size()) - 1;
        Node mul;
        mul.kind = NodeKind::Mul;
        mul.left = acc;
        mul.right = leaf_index;
        t.nodes.push_back(mul);
        acc = static_cast<int>(t.nodes.size()) - 1;
    }
    t.root = acc;
    return t;
}

FactorTree FactorTree::parse(const std::string& text) {
    TreeParser p(text);
    int root = p.parse_chain();
    p.skip_ws();
    if (p.pos != text.size()) p.error("trailing characters");
    p.tree.root = root;
    return std::move(p.tree);
}

std::string FactorTree::to_string() const {
    std::ostringstream os;
    render_node(*this, root, os, false);
    return os.str();
}

void FactorTree::collect_leaves(int& coefficient_leaves, std::vector<Regressor>& regressors) const {
    coefficient_leaves = 0;
    regressors.clear();
    for (const Node& n : nodes) {
        if (n.kind == NodeKind::Coefficient) ++coefficient_leaves;
        if (n.kind == NodeKind::Regressor) regressors.push_back(n.reg);
    }
}

bool FactorTree::structurally_equal(const FactorTree& other) const {
    if (root < 0 || other.root < 0) return root == other.root;
    return nodes_equal(*this, root, other, other.root);
}

EvaluationPlan canonical_plan(std::shared_ptr<const PolynomialModel> model, std::string label) {
    if (!model) fail(ErrorKind::Validation, "canonical_plan: null model");
    EvaluationPlan plan;
    plan.model = std::move(model);
    plan.label = std::move(label);
    plan.term_order.resize(plan.model->terms.size());
    std::iota(plan.term_order.begin(), plan.term_order.end(), 0);
    plan.trees.reserve(plan.model->terms.size());
    for (const Term& t : plan.model->terms) {
        plan.trees.push_back(FactorTree::canonical_for(t));
    }
    return plan;
}

EvaluationPlan rewrite_grouping(const EvaluationPlan& plan, int term_index,
                                const FactorTree& grouping) {
    if (term_index < 0 || static_cast<size_t>(term_index) >= plan.trees.size()) {
        fail(ErrorKind::Range, "term index " + std::to_string(term_index) + " out of range (model has " +
                                   std::to_string(plan.trees.size()) + " terms)");
    }
    check_grouping_matches_term(grouping, plan.model->terms[static_cast<size_t>(term_index)],
                                term_index);
    EvaluationPlan next = plan;
    next.trees[static_cast<size_t>(term_index)] = grouping;
    verify_still_equivalent(plan, next, "rewrite_grouping");
    return next;
}

EvaluationPlan rewrite_grouping(const EvaluationPlan& plan, int term_index,
                                const std::string& tree_text) {
    return rewrite_grouping(plan, term_index, FactorTree::parse(tree_text));
}

EvaluationPlan permute_terms(const EvaluationPlan& plan, const std::vector<int>& permutation) {
    const size_t n = plan.term_order.size();
    if (permutation.size() != n) {
        fail(ErrorKind::Validation, "permutation has " + std::to_string(permutation.size()) +
                                        " entries, model has " + std::to_string(n) + " terms");
    }
    std::vector<bool> seen(n, false);
    for (int p : permutation) {
        if (p < 0 || static_cast<size_t>(p) >= n || seen[static_cast<size_t>(p)]) {
            fail(ErrorKind::Validation, "permutation is not a bijection on term indices");
        }
        seen[static_cast<size_t>(p)] = true;
    }
    EvaluationPlan next = plan;
    for (size_t i = 0; i < n; ++i) {
        next.term_order[i] = plan.term_order[static_cast<size_t>(permutation[i])];
    }
    verify_still_equivalent(plan, next, "permute_terms");
    return next;
}

bool structurally_equal(const EvaluationPlan& a, const EvaluationPlan& b) {
    if (a.term_order != b.term_order) return false;
    if (a.trees.size() != b.trees.size()) return false;
    for (size_t i = 0; i < a.trees.size(); ++i) {
        if (!a.trees[i].structurally_equal(b.trees[i])) return false;
    }
    return true;
}

std::string plan_signature(const EvaluationPlan& plan) {
    std::ostringstream os;
    os << "order=";
    for (size_t i = 0; i < plan.term_order.size(); ++i) {
        os << (i ? "," : "") << plan.term_order[i];
    }
    for (size_t i = 0; i < plan.trees.size(); ++i) {
        os << ";t" << i << "=" << plan.trees[i].to_string();
    }
    return os.str();
}

namespace {

// One transform call: name(args). Returns the name, leaves args raw.
void split_call(const std::string& call, std::string& name, std::string& args) {
    size_t open = call.find('(');
    if (open == std::string::npos) {
        name = call;
        args.clear();
        return;
    }
    if (call.back() != ')') {
        fail(ErrorKind::Syntax, "plan transform '" + call + "': missing ')'");
    }
    name = call.substr(0, open);
    args = call.substr(open + 1, call.size() - open - 2);
}

std::string strip(const std::string& s) {
    size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

int parse_int(const std::string& s, const char* what) {
    const std::string t = strip(s);
    if (t.empty()) fail(ErrorKind::Syntax, std::string(what) + ": empty integer");
    size_t i = t[0] == '-' ? 1 : 0;
    if (i == t.size()) fail(ErrorKind::Syntax, std::string(what) + ": bad integer '" + t + "'");
    for (; i < t.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(t[i]))) {
            fail(ErrorKind::Syntax, std::string(what) + ": bad integer '" + t + "'");
        }
    }
    return std::stoi(t);
}

EvaluationPlan apply_regroup(const EvaluationPlan& plan, const std::string& args) {
    int term_index = -1;
    bool have_term = false, have_tree = false;
    std::string tree_text;
    size_t pos = 0;
    while (pos < args.size()) {
        while (pos < args.size() &&
               (args[pos] == ' ' || args[pos] == '\t' || args[pos] == ',')) {
            ++pos;
        }
        if (pos >= args.size()) break;
        size_t eq = args.find('=', pos);
        if (eq == std::string::npos) {
            fail(ErrorKind::Syntax, "regroup: expected key=value in '" + args + "'");
        }
        std::string key = strip(args.substr(pos, eq - pos));
        pos = eq + 1;
        while (pos < args.size() && (args[pos] == ' ' || args[pos] == '\t')) ++pos;
        if (key == "term") {
            size_t end = args.find(',', pos);
            if (end == std::string::npos) end = args.size();
            term_index = parse_int(args.substr(pos, end - pos), "regroup term");
            have_term = true;
            pos = end;
        } else if (key == "tree") {
            if (pos >= args.size() || args[pos] != '"') {
                fail(ErrorKind::Syntax, "regroup: tree must be double-quoted");
            }
            size_t close = args.find('"', pos + 1);
            if (close == std::string::npos) {
                fail(ErrorKind::Syntax, "regroup: unterminated tree string");
            }
            tree_text = args.substr(pos + 1, close - pos - 1);
            have_tree = true;
            pos = close + 1;
        } else {
            fail(ErrorKind::Syntax, "regroup: unknown key '" + key + "'");
        }
    }
    if (!have_term || !have_tree) {
        fail(ErrorKind::Syntax, "regroup needs term=<idx> and tree=\"...\"");
    }
    return rewrite_grouping(plan, term_index, tree_text);
}

EvaluationPlan apply_permute(const EvaluationPlan& plan, const std::string& args) {
    std::string a = strip(args);
    const size_t n = plan.term_order.size();
    if (a == "reverse") {
        std::vector<int> reversed(n);
        for (size_t i = 0; i < n; ++i) reversed[i] = static_cast<int>(n - 1 - i);
        return permute_terms(plan, reversed);
    }
    if (a.rfind("order=", 0) == 0) {
        std::vector<int> order;
        std::istringstream in(a.substr(6));
        std::string item;
        while (std::getline(in, item, ',')) {
            order.push_back(parse_int(item, "permute order"));
        }
        return permute_terms(plan, order);
    }
    fail(ErrorKind::Syntax, "permute expects 'reverse' or 'order=<i0>,<i1>,...', got '" + a + "'");
}

}  // namespace

EvaluationPlan parse_plan_spec(std::shared_ptr<const PolynomialModel> model,
                               const std::string& spec, std::string label) {
    EvaluationPlan plan = canonical_plan(std::move(model), label);

    // Split on ';' outside quotes.
    std::vector<std::string> calls;
    std::string current;
    bool quoted = false;
    for (char c : spec) {
        if (c == '"') quoted = !quoted;
        if (c == ';' && !quoted) {
            calls.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    calls.push_back(current);

    for (const std::string& raw : calls) {
        std::string call = strip(raw);
        if (call.empty()) fail(ErrorKind::Syntax, "empty transform in plan spec '" + spec + "'");
        std::string name, args;
        split_call(call, name, args);
        if (name == "canonical") {
            if (!strip(args).empty()) {
                fail(ErrorKind::Syntax, "canonical takes no arguments");
            }
            // starting point; nothing to do
        } else if (name == "regroup") {
            plan = apply_regroup(plan, args);
        } else if (name == "permute") {
            plan = apply_permute(plan, args);
        } else {
            fail(ErrorKind::Syntax, "unknown plan transform '" + name + "'");
        }
    }
    plan.label = std::move(label);
    return plan;
}

}  // namespace lbex
