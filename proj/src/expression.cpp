#include "scmdp/expression.hpp"

#include "scmdp/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace scmdp {

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

struct Token {
    enum class Kind { Open, Close, Atom, End } kind;
    std::string_view text;
    std::size_t pos;
};

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr parse_all() {
        NodePtr node = parse_expr();
        const Token t = next();
        if (t.kind != Token::Kind::End) fail("trailing input", t.pos);
        return node;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
    int member_scopes_ = 0;

    [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
        throw InputError("expression: " + msg + " at offset " + std::to_string(at) + " in '" + std::string(src_) + "'");
    }

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ >= src_.size()) return {Token::Kind::End, {}, pos_};
        const std::size_t start = pos_;
        if (src_[pos_] == '(') return {Token::Kind::Open, src_.substr(pos_++, 1), start};
        if (src_[pos_] == ')') return {Token::Kind::Close, src_.substr(pos_++, 1), start};
        while (pos_ < src_.size() && !std::isspace(static_cast<unsigned char>(src_[pos_])) && src_[pos_] != '(' &&
               src_[pos_] != ')') {
            ++pos_;
        }
        return {Token::Kind::Atom, src_.substr(start, pos_ - start), start};
    }

    Token peek() {
        const std::size_t saved = pos_;
        Token t = next();
        pos_ = saved;
        return t;
    }

    std::size_t parse_index(const Token& t) {
        std::size_t value = 0;
        const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
        if (ec != std::errc{} || ptr != t.text.data() + t.text.size()) fail("expected an index", t.pos);
        return value;
    }

    NodePtr parse_expr() {
        const Token t = next();
        if (t.kind == Token::Kind::Atom) {
            auto node = std::make_shared<Expression::Node>();
            try {
                node->constant = Rational::parse(t.text);
            } catch (const InputError&) {
                fail("unknown atom '" + std::string(t.text) + "'", t.pos);
            }
            return node;
        }
        if (t.kind != Token::Kind::Open) fail("expected expression", t.pos);

        const Token head = next();
        if (head.kind != Token::Kind::Atom) fail("expected operator", head.pos);
        auto node = std::make_shared<Expression::Node>();
        const std::string_view op = head.text;

        if (op == "utility") {
            node->op = Expression::Op::Utility;
            const Token m = next();
            if (m.kind != Token::Kind::Atom) fail("expected member reference", m.pos);
            if (m.text == "member") {
                if (member_scopes_ == 0) fail("`member` used outside sum-over-members", m.pos);
            } else {
                node->member = parse_index(m);
            }
            const Token a = next();
            if (a.kind != Token::Kind::Atom) fail("expected alternative reference", a.pos);
            if (a.text != "alt") node->alternative = parse_index(a);
        } else if (op == "pow") {
            node->op = Expression::Op::Pow;
            node->args.push_back(parse_expr());
            const Token k = next();
            if (k.kind != Token::Kind::Atom) fail("expected exponent", k.pos);
            node->exponent = static_cast<unsigned>(parse_index(k));
        } else if (op == "sum-over-members") {
            node->op = Expression::Op::SumOverMembers;
            ++member_scopes_;
            node->args.push_back(parse_expr());
            --member_scopes_;
        } else {
            std::size_t min_args = 1;
            std::size_t max_args = SIZE_MAX;
            if (op == "+" || op == "sum") {
                node->op = Expression::Op::Add;
            } else if (op == "*" || op == "product") {
                node->op = Expression::Op::Mul;
            } else if (op == "min") {
                node->op = Expression::Op::Min;
            } else if (op == "max") {
                node->op = Expression::Op::Max;
            } else if (op == "-") {
                node->op = Expression::Op::Sub;
                max_args = 2;
            } else if (op == "if-pos") {
                node->op = Expression::Op::IfPositive;
                min_args = max_args = 3;
            } else {
                fail("unknown operator '" + std::string(op) + "'", head.pos);
            }
            while (peek().kind != Token::Kind::Close) {
                if (peek().kind == Token::Kind::End) fail("unbalanced parenthesis", pos_);
                node->args.push_back(parse_expr());
            }
            if (node->args.size() < min_args || node->args.size() > max_args) {
                fail("wrong number of arguments to '" + std::string(op) + "'", head.pos);
            }
            if (node->op == Expression::Op::Sub && node->args.size() == 1) node->op = Expression::Op::Neg;
        }
        const Token close = next();
        if (close.kind != Token::Kind::Close) fail("expected ')'", close.pos);
        return node;
    }
};

void print(const Expression::Node& n, std::string& out) {
    auto list = [&](std::string_view op) {
        out += '(';
        out += op;
        for (const auto& a : n.args) {
            out += ' ';
            print(*a, out);
        }
        out += ')';
    };
    switch (n.op) {
        case Expression::Op::Constant: out += n.constant.to_string(); break;
        case Expression::Op::Utility:
            out += "(utility ";
            out += n.member ? std::to_string(*n.member) : "member";
            out += ' ';
            out += n.alternative ? std::to_string(*n.alternative) : "alt";
            out += ')';
            break;
        case Expression::Op::Add: list("+"); break;
        case Expression::Op::Sub:
        case Expression::Op::Neg: list("-"); break;
        case Expression::Op::Mul: list("*"); break;
        case Expression::Op::Min: list("min"); break;
        case Expression::Op::Max: list("max"); break;
        case Expression::Op::IfPositive: list("if-pos"); break;
        case Expression::Op::SumOverMembers: list("sum-over-members"); break;
        case Expression::Op::Pow:
            out += "(pow ";
            print(*n.args[0], out);
            out += ' ' + std::to_string(n.exponent) + ')';
            break;
    }
}

Rational eval(const Expression::Node& n, const Profile& p, std::size_t alt, std::optional<std::size_t> member) {
    switch (n.op) {
        case Expression::Op::Constant: return n.constant;
        case Expression::Op::Utility: {
            const std::size_t i = n.member ? *n.member : *member;
            return p.utility(i, n.alternative ? *n.alternative : alt);
        }
        case Expression::Op::Add: {
            Rational acc;
            for (const auto& a : n.args) acc += eval(*a, p, alt, member);
            return acc;
        }
        case Expression::Op::Sub: return eval(*n.args[0], p, alt, member) - eval(*n.args[1], p, alt, member);
        case Expression::Op::Neg: return -eval(*n.args[0], p, alt, member);
        case Expression::Op::Mul: {
            Rational acc = 1;
            for (const auto& a : n.args) acc *= eval(*a, p, alt, member);
            return acc;
        }
        case Expression::Op::Pow: return pow(eval(*n.args[0], p, alt, member), n.exponent);
        case Expression::Op::Min:
        case Expression::Op::Max: {
            Rational best = eval(*n.args[0], p, alt, member);
            for (std::size_t k = 1; k < n.args.size(); ++k) {
                const Rational v = eval(*n.args[k], p, alt, member);
                best = n.op == Expression::Op::Min ? std::min(best, v) : std::max(best, v);
            }
            return best;
        }
        case Expression::Op::SumOverMembers: {
            Rational acc;
            for (std::size_t i = 0; i < p.member_count(); ++i) acc += eval(*n.args[0], p, alt, i);
            return acc;
        }
        case Expression::Op::IfPositive:
            return eval(*n.args[0], p, alt, member) > 0 ? eval(*n.args[1], p, alt, member)
                                                        : eval(*n.args[2], p, alt, member);
    }
    return {};
}

template <class Pick>
std::optional<std::size_t> max_literal(const Expression::Node& n, Pick pick) {
    std::optional<std::size_t> best;
    if (n.op == Expression::Op::Utility) best = pick(n);
    for (const auto& a : n.args) {
        const auto sub = max_literal(*a, pick);
        if (sub && (!best || *sub > *best)) best = sub;
    }
    return best;
}

}  // namespace

Expression Expression::parse(std::string_view text) { return Expression(Parser(text).parse_all()); }

Expression Expression::constant(const Rational& value) {
    auto node = std::make_shared<Node>();
    node->constant = value;
    return Expression(std::move(node));
}

std::string Expression::to_string() const {
    std::string out;
    print(*root_, out);
    return out;
}

Rational Expression::evaluate(const Profile& profile, std::size_t alternative) const {
    return eval(*root_, profile, alternative, std::nullopt);
}

std::optional<std::size_t> Expression::max_member_literal() const {
    return max_literal(*root_, [](const Node& n) { return n.member; });
}

std::optional<std::size_t> Expression::max_alternative_literal() const {
    return max_literal(*root_, [](const Node& n) { return n.alternative; });
}

}  // namespace scmdp
