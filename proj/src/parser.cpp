#include "peaksharp/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <vector>

namespace peaksharp {

const char* to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::syntax: return "syntax";
    case ParseErrorKind::nonaffine_rate: return "nonaffine_rate";
    case ParseErrorKind::unknown_identifier: return "unknown_identifier";
    case ParseErrorKind::range: return "range";
  }
  return "unknown";
}

ParseError::ParseError(int line, int column, ParseErrorKind kind, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " +
                         to_string(kind) + ": " + message),
      line_(line),
      column_(column),
      kind_(kind),
      message_(message) {}

std::string format_number(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

enum class Tok { ident, number, arrow, plus, minus, star, lparen, rparen, equals, at, end };

struct Token {
  Tok type;
  std::string_view text;
  int column;  // 1-based
};

class LineLexer {
 public:
  LineLexer(std::string_view line, int line_no) : line_(line), line_no_(line_no) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line_.size()) {
      const char c = line_[i];
      const int col = static_cast<int>(i) + 1;
      if (c == '#') break;
      if (c == ' ' || c == '\t' || c == '\r') {
        ++i;
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i + 1;
        while (j < line_.size() &&
               (std::isalnum(static_cast<unsigned char>(line_[j])) || line_[j] == '_')) {
          ++j;
        }
        out.push_back({Tok::ident, line_.substr(i, j - i), col});
        i = j;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        const std::size_t j = scan_number(i);
        out.push_back({Tok::number, line_.substr(i, j - i), col});
        i = j;
        continue;
      }
      if (c == '-' && i + 1 < line_.size() && line_[i + 1] == '>') {
        out.push_back({Tok::arrow, line_.substr(i, 2), col});
        i += 2;
        continue;
      }
      Tok t;
      switch (c) {
        case '+': t = Tok::plus; break;
        case '-': t = Tok::minus; break;
        case '*': t = Tok::star; break;
        case '(': t = Tok::lparen; break;
        case ')': t = Tok::rparen; break;
        case '=': t = Tok::equals; break;
        case '@': t = Tok::at; break;
        case '/':
          throw ParseError(line_no_, col, ParseErrorKind::syntax,
                           "division is not allowed in rate expressions");
        default:
          throw ParseError(line_no_, col, ParseErrorKind::syntax,
                           std::string("unexpected character '") + c + "'");
      }
      out.push_back({t, line_.substr(i, 1), col});
      ++i;
    }
    out.push_back({Tok::end, {}, static_cast<int>(std::min(i, line_.size())) + 1});
    return out;
  }

 private:
  std::size_t scan_number(std::size_t i) const {
    auto digit = [&](std::size_t k) {
      return k < line_.size() && std::isdigit(static_cast<unsigned char>(line_[k]));
    };
    std::size_t j = i;
    while (digit(j)) ++j;
    if (j < line_.size() && line_[j] == '.') {
      ++j;
      while (digit(j)) ++j;
    }
    if (j < line_.size() && (line_[j] == 'e' || line_[j] == 'E')) {
      std::size_t k = j + 1;
      if (k < line_.size() && (line_[k] == '+' || line_[k] == '-')) ++k;
      if (digit(k)) {
        while (digit(k)) ++k;
        j = k;
      }
    }
    return j;
  }

  std::string_view line_;
  int line_no_;
};

// Value of a rate subexpression: c0 + c1 * K, with syntactic degree in K.
struct Affine {
  double c0 = 0.0;
  double c1 = 0.0;
  int degree = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view source) : source_(source) {}

  ReactionNetwork run() {
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= source_.size()) {
      std::size_t eol = source_.find('\n', pos);
      if (eol == std::string_view::npos) eol = source_.size();
      ++line_no;
      statement(source_.substr(pos, eol - pos), line_no);
      if (eol == source_.size()) break;
      pos = eol + 1;
    }
    last_line_ = line_no;
    finish();
    return std::move(net_);
  }

 private:
  [[noreturn]] void fail(const Token& at, ParseErrorKind kind, const std::string& msg) const {
    throw ParseError(line_no_, at.column, kind, msg);
  }

  const Token& peek() const { return toks_[idx_]; }
  const Token& next() { return toks_[idx_++]; }

  const Token& expect(Tok type, const char* what) {
    if (peek().type != type) fail(peek(), ParseErrorKind::syntax, std::string("expected ") + what);
    return next();
  }

  void expect_keyword(std::string_view kw) {
    const Token& t = peek();
    if (t.type != Tok::ident || t.text != kw) {
      fail(t, ParseErrorKind::syntax, "expected '" + std::string(kw) + "'");
    }
    next();
  }

  void expect_end() {
    if (peek().type != Tok::end) fail(peek(), ParseErrorKind::syntax, "unexpected trailing input");
  }

  double signed_number() {
    bool neg = false;
    if (peek().type == Tok::minus || peek().type == Tok::plus) neg = next().type == Tok::minus;
    return neg ? -number() : number();
  }

  double number() {
    const Token& t = expect(Tok::number, "number");
    double v = 0.0;
    auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size() || !std::isfinite(v)) {
      fail(t, ParseErrorKind::syntax, "malformed number '" + std::string(t.text) + "'");
    }
    return v;
  }

  int count() {
    const Token& t = expect(Tok::number, "nonnegative integer");
    int v = 0;
    auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size()) {
      fail(t, ParseErrorKind::syntax, "expected nonnegative integer, got '" + std::string(t.text) + "'");
    }
    return v;
  }

  void statement(std::string_view line, int line_no) {
    line_no_ = line_no;
    toks_ = LineLexer(line, line_no).run();
    idx_ = 0;
    const Token& head = peek();
    if (head.type == Tok::end) return;
    if (head.type != Tok::ident) fail(head, ParseErrorKind::syntax, "expected a statement keyword");
    next();
    if (head.text == "param") {
      param_statement();
    } else if (head.text == "control") {
      control_statement(head);
    } else if (head.text == "reaction") {
      reaction_statement();
    } else if (head.text == "name") {
      if (seen_name_) fail(head, ParseErrorKind::syntax, "duplicate name statement");
      seen_name_ = true;
      net_.name = std::string(expect(Tok::ident, "network name").text);
      expect_end();
    } else if (head.text == "initial") {
      if (net_.initial_state) fail(head, ParseErrorKind::syntax, "duplicate initial statement");
      net_.initial_state = count();
      expect_end();
    } else {
      fail(head, ParseErrorKind::syntax, "unknown statement '" + std::string(head.text) + "'");
    }
  }

  void param_statement() {
    const Token& name = expect(Tok::ident, "parameter name");
    if (name.text == "K") fail(name, ParseErrorKind::syntax, "'K' is reserved for the control parameter");
    if (net_.params.count(std::string(name.text))) {
      fail(name, ParseErrorKind::syntax, "duplicate parameter '" + std::string(name.text) + "'");
    }
    expect(Tok::equals, "'='");
    const double v = signed_number();
    expect_end();
    net_.params.emplace(std::string(name.text), v);
  }

  void control_statement(const Token& head) {
    if (control_line_) fail(head, ParseErrorKind::syntax, "duplicate control statement");
    control_line_ = line_no_;
    expect_keyword("K");
    expect_keyword("range");
    const Token& lo_tok = peek();
    const double lo = signed_number();
    const double hi = signed_number();
    if (!(lo <= hi)) fail(lo_tok, ParseErrorKind::range, "K range lower bound exceeds upper bound");
    expect_keyword("default");
    const Token& d_tok = peek();
    const double d = signed_number();
    if (d < lo || d > hi) fail(d_tok, ParseErrorKind::range, "default K outside declared range");
    expect_end();
    net_.k_range = {lo, hi};
    net_.k_default = d;
  }

  void reaction_statement() {
    const Token& s_tok = peek();
    const int s = count();
    expect(Tok::arrow, "'->'");
    const int t = count();
    if (s == t) fail(s_tok, ParseErrorKind::range, "reaction must change the copy number");
    expect(Tok::at, "'@'");
    const Token& expr_tok = peek();
    const Affine rate = expr();
    expect_end();
    net_.reactions.push_back({s, t - s, {rate.c0, rate.c1}});
    reaction_sites_.push_back({line_no_, expr_tok.column});
  }

  Affine expr() {
    Affine acc = term();
    while (peek().type == Tok::plus || peek().type == Tok::minus) {
      const bool minus = next().type == Tok::minus;
      const Affine rhs = term();
      acc.c0 = minus ? acc.c0 - rhs.c0 : acc.c0 + rhs.c0;
      acc.c1 = minus ? acc.c1 - rhs.c1 : acc.c1 + rhs.c1;
      acc.degree = std::max(acc.degree, rhs.degree);
    }
    return acc;
  }

  Affine term() {
    Affine acc = unary();
    while (peek().type == Tok::star) {
      const Token& op = next();
      const Affine rhs = unary();
      if (acc.degree + rhs.degree > 1) {
        fail(op, ParseErrorKind::nonaffine_rate, "rate expression is not affine in K");
      }
      acc = {acc.c0 * rhs.c0, acc.c0 * rhs.c1 + acc.c1 * rhs.c0, acc.degree + rhs.degree};
    }
    return acc;
  }

  Affine unary() {
    if (peek().type == Tok::minus) {
      next();
      Affine v = unary();
      return {-v.c0, -v.c1, v.degree};
    }
    if (peek().type == Tok::plus) {
      next();
      return unary();
    }
    return primary();
  }

  Affine primary() {
    const Token& t = peek();
    switch (t.type) {
      case Tok::number:
        return {number(), 0.0, 0};
      case Tok::ident: {
        next();
        if (t.text == "K") return {0.0, 1.0, 1};
        auto it = net_.params.find(std::string(t.text));
        if (it == net_.params.end()) {
          fail(t, ParseErrorKind::unknown_identifier, "undeclared parameter '" + std::string(t.text) + "'");
        }
        return {it->second, 0.0, 0};
      }
      case Tok::lparen: {
        next();
        Affine v = expr();
        expect(Tok::rparen, "')'");
        return v;
      }
      default:
        fail(t, ParseErrorKind::syntax, "expected number, parameter, 'K' or '('");
    }
  }

  void finish() {
    if (net_.reactions.empty()) {
      throw ParseError(1, 1, ParseErrorKind::syntax, "network declares no reactions");
    }
    for (const Violation& v : validate_network(net_)) {
      if (v.reaction) {
        const auto& site = reaction_sites_[*v.reaction];
        throw ParseError(site.first, site.second, ParseErrorKind::range, v.rule + ": " + v.message);
      }
      const int line = control_line_ ? control_line_ : 1;
      throw ParseError(line, 1, ParseErrorKind::range, v.rule + ": " + v.message);
    }
  }

  std::string_view source_;
  ReactionNetwork net_;
  std::vector<Token> toks_;
  std::size_t idx_ = 0;
  int line_no_ = 0;
  int last_line_ = 0;
  int control_line_ = 0;
  bool seen_name_ = false;
  std::vector<std::pair<int, int>> reaction_sites_;
};

std::string format_rate(const RateExpr& rate) {
  auto k_term = [](double slope) {
    if (slope == 1.0) return std::string("K");
    if (slope == -1.0) return std::string("-K");
    return format_number(slope) + "*K";
  };
  if (rate.slope == 0.0) return format_number(rate.base);
  if (rate.base == 0.0) return k_term(rate.slope);
  const double mag = std::fabs(rate.slope);
  return format_number(rate.base) + (rate.slope > 0.0 ? " + " : " - ") +
         (mag == 1.0 ? std::string("K") : format_number(mag) + "*K");
}

}  // namespace

ReactionNetwork parse_network(std::string_view source) { return Parser(source).run(); }

std::string serialize_network(const ReactionNetwork& net) {
  std::string out;
  if (!net.name.empty()) out += "name " + net.name + "\n";
  for (const auto& [name, value] : net.params) {
    out += "param " + name + " = " + format_number(value) + "\n";
  }
  out += "control K range " + format_number(net.k_range.lo) + " " + format_number(net.k_range.hi) +
         " default " + format_number(net.k_default) + "\n";
  if (net.initial_state) out += "initial " + std::to_string(*net.initial_state) + "\n";
  for (const Reaction& rx : net.reactions) {
    out += "reaction " + std::to_string(rx.s) + " -> " + std::to_string(rx.s + rx.r) + " @ " +
           format_rate(rx.rate) + "\n";
  }
  return out;
}

}  // namespace peaksharp
