#include "wz/dsl.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>

namespace wz {

ParseError::ParseError(const SourceSpan& span, const std::string& message)
    : Error(std::to_string(span.line) + ":" + std::to_string(span.column) + ": " + message),
      span_(span),
      message_(message) {}

CertificateError::CertificateError(std::string path, const std::string& message)
    : Error(path + ": " + message), path_(std::move(path)) {}

namespace {

const std::set<std::string> kKeywords{"param", "cont", "outer", "let", "sum", "int"};
const std::set<std::string> kClassicalCalls{"factorial", "gamma", "pochhammer", "binom", "exp"};
const std::set<std::string> kQCalls{"qpoch", "qpow", "qbin"};

bool reserved(const std::string& name) {
  return kKeywords.count(name) || kClassicalCalls.count(name) || kQCalls.count(name);
}

enum class Tok { ident, number, punct, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t begin;
  std::size_t end;
};

SourceSpan span_of(std::string_view text, std::size_t begin, std::size_t end) {
  SourceSpan s;
  s.begin = std::min(begin, text.size());
  s.end = std::max(s.begin, std::min(end, text.size()));
  for (std::size_t i = 0; i < s.begin; ++i) {
    if (text[i] == '\n') {
      ++s.line;
      s.column = 1;
    } else {
      ++s.column;
    }
  }
  return s;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto is_ident_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  auto is_ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (is_ident_start(c)) {
      while (i < text.size() && is_ident(text[i])) ++i;
      out.push_back({Tok::ident, std::string(text.substr(start, i - start)), start, i});
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (i < text.size() && is_ident_start(text[i])) {
        throw ParseError(span_of(text, start, i + 1), "expected an operator after a number");
      }
      out.push_back({Tok::number, std::string(text.substr(start, i - start)), start, i});
    } else if (std::string_view("()+-*/^,;=").find(c) != std::string_view::npos) {
      ++i;
      out.push_back({Tok::punct, std::string(1, c), start, i});
    } else {
      std::size_t len = 1;
      auto u = static_cast<unsigned char>(c);
      if (u >= 0xF0) len = 4;
      else if (u >= 0xE0) len = 3;
      else if (u >= 0xC0) len = 2;
      throw ParseError(span_of(text, start, start + len),
                       "unexpected character '" + std::string(text.substr(start, len)) + "'");
    }
  }
  out.push_back({Tok::end, "", text.size(), text.size()});
  return out;
}

struct Node {
  enum class Kind { number, symbol, neg, add, sub, mul, div, pow, call };
  Kind kind = Kind::number;
  BigInt value;
  std::string name;
  std::vector<Node> args;
  std::size_t begin = 0;
  std::size_t end = 0;
  bool paren = false;
};

struct Ident {
  std::string name;
  std::size_t begin;
  std::size_t end;
};

struct Binders {
  std::vector<Ident> sums;
  std::vector<Ident> ints;
};

struct RhsPart {
  bool negate = false;
  Binders binders;
  Node product;
};

struct Syntax {
  std::vector<Ident> params;
  std::vector<Ident> cont;
  std::optional<Ident> outer;
  std::vector<std::pair<Ident, Node>> lets;
  Binders binders;
  Node lhs;
  bool has_rhs = false;
  std::vector<RhsPart> rhs;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text), toks_(tokenize(text)) {}

  Syntax statement() {
    Syntax s;
    bool seen_param = false, seen_cont = false;
    for (;;) {
      if (at_ident("param") && !seen_param) {
        next();
        seen_param = true;
        s.params = idents();
        if (s.params.size() == 1 && s.params[0].name == "none") s.params.clear();
        expect(";");
      } else if (at_ident("cont") && !seen_cont) {
        next();
        seen_cont = true;
        s.cont = idents();
        expect(";");
      } else if (at_ident("outer") && !s.outer) {
        next();
        s.outer = ident();
        expect(";");
      } else {
        break;
      }
    }
    while (at_ident("let")) {
      next();
      Ident name = ident();
      expect("=");
      Node body = term();
      expect(";");
      s.lets.emplace_back(std::move(name), std::move(body));
    }
    s.binders = binders();
    s.lhs = term();
    if (at_punct("=")) {
      next();
      s.has_rhs = true;
      bool first = true;
      for (;;) {
        RhsPart part;
        if (at_punct("+") || at_punct("-")) {
          part.negate = peek().text == "-";
          next();
        } else if (!first) {
          break;
        }
        first = false;
        part.binders = binders();
        part.product = term();
        s.rhs.push_back(std::move(part));
        if (!at_punct("+") && !at_punct("-")) break;
      }
    }
    if (at_punct(";")) next();
    if (peek().kind != Tok::end) fail(peek(), "unexpected '" + peek().text + "'");
    return s;
  }

  Node term() {
    Node left = unary();
    while (at_punct("*") || at_punct("/")) {
      Node::Kind k = peek().text == "*" ? Node::Kind::mul : Node::Kind::div;
      next();
      Node right = unary();
      left = binary(k, std::move(left), std::move(right));
    }
    return left;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool at_punct(const char* p) const { return peek().kind == Tok::punct && peek().text == p; }
  bool at_ident(const char* p) const { return peek().kind == Tok::ident && peek().text == p; }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError(span_of(text_, t.begin, t.end), msg);
  }

  void expect(const char* p) {
    if (!at_punct(p)) {
      const Token& t = peek();
      fail(t, std::string("expected '") + p + "'" + (t.kind == Tok::end ? " at end of input" : ", found '" + t.text + "'"));
    }
    next();
  }

  Ident ident() {
    const Token& t = peek();
    if (t.kind != Tok::ident) fail(t, "expected an identifier");
    if (kKeywords.count(t.text)) fail(t, "unexpected keyword '" + t.text + "'");
    next();
    return {t.text, t.begin, t.end};
  }

  std::vector<Ident> idents() {
    std::vector<Ident> out{ident()};
    while (at_punct(",")) {
      next();
      out.push_back(ident());
    }
    return out;
  }

  Binders binders() {
    Binders b;
    if (at_ident("sum")) {
      next();
      expect("(");
      b.sums = idents();
      expect(")");
    }
    if (at_ident("int")) {
      next();
      expect("(");
      b.ints = idents();
      expect(")");
    }
    return b;
  }

  static Node binary(Node::Kind k, Node a, Node b) {
    Node n;
    n.kind = k;
    n.begin = a.begin;
    n.end = b.end;
    n.args.push_back(std::move(a));
    n.args.push_back(std::move(b));
    return n;
  }

  Node sum() {
    Node left = term();
    while (at_punct("+") || at_punct("-")) {
      Node::Kind k = peek().text == "+" ? Node::Kind::add : Node::Kind::sub;
      next();
      Node right = term();
      left = binary(k, std::move(left), std::move(right));
    }
    return left;
  }

  Node unary() {
    if (at_punct("-") || at_punct("+")) {
      const Token& t = next();
      Node inner = unary();
      if (t.text == "+") return inner;
      Node n;
      n.kind = Node::Kind::neg;
      n.begin = t.begin;
      n.end = inner.end;
      n.args.push_back(std::move(inner));
      return n;
    }
    return power();
  }

  Node power() {
    Node base = primary();
    if (at_punct("^")) {
      next();
      Node e = unary();
      return binary(Node::Kind::pow, std::move(base), std::move(e));
    }
    return base;
  }

  Node primary() {
    const Token& t = peek();
    Node n;
    n.begin = t.begin;
    if (t.kind == Tok::number) {
      next();
      n.kind = Node::Kind::number;
      n.value = BigInt(t.text);
      n.end = t.end;
      return n;
    }
    if (t.kind == Tok::ident) {
      if (kKeywords.count(t.text)) fail(t, "unexpected keyword '" + t.text + "'");
      next();
      n.name = t.text;
      if (at_punct("(")) {
        next();
        n.kind = Node::Kind::call;
        n.args.push_back(sum());
        while (at_punct(",")) {
          next();
          n.args.push_back(sum());
        }
        n.end = peek().end;
        expect(")");
      } else {
        n.kind = Node::Kind::symbol;
        n.end = t.end;
      }
      return n;
    }
    if (at_punct("(")) {
      next();
      n = sum();
      n.paren = true;
      n.begin = t.begin;
      n.end = peek().end;
      expect(")");
      return n;
    }
    fail(t, t.kind == Tok::end ? "unexpected end of input" : "unexpected '" + t.text + "'");
  }

  std::string_view text_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Semantic analysis: builds terms from the syntax tree.
class Analyzer {
 public:
  Analyzer(std::string_view text, const Syntax& syn, bool q) : text_(text), syn_(syn), q_(q) {
    for (std::size_t i = 0; i < syn.lets.size(); ++i) {
      const auto& [name, body] = syn.lets[i];
      if (reserved(name.name) || (q && name.name == "q")) fail(name, "reserved name '" + name.name + "'");
      if (lets_.count(name.name)) fail(name, "'" + name.name + "' is defined twice");
      check_let_order(body, i);
      lets_.emplace(name.name, &body);
    }
  }

  [[noreturn]] void fail(const Node& n, const std::string& msg) const {
    throw ParseError(span_of(text_, n.begin, n.end), msg);
  }
  [[noreturn]] void fail(const Ident& n, const std::string& msg) const {
    throw ParseError(span_of(text_, n.begin, n.end), msg);
  }

  const Node* let(const Node& n) const {
    if (n.kind != Node::Kind::symbol) return nullptr;
    auto it = lets_.find(n.name);
    return it == lets_.end() ? nullptr : it->second;
  }

  void free_symbols(const Node& n, std::vector<const Node*>& out) const {
    if (const Node* body = let(n)) return free_symbols(*body, out);
    if (n.kind == Node::Kind::symbol) {
      out.push_back(&n);
      return;
    }
    for (const auto& a : n.args) free_symbols(a, out);
  }

  HyperTerm classical(const TermSignature& sig, const Node& product, bool& zero) {
    HyperTerm t(sig);
    sig_ = sig;
    qsig_ = {};
    term_ = &t;
    qterm_ = nullptr;
    ring_ = t.ring();
    lin_ring_ = t.ring();
    return finish(t, product, zero);
  }

  QHyperTerm quantum(const QSignature& sig, const Node& product, bool& zero) {
    QHyperTerm t(sig);
    sig_ = {};
    qsig_ = sig;
    term_ = nullptr;
    qterm_ = &t;
    ring_ = t.ring();
    std::vector<std::string> lin_names = *t.discrete_ring();
    lin_names.insert(lin_names.end(), sig.params.begin(), sig.params.end());
    lin_ring_ = make_vars(lin_names);
    return finish(t, product, zero);
  }

 private:
  void check_let_order(const Node& n, std::size_t index) const {
    if (n.kind == Node::Kind::symbol) {
      for (std::size_t j = index; j < syn_.lets.size(); ++j) {
        if (syn_.lets[j].first.name == n.name) fail(n, "'" + n.name + "' is used before its definition");
      }
    }
    for (const auto& a : n.args) check_let_order(a, index);
  }

  template <class T>
  T finish(T& t, const Node& product, bool& zero) {
    rational_ = RatFun::constant(ring_, 1);
    zero_ = false;
    factor(product, 1);
    zero = zero_;
    if (!zero_ && !rational_.is_one()) guarded(product, [&] { t.multiply_rational(rational_); });
    return t;
  }

  template <class F>
  void guarded(const Node& at, F&& f) {
    try {
      f();
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      fail(at, e.what());
    }
  }

  bool discrete(const std::string& v) const { return q_ ? qsig_.is_discrete(v) : sig_.is_discrete(v); }
  bool param(const std::string& v) const { return q_ ? qsig_.is_param(v) : sig_.is_param(v); }

  std::optional<long> integer_constant(const RatFun& r) const {
    if (!r.is_constant()) return std::nullopt;
    BigRational c = r.num().constant_term() / r.den().constant_term();
    if (c.get_den() != 1 || !c.get_num().fits_slong_p()) return std::nullopt;
    return c.get_num().get_si();
  }

  RatFun rat(const Node& n, bool lin) {
    const Vars& r = lin ? lin_ring_ : ring_;
    switch (n.kind) {
      case Node::Kind::number:
        return RatFun::constant(r, BigRational(n.value));
      case Node::Kind::symbol: {
        if (const Node* body = let(n)) return rat(*body, lin);
        if (q_ && n.name == "q") {
          if (lin) fail(n, "q cannot appear in a linear form");
          return RatFun::variable(r, "q");
        }
        if (q_ && !lin && discrete(n.name)) {
          fail(n, "discrete variable '" + n.name + "' can appear only in linear arguments and q-exponents");
        }
        if (var_index(r, n.name)) return RatFun::variable(r, n.name);
        fail(n, "undeclared symbol '" + n.name + "'");
      }
      case Node::Kind::neg:
        return -rat(n.args[0], lin);
      case Node::Kind::add:
        return rat(n.args[0], lin) + rat(n.args[1], lin);
      case Node::Kind::sub:
        return rat(n.args[0], lin) - rat(n.args[1], lin);
      case Node::Kind::mul:
        return rat(n.args[0], lin) * rat(n.args[1], lin);
      case Node::Kind::div: {
        RatFun d = rat(n.args[1], lin);
        if (d.is_zero()) fail(n.args[1], "division by zero");
        return rat(n.args[0], lin) / d;
      }
      case Node::Kind::pow: {
        RatFun b = rat(n.args[0], lin);
        auto e = integer_constant(rat(n.args[1], lin));
        if (!e) fail(n.args[1], "exponent must be an integer constant here");
        if (b.is_zero() && *e < 0) fail(n, "division by zero");
        return b.pow(*e);
      }
      case Node::Kind::call:
        fail(n, "'" + n.name + "' cannot appear inside a rational expression");
    }
    fail(n, "unsupported expression");
  }

  LinForm linear(const Node& n) {
    RatFun r = rat(n, true);
    if (!r.is_polynomial()) fail(n, "expected a linear form");
    MultiPoly p = r.num() * (1 / r.den().constant_term());
    if (p.total_degree() > 1) fail(n, "expected a linear form");
    LinForm f;
    for (const auto& [e, c] : p.terms()) {
      auto it = std::find(e.begin(), e.end(), 1u);
      if (it == e.end()) {
        f.constant.constant = c;
        continue;
      }
      const std::string& v = (*lin_ring_)[static_cast<std::size_t>(it - e.begin())];
      if (discrete(v)) {
        if (c.get_den() != 1) fail(n, "non-integer coefficient of discrete variable " + v);
        if (!c.get_num().fits_slong_p()) fail(n, "coefficient of " + v + " is too large");
        f.coeffs[v] = c.get_num().get_si();
      } else if (param(v)) {
        f.constant.params[v] = c;
      } else {
        fail(n, "continuous variable '" + v + "' in a linear form");
      }
    }
    return f;
  }

  MultiPoly q_exponent(const Node& n) {
    RatFun r = rat(n, true);
    if (!r.is_polynomial()) fail(n, "q-exponent must be a polynomial");
    MultiPoly p = r.num() * (1 / r.den().constant_term());
    for (const auto& v : qsig_.params) {
      if (p.depends_on(*var_index(lin_ring_, v))) fail(n, "q-exponent depends on parameter '" + v + "'");
    }
    return p.rebase(qterm_->discrete_ring());
  }

  void rational(const Node& at, const RatFun& r, long s) {
    if (r.is_zero()) {
      if (s < 0) fail(at, "division by zero");
      zero_ = true;
      return;
    }
    rational_ *= r.pow(s);
  }

  bool structural(const Node& n) const {
    switch (n.kind) {
      case Node::Kind::number:
      case Node::Kind::add:
      case Node::Kind::sub:
        return false;
      case Node::Kind::symbol:
        return let(n) != nullptr;
      default:
        return true;
    }
  }

  void factor(const Node& n, long s) {
    switch (n.kind) {
      case Node::Kind::mul:
        factor(n.args[0], s);
        factor(n.args[1], s);
        return;
      case Node::Kind::div:
        factor(n.args[0], s);
        factor(n.args[1], -s);
        return;
      case Node::Kind::neg:
        rational(n, RatFun::constant(ring_, -1), s);
        factor(n.args[0], s);
        return;
      case Node::Kind::call:
        call(n, s);
        return;
      case Node::Kind::pow:
        power(n, s);
        return;
      case Node::Kind::symbol:
        if (const Node* body = let(n)) return factor(*body, s);
        [[fallthrough]];
      default:
        rational(n, rat(n, false), s);
    }
  }

  void power(const Node& n, long s) {
    const Node& base = n.args[0];
    const Node& ex = n.args[1];
    if (auto k = integer_constant(rat(ex, true))) {
      if (structural(base)) {
        factor(base, s * *k);
      } else {
        RatFun b = rat(base, false);
        if (b.is_zero() && *k < 0) fail(n, "division by zero");
        rational(n, b.pow(*k), s);
      }
      return;
    }
    if (base.kind == Node::Kind::call) fail(n, "'" + base.name + "' takes only integer powers");
    if (q_ && base.kind == Node::Kind::symbol && base.name == "q" && !base.paren) {
      MultiPoly e = q_exponent(ex) * BigRational(s);
      guarded(n, [&] { qterm_->add_qpower(e); });
      return;
    }
    RatFun b = rat(base, false);
    LinForm e = linear(ex) * s;
    guarded(n, [&] {
      if (q_) {
        qterm_->add_geometric(b, e);
      } else {
        term_->add_power(b, e);
      }
    });
  }

  void arity(const Node& n, std::size_t k) const {
    if (n.args.size() != k) {
      fail(n, n.name + " expects " + std::to_string(k) + " argument" + (k == 1 ? "" : "s"));
    }
  }

  void gamma(const Node& at, const LinForm& arg, long e) {
    guarded(at, [&] { term_->add_gamma(arg, e); });
  }

  void qpoch(const Node& at, const RatFun& base, const LinForm& offset, const LinForm& length, long e) {
    guarded(at, [&] { qterm_->add_qpoch(base, offset, length, e); });
  }

  static bool bare_q(const Node& n) { return n.kind == Node::Kind::symbol && n.name == "q" && !n.paren; }

  void split_qbase(const Node& n, long s, RatFun& base, LinForm& offset) {
    switch (n.paren ? Node::Kind::number : n.kind) {
      case Node::Kind::mul:
        split_qbase(n.args[0], s, base, offset);
        split_qbase(n.args[1], s, base, offset);
        return;
      case Node::Kind::div:
        split_qbase(n.args[0], s, base, offset);
        split_qbase(n.args[1], -s, base, offset);
        return;
      case Node::Kind::neg:
        base *= RatFun::constant(ring_, -1);
        split_qbase(n.args[0], s, base, offset);
        return;
      case Node::Kind::pow:
        if (bare_q(n.args[0])) {
          offset += linear(n.args[1]) * s;
          return;
        }
        break;
      case Node::Kind::symbol:
        if (const Node* body = let(n)) return split_qbase(*body, s, base, offset);
        if (bare_q(n)) {
          offset += LinForm::of_constant(s);
          return;
        }
        break;
      default:
        break;
    }
    RatFun r = rat(n, false);
    if (r.is_zero()) fail(n, "q-Pochhammer with zero base");
    base *= r.pow(s);
  }

  void call(const Node& n, long s) {
    bool classical_call = kClassicalCalls.count(n.name) > 0;
    bool q_call = kQCalls.count(n.name) > 0;
    if (!classical_call && !q_call) fail(n, "unknown function '" + n.name + "'");
    if (classical_call && q_) fail(n, "'" + n.name + "' is not available in a q-term");
    LinForm one = LinForm::of_constant(1);
    if (n.name == "factorial") {
      arity(n, 1);
      gamma(n, linear(n.args[0]) + one, s);
    } else if (n.name == "gamma") {
      arity(n, 1);
      gamma(n, linear(n.args[0]), s);
    } else if (n.name == "pochhammer") {
      arity(n, 2);
      LinForm a = linear(n.args[0]), m = linear(n.args[1]);
      gamma(n, a + m, s);
      gamma(n, a, -s);
    } else if (n.name == "binom") {
      arity(n, 2);
      LinForm a = linear(n.args[0]), b = linear(n.args[1]);
      gamma(n, a + one, s);
      gamma(n, b + one, -s);
      gamma(n, a - b + one, -s);
    } else if (n.name == "exp") {
      arity(n, 1);
      RatFun arg = rat(n.args[0], false) * RatFun::constant(ring_, s);
      guarded(n, [&] { term_->add_exp(arg); });
    } else if (n.name == "qpoch") {
      arity(n, 2);
      RatFun base = RatFun::constant(ring_, 1);
      LinForm offset;
      split_qbase(n.args[0], 1, base, offset);
      qpoch(n, base, offset, linear(n.args[1]), s);
    } else if (n.name == "qbin") {
      arity(n, 2);
      LinForm a = linear(n.args[0]), b = linear(n.args[1]);
      RatFun unit = RatFun::constant(ring_, 1);
      qpoch(n, unit, one, a, s);
      qpoch(n, unit, one, b, -s);
      qpoch(n, unit, one, a - b, -s);
    } else if (n.name == "qpow") {
      arity(n, 1);
      MultiPoly e = q_exponent(n.args[0]) * BigRational(s);
      guarded(n, [&] { qterm_->add_qpower(e); });
    }
  }

  std::string_view text_;
  const Syntax& syn_;
  bool q_;
  std::map<std::string, const Node*> lets_;

  TermSignature sig_;
  QSignature qsig_;
  HyperTerm* term_ = nullptr;
  QHyperTerm* qterm_ = nullptr;
  Vars ring_;
  Vars lin_ring_;
  RatFun rational_;
  bool zero_ = false;
};

std::vector<std::string> names(const std::vector<Ident>& ids) {
  std::vector<std::string> out;
  for (const auto& i : ids) out.push_back(i.name);
  return out;
}

}  // namespace

Parsed parse(std::string_view text, const ParseOptions& options) {
  Parser parser(text);
  Syntax syn = parser.statement();

  bool q = options.q;
  auto scan_q = [&](const Node& n, auto&& self) -> bool {
    if (n.kind == Node::Kind::call && kQCalls.count(n.name)) return true;
    return std::any_of(n.args.begin(), n.args.end(), [&](const Node& a) { return self(a, self); });
  };
  q = q || scan_q(syn.lhs, scan_q);
  for (const auto& [name, body] : syn.lets) q = q || scan_q(body, scan_q);
  for (const auto& part : syn.rhs) q = q || scan_q(part.product, scan_q);

  Analyzer an(text, syn, q);

  std::set<std::string> declared;
  auto declare = [&](const Ident& id) {
    if (reserved(id.name) || (q && id.name == "q")) an.fail(id, "reserved name '" + id.name + "'");
    if (!declared.insert(id.name).second) an.fail(id, "symbol '" + id.name + "' declared twice");
  };
  for (const auto& p : syn.params) declare(p);
  for (const auto& b : syn.binders.sums) declare(b);
  for (const auto& b : syn.binders.ints) declare(b);
  std::set<std::string> cont;
  for (const auto& c : syn.cont) {
    if (reserved(c.name)) an.fail(c, "reserved name '" + c.name + "'");
    if (!cont.insert(c.name).second) an.fail(c, "symbol '" + c.name + "' declared twice");
    for (const auto& p : syn.params) {
      if (p.name == c.name) an.fail(c, "parameter '" + c.name + "' declared continuous");
    }
    for (const auto& b : syn.binders.sums) {
      if (b.name == c.name) an.fail(b, "sum variable '" + b.name + "' is declared continuous");
    }
  }
  if (q) {
    if (!syn.cont.empty()) an.fail(syn.cont.front(), "continuous variables are not available in a q-term");
    if (!syn.binders.ints.empty()) an.fail(syn.binders.ints.front(), "integrals are not available in a q-term");
  }

  std::string outer;
  if (syn.outer) {
    if (declared.count(syn.outer->name)) an.fail(*syn.outer, "outer variable '" + syn.outer->name + "' declared twice");
    if (reserved(syn.outer->name) || (q && syn.outer->name == "q")) {
      an.fail(*syn.outer, "reserved name '" + syn.outer->name + "'");
    }
    outer = syn.outer->name;
  } else {
    std::vector<const Node*> syms;
    an.free_symbols(syn.lhs, syms);
    for (const Node* s : syms) {
      if (declared.count(s->name) || (q && s->name == "q")) continue;
      outer = s->name;
      break;
    }
    if (outer.empty()) an.fail(syn.lhs, "cannot determine the outer variable; declare it with 'outer'");
  }

  bool outer_continuous = cont.count(outer) > 0;
  std::vector<std::string> params = names(syn.params);

  auto check_rhs_binders = [&](const Binders& b) {
    std::set<std::string> seen;
    for (const auto* list : {&b.sums, &b.ints}) {
      for (const auto& id : *list) {
        if (reserved(id.name) || (q && id.name == "q")) an.fail(id, "reserved name '" + id.name + "'");
        if (id.name == outer || std::count(params.begin(), params.end(), id.name) || !seen.insert(id.name).second) {
          an.fail(id, "symbol '" + id.name + "' declared twice");
        }
      }
    }
    if (q && !b.ints.empty()) an.fail(b.ints.front(), "integrals are not available in a q-term");
  };

  bool zero = false;
  if (q) {
    QSignature sig{outer, names(syn.binders.sums), params};
    QHyperTerm lhs = an.quantum(sig, syn.lhs, zero);
    if (zero) an.fail(syn.lhs, "the summand is identically zero");
    if (!syn.has_rhs) return lhs;
    QIdentityStatement st{lhs, {}};
    for (const auto& part : syn.rhs) {
      check_rhs_binders(part.binders);
      QSignature rs{outer, names(part.binders.sums), params};
      QHyperTerm t = an.quantum(rs, part.product, zero);
      if (zero) continue;
      if (part.negate) t.multiply_rational(RatFun::constant(t.ring(), -1));
      st.rhs.push_back(std::move(t));
    }
    return st;
  }

  TermSignature sig{outer, outer_continuous, names(syn.binders.sums), names(syn.binders.ints), params};
  HyperTerm lhs = an.classical(sig, syn.lhs, zero);
  if (zero) an.fail(syn.lhs, "the summand is identically zero");
  if (!syn.has_rhs) return lhs;
  IdentityStatement st{lhs, {}};
  for (const auto& part : syn.rhs) {
    check_rhs_binders(part.binders);
    TermSignature rs{outer, outer_continuous, names(part.binders.sums), names(part.binders.ints), params};
    HyperTerm t = an.classical(rs, part.product, zero);
    if (zero) continue;
    if (part.negate) t.multiply_rational(RatFun::constant(t.ring(), -1));
    st.rhs.push_back(std::move(t));
  }
  return st;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

bool atomic(const std::string& s) {
  if (s.empty()) return false;
  bool ident = std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_';
  return std::all_of(s.begin(), s.end(), [&](char c) {
    return ident ? (std::isalnum(static_cast<unsigned char>(c)) || c == '_') : std::isdigit(static_cast<unsigned char>(c));
  });
}

std::string wrap(const std::string& s) { return atomic(s) ? s : "(" + s + ")"; }

std::string render_lin(const LinForm& f) {
  std::vector<std::pair<BigRational, std::string>> parts;
  for (const auto& [v, c] : f.coeffs) parts.emplace_back(BigRational(c), v);
  for (const auto& [p, c] : f.constant.params) parts.emplace_back(c, p);
  if (f.constant.constant != 0) parts.emplace_back(f.constant.constant, "");
  if (parts.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& [c, name] = parts[i];
    BigRational mag = abs(c);
    if (i == 0) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (name.empty()) {
      out += mag.get_str();
    } else if (mag == 1) {
      out += name;
    } else {
      out += mag.get_str() + "*" + name;
    }
  }
  return out;
}

std::string suffix(long e) {
  if (e == 1) return "";
  return e > 0 ? "^" + std::to_string(e) : "^(" + std::to_string(e) + ")";
}

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

std::string binders_text(const std::vector<std::string>& sums, const std::vector<std::string>& ints) {
  std::vector<std::string> parts;
  if (!sums.empty()) parts.push_back("sum(" + join(sums, ", ") + ")");
  if (!ints.empty()) parts.push_back("int(" + join(ints, ", ") + ")");
  return join(parts, " ");
}

bool mentions(const std::string& product, const std::string& name) {
  for (const auto& t : tokenize(product)) {
    if (t.kind == Tok::ident && t.text == name) return true;
  }
  return false;
}

std::vector<std::string> decls(const std::vector<std::string>& params, bool cont, const std::string& outer,
                               const std::string& product) {
  std::vector<std::string> out;
  if (!params.empty()) out.push_back("param " + join(params, ", ") + ";");
  if (cont) out.push_back("cont " + outer + ";");
  if (!mentions(product, outer)) out.push_back("outer " + outer + ";");
  return out;
}

std::string with_binders(const std::string& binders, const std::string& product) {
  return binders.empty() ? product : binders + " " + product;
}

}  // namespace

std::string render_product(const HyperTerm& t) {
  std::vector<std::string> fs;
  if (!t.rational().is_one()) fs.push_back(wrap(t.rational().to_string()));
  for (const auto& g : t.gammas()) fs.push_back("gamma(" + render_lin(g.arg) + ")" + suffix(g.exponent));
  for (const auto& p : t.powers()) fs.push_back(wrap(p.base.to_string()) + "^" + wrap(render_lin(p.exponent)));
  for (const auto& e : t.exps()) fs.push_back("exp(" + e.argument.to_string() + ")");
  return fs.empty() ? "1" : join(fs, "*");
}

std::string render_product(const QHyperTerm& t) {
  std::vector<std::string> fs;
  if (!t.rational().is_one()) fs.push_back(wrap(t.rational().to_string()));
  for (const auto& p : t.qpochs()) {
    std::vector<std::string> arg;
    if (!p.base.is_one()) arg.push_back("(" + p.base.to_string() + ")");
    if (p.offset != LinForm{}) arg.push_back("q^" + wrap(render_lin(p.offset)));
    std::string a = arg.empty() ? "1" : join(arg, "*");
    fs.push_back("qpoch(" + a + ", " + render_lin(p.length) + ")" + suffix(p.exponent));
  }
  for (const auto& p : t.qpowers()) fs.push_back("qpow(" + p.exponent.to_string() + ")");
  for (const auto& g : t.geometrics()) fs.push_back("(" + g.base.to_string() + ")^" + wrap(render_lin(g.exponent)));
  return fs.empty() ? "1" : join(fs, "*");
}

std::string render(const HyperTerm& t) {
  const TermSignature& s = t.signature();
  std::string product = render_product(t);
  auto parts = decls(s.params, s.outer_continuous, s.outer, product);
  parts.push_back(with_binders(binders_text(s.inner_discrete, s.inner_continuous), product));
  return join(parts, " ");
}

std::string render(const QHyperTerm& t) {
  const QSignature& s = t.signature();
  std::string product = render_product(t);
  auto parts = decls(s.params, false, s.outer, product);
  parts.push_back(with_binders(binders_text(s.inner, {}), product));
  return join(parts, " ");
}

std::string render(const IdentityStatement& st) {
  const TermSignature& s = st.lhs.signature();
  std::string product = render_product(st.lhs);
  auto lines = decls(s.params, s.outer_continuous, s.outer, product);
  std::vector<std::string> rhs;
  for (const auto& r : st.rhs) {
    const TermSignature& rs = r.signature();
    rhs.push_back(with_binders(binders_text(rs.inner_discrete, rs.inner_continuous), render_product(r)));
  }
  lines.push_back(with_binders(binders_text(s.inner_discrete, s.inner_continuous), product) + " = " +
                  (rhs.empty() ? "0" : join(rhs, " + ")));
  return join(lines, "\n") + "\n";
}

std::string render(const QIdentityStatement& st) {
  const QSignature& s = st.lhs.signature();
  std::string product = render_product(st.lhs);
  auto lines = decls(s.params, false, s.outer, product);
  std::vector<std::string> rhs;
  for (const auto& r : st.rhs) rhs.push_back(with_binders(binders_text(r.signature().inner, {}), render_product(r)));
  lines.push_back(with_binders(binders_text(s.inner, {}), product) + " = " + (rhs.empty() ? "0" : join(rhs, " + ")));
  return join(lines, "\n") + "\n";
}

// ---------------------------------------------------------------------------
// Certificate files

namespace {

using nlohmann::json;

json poly_json(const MultiPoly& p) {
  json out = json::array();
  for (const auto& [e, c] : p.terms()) out.push_back(json{{"coeff", c.get_str()}, {"exponents", e}});
  return out;
}

json ratfun_json(const RatFun& r) { return json{{"num", poly_json(r.num())}, {"den", poly_json(r.den())}}; }

json operator_json(const std::vector<MultiPoly>& p) {
  json out = json::array();
  for (std::size_t a = 0; a < p.size(); ++a) out.push_back(json{{"n_power", a}, {"coeff", poly_json(p[a])}});
  return out;
}

std::string inline_text(const json& j) {
  if (j.is_array()) {
    std::string out = "[";
    for (std::size_t i = 0; i < j.size(); ++i) out += (i ? ", " : "") + inline_text(j[i]);
    return out + "]";
  }
  if (j.is_object()) {
    std::string out = "{";
    bool first = true;
    for (const auto& [k, v] : j.items()) {
      out += (first ? "" : ", ") + json(k).dump() + ": " + inline_text(v);
      first = false;
    }
    return out + "}";
  }
  return j.dump();
}

// Containers that fit on a line stay on one line.
void pretty(const json& j, std::size_t indent, std::string& out) {
  std::string flat = inline_text(j);
  if (!j.is_structured() || j.empty() || indent + flat.size() <= 100) {
    out += flat;
    return;
  }
  std::string pad(indent + 2, ' ');
  out += j.is_array() ? "[\n" : "{\n";
  std::size_t i = 0;
  for (const auto& [k, v] : j.items()) {
    out += pad;
    if (j.is_object()) out += json(k).dump() + ": ";
    pretty(v, indent + 2, out);
    out += ++i < j.size() ? ",\n" : "\n";
  }
  out += std::string(indent, ' ') + (j.is_array() ? "]" : "}");
}

std::string document(const std::string& mode, const std::string& term, const Vars& ring,
                     const std::vector<MultiPoly>& p, const json& certs) {
  json doc;
  doc["format_version"] = certificate_format_version;
  doc["mode"] = mode;
  doc["term"] = term;
  doc["variables"] = *ring;
  doc["operator"] = operator_json(p);
  doc["certificates"] = certs;
  std::string out;
  pretty(doc, 0, out);
  return out + "\n";
}

}  // namespace

std::string format_json(std::string_view text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw CertificateError("$", "malformed JSON");
  std::string out;
  pretty(doc, 0, out);
  return out + "\n";
}

namespace {

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw CertificateError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw CertificateError(path + "." + key, "missing field");
  return *it;
}

MultiPoly read_poly(const json& j, const Vars& ring, const std::string& path) {
  if (!j.is_array()) throw CertificateError(path, "expected an array of terms");
  MultiPoly p(ring);
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string at = path + "[" + std::to_string(i) + "]";
    const json& c = field(j[i], "coeff", at);
    if (!c.is_string()) throw CertificateError(at + ".coeff", "expected a rational string");
    BigRational coeff;
    try {
      coeff = parse_rational(c.get<std::string>());
    } catch (const std::exception&) {
      throw CertificateError(at + ".coeff", "malformed rational '" + c.get<std::string>() + "'");
    }
    const json& e = field(j[i], "exponents", at);
    if (!e.is_array() || e.size() != ring->size()) {
      throw CertificateError(at + ".exponents", "expected " + std::to_string(ring->size()) + " exponents");
    }
    Exponents exps;
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (!e[k].is_number_unsigned()) {
        throw CertificateError(at + ".exponents[" + std::to_string(k) + "]", "expected a non-negative integer");
      }
      exps.push_back(e[k].get<std::uint32_t>());
    }
    p += MultiPoly::monomial(ring, exps, coeff);
  }
  return p;
}

RatFun read_ratfun(const json& j, const Vars& ring, const std::string& path) {
  MultiPoly num = read_poly(field(j, "num", path), ring, path + ".num");
  MultiPoly den = read_poly(field(j, "den", path), ring, path + ".den");
  if (den.is_zero()) throw CertificateError(path + ".den", "zero denominator");
  return RatFun(num, den);
}

std::vector<MultiPoly> read_operator(const json& j, const Vars& ring) {
  const std::string path = "$.operator";
  if (!j.is_array()) throw CertificateError(path, "expected an array");
  std::map<std::size_t, MultiPoly> coeffs;
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string at = path + "[" + std::to_string(i) + "]";
    const json& a = field(j[i], "n_power", at);
    if (!a.is_number_unsigned()) throw CertificateError(at + ".n_power", "expected a non-negative integer");
    auto power = a.get<std::size_t>();
    if (coeffs.count(power)) throw CertificateError(at + ".n_power", "repeated power");
    coeffs.emplace(power, read_poly(field(j[i], "coeff", at), ring, at + ".coeff"));
  }
  std::vector<MultiPoly> p;
  if (!coeffs.empty()) p.assign(coeffs.rbegin()->first + 1, MultiPoly(ring));
  for (auto& [a, c] : coeffs) p[a] = std::move(c);
  return p;
}

}  // namespace

std::string write_certificate(const TelescopeCertificate& c) {
  json certs = json::object();
  for (const auto& [v, r] : c.r) certs[v] = ratfun_json(r);
  for (const auto& [v, s] : c.s) certs[v] = ratfun_json(s);
  return document("classical", render(c.term), c.term.ring(), c.p, certs);
}

std::string write_certificate(const QTelescopeCertificate& c) {
  json certs = json::object();
  for (const auto& [v, r] : c.r) certs[v] = ratfun_json(r);
  return document("q", render(c.term), c.term.ring(), c.p, certs);
}

Certificate read_certificate(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw CertificateError("$", std::string("malformed JSON: ") + e.what());
  }
  const json& version = field(doc, "format_version", "$");
  if (!version.is_number_integer() || version.get<long>() != certificate_format_version) {
    throw CertificateError("$.format_version", "unsupported version");
  }
  const json& mode = field(doc, "mode", "$");
  if (!mode.is_string() || (mode != "classical" && mode != "q")) {
    throw CertificateError("$.mode", "expected \"classical\" or \"q\"");
  }
  bool q = mode == "q";
  const json& term_text = field(doc, "term", "$");
  if (!term_text.is_string()) throw CertificateError("$.term", "expected a string");
  Parsed parsed;
  try {
    parsed = parse(term_text.get<std::string>(), ParseOptions{q});
  } catch (const ParseError& e) {
    throw CertificateError("$.term", e.what());
  }
  Vars ring;
  if (q) {
    if (!std::holds_alternative<QHyperTerm>(parsed)) throw CertificateError("$.term", "expected a q-summand");
    ring = std::get<QHyperTerm>(parsed).ring();
  } else {
    if (!std::holds_alternative<HyperTerm>(parsed)) throw CertificateError("$.term", "expected a summand");
    ring = std::get<HyperTerm>(parsed).ring();
  }
  const json& vars = field(doc, "variables", "$");
  if (!vars.is_array() || vars != json(*ring)) {
    throw CertificateError("$.variables", "expected " + json(*ring).dump());
  }
  std::vector<MultiPoly> p = read_operator(field(doc, "operator", "$"), ring);
  const json& certs = field(doc, "certificates", "$");
  if (!certs.is_object()) throw CertificateError("$.certificates", "expected an object");

  if (q) {
    QTelescopeCertificate c{std::get<QHyperTerm>(parsed), p, {}};
    const QSignature& sig = c.term.signature();
    for (const auto& [v, j] : certs.items()) {
      std::string at = "$.certificates." + v;
      if (std::find(sig.inner.begin(), sig.inner.end(), v) == sig.inner.end()) {
        throw CertificateError(at, "not an inner variable of the term");
      }
      c.r.emplace(v, read_ratfun(j, ring, at));
    }
    return c;
  }
  TelescopeCertificate c{std::get<HyperTerm>(parsed), p, {}, {}};
  const TermSignature& sig = c.term.signature();
  for (const auto& [v, j] : certs.items()) {
    std::string at = "$.certificates." + v;
    bool d = std::find(sig.inner_discrete.begin(), sig.inner_discrete.end(), v) != sig.inner_discrete.end();
    bool y = std::find(sig.inner_continuous.begin(), sig.inner_continuous.end(), v) != sig.inner_continuous.end();
    if (!d && !y) throw CertificateError(at, "not an inner variable of the term");
    (d ? c.r : c.s).emplace(v, read_ratfun(j, ring, at));
  }
  return c;
}

}  // namespace wz
