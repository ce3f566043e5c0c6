#include "tapekit/code.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <tuple>

namespace tapekit {

struct Code::Node {
  Kind kind = Kind::Con;
  Prim prim = Prim::I;
  std::uint64_t nat = 0;
  bool bit = false;
  std::string name;
  std::vector<TapeMapSpec> maps;
  std::optional<Code> fn;
  std::optional<Code> arg;
  // True when a Read or Remap primitive occurs anywhere inside.
  bool touches_tape = false;
  bool has_var = false;
};

namespace {

const std::vector<TapeMapSpec>& no_maps() {
  static const std::vector<TapeMapSpec> empty;
  return empty;
}

const char* prim_name(Prim p) {
  switch (p) {
    case Prim::S: return "S";
    case Prim::K: return "K";
    case Prim::I: return "I";
    case Prim::Succ: return "succ";
    case Prim::Pred: return "pred";
    case Prim::IfZero: return "if0";
    case Prim::Pair: return "pair";
    case Prim::Fst: return "fst";
    case Prim::Snd: return "snd";
    case Prim::IfBit: return "ifbit";
    case Prim::Fix: return "fix";
    case Prim::Read: return "read";
    case Prim::Remap: return "remap";
  }
  return "?";
}

// Number of arguments the printed `(name a ...)` form takes.
std::size_t syntactic_arity(Prim p) {
  switch (p) {
    case Prim::Succ:
    case Prim::Pred:
    case Prim::Fst:
    case Prim::Snd:
    case Prim::Fix:
    case Prim::Remap: return 1;
    case Prim::Pair:
    case Prim::Read: return 2;
    case Prim::IfZero:
    case Prim::IfBit: return 3;
    default: return 0;
  }
}

std::strong_ordering compare_maps(const std::vector<TapeMapSpec>& a, const std::vector<TapeMapSpec>& b) {
  auto key = [](const AddressRule& r) {
    return std::make_tuple(r.source_component, r.stride, r.divisor, r.offset, r.negate);
  };
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (auto c = a[i].src_arity() <=> b[i].src_arity(); c != 0) return c;
    if (auto c = a[i].dst_arity() <=> b[i].dst_arity(); c != 0) return c;
    for (std::size_t j = 0; j < a[i].rules().size(); ++j) {
      if (auto c = key(a[i].rules()[j]) <=> key(b[i].rules()[j]); c != 0) return c;
    }
  }
  return std::strong_ordering::equal;
}

std::string maps_text(const std::vector<TapeMapSpec>& maps) {
  std::string out = "[";
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (i) out += ",";
    out += maps[i].name();
  }
  return out + "]";
}

}  // namespace

Code Code::prim(Prim p) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Prim;
  n->prim = p;
  n->touches_tape = p == Prim::Read || p == Prim::Remap;
  return Code(std::move(n));
}

Code Code::read_op(std::vector<TapeMapSpec> frames) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Prim;
  n->prim = Prim::Read;
  n->maps = std::move(frames);
  n->touches_tape = true;
  return Code(std::move(n));
}

Code Code::remap_op(std::vector<TapeMapSpec> chain) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Prim;
  n->prim = Prim::Remap;
  n->maps = std::move(chain);
  n->touches_tape = true;
  return Code(std::move(n));
}

Code Code::app(Code f, Code a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::App;
  n->touches_tape = f.node_->touches_tape || a.node_->touches_tape;
  n->has_var = f.node_->has_var || a.node_->has_var;
  n->fn = std::move(f);
  n->arg = std::move(a);
  return Code(std::move(n));
}

Code Code::apps(Code f, std::initializer_list<Code> args) {
  for (const auto& a : args) f = app(std::move(f), a);
  return f;
}

Code Code::nat(std::uint64_t v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Nat;
  n->nat = v;
  return Code(std::move(n));
}

Code Code::bit(bool b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Bit;
  n->bit = b;
  return Code(std::move(n));
}

Code Code::con(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Con;
  n->name = std::move(name);
  return Code(std::move(n));
}

Code Code::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->name = std::move(name);
  n->has_var = true;
  return Code(std::move(n));
}

Code Code::read(Code component, Code index) { return apps(read_op(), {std::move(component), std::move(index)}); }

Code Code::remap(const TapeMapSpec& k, Code body) { return app(remap_op({k}), std::move(body)); }

Code::Kind Code::kind() const { return node_->kind; }
Prim Code::prim() const { return node_->prim; }
const Code& Code::fn() const { return *node_->fn; }
const Code& Code::arg() const { return *node_->arg; }
std::uint64_t Code::nat_value() const { return node_->nat; }
bool Code::bit_value() const { return node_->bit; }
const std::string& Code::name() const { return node_->name; }
const std::vector<TapeMapSpec>& Code::maps() const {
  return node_->kind == Kind::Prim ? node_->maps : no_maps();
}

bool Code::has_free_var(std::string_view name) const {
  if (!node_->has_var) return false;
  if (kind() == Kind::Var) return node_->name == name;
  return fn().has_free_var(name) || arg().has_free_var(name);
}

std::vector<std::string> Code::free_vars() const {
  std::set<std::string> acc;
  std::vector<const Code*> stack{this};
  while (!stack.empty()) {
    const Code* c = stack.back();
    stack.pop_back();
    if (!c->node_->has_var) continue;
    if (c->kind() == Kind::Var) {
      acc.insert(c->name());
    } else {
      stack.push_back(&c->fn());
      stack.push_back(&c->arg());
    }
  }
  return {acc.begin(), acc.end()};
}

bool Code::touches_tape() const { return node_->touches_tape; }

std::size_t Code::size() const {
  if (kind() != Kind::App) return 1;
  return 1 + fn().size() + arg().size();
}

std::string Code::to_sexpr() const {
  switch (kind()) {
    case Kind::Nat: return std::to_string(nat_value());
    case Kind::Bit: return bit_value() ? "#1" : "#0";
    case Kind::Con: return name();
    case Kind::Var: return name();
    case Kind::Prim:
      if (!maps().empty()) return std::string(prim_name(prim())) + maps_text(maps());
      return prim_name(prim());
    case Kind::App: break;
  }
  std::vector<const Code*> args;
  const Code* head = this;
  while (head->kind() == Kind::App) {
    args.push_back(&head->arg());
    head = &head->fn();
  }
  std::reverse(args.begin(), args.end());
  std::string out;
  bool named_form = head->kind() == Kind::Prim && syntactic_arity(head->prim()) == args.size() &&
                    args.size() > 0 &&
                    (head->prim() == Prim::Remap ? head->maps().size() == 1 : head->maps().empty());
  if (named_form) {
    out = "(" + std::string(prim_name(head->prim()));
    if (head->prim() == Prim::Remap) out += " " + head->maps()[0].name();
  } else {
    out = "(app " + head->to_sexpr();
  }
  for (const Code* a : args) out += " " + a->to_sexpr();
  return out + ")";
}

bool operator==(const Code& a, const Code& b) { return (a <=> b) == 0; }

std::strong_ordering operator<=>(const Code& a, const Code& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case Code::Kind::Prim:
      if (auto c = a.prim() <=> b.prim(); c != 0) return c;
      return compare_maps(a.maps(), b.maps());
    case Code::Kind::Nat: return a.nat_value() <=> b.nat_value();
    case Code::Kind::Bit: return a.bit_value() <=> b.bit_value();
    case Code::Kind::Con:
    case Code::Kind::Var: return a.name() <=> b.name();
    case Code::Kind::App:
      if (auto c = a.fn() <=> b.fn(); c != 0) return c;
      return a.arg() <=> b.arg();
  }
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------------------
// Bracket abstraction and tape-map pushing

Code bracket_abstract(const std::string& var, const Code& body) {
  for (const auto& v : body.free_vars()) {
    if (v != var) throw SyntaxError("unexpected free variable '" + v + "' when abstracting '" + var + "'");
  }
  struct Abs {
    const std::string& x;
    Code operator()(const Code& m) const {
      if (m.kind() == Code::Kind::Var && m.name() == x) return Code::I();
      if (!m.has_free_var(x)) return Code::app(Code::K(), m);
      // m is an application mentioning x.
      const Code& f = m.fn();
      const Code& a = m.arg();
      if (a.kind() == Code::Kind::Var && a.name() == x && !f.has_free_var(x)) return f;
      return Code::apps(Code::S(), {(*this)(f), (*this)(a)});
    }
  };
  return Abs{var}(body);
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
  enum class Type { Open, Close, Atom } type;
  std::string text;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char ch = s[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
    } else if (ch == ';') {
      while (i < s.size() && s[i] != '\n') ++i;
    } else if (ch == '(') {
      out.push_back({Token::Type::Open, "("});
      ++i;
    } else if (ch == ')') {
      out.push_back({Token::Type::Close, ")"});
      ++i;
    } else {
      std::size_t j = i;
      int bracket = 0;
      while (j < s.size()) {
        char c = s[j];
        if (c == '[') ++bracket;
        if (c == ']') --bracket;
        if (bracket == 0 && (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';')) break;
        ++j;
      }
      out.push_back({Token::Type::Atom, std::string(s.substr(i, j - i))});
      i = j;
    }
  }
  return out;
}

std::optional<Prim> prim_from_name(std::string_view s) {
  static const std::pair<std::string_view, Prim> table[] = {
      {"S", Prim::S},         {"K", Prim::K},       {"I", Prim::I},         {"succ", Prim::Succ},
      {"pred", Prim::Pred},   {"if0", Prim::IfZero}, {"pair", Prim::Pair},  {"fst", Prim::Fst},
      {"snd", Prim::Snd},     {"ifbit", Prim::IfBit}, {"fix", Prim::Fix},   {"read", Prim::Read},
  };
  for (const auto& [name, p] : table) {
    if (name == s) return p;
  }
  return std::nullopt;
}

std::vector<TapeMapSpec> parse_map_list(std::string_view inner) {
  std::vector<TapeMapSpec> maps;
  std::size_t start = 0;
  while (start <= inner.size()) {
    auto comma = inner.find(',', start);
    auto piece = inner.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (piece.empty()) throw SyntaxError("empty tape map name in list");
    maps.push_back(TapeMapSpec::from_name(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return maps;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Code parse_all() {
    Code c = parse();
    if (pos_ != toks_.size()) throw SyntaxError("trailing input after code");
    return c;
  }

 private:
  const Token& peek() {
    if (pos_ >= toks_.size()) throw SyntaxError("unexpected end of input");
    return toks_[pos_];
  }
  Token next() {
    const Token& t = peek();
    ++pos_;
    return t;
  }
  void expect_close() {
    if (next().type != Token::Type::Close) throw SyntaxError("expected ')'");
  }
  std::string atom_text(const char* what) {
    Token t = next();
    if (t.type != Token::Type::Atom) throw SyntaxError(std::string("expected ") + what);
    return t.text;
  }

  Code atom(const std::string& s) {
    if (s.empty()) throw SyntaxError("empty atom");
    if (std::isdigit(static_cast<unsigned char>(s[0]))) {
      std::uint64_t v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size()) throw SyntaxError("bad natural literal '" + s + "'");
      return Code::nat(v);
    }
    if (s == "#0" || s == "#1") return Code::bit(s == "#1");
    if (s.rfind("read[", 0) == 0 || s.rfind("remap[", 0) == 0) {
      bool is_read = s[2] == 'a';
      auto open = s.find('[');
      if (s.back() != ']') throw SyntaxError("unterminated map list in '" + s + "'");
      auto maps = parse_map_list(std::string_view(s).substr(open + 1, s.size() - open - 2));
      return is_read ? Code::read_op(std::move(maps)) : Code::remap_op(std::move(maps));
    }
    if (auto p = prim_from_name(s)) return Code::prim(*p);
    if (std::isupper(static_cast<unsigned char>(s[0]))) return Code::con(s);
    if (std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_') return Code::var(s);
    throw SyntaxError("unrecognized atom '" + s + "'");
  }

  Code parse() {
    Token t = next();
    if (t.type == Token::Type::Atom) return atom(t.text);
    if (t.type == Token::Type::Close) throw SyntaxError("unexpected ')'");
    if (peek().type == Token::Type::Atom) {
      const std::string head = peek().text;
      if (head == "lam") {
        ++pos_;
        std::string v = atom_text("binder name");
        Code body = parse();
        expect_close();
        return abstract_open(v, body);
      }
      if (head == "let") {
        ++pos_;
        std::string v = atom_text("binder name");
        Code value = parse();
        Code body = parse();
        expect_close();
        return Code::app(abstract_open(v, body), value);
      }
      if (head == "con") {
        ++pos_;
        std::string name = atom_text("constant name");
        expect_close();
        return Code::con(name);
      }
      if (head == "remap") {
        ++pos_;
        std::string name = atom_text("tape map name");
        Code body = parse();
        expect_close();
        return Code::remap(TapeMapSpec::from_name(name), body);
      }
      if (head == "app") ++pos_;
    }
    Code f = parse();
    while (peek().type != Token::Type::Close) f = Code::app(f, parse());
    expect_close();
    return f;
  }

  // Like bracket_abstract, but other free variables stay free for outer binders.
  static Code abstract_open(const std::string& x, const Code& m) {
    if (m.kind() == Code::Kind::Var && m.name() == x) return Code::I();
    if (!m.has_free_var(x)) return Code::app(Code::K(), m);
    const Code& f = m.fn();
    const Code& a = m.arg();
    if (a.kind() == Code::Kind::Var && a.name() == x && !f.has_free_var(x)) return f;
    return Code::apps(Code::S(), {abstract_open(x, f), abstract_open(x, a)});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Code parse_open_code(std::string_view text) {
  try {
    return Parser(tokenize(text)).parse_all();
  } catch (const TapeError& e) {
    throw SyntaxError(e.what());
  }
}

Code parse_code(std::string_view text) {
  Code c = parse_open_code(text);
  auto fv = c.free_vars();
  if (!fv.empty()) throw SyntaxError("unexpected free variable '" + fv.front() + "'");
  return c;
}

// ---------------------------------------------------------------------------
// Outcome

std::string to_string(BottomReason r) { return r == BottomReason::FuelExhausted ? "fuel-exhausted" : "stuck"; }

std::optional<std::string> Outcome::label() const {
  if (is_bottom()) return std::nullopt;
  return value_->label();
}

std::string Outcome::to_string() const {
  return is_value() ? value_->to_sexpr() : "bottom(" + tapekit::to_string(reason_) + ")";
}

}  // namespace tapekit
