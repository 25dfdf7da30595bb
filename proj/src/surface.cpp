#include "bq/surface.hpp"

#include <cctype>
#include <sstream>

#include "bq/json_io.hpp"

namespace bq {

namespace {

struct Token {
  enum Kind { Ident, Sym, End } kind = End;
  std::string text;
  int line = 1;
  int col = 1;
};

class Lexer {
public:
  explicit Lexer(const std::string& src) : src_(src) {}

  const Token& peek() {
    if (!cur_) cur_ = lex();
    return *cur_;
  }

  Token next() {
    Token t = peek();
    cur_.reset();
    return t;
  }

  // Byte offset of the first unread character (after the current lookahead).
  size_t rest_offset() const { return pos_; }

  int line() const { return line_; }
  int col() const { return col_; }

private:
  char at(size_t i) const { return i < src_.size() ? src_[i] : '\0'; }

  void advance() {
    if (pos_ >= src_.size()) return;
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_trivia() {
    for (;;) {
      char c = at(pos_);
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '-' && at(pos_ + 1) == '-') {
        while (at(pos_) != '\n' && pos_ < src_.size()) advance();
      } else {
        return;
      }
    }
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_cont(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  Token lex() {
    skip_trivia();
    Token t;
    t.line = line_;
    t.col = col_;
    char c = at(pos_);
    if (c == '\0') {
      t.kind = Token::End;
      return t;
    }
    if (ident_start(c)) {
      std::string s;
      while (ident_cont(at(pos_)) ||
             (at(pos_) == '-' && ident_start(at(pos_ + 1)))) {
        s += at(pos_);
        advance();
      }
      t.kind = Token::Ident;
      t.text = s;
      return t;
    }
    auto sym = [&](const char* s) {
      t.kind = Token::Sym;
      t.text = s;
      for (const char* p = s; *p; ++p) advance();
      return t;
    };
    if (c == '-' && at(pos_ + 1) == '>') return sym("->");
    if (c == '/' && at(pos_ + 1) == '\\') return sym("/\\");
    if (c == '<' && at(pos_ + 1) == ':') return sym("<:");
    if (c == '=' && at(pos_ + 1) == '>') return sym("=>");
    switch (c) {
      case '.': return sym(".");
      case ',': return sym(",");
      case ';': return sym(";");
      case ':': return sym(":");
      case '(': return sym("(");
      case ')': return sym(")");
      case '[': return sym("[");
      case ']': return sym("]");
      default:
        throw ParseError(line_, col_, "a token (got '" + std::string(1, c) + "')");
    }
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  std::optional<Token> cur_;
};

class Parser {
public:
  explicit Parser(const std::string& src) : lx_(src), src_(src) {}

  SourceUnit unit() {
    expect_kw("system");
    Token name = expect(Token::Ident, "a system name");
    auto sys = system_from_string(name.text);
    if (!sys) throw ParseError(name.line, name.col, "a system name");
    expect_sym(";");
    SourceUnit u;
    u.system = *sys;
    u.context = context_body();
    const Token& t = lx_.peek();
    if (t.kind == Token::Ident && t.text == "sub") {
      lx_.next();
      TypePtr lhs = type();
      expect_sym("<:");
      TypePtr rhs = type();
      end();
      u.payload = TypeQuery{lhs, rhs};
    } else if (t.kind == Token::Ident && t.text == "term") {
      lx_.next();
      TermPtr m = term();
      TypePtr asc = nullptr;
      if (lx_.peek().kind == Token::Sym && lx_.peek().text == ":") {
        lx_.next();
        asc = type();
      }
      end();
      u.payload = TermQuery{m, asc};
    } else if (t.kind == Token::Ident && t.text == "derivation") {
      lx_.next();
      std::string rest = src_.substr(lx_.rest_offset());
      Json j;
      try {
        j = Json::parse(rest);
      } catch (const std::exception& e) {
        throw ParseError(t.line, t.col, std::string("derivation JSON (") + e.what() + ")");
      }
      u.payload = DerivationFile{derivation_from_json(j)};
    } else {
      throw ParseError(t.line, t.col, "'sub', 'term' or 'derivation'");
    }
    check_unit(u);
    return u;
  }

  Context context_body() {
    expect_kw("ctx");
    Context ctx;
    if (lx_.peek().kind == Token::Sym && lx_.peek().text == ";") {
      lx_.next();
      return ctx;
    }
    for (;;) {
      Token name = expect(Token::Ident, "a binding name");
      const Token& sep = lx_.peek();
      if (sep.kind == Token::Sym && sep.text == "<:") {
        lx_.next();
        ctx = ctx.push_type(name.text, type());
      } else if (sep.kind == Token::Sym && sep.text == ":") {
        lx_.next();
        ctx = ctx.push_term(name.text, type());
      } else {
        throw ParseError(sep.line, sep.col, "'<:' or ':'");
      }
      const Token& nxt = lx_.peek();
      if (nxt.kind == Token::Sym && nxt.text == ",") {
        lx_.next();
        continue;
      }
      expect_sym(";");
      return ctx;
    }
  }

  TypePtr type() {
    const Token& t = lx_.peek();
    if (t.kind == Token::Ident &&
        (t.text == "forall_k" || t.text == "forall_t" || t.text == "forall")) {
      Flavor f = t.text == "forall_k"   ? Flavor::Kernel
                 : t.text == "forall_t" ? Flavor::TopStyle
                                        : Flavor::Plain;
      lx_.next();
      Token name = expect(Token::Ident, "a type variable");
      if (is_keyword(name.text))
        throw ParseError(name.line, name.col, "a type variable");
      TypePtr bound = top_type();
      if (lx_.peek().kind == Token::Sym && lx_.peek().text == "<:") {
        lx_.next();
        bound = type();
      }
      expect_sym(".");
      TypePtr body = type();
      return forall(f, name.text, bound, close_type(body, name.text));
    }
    TypePtr left = meet_chain();
    if (lx_.peek().kind == Token::Sym && lx_.peek().text == "->") {
      lx_.next();
      return arrow(left, type());
    }
    return left;
  }

  TermPtr term() {
    const Token& t = lx_.peek();
    if (t.kind == Token::Ident && t.text == "fun") {
      lx_.next();
      expect_sym("(");
      Token name = expect(Token::Ident, "a term variable");
      expect_sym(":");
      TypePtr ann = type();
      expect_sym(")");
      expect_sym("=>");
      return lam(name.text, ann, term());
    }
    if (t.kind == Token::Ident && t.text == "tfun") {
      lx_.next();
      expect_sym("(");
      Token name = expect(Token::Ident, "a type variable");
      expect_sym("<:");
      TypePtr bound = type();
      expect_sym(")");
      expect_sym("=>");
      return tfun_body(name.text, bound);
    }
    return app_chain();
  }

private:
  TermPtr tfun_body(const std::string& name, TypePtr bound) {
    return tlam(name, bound, term());
  }

  TypePtr meet_chain() {
    TypePtr left = type_atom();
    while (lx_.peek().kind == Token::Sym && lx_.peek().text == "/\\") {
      lx_.next();
      const Token& t = lx_.peek();
      if (t.kind == Token::Ident &&
          (t.text == "forall_k" || t.text == "forall_t" || t.text == "forall")) {
        // a quantifier on the right of /\ extends maximally right
        return meet(left, type());
      }
      left = meet(left, type_atom());
    }
    return left;
  }

  TypePtr type_atom() {
    Token t = lx_.next();
    if (t.kind == Token::Ident) {
      if (t.text == "Top") return top_type();
      if (!is_keyword(t.text)) return tvar(t.text);
      throw ParseError(t.line, t.col, "a type");
    }
    if (t.kind == Token::Sym && t.text == "(") {
      TypePtr inner = type();
      expect_sym(")");
      return inner;
    }
    throw ParseError(t.line, t.col, "a type");
  }

  TermPtr app_chain() {
    TermPtr head = term_atom();
    for (;;) {
      const Token& t = lx_.peek();
      if (t.kind == Token::Sym && t.text == "[") {
        lx_.next();
        TypePtr arg = type();
        expect_sym("]");
        head = tapp(head, arg);
      } else if ((t.kind == Token::Ident && !is_term_stop(t.text)) ||
                 (t.kind == Token::Sym && t.text == "(")) {
        head = app(head, term_atom());
      } else {
        return head;
      }
    }
  }

  TermPtr term_atom() {
    Token t = lx_.next();
    if (t.kind == Token::Ident) {
      if (t.text == "top") return top_term();
      if (!is_keyword(t.text)) return term_var(t.text);
      throw ParseError(t.line, t.col, "a term");
    }
    if (t.kind == Token::Sym && t.text == "(") {
      TermPtr inner = term();
      expect_sym(")");
      return inner;
    }
    throw ParseError(t.line, t.col, "a term");
  }

  static bool is_keyword(const std::string& s) {
    return s == "system" || s == "ctx" || s == "sub" || s == "term" ||
           s == "derivation" || s == "Top" || s == "top" || s == "forall_k" ||
           s == "forall_t" || s == "forall" || s == "fun" || s == "tfun";
  }

  // Keywords that end an application chain (fun/tfun must be parenthesized in
  // argument position).
  static bool is_term_stop(const std::string& s) {
    return is_keyword(s) && s != "top";
  }

  void check_unit(const SourceUnit& u) {
    auto check_type = [&](TypePtr t) {
      if (t && !constructs_ok(u.system, t))
        throw SystemMismatch("construct not allowed in system " + to_string(u.system));
    };
    for (const CtxNode* e : u.context.entries()) check_type(e->type);
    if (const auto* q = std::get_if<TypeQuery>(&u.payload)) {
      check_type(q->lhs);
      check_type(q->rhs);
    } else if (const auto* q = std::get_if<TermQuery>(&u.payload)) {
      if (!constructs_ok(u.system, q->term))
        throw SystemMismatch("construct not allowed in system " + to_string(u.system));
      check_type(q->ascription);
    }
    // Derivation payloads are judged by the checkers, which enforce the
    // system's constructs themselves.
  }

  void end() {
    const Token& t = lx_.peek();
    if (t.kind != Token::End) throw ParseError(t.line, t.col, "end of input");
  }

  Token expect(Token::Kind k, const std::string& what) {
    Token t = lx_.next();
    if (t.kind != k) throw ParseError(t.line, t.col, what);
    return t;
  }

  void expect_sym(const std::string& s) {
    Token t = lx_.next();
    if (t.kind != Token::Sym || t.text != s)
      throw ParseError(t.line, t.col, "'" + s + "'");
  }

  void expect_kw(const std::string& s) {
    Token t = lx_.next();
    if (t.kind != Token::Ident || t.text != s)
      throw ParseError(t.line, t.col, "'" + s + "'");
  }

public:
  void finish() { end(); }

  Lexer lx_;
  const std::string& src_;
};

}  // namespace

SourceUnit parse_source(const std::string& text) {
  Parser p(text);
  return p.unit();
}

TypePtr parse_type(const std::string& text, SystemId sys) {
  Parser p(text);
  TypePtr t = p.type();
  p.finish();
  if (!constructs_ok(sys, t))
    throw SystemMismatch("construct not allowed in system " + to_string(sys));
  return t;
}

TermPtr parse_term(const std::string& text, SystemId sys) {
  Parser p(text);
  TermPtr t = p.term();
  p.finish();
  if (!constructs_ok(sys, t))
    throw SystemMismatch("construct not allowed in system " + to_string(sys));
  return t;
}

Context parse_context(const std::string& text, SystemId sys) {
  Parser p(text);
  Context ctx = p.context_body();
  p.finish();
  for (const CtxNode* e : ctx.entries())
    if (!constructs_ok(sys, e->type))
      throw SystemMismatch("construct not allowed in system " + to_string(sys));
  return ctx;
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

constexpr int kPrecType = 0;       // full type positions
constexpr int kPrecArrowLhs = 1;   // arrow domains
constexpr int kPrecMeetOperand = 2;

void print_type(std::ostream& os, TypePtr t, int prec,
                std::vector<std::string>& binders, std::set<std::string>& taken);

void print_quantifier(std::ostream& os, TypePtr t,
                      std::vector<std::string>& binders,
                      std::set<std::string>& taken) {
  const char* kw = t->flavor == Flavor::Kernel     ? "forall_k"
                   : t->flavor == Flavor::TopStyle ? "forall_t"
                                                   : "forall";
  std::string name = fresh_name(t->name.empty() ? "X" : t->name, taken);
  os << kw << ' ' << name << " <: ";
  print_type(os, t->a, kPrecType, binders, taken);
  os << " . ";
  bool inserted = taken.insert(name).second;
  binders.push_back(name);
  print_type(os, t->b, kPrecType, binders, taken);
  binders.pop_back();
  if (inserted) taken.erase(name);
}

void print_type(std::ostream& os, TypePtr t, int prec,
                std::vector<std::string>& binders, std::set<std::string>& taken) {
  switch (t->tag) {
    case TypeTag::Top:
      os << "Top";
      return;
    case TypeTag::FVar:
      os << t->name;
      return;
    case TypeTag::BVar: {
      size_t i = binders.size();
      if (t->index < i) {
        os << binders[i - 1 - t->index];
      } else {
        os << "#" << t->index;  // dangling; debug output only
      }
      return;
    }
    case TypeTag::Arrow: {
      bool paren = prec >= kPrecArrowLhs;
      if (paren) os << '(';
      print_type(os, t->a, kPrecArrowLhs, binders, taken);
      os << " -> ";
      print_type(os, t->b, kPrecType, binders, taken);
      if (paren) os << ')';
      return;
    }
    case TypeTag::Meet: {
      bool paren = prec >= kPrecMeetOperand;
      if (paren) os << '(';
      print_type(os, t->a, kPrecMeetOperand, binders, taken);
      os << " /\\ ";
      print_type(os, t->b, kPrecMeetOperand, binders, taken);
      if (paren) os << ')';
      return;
    }
    case TypeTag::Forall: {
      bool paren = prec >= kPrecArrowLhs;
      if (paren) os << '(';
      print_quantifier(os, t, binders, taken);
      if (paren) os << ')';
      return;
    }
  }
}

constexpr int kPrecTerm = 0;
constexpr int kPrecAppHead = 1;
constexpr int kPrecAppArg = 2;

void print_term(std::ostream& os, const TermPtr& t, int prec,
                std::set<std::string>& taken) {
  auto type_str = [&](TypePtr ty) {
    std::ostringstream ss;
    std::vector<std::string> binders;
    print_type(ss, ty, kPrecType, binders, taken);
    return ss.str();
  };
  switch (t->tag) {
    case TermTag::TopC:
      os << "top";
      return;
    case TermTag::Var:
      os << t->name;
      return;
    case TermTag::Lam: {
      bool paren = prec >= kPrecAppHead;
      if (paren) os << '(';
      os << "fun (" << t->name << " : " << type_str(t->type) << ") => ";
      print_term(os, t->t1, kPrecTerm, taken);
      if (paren) os << ')';
      return;
    }
    case TermTag::TLam: {
      bool paren = prec >= kPrecAppHead;
      if (paren) os << '(';
      os << "tfun (" << t->name << " <: " << type_str(t->type) << ") => ";
      bool inserted = taken.insert(t->name).second;
      print_term(os, t->t1, kPrecTerm, taken);
      if (inserted) taken.erase(t->name);
      if (paren) os << ')';
      return;
    }
    case TermTag::App: {
      bool paren = prec >= kPrecAppArg;
      if (paren) os << '(';
      print_term(os, t->t1, kPrecAppHead, taken);
      os << ' ';
      print_term(os, t->t2, kPrecAppArg, taken);
      if (paren) os << ')';
      return;
    }
    case TermTag::TApp: {
      bool paren = prec >= kPrecAppArg;
      if (paren) os << '(';
      print_term(os, t->t1, kPrecAppHead, taken);
      os << " [" << type_str(t->type) << ']';
      if (paren) os << ')';
      return;
    }
  }
}

}  // namespace

std::string render(TypePtr t) {
  std::ostringstream os;
  std::vector<std::string> binders;
  std::set<std::string> taken = free_type_vars(t);
  print_type(os, t, kPrecType, binders, taken);
  return os.str();
}

std::string render(const TermPtr& t) {
  std::ostringstream os;
  std::set<std::string> taken = free_type_vars_in_term(t);
  print_term(os, t, kPrecTerm, taken);
  return os.str();
}

std::string render(const Context& ctx) {
  std::ostringstream os;
  os << "ctx";
  bool first = true;
  for (const CtxNode* e : ctx.entries()) {
    os << (first ? " " : ", ");
    first = false;
    os << e->name << (e->kind == BindKind::TypeBound ? " <: " : " : ")
       << render(e->type);
  }
  os << ";";
  return os.str();
}

std::string render(const SourceUnit& u) {
  std::ostringstream os;
  os << "system " << to_string(u.system) << ";\n";
  os << render(u.context) << "\n";
  if (const auto* q = std::get_if<TypeQuery>(&u.payload)) {
    os << "sub " << render(q->lhs) << " <: " << render(q->rhs) << "\n";
  } else if (const auto* q = std::get_if<TermQuery>(&u.payload)) {
    os << "term " << render(q->term);
    if (q->ascription) os << " : " << render(q->ascription);
    os << "\n";
  } else if (const auto* d = std::get_if<DerivationFile>(&u.payload)) {
    os << "derivation\n" << derivation_to_json(*d->derivation).dump(2) << "\n";
  }
  return os.str();
}

std::string describe(const Judgment& j) {
  std::string ctx = render(j.ctx);
  // strip the "ctx"/";" wrapper for judgment display
  std::string inner = ctx.size() > 4 ? ctx.substr(4, ctx.size() - 5) : "";
  std::string head = inner.empty() ? "" : inner + " ";
  switch (j.kind) {
    case JudgKind::WfType:
      return head + "|- " + render(j.t1);
    case JudgKind::Subtype:
      return head + "|- " + render(j.t1) + " <: " + render(j.t2);
    case JudgKind::Typing:
      return head + "|- " + render(j.m1) + " : " + render(j.t1);
    case JudgKind::Equality:
      return head + "|- " + render(j.m1) + " = " + render(j.m2) + " : " +
             render(j.t1);
  }
  return "?";
}

}  // namespace bq
