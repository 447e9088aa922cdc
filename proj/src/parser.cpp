#include <cctype>
#include <set>

#include "zzsg/cli.hpp"
#include "zzsg/model.hpp"

namespace zzsg {

namespace {

enum class Tok { Int, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      int l = line_, c = col_;
      if (i_ >= s_.size()) {
        out.push_back({Tok::End, "", l, c});
        return out;
      }
      char ch = s_[i_];
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        std::string num;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) num += next();
        out.push_back({Tok::Int, num, l, c});
      } else if (std::isalpha(static_cast<unsigned char>(ch))) {
        out.push_back({Tok::Ident, ident(), l, c});
      } else {
        next();
        switch (ch) {
          case '+': out.push_back({Tok::Plus, "+", l, c}); break;
          case '-': out.push_back({Tok::Minus, "-", l, c}); break;
          case '*': out.push_back({Tok::Star, "*", l, c}); break;
          case '/': out.push_back({Tok::Slash, "/", l, c}); break;
          case '^': out.push_back({Tok::Caret, "^", l, c}); break;
          case '(': out.push_back({Tok::LParen, "(", l, c}); break;
          case ')': out.push_back({Tok::RParen, ")", l, c}); break;
          default: throw ParseError(ErrorKind::SyntaxError, l, c, std::string("unexpected character '") + ch + "'");
        }
      }
    }
  }

 private:
  char peek(size_t k = 0) const { return i_ + k < s_.size() ? s_[i_ + k] : '\0'; }
  char next() {
    char ch = s_[i_++];
    if (ch == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return ch;
  }
  void skip_space() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) next();
  }

  std::string ident() {
    static const std::set<std::string> signed_names{"psi", "chi", "lambda", "eta", "theta", "v", "D", "P"};
    int l = line_, c = col_;
    std::string id;
    while (std::isalnum(static_cast<unsigned char>(peek()))) id += next();
    if (signed_names.count(id) && (peek() == '+' || peek() == '-')) id += next();
    if (peek() == '~') id += next();
    if (peek() == '{') {
      while (peek() != '}') {
        if (peek() == '\0') throw ParseError(ErrorKind::SyntaxError, l, c, "unterminated '{'");
        id += next();
      }
      id += next();
    }
    if (peek() == '_' && peek(1) == '{') {
      id += next();
      id += next();
      while (peek() == '+' || peek() == '-') id += next();
      if (peek() != '}') throw ParseError(ErrorKind::SyntaxError, line_, col_, "expected '}' closing the jet suffix");
      id += next();
    }
    return id;
  }

  const std::string& s_;
  size_t i_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, Truncation t) : t_(toks), trunc_(t) {}

  GradedExpr parse() {
    GradedExpr e = expr();
    if (cur().kind != Tok::End) fail("unexpected '" + cur().text + "'");
    return e;
  }

 private:
  const Token& cur() const { return t_[p_]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(ErrorKind::SyntaxError, cur().line, cur().col, msg);
  }
  void expect(Tok k, const std::string& what) {
    if (cur().kind != k) fail("expected " + what);
    ++p_;
  }

  GradedExpr expr() {
    GradedExpr e = term();
    while (cur().kind == Tok::Plus || cur().kind == Tok::Minus) {
      bool minus = cur().kind == Tok::Minus;
      ++p_;
      GradedExpr r = term();
      e = minus ? e - r : e + r;
    }
    return e;
  }

  GradedExpr term() {
    GradedExpr e = unary();
    while (cur().kind == Tok::Star) {
      ++p_;
      e = e * unary();
    }
    return e;
  }

  GradedExpr unary() {
    if (cur().kind == Tok::Minus) {
      ++p_;
      return -unary();
    }
    return power();
  }

  GradedExpr power() {
    Token base_tok = cur();
    GradedExpr b = factor();
    if (cur().kind != Tok::Caret) return b;
    ++p_;
    bool neg = false;
    if (cur().kind == Tok::Minus) {
      neg = true;
      ++p_;
    }
    if (cur().kind != Tok::Int) fail("expected integer exponent");
    int k = std::stoi(cur().text);
    ++p_;
    if (!neg) return pow(b, k);
    // Negative powers exist only for the invertible parameters v+-, a.
    if (b.size() == 1) {
      const auto& [key, c] = *b.terms().begin();
      GradedKey g = key.g;
      if (c == 1 && key.s.is_one() && g.cliff == Cliff::One && !g.tm && !g.tp && !g.zpow && g.gjets.empty())
        return GradedExpr::vpow(-k * g.vpow, trunc_) * GradedExpr::apow(-k * g.apow, trunc_);
    }
    throw ParseError(ErrorKind::SyntaxError, base_tok.line, base_tok.col, "negative power of a non-invertible factor");
  }

  GradedExpr factor() {
    const Token tok = cur();
    switch (tok.kind) {
      case Tok::Int: {
        ++p_;
        Rational r(Integer(tok.text));
        if (cur().kind == Tok::Slash) {
          ++p_;
          if (cur().kind != Tok::Int) fail("expected denominator");
          Integer d(cur().text);
          if (d == 0) fail("zero denominator");
          ++p_;
          r /= Rational(d);
        }
        return GradedExpr::constant(r, trunc_);
      }
      case Tok::LParen: {
        ++p_;
        GradedExpr e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident: break;
      default: fail(tok.kind == Tok::End ? "unexpected end of input" : "unexpected '" + tok.text + "'");
    }
    ++p_;
    const std::string& id = tok.text;
    if (id == "sin" || id == "cos") {
      expect(Tok::LParen, "'(' after " + id);
      if (cur().kind == Tok::RParen) fail("empty argument");
      GradedExpr arg = expr();
      expect(Tok::RParen, "')'");
      return trig_of(id == "sin" ? TrigKind::Sin : TrigKind::Cos, arg);
    }
    if (id == "D-" || id == "D+" || id == "Z" || id == "P-" || id == "P+") {
      GradedExpr f = factor();
      return apply(derivation(id), f);
    }
    return symbol(tok);
  }

  GradedExpr symbol(const Token& tok) {
    const std::string& id = tok.text;
    if (id == "z") return GradedExpr::coord(Coord::Z, trunc_);
    if (id == "theta-") return GradedExpr::coord(Coord::ThetaM, trunc_);
    if (id == "theta+") return GradedExpr::coord(Coord::ThetaP, trunc_);
    if (id == "alpha") return GradedExpr::cliff(Cliff::Alpha, trunc_);
    if (id == "lambda+") return GradedExpr::cliff(Cliff::LamP, trunc_);
    if (id == "lambda-") return GradedExpr::cliff(Cliff::LamM, trunc_);
    if (id == "eta+") return GradedExpr::cliff(Cliff::EtaP, trunc_);
    if (id == "eta-") return GradedExpr::cliff(Cliff::EtaM, trunc_);
    if (id == "v+") return GradedExpr::vpow(1, trunc_);
    if (id == "v-") return GradedExpr::vpow(-1, trunc_);
    if (id == "a") return GradedExpr::apow(1, trunc_);
    std::string name = id;
    int m = 0, n = 0;
    if (auto u = id.find("_{"); u != std::string::npos) {
      name = id.substr(0, u);
      for (char ch : id.substr(u + 2)) {
        if (ch == '-') ++m;
        if (ch == '+') ++n;
      }
    }
    if (!has_field(name)) throw ParseError(ErrorKind::UnknownSymbol, tok.line, tok.col, "unknown symbol '" + id + "'");
    return GradedExpr::jet(make_jet(name, m, n), trunc_);
  }

  std::vector<Token> t_;
  size_t p_ = 0;
  Truncation trunc_;
};

}  // namespace

GradedExpr parse_expr(const std::string& src, const ParseOptions& opts) {
  GradedExpr e = Parser(Lexer(src).run(), opts.trunc).parse();
  return opts.realize ? realize(e) : e;
}

std::string describe(const GradedExpr& e) {
  std::string s = e.str();
  try {
    s += "\n  degree " + e.degree().str() + ", weight " + weight_of(e).str();
  } catch (const Error&) {
    s += "\n  inhomogeneous";
  }
  return s;
}

}  // namespace zzsg
