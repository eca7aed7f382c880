// Recursive-descent parser for coordinate expressions.
//
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := ('+'|'-') unary | factor
//   factor := base ('^' '-'? integer)?
//   base   := number | ident | '(' expr ')' | func '(' expr ')'
//   func   := sin | cos | exp | log | sinh | cosh
//   ident  := x[1-9][0-9]*
#include <cctype>
#include <charconv>
#include <stdexcept>
#include <string>

#include "hg/errors.hpp"
#include "hg/scalar_field.hpp"

namespace hg {
namespace {

class Parser {
 public:
  Parser(std::string_view src, int arity) : src_(src), arity_(arity) {}

  ScalarField parse() {
    ScalarField f = expr();
    skip_ws();
    if (pos_ < src_.size()) fail("unexpected character '" + std::string(1, src_[pos_]) + "'");
    return f.with_arity(arity_);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError("syntax error: " + msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
    throw ParseError(msg, at);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) fail(std::string("expected '") + c + "', got end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  ScalarField expr() {
    ScalarField acc = term();
    for (;;) {
      if (accept('+')) {
        acc = acc + term();
      } else if (accept('-')) {
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }

  ScalarField term() {
    ScalarField acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        acc = acc / unary();
      } else {
        return acc;
      }
    }
  }

  ScalarField unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return factor();
  }

  ScalarField factor() {
    ScalarField b = base();
    if (accept('^')) {
      skip_ws();
      bool negative = false;
      if (pos_ < src_.size() && src_[pos_] == '-') {
        negative = true;
        ++pos_;
      }
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (start == pos_) {
        if (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == '(' || std::isalpha(static_cast<unsigned char>(src_[pos_])))) {
          fail("exponent must be an integer literal");
        }
        fail(pos_ >= src_.size() ? "unexpected end of input" : "expected integer exponent");
      }
      int e = 0;
      auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, e);
      if (ec != std::errc() || ptr != src_.data() + pos_) fail_at("exponent out of range", start);
      if (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E')) {
        fail("exponent must be an integer literal");
      }
      return pow(b, negative ? -e : e);
    }
    return b;
  }

  ScalarField base() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    if (accept('(')) {
      ScalarField inner = expr();
      expect(')');
      return inner;
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  ScalarField number() {
    std::size_t start = pos_;
    auto digits = [&] {
      std::size_t s = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      return pos_ - s;
    };
    std::size_t n = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) fail_at("syntax error: malformed number", start);
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) {
        pos_ = save;
        fail("malformed exponent in number");
      }
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc() || ptr != src_.data() + pos_) fail_at("syntax error: malformed number", start);
    return ScalarField(v);
  }

  ScalarField identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    std::string_view name = src_.substr(start, pos_ - start);
    static constexpr std::pair<std::string_view, ScalarField (*)(const ScalarField&)> funcs[] = {
        {"sin", &hg::sin},   {"cos", &hg::cos},   {"exp", &hg::exp},
        {"log", &hg::log},   {"sinh", &hg::sinh}, {"cosh", &hg::cosh},
    };
    for (const auto& [fname, fn] : funcs) {
      if (name == fname) {
        expect('(');
        ScalarField arg = expr();
        expect(')');
        return fn(arg);
      }
    }
    if (name.size() >= 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '9') {
      bool all_digits = true;
      for (char d : name.substr(1)) all_digits = all_digits && std::isdigit(static_cast<unsigned char>(d));
      if (all_digits) {
        long idx = 0;
        auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
        if (ec != std::errc() || idx > arity_) {
          fail_at("coordinate " + std::string(name) + " out of range for arity " +
                      std::to_string(arity_),
                  start);
        }
        return ScalarField::coordinate(static_cast<int>(idx) - 1, arity_);
      }
    }
    fail_at("syntax error: unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int arity_;
};

}  // namespace

ScalarField parse_field(std::string_view source, int arity) {
  if (arity < 1) throw std::invalid_argument("parse_field: arity must be >= 1");
  return Parser(source, arity).parse();
}

}  // namespace hg
