#include "contring/ring.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <span>

#include <json.hpp>

#include "contring/bigint.hpp"
#include "contring/errors.hpp"

namespace contring {

namespace detail {

// Raw arithmetic and literal syntax for one ring variant. Stateless with
// respect to callers; element indices are dense 0..size-1.
class RingOps {
 public:
  static constexpr int kUnknown = -2;

  virtual ~RingOps() = default;
  virtual int size() const = 0;
  virtual int zero() const = 0;
  virtual int one() const = 0;
  virtual int add(int a, int b) const = 0;
  virtual int mul(int a, int b) const = 0;
  virtual int neg(int a) const = 0;
  virtual std::string display(int a) const = 0;
  virtual int parse(std::string_view text) const = 0;
  // -1 = not a unit, >= 0 = the inverse, kUnknown = caller must scan.
  virtual int try_inverse(int) const { return kUnknown; }
};

}  // namespace detail

using detail::RingOps;

namespace {

[[noreturn]] void lit_fail(std::string_view text, std::size_t pos,
                           const std::string& msg) {
  throw SpecError("element literal '" + std::string(text) + "': " + msg, pos);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

bool digits_only(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// True when the literal needs wrapping to be re-read as a single coefficient:
// anything that is not a plain integer or an already-parenthesized chunk.
bool needs_parens(const std::string& s) {
  if (digits_only(s)) return false;
  if (s.size() >= 2 && s.front() == '(') {
    int depth = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '(') ++depth;
      if (s[i] == ')') {
        --depth;
        if (depth == 0) return i + 1 != s.size();
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Z/N
// ---------------------------------------------------------------------------

class ZmodOps final : public RingOps {
 public:
  explicit ZmodOps(long n) : n_(int(n)) {}
  int size() const override { return n_; }
  int zero() const override { return 0; }
  int one() const override { return 1 % n_; }
  int add(int a, int b) const override { return (a + b) % n_; }
  int mul(int a, int b) const override {
    return int((long(a) * long(b)) % n_);
  }
  int neg(int a) const override { return a == 0 ? 0 : n_ - a; }
  std::string display(int a) const override { return std::to_string(a); }

  int parse(std::string_view text) const override {
    std::string_view s = trim(text);
    std::size_t i = 0;
    bool negative = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
      negative = s[i] == '-';
      ++i;
    }
    if (i >= s.size()) lit_fail(text, i, "expected integer");
    long r = 0;
    for (; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
        lit_fail(text, i, "expected integer");
      }
      r = (r * 10 + (s[i] - '0')) % n_;
    }
    return negative ? neg(int(r)) : int(r);
  }

  int try_inverse(int a) const override {
    // Extended Euclid on (a, n).
    long r0 = n_, r1 = a, s0 = 0, s1 = 1;
    while (r1 != 0) {
      long q = r0 / r1;
      long r2 = r0 - q * r1;
      long s2 = s0 - q * s1;
      r0 = r1; r1 = r2;
      s0 = s1; s1 = s2;
    }
    if (r0 != 1) return -1;
    return int(((s0 % n_) + n_) % n_);
  }

 private:
  int n_;
};

// ---------------------------------------------------------------------------
// Literal scanning shared by the polynomial backends
// ---------------------------------------------------------------------------

struct LitCursor {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool eat(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  long number(const char* what) {
    if (!std::isdigit(static_cast<unsigned char>(peek()))) {
      lit_fail(text, pos, std::string("expected ") + what);
    }
    long v = 0;
    while (pos < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[pos]))) {
      v = v * 10 + (text[pos] - '0');
      if (v > 1000000000L) lit_fail(text, pos, std::string(what) + " too large");
      ++pos;
    }
    return v;
  }
  // Consumes "(...)" with balanced nesting and returns the inside.
  std::string_view paren_group() {
    if (peek() != '(') lit_fail(text, pos, "expected '('");
    std::size_t start = pos;
    int depth = 0;
    for (; pos < text.size(); ++pos) {
      if (text[pos] == '(') ++depth;
      if (text[pos] == ')') {
        --depth;
        if (depth == 0) {
          ++pos;
          return text.substr(start + 1, pos - start - 2);
        }
      }
    }
    lit_fail(text, start, "unbalanced parentheses");
  }
};

// ---------------------------------------------------------------------------
// base[X] / <monic modulus>  (also backs GF via a prime base)
// ---------------------------------------------------------------------------

class PolyOps final : public RingOps {
 public:
  PolyOps(RingPtr base, std::vector<int32_t> monic_mod, char var, int my_size)
      : base_(std::move(base)),
        mod_(std::move(monic_mod)),
        d_(int(mod_.size()) - 1),
        var_(var),
        size_(my_size) {
    prime_field_base_ = base_->spec().kind == RingSpec::Kind::Zmod &&
                        is_prime(base_->size());
    pure_power_mod_ = true;
    for (int i = 0; i < d_; ++i) {
      if (mod_[i] != base_->zero()) pure_power_mod_ = false;
    }
  }

  int size() const override { return size_; }
  int zero() const override { return 0; }
  int one() const override { return base_->one(); }  // digit 0 slot

  std::vector<int> decode(int idx) const {
    std::vector<int> digits(d_);
    int b = base_->size();
    for (int i = 0; i < d_; ++i) {
      digits[i] = idx % b;
      idx /= b;
    }
    return digits;
  }
  int encode(std::span<const int> digits) const {
    int b = base_->size();
    long idx = 0;
    for (int i = d_ - 1; i >= 0; --i) idx = idx * b + digits[i];
    return int(idx);
  }

  int add(int a, int b) const override {
    std::vector<int> x = decode(a), y = decode(b);
    for (int i = 0; i < d_; ++i) x[i] = base_->add(x[i], y[i]);
    return encode(x);
  }

  int neg(int a) const override {
    std::vector<int> x = decode(a);
    for (int& digit : x) digit = base_->neg(digit);
    return encode(x);
  }

  int mul(int a, int b) const override {
    std::vector<int> x = decode(a), y = decode(b);
    std::vector<int> buf(2 * d_ - 1, base_->zero());
    for (int i = 0; i < d_; ++i) {
      if (x[i] == base_->zero()) continue;
      for (int j = 0; j < d_; ++j) {
        buf[i + j] = base_->add(buf[i + j], base_->mul(x[i], y[j]));
      }
    }
    reduce(buf);
    buf.resize(d_);
    return encode(buf);
  }

  // x^d = -(mod_0 + ... + mod_{d-1} x^{d-1}), applied from the top down.
  void reduce(std::vector<int>& buf) const {
    for (int i = int(buf.size()) - 1; i >= d_; --i) {
      int c = buf[i];
      if (c == base_->zero()) continue;
      buf[i] = base_->zero();
      for (int j = 0; j < d_; ++j) {
        buf[i - d_ + j] =
            base_->sub(buf[i - d_ + j], base_->mul(c, mod_[j]));
      }
    }
  }

  void mul_by_x(std::vector<int>& digits) const {
    int carry = digits[d_ - 1];
    for (int i = d_ - 1; i > 0; --i) digits[i] = digits[i - 1];
    digits[0] = base_->zero();
    if (carry == base_->zero()) return;
    for (int j = 0; j < d_; ++j) {
      digits[j] = base_->sub(digits[j], base_->mul(carry, mod_[j]));
    }
  }

  // Element from coefficients of arbitrary degree (low to high), reduced.
  int element_from_coeffs(std::span<const int> coeffs) const {
    std::vector<int> acc(d_, base_->zero());
    for (int i = int(coeffs.size()) - 1; i >= 0; --i) {
      mul_by_x(acc);
      acc[0] = base_->add(acc[0], coeffs[i]);
    }
    return encode(acc);
  }

  std::string display(int a) const override {
    std::vector<int> digits = decode(a);
    std::string out;
    for (int i = d_ - 1; i >= 0; --i) {
      if (digits[i] == base_->zero()) continue;
      if (!out.empty()) out += "+";
      std::string coef = base_->display(digits[i]);
      std::string vars;
      if (i == 1) vars = std::string(1, var_);
      else if (i > 1) vars = std::string(1, var_) + "^" + std::to_string(i);
      if (i > 0 && digits[i] == base_->one()) {
        out += vars;
      } else {
        out += needs_parens(coef) ? "(" + coef + ")" : coef;
        out += vars;
      }
    }
    return out.empty() ? "0" : out;
  }

  int parse(std::string_view text) const override {
    LitCursor cur{text};
    std::vector<int> acc(d_, base_->zero());
    bool negative = cur.eat('-');
    for (;;) {
      int coef = base_->one();
      bool saw = false;
      if (cur.peek() == '(') {
        coef = base_->parse_element(cur.paren_group());
        saw = true;
      } else if (std::isdigit(static_cast<unsigned char>(cur.peek()))) {
        coef = base_->from_int(cur.number("coefficient"));
        saw = true;
      }
      long e = 0;
      if (cur.eat(var_)) {
        saw = true;
        e = cur.eat('^') ? cur.number("exponent") : 1;
      }
      if (!saw) lit_fail(text, cur.pos, "expected term");
      if (negative) coef = base_->neg(coef);
      // acc += coef * x^e
      std::vector<int> term(d_, base_->zero());
      term[0] = coef;
      for (long i = 0; i < e; ++i) mul_by_x(term);
      for (int i = 0; i < d_; ++i) acc[i] = base_->add(acc[i], term[i]);
      if (cur.eat('+')) negative = false;
      else if (cur.eat('-')) negative = true;
      else break;
    }
    if (!cur.done()) lit_fail(text, cur.pos, "unexpected trailing characters");
    return encode(acc);
  }

  int try_inverse(int a) const override {
    if (prime_field_base_) return inverse_mod_prime(a);
    if (pure_power_mod_) return inverse_nilpotent(a);
    return kUnknown;
  }

  const std::vector<int32_t>& modulus() const { return mod_; }
  int degree() const { return d_; }
  const RingPtr& base() const { return base_; }

 private:
  // Extended Euclid in F_p[x] against the modulus.
  int inverse_mod_prime(int a) const {
    long p = base_->size();
    auto deg = [](const std::vector<long>& f) {
      for (int i = int(f.size()) - 1; i >= 0; --i)
        if (f[i] != 0) return i;
      return -1;
    };
    std::vector<long> r0(mod_.begin(), mod_.end()), r1, s0 = {0}, s1 = {1};
    for (int v : decode(a)) r1.push_back(v);
    auto scale_sub = [&](std::vector<long>& f, const std::vector<long>& g,
                         long c, int shift) {
      // f -= c * x^shift * g  (mod p)
      if (f.size() < g.size() + shift) f.resize(g.size() + shift, 0);
      for (std::size_t i = 0; i < g.size(); ++i) {
        f[i + shift] = ((f[i + shift] - c * g[i]) % p + p) % p;
      }
    };
    while (deg(r1) >= 0) {
      int d1 = deg(r1);
      long lead1_inv = 1;
      {  // inverse of r1's leading coefficient mod p
        long t = r1[d1] % p, acc = 1;
        for (long e = p - 2; e > 0; e >>= 1, t = t * t % p)
          if (e & 1) acc = acc * t % p;
        lead1_inv = acc;
      }
      if (deg(r0) < d1) break;
      while (deg(r0) >= d1) {
        int shift = deg(r0) - d1;
        long c = r0[deg(r0)] * lead1_inv % p;
        scale_sub(r0, r1, c, shift);
        scale_sub(s0, s1, c, shift);
      }
      std::swap(r0, r1);
      std::swap(s0, s1);
    }
    if (deg(r0) != 0) return -1;
    long c0 = r0[0] % p, inv0 = 1;
    for (long e = p - 2, t = c0; e > 0; e >>= 1, t = t * t % p)
      if (e & 1) inv0 = inv0 * t % p;
    std::vector<long> res = s0;
    std::vector<int> coeffs;
    for (long v : res) coeffs.push_back(int(v * inv0 % p));
    return element_from_coeffs(coeffs);
  }

  // Modulus x^d: a = c + n with n nilpotent; a unit iff c is, and
  // a^-1 = c^-1 * sum_{j<d} (-c^-1 n)^j.
  int inverse_nilpotent(int a) const {
    std::vector<int> digits = decode(a);
    int c = digits[0];
    if (!base_->is_unit(c)) return -1;
    int c_inv = base_->inverse(c);
    std::vector<int> nil = digits;
    nil[0] = base_->zero();
    int t = mul(neg(encode(nil)), constant(c_inv));
    int acc = one();
    int power = one();
    for (int j = 1; j < d_; ++j) {
      power = mul(power, t);
      acc = add(acc, power);
    }
    return mul(acc, constant(c_inv));
  }

  int constant(int base_elem) const {
    std::vector<int> digits(d_, base_->zero());
    digits[0] = base_elem;
    return encode(digits);
  }

  RingPtr base_;
  std::vector<int32_t> mod_;
  int d_;
  char var_;
  int size_;
  bool prime_field_base_ = false;
  bool pure_power_mod_ = false;
};

// ---------------------------------------------------------------------------
// base[X,Y] / <X^a, Y^b>
// ---------------------------------------------------------------------------

class BivarOps final : public RingOps {
 public:
  BivarOps(RingPtr base, int a, int b, int my_size)
      : base_(std::move(base)), a_(a), b_(b), size_(my_size) {}

  int size() const override { return size_; }
  int zero() const override { return 0; }
  int one() const override { return base_->one(); }

  std::vector<int> decode(int idx) const {
    std::vector<int> digits(a_ * b_);
    int s = base_->size();
    for (int i = 0; i < a_ * b_; ++i) {
      digits[i] = idx % s;
      idx /= s;
    }
    return digits;
  }
  int encode(std::span<const int> digits) const {
    int s = base_->size();
    long idx = 0;
    for (int i = a_ * b_ - 1; i >= 0; --i) idx = idx * s + digits[i];
    return int(idx);
  }
  int slot(int i, int j) const { return i * b_ + j; }

  int add(int x, int y) const override {
    std::vector<int> u = decode(x), v = decode(y);
    for (int i = 0; i < a_ * b_; ++i) u[i] = base_->add(u[i], v[i]);
    return encode(u);
  }
  int neg(int x) const override {
    std::vector<int> u = decode(x);
    for (int& digit : u) digit = base_->neg(digit);
    return encode(u);
  }
  int mul(int x, int y) const override {
    std::vector<int> u = decode(x), v = decode(y);
    std::vector<int> out(a_ * b_, base_->zero());
    for (int i1 = 0; i1 < a_; ++i1)
      for (int j1 = 0; j1 < b_; ++j1) {
        int c = u[slot(i1, j1)];
        if (c == base_->zero()) continue;
        for (int i2 = 0; i1 + i2 < a_; ++i2)
          for (int j2 = 0; j1 + j2 < b_; ++j2) {
            int& o = out[slot(i1 + i2, j1 + j2)];
            o = base_->add(o, base_->mul(c, v[slot(i2, j2)]));
          }
      }
    return encode(out);
  }

  std::string display(int x) const override {
    std::vector<int> u = decode(x);
    std::string out;
    for (int i = a_ - 1; i >= 0; --i)
      for (int j = b_ - 1; j >= 0; --j) {
        int c = u[slot(i, j)];
        if (c == base_->zero()) continue;
        if (!out.empty()) out += "+";
        std::string vars;
        if (i == 1) vars += "x";
        else if (i > 1) vars += "x^" + std::to_string(i);
        if (j == 1) vars += "y";
        else if (j > 1) vars += "y^" + std::to_string(j);
        std::string coef = base_->display(c);
        if (!vars.empty() && c == base_->one()) {
          out += vars;
        } else {
          out += needs_parens(coef) ? "(" + coef + ")" : coef;
          out += vars;
        }
      }
    return out.empty() ? "0" : out;
  }

  int parse(std::string_view text) const override {
    LitCursor cur{text};
    std::vector<int> acc(a_ * b_, base_->zero());
    bool negative = cur.eat('-');
    for (;;) {
      int coef = base_->one();
      bool saw = false;
      if (cur.peek() == '(') {
        coef = base_->parse_element(cur.paren_group());
        saw = true;
      } else if (std::isdigit(static_cast<unsigned char>(cur.peek()))) {
        coef = base_->from_int(cur.number("coefficient"));
        saw = true;
      }
      long di = 0, dj = 0;
      if (cur.eat('x')) {
        saw = true;
        di = cur.eat('^') ? cur.number("exponent") : 1;
      }
      if (cur.eat('y')) {
        saw = true;
        dj = cur.eat('^') ? cur.number("exponent") : 1;
      }
      if (!saw) lit_fail(text, cur.pos, "expected term");
      if (negative) coef = base_->neg(coef);
      // Monomials at or beyond a pure-power generator vanish.
      if (di < a_ && dj < b_) {
        int& o = acc[slot(int(di), int(dj))];
        o = base_->add(o, coef);
      }
      if (cur.eat('+')) negative = false;
      else if (cur.eat('-')) negative = true;
      else break;
    }
    if (!cur.done()) lit_fail(text, cur.pos, "unexpected trailing characters");
    return encode(acc);
  }

  int try_inverse(int x) const override {
    std::vector<int> u = decode(x);
    int c = u[0];
    if (!base_->is_unit(c)) return -1;
    std::vector<int> cinv_digits(a_ * b_, base_->zero());
    cinv_digits[0] = base_->inverse(c);
    int cinv_elem = encode(cinv_digits);
    std::vector<int> nil = u;
    nil[0] = base_->zero();
    int t = mul(neg(encode(nil)), cinv_elem);
    int acc = one(), power = one();
    for (int j = 1; j < a_ + b_ - 1; ++j) {
      power = mul(power, t);
      acc = add(acc, power);
    }
    return mul(acc, cinv_elem);
  }

 private:
  RingPtr base_;
  int a_, b_;
  int size_;
};

// ---------------------------------------------------------------------------
// Direct products
// ---------------------------------------------------------------------------

class ProductOps final : public RingOps {
 public:
  explicit ProductOps(std::vector<RingPtr> factors, int my_size)
      : factors_(std::move(factors)), size_(my_size) {
    strides_.assign(factors_.size(), 1);
    for (int i = int(factors_.size()) - 2; i >= 0; --i) {
      strides_[i] = strides_[i + 1] * factors_[i + 1]->size();
    }
  }

  int size() const override { return size_; }
  int component(int idx, int i) const {
    return int(idx / strides_[i]) % factors_[i]->size();
  }
  int compose(std::span<const int> parts) const {
    long idx = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i)
      idx += long(parts[i]) * strides_[i];
    return int(idx);
  }

  int zero() const override {
    std::vector<int> parts;
    for (const auto& f : factors_) parts.push_back(f->zero());
    return compose(parts);
  }
  int one() const override {
    std::vector<int> parts;
    for (const auto& f : factors_) parts.push_back(f->one());
    return compose(parts);
  }
  int add(int a, int b) const override {
    std::vector<int> parts(factors_.size());
    for (std::size_t i = 0; i < factors_.size(); ++i)
      parts[i] = factors_[i]->add(component(a, int(i)), component(b, int(i)));
    return compose(parts);
  }
  int mul(int a, int b) const override {
    std::vector<int> parts(factors_.size());
    for (std::size_t i = 0; i < factors_.size(); ++i)
      parts[i] = factors_[i]->mul(component(a, int(i)), component(b, int(i)));
    return compose(parts);
  }
  int neg(int a) const override {
    std::vector<int> parts(factors_.size());
    for (std::size_t i = 0; i < factors_.size(); ++i)
      parts[i] = factors_[i]->neg(component(a, int(i)));
    return compose(parts);
  }

  std::string display(int a) const override {
    std::string out = "(";
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) out += ",";
      out += factors_[i]->display(component(a, int(i)));
    }
    return out + ")";
  }

  int parse(std::string_view text) const override {
    std::string_view s = trim(text);
    if (s.size() < 2 || s.front() != '(' || s.back() != ')') {
      lit_fail(text, 0, "expected a parenthesized tuple");
    }
    std::string_view body = s.substr(1, s.size() - 2);
    std::vector<std::string_view> parts;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (body[i] == '(') ++depth;
      if (body[i] == ')') --depth;
      if (body[i] == ',' && depth == 0) {
        parts.push_back(body.substr(start, i - start));
        start = i + 1;
      }
    }
    parts.push_back(body.substr(start));
    if (parts.size() != factors_.size()) {
      lit_fail(text, 0,
               "expected " + std::to_string(factors_.size()) + " components");
    }
    std::vector<int> comp(factors_.size());
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      comp[i] = factors_[i]->parse_element(parts[i]);
    }
    return compose(comp);
  }

  int try_inverse(int a) const override {
    std::vector<int> parts(factors_.size());
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      int c = component(a, int(i));
      if (!factors_[i]->is_unit(c)) return -1;
      parts[i] = factors_[i]->inverse(c);
    }
    return compose(parts);
  }

 private:
  std::vector<RingPtr> factors_;
  std::vector<long> strides_;
  int size_;
};

// ---------------------------------------------------------------------------
// Explicit tables from a JSON file
// ---------------------------------------------------------------------------

class TableOps final : public RingOps {
 public:
  TableOps(int size, int zero, int one, std::vector<int32_t> add,
           std::vector<int32_t> mul)
      : size_(size),
        zero_(zero),
        one_(one),
        add_(std::move(add)),
        mul_(std::move(mul)) {
    neg_.assign(size_, -1);
    for (int a = 0; a < size_; ++a) {
      for (int b = 0; b < size_; ++b) {
        if (add_[std::size_t(a) * size_ + b] == zero_) {
          neg_[a] = b;
          break;
        }
      }
      if (neg_[a] < 0) {
        throw BuildError("table ring: element " + std::to_string(a) +
                         " has no additive inverse");
      }
    }
  }

  int size() const override { return size_; }
  int zero() const override { return zero_; }
  int one() const override { return one_; }
  int add(int a, int b) const override {
    return add_[std::size_t(a) * size_ + b];
  }
  int mul(int a, int b) const override {
    return mul_[std::size_t(a) * size_ + b];
  }
  int neg(int a) const override { return neg_[a]; }
  std::string display(int a) const override { return std::to_string(a); }
  int parse(std::string_view text) const override {
    std::string_view s = trim(text);
    if (!digits_only(s)) lit_fail(text, 0, "expected an element index");
    long v = 0;
    for (char c : s) {
      v = v * 10 + (c - '0');
      if (v >= size_ * 10L) break;
    }
    if (v >= size_) lit_fail(text, 0, "element index out of range");
    return int(v);
  }

 private:
  int size_, zero_, one_;
  std::vector<int32_t> add_, mul_, neg_;
};

// ---------------------------------------------------------------------------
// Quotient of a materialized backend by a finitely generated ideal
// ---------------------------------------------------------------------------

class QuotientOps final : public RingOps {
 public:
  QuotientOps(std::shared_ptr<const RingOps> free_ops,
              const std::vector<int>& ideal_gens)
      : free_(std::move(free_ops)) {
    int n = free_->size();
    // The ideal is the additive span of {g * r : g generator, r in ring}.
    std::vector<char> in_span(n, 0);
    std::vector<int> multiples;
    for (int g : ideal_gens) {
      for (int r = 0; r < n; ++r) {
        int v = free_->mul(g, r);
        if (!in_span[v]) {
          in_span[v] = 1;
          multiples.push_back(v);
        }
      }
    }
    std::vector<char> ideal(n, 0);
    ideal[free_->zero()] = 1;
    std::vector<int> queue = {free_->zero()};
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      for (int m : multiples) {
        int t = free_->add(queue[qi], m);
        if (!ideal[t]) {
          ideal[t] = 1;
          queue.push_back(t);
        }
      }
    }
    std::vector<int> ideal_elems;
    for (int i = 0; i < n; ++i)
      if (ideal[i]) ideal_elems.push_back(i);

    rep_of_.assign(n, -1);
    small_of_.assign(n, -1);
    for (int e = 0; e < n; ++e) {
      if (rep_of_[e] >= 0) continue;
      int rep = n;
      std::vector<int> coset;
      for (int i : ideal_elems) {
        int v = free_->add(e, i);
        coset.push_back(v);
        rep = std::min(rep, v);
      }
      for (int v : coset) rep_of_[v] = rep;
    }
    for (int e = 0; e < n; ++e) {
      if (rep_of_[e] == e && small_of_[e] < 0) {
        small_of_[e] = int(elems_.size());
        elems_.push_back(e);
      }
    }
    if (int(elems_.size()) * int(ideal_elems.size()) != n) {
      throw BuildError("quotient construction produced uneven cosets");
    }
  }

  int size() const override { return int(elems_.size()); }
  int zero() const override { return small_of_[rep_of_[free_->zero()]]; }
  int one() const override { return small_of_[rep_of_[free_->one()]]; }
  int add(int a, int b) const override {
    return small_of_[rep_of_[free_->add(elems_[a], elems_[b])]];
  }
  int mul(int a, int b) const override {
    return small_of_[rep_of_[free_->mul(elems_[a], elems_[b])]];
  }
  int neg(int a) const override {
    return small_of_[rep_of_[free_->neg(elems_[a])]];
  }
  std::string display(int a) const override {
    return free_->display(elems_[a]);
  }
  int parse(std::string_view text) const override {
    return small_of_[rep_of_[free_->parse(text)]];
  }

 private:
  std::shared_ptr<const RingOps> free_;
  std::vector<int32_t> rep_of_;
  std::vector<int32_t> small_of_;
  std::vector<int32_t> elems_;
};

// ---------------------------------------------------------------------------
// Build helpers
// ---------------------------------------------------------------------------

long checked_pow_size(long base, long exp, const BuildOptions& opt,
                      const std::string& what) {
  long size = 1;
  for (long i = 0; i < exp; ++i) {
    size *= base;
    if (size > opt.size_cap) {
      throw BuildError(what + ": size exceeds cap of " +
                       std::to_string(opt.size_cap));
    }
  }
  return size;
}

// Display-variable nesting level derived from the spec shape. Level 1 rings
// print in x, level 2 in t; deeper nesting is unreachable through the
// grammar.
int var_level(const RingSpec& spec) {
  switch (spec.kind) {
    case RingSpec::Kind::GF:
      return 1;
    case RingSpec::Kind::PolyQuot:
      return var_level(spec.inner[0]) + 1;
    case RingSpec::Kind::Bivar:
      return 1;
    default:
      return 0;
  }
}

char var_for_level(int level) {
  if (level == 1) return 'x';
  if (level == 2) return 't';
  throw BuildError("polynomial quotients nested deeper than two levels");
}

// --- F_p[x] helpers for the GF modulus (coefficients 0..p-1, low first) ---

// Remainder of monic-leading division f mod g, coefficients mod p.
bool divides_mod_p(std::vector<int> f, const std::vector<int>& g, long p) {
  int dg = int(g.size()) - 1;
  for (int i = int(f.size()) - 1; i >= dg; --i) {
    long c = f[i] % p;
    if (c == 0) continue;
    // g is monic: subtract c * x^{i-dg} * g
    for (int j = 0; j <= dg; ++j) {
      f[i - dg + j] = int(((f[i - dg + j] - c * g[j]) % p + p) % p);
    }
  }
  for (int i = 0; i < dg; ++i)
    if (f[i] % p != 0) return false;
  return true;
}

bool irreducible_mod_p(const std::vector<int>& f, long p) {
  int k = int(f.size()) - 1;
  if (k == 1) return true;
  for (int d = 1; 2 * d <= k; ++d) {
    long count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (long t = 0; t < count; ++t) {
      std::vector<int> g(d + 1, 0);
      long rest = t;
      for (int i = 0; i < d; ++i) {
        g[i] = int(rest % p);
        rest /= p;
      }
      g[d] = 1;
      if (divides_mod_p(f, g, p)) return false;
    }
  }
  return true;
}

// Smallest monic irreducible of degree k over F_p, ordered by the
// coefficient tuple (c_0, c_1, ...) compared low-degree first.
std::vector<int> default_gf_modulus(long p, int k) {
  long count = 1;
  for (int i = 0; i < k; ++i) count *= p;
  for (long t = 0; t < count; ++t) {
    std::vector<int> f(k + 1, 0);
    long div = count / p;
    for (int i = 0; i < k; ++i) {
      f[i] = int((t / div) % p);
      div = div == 1 ? 1 : div / p;
    }
    f[k] = 1;
    if (irreducible_mod_p(f, p)) return f;
  }
  throw BuildError("no irreducible modulus found");  // unreachable
}

std::shared_ptr<const RingOps> make_gf_ops(const RingSpec& spec,
                                           const BuildOptions& opt) {
  if (!is_prime(spec.p)) {
    throw BuildError("GF characteristic " + std::to_string(spec.p) +
                     " is not prime");
  }
  if (spec.k < 1) throw BuildError("GF extension degree must be >= 1");
  long size = checked_pow_size(spec.p, spec.k, opt, "GF:" +
                               std::to_string(spec.p) + "^" +
                               std::to_string(spec.k));
  std::vector<int> mod_coeffs;
  if (!spec.polys.empty()) {
    const SpecPoly& poly = spec.polys[0];
    if (poly.y_degree() > 0) throw BuildError("GF modulus must be univariate");
    mod_coeffs.assign(std::size_t(poly.x_degree()) + 1, 0);
    for (const auto& [key, coef] : poly.terms) {
      mod_coeffs[key.first] = int(((coef % spec.p) + spec.p) % spec.p);
    }
    while (!mod_coeffs.empty() && mod_coeffs.back() == 0) mod_coeffs.pop_back();
    if (int(mod_coeffs.size()) - 1 != spec.k) {
      throw BuildError("GF modulus degree must equal the extension degree");
    }
    long lead = mod_coeffs.back();
    if (lead != 1) {  // scale to monic; every nonzero residue is a unit
      long inv = 1, t = lead;
      for (long e = spec.p - 2; e > 0; e >>= 1, t = t * t % spec.p)
        if (e & 1) inv = inv * t % spec.p;
      for (int& c : mod_coeffs) c = int(c * inv % spec.p);
    }
    if (!irreducible_mod_p(mod_coeffs, spec.p)) {
      throw BuildError("GF modulus " + to_string(spec.polys[0]) +
                       " is reducible over F_" + std::to_string(spec.p));
    }
  } else {
    mod_coeffs = default_gf_modulus(spec.p, spec.k);
  }
  RingSpec base_spec;
  base_spec.kind = RingSpec::Kind::Zmod;
  base_spec.modulus = spec.p;
  RingPtr base = build_ring(base_spec, opt);
  std::vector<int32_t> mod(mod_coeffs.begin(), mod_coeffs.end());
  return std::make_shared<PolyOps>(base, std::move(mod), 'x', int(size));
}

std::shared_ptr<const RingOps> make_polyquot_ops(const RingSpec& spec,
                                                 const BuildOptions& opt) {
  RingPtr base = build_ring(spec.inner[0], opt);
  const SpecPoly& head = spec.polys[0];
  if (head.y_degree() > 0) {
    throw BuildError("PolyQuot generators must be univariate");
  }
  int d = head.x_degree();
  if (d < 1) throw BuildError("PolyQuot modulus must have degree >= 1");
  long size = checked_pow_size(base->size(), d, opt, to_string(spec));
  std::vector<int32_t> mod(std::size_t(d) + 1, base->zero());
  for (const auto& [key, coef] : head.terms) {
    mod[key.first] = base->from_int(coef);
  }
  int lead = mod[d];
  if (!base->is_unit(lead)) {
    throw BuildError("PolyQuot modulus leading coefficient must be a unit");
  }
  if (lead != base->one()) {
    int inv = base->inverse(lead);
    for (auto& c : mod) c = base->mul(c, inv);
  }
  char var = var_for_level(var_level(spec));
  auto poly =
      std::make_shared<PolyOps>(base, std::move(mod), var, int(size));

  // Extra generators cut the free ring by the ideal they span.
  std::vector<int> gens;
  for (std::size_t i = 1; i < spec.polys.size(); ++i) {
    std::vector<int> coeffs(std::size_t(spec.polys[i].x_degree()) + 1,
                            base->zero());
    if (spec.polys[i].y_degree() > 0) {
      throw BuildError("PolyQuot generators must be univariate");
    }
    for (const auto& [key, coef] : spec.polys[i].terms) {
      coeffs[key.first] = base->from_int(coef);
    }
    int g = poly->element_from_coeffs(coeffs);
    if (g != poly->zero()) gens.push_back(g);
  }
  if (gens.empty()) return poly;
  return std::make_shared<QuotientOps>(poly, gens);
}

std::shared_ptr<const RingOps> make_bivar_ops(const RingSpec& spec,
                                              const BuildOptions& opt) {
  if (var_level(spec.inner[0]) != 0) {
    throw BuildError("Bivar over polynomial bases is not supported");
  }
  RingPtr base = build_ring(spec.inner[0], opt);
  int a = 0, b = 0;
  const SpecPoly& g0 = spec.polys[0];
  const SpecPoly& g1 = spec.polys[1];
  bool ok = (g0.is_pure_power_of('x', &a) && g1.is_pure_power_of('y', &b)) ||
            (g1.is_pure_power_of('x', &a) && g0.is_pure_power_of('y', &b));
  if (!ok) {
    throw BuildError(
        "Bivar generators must be pure powers x^a and y^b; the quotient has "
        "no finite monomial basis otherwise");
  }
  long size = checked_pow_size(base->size(), long(a) * b, opt, to_string(spec));
  return std::make_shared<BivarOps>(base, a, b, int(size));
}

std::shared_ptr<const RingOps> make_table_ops(const RingSpec& spec) {
  std::ifstream in(spec.path);
  if (!in) throw BuildError("cannot open table ring file: " + spec.path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw BuildError("table ring file " + spec.path + ": " + e.what());
  }
  auto need = [&](const char* field) -> const nlohmann::json& {
    if (!doc.contains(field)) {
      throw BuildError("table ring file " + spec.path + ": missing field '" +
                       field + "'");
    }
    return doc[field];
  };
  int size = need("size").get<int>();
  if (size < 2) throw BuildError("table ring must have size >= 2");
  int zero = need("zero").get<int>();
  int one = need("one").get<int>();
  auto load_matrix = [&](const char* field) {
    const nlohmann::json& m = need(field);
    if (!m.is_array() || int(m.size()) != size) {
      throw BuildError("table ring file " + spec.path + ": field '" + field +
                       "' must be a " + std::to_string(size) + "x" +
                       std::to_string(size) + " matrix");
    }
    std::vector<int32_t> out;
    out.reserve(std::size_t(size) * size);
    for (const auto& row : m) {
      if (!row.is_array() || int(row.size()) != size) {
        throw BuildError("table ring file " + spec.path + ": ragged '" +
                         std::string(field) + "' matrix");
      }
      for (const auto& cell : row) {
        int v = cell.get<int>();
        if (v < 0 || v >= size) {
          throw BuildError("table ring file " + spec.path +
                           ": entry out of range in '" + field + "'");
        }
        out.push_back(v);
      }
    }
    return out;
  };
  if (zero < 0 || zero >= size || one < 0 || one >= size) {
    throw BuildError("table ring file " + spec.path +
                     ": zero/one out of range");
  }
  return std::make_shared<TableOps>(size, zero, one, load_matrix("add"),
                                    load_matrix("mul"));
}

std::shared_ptr<const RingOps> make_ops(const RingSpec& spec,
                                        const BuildOptions& opt) {
  switch (spec.kind) {
    case RingSpec::Kind::Zmod: {
      if (spec.modulus < 2) throw BuildError("Zmod modulus must be >= 2");
      if (spec.modulus > opt.size_cap) {
        throw BuildError("Zmod:" + std::to_string(spec.modulus) +
                         ": size exceeds cap of " +
                         std::to_string(opt.size_cap));
      }
      return std::make_shared<ZmodOps>(spec.modulus);
    }
    case RingSpec::Kind::GF:
      return make_gf_ops(spec, opt);
    case RingSpec::Kind::PolyQuot:
      return make_polyquot_ops(spec, opt);
    case RingSpec::Kind::Bivar:
      return make_bivar_ops(spec, opt);
    case RingSpec::Kind::Product: {
      std::vector<RingPtr> factors;
      long size = 1;
      for (const RingSpec& inner : spec.inner) {
        factors.push_back(build_ring(inner, opt));
        size *= factors.back()->size();
        if (size > opt.size_cap) {
          throw BuildError(to_string(spec) + ": size exceeds cap of " +
                           std::to_string(opt.size_cap));
        }
      }
      return std::make_shared<ProductOps>(std::move(factors), int(size));
    }
    case RingSpec::Kind::Table:
      return make_table_ops(spec);
  }
  throw BuildError("unhandled ring spec");
}

}  // namespace

// ---------------------------------------------------------------------------
// Ring methods
// ---------------------------------------------------------------------------

Ring::~Ring() = default;

int Ring::ops_add(int a, int b) const { return ops_->add(a, b); }
int Ring::ops_mul(int a, int b) const { return ops_->mul(a, b); }

int Ring::inverse(int a) const {
  int r = inv_[a];
  if (r < 0) {
    throw DomainError(spec_string_ + ": element " + display(a) +
                      " is not a unit");
  }
  return r;
}

int Ring::residue_size() const {
  if (!local_) {
    throw DomainError(spec_string_ +
                      ": residue field size requires a local ring");
  }
  return residue_size_;
}

int Ring::from_int(long v) const {
  unsigned long u = v < 0 ? static_cast<unsigned long>(-(v + 1)) + 1
                          : static_cast<unsigned long>(v);
  int result = zero_;
  int base = one_;
  while (u) {
    if (u & 1) result = add(result, base);
    base = add(base, base);
    u >>= 1;
  }
  return v < 0 ? neg(result) : result;
}

std::string Ring::display(int a) const { return ops_->display(a); }

int Ring::parse_element(std::string_view text) const {
  int v = ops_->parse(trim(text));
  if (v < 0 || v >= size_) {
    throw SpecError("element literal out of range", 0);
  }
  return v;
}

RingPtr build_ring(const RingSpec& spec, const BuildOptions& options) {
  std::shared_ptr<const RingOps> ops = make_ops(spec, options);
  auto ring = std::shared_ptr<Ring>(new Ring());
  int n = ops->size();
  if (n > options.size_cap) {
    throw BuildError(to_string(spec) + ": size exceeds cap of " +
                     std::to_string(options.size_cap));
  }
  ring->size_ = n;
  ring->zero_ = ops->zero();
  ring->one_ = ops->one();
  if (ring->zero_ == ring->one_) {
    throw BuildError(to_string(spec) + ": ring does not distinguish 0 and 1");
  }
  ring->ops_ = ops;
  ring->spec_ = spec;
  ring->spec_string_ = to_string(ring->spec_);

  if (n <= options.table_limit) {
    ring->add_table_.resize(std::size_t(n) * n);
    ring->mul_table_.resize(std::size_t(n) * n);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        ring->add_table_[std::size_t(a) * n + b] = ops->add(a, b);
        ring->mul_table_[std::size_t(a) * n + b] = ops->mul(a, b);
      }
    }
  }
  ring->neg_.resize(n);
  for (int a = 0; a < n; ++a) ring->neg_[a] = ops->neg(a);

  ring->inv_.assign(n, -1);
  std::vector<int> unknown;
  for (int a = 0; a < n; ++a) {
    int r = ops->try_inverse(a);
    if (r == detail::RingOps::kUnknown) unknown.push_back(a);
    else if (r >= 0) ring->inv_[a] = r;
  }
  for (int a : unknown) {
    if (ring->inv_[a] >= 0) continue;
    for (int b = 0; b < n; ++b) {
      if (ring->mul(a, b) == ring->one_) {
        ring->inv_[a] = b;
        ring->inv_[b] = a;
        break;
      }
    }
  }
  for (int a = 0; a < n; ++a) {
    if (ring->inv_[a] >= 0) ring->units_.push_back(a);
    else ring->nonunits_.push_back(a);
  }
  ring->unit_count_ = int(ring->units_.size());

  // Local iff a or 1 - a is a unit for every a.
  ring->local_ = true;
  for (int a = 0; a < n && ring->local_; ++a) {
    if (!ring->is_unit(a) && !ring->is_unit(ring->sub(ring->one_, a))) {
      ring->local_ = false;
    }
  }
  if (ring->local_) {
    int nonunits = n - ring->unit_count_;
    long p1 = 0, p2 = 0, p3 = 0;
    if (nonunits <= 0 || n % nonunits != 0 ||
        !is_prime_power(n, &p1) ||
        !is_prime_power(n / nonunits, &p2) ||
        (nonunits > 1 && !is_prime_power(nonunits, &p3)) ||
        p1 != p2 || (nonunits > 1 && p1 != p3)) {
      throw BuildError(ring->spec_string_ +
                       ": local ring parameters are inconsistent");
    }
    ring->residue_size_ = n / nonunits;
  }

  validate_ring_axioms(*ring);
  return ring;
}

RingPtr build_ring(std::string_view spec_text, const BuildOptions& options) {
  return build_ring(parse_spec(spec_text), options);
}

// ---------------------------------------------------------------------------
// Axiom validation: exhaustive for small rings, seeded sampling above.
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void axiom_fail(const Ring& ring, const std::string& law,
                             std::initializer_list<int> elems) {
  std::string msg = ring.spec_string() + ": " + law + " fails at";
  for (int e : elems) msg += " " + ring.display(e);
  throw BuildError(msg);
}

void check_triple(const Ring& ring, int a, int b, int c) {
  if (ring.add(ring.add(a, b), c) != ring.add(a, ring.add(b, c))) {
    axiom_fail(ring, "additive associativity", {a, b, c});
  }
  if (ring.mul(ring.mul(a, b), c) != ring.mul(a, ring.mul(b, c))) {
    axiom_fail(ring, "multiplicative associativity", {a, b, c});
  }
  if (ring.mul(a, ring.add(b, c)) !=
      ring.add(ring.mul(a, b), ring.mul(a, c))) {
    axiom_fail(ring, "distributivity", {a, b, c});
  }
}

void check_pair(const Ring& ring, int a, int b) {
  if (ring.add(a, b) != ring.add(b, a)) {
    axiom_fail(ring, "additive commutativity", {a, b});
  }
  if (ring.mul(a, b) != ring.mul(b, a)) {
    axiom_fail(ring, "multiplicative commutativity", {a, b});
  }
}

}  // namespace

void validate_ring_axioms(const Ring& ring, int exhaustive_limit,
                          int samples) {
  int n = ring.size();
  for (int a = 0; a < n; ++a) {
    if (ring.add(a, ring.zero()) != a) axiom_fail(ring, "zero identity", {a});
    if (ring.mul(a, ring.one()) != a) axiom_fail(ring, "one identity", {a});
    if (ring.add(a, ring.neg(a)) != ring.zero()) {
      axiom_fail(ring, "additive inverse", {a});
    }
  }
  if (n <= exhaustive_limit) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        check_pair(ring, a, b);
        for (int c = 0; c < n; ++c) check_triple(ring, a, b, c);
      }
    }
  } else {
    std::mt19937 rng(0xCF01u);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int s = 0; s < samples; ++s) {
      int a = pick(rng), b = pick(rng), c = pick(rng);
      check_pair(ring, a, b);
      check_triple(ring, a, b, c);
    }
  }
}

}  // namespace contring
