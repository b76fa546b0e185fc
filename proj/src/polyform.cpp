#include "pencilchar/polyform.hpp"

#include <cctype>
#include <mutex>
#include <sstream>

namespace pc {

// ---------------------------------------------------------------- TernaryForm

TernaryForm::TernaryForm(int degree, Terms terms) : degree_(degree) {
  if (degree < 0) throw MathError("negative degree");
  for (auto &[e, c] : terms) {
    if (c == 0) continue;
    if (e[0] < 0 || e[1] < 0 || e[2] < 0 || e[0] + e[1] + e[2] != degree)
      throw MathError("form is not homogeneous of the stated degree");
    terms_.emplace(e, c);
  }
}

TernaryForm TernaryForm::constant(const Rat &c) { return TernaryForm(0, {{Exponent{0, 0, 0}, c}}); }

TernaryForm TernaryForm::variable(int index) {
  Exponent e{0, 0, 0};
  e[static_cast<std::size_t>(index)] = 1;
  return TernaryForm(1, {{e, Rat(1)}});
}

TernaryForm TernaryForm::linear(const Rat &u, const Rat &v, const Rat &w) {
  return TernaryForm(1, {{Exponent{1, 0, 0}, u}, {Exponent{0, 1, 0}, v}, {Exponent{0, 0, 1}, w}});
}

Rat TernaryForm::coeff(const Exponent &e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rat(0) : it->second;
}

namespace {

template <class T>
T power(const T &base, int e, const T &one) {
  T r = one;
  for (int i = 0; i < e; ++i) r = r * base;
  return r;
}

}  // namespace

Rat TernaryForm::eval(const std::array<Rat, 3> &p) const {
  Rat acc = 0;
  for (const auto &[e, c] : terms_)
    acc += c * power(p[0], e[0], Rat(1)) * power(p[1], e[1], Rat(1)) * power(p[2], e[2], Rat(1));
  return acc;
}

Cyclo TernaryForm::eval(const std::array<Cyclo, 3> &p) const {
  unsigned n = std::max({p[0].order(), p[1].order(), p[2].order()});
  Cyclo acc(n, 0), one(n, 1);
  for (const auto &[e, c] : terms_)
    acc += Cyclo(n, c) * power(p[0], e[0], one) * power(p[1], e[1], one) * power(p[2], e[2], one);
  return acc;
}

TernaryForm TernaryForm::primitive() const {
  if (is_zero()) return *this;
  Int den = 1, g = 0;
  for (const auto &[e, c] : terms_) den = lcm(den, c.get_den());
  for (const auto &[e, c] : terms_) g = gcd(g, Int(c.get_num() * (den / c.get_den())));
  Rat s = make_rat(den, g);
  if (terms_.begin()->second < 0) s = -s;
  return s * (*this);
}

TernaryForm TernaryForm::monic() const {
  if (is_zero()) return *this;
  return Rat(1 / terms_.begin()->second) * (*this);
}

TernaryForm TernaryForm::pow(int e) const {
  TernaryForm r = constant(1);
  for (int i = 0; i < e; ++i) r = r * (*this);
  return r;
}

TernaryForm operator+(const TernaryForm &a, const TernaryForm &b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.degree_ != b.degree_) throw MathError("adding forms of different degrees");
  TernaryForm::Terms t = a.terms_;
  for (const auto &[e, c] : b.terms_) t[e] += c;
  return TernaryForm(a.degree_, std::move(t));
}

TernaryForm operator-(const TernaryForm &a, const TernaryForm &b) { return a + Rat(-1) * b; }

TernaryForm operator*(const TernaryForm &a, const TernaryForm &b) {
  if (a.is_zero() || b.is_zero()) return TernaryForm(a.degree_ + b.degree_, {});
  TernaryForm::Terms t;
  for (const auto &[ea, ca] : a.terms_)
    for (const auto &[eb, cb] : b.terms_) t[Exponent{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}] += ca * cb;
  return TernaryForm(a.degree_ + b.degree_, std::move(t));
}

TernaryForm operator*(const Rat &s, const TernaryForm &a) {
  TernaryForm::Terms t;
  if (s != 0)
    for (const auto &[e, c] : a.terms_) t.emplace(e, s * c);
  return TernaryForm(a.degree_, std::move(t));
}

namespace {

std::string monomial_string(const Exponent &e) {
  static constexpr char names[3] = {'x', 'y', 'z'};
  std::string s;
  for (std::size_t i = 0; i < 3; ++i) {
    if (e[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += names[i];
    if (e[i] > 1) s += "^" + std::to_string(e[i]);
  }
  return s;
}

}  // namespace

std::string TernaryForm::to_string() const {
  if (is_zero()) return "0";
  std::string s;
  for (const auto &[e, c] : terms_) {
    Rat a = abs(c);
    if (s.empty())
      s += c < 0 ? "-" : "";
    else
      s += c < 0 ? " - " : " + ";
    std::string m = monomial_string(e);
    if (m.empty())
      s += pc::to_string(a);
    else if (a == 1)
      s += m;
    else
      s += pc::to_string(a) + "*" + m;
  }
  return s;
}

const std::vector<Exponent> &monomials(int degree) {
  static std::mutex mu;
  static std::map<int, std::vector<Exponent>> cache;
  std::lock_guard lock(mu);
  auto &v = cache[degree];
  if (v.empty())
    for (int a = degree; a >= 0; --a)
      for (int b = degree - a; b >= 0; --b) v.push_back({a, b, degree - a - b});
  return v;
}

std::vector<Rat> coefficient_vector(const TernaryForm &f) {
  const auto &mons = monomials(f.degree());
  std::vector<Rat> v(mons.size());
  for (std::size_t i = 0; i < mons.size(); ++i) v[i] = f.coeff(mons[i]);
  return v;
}

bool proportional(const TernaryForm &a, const TernaryForm &b) {
  if (a.degree() != b.degree() || a.is_zero() || b.is_zero()) return false;
  return a.monic() == b.monic();
}

bool BinaryForm::is_zero() const {
  for (const auto &c : coeffs)
    if (c != 0) return false;
  return true;
}

// ---------------------------------------------------------------- points

namespace {

std::vector<Int> primitive_ints(const std::vector<Rat> &v) {
  Int den = 1, g = 0;
  for (const auto &c : v) den = lcm(den, c.get_den());
  std::vector<Int> out;
  for (const auto &c : v) {
    out.push_back(c.get_num() * (den / c.get_den()));
    g = gcd(g, out.back());
  }
  if (g == 0) throw MathError("zero projective coordinates");
  for (auto &x : out) x /= g;
  for (const auto &x : out) {
    if (x == 0) continue;
    if (x < 0)
      for (auto &y : out) y = -y;
    break;
  }
  return out;
}

}  // namespace

ProjPoint ProjPoint::from(const std::array<Rat, 3> &p) {
  auto v = primitive_ints({p[0], p[1], p[2]});
  return ProjPoint{IntTriple{{v[0], v[1], v[2]}}};
}

std::string ProjPoint::to_string() const {
  return "(" + c.v[0].get_str() + ":" + c.v[1].get_str() + ":" + c.v[2].get_str() + ")";
}

P1Point P1Point::make(const Rat &b0, const Rat &b1) {
  auto v = primitive_ints({b0, b1});
  return {v[0], v[1]};
}

std::string P1Point::to_string() const { return "(" + b0.get_str() + ":" + b1.get_str() + ")"; }

bool operator<(const P1Point &a, const P1Point &b) {
  // Finite values b0/b1 ascending, infinity last.
  if (a.b1 == 0 || b.b1 == 0) return a.b1 != 0 && b.b1 == 0;
  return make_rat(a.b0, a.b1) < make_rat(b.b0, b.b1);
}

ProjLine ProjLine::make(const Rat &u, const Rat &v, const Rat &w) {
  auto c = primitive_ints({u, v, w});
  IntMatrix row(1, 3, {c[0], c[1], c[2]});
  IntMatrix k = integer_kernel_basis(row);
  ProjLine l;
  l.coeffs = IntTriple{{c[0], c[1], c[2]}};
  l.p = IntTriple{{k(0, 0), k(1, 0), k(2, 0)}};
  l.q = IntTriple{{k(0, 1), k(1, 1), k(2, 1)}};
  return l;
}

std::array<Rat, 3> ProjLine::point(const Rat &s, const Rat &t) const {
  return {s * Rat(p.v[0]) + t * Rat(q.v[0]), s * Rat(p.v[1]) + t * Rat(q.v[1]), s * Rat(p.v[2]) + t * Rat(q.v[2])};
}

BinaryForm restrict_to_line(const TernaryForm &f, const ProjLine &l) {
  if (f.is_zero()) throw MathError("restriction of the zero form");
  const int d = f.degree();
  // powers[i][e] = (p_i s + q_i t)^e as coefficients of s^k t^(e-k).
  std::array<std::vector<std::vector<Rat>>, 3> powers;
  for (std::size_t i = 0; i < 3; ++i) {
    powers[i].push_back({Rat(1)});
    for (int e = 1; e <= d; ++e) {
      const auto &prev = powers[i].back();
      std::vector<Rat> next(prev.size() + 1);
      for (std::size_t k = 0; k < prev.size(); ++k) {
        next[k] += prev[k] * Rat(l.q.v[i]);
        next[k + 1] += prev[k] * Rat(l.p.v[i]);
      }
      powers[i].push_back(std::move(next));
    }
  }
  BinaryForm out{d, std::vector<Rat>(static_cast<std::size_t>(d) + 1)};
  for (const auto &[e, c] : f.terms()) {
    std::vector<Rat> acc{c};
    for (std::size_t i = 0; i < 3; ++i) {
      const auto &pw = powers[i][static_cast<std::size_t>(e[i])];
      std::vector<Rat> next(acc.size() + pw.size() - 1);
      for (std::size_t a = 0; a < acc.size(); ++a)
        for (std::size_t b = 0; b < pw.size(); ++b) next[a + b] += acc[a] * pw[b];
      acc = std::move(next);
    }
    for (std::size_t k = 0; k < acc.size(); ++k) out.coeffs[k] += acc[k];
  }
  return out;
}

// ---------------------------------------------------------------- division

namespace {

bool divides_monomial(const Exponent &a, const Exponent &b) { return a[0] <= b[0] && a[1] <= b[1] && a[2] <= b[2]; }

// Triangular coefficient matching against the lex-leading term of g: returns
// the quotient and the part of f that no multiple of g can reach.
std::pair<TernaryForm::Terms, TernaryForm::Terms> reduce_by(const TernaryForm &f, const TernaryForm &g) {
  const auto &[lm, lc] = *g.terms().begin();
  TernaryForm::Terms p = f.terms(), q, r;
  while (!p.empty()) {
    auto [e, c] = *p.begin();
    if (!divides_monomial(lm, e)) {
      r.emplace(e, c);
      p.erase(p.begin());
      continue;
    }
    Exponent m{e[0] - lm[0], e[1] - lm[1], e[2] - lm[2]};
    Rat k = c / lc;
    q[m] += k;
    for (const auto &[ge, gc] : g.terms()) {
      Exponent t{ge[0] + m[0], ge[1] + m[1], ge[2] + m[2]};
      Rat &slot = p[t];
      slot -= k * gc;
      if (slot == 0) p.erase(t);
    }
  }
  return {std::move(q), std::move(r)};
}

}  // namespace

std::optional<TernaryForm> exact_divide(const TernaryForm &f, const TernaryForm &g) {
  if (g.is_zero()) throw MathError("division by the zero form");
  if (g.degree() > f.degree()) {
    if (f.is_zero()) return TernaryForm();
    return std::nullopt;
  }
  auto [q, r] = reduce_by(f, g);
  if (!r.empty()) return std::nullopt;
  return TernaryForm(f.degree() - g.degree(), std::move(q));
}

int divisibility_multiplicity(const TernaryForm &f, const TernaryForm &g) {
  if (g.degree() < 1) throw MathError("multiplicity with respect to a constant");
  if (f.is_zero()) throw MathError("multiplicity in the zero form");
  int e = 0;
  TernaryForm h = f;
  while (h.degree() >= g.degree()) {
    auto q = exact_divide(h, g);
    if (!q) break;
    h = std::move(*q);
    ++e;
  }
  return e;
}

TernaryForm fiber_form(const TernaryForm &P, const TernaryForm &Q, const P1Point &b) {
  return Rat(b.b1) * P - Rat(b.b0) * Q;
}

std::optional<PencilMembership> member_of_pencil_dividing(const TernaryForm &fj, const TernaryForm &P,
                                                          const TernaryForm &Q) {
  if (fj.degree() < 1) throw MathError("component must be nonconstant");
  if (P.degree() != Q.degree() || proportional(P, Q) || P.is_zero() || Q.is_zero())
    throw MathError("degenerate pencil");
  if (fj.degree() > P.degree()) return std::nullopt;
  // The unreachable part is linear in the dividend, so fj | b1 P - b0 Q
  // exactly when b1 rP = b0 rQ.
  auto rP = reduce_by(P, fj).second;
  auto rQ = reduce_by(Q, fj).second;
  std::optional<P1Point> b;
  if (rP.empty() && rQ.empty()) throw MathError("degenerate pencil: P and Q share a factor");
  if (rP.empty()) {
    b = P1Point{0, 1};
  } else if (rQ.empty()) {
    b = P1Point{1, 0};
  } else {
    if (rP.size() != rQ.size()) return std::nullopt;
    const Rat lambda = rP.begin()->second / rQ.begin()->second;
    for (auto ip = rP.begin(), iq = rQ.begin(); ip != rP.end(); ++ip, ++iq)
      if (ip->first != iq->first || ip->second != lambda * iq->second) return std::nullopt;
    b = P1Point::make(lambda, 1);
  }
  int e = divisibility_multiplicity(fiber_form(P, Q, *b), fj);
  return PencilMembership{*b, e};
}

// ---------------------------------------------------------------- cyclotomic lines

namespace {

std::array<Cyclo, 3> normalized(std::array<Cyclo, 3> c) {
  for (std::size_t i = 0; i < 3; ++i) {
    if (c[i].is_zero()) continue;
    Cyclo inv = c[i].inverse();
    for (auto &x : c) x = x * inv;
    return c;
  }
  throw MathError("zero line or point");
}

}  // namespace

CycloLine CycloLine::make(std::array<Cyclo, 3> coeffs) { return CycloLine{normalized(std::move(coeffs))}; }

CycloLine CycloLine::from(const TernaryForm &f) {
  if (f.degree() != 1) throw MathError("not a linear form");
  return make({Cyclo(1, f.coeff({1, 0, 0})), Cyclo(1, f.coeff({0, 1, 0})), Cyclo(1, f.coeff({0, 0, 1}))});
}

CycloLine CycloLine::galois(unsigned a) const { return make({c[0].galois(a), c[1].galois(a), c[2].galois(a)}); }

bool CycloLine::is_rational() const { return c[0].is_rational() && c[1].is_rational() && c[2].is_rational(); }

std::optional<TernaryForm> CycloLine::rational_form() const {
  if (!is_rational()) return std::nullopt;
  return TernaryForm::linear(c[0].rational_part(), c[1].rational_part(), c[2].rational_part()).primitive();
}

std::string CycloLine::to_string() const {
  static constexpr const char *names[3] = {"x", "y", "z"};
  std::string s;
  for (std::size_t i = 0; i < 3; ++i) {
    if (c[i].is_zero()) continue;
    std::string v = c[i].to_string();
    bool compound = v.find_first_of("+-", 1) != std::string::npos;
    std::string term;
    if (v == "1")
      term = names[i];
    else if (v == "-1")
      term = std::string("-") + names[i];
    else
      term = (compound ? "(" + v + ")" : v) + "*" + names[i];
    if (!s.empty()) s += term[0] == '-' ? " - " + term.substr(1) : " + " + term;
    else s = term;
  }
  return s;
}

bool operator==(const CycloLine &a, const CycloLine &b) {
  return a.c[0] == b.c[0] && a.c[1] == b.c[1] && a.c[2] == b.c[2];
}

CycloPoint intersect(const CycloLine &a, const CycloLine &b) {
  CycloPoint p{a.c[1] * b.c[2] - a.c[2] * b.c[1], a.c[2] * b.c[0] - a.c[0] * b.c[2],
               a.c[0] * b.c[1] - a.c[1] * b.c[0]};
  return normalized(p);
}

bool incident(const CycloLine &l, const CycloPoint &p) {
  return (l.c[0] * p[0] + l.c[1] * p[1] + l.c[2] * p[2]).is_zero();
}

bool same_point(const CycloPoint &a, const CycloPoint &b) {
  return (a[1] * b[2] - a[2] * b[1]).is_zero() && (a[2] * b[0] - a[0] * b[2]).is_zero() &&
         (a[0] * b[1] - a[1] * b[0]).is_zero();
}

std::string point_string(const CycloPoint &p0) {
  CycloPoint p = normalized(p0);
  bool rational = p[0].is_rational() && p[1].is_rational() && p[2].is_rational();
  if (rational) return ProjPoint::from({p[0].rational_part(), p[1].rational_part(), p[2].rational_part()}).to_string();
  return "(" + p[0].to_string() + " : " + p[1].to_string() + " : " + p[2].to_string() + ")";
}

std::optional<TernaryForm> rational_product(const std::vector<std::pair<CycloLine, int>> &factors) {
  using CTerms = std::map<Exponent, Cyclo, LexDescending>;
  CTerms acc{{Exponent{0, 0, 0}, Cyclo(1, 1)}};
  int deg = 0;
  for (const auto &[line, mult] : factors)
    for (int k = 0; k < mult; ++k) {
      CTerms next;
      for (const auto &[e, c] : acc)
        for (std::size_t i = 0; i < 3; ++i) {
          if (line.c[i].is_zero()) continue;
          Exponent f = e;
          ++f[i];
          auto it = next.find(f);
          if (it == next.end())
            next.emplace(f, c * line.c[i]);
          else
            it->second += c * line.c[i];
        }
      acc = std::move(next);
      ++deg;
    }
  TernaryForm::Terms t;
  for (const auto &[e, c] : acc) {
    if (!c.is_rational()) return std::nullopt;
    t.emplace(e, c.rational_part());
  }
  return TernaryForm(deg, std::move(t)).primitive();
}

// ---------------------------------------------------------------- parser

namespace {

class Parser {
public:
  Parser(std::string_view s, unsigned order) : s_(s), order_(order) {}

  // Terms with coefficients in Q(zeta); exponent of w folded into the coefficient.
  std::map<Exponent, Cyclo, LexDescending> parse() {
    std::map<Exponent, Cyclo, LexDescending> terms;
    skip();
    if (at_end()) throw ParseError("empty polynomial");
    bool first = true;
    while (!at_end()) {
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = get() == '-' ? -1 : 1;
        skip();
      } else if (!first) {
        throw ParseError(error("expected '+' or '-'"));
      }
      auto [e, c] = term();
      if (sign < 0) c = -c;
      auto it = terms.find(e);
      if (it == terms.end())
        terms.emplace(e, c);
      else
        it->second += c;
      first = false;
      skip();
    }
    return terms;
  }

private:
  std::string_view s_;
  std::size_t i_ = 0;
  unsigned order_;

  bool at_end() const { return i_ >= s_.size(); }
  char peek() const { return s_[i_]; }
  char get() { return s_[i_++]; }
  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++i_;
  }
  std::string error(const std::string &what) const {
    return what + " at position " + std::to_string(i_) + " in '" + std::string(s_) + "'";
  }

  Int integer() {
    std::size_t start = i_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++i_;
    if (start == i_) throw ParseError(error("expected digits"));
    return Int(std::string(s_.substr(start, i_ - start)));
  }

  std::pair<Exponent, Cyclo> term() {
    Exponent e{0, 0, 0};
    Rat coef = 1;
    long wpow = 0;
    bool any = false;
    for (;;) {
      skip();
      if (at_end()) break;
      char ch = peek();
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        Int num = integer();
        Int den = 1;
        skip();
        if (!at_end() && peek() == '/') {
          get();
          skip();
          den = integer();
          if (den == 0) throw ParseError(error("zero denominator"));
        }
        coef *= make_rat(num, den);
      } else if (ch == 'x' || ch == 'y' || ch == 'z' || ch == 'w') {
        get();
        skip();
        long p = 1;
        if (!at_end() && peek() == '^') {
          get();
          skip();
          p = integer().get_si();
        }
        if (ch == 'w') {
          if (order_ < 2) throw ParseError(error("symbol w requires a root-of-unity order"));
          wpow += p;
        } else {
          e[static_cast<std::size_t>(ch - 'x')] += static_cast<int>(p);
        }
      } else {
        break;
      }
      any = true;
      skip();
      if (!at_end() && peek() == '*') {
        get();
        continue;
      }
      if (at_end() || peek() == '+' || peek() == '-') break;
    }
    if (!any) throw ParseError(error("expected a term"));
    return {e, Cyclo::zeta_power(std::max(order_, 1u), wpow, coef)};
  }
};

}  // namespace

ParsedForm parse_form(std::string_view text, unsigned root_order) {
  auto terms = Parser(text, root_order).parse();
  int degree = -1;
  bool rational = true;
  for (auto it = terms.begin(); it != terms.end();) {
    if (it->second.is_zero()) {
      it = terms.erase(it);
      continue;
    }
    int d = it->first[0] + it->first[1] + it->first[2];
    if (degree >= 0 && d != degree) throw ParseError("polynomial is not homogeneous: '" + std::string(text) + "'");
    degree = d;
    rational = rational && it->second.is_rational();
    ++it;
  }
  if (terms.empty()) throw ParseError("polynomial is zero: '" + std::string(text) + "'");
  ParsedForm out;
  if (rational) {
    TernaryForm::Terms t;
    for (const auto &[e, c] : terms) t.emplace(e, c.rational_part());
    out.form = TernaryForm(degree, std::move(t));
  }
  if (degree == 1) {
    std::array<Cyclo, 3> c{Cyclo(root_order, 0), Cyclo(root_order, 0), Cyclo(root_order, 0)};
    for (const auto &[e, v] : terms) c[e[0] ? 0 : e[1] ? 1 : 2] = v;
    out.line = CycloLine::make(c);
  } else if (!rational) {
    throw ParseError("root-of-unity coefficients are only supported in linear forms: '" + std::string(text) + "'");
  }
  return out;
}

TernaryForm parse_rational_form(std::string_view text) {
  auto p = parse_form(text, 1);
  return *p.form;
}

}  // namespace pc
