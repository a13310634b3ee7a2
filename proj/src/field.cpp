#include "qtj/field.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>

#include "qtj/errors.hpp"

namespace qtj {

namespace {

using Digits = std::vector<int>;

void trim(Digits& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo the monic polynomial m over F_p.
Digits mod_poly(Digits a, const Digits& m, int p) {
  trim(a);
  const int dm = int(m.size()) - 1;
  while (int(a.size()) - 1 >= dm) {
    const int shift = int(a.size()) - 1 - dm;
    const int lead = a.back();
    for (int i = 0; i <= dm; ++i) {
      a[shift + i] = ((a[shift + i] - lead * m[i]) % p + p) % p;
    }
    trim(a);
  }
  return a;
}

}  // namespace

bool is_prime(int n) {
  if (n < 2) return false;
  for (int k = 2; k * k <= n; ++k) {
    if (n % k == 0) return false;
  }
  return true;
}

bool is_irreducible_mod_p(int p, std::span<const int> monic_ascending) {
  Digits m(monic_ascending.begin(), monic_ascending.end());
  for (auto& c : m) c = ((c % p) + p) % p;
  trim(m);
  const int r = int(m.size()) - 1;
  if (r < 1 || m.back() != 1) return false;
  // Enumerate monic divisors of degree 1..r/2.
  for (int k = 1; 2 * k <= r; ++k) {
    long long count = 1;
    for (int i = 0; i < k; ++i) count *= p;
    for (long long code = 0; code < count; ++code) {
      Digits g(k + 1, 0);
      long long c = code;
      for (int i = 0; i < k; ++i) {
        g[i] = int(c % p);
        c /= p;
      }
      g[k] = 1;
      if (mod_poly(m, g, p).empty()) return false;
    }
  }
  return true;
}

std::optional<std::vector<int>> default_modulus(int p, int r) {
  static const std::map<std::pair<int, int>, std::vector<int>> table = {
      {{2, 2}, {1, 1, 1}},        // X^2+X+1
      {{2, 3}, {1, 1, 0, 1}},     // X^3+X+1
      {{2, 4}, {1, 1, 0, 0, 1}},  // X^4+X+1
      {{2, 5}, {1, 0, 1, 0, 0, 1}},
      {{3, 2}, {1, 0, 1}},        // X^2+1
      {{3, 3}, {1, 2, 0, 1}},     // X^3+2X+1
      {{5, 2}, {2, 0, 1}},        // X^2+2
      {{7, 2}, {1, 0, 1}},        // X^2+1
  };
  if (r == 1) return std::vector<int>{0, 1};
  if (auto it = table.find({p, r}); it != table.end()) return it->second;
  return std::nullopt;
}

std::shared_ptr<const Field> Field::make(FieldSpec spec) {
  if (!is_prime(spec.p)) throw ConfigError("field characteristic p=" + std::to_string(spec.p) + " is not prime");
  if (spec.r < 1) throw ConfigError("field degree r must be positive");
  long long q = 1;
  for (int i = 0; i < spec.r; ++i) {
    q *= spec.p;
    if (q > 256) throw ConfigError("q = p^r must not exceed 256");
  }
  if (spec.modulus.empty()) {
    auto m = default_modulus(spec.p, spec.r);
    if (!m) {
      throw ConfigError("no built-in modulus for p=" + std::to_string(spec.p) + ", r=" + std::to_string(spec.r) +
                        "; supply one");
    }
    spec.modulus = *m;
  }
  for (auto& c : spec.modulus) c = ((c % spec.p) + spec.p) % spec.p;
  if (int(spec.modulus.size()) != spec.r + 1 || spec.modulus.back() != 1) {
    throw ConfigError("modulus must be monic of degree r");
  }
  if (spec.r > 1 && !is_irreducible_mod_p(spec.p, spec.modulus)) {
    throw ConfigError("modulus is reducible over F_p");
  }
  return std::shared_ptr<const Field>(new Field(std::move(spec)));
}

Field::Field(FieldSpec spec) : spec_(std::move(spec)) {
  const int p = spec_.p;
  const int r = spec_.r;
  q_ = 1;
  for (int i = 0; i < r; ++i) q_ *= p;

  auto to_digits = [&](int code) {
    Digits d(r, 0);
    for (int i = 0; i < r; ++i) {
      d[i] = code % p;
      code /= p;
    }
    return d;
  };
  auto to_code = [&](const Digits& d) {
    int code = 0;
    for (int i = int(d.size()) - 1; i >= 0; --i) code = code * p + d[i];
    return code;
  };

  const std::size_t qq = std::size_t(q_) * q_;
  add_.resize(qq);
  mul_.resize(qq);
  neg_.resize(q_);
  inv_.assign(q_, 0);
  frob_.resize(q_);
  frob_inv_.resize(q_);

  for (int x = 0; x < q_; ++x) {
    const Digits dx = to_digits(x);
    Digits nx(r);
    for (int i = 0; i < r; ++i) nx[i] = (p - dx[i]) % p;
    neg_[x] = std::uint8_t(to_code(nx));
    for (int y = 0; y < q_; ++y) {
      const Digits dy = to_digits(y);
      Digits s(r);
      for (int i = 0; i < r; ++i) s[i] = (dx[i] + dy[i]) % p;
      add_[std::size_t(x) * q_ + y] = std::uint8_t(to_code(s));
      Digits prod(2 * r - 1, 0);
      for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) prod[i + j] = (prod[i + j] + dx[i] * dy[j]) % p;
      }
      Digits red = mod_poly(prod, spec_.modulus, p);
      red.resize(r, 0);
      mul_[std::size_t(x) * q_ + y] = std::uint8_t(to_code(red));
    }
  }
  for (int x = 1; x < q_; ++x) {
    for (int y = 1; y < q_; ++y) {
      if (mul_[std::size_t(x) * q_ + y] == 1) {
        inv_[x] = std::uint8_t(y);
        break;
      }
    }
  }
  for (int x = 0; x < q_; ++x) {
    frob_[x] = pow(Fq{std::uint8_t(x)}, p).v;
  }
  for (int x = 0; x < q_; ++x) frob_inv_[frob_[x]] = std::uint8_t(x);
}

Fq Field::from_int(long long n) const {
  long long m = n % spec_.p;
  if (m < 0) m += spec_.p;
  return Fq{std::uint8_t(m)};
}

Fq Field::from_digits(std::span<const int> digits) const {
  if (int(digits.size()) > spec_.r) throw ConfigError("field element has more than r coefficients");
  int code = 0;
  for (int i = int(digits.size()) - 1; i >= 0; --i) {
    int c = ((digits[i] % spec_.p) + spec_.p) % spec_.p;
    code = code * spec_.p + c;
  }
  return Fq{std::uint8_t(code)};
}

std::vector<int> Field::digits(Fq x) const {
  std::vector<int> d(spec_.r, 0);
  int code = x.v;
  for (int i = 0; i < spec_.r; ++i) {
    d[i] = code % spec_.p;
    code /= spec_.p;
  }
  return d;
}

std::vector<Fq> Field::elements() const {
  std::vector<Fq> out(q_);
  for (int i = 0; i < q_; ++i) out[i] = Fq{std::uint8_t(i)};
  return out;
}

std::vector<Fq> Field::units() const {
  std::vector<Fq> out;
  for (int i = 1; i < q_; ++i) out.push_back(Fq{std::uint8_t(i)});
  return out;
}

Fq Field::inv(Fq x) const {
  if (x.is_zero()) throw std::domain_error("inverse of zero in F_q");
  return Fq{inv_[x.v]};
}

Fq Field::pow(Fq x, long long e) const {
  if (e < 0) {
    x = inv(x);
    e = -e;
  }
  Fq acc = one();
  while (e > 0) {
    if (e & 1) acc = mul(acc, x);
    x = mul(x, x);
    e >>= 1;
  }
  return acc;
}

std::optional<Fq> Field::sqrt(Fq x) const {
  for (int y = 0; y < q_; ++y) {
    Fq fy{std::uint8_t(y)};
    if (mul(fy, fy) == x) return fy;
  }
  return std::nullopt;
}

std::string Field::to_string(Fq x) const {
  if (spec_.r == 1) return std::to_string(int(x.v));
  const auto d = digits(x);
  std::string out;
  for (int i = spec_.r - 1; i >= 0; --i) {
    if (d[i] == 0) continue;
    if (!out.empty()) out += "+";
    if (i == 0) {
      out += std::to_string(d[i]);
    } else {
      if (d[i] != 1) out += std::to_string(d[i]) + "*";
      out += (i == 1) ? "w" : "w^" + std::to_string(i);
    }
  }
  if (out.empty()) return "0";
  if (std::all_of(d.begin() + 1, d.end(), [](int c) { return c == 0; })) return out;
  return "(" + out + ")";
}

}  // namespace qtj
