#include "qtj/poly.hpp"

#include <algorithm>
#include <stdexcept>

#include "text_detail.hpp"

namespace qtj {

Poly::Poly(FieldPtr field, std::vector<Fq> coeffs) : field_(std::move(field)), c_(std::move(coeffs)) { trim(); }

Poly Poly::constant(FieldPtr field, Fq c) { return Poly(std::move(field), std::vector<Fq>{c}); }

Poly Poly::monomial(FieldPtr field, Fq c, int degree) {
  if (degree < 0) throw std::invalid_argument("monomial degree must be nonnegative");
  std::vector<Fq> v(degree + 1, Field::zero());
  v[degree] = c;
  return Poly(std::move(field), std::move(v));
}

Poly Poly::from_ints(FieldPtr field, const std::vector<long long>& coeffs) {
  std::vector<Fq> v;
  v.reserve(coeffs.size());
  for (long long c : coeffs) v.push_back(field->from_int(c));
  return Poly(std::move(field), std::move(v));
}

void Poly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

bool Poly::is_t_power() const {
  if (!is_monic()) return false;
  return std::all_of(c_.begin(), c_.end() - 1, [](Fq x) { return x.is_zero(); });
}

Poly Poly::monic() const {
  if (is_zero()) throw std::domain_error("monic normalization of the zero polynomial");
  return scaled(F().inv(leading()));
}

Poly Poly::scaled(Fq c) const {
  std::vector<Fq> v(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) v[i] = F().mul(c, c_[i]);
  return Poly(field_, std::move(v));
}

Poly Poly::shifted(int k) const {
  if (k < 0) throw std::invalid_argument("negative shift of a polynomial");
  if (is_zero()) return *this;
  std::vector<Fq> v(c_.size() + k, Field::zero());
  std::copy(c_.begin(), c_.end(), v.begin() + k);
  return Poly(field_, std::move(v));
}

Poly Poly::pow(unsigned e) const {
  Poly acc = constant(field_, Field::one());
  Poly base = *this;
  while (e > 0) {
    if (e & 1u) acc = acc * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return acc;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Field::zero());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = F().add(c_[i], o.c_[i]);
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Field::zero());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = F().sub(c_[i], o.c_[i]);
  trim();
  return *this;
}

Poly operator-(const Poly& a) {
  std::vector<Fq> v(a.c_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.F().neg(a.c_[i]);
  return Poly(a.field_, std::move(v));
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly(a.field_);
  const Field& F = a.F();
  std::vector<Fq> v(a.c_.size() + b.c_.size() - 1, Field::zero());
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] = F.add(v[i + j], F.mul(a.c_[i], b.c_[j]));
  }
  return Poly(a.field_, std::move(v));
}

std::strong_ordering operator<=>(const Poly& a, const Poly& b) {
  if (auto c = a.degree() <=> b.degree(); c != 0) return c;
  for (int i = a.degree(); i >= 0; --i) {
    if (auto c = a.c_[i] <=> b.c_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("division by the zero polynomial");
  const Field& F = a.F();
  std::vector<Fq> rem = a.coeffs();
  const int db = b.degree();
  const Fq inv_lead = F.inv(b.leading());
  std::vector<Fq> quo(std::max(0, a.degree() - db + 1), Field::zero());
  for (int i = a.degree(); i >= db; --i) {
    const Fq c = F.mul(rem[i], inv_lead);
    if (c.is_zero()) continue;
    quo[i - db] = c;
    for (int j = 0; j <= db; ++j) rem[i - db + j] = F.sub(rem[i - db + j], F.mul(c, b.coeff(j)));
  }
  return {Poly(a.field(), std::move(quo)), Poly(a.field(), std::move(rem))};
}

Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.is_zero() ? a : a.monic();
}

std::string to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (int i = p.degree(); i >= 0; --i) {
    if (p.coeff(i).is_zero()) continue;
    out += detail::format_term(p.F(), p.coeff(i), i, out.empty());
  }
  return out;
}

}  // namespace qtj
