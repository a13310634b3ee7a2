#include "qtj/laurent.hpp"

#include <algorithm>
#include <stdexcept>

#include "qtj/errors.hpp"
#include "text_detail.hpp"

namespace qtj {

// ---------------------------------------------------------------- AbsValue

std::optional<bool> AbsValue::less_than_power(long long e) const {
  switch (kind_) {
    case Kind::Zero:
      return true;
    case Kind::Power:
      return e_ < e;
    case Kind::Below:
      if (e_ <= e) return true;
      return std::nullopt;
  }
  return std::nullopt;
}

AbsValue operator*(const AbsValue& a, const AbsValue& b) {
  if (a.is_zero() || b.is_zero()) return AbsValue::zero();
  if (a.is_power() && b.is_power()) return AbsValue::power(a.e_ + b.e_);
  if (a.is_below() && b.is_below()) return AbsValue::below(a.e_ + b.e_ - 1);
  return AbsValue::below(a.e_ + b.e_);
}

std::partial_ordering operator<=>(const AbsValue& a, const AbsValue& b) {
  using K = AbsValue::Kind;
  if (a.kind_ == K::Zero && b.kind_ == K::Zero) return std::partial_ordering::equivalent;
  if (a.kind_ == K::Zero) return b.kind_ == K::Power ? std::partial_ordering::less : std::partial_ordering::unordered;
  if (b.kind_ == K::Zero) return a.kind_ == K::Power ? std::partial_ordering::greater : std::partial_ordering::unordered;
  if (a.kind_ == K::Power && b.kind_ == K::Power) return a.e_ <=> b.e_;
  if (a.kind_ == K::Below && b.kind_ == K::Power) {
    return a.e_ <= b.e_ ? std::partial_ordering::less : std::partial_ordering::unordered;
  }
  if (a.kind_ == K::Power && b.kind_ == K::Below) {
    return b.e_ <= a.e_ ? std::partial_ordering::greater : std::partial_ordering::unordered;
  }
  return std::partial_ordering::unordered;
}

std::string AbsValue::to_string() const {
  switch (kind_) {
    case Kind::Zero:
      return "0";
    case Kind::Power:
      return "q^" + std::to_string(e_);
    case Kind::Below:
      return "<q^" + std::to_string(e_);
  }
  return "?";
}

// ---------------------------------------------------------------- kernels

namespace {

// Sum of products x[i] * y[i] for i in [0, n), in the arithmetic of F.
// The three branches cover prime fields (integer accumulation), characteristic
// 2 (addition is xor of encodings) and the general table walk.
class DotKernel {
 public:
  explicit DotKernel(const Field& F) : F_(F) {
    if (F.r() == 1) {
      mode_ = Mode::Prime;
    } else if (F.p() == 2) {
      mode_ = Mode::Xor;
    } else {
      mode_ = Mode::Table;
    }
  }

  // Sum over k of a[k] * b[-k]: a walks forward, b walks backward.
  Fq convolve(const Fq* a, const Fq* b, long long n) const {
    switch (mode_) {
      case Mode::Prime: {
        unsigned long long acc = 0;
        for (long long k = 0; k < n; ++k) acc += (unsigned long long)a[k].v * b[-k].v;
        return Fq{std::uint8_t(acc % (unsigned long long)F_.p())};
      }
      case Mode::Xor: {
        std::uint8_t acc = 0;
        for (long long k = 0; k < n; ++k) {
          if (a[k].v) acc ^= F_.mul_row(a[k])[b[-k].v];
        }
        return Fq{acc};
      }
      case Mode::Table: {
        Fq acc{};
        for (long long k = 0; k < n; ++k) {
          if (a[k].v) acc = F_.add(acc, F_.mul(a[k], b[-k]));
        }
        return acc;
      }
    }
    return Fq{};
  }

 private:
  enum class Mode { Prime, Xor, Table };
  const Field& F_;
  Mode mode_ = Mode::Table;
};

}  // namespace

// ---------------------------------------------------------------- Laurent

Laurent::Laurent(FieldPtr field, long long prec) : field_(std::move(field)), floor_(-prec) {}

Laurent::Laurent(FieldPtr field, long long floor, std::vector<Fq> c)
    : field_(std::move(field)), floor_(floor), c_(std::move(c)) {
  trim();
}

void Laurent::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Laurent Laurent::from_poly(const Poly& p, long long prec) {
  const long long floor = -prec;
  if (p.is_zero() || p.degree() < floor) return Laurent(p.field(), prec);
  std::vector<Fq> c(std::size_t(p.degree() - floor + 1), Field::zero());
  for (long long e = std::max(0LL, floor); e <= p.degree(); ++e) c[std::size_t(e - floor)] = p.coeff(int(e));
  return Laurent(p.field(), floor, std::move(c));
}

Laurent Laurent::monomial(FieldPtr field, Fq c, long long exponent, long long prec) {
  const long long floor = -prec;
  if (c.is_zero() || exponent < floor) return Laurent(std::move(field), prec);
  std::vector<Fq> v(std::size_t(exponent - floor + 1), Field::zero());
  v.back() = c;
  return Laurent(std::move(field), floor, std::move(v));
}

Laurent Laurent::from_descending(FieldPtr field, long long top, const std::vector<Fq>& coeffs, long long prec) {
  const long long floor = -prec;
  if (top < floor) return Laurent(std::move(field), prec);
  std::vector<Fq> v(std::size_t(top - floor + 1), Field::zero());
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const long long e = top - (long long)k;
    if (e < floor) break;
    v[std::size_t(e - floor)] = coeffs[k];
  }
  return Laurent(std::move(field), floor, std::move(v));
}

std::optional<long long> Laurent::top_degree() const {
  if (c_.empty()) return std::nullopt;
  return floor_ + (long long)c_.size() - 1;
}

AbsValue Laurent::abs() const {
  if (c_.empty()) return AbsValue::below(floor_);
  return AbsValue::power(*top_degree());
}

Fq Laurent::leading() const {
  if (c_.empty()) throw PrecisionError("leading coefficient of a series that vanishes at retained precision");
  return c_.back();
}

Fq Laurent::coeff(long long e) const {
  if (e < floor_) {
    throw PrecisionError("coefficient of T^" + std::to_string(e) + " is below the precision floor T^" +
                         std::to_string(floor_));
  }
  const long long i = e - floor_;
  return i < (long long)c_.size() ? c_[std::size_t(i)] : Field::zero();
}

Laurent Laurent::with_prec(long long p) const {
  const long long new_floor = -p;
  if (new_floor <= floor_) return *this;
  const long long drop = new_floor - floor_;
  if (drop >= (long long)c_.size()) return Laurent(field_, p);
  return Laurent(field_, new_floor, std::vector<Fq>(c_.begin() + drop, c_.end()));
}

Laurent Laurent::shifted(long long k) const { return Laurent(field_, floor_ + k, c_); }

Laurent Laurent::scaled(Fq c) const {
  std::vector<Fq> v(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) v[i] = F().mul(c, c_[i]);
  return Laurent(field_, floor_, std::move(v));
}

Laurent& Laurent::operator+=(const Laurent& o) {
  const long long floor = std::max(floor_, o.floor_);
  const long long top = std::max(magnitude_bound(), o.magnitude_bound());
  if (top < floor) {
    floor_ = floor;
    c_.clear();
    return *this;
  }
  std::vector<Fq> v(std::size_t(top - floor + 1), Field::zero());
  for (long long e = floor; e <= top; ++e) {
    const long long i = e - floor_;
    const long long j = e - o.floor_;
    const Fq a = i < (long long)c_.size() ? c_[std::size_t(i)] : Field::zero();
    const Fq b = j < (long long)o.c_.size() ? o.c_[std::size_t(j)] : Field::zero();
    v[std::size_t(e - floor)] = F().add(a, b);
  }
  floor_ = floor;
  c_ = std::move(v);
  trim();
  return *this;
}

Laurent& Laurent::operator-=(const Laurent& o) { return *this += -o; }

Laurent operator-(const Laurent& a) {
  std::vector<Fq> v(a.c_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.F().neg(a.c_[i]);
  return Laurent(a.field_, a.floor_, std::move(v));
}

Laurent operator*(const Laurent& a, const Laurent& b) {
  const long long ea = a.magnitude_bound();
  const long long eb = b.magnitude_bound();
  const long long floor = std::max(a.floor_ + eb, b.floor_ + ea);
  if (a.c_.empty() || b.c_.empty() || ea + eb < floor) {
    return Laurent(a.field_, -floor);
  }
  const long long top = ea + eb;
  std::vector<Fq> v(std::size_t(top - floor + 1));
  const DotKernel dot(a.F());
  const Fq* ap = a.c_.data();
  const Fq* bp = b.c_.data();
  for (long long e = floor; e <= top; ++e) {
    // exponent i from a, e - i from b, both inside their stored ranges
    const long long ilo = std::max(a.floor_, e - eb);
    const long long ihi = std::min(ea, e - b.floor_);
    if (ilo > ihi) {
      v[std::size_t(e - floor)] = Field::zero();
      continue;
    }
    v[std::size_t(e - floor)] = dot.convolve(ap + (ilo - a.floor_), bp + (e - ilo - b.floor_), ihi - ilo + 1);
  }
  return Laurent(a.field_, floor, std::move(v));
}

Laurent Laurent::inv() const {
  if (c_.empty()) throw PrecisionError("inversion of a series that vanishes at retained precision");
  const long long top = *top_degree();
  const long long rel = top - floor_;  // known coefficients below the leading one
  const Field& F = *field_;
  const Fq inv_lead = F.inv(c_.back());
  const Fq neg_inv_lead = F.neg(inv_lead);
  // u[k] = coefficient k places below the top; y[k] likewise for the inverse.
  std::vector<Fq> u(std::size_t(rel + 1));
  for (long long k = 0; k <= rel; ++k) u[std::size_t(k)] = c_[std::size_t(rel - k)];
  std::vector<Fq> y(std::size_t(rel + 1));
  y[0] = inv_lead;
  const DotKernel dot(F);
  for (long long k = 1; k <= rel; ++k) {
    const Fq s = dot.convolve(u.data() + 1, y.data() + (k - 1), k);
    y[std::size_t(k)] = F.mul(neg_inv_lead, s);
  }
  std::reverse(y.begin(), y.end());
  return Laurent(field_, -top - rel, std::move(y));
}

Laurent Laurent::pow(long long n) const {
  if (n < 0) return inv().pow(-n);
  if (n == 0) {
    const long long rel = c_.empty() ? 0 : *top_degree() - floor_;
    return one(field_, rel);
  }
  Laurent acc = *this;
  Laurent base = *this;
  bool first = true;
  while (n > 0) {
    if (n & 1) {
      acc = first ? base : acc * base;
      first = false;
    }
    n >>= 1;
    if (n) base = base * base;
  }
  return acc;
}

Laurent Laurent::frobenius() const {
  const long long p = F().p();
  const long long floor = p * (floor_ - 1) + 1;
  if (c_.empty()) return Laurent(field_, -floor);
  const long long top = p * *top_degree();
  std::vector<Fq> v(std::size_t(top - floor + 1), Field::zero());
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    v[std::size_t(p * (floor_ + (long long)i) - floor)] = F().frobenius(c_[i]);
  }
  return Laurent(field_, floor, std::move(v));
}

Poly Laurent::integer_part() const {
  if (floor_ > 0) {
    throw PrecisionError("integer part needs coefficients down to T^0; floor is T^" + std::to_string(floor_));
  }
  std::vector<Fq> v;
  for (long long e = 0; e <= magnitude_bound(); ++e) v.push_back(coeff(e));
  return Poly(field_, std::move(v));
}

Laurent Laurent::fractional_part() const {
  if (floor_ >= 0) return Laurent(field_, -floor_);
  const long long n = std::min<long long>(-floor_, (long long)c_.size());
  return Laurent(field_, floor_, std::vector<Fq>(c_.begin(), c_.begin() + n));
}

AbsValue Laurent::fractional_norm() const {
  if (floor_ >= 0) return AbsValue::below(0);
  for (long long e = std::min(-1LL, magnitude_bound()); e >= floor_; --e) {
    if (!c_[std::size_t(e - floor_)].is_zero()) return AbsValue::power(e);
  }
  return AbsValue::below(floor_);
}

bool Laurent::agrees_above(const Laurent& o, long long floor_exp) const {
  if (floor_exp < floor_ || floor_exp < o.floor_) {
    throw PrecisionError("comparison floor T^" + std::to_string(floor_exp) + " lies below retained precision");
  }
  const long long top = std::max(magnitude_bound(), o.magnitude_bound());
  for (long long e = floor_exp; e <= top; ++e) {
    if (coeff(e) != o.coeff(e)) return false;
  }
  return true;
}

bool Laurent::agrees_on_common(const Laurent& o) const { return agrees_above(o, std::max(floor_, o.floor_)); }

// ---------------------------------------------------------------- sqrt

Laurent sqrt(const Laurent& x, std::optional<Fq> leading) {
  const Field& F = x.F();
  if (x.is_zero()) throw std::domain_error("square root of a series that vanishes at retained precision");
  const long long top = *x.top_degree();
  if (F.p() == 2) {
    const long long floor = x.floor() >= 0 ? (x.floor() + 1) / 2 : -((-x.floor()) / 2);
    std::vector<Fq> desc;
    for (long long e = top; e >= x.floor(); --e) {
      const Fq c = x.coeff(e);
      if (c.is_zero()) continue;
      if (e % 2 != 0) throw std::domain_error("characteristic 2 square root needs even exponents only");
    }
    const long long half_top = top / 2;
    for (long long e = half_top; e >= floor; --e) {
      Fq c = x.coeff(2 * e);
      for (int i = 1; i < F.r(); ++i) c = F.frobenius(c);  // c^{p^{r-1}} = c^{1/p}
      desc.push_back(c);
    }
    return Laurent::from_descending(x.field(), half_top, desc, -floor);
  }
  if (top % 2 != 0) throw std::domain_error("square root of a series with odd top degree");
  const auto s = F.sqrt(x.leading());
  if (!s) throw std::domain_error("leading coefficient is not a square in F_q");
  Fq lead = *s;
  if (leading) {
    if (F.mul(*leading, *leading) != x.leading()) throw std::domain_error("requested leading coefficient does not square to the leading term");
    lead = *leading;
  }
  const long long rel = top - x.floor();
  const long long half = top / 2;
  const long long out_prec = -(half - rel);
  const Fq inv2 = F.inv(F.from_int(2));
  Laurent y = Laurent::monomial(x.field(), lead, half, out_prec);
  const long long max_iter = 2 * std::max<long long>(1, rel + 1);
  for (long long it = 0; it < max_iter; ++it) {
    Laurent next = ((y + (x / y)).scaled(inv2)).with_prec(out_prec);
    if (next.floor() == y.floor() && next.agrees_on_common(y)) {
      y = next;
      break;
    }
    y = next;
  }
  return y;
}

// ---------------------------------------------------------------- text

std::string to_string(const Laurent& x) {
  std::string out;
  if (!x.is_zero()) {
    for (long long e = *x.top_degree(); e >= x.floor(); --e) {
      const Fq c = x.coeff(e);
      if (c.is_zero()) continue;
      out += detail::format_term(x.F(), c, e, out.empty());
    }
  }
  const long long unknown = x.floor() - 1;
  const std::string o = "O(T^" + std::to_string(unknown) + ")";
  return out.empty() ? o : out + " + " + o;
}

}  // namespace qtj
