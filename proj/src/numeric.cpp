#include "kb/numeric.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include <mpfr.h>

namespace kb {

ExtendedNonNeg::ExtendedNonNeg(const mpq_class& v) : value_(v) {
  value_.canonicalize();
  if (sgn(value_) < 0) throw DomainError("negative value " + value_.get_str());
}

ExtendedNonNeg::ExtendedNonNeg(long v) : ExtendedNonNeg(mpq_class(v)) {}

ExtendedNonNeg ExtendedNonNeg::infinity() {
  ExtendedNonNeg r;
  r.infinite_ = true;
  return r;
}

ExtendedNonNeg ExtendedNonNeg::parse(const std::string& text) {
  if (text == "inf") return infinity();
  if (text.empty()) throw DomainError("empty number");
  auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(),
                                       [](unsigned char c) { return std::isdigit(c); })) {
      throw DomainError("malformed decimal '" + text + "'");
    }
    mpq_class q(mpz_class(digits, 10), mpz_class(1));
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, text.size() - dot - 1);
    q /= mpq_class(scale);
    return ExtendedNonNeg(q);
  }
  for (char c : text) {
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/')) {
      throw DomainError("malformed rational '" + text + "'");
    }
  }
  mpq_class q;
  if (q.set_str(text, 10) != 0) throw DomainError("malformed rational '" + text + "'");
  if (sgn(q.get_den()) == 0) throw DomainError("zero denominator in '" + text + "'");
  return ExtendedNonNeg(q);
}

const mpq_class& ExtendedNonNeg::value() const {
  if (infinite_) throw DomainError("value() of infinity");
  return value_;
}

ExtendedNonNeg ExtendedNonNeg::reciprocal() const {
  if (infinite_) return ExtendedNonNeg();
  if (sgn(value_) == 0) throw DomainError("reciprocal of zero");
  return ExtendedNonNeg(mpq_class(1) / value_);
}

ExtendedNonNeg operator+(const ExtendedNonNeg& a, const ExtendedNonNeg& b) {
  if (a.infinite_ || b.infinite_) return ExtendedNonNeg::infinity();
  ExtendedNonNeg r;
  r.value_ = a.value_ + b.value_;
  return r;
}

ExtendedNonNeg operator*(const ExtendedNonNeg& a, const ExtendedNonNeg& b) {
  if (a.infinite_ || b.infinite_) {
    if (a.is_zero() || b.is_zero()) throw DomainError("0 * inf is undefined");
    return ExtendedNonNeg::infinity();
  }
  ExtendedNonNeg r;
  r.value_ = a.value_ * b.value_;
  return r;
}

ExtendedNonNeg& ExtendedNonNeg::operator+=(const ExtendedNonNeg& other) {
  if (infinite_) return *this;
  if (other.infinite_) {
    *this = infinity();
  } else {
    value_ += other.value_;
  }
  return *this;
}

bool operator==(const ExtendedNonNeg& a, const ExtendedNonNeg& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const ExtendedNonNeg& a, const ExtendedNonNeg& b) {
  if (a.infinite_ || b.infinite_) {
    if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
    return a.infinite_ ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  int c = cmp(a.value_, b.value_);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string ExtendedNonNeg::str() const { return infinite_ ? "inf" : value_.get_str(); }

std::string ExtendedNonNeg::fraction_str() const {
  if (infinite_) return "inf";
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

ExtendedNonNeg monus(const ExtendedNonNeg& a, const ExtendedNonNeg& b) {
  if (a.is_infinite()) {
    if (b.is_infinite()) throw DomainError("inf - inf is undefined");
    return a;
  }
  if (b.is_infinite()) return ExtendedNonNeg();
  mpq_class d = a.value() - b.value();
  if (sgn(d) < 0) return ExtendedNonNeg();
  return ExtendedNonNeg(d);
}

const char* to_string(Tri t) {
  switch (t) {
    case Tri::True: return "true";
    case Tri::False: return "false";
    case Tri::Unknown: return "unknown";
  }
  return "?";
}

Interval::Interval(ExtendedNonNeg exact) : lo_(exact), hi_(std::move(exact)) {}

Interval::Interval(ExtendedNonNeg lo, ExtendedNonNeg hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (hi_ < lo_) throw DomainError("interval with lo > hi: " + lo_.str() + " > " + hi_.str());
}

ExtendedNonNeg Interval::width() const {
  if (hi_.is_infinite()) return lo_.is_infinite() ? ExtendedNonNeg() : ExtendedNonNeg::infinity();
  return monus(hi_, lo_);
}

Interval operator+(const Interval& a, const Interval& b) {
  if (a.exact() && b.exact()) return Interval(a.lo_ + b.lo_);
  return Interval(a.lo_ + b.lo_, a.hi_ + b.hi_);
}

Interval operator*(const Interval& a, const Interval& b) {
  if (a.exact() && b.exact()) return Interval(a.lo_ * b.lo_);
  return Interval(a.lo_ * b.lo_, a.hi_ * b.hi_);
}

Interval& Interval::operator+=(const Interval& other) {
  bool was_exact = exact();
  lo_ += other.lo_;
  if (was_exact && other.exact()) {
    hi_ = lo_;
  } else {
    hi_ += other.hi_;
  }
  return *this;
}

std::string Interval::str() const {
  if (exact()) return lo_.str();
  return "[" + lo_.str() + ";" + hi_.str() + "]";
}

std::string Interval::fraction_str() const {
  if (exact()) return lo_.fraction_str();
  return "[" + lo_.fraction_str() + ";" + hi_.fraction_str() + "]";
}

ExtendedNonNeg scale(const mpq_class& k, const ExtendedNonNeg& v) {
  return ExtendedNonNeg(k) * v;
}

Interval scale(const mpq_class& k, const Interval& v) {
  if (v.exact()) return Interval(scale(k, v.lo()));
  return Interval(scale(k, v.lo()), scale(k, v.hi()));
}

Interval max(const Interval& a, const Interval& b) {
  return Interval(std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

Tri certainly_leq(const Interval& a, const Interval& b) {
  if (a.hi() <= b.lo()) return Tri::True;
  if (a.lo() > b.hi()) return Tri::False;
  return Tri::Unknown;
}

mpq_class pow2(long exponent) {
  mpz_class p(1);
  if (exponent >= 0) {
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(exponent));
    return mpq_class(p);
  }
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(-exponent));
  return mpq_class(mpz_class(1), p);
}

bool is_power_of_two(const mpz_class& v) {
  return sgn(v) > 0 && mpz_popcount(v.get_mpz_t()) == 1;
}

namespace {

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }
  mpq_class to_q() {
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), v_);
    return q;
  }

 private:
  mpfr_t v_;
};

mpq_class round_to_grid(const mpq_class& q, unsigned frac_bits, bool up) {
  mpz_class num = q.get_num();
  mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), frac_bits);
  mpz_class out;
  if (up) {
    mpz_cdiv_q(out.get_mpz_t(), num.get_mpz_t(), q.get_den().get_mpz_t());
  } else {
    mpz_fdiv_q(out.get_mpz_t(), num.get_mpz_t(), q.get_den().get_mpz_t());
  }
  mpq_class r(out, mpz_class(1));
  r /= pow2(frac_bits);
  r.canonicalize();
  return r;
}

mpfr_prec_t working_precision(const mpq_class& x, unsigned frac_bits, unsigned extra) {
  auto bits = mpz_sizeinbase(x.get_num().get_mpz_t(), 2) + mpz_sizeinbase(x.get_den().get_mpz_t(), 2);
  return static_cast<mpfr_prec_t>(frac_bits + 64 + extra + bits);
}

}  // namespace

std::pair<mpq_class, mpq_class> log2_enclosure(const mpq_class& x_in, unsigned frac_bits) {
  mpq_class x = x_in;
  x.canonicalize();
  if (sgn(x) <= 0) throw DomainError("log2 of non-positive value " + x.get_str());
  if (is_power_of_two(x.get_num()) && is_power_of_two(x.get_den())) {
    long e = static_cast<long>(mpz_sizeinbase(x.get_num().get_mpz_t(), 2)) -
             static_cast<long>(mpz_sizeinbase(x.get_den().get_mpz_t(), 2));
    mpq_class r(e);
    return {r, r};
  }
  auto prec = working_precision(x, frac_bits, 0);
  Mpfr xl(prec), xh(prec), rl(prec), rh(prec);
  mpfr_set_q(xl.get(), x.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(xh.get(), x.get_mpq_t(), MPFR_RNDU);
  mpfr_log2(rl.get(), xl.get(), MPFR_RNDD);
  mpfr_log2(rh.get(), xh.get(), MPFR_RNDU);
  return {round_to_grid(rl.to_q(), frac_bits, false), round_to_grid(rh.to_q(), frac_bits, true)};
}

std::pair<mpq_class, mpq_class> pow_enclosure(const mpq_class& x_in, const mpq_class& r_in,
                                              unsigned frac_bits) {
  mpq_class x = x_in, r = r_in;
  x.canonicalize();
  r.canonicalize();
  if (sgn(x) < 0) throw DomainError("pow of negative base");
  if (sgn(x) == 0) {
    if (sgn(r) < 0) throw DomainError("pow(0, negative)");
    mpq_class v = sgn(r) == 0 ? mpq_class(1) : mpq_class(0);
    return {v, v};
  }
  if (r.get_den() == 1) {
    if (!r.get_num().fits_ulong_p() && !mpz_class(-r.get_num()).fits_ulong_p()) {
      throw DomainError("pow exponent too large");
    }
    bool neg = sgn(r) < 0;
    unsigned long e = mpz_class(abs(r.get_num())).get_ui();
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), x.get_num().get_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), x.get_den().get_mpz_t(), e);
    mpq_class v = neg ? mpq_class(den, num) : mpq_class(num, den);
    v.canonicalize();
    return {v, v};
  }
  // x^r is monotone in each argument on x > 0, so the extremes sit at the
  // corners of the rounded (x, r) box.
  double magnitude = std::abs(r.get_d()) *
                     static_cast<double>(mpz_sizeinbase(x.get_num().get_mpz_t(), 2) +
                                         mpz_sizeinbase(x.get_den().get_mpz_t(), 2));
  auto prec = working_precision(x, frac_bits, static_cast<unsigned>(magnitude) + 64);
  Mpfr xl(prec), xh(prec), el(prec), eh(prec);
  mpfr_set_q(xl.get(), x.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(xh.get(), x.get_mpq_t(), MPFR_RNDU);
  mpfr_set_q(el.get(), r.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(eh.get(), r.get_mpq_t(), MPFR_RNDU);
  std::array<mpfr_ptr, 2> bases{xl.get(), xh.get()};
  std::array<mpfr_ptr, 2> exps{el.get(), eh.get()};
  mpq_class lo, hi;
  bool first = true;
  for (auto* b : bases) {
    for (auto* e : exps) {
      Mpfr down(prec), up(prec);
      mpfr_pow(down.get(), b, e, MPFR_RNDD);
      mpfr_pow(up.get(), b, e, MPFR_RNDU);
      mpq_class d = down.to_q(), u = up.to_q();
      if (first || d < lo) lo = d;
      if (first || u > hi) hi = u;
      first = false;
    }
  }
  if (sgn(lo) < 0) lo = 0;
  return {round_to_grid(lo, frac_bits, false), round_to_grid(hi, frac_bits, true)};
}

}  // namespace kb
