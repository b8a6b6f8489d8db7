#pragma once

// Finiteness of the balance BAL(g, h) = sup_{x, k} | |g g^k(x)| - |h g^k(x)| |.
//
// Writing δ for the difference of the image-length rows of g and h and M for
// the incidence matrix of g, the quantity is |δᵀ M^k e_x|. For each letter the
// integer sequence u_k = δᵀ M^k e_x is linear recurrent of order at most n, so
// it is bounded iff it is eventually periodic iff its minimal annihilating
// polynomial is z^s · Q(z) with Q dividing 1 - z^p for some p.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "morphic/certified.hpp"
#include "morphic/core.hpp"

namespace morphic {

using BigRational = boost::multiprecision::cpp_rational;

/// Integer polynomial, coefficients in ascending degree order, no trailing
/// zero coefficients.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<BigInt> ascending) : coeffs_(std::move(ascending)) { trim(); }
  IntPolynomial(std::initializer_list<long long> ascending) {
    for (long long c : ascending) coeffs_.emplace_back(c);
    trim();
  }

  /// 1 - z^p
  static IntPolynomial one_minus_z_pow(std::uint64_t p) {
    std::vector<BigInt> c(p + 1);
    c[0] += 1;
    c[p] -= 1;
    return IntPolynomial(std::move(c));
  }

  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  long degree() const noexcept { return static_cast<long>(coeffs_.size()) - 1; }
  const std::vector<BigInt>& coefficients() const noexcept { return coeffs_; }
  BigInt coefficient(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : BigInt(0); }
  const BigInt& leading() const { return coeffs_.back(); }

  /// Number of factors z dividing the polynomial.
  std::size_t z_valuation() const {
    std::size_t s = 0;
    while (s < coeffs_.size() && coeffs_[s] == 0) ++s;
    return s;
  }

  /// The polynomial with all factors z removed.
  IntPolynomial strip_z() const {
    const auto s = z_valuation();
    return IntPolynomial(std::vector<BigInt>(coeffs_.begin() + static_cast<std::ptrdiff_t>(s), coeffs_.end()));
  }

  IntPolynomial shifted(std::size_t s) const {
    if (is_zero()) return {};
    std::vector<BigInt> c(s);
    c.insert(c.end(), coeffs_.begin(), coeffs_.end());
    return IntPolynomial(std::move(c));
  }

  std::string to_string(std::string_view var = "z") const {
    if (is_zero()) return "0";
    std::string out;
    for (long i = degree(); i >= 0; --i) {
      const BigInt& c = coeffs_[static_cast<std::size_t>(i)];
      if (c == 0) continue;
      const BigInt mag = abs(c);
      if (out.empty()) {
        if (c < 0) out += "-";
      } else {
        out += c < 0 ? " - " : " + ";
      }
      if (mag != 1 || i == 0) out += mag.str();
      if (i >= 1) out += std::string(var);
      if (i >= 2) out += "^" + std::to_string(i);
    }
    return out;
  }

  /// Evaluates the shift operator on a sequence: Σ c_i u_{k+i}.
  BigInt apply_shift(std::span<const BigInt> u, std::size_t k) const {
    BigInt s = 0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) s += coeffs_[i] * u[k + i];
    return s;
  }

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  std::vector<BigInt> coeffs_;
};

/// Exact divisibility in Z[z].
inline bool divides(const IntPolynomial& divisor, const IntPolynomial& dividend) {
  if (divisor.is_zero()) throw InputError("division by the zero polynomial");
  if (dividend.is_zero()) return true;
  if (dividend.degree() < divisor.degree()) return false;
  std::vector<BigInt> rem = dividend.coefficients();
  const auto dd = static_cast<std::size_t>(divisor.degree());
  const BigInt& lead = divisor.leading();
  for (std::size_t top = rem.size(); top-- > dd;) {
    if (rem[top] == 0) continue;
    if (rem[top] % lead != 0) return false;
    const BigInt q = rem[top] / lead;
    for (std::size_t i = 0; i <= dd; ++i) rem[top - dd + i] -= q * divisor.coefficients()[i];
  }
  for (std::size_t i = 0; i < dd; ++i) {
    if (rem[i] != 0) return false;
  }
  return true;
}

inline bool divides_one_minus_zp(const IntPolynomial& p_poly, std::uint64_t p) {
  if (p == 0) throw InputError("p must be positive");
  return divides(p_poly, IntPolynomial::one_minus_z_pow(p));
}

/// Minimal annihilating polynomial (shift form) of a linear recurrent
/// sequence, via Berlekamp–Massey over the rationals. Returned primitive with
/// positive leading coefficient; the zero sequence gives 1. The input must be
/// at least twice as long as the recurrence order.
inline IntPolynomial minimal_annihilator(std::span<const BigInt> terms) {
  std::vector<BigRational> conn{1};
  std::vector<BigRational> prev{1};
  std::size_t order = 0;
  std::size_t gap = 1;
  BigRational prev_disc = 1;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    BigRational disc = terms[i];
    for (std::size_t j = 1; j <= order && j < conn.size(); ++j) disc += conn[j] * terms[i - j];
    if (disc == 0) {
      ++gap;
      continue;
    }
    const BigRational scale = disc / prev_disc;
    std::vector<BigRational> next = conn;
    if (next.size() < prev.size() + gap) next.resize(prev.size() + gap);
    for (std::size_t j = 0; j < prev.size(); ++j) next[j + gap] -= scale * prev[j];
    if (2 * order <= i) {
      prev = conn;
      order = i + 1 - order;
      prev_disc = disc;
      gap = 1;
    } else {
      ++gap;
    }
    conn = std::move(next);
  }
  // Shift form: P(z) = z^order · C(1/z).
  std::vector<BigRational> shift(order + 1);
  for (std::size_t j = 0; j <= order && j < conn.size(); ++j) shift[order - j] = conn[j];

  BigInt denom_lcm = 1;
  for (const auto& c : shift) denom_lcm = boost::multiprecision::lcm(denom_lcm, denominator(c));
  std::vector<BigInt> ints;
  BigInt content = 0;
  for (const auto& c : shift) {
    ints.push_back(numerator(c) * (denom_lcm / denominator(c)));
    content = boost::multiprecision::gcd(content, abs(ints.back()));
  }
  for (auto& c : ints) c /= content;
  IntPolynomial out(std::move(ints));
  if (out.leading() < 0) {
    std::vector<BigInt> neg = out.coefficients();
    for (auto& c : neg) c = -c;
    out = IntPolynomial(std::move(neg));
  }
  return out;
}

/// ⌊exp(√(6 n ln n))⌋, the largest root-of-unity order that can occur.
inline std::uint64_t unity_order_bound(unsigned n) {
  if (n < 2) throw InputError("unity order bound needs n >= 2");
  const BigInt v = certified::floor_of([n](mpfr_ptr out, mpfr_rnd_t rnd) {
    certified::sqrt_c_n_log_n(out, 6, n, rnd);
    mpfr_exp(out, out, rnd);
  });
  return v.convert_to<std::uint64_t>();
}

/// ⌈M^{2n-1} · exp(n²(1 + √(6 n ln n)))⌉, the a priori cap on a finite balance.
inline BigInt bal_upper_bound(unsigned n, const BigInt& max_image_length) {
  if (n < 2) throw InputError("balance bound needs n >= 2");
  if (max_image_length < 1) throw InputError("balance bound needs M >= 1");
  const BigInt scale = boost::multiprecision::pow(max_image_length, 2 * n - 1);
  return certified::ceil_of([&](mpfr_ptr out, mpfr_rnd_t rnd) {
    certified::sqrt_c_n_log_n(out, 6, n, rnd);
    mpfr_add_ui(out, out, 1, rnd);
    mpfr_mul_ui(out, out, static_cast<unsigned long>(n) * n, rnd);
    mpfr_exp(out, out, rnd);
    certified::Real s(mpfr_get_prec(out));
    certified::set_bigint(s.get(), scale, rnd);
    mpfr_mul(out, out, s.get(), rnd);
  });
}

struct BalanceInstance {
  MorphismTower first;   // iterated
  MorphismTower second;
  BigVector delta;       // image_length_row(first) - image_length_row(second)
  IncidenceMatrix matrix;  // of first

  static BalanceInstance make(MorphismTower first, MorphismTower second) {
    if (!(first.alphabet() == second.alphabet())) throw InputError("balance towers use different alphabets");
    BigVector delta = image_length_row(first);
    const BigVector rhs = image_length_row(second);
    for (std::size_t i = 0; i < delta.size(); ++i) delta[i] -= rhs[i];
    IncidenceMatrix m = tower_matrix(first);
    return BalanceInstance{std::move(first), std::move(second), std::move(delta), std::move(m)};
  }

  std::size_t size() const noexcept { return delta.size(); }
};

/// Rows δᵀ M^k for k = 0 .. count-1.
inline std::vector<BigVector> delta_rows(const BalanceInstance& inst, std::size_t count) {
  std::vector<BigVector> rows;
  BigVector r = inst.delta;
  for (std::size_t k = 0; k < count; ++k) {
    rows.push_back(r);
    if (k + 1 < count) r = r * inst.matrix;
  }
  return rows;
}

/// u_k = δᵀ M^k e_j for k = 0 .. count-1.
inline std::vector<BigInt> delta_sequence(const BalanceInstance& inst, Letter j, std::size_t count) {
  std::vector<BigInt> u;
  for (const auto& row : delta_rows(inst, count)) u.push_back(row.at(j));
  return u;
}

inline IntPolynomial minimal_annihilator(const BalanceInstance& inst, Letter j) {
  const auto terms = delta_sequence(inst, j, 2 * inst.size() + 1);
  return minimal_annihilator(terms);
}

struct LetterBalance {
  Letter letter = 0;
  IntPolynomial annihilator;
  std::size_t transient = 0;  // power of z stripped from the annihilator
  IntPolynomial periodic_part;
  std::optional<std::uint64_t> period;  // least p with periodic_part | 1 - z^p
};

struct BalanceReport {
  bool finite = true;
  std::uint64_t p_bound = 0;
  std::vector<LetterBalance> letters;
};

/// p_bound = 0 means the default unity_order_bound(n).
inline BalanceReport analyze_balance(const BalanceInstance& inst, std::uint64_t p_bound = 0) {
  const std::size_t n = inst.size();
  BalanceReport report;
  report.p_bound = p_bound != 0 ? p_bound : unity_order_bound(static_cast<unsigned>(std::max<std::size_t>(n, 2)));
  const auto rows = delta_rows(inst, 2 * n + 1);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<BigInt> terms;
    for (const auto& row : rows) terms.push_back(row[j]);
    LetterBalance lb;
    lb.letter = static_cast<Letter>(j);
    lb.annihilator = minimal_annihilator(terms);
    lb.transient = lb.annihilator.z_valuation();
    lb.periodic_part = lb.annihilator.strip_z();
    for (std::uint64_t p = 1; p <= report.p_bound; ++p) {
      if (divides_one_minus_zp(lb.periodic_part, p)) {
        lb.period = p;
        break;
      }
    }
    report.finite = report.finite && lb.period.has_value();
    report.letters.push_back(std::move(lb));
  }
  return report;
}

inline bool bal_finite(const BalanceInstance& inst) { return analyze_balance(inst).finite; }

inline bool bal_finite(const MorphismTower& first, const MorphismTower& second) {
  return bal_finite(BalanceInstance::make(first, second));
}

}  // namespace morphic
