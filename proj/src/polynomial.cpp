#include "polydense/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace polydense {
namespace {

using u128 = unsigned __int128;

/// Dense polynomials over Z/p, lowest degree first, no trailing zeros.
class PolyModP {
 public:
  using Poly = std::vector<std::uint64_t>;

  explicit PolyModP(std::uint64_t p) : p_(p) {}

  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return static_cast<std::uint64_t>(u128(a) * b % p_); }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return a >= p_ - b ? a - (p_ - b) : a + b; }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + (p_ - b); }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
    std::uint64_t r = 1;
    for (; e; e >>= 1, a = mul(a, a)) {
      if (e & 1) r = mul(r, a);
    }
    return r;
  }
  std::uint64_t inv(std::uint64_t a) const { return pow(a, p_ - 2); }

  static void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
  }

  Poly monic(Poly f) const {
    const std::uint64_t c = inv(f.back());
    for (auto& v : f) v = mul(v, c);
    return f;
  }

  /// f mod g, g nonzero.
  Poly rem(Poly f, const Poly& g) const {
    const std::uint64_t lead_inv = inv(g.back());
    const std::size_t dg = g.size() - 1;
    while (f.size() > dg) {
      const std::uint64_t q = mul(f.back(), lead_inv);
      const std::size_t shift = f.size() - 1 - dg;
      for (std::size_t i = 0; i <= dg; ++i) f[shift + i] = sub(f[shift + i], mul(q, g[i]));
      f.pop_back();
      trim(f);
    }
    return f;
  }

  /// Quotient of an exact division f / g.
  Poly quotient(Poly f, const Poly& g) const {
    const std::uint64_t lead_inv = inv(g.back());
    const std::size_t dg = g.size() - 1;
    Poly q(f.size() - dg, 0);
    while (f.size() > dg) {
      const std::uint64_t c = mul(f.back(), lead_inv);
      const std::size_t shift = f.size() - 1 - dg;
      q[shift] = c;
      for (std::size_t i = 0; i <= dg; ++i) f[shift + i] = sub(f[shift + i], mul(c, g[i]));
      f.pop_back();
    }
    return q;
  }

  Poly mulmod(const Poly& a, const Poly& b, const Poly& m) const {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = add(r[i + j], mul(a[i], b[j]));
    }
    trim(r);
    return rem(std::move(r), m);
  }

  Poly powmod(Poly base, std::uint64_t e, const Poly& m) const {
    Poly r{1};
    r = rem(std::move(r), m);
    base = rem(std::move(base), m);
    for (; e; e >>= 1) {
      if (e & 1) r = mulmod(r, base, m);
      base = mulmod(base, base, m);
    }
    return r;
  }

  Poly gcd(Poly a, Poly b) const {
    while (!b.empty()) {
      a = rem(std::move(a), b);
      std::swap(a, b);
    }
    return a.empty() ? a : monic(std::move(a));
  }

  /// Appends the roots of g, a monic product of distinct linear factors.
  void split(const Poly& g, std::vector<std::uint64_t>& roots) const {
    if (g.size() <= 1) return;
    if (g.size() == 2) {
      roots.push_back(sub(0, g[0]));
      return;
    }
    // gcd(g, (x + a)^((p-1)/2) - 1) separates roots r by whether r + a is a
    // quadratic residue; shifts a = 0, 1, 2, ... keep the result deterministic.
    for (std::uint64_t a = 0;; ++a) {
      Poly h = powmod(Poly{a % p_, 1}, (p_ - 1) / 2, g);
      if (h.empty()) h.push_back(0);
      h[0] = sub(h[0], 1);
      trim(h);
      Poly d = gcd(g, h);
      if (d.size() > 1 && d.size() < g.size()) {
        split(d, roots);
        split(quotient(g, d), roots);
        return;
      }
    }
  }

 private:
  std::uint64_t p_;
};

}  // namespace

std::optional<int128> evaluate_checked(std::span<const std::int64_t> coefficients, std::uint64_t n) {
  int128 value = 0;
  const auto x = static_cast<int128>(n);
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
    int128 product;
    if (__builtin_mul_overflow(value, x, &product)) return std::nullopt;
    if (__builtin_add_overflow(product, static_cast<int128>(*it), &value)) return std::nullopt;
  }
  return value;
}

std::uint64_t evaluate_mod(std::span<const std::int64_t> coefficients, std::uint64_t r, std::uint64_t p) {
  using u128 = unsigned __int128;
  u128 acc = 0;
  const std::uint64_t x = r % p;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
    const auto c = static_cast<std::int64_t>(*it % static_cast<std::int64_t>(p));
    const std::uint64_t reduced = c < 0 ? static_cast<std::uint64_t>(c + static_cast<std::int64_t>(p)) : c;
    acc = (acc * x + reduced) % p;
  }
  return static_cast<std::uint64_t>(acc);
}

std::optional<std::vector<std::uint64_t>> roots_mod_p(std::span<const std::int64_t> coefficients, std::uint64_t p) {
  PolyModP::Poly f;
  for (auto c : coefficients) {
    const auto r = static_cast<std::int64_t>(c % static_cast<std::int64_t>(p));
    f.push_back(r < 0 ? static_cast<std::uint64_t>(r + static_cast<std::int64_t>(p)) : static_cast<std::uint64_t>(r));
  }
  PolyModP::trim(f);
  if (f.empty()) return std::nullopt;
  std::vector<std::uint64_t> roots;
  if (f.size() == 1) return roots;
  if (p <= 64) {
    for (std::uint64_t r = 0; r < p; ++r) {
      if (evaluate_mod(coefficients, r, p) == 0) roots.push_back(r);
    }
    return roots;
  }
  const PolyModP ring(p);
  f = ring.monic(std::move(f));
  // x^p - x vanishes exactly on Z/p, so the gcd is the split part of f.
  auto xp = ring.powmod(PolyModP::Poly{0, 1}, p, f);
  if (xp.size() < 2) xp.resize(2, 0);
  xp[1] = ring.sub(xp[1], 1);
  PolyModP::trim(xp);
  const auto g = xp.empty() ? f : ring.gcd(f, xp);
  ring.split(g, roots);
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::uint64_t monotone_tail_start(std::span<const std::int64_t> coefficients) {
  const std::size_t d = coefficients.size() - 1;
  const long double lead = std::fabs(static_cast<long double>(coefficients[d]));
  long double root_bound = 0;
  long double slope_bound = 0;
  for (std::size_t i = 0; i < d; ++i) {
    const long double c = std::fabs(static_cast<long double>(coefficients[i]));
    root_bound = std::max(root_bound, c / lead);
    if (i >= 1) slope_bound = std::max(slope_bound, static_cast<long double>(i) * c / (d * lead));
  }
  root_bound += 1;
  if (d >= 2) slope_bound += 1;
  const long double bound = std::max(root_bound, slope_bound);
  if (bound >= static_cast<long double>(std::numeric_limits<std::uint64_t>::max() / 2)) {
    return std::numeric_limits<std::uint64_t>::max() / 2;
  }
  return static_cast<std::uint64_t>(std::floor(bound)) + 1;
}

}  // namespace polydense
