#include "vlmc/tail_rule.hpp"

#include <cmath>
#include <limits>

#include "vlmc/errors.hpp"

namespace vlmc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_geometric(double p, bool allow_frozen) {
  const bool ok = allow_frozen ? (p > 0.0 && p <= 1.0) : (p > 0.0 && p < 1.0);
  if (!ok || !std::isfinite(p)) {
    throw Error(ErrorCode::InvalidModel,
                allow_frozen ? "geometric fallback needs 0 < p <= 1" : "geometric tail needs 0 < p < 1");
  }
}

void check_polynomial(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorCode::InvalidModel, "polynomial tail needs c > 0");
  }
}

double polynomial_persist(double c, std::size_t k) {
  const auto kd = static_cast<double>(k);
  return std::pow(kd / (kd + 1.0), c);
}

}  // namespace

double hurwitz_zeta(double s, double a) {
  if (!(s > 1.0) || !(a > 0.0)) {
    throw Error(ErrorCode::InvalidModel, "hurwitz_zeta needs s > 1 and a > 0");
  }
  // Euler-Maclaurin with the summation shifted to x = a + shift >= 32.
  static constexpr double kBernoulli[] = {1.0 / 6.0,  -1.0 / 30.0,     1.0 / 42.0, -1.0 / 30.0,
                                          5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0};
  const double shift = a < 32.0 ? std::ceil(32.0 - a) : 0.0;
  double head = 0.0;
  for (double m = shift - 1.0; m >= 0.0; m -= 1.0) head += std::pow(m + a, -s);
  const double x = a + shift;
  double tail = std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
  double rising = s;       // s (s+1) ... (s + 2j - 2)
  double factorial = 2.0;  // (2j)!
  double power = std::pow(x, -s - 1.0);
  for (int j = 1; j <= 7; ++j) {
    tail += kBernoulli[j - 1] / factorial * rising * power;
    rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
    factorial *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
    power /= x * x;
  }
  return head + tail;
}

TailRule::TailRule(Geometric g) : kind_(g) { check_geometric(g.p, false); }

TailRule::TailRule(Polynomial p) : kind_(p) { check_polynomial(p.c); }

TailRule::TailRule(Table t) {
  for (double e : t.entries) {
    if (!(e > 0.0 && e <= 1.0)) {
      throw Error(ErrorCode::InvalidModel, "table entries must lie in (0, 1]");
    }
  }
  std::visit(
      [](const auto& f) {
        if constexpr (std::is_same_v<std::decay_t<decltype(f)>, Geometric>) {
          check_geometric(f.p, true);
        } else {
          check_polynomial(f.c);
        }
      },
      t.fallback);
  table_tails_.reserve(t.entries.size() + 1);
  table_tails_.push_back(1.0);
  for (double e : t.entries) table_tails_.push_back(table_tails_.back() * e);
  kind_ = std::move(t);
}

double TailRule::persist(std::size_t k) const {
  if (k == 0) throw Error(ErrorCode::InvalidModel, "run lengths start at 1");
  if (const auto* g = std::get_if<Geometric>(&kind_)) return g->p;
  if (const auto* p = std::get_if<Polynomial>(&kind_)) return polynomial_persist(p->c, k);
  const auto& t = std::get<Table>(kind_);
  if (k <= t.entries.size()) return t.entries[k - 1];
  if (const auto* g = std::get_if<Geometric>(&t.fallback)) return g->p;
  return polynomial_persist(std::get<Polynomial>(t.fallback).c, k);
}

double TailRule::tail(std::size_t n) const {
  if (n <= 1) return 1.0;
  const auto nd = static_cast<double>(n);
  if (const auto* g = std::get_if<Geometric>(&kind_)) return std::pow(g->p, nd - 1.0);
  if (const auto* p = std::get_if<Polynomial>(&kind_)) return std::pow(nd, -p->c);
  const auto& t = std::get<Table>(kind_);
  const std::size_t K = t.entries.size();
  if (n <= K + 1) return table_tails_[n - 1];
  const double head = table_tails_[K];
  if (const auto* g = std::get_if<Geometric>(&t.fallback)) {
    return head * std::pow(g->p, nd - 1.0 - static_cast<double>(K));
  }
  return head * std::pow((static_cast<double>(K) + 1.0) / nd, std::get<Polynomial>(t.fallback).c);
}

double TailRule::tail_limit() const {
  if (const auto* t = std::get_if<Table>(&kind_)) {
    if (const auto* g = std::get_if<Geometric>(&t->fallback); g && g->p == 1.0) {
      return table_tails_.back();
    }
  }
  return 0.0;
}

double TailRule::tail_sum_from(std::size_t n) const {
  if (n == 0) n = 1;
  if (const auto* g = std::get_if<Geometric>(&kind_)) return tail(n) / (1.0 - g->p);
  if (const auto* p = std::get_if<Polynomial>(&kind_)) {
    return p->c > 1.0 ? hurwitz_zeta(p->c, static_cast<double>(n)) : kInf;
  }
  const auto& t = std::get<Table>(kind_);
  const std::size_t K = t.entries.size();
  double head = 0.0;
  for (; n <= K; ++n) head += tail(n);
  const double scale = table_tails_[K];
  if (const auto* g = std::get_if<Geometric>(&t.fallback)) {
    if (g->p == 1.0) return scale > 0.0 ? kInf : head;
    return head + tail(n) / (1.0 - g->p);
  }
  const double c = std::get<Polynomial>(t.fallback).c;
  if (c <= 1.0) return kInf;
  return head + scale * std::pow(static_cast<double>(K) + 1.0, c) *
                    hurwitz_zeta(c, static_cast<double>(n));
}

TailDecay TailRule::decay() const {
  if (std::holds_alternative<Geometric>(kind_)) return TailDecay::Exponential;
  if (std::holds_alternative<Polynomial>(kind_)) return TailDecay::Power;
  const auto& t = std::get<Table>(kind_);
  if (const auto* g = std::get_if<Geometric>(&t.fallback)) {
    return g->p == 1.0 ? TailDecay::Frozen : TailDecay::Exponential;
  }
  return TailDecay::Power;
}

double TailRule::power_exponent() const {
  if (const auto* p = std::get_if<Polynomial>(&kind_)) return p->c;
  if (const auto* t = std::get_if<Table>(&kind_)) {
    if (const auto* p = std::get_if<Polynomial>(&t->fallback)) return p->c;
  }
  return kInf;
}

bool TailRule::operator==(const TailRule& other) const {
  if (kind_.index() != other.kind_.index()) return false;
  if (const auto* g = std::get_if<Geometric>(&kind_)) return g->p == std::get<Geometric>(other.kind_).p;
  if (const auto* p = std::get_if<Polynomial>(&kind_)) return p->c == std::get<Polynomial>(other.kind_).c;
  const auto& a = std::get<Table>(kind_);
  const auto& b = std::get<Table>(other.kind_);
  if (a.entries != b.entries || a.fallback.index() != b.fallback.index()) return false;
  if (const auto* g = std::get_if<Geometric>(&a.fallback)) return g->p == std::get<Geometric>(b.fallback).p;
  return std::get<Polynomial>(a.fallback).c == std::get<Polynomial>(b.fallback).c;
}

}  // namespace vlmc
