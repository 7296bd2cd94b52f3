#include "fpfree/seq.hpp"

#include <algorithm>
#include <cmath>

namespace fpf {

SpaceSpec SpaceSpec::lp(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp space requires p >= 1");
  SpaceSpec s;
  s.kind = Norm::Lp;
  s.p = p;
  return s;
}

SpaceSpec SpaceSpec::sup() {
  SpaceSpec s;
  s.kind = Norm::Sup;
  s.p = 0.0;
  return s;
}

std::string SpaceSpec::label() const {
  if (kind == Norm::Sup) return "sup";
  std::string digits = std::to_string(p);
  digits.erase(digits.find_last_not_of('0') + 1);
  if (!digits.empty() && digits.back() == '.') digits.pop_back();
  return "l" + digits;
}

Coeffs Coeffs::unit(int n) {
  if (n < 1) throw std::invalid_argument("basis index must be >= 1");
  Coeffs c;
  c.entries.push_back({n, 1.0});
  c.bound = n;
  return c;
}

Coeffs Coeffs::from_dense(const std::vector<double>& v) {
  Coeffs c;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) c.entries.push_back({static_cast<int>(i) + 1, v[i]});
  c.bound = static_cast<int>(v.size());
  return c;
}

Coeffs Coeffs::from_entries(std::vector<Entry> raw, int bound_hint) {
  std::stable_sort(raw.begin(), raw.end(),
                   [](const Entry& a, const Entry& b) { return a.index < b.index; });
  Coeffs c;
  for (const Entry& e : raw) {
    if (e.index < 1) throw std::invalid_argument("coefficient index must be >= 1");
    if (!c.entries.empty() && c.entries.back().index == e.index)
      throw std::invalid_argument("duplicate coefficient index");
    if (e.value != 0.0) c.entries.push_back(e);
  }
  c.bound = std::max(bound_hint, c.max_index());
  return c;
}

double Coeffs::coord(int n) const {
  for (const Entry& e : entries) {
    if (e.index == n) return e.value;
    if (e.index > n) break;
  }
  return 0.0;
}

std::vector<double> Coeffs::dense(int n) const {
  std::vector<double> v(static_cast<std::size_t>(n), 0.0);
  for (const Entry& e : entries)
    if (e.index <= n) v[static_cast<std::size_t>(e.index) - 1] = e.value;
  return v;
}

bool Coeffs::operator==(const Coeffs& o) const {
  if (entries.size() != o.entries.size()) return false;
  for (std::size_t i = 0; i < entries.size(); ++i)
    if (entries[i].index != o.entries[i].index || entries[i].value != o.entries[i].value)
      return false;
  return true;
}

double norm(const Coeffs& x, const SpaceSpec& s) {
  if (s.kind == SpaceSpec::Norm::Sup) {
    double m = 0.0;
    for (const auto& e : x.entries) m = std::max(m, std::abs(e.value));
    return m;
  }
  if (s.p == 1.0) {
    double t = 0.0;
    for (const auto& e : x.entries) t += std::abs(e.value);
    return t;
  }
  // scale by the largest entry before raising to p: coordinates of the flat
  // constructions sit far below sqrt(DBL_MIN), where naive squaring flushes
  // genuinely different vectors to distance zero
  double m = 0.0;
  for (const auto& e : x.entries) m = std::max(m, std::abs(e.value));
  if (m == 0.0) return 0.0;
  if (s.p == 2.0) {
    double t = 0.0;
    for (const auto& e : x.entries) {
      const double r = e.value / m;
      t += r * r;
    }
    return m * std::sqrt(t);
  }
  double t = 0.0;
  for (const auto& e : x.entries) t += std::pow(std::abs(e.value) / m, s.p);
  return m * std::pow(t, 1.0 / s.p);
}

double coord(const Coeffs& x, int n) { return x.coord(n); }

Coeffs shift_right(const Coeffs& x) {
  Coeffs y;
  y.entries.reserve(x.entries.size());
  for (const auto& e : x.entries) y.entries.push_back({e.index + 1, e.value});
  y.bound = x.bound + 1;
  return y;
}

double fundamental_function(int n, const SpaceSpec& s) {
  if (n < 1) throw std::invalid_argument("fundamental function needs n >= 1");
  if (s.kind == SpaceSpec::Norm::Sup) return 1.0;
  return std::pow(static_cast<double>(n), 1.0 / s.p);
}

namespace {
Coeffs merge(const Coeffs& a, const Coeffs& b, double cb) {
  Coeffs r;
  r.bound = std::max(a.bound, b.bound);
  std::size_t i = 0, j = 0;
  while (i < a.entries.size() || j < b.entries.size()) {
    if (j == b.entries.size() ||
        (i < a.entries.size() && a.entries[i].index < b.entries[j].index)) {
      r.entries.push_back(a.entries[i++]);
    } else if (i == a.entries.size() || b.entries[j].index < a.entries[i].index) {
      double v = cb * b.entries[j].value;
      if (v != 0.0) r.entries.push_back({b.entries[j].index, v});
      ++j;
    } else {
      double v = a.entries[i].value + cb * b.entries[j].value;
      if (v != 0.0) r.entries.push_back({a.entries[i].index, v});
      ++i;
      ++j;
    }
  }
  return r;
}
}  // namespace

Coeffs add(const Coeffs& a, const Coeffs& b) { return merge(a, b, 1.0); }
Coeffs sub(const Coeffs& a, const Coeffs& b) { return merge(a, b, -1.0); }

Coeffs scale(const Coeffs& a, double c) {
  Coeffs r;
  r.bound = a.bound;
  if (c == 0.0) return r;
  r.entries.reserve(a.entries.size());
  for (const auto& e : a.entries) r.entries.push_back({e.index, c * e.value});
  return r;
}

double dist(const Coeffs& a, const Coeffs& b, const SpaceSpec& s) {
  return norm(sub(a, b), s);
}

}  // namespace fpf
