#pragma once
#include <stdexcept>
#include <string>
#include <vector>

namespace fpf {

//! Norm descriptor for the ambient sequence space.  Only canonical bases are
//! supported, so the basis constant and the right-shift domination constant
//! are both 1; they are kept as named fields because every estimate downstream
//! is written in terms of them.
struct SpaceSpec {
  enum class Norm { Lp, Sup };
  Norm kind = Norm::Lp;
  double p = 2.0;
  double basis_constant = 1.0;      // K
  double domination_constant = 1.0; // D, norm growth of the right shift

  static SpaceSpec lp(double p);
  static SpaceSpec l1() { return lp(1.0); }
  static SpaceSpec l2() { return lp(2.0); }
  static SpaceSpec sup();

  bool is_lp() const { return kind == Norm::Lp; }
  std::string label() const;
};

//! Finitely supported coefficient vector over the canonical basis (x_n), n >= 1.
//! Entries are kept canonical: strictly increasing indices, no explicit zeros.
//! `bound` is the declared support bound N (entries never exceed it); maps that
//! grow support return outputs with a correspondingly larger bound.
struct Coeffs {
  struct Entry {
    int index;      // 1-based
    double value;   // nonzero in canonical form
  };
  std::vector<Entry> entries;
  int bound = 0;

  static Coeffs zero() { return Coeffs{}; }
  static Coeffs unit(int n);
  static Coeffs from_dense(const std::vector<double>& v);
  static Coeffs from_entries(std::vector<Entry> raw, int bound_hint = 0);

  double coord(int n) const;
  std::vector<double> dense(int n) const;   // coordinates 1..n
  int max_index() const { return entries.empty() ? 0 : entries.back().index; }
  bool operator==(const Coeffs& o) const;
};

double norm(const Coeffs& x, const SpaceSpec& s);
double coord(const Coeffs& x, int n);

//! x_n -> x_{n+1} on every entry.  Isometric for the canonical bases handled here.
Coeffs shift_right(const Coeffs& x);

//! Phi(n) = || x_1 + ... + x_n ||: n^(1/p) for lp, 1 for the sup norm.
double fundamental_function(int n, const SpaceSpec& s);

// small linear algebra on sparse coefficient vectors
Coeffs add(const Coeffs& a, const Coeffs& b);
Coeffs sub(const Coeffs& a, const Coeffs& b);
Coeffs scale(const Coeffs& a, double c);
double dist(const Coeffs& a, const Coeffs& b, const SpaceSpec& s);

}  // namespace fpf
