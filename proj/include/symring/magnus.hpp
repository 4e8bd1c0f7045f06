#pragma once

#include "symring/groupring.hpp"
#include "symring/intlinalg.hpp"

#include <map>

namespace symring {

/* Noncommutative integer power series truncated above degree `cap`.
   Monomials are variable-index strings, stored degree-then-lex. */
class TruncSeries {
 public:
  using Mono = std::vector<int>;
  struct DegLex {
    bool operator()(const Mono& a, const Mono& b) const {
      if (a.size() != b.size()) return a.size() < b.size();
      return a < b;
    }
  };
  using Terms = std::map<Mono, Int, DegLex>;

  TruncSeries(int vars, int cap);
  static TruncSeries unit(int vars, int cap);

  int vars() const { return vars_; }
  int cap() const { return cap_; }
  const Terms& terms() const { return terms_; }
  Int coeff(const Mono& m) const;
  bool is_zero() const { return terms_.empty(); }
  /* Smallest degree carrying a nonzero term; cap+1 when there is none. */
  int min_degree() const;

  /* Adds into the term, dropping zeros and anything above the cap. */
  void add(const Mono& m, const Int& c);

 private:
  int vars_ = 0;
  int cap_ = 0;
  Terms terms_;
};

TruncSeries ts_add(const TruncSeries& a, const TruncSeries& b);
TruncSeries ts_sub(const TruncSeries& a, const TruncSeries& b);
TruncSeries ts_neg(const TruncSeries& a);
/* Concatenation convolution; result cap = min of the input caps. */
TruncSeries ts_mul(const TruncSeries& a, const TruncSeries& b);
bool ts_equal(const TruncSeries& a, const TruncSeries& b);
/* "1 + X0 X1 - X1 X0" style, degree-then-lex order. */
std::string format_series(const TruncSeries& a);

/* Multiplicative extension of x_i -> 1 + X_i, x_i^-1 -> 1 - X_i + X_i^2 - ...
   Requires a free context; variables = copies. */
TruncSeries magnus_image(const Word& w, int cap);
/* Linear extension to ring elements. */
TruncSeries magnus_image(const RingElement& x, int cap);

/* Minimal degree of magnus(w) - 1, capped: the answer n means w lies in the
   n-th lower-central term and not the next one (n <= cmax); cmax+1 means
   everything below the cap vanished (identity included). */
int gamma_degree(const Word& w, int cmax);

/* Exact window cut of the n-th augmentation power: kernel of the matrix of
   magnus coefficients in degrees below n. */
TruncatedLattice fn_window_lattice(const BasisWindow& window, int n);
/* Membership in that cut without materializing the lattice: the low-degree
   magnus coefficients of x all vanish. */
bool fn_window_contains(const RingElement& x, int n);

}  // namespace symring
