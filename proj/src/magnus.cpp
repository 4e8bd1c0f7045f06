#include "symring/magnus.hpp"

#include <functional>
#include <sstream>

namespace symring {

TruncSeries::TruncSeries(int vars, int cap) : vars_(vars), cap_(cap) {
  if (vars < 0 || cap < 0) throw SymringError("series needs vars, cap >= 0");
}

TruncSeries TruncSeries::unit(int vars, int cap) {
  TruncSeries s(vars, cap);
  s.add({}, 1);
  return s;
}

Int TruncSeries::coeff(const Mono& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Int(0) : it->second;
}

int TruncSeries::min_degree() const {
  if (terms_.empty()) return cap_ + 1;
  return static_cast<int>(terms_.begin()->first.size());
}

void TruncSeries::add(const Mono& m, const Int& c) {
  if (c == 0 || static_cast<int>(m.size()) > cap_) return;
  for (int v : m)
    if (v < 0 || v >= vars_) throw SymringError("monomial variable out of range");
  auto [it, fresh] = terms_.emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

namespace {

void require_same_vars(const TruncSeries& a, const TruncSeries& b) {
  if (a.vars() != b.vars()) throw SymringError("series variable count mismatch");
}

}  // namespace

TruncSeries ts_add(const TruncSeries& a, const TruncSeries& b) {
  require_same_vars(a, b);
  TruncSeries out(a.vars(), std::min(a.cap(), b.cap()));
  for (const auto& [m, c] : a.terms()) out.add(m, c);
  for (const auto& [m, c] : b.terms()) out.add(m, c);
  return out;
}

TruncSeries ts_neg(const TruncSeries& a) {
  TruncSeries out(a.vars(), a.cap());
  for (const auto& [m, c] : a.terms()) out.add(m, -c);
  return out;
}

TruncSeries ts_sub(const TruncSeries& a, const TruncSeries& b) {
  return ts_add(a, ts_neg(b));
}

TruncSeries ts_mul(const TruncSeries& a, const TruncSeries& b) {
  require_same_vars(a, b);
  int cap = std::min(a.cap(), b.cap());
  TruncSeries out(a.vars(), cap);
  for (const auto& [ma, ca] : a.terms()) {
    if (static_cast<int>(ma.size()) > cap) continue;
    for (const auto& [mb, cb] : b.terms()) {
      if (static_cast<int>(ma.size() + mb.size()) > cap) break;  // degree-sorted
      TruncSeries::Mono m = ma;
      m.insert(m.end(), mb.begin(), mb.end());
      out.add(m, ca * cb);
    }
  }
  return out;
}

bool ts_equal(const TruncSeries& a, const TruncSeries& b) {
  return a.vars() == b.vars() && a.cap() == b.cap() && a.terms() == b.terms();
}

std::string format_series(const TruncSeries& a) {
  if (a.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : a.terms()) {
    Int v = c;
    if (first) {
      if (v < 0) {
        os << "-";
        v = -v;
      }
    } else {
      os << (v < 0 ? " - " : " + ");
      if (v < 0) v = -v;
    }
    first = false;
    if (v != 1 || m.empty()) os << v.str();
    bool sep = v != 1 && !m.empty();
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (sep || i > 0) os << " ";
      os << "X" << m[i];
      sep = true;
    }
  }
  return os.str();
}

TruncSeries magnus_image(const Word& w, int cap) {
  if (w.ctx->oracle->is_finite())
    throw SymringError("magnus image needs a free context");
  int vars = w.ctx->copies;
  TruncSeries acc = TruncSeries::unit(vars, cap);
  for (const Syllable& s : w.syllables) {
    TruncSeries base(vars, cap);
    if (s.elem > 0) {
      base.add({}, 1);
      base.add({s.copy}, 1);
    } else {
      /* Geometric inverse of 1 + X. */
      TruncSeries::Mono m;
      for (int d = 0; d <= cap; ++d) {
        base.add(m, d % 2 == 0 ? 1 : -1);
        m.push_back(s.copy);
      }
    }
    long long reps = s.elem > 0 ? s.elem : -s.elem;
    for (long long k = 0; k < reps; ++k) acc = ts_mul(acc, base);
  }
  return acc;
}

TruncSeries magnus_image(const RingElement& x, int cap) {
  if (x.ctx->oracle->is_finite())
    throw SymringError("magnus image needs a free context");
  TruncSeries acc(x.ctx->copies, cap);
  for (const auto& [w, c] : x.terms) {
    TruncSeries s = magnus_image(w, cap);
    for (const auto& [m, v] : s.terms()) acc.add(m, c * v);
  }
  return acc;
}

int gamma_degree(const Word& w, int cmax) {
  TruncSeries s = magnus_image(w, cmax);
  s.add({}, -1);
  return s.min_degree();
}

namespace {

std::vector<TruncSeries::Mono> monomials_below(int vars, int n) {
  std::vector<TruncSeries::Mono> out = {{}};
  std::size_t lo = 0;
  for (int d = 1; d < n; ++d) {
    std::size_t hi = out.size();
    for (std::size_t i = lo; i < hi; ++i)
      for (int v = 0; v < vars; ++v) {
        TruncSeries::Mono m = out[i];
        m.push_back(v);
        out.push_back(std::move(m));
      }
    lo = hi;
  }
  return out;
}

}  // namespace

TruncatedLattice fn_window_lattice(const BasisWindow& window, int n) {
  if (n < 1) throw SymringError("augmentation power needs n >= 1");
  int vars = window.ctx->copies;
  std::vector<TruncSeries::Mono> monos = monomials_below(vars, n);
  IntMat m(window.dim(), static_cast<int>(monos.size()));
  for (int i = 0; i < window.dim(); ++i) {
    TruncSeries s = magnus_image(window.words[static_cast<std::size_t>(i)], n - 1);
    for (std::size_t j = 0; j < monos.size(); ++j) m(i, static_cast<int>(j)) = s.coeff(monos[j]);
  }
  return lattice_from_rows(kernel(m), window.dim());
}

bool fn_window_contains(const RingElement& x, int n) {
  if (n < 1) throw SymringError("augmentation power needs n >= 1");
  return magnus_image(x, n - 1).is_zero();
}

}  // namespace symring
