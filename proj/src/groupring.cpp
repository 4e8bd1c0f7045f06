#include "symring/groupring.hpp"

#include <sstream>

namespace symring {

BasisWindow make_window(ContextPtr ctx, int radius, std::size_t max_cells) {
  BasisWindow w;
  w.ctx = ctx;
  w.radius = radius;
  w.words = enumerate_ball(ctx, radius, max_cells);
  w.index.reserve(w.words.size());
  for (int i = 0; i < static_cast<int>(w.words.size()); ++i) w.index[w.words[i]] = i;
  return w;
}

long long RingElement::support_norm() const {
  long long m = 0;
  for (const auto& [w, c] : terms) m = std::max(m, w.norm());
  return m;
}

RingElement re_zero(ContextPtr ctx) { return RingElement{std::move(ctx), {}}; }

RingElement re_one(ContextPtr ctx) {
  RingElement e{ctx, {}};
  e.terms[identity_word(ctx)] = 1;
  return e;
}

RingElement re_word(ContextPtr ctx, const Word& w, Int coeff) {
  RingElement e{std::move(ctx), {}};
  if (coeff != 0) e.terms[w] = std::move(coeff);
  return e;
}

RingElement re_word_minus_one(const Word& w) {
  RingElement e{w.ctx, {}};
  if (!w.is_identity()) {
    e.terms[w] = 1;
    e.terms[identity_word(w.ctx)] = -1;
  }
  return e;
}

namespace {
void accumulate(RingElement& into, const Word& w, const Int& c) {
  auto it = into.terms.find(w);
  if (it == into.terms.end()) {
    if (c != 0) into.terms.emplace(w, c);
    return;
  }
  it->second += c;
  if (it->second == 0) into.terms.erase(it);
}
}  // namespace

RingElement re_add(const RingElement& a, const RingElement& b) {
  RingElement out = a;
  for (const auto& [w, c] : b.terms) accumulate(out, w, c);
  return out;
}

RingElement re_sub(const RingElement& a, const RingElement& b) {
  RingElement out = a;
  for (const auto& [w, c] : b.terms) accumulate(out, w, -c);
  return out;
}

RingElement re_neg(const RingElement& a) {
  RingElement out = a;
  for (auto& [w, c] : out.terms) c = -c;
  return out;
}

RingElement re_scale(const Int& c, const RingElement& a) {
  RingElement out{a.ctx, {}};
  if (c == 0) return out;
  for (const auto& [w, x] : a.terms) out.terms.emplace(w, c * x);
  return out;
}

RingElement re_mul(const RingElement& a, const RingElement& b) {
  RingElement out{a.ctx, {}};
  for (const auto& [wa, ca] : a.terms)
    for (const auto& [wb, cb] : b.terms) accumulate(out, multiply(wa, wb), ca * cb);
  return out;
}

bool re_equal(const RingElement& a, const RingElement& b) {
  return a.terms == b.terms;
}

Int aug(const RingElement& a) {
  Int s = 0;
  for (const auto& [w, c] : a.terms) s += c;
  return s;
}

RingElement re_apply(const GeneratorMap& f, const RingElement& a) {
  RingElement out{f.dst, {}};
  for (const auto& [w, c] : a.terms) accumulate(out, f.apply(w), c);
  return out;
}

std::string format_ring(const RingElement& a) {
  if (a.terms.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [w, c] : a.terms) {
    Int mag = c < 0 ? Int(-c) : c;
    if (first) {
      if (c < 0) out << "-";
      first = false;
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    out << mag << "*[" << format_word(w) << "]";
  }
  return out.str();
}

RingElement parse_ring(ContextPtr ctx, const std::string& text) {
  RingElement out{ctx, {}};
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  if (i < text.size() && text.compare(i, 1, "0") == 0 && i + 1 == text.size())
    return out;
  bool first = true;
  while (true) {
    skip_ws();
    if (i >= text.size()) {
      if (first) throw SymringError("empty ring expression");
      break;
    }
    int sign = 1;
    if (text[i] == '+' || text[i] == '-') {
      sign = text[i] == '-' ? -1 : 1;
      ++i;
      skip_ws();
    } else if (!first) {
      throw SymringError("expected '+' or '-' in ring expression");
    }
    std::size_t num_start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (num_start == i) throw SymringError("expected integer coefficient");
    Int coeff = Int(text.substr(num_start, i - num_start)) * sign;
    skip_ws();
    if (i >= text.size() || text[i] != '*') throw SymringError("expected '*'");
    ++i;
    skip_ws();
    if (i >= text.size() || text[i] != '[') throw SymringError("expected '['");
    std::size_t start = ++i;
    int depth = 1;
    while (i < text.size() && depth > 0) {
      if (text[i] == '[') ++depth;
      if (text[i] == ']') --depth;
      ++i;
    }
    if (depth != 0) throw SymringError("unbalanced brackets in ring expression");
    std::string word_text = text.substr(start, i - 1 - start);
    accumulate(out, parse_word(ctx, word_text), coeff);
    first = false;
  }
  return out;
}

IntVec vectorize(const RingElement& a, const BasisWindow& window) {
  IntVec v = IntVec::Zero(window.dim());
  for (const auto& [w, c] : a.terms) {
    int idx = window.index_of(w);
    if (idx < 0) throw SupportEscape(format_word(w));
    v(idx) = c;
  }
  return v;
}

RingElement devectorize(const IntVec& v, const BasisWindow& window) {
  RingElement out{window.ctx, {}};
  for (int i = 0; i < v.size(); ++i)
    if (v(i) != 0) out.terms.emplace(window.words[static_cast<std::size_t>(i)], v(i));
  return out;
}

IntVec reindex(const IntVec& v, const BasisWindow& from, const BasisWindow& to) {
  IntVec out = IntVec::Zero(to.dim());
  for (int i = 0; i < v.size(); ++i) {
    if (v(i) == 0) continue;
    int j = to.index_of(from.words[static_cast<std::size_t>(i)]);
    if (j < 0) throw SupportEscape(format_word(from.words[static_cast<std::size_t>(i)]));
    out(j) = v(i);
  }
  return out;
}

}  // namespace symring
