#include "symring/groups.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <unordered_map>

namespace symring {

namespace {

bool oracle_equal(const GroupOracle& a, const GroupOracle& b) {
  if (&a == &b) return true;
  if (a.kind != b.kind) return false;
  if (a.kind == GroupOracle::Kind::Integers) return true;
  return a.identity == b.identity && a.table == b.table;
}

std::shared_ptr<GroupOracle> make_finite(std::string name,
                                         std::vector<std::string> elements,
                                         int identity,
                                         std::vector<std::vector<int>> table) {
  auto o = std::make_shared<GroupOracle>();
  o->kind = GroupOracle::Kind::Finite;
  o->name = std::move(name);
  o->elements = std::move(elements);
  o->identity = identity;
  o->table = std::move(table);
  int n = o->order();
  o->inverse.assign(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (o->table[a][b] == o->identity) o->inverse[a] = b;
  o->validate();
  return o;
}

std::shared_ptr<const GroupOracle> cyclic(int n, const std::string& name) {
  std::vector<std::string> names(n);
  for (int i = 0; i < n; ++i)
    names[i] = i == 0 ? "e" : (i == 1 ? "t" : "t" + std::to_string(i));
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return make_finite(name, std::move(names), 0, std::move(t));
}

/* Elements r^k s^b with s r^k s = r^-k; idx = b*m + k. */
std::shared_ptr<const GroupOracle> dihedral_like(int m, const std::string& name,
                                                 const std::vector<std::string>& names) {
  int n = 2 * m;
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int k1 = i % m, b1 = i / m, k2 = j % m, b2 = j / m;
      int k = b1 == 0 ? (k1 + k2) % m : ((k1 - k2) % m + m) % m;
      int b = b1 ^ b2;
      t[i][j] = b * m + k;
    }
  return make_finite(name, names, 0, std::move(t));
}

std::shared_ptr<const GroupOracle> quaternion8() {
  /* idx = axis*2 + sign, axes 1,i,j,k. */
  std::vector<std::string> names = {"1", "-1", "i", "-i", "j", "-j", "k", "-k"};
  auto unit = [](int a, int b, int& axis, int& sign) {
    static const int ax[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static const int sg[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
    axis = ax[a][b];
    sign = sg[a][b];
  };
  std::vector<std::vector<int>> t(8, std::vector<int>(8));
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      int a1 = i / 2, s1 = i % 2, a2 = j / 2, s2 = j % 2;
      int axis, sign;
      unit(a1, a2, axis, sign);
      t[i][j] = axis * 2 + (sign ^ s1 ^ s2);
    }
  return make_finite("Q8", std::move(names), 0, std::move(t));
}

}  // namespace

int GroupOracle::pow(int a, long long e) const {
  /* Reduce by the element order so huge exponents stay cheap. */
  int ord = 1;
  for (int x = a; x != identity; x = mul(x, a)) ++ord;
  long long r = e % ord;
  if (r < 0) r += ord;
  int out = identity;
  for (long long i = 0; i < r; ++i) out = mul(out, a);
  return out;
}

int GroupOracle::element_index(const std::string& elem_name) const {
  for (int i = 0; i < order(); ++i)
    if (elements[i] == elem_name) return i;
  throw SymringError("unknown element '" + elem_name + "' in group " + name);
}

void GroupOracle::validate() const {
  if (kind == Kind::Integers) return;
  int n = order();
  if (n == 0) throw SymringError("empty group table");
  if (table.size() != static_cast<std::size_t>(n))
    throw SymringError("group table row count mismatch");
  for (const auto& row : table) {
    if (row.size() != static_cast<std::size_t>(n))
      throw SymringError("group table column count mismatch");
    for (int v : row)
      if (v < 0 || v >= n) throw SymringError("group table entry out of range");
  }
  if (identity < 0 || identity >= n) throw SymringError("identity index out of range");
  for (int a = 0; a < n; ++a)
    if (table[identity][a] != a || table[a][identity] != a)
      throw SymringError("identity law fails in group " + name);
  for (int a = 0; a < n; ++a) {
    if (inverse[a] < 0) throw SymringError("missing inverse in group " + name);
    if (table[a][inverse[a]] != identity || table[inverse[a]][a] != identity)
      throw SymringError("inverse law fails in group " + name);
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          throw SymringError("associativity fails in group " + name);
}

std::shared_ptr<const GroupOracle> GroupOracle::integers() {
  static const auto z = [] {
    auto o = std::make_shared<GroupOracle>();
    o->kind = Kind::Integers;
    o->name = "Z";
    return o;
  }();
  return z;
}

std::shared_ptr<const GroupOracle> GroupOracle::finite_from_table(
    std::string name, std::vector<std::string> elements, int identity,
    std::vector<std::vector<int>> table) {
  return make_finite(std::move(name), std::move(elements), identity, std::move(table));
}

std::shared_ptr<const GroupOracle> GroupOracle::direct_product(
    const std::shared_ptr<const GroupOracle>& a,
    const std::shared_ptr<const GroupOracle>& b) {
  if (!a->is_finite() || !b->is_finite())
    throw SymringError("direct product needs finite factors");
  int na = a->order(), nb = b->order();
  std::vector<std::string> names;
  names.reserve(na * nb);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j)
      names.push_back("(" + a->elements[i] + "," + b->elements[j] + ")");
  std::vector<std::vector<int>> t(na * nb, std::vector<int>(na * nb));
  for (int i1 = 0; i1 < na; ++i1)
    for (int j1 = 0; j1 < nb; ++j1)
      for (int i2 = 0; i2 < na; ++i2)
        for (int j2 = 0; j2 < nb; ++j2)
          t[i1 * nb + j1][i2 * nb + j2] = a->mul(i1, i2) * nb + b->mul(j1, j2);
  return make_finite("(" + a->name + " x " + b->name + ")", std::move(names),
                     a->identity * nb + b->identity, std::move(t));
}

std::shared_ptr<const GroupOracle> GroupOracle::by_name(const std::string& name) {
  if (name == "Z") return integers();
  if (name == "Z/2") return cyclic(2, "Z/2");
  if (name == "Z/3") return cyclic(3, "Z/3");
  if (name == "Z/4") return cyclic(4, "Z/4");
  if (name == "S3")
    return dihedral_like(3, "S3", {"e", "r", "r2", "s", "rs", "r2s"});
  if (name == "D4")
    return dihedral_like(4, "D4", {"e", "r", "r2", "r3", "s", "rs", "r2s", "r3s"});
  if (name == "Q8") return quaternion8();
  if (name == "(Z/2)^2") {
    auto o = direct_product(cyclic(2, "Z/2"), cyclic(2, "Z/2"));
    auto copy = std::make_shared<GroupOracle>(*o);
    copy->name = "(Z/2)^2";
    copy->validate();
    return copy;
  }
  if (name == "(Z/4)^2") {
    auto o = direct_product(cyclic(4, "Z/4"), cyclic(4, "Z/4"));
    auto copy = std::make_shared<GroupOracle>(*o);
    copy->name = "(Z/4)^2";
    copy->validate();
    return copy;
  }
  throw SymringError("unknown group oracle '" + name + "'");
}

std::shared_ptr<const GroupOracle> GroupOracle::from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::string name = j.at("name").get<std::string>();
  std::vector<std::string> elements = j.at("elements").get<std::vector<std::string>>();
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (index.count(elements[i]))
      throw SymringError("duplicate element name '" + elements[i] + "'");
    index[elements[i]] = static_cast<int>(i);
  }
  std::string id_name = j.at("identity").get<std::string>();
  if (!index.count(id_name)) throw SymringError("identity element not listed");
  auto rows = j.at("table");
  std::vector<std::vector<int>> table;
  for (const auto& row : rows) {
    std::vector<int> r;
    for (const auto& cell : row) {
      std::string c = cell.get<std::string>();
      if (!index.count(c)) throw SymringError("table entry '" + c + "' not an element");
      r.push_back(index[c]);
    }
    table.push_back(std::move(r));
  }
  return make_finite(std::move(name), std::move(elements), index[id_name],
                     std::move(table));
}

int Context::label_index(const std::string& label) const {
  for (int i = 0; i < static_cast<int>(labels.size()); ++i)
    if (labels[i] == label) return i;
  return -1;
}

ContextPtr make_free_context(std::vector<std::string> labels) {
  auto c = std::make_shared<Context>();
  c->oracle = GroupOracle::integers();
  c->copies = static_cast<int>(labels.size());
  c->labels = std::move(labels);
  return c;
}

ContextPtr make_product_context(OraclePtr oracle, int copies) {
  auto c = std::make_shared<Context>();
  c->oracle = std::move(oracle);
  c->copies = copies;
  for (int i = 0; i < copies; ++i) c->labels.push_back("c" + std::to_string(i));
  return c;
}

ContextPtr make_finite_context(OraclePtr oracle) {
  return make_product_context(std::move(oracle), 1);
}

bool same_context(const Context& a, const Context& b) {
  return a.copies == b.copies && oracle_equal(*a.oracle, *b.oracle);
}

long long Word::norm() const {
  long long n = 0;
  bool fin = ctx->oracle->is_finite();
  for (const auto& s : syllables) n += fin ? 1 : std::llabs(s.elem);
  return n;
}

Word identity_word(ContextPtr ctx) { return Word{std::move(ctx), {}}; }

Word make_word(ContextPtr ctx, std::vector<Syllable> raw) {
  const GroupOracle& o = *ctx->oracle;
  bool fin = o.is_finite();
  std::vector<Syllable> stack;
  for (const auto& s : raw) {
    if (s.copy < 0 || s.copy >= ctx->copies)
      throw SymringError("syllable copy out of range");
    if (fin && (s.elem < 0 || s.elem >= o.order()))
      throw SymringError("syllable element out of range");
    bool trivial = fin ? s.elem == o.identity : s.elem == 0;
    if (trivial) continue;
    Syllable cur = s;
    while (!stack.empty() && stack.back().copy == cur.copy) {
      if (fin) {
        int prod = o.mul(static_cast<int>(stack.back().elem), static_cast<int>(cur.elem));
        stack.pop_back();
        if (prod == o.identity) goto absorbed;
        cur.elem = prod;
      } else {
        long long sum = stack.back().elem + cur.elem;
        stack.pop_back();
        if (sum == 0) goto absorbed;
        cur.elem = sum;
      }
    }
    stack.push_back(cur);
  absorbed:;
  }
  return Word{std::move(ctx), std::move(stack)};
}

Word multiply(const Word& a, const Word& b) {
  if (!same_context(*a.ctx, *b.ctx))
    throw SymringError("multiply across distinct contexts");
  std::vector<Syllable> raw = a.syllables;
  raw.insert(raw.end(), b.syllables.begin(), b.syllables.end());
  return make_word(a.ctx, std::move(raw));
}

Word inverse(const Word& a) {
  const GroupOracle& o = *a.ctx->oracle;
  std::vector<Syllable> raw(a.syllables.rbegin(), a.syllables.rend());
  for (auto& s : raw)
    s.elem = o.is_finite() ? o.inv(static_cast<int>(s.elem)) : -s.elem;
  return Word{a.ctx, std::move(raw)};
}

Word power(const Word& a, long long e) {
  Word base = e < 0 ? inverse(a) : a;
  long long k = e < 0 ? -e : e;
  Word out = identity_word(a.ctx);
  for (long long i = 0; i < k; ++i) out = multiply(out, base);
  return out;
}

Word conjugate(const Word& a, const Word& by) {
  return multiply(multiply(inverse(by), a), by);
}

Word commutator(const Word& a, const Word& b) {
  return multiply(multiply(inverse(a), inverse(b)), multiply(a, b));
}

Word left_normed_commutator(const std::vector<Word>& parts) {
  if (parts.empty()) throw SymringError("empty commutator");
  Word acc = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) acc = commutator(acc, parts[i]);
  return acc;
}

namespace {

/* Order key inside one copy: smaller magnitude first, positive before
   negative for Integers; element index for finite. */
std::pair<long long, long long> elem_key(const GroupOracle& o, long long elem) {
  if (o.is_finite()) return {elem, 0};
  return {std::llabs(elem), elem < 0 ? 1 : 0};
}

}  // namespace

bool word_less(const Word& a, const Word& b) {
  long long na = a.norm(), nb = b.norm();
  if (na != nb) return na < nb;
  if (a.syllables.size() != b.syllables.size())
    return a.syllables.size() < b.syllables.size();
  const GroupOracle& o = *a.ctx->oracle;
  for (std::size_t i = 0; i < a.syllables.size(); ++i) {
    const auto& x = a.syllables[i];
    const auto& y = b.syllables[i];
    if (x.copy != y.copy) return x.copy < y.copy;
    auto kx = elem_key(o, x.elem), ky = elem_key(o, y.elem);
    if (kx != ky) return kx < ky;
  }
  return false;
}

std::size_t word_hash(const Word& w) {
  std::size_t h = 1469598103934665603ull;
  auto mix = [&h](unsigned long long v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  for (const auto& s : w.syllables) {
    mix(static_cast<unsigned long long>(s.copy) + 0x9e3779b97f4a7c15ull);
    mix(static_cast<unsigned long long>(s.elem));
  }
  return h;
}

std::string format_word(const Word& w) {
  if (w.is_identity()) return "[]";
  const Context& c = *w.ctx;
  const GroupOracle& o = *c.oracle;
  std::ostringstream out;
  bool first = true;
  for (const auto& s : w.syllables) {
    if (!first) out << ' ';
    first = false;
    if (o.is_finite()) {
      out << o.elements[static_cast<std::size_t>(s.elem)];
      if (c.copies > 1) out << '@' << s.copy;
    } else {
      out << c.labels[static_cast<std::size_t>(s.copy)];
      if (s.elem != 1) out << '^' << s.elem;
    }
  }
  return out.str();
}

Word parse_word(ContextPtr ctx, const std::string& text) {
  const GroupOracle& o = *ctx->oracle;
  std::vector<Syllable> raw;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (tok == "[]" || tok == "*") continue;
    std::size_t at = tok.find('@');
    std::size_t caret = tok.find('^');
    if (at != std::string::npos && caret != std::string::npos && caret < at)
      throw SymringError("malformed token '" + tok + "'");
    std::size_t base_end = std::min(at, caret);
    std::string base = tok.substr(0, base_end);
    long long exp = 1;
    int copy = 0;
    if (at != std::string::npos) {
      std::size_t copy_end = caret == std::string::npos ? tok.size() : caret;
      copy = std::stoi(tok.substr(at + 1, copy_end - at - 1));
    }
    if (caret != std::string::npos) exp = std::stoll(tok.substr(caret + 1));
    if (base.empty()) throw SymringError("malformed token '" + tok + "'");
    if (o.is_finite()) {
      if (at == std::string::npos && ctx->copies > 1)
        throw SymringError("token '" + tok + "' needs @copy in a multi-copy context");
      int elem = o.element_index(base);
      raw.push_back({copy, o.pow(elem, exp)});
    } else {
      if (at != std::string::npos)
        throw SymringError("'@' is not valid for free-group tokens: '" + tok + "'");
      int idx = ctx->label_index(base);
      if (idx < 0) throw SymringError("unknown generator '" + base + "'");
      raw.push_back({idx, exp});
    }
  }
  return make_word(std::move(ctx), std::move(raw));
}

std::size_t default_max_cells() {
  if (const char* env = std::getenv("SYMRING_MAX_CELLS")) {
    long long v = std::atoll(env);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return 2'000'000;
}

std::vector<Word> enumerate_ball(ContextPtr ctx, int radius, std::size_t max_cells) {
  if (max_cells == 0) max_cells = default_max_cells();
  const GroupOracle& o = *ctx->oracle;
  std::vector<Word> out;
  std::vector<Syllable> cur;
  auto emit = [&] {
    if (out.size() >= max_cells)
      throw SymringError("ball enumeration exceeds cell cap (" +
                         std::to_string(max_cells) + ")");
    out.push_back(Word{ctx, cur});
  };
  std::function<void(int, int)> rec = [&](int budget, int last_copy) {
    emit();
    if (budget <= 0) return;
    for (int copy = 0; copy < ctx->copies; ++copy) {
      if (copy == last_copy) continue;
      if (o.is_finite()) {
        for (int g = 0; g < o.order(); ++g) {
          if (g == o.identity) continue;
          cur.push_back({copy, g});
          rec(budget - 1, copy);
          cur.pop_back();
        }
      } else {
        for (int mag = 1; mag <= budget; ++mag) {
          for (int sign : {1, -1}) {
            cur.push_back({copy, static_cast<long long>(sign) * mag});
            rec(budget - mag, copy);
            cur.pop_back();
          }
        }
      }
    }
  };
  rec(radius, -1);
  std::sort(out.begin(), out.end(), word_less);
  return out;
}

Word GeneratorMap::apply(const Word& w) const {
  if (!same_context(*w.ctx, *src))
    throw SymringError("word context does not match map source");
  std::vector<Syllable> raw;
  for (const auto& s : w.syllables) {
    const CopyRule& r = rules[static_cast<std::size_t>(s.copy)];
    switch (r.kind) {
      case CopyRule::Kind::Kill:
        break;
      case CopyRule::Kind::Relabel: {
        long long elem = s.elem;
        if (src->oracle->is_finite() && !r.elem_map.empty())
          elem = r.elem_map[static_cast<std::size_t>(s.elem)];
        bool trivial = dst->oracle->is_finite() ? elem == dst->oracle->identity
                                                : elem == 0;
        if (!trivial) raw.push_back({r.target_copy, elem});
        break;
      }
      case CopyRule::Kind::Image: {
        Word p = power(r.image, s.elem);
        raw.insert(raw.end(), p.syllables.begin(), p.syllables.end());
        break;
      }
    }
  }
  return make_word(dst, std::move(raw));
}

void GeneratorMap::validate() const {
  if (!src || !dst) throw SymringError("map missing contexts");
  if (rules.size() != static_cast<std::size_t>(src->copies))
    throw SymringError("map needs one rule per source copy");
  const GroupOracle& so = *src->oracle;
  const GroupOracle& do_ = *dst->oracle;
  for (const auto& r : rules) {
    switch (r.kind) {
      case CopyRule::Kind::Kill:
        break;
      case CopyRule::Kind::Relabel: {
        if (r.target_copy < 0 || r.target_copy >= dst->copies)
          throw SymringError("relabel target copy out of range");
        if (so.is_finite() != do_.is_finite())
          throw SymringError("relabel across oracle kinds");
        if (so.is_finite()) {
          if (r.elem_map.empty()) {
            if (!oracle_equal(so, do_))
              throw SymringError("identity relabel needs matching oracles");
          } else {
            if (r.elem_map.size() != static_cast<std::size_t>(so.order()))
              throw SymringError("element map size mismatch");
            for (int v : r.elem_map)
              if (v < 0 || v >= do_.order())
                throw SymringError("element map value out of range");
            if (r.elem_map[static_cast<std::size_t>(so.identity)] != do_.identity)
              throw SymringError("element map does not fix the identity");
            for (int a = 0; a < so.order(); ++a)
              for (int b = 0; b < so.order(); ++b)
                if (do_.mul(r.elem_map[a], r.elem_map[b]) !=
                    r.elem_map[static_cast<std::size_t>(so.mul(a, b))])
                  throw SymringError("element map is not a homomorphism");
          }
        }
        break;
      }
      case CopyRule::Kind::Image:
        if (so.is_finite())
          throw SymringError("word images require an Integers source copy");
        if (!r.image.ctx || !same_context(*r.image.ctx, *dst))
          throw SymringError("image word lives in the wrong context");
        break;
    }
  }
}

GeneratorMap compose(const GeneratorMap& outer, const GeneratorMap& inner) {
  if (!same_context(*inner.dst, *outer.src))
    throw SymringError("compose: inner target differs from outer source");
  GeneratorMap out;
  out.src = inner.src;
  out.dst = outer.dst;
  for (const auto& r : inner.rules) {
    CopyRule nr;
    if (r.kind == CopyRule::Kind::Kill) {
      nr.kind = CopyRule::Kind::Kill;
    } else if (r.kind == CopyRule::Kind::Image) {
      nr.kind = CopyRule::Kind::Image;
      nr.image = outer.apply(r.image);
    } else {
      const CopyRule& r2 = outer.rules[static_cast<std::size_t>(r.target_copy)];
      if (r2.kind == CopyRule::Kind::Kill) {
        nr.kind = CopyRule::Kind::Kill;
      } else if (r2.kind == CopyRule::Kind::Image) {
        nr.kind = CopyRule::Kind::Image;
        nr.image = r2.image;
      } else {
        nr.kind = CopyRule::Kind::Relabel;
        nr.target_copy = r2.target_copy;
        if (inner.src->oracle->is_finite()) {
          if (r.elem_map.empty() && r2.elem_map.empty()) {
            /* both identity maps */
          } else {
            int n = inner.src->oracle->order();
            nr.elem_map.resize(static_cast<std::size_t>(n));
            for (int g = 0; g < n; ++g) {
              int mid = r.elem_map.empty() ? g : r.elem_map[static_cast<std::size_t>(g)];
              nr.elem_map[static_cast<std::size_t>(g)] =
                  r2.elem_map.empty() ? mid : r2.elem_map[static_cast<std::size_t>(mid)];
            }
          }
        }
      }
    }
    out.rules.push_back(std::move(nr));
  }
  out.validate();
  return out;
}

GeneratorMap map_from_images(ContextPtr src, ContextPtr dst, std::vector<Word> images) {
  GeneratorMap m;
  m.src = std::move(src);
  m.dst = std::move(dst);
  for (auto& w : images) {
    CopyRule r;
    r.kind = CopyRule::Kind::Image;
    r.image = std::move(w);
    m.rules.push_back(std::move(r));
  }
  m.validate();
  return m;
}

GeneratorMap identity_map(ContextPtr ctx) {
  GeneratorMap m;
  m.src = ctx;
  m.dst = ctx;
  for (int c = 0; c < ctx->copies; ++c) {
    CopyRule r;
    r.kind = CopyRule::Kind::Relabel;
    r.target_copy = c;
    m.rules.push_back(std::move(r));
  }
  m.validate();
  return m;
}

bool SubgroupSpec::contains(const Word& w) const {
  if (!kernel_of)
    throw SymringError("subgroup '" + name + "' has no membership oracle");
  return kernel_of->apply(w).is_identity();
}

void SubgroupSpec::validate() const {
  if (kernel_of) {
    kernel_of->validate();
    for (const auto& g : normal_gens)
      if (!contains(g))
        throw SymringError("normal generator " + format_word(g) +
                           " escapes subgroup '" + name + "'");
  }
}

std::vector<CommutatorWitness> symmetric_commutator_witnesses(
    const std::vector<SubgroupSpec>& specs, int depth, int count) {
  if (specs.empty() || count <= 0) return {};
  ContextPtr ctx = specs[0].ctx;
  int n = static_cast<int>(specs.size());
  std::vector<Word> conjs = enumerate_ball(ctx, depth);

  std::vector<std::vector<int>> perms;
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  do {
    perms.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  /* Per-position option list: (generator index, conjugator index), ordered by
     conjugator first so identity conjugators come first. */
  auto options_for = [&](int spec_index) {
    std::vector<std::pair<int, int>> opts;
    int g = static_cast<int>(specs[static_cast<std::size_t>(spec_index)].normal_gens.size());
    for (int c = 0; c < static_cast<int>(conjs.size()); ++c)
      for (int gi = 0; gi < g; ++gi) opts.push_back({gi, c});
    return opts;
  };

  struct Odometer {
    std::vector<std::vector<std::pair<int, int>>> opts;
    std::vector<std::size_t> pos;
    bool done = false;
    bool advance() {
      for (std::size_t i = pos.size(); i-- > 0;) {
        if (++pos[i] < opts[i].size()) return true;
        pos[i] = 0;
      }
      done = true;
      return false;
    }
  };

  std::vector<Odometer> wheels;
  for (const auto& p : perms) {
    Odometer od;
    for (int i = 0; i < n; ++i) od.opts.push_back(options_for(p[i]));
    od.pos.assign(static_cast<std::size_t>(n), 0);
    for (const auto& o : od.opts)
      if (o.empty()) od.done = true;
    wheels.push_back(std::move(od));
  }

  std::vector<CommutatorWitness> out;
  bool any_alive = true;
  while (static_cast<int>(out.size()) < count && any_alive) {
    any_alive = false;
    for (std::size_t pi = 0; pi < perms.size(); ++pi) {
      Odometer& od = wheels[pi];
      if (od.done) continue;
      any_alive = true;
      CommutatorWitness w;
      std::vector<Word> parts;
      for (int i = 0; i < n; ++i) {
        auto [gi, ci] = od.opts[static_cast<std::size_t>(i)][od.pos[static_cast<std::size_t>(i)]];
        int si = perms[pi][static_cast<std::size_t>(i)];
        const Word& gen = specs[static_cast<std::size_t>(si)].normal_gens[static_cast<std::size_t>(gi)];
        const Word& conj = conjs[static_cast<std::size_t>(ci)];
        w.entries.push_back({si, gi, conj});
        parts.push_back(conjugate(gen, conj));
      }
      w.value = left_normed_commutator(parts);
      out.push_back(std::move(w));
      od.advance();
      if (static_cast<int>(out.size()) >= count) break;
    }
  }
  return out;
}

}  // namespace symring
