#include "symring/ideals.hpp"

#include "symring/parallel.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

namespace symring {

namespace {

/* Window columns live above every lazily numbered outside column. */
constexpr int kWindowColBase = 1 << 30;

void require_kernel(const SubgroupSpec& spec) {
  if (!spec.has_membership())
    throw SymringError("subgroup '" + spec.name + "' has no kernel presentation");
}

/* Window words grouped by their transport image. rep = last window index in
   the fiber, so difference rows come out already in Hermite form. */
struct FiberData {
  std::vector<int> fiber_of;  // per window index
  std::vector<int> rep;       // per fiber, window index of representative
  int count = 0;
};

FiberData transport_fibers(const GeneratorMap& h, const BasisWindow& window) {
  FiberData f;
  f.fiber_of.resize(window.dim());
  std::map<Word, int, WordLess> ids;
  for (int i = 0; i < window.dim(); ++i) {
    Word img = h.apply(window.words[i]);
    auto [it, fresh] = ids.emplace(std::move(img), f.count);
    if (fresh) {
      f.rep.push_back(i);
      ++f.count;
    } else {
      f.rep[it->second] = i;
    }
    f.fiber_of[i] = it->second;
  }
  return f;
}

IntMat fiber_indicator(const FiberData& f) {
  IntMat d = IntMat::Zero(static_cast<int>(f.fiber_of.size()), f.count);
  for (std::size_t i = 0; i < f.fiber_of.size(); ++i) d(static_cast<int>(i), f.fiber_of[i]) = 1;
  return d;
}

TruncatedLattice difference_lattice(const FiberData& f, int dim) {
  TruncatedLattice l;
  l.dim = dim;
  int rank = dim - f.count;
  l.basis = IntMat::Zero(rank, dim);
  l.pivots.reserve(rank);
  int row = 0;
  for (int i = 0; i < dim; ++i) {
    if (f.rep[f.fiber_of[i]] == i) continue;
    l.basis(row, i) = 1;
    l.basis(row, f.rep[f.fiber_of[i]]) = -1;
    l.pivots.push_back(i);
    ++row;
  }
  return l;
}

}  // namespace

TruncatedLattice augmentation_lattice(const BasisWindow& window) {
  FiberData f;
  f.count = 1;
  f.fiber_of.assign(window.dim(), 0);
  f.rep = {window.dim() - 1};
  return difference_lattice(f, window.dim());
}

TruncatedLattice exact_ideal_lattice(const SubgroupSpec& spec, const BasisWindow& window) {
  require_kernel(spec);
  if (!same_context(*spec.ctx, *window.ctx))
    throw SymringError("ideal lattice: context mismatch");
  return difference_lattice(transport_fibers(*spec.kernel_of, window), window.dim());
}

TruncatedLattice exact_ideal_lattice_dense(const SubgroupSpec& spec,
                                           const BasisWindow& window) {
  require_kernel(spec);
  return lattice_from_rows(kernel(fiber_indicator(transport_fibers(*spec.kernel_of, window))),
                           window.dim());
}

TruncatedLattice exact_intersection_lattice(const std::vector<SubgroupSpec>& specs,
                                            const BasisWindow& window) {
  if (specs.empty()) throw SymringError("intersection of no ideals");
  TruncatedLattice l = exact_ideal_lattice(specs[0], window);
  for (std::size_t i = 1; i < specs.size(); ++i) {
    require_kernel(specs[i]);
    l = lattice_intersect_kernel(l, fiber_indicator(transport_fibers(*specs[i].kernel_of, window)));
  }
  return l;
}

ProductExpr ProductExpr::ordered(std::vector<int> seq) {
  ProductExpr e;
  e.orders.push_back(std::move(seq));
  return e;
}

ProductExpr ProductExpr::symmetric_of(std::vector<int> indices) {
  std::sort(indices.begin(), indices.end());
  ProductExpr e;
  do {
    e.orders.push_back(indices);
  } while (std::next_permutation(indices.begin(), indices.end()));
  return e;
}

ProductExpr ProductExpr::symmetric(int n) {
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  return symmetric_of(std::move(idx));
}

RingElement certificate_row_value(const CertRow& row) {
  RingElement acc = re_word(row.left.ctx, row.left, row.coeff);
  for (const CertBracket& b : row.brackets)
    acc = re_mul(acc, re_word_minus_one(b.member));
  return re_mul(acc, re_word(row.right.ctx, row.right));
}

CertificateCheck verify_certificate(const Certificate& cert,
                                    const std::vector<SubgroupSpec>* specs) {
  CertificateCheck out;
  auto fail = [&out](std::string msg) { out.errors.push_back(std::move(msg)); };

  /* No rows is fine: the empty combination certifies the zero element. */
  RingElement sum = re_zero(cert.ctx);
  for (std::size_t r = 0; r < cert.rows.size(); ++r) {
    const CertRow& row = cert.rows[r];
    std::string tag = "row " + std::to_string(r) + ": ";
    if (row.coeff == 0) fail(tag + "zero coefficient");
    std::vector<int> seq;
    for (const CertBracket& b : row.brackets) {
      seq.push_back(b.ideal_index);
      if (b.ideal_index < 0 ||
          b.ideal_index >= static_cast<int>(cert.ideal_names.size())) {
        fail(tag + "ideal index out of range");
        continue;
      }
      if (b.member.is_identity()) fail(tag + "identity bracket member");
      if (specs) {
        if (b.ideal_index >= static_cast<int>(specs->size()))
          fail(tag + "ideal index beyond supplied subgroups");
        else if (!(*specs)[b.ideal_index].contains(b.member))
          fail(tag + "bracket member " + format_word(b.member) + " is not in " +
               (*specs)[b.ideal_index].name);
      }
    }
    if (std::find(cert.expression.begin(), cert.expression.end(), seq) ==
        cert.expression.end())
      fail(tag + "bracket sequence not admissible for the expression");
    sum = re_add(sum, certificate_row_value(row));
  }
  if (!re_equal(sum, cert.target))
    fail("row sum " + format_ring(sum) + " differs from target " +
         format_ring(cert.target));
  out.valid = out.errors.empty();
  return out;
}

namespace {

/* Flat description of one generator tuple; indices into the shared ball and
   the per-position generator lists. */
struct TupleJob {
  int order_idx = 0;
  int u = 0, v = 0;
  std::vector<int> g;  // normal-generator index per bracket
  std::vector<int> t;  // ball index per gap
};

}  // namespace

CertRow InnerProductLattice::gen_to_row(const Gen& g, const Int& coeff) const {
  std::size_t m = g.gs.size();
  CertRow row;
  row.coeff = coeff;
  row.right = g.v;
  row.brackets.resize(m);
  Word suffix = identity_word(ctx_);
  for (std::size_t j = m; j-- > 0;) {
    row.brackets[j].member = conjugate(g.gs[j], suffix);
    row.brackets[j].ideal_index = g.order[j];
    if (j > 0) suffix = multiply(g.ts[j - 1], suffix);
  }
  row.left = multiply(g.u, suffix);
  return row;
}

bool InnerProductLattice::contains(const RingElement& x) const {
  return lattice_.contains(vectorize(x, window_));
}

std::optional<Certificate> InnerProductLattice::certify(const RingElement& x) const {
  if (!tracked_) throw SymringError("inner lattice built without tracking");
  SparseVec v;
  for (const auto& [w, c] : x.terms) {
    int idx = window_.index_of(w);
    if (idx < 0) throw SupportEscape(format_word(w));
    v.emplace_back(kWindowColBase + idx, c);
  }
  auto combo = echelon_.membership_combo(std::move(v));
  if (!combo) return std::nullopt;
  Certificate cert;
  cert.ctx = ctx_;
  cert.ideal_names = ideal_names_;
  cert.expression = expression_;
  cert.target = x;
  for (const auto& [gen_idx, coeff] : *combo)
    cert.rows.push_back(gen_to_row(gens_[gen_idx], coeff));
  return cert;
}

InnerProductLattice inner_product_lattice(const std::vector<SubgroupSpec>& specs,
                                          const ProductExpr& expr,
                                          const BasisWindow& window,
                                          const InnerProductOptions& opts) {
  if (expr.orders.empty()) throw SymringError("empty product expression");
  for (const auto& order : expr.orders) {
    if (order.empty()) throw SymringError("empty product order");
    for (int i : order)
      if (i < 0 || i >= static_cast<int>(specs.size()))
        throw SymringError("product order references missing ideal");
  }
  for (const auto& s : specs) {
    if (!same_context(*s.ctx, *window.ctx))
      throw SymringError("inner product: context mismatch for " + s.name);
    if (s.normal_gens.empty())
      throw SymringError("inner product: " + s.name + " has no normal generators");
    for (const Word& g : s.normal_gens)
      if (g.is_identity())
        throw SymringError("inner product: identity normal generator in " + s.name);
  }

  if (opts.budget < window.radius)
    throw SymringError("inner product: budget below window radius");

  InnerProductLattice out;
  out.window_ = window;
  out.ctx_ = window.ctx;
  out.budget_ = opts.budget;
  out.expression_ = expr.orders;
  out.tracked_ = opts.track;
  out.echelon_ = SparseEchelon(opts.track);
  out.window_col_base_ = kWindowColBase;
  for (const auto& s : specs) out.ideal_names_.push_back(s.name);

  std::size_t cap = opts.max_cells ? opts.max_cells : default_max_cells();

  std::vector<long long> min_gen(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    long long m = specs[i].normal_gens[0].norm();
    for (const Word& g : specs[i].normal_gens) m = std::min(m, g.norm());
    min_gen[i] = m;
  }

  /* Shared ball for u, t_j, v; never needs more than the slack left after
     the cheapest generator choice in every bracket. */
  long long min_total = 0;
  for (int i : expr.orders[0]) min_total += min_gen[i];
  int free_radius = static_cast<int>(std::max<long long>(0, opts.budget - min_total));
  std::vector<Word> ball = enumerate_ball(window.ctx, free_radius, cap);
  std::vector<long long> ball_norm(ball.size());
  for (std::size_t i = 0; i < ball.size(); ++i) ball_norm[i] = ball[i].norm();

  /* Deterministic tuple stream: orders as listed, then lexicographic in
     (u, g_1, t_1, ..., g_m, v) with balls in canonical order. */
  std::vector<TupleJob> jobs;
  for (std::size_t oi = 0; oi < expr.orders.size(); ++oi) {
    const auto& order = expr.orders[oi];
    int m = static_cast<int>(order.size());
    std::vector<long long> suffix_min(m + 1, 0);
    for (int j = m - 1; j >= 0; --j) suffix_min[j] = suffix_min[j + 1] + min_gen[order[j]];

    TupleJob job;
    job.order_idx = static_cast<int>(oi);
    job.g.assign(m, 0);
    job.t.assign(std::max(0, m - 1), 0);

    /* pos: 0 = u, then alternating bracket j / gap j, last = v. */
    auto rec = [&](auto&& self, int j, long long used) -> void {
      if (j == m) {
        for (std::size_t vi = 0; vi < ball.size(); ++vi) {
          if (used + ball_norm[vi] > opts.budget) break;
          job.v = static_cast<int>(vi);
          if (jobs.size() >= cap)
            throw SymringError("cell cap: generator tuples exceed " + std::to_string(cap));
          jobs.push_back(job);
        }
        return;
      }
      const auto& gens = specs[order[j]].normal_gens;
      for (std::size_t gi = 0; gi < gens.size(); ++gi) {
        long long after_g = used + gens[gi].norm();
        if (after_g + suffix_min[j + 1] > opts.budget) continue;
        job.g[j] = static_cast<int>(gi);
        if (j + 1 == m) {
          self(self, j + 1, after_g);
        } else {
          for (std::size_t ti = 0; ti < ball.size(); ++ti) {
            if (after_g + ball_norm[ti] + suffix_min[j + 1] > opts.budget) break;
            job.t[j] = static_cast<int>(ti);
            self(self, j + 1, after_g + ball_norm[ti]);
          }
        }
      }
    };
    for (std::size_t ui = 0; ui < ball.size(); ++ui) {
      if (ball_norm[ui] + suffix_min[0] > opts.budget) break;
      job.u = static_cast<int>(ui);
      rec(rec, 0, ball_norm[ui]);
    }
  }

  out.gen_total_ = jobs.size();

  /* Expand every tuple into its ring value; slots keep the result order
     independent of the thread count. */
  std::vector<RingElement> values(jobs.size());
  parallel_for_indices(jobs.size(), opts.threads, [&](std::size_t i) {
    const TupleJob& job = jobs[i];
    const auto& order = expr.orders[job.order_idx];
    RingElement acc = re_word(window.ctx, ball[job.u]);
    for (std::size_t j = 0; j < order.size(); ++j) {
      acc = re_mul(acc, re_word_minus_one(specs[order[j]].normal_gens[job.g[j]]));
      if (j + 1 < order.size())
        acc = re_mul(acc, re_word(window.ctx, ball[job.t[j]]));
    }
    values[i] = re_mul(acc, re_word(window.ctx, ball[job.v]));
  });

  std::unordered_map<Word, int, WordHash> outside;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (values[i].is_zero()) continue;
    SparseVec sv;
    sv.reserve(values[i].terms.size());
    for (const auto& [w, c] : values[i].terms) {
      int idx = window.index_of(w);
      int col = idx >= 0 ? kWindowColBase + idx
                         : outside.emplace(w, static_cast<int>(outside.size()))
                               .first->second;
      sv.emplace_back(col, c);
    }
    std::sort(sv.begin(), sv.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    out.echelon_.insert(std::move(sv));
    if (opts.track) {
      const TupleJob& job = jobs[i];
      const auto& order = expr.orders[job.order_idx];
      InnerProductLattice::Gen gen;
      gen.order = order;
      gen.u = ball[job.u];
      gen.v = ball[job.v];
      for (std::size_t j = 0; j < job.g.size(); ++j)
        gen.gs.push_back(specs[order[j]].normal_gens[job.g[j]]);
      for (int ti : job.t) gen.ts.push_back(ball[ti]);
      out.gens_.push_back(std::move(gen));
    }
  }

  out.lattice_ = lattice_from_rows(
      out.echelon_.slice_dense(kWindowColBase, kWindowColBase + window.dim()),
      window.dim());
  return out;
}

Certificate commutator_certificate(const std::vector<std::pair<int, Word>>& entries,
                                   const std::vector<std::string>& ideal_names) {
  if (entries.empty()) throw SymringError("empty commutator certificate");
  ContextPtr ctx = entries[0].second.ctx;

  std::vector<CertRow> rows;
  CertRow first;
  first.coeff = 1;
  first.left = identity_word(ctx);
  first.right = identity_word(ctx);
  first.brackets = {CertBracket{entries[0].second, entries[0].first}};
  rows.push_back(std::move(first));
  Word cur = entries[0].second;

  for (std::size_t k = 1; k < entries.size(); ++k) {
    const Word& w = entries[k].second;
    int idx = entries[k].first;
    /* [c,w] - 1 = c^-1 w^-1 ((c-1)(w-1) - (w-1)(c-1)). */
    Word pre = multiply(inverse(cur), inverse(w));
    std::vector<CertRow> next;
    next.reserve(rows.size() * 2);
    for (const CertRow& r : rows) {
      CertRow a = r;  // r * (w-1), the w bracket folded past `right`
      a.left = multiply(pre, a.left);
      a.brackets.push_back(CertBracket{conjugate(w, inverse(r.right)), idx});
      next.push_back(std::move(a));
    }
    for (const CertRow& r : rows) {
      CertRow b = r;  // (w-1) * r, the w bracket folded past `left`
      b.coeff = -b.coeff;
      b.brackets.insert(b.brackets.begin(), CertBracket{conjugate(w, r.left), idx});
      b.left = multiply(pre, b.left);
      next.push_back(std::move(b));
    }
    rows = std::move(next);
    cur = commutator(cur, w);
  }

  Certificate cert;
  cert.ctx = ctx;
  cert.ideal_names = ideal_names;
  std::vector<int> indices;
  for (const auto& [i, w] : entries) indices.push_back(i);
  cert.expression = ProductExpr::symmetric_of(std::move(indices)).orders;
  cert.target = re_word_minus_one(cur);
  cert.rows = std::move(rows);
  return cert;
}

namespace {

/* Two-sided closure of seed vectors inside the finite group ring. */
TruncatedLattice two_sided_closure(std::vector<RingElement> seeds,
                                   const BasisWindow& qw) {
  SparseEchelon ech(false);
  std::deque<RingElement> pending(seeds.begin(), seeds.end());
  while (!pending.empty()) {
    RingElement x = std::move(pending.front());
    pending.pop_front();
    IntVec v = vectorize(x, qw);
    if (!ech.insert(sparse_from_dense(v))) continue;
    for (const Word& a : qw.words) {
      if (a.is_identity()) continue;
      RingElement wa = re_word(qw.ctx, a);
      pending.push_back(re_mul(wa, x));
      pending.push_back(re_mul(x, wa));
    }
  }
  return lattice_from_rows(ech.to_dense(qw.dim()), qw.dim());
}

}  // namespace

TruncatedLattice finite_ideal_lattice(const SubgroupSpec& spec, const GeneratorMap& h,
                                      const BasisWindow& quotient_window) {
  if (!same_context(*h.dst, *quotient_window.ctx))
    throw SymringError("finite ideal: window context mismatch");
  std::vector<RingElement> seeds;
  for (const Word& g : spec.normal_gens)
    seeds.push_back(re_word_minus_one(h.apply(g)));
  return two_sided_closure(std::move(seeds), quotient_window);
}

TruncatedLattice finite_product_lattice(const std::vector<SubgroupSpec>& specs,
                                        const ProductExpr& expr, const GeneratorMap& h,
                                        const BasisWindow& quotient_window) {
  const BasisWindow& qw = quotient_window;
  std::map<int, TruncatedLattice> ideal;
  for (const auto& order : expr.orders)
    for (int i : order)
      if (!ideal.count(i)) ideal.emplace(i, finite_ideal_lattice(specs[i], h, qw));

  TruncatedLattice total;
  total.dim = qw.dim();
  bool started = false;
  for (const auto& order : expr.orders) {
    IntMat cur = ideal.at(order[0]).basis;
    for (std::size_t j = 1; j < order.size(); ++j) {
      const IntMat& nxt = ideal.at(order[j]).basis;
      IntMat prod(cur.rows() * nxt.rows(), qw.dim());
      for (int a = 0; a < cur.rows(); ++a) {
        RingElement xa = devectorize(cur.row(a), qw);
        for (int b = 0; b < nxt.rows(); ++b)
          prod.row(a * nxt.rows() + b) =
              vectorize(re_mul(xa, devectorize(nxt.row(b), qw)), qw);
      }
      cur = hnf(std::move(prod));
    }
    TruncatedLattice term = lattice_from_rows(std::move(cur), qw.dim());
    total = started ? lattice_sum(total, term) : std::move(term);
    started = true;
  }
  return total;
}

std::vector<QuotientProbe> default_quotient_schedule(const ContextPtr& free_ctx) {
  if (free_ctx->oracle->is_finite())
    throw SymringError("quotient schedule needs a free ambient group");
  int r = free_ctx->copies;

  auto power_probe = [&](const std::string& base) {
    OraclePtr p = GroupOracle::by_name(base);
    std::vector<int> gens = {1};
    for (int i = 1; i < r; ++i) {
      OraclePtr f = GroupOracle::by_name(base);
      int nf = f->order();
      for (int& g : gens) g *= nf;
      gens.push_back(1);
      p = GroupOracle::direct_product(p, f);
    }
    auto named = std::make_shared<GroupOracle>(*p);
    named->name = r == 1 ? base : "(" + base + ")^" + std::to_string(r);
    ContextPtr dst = make_finite_context(named);
    std::vector<Word> images;
    for (int g : gens) images.push_back(make_word(dst, {{0, g}}));
    QuotientProbe probe;
    probe.name = named->name;
    probe.hom = map_from_images(free_ctx, dst, std::move(images));
    probe.hom.validate();
    return probe;
  };

  std::vector<QuotientProbe> probes;
  probes.push_back(power_probe("Z/2"));
  probes.push_back(power_probe("Z/4"));
  if (r == 2) {
    auto named_probe = [&](const std::string& name, const std::string& g1,
                           const std::string& g2) {
      OraclePtr o = GroupOracle::by_name(name);
      ContextPtr dst = make_finite_context(o);
      std::vector<Word> images = {make_word(dst, {{0, o->element_index(g1)}}),
                                  make_word(dst, {{0, o->element_index(g2)}})};
      QuotientProbe probe;
      probe.name = name;
      probe.hom = map_from_images(free_ctx, dst, std::move(images));
      probe.hom.validate();
      return probe;
    };
    probes.push_back(named_probe("D4", "r", "s"));
    probes.push_back(named_probe("Q8", "i", "j"));
  }
  return probes;
}

MembershipVerdict d_subgroup_test(const Word& g, const std::vector<SubgroupSpec>& specs,
                                  const ProductExpr& expr, const DSubgroupOptions& opts) {
  MembershipVerdict verdict;
  RingElement x = re_word_minus_one(g);
  if (x.is_zero()) {
    /* g = 1: the zero element sits in every lattice, empty combination. */
    verdict.status = MembershipStatus::In;
    Certificate cert;
    cert.ctx = g.ctx;
    for (const auto& s : specs) cert.ideal_names.push_back(s.name);
    cert.expression = expr.orders;
    cert.target = x;
    verdict.certificate = std::move(cert);
    return verdict;
  }
  int radius = std::max<int>(opts.window_radius, static_cast<int>(g.norm()));
  BasisWindow window = make_window(g.ctx, radius, opts.max_cells);

  for (int budget : opts.budget_schedule) {
    if (budget < radius) continue;  // tuples of norm < |g| cannot reach g's term
    InnerProductOptions io;
    io.budget = budget;
    io.track = true;
    io.max_cells = opts.max_cells;
    io.threads = opts.threads;
    InnerProductLattice inner = inner_product_lattice(specs, expr, window, io);
    if (inner.contains(x)) {
      verdict.status = MembershipStatus::In;
      verdict.certificate = inner.certify(x);
      verdict.budget_used = budget;
      return verdict;
    }
  }

  std::vector<QuotientProbe> probes =
      opts.quotients.empty() ? default_quotient_schedule(g.ctx) : opts.quotients;
  for (const QuotientProbe& probe : probes) {
    BasisWindow qw = make_window(probe.hom.dst, 1);
    RingElement xq = re_apply(probe.hom, x);
    if (xq.is_zero()) continue;
    TruncatedLattice l = finite_product_lattice(specs, expr, probe.hom, qw);
    if (!l.contains(vectorize(xq, qw))) {
      verdict.status = MembershipStatus::Out;
      verdict.quotient = probe.name;
      return verdict;
    }
  }
  return verdict;
}

std::vector<int> default_budget_schedule(int window_radius) {
  std::vector<int> out;
  for (int m = window_radius; m <= 2 * window_radius + 2; ++m) out.push_back(m);
  return out;
}

namespace {

void check_disjoint_blocks(const std::vector<SubgroupSpec>& specs) {
  std::vector<std::set<int>> blocks;
  for (const auto& s : specs) {
    std::set<int> b;
    for (const Word& g : s.normal_gens)
      for (const Syllable& syl : g.syllables) b.insert(syl.copy);
    blocks.push_back(std::move(b));
  }
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (std::size_t j = i + 1; j < blocks.size(); ++j)
      for (int c : blocks[i])
        if (blocks[j].count(c))
          throw SymringError("generator blocks of " + specs[i].name + " and " +
                             specs[j].name + " share copy " + std::to_string(c));
}

struct SweepData {
  TruncatedLattice exact;
  TruncatedLattice inner;
  std::vector<SweepStep> steps;
  bool saturated = false;
  int saturated_at = -1;
};

/* The containment check against the exact intersection is only sound when
   every order multiplies every ideal, so the sweep insists on that. */
SweepData run_sweep(const std::vector<SubgroupSpec>& specs, const ProductExpr& expr,
                    const BasisWindow& window, const SweepOptions& opts,
                    bool invariants, bool stop_at_equal) {
  for (const auto& order : expr.orders)
    for (std::size_t i = 0; i < specs.size(); ++i)
      if (std::find(order.begin(), order.end(), static_cast<int>(i)) == order.end())
        throw SymringError("sweep order misses ideal " + specs[i].name);
  if (opts.require_disjoint_blocks) check_disjoint_blocks(specs);

  SweepData out;
  out.exact = exact_intersection_lattice(specs, window);
  std::vector<int> budgets =
      opts.budgets.empty() ? default_budget_schedule(window.radius) : opts.budgets;
  for (int budget : budgets) {
    InnerProductOptions io;
    io.budget = budget;
    io.max_cells = opts.max_cells;
    io.threads = opts.threads;
    InnerProductLattice inner = inner_product_lattice(specs, expr, window, io);
    if (!out.exact.contains_lattice(inner.lattice()))
      throw SymringError("inner product lattice escapes the exact intersection");
    SweepStep step;
    step.budget = budget;
    step.generators = inner.generator_count();
    step.inner_rank = inner.lattice().rank();
    step.equals_exact = inner.lattice().equals(out.exact);
    if (invariants) {
      QuotientInvariants qi = quotient_invariants(out.exact, inner.lattice());
      step.free_rank = qi.free_rank;
      step.torsion = qi.torsion;
    }
    out.inner = inner.lattice();
    if (step.equals_exact && !out.saturated) {
      out.saturated = true;
      out.saturated_at = budget;
    }
    out.steps.push_back(std::move(step));
    if (out.saturated && stop_at_equal) break;
  }
  if (out.steps.empty()) throw SymringError("empty budget schedule");
  return out;
}

}  // namespace

SaturationResult saturation_verify(const std::vector<SubgroupSpec>& specs,
                                   const ProductExpr& expr, const BasisWindow& window,
                                   const SweepOptions& opts) {
  SweepData d = run_sweep(specs, expr, window, opts, false, true);
  SaturationResult out;
  out.window_radius = window.radius;
  out.exact = std::move(d.exact);
  out.inner = std::move(d.inner);
  out.steps = std::move(d.steps);
  out.saturated = d.saturated;
  out.saturated_at = d.saturated_at;
  return out;
}

QReport q_invariants_report(const std::vector<SubgroupSpec>& specs,
                            const ProductExpr& expr, const BasisWindow& window,
                            const SweepOptions& opts) {
  SweepData d = run_sweep(specs, expr, window, opts, true, false);
  QReport out;
  out.window_radius = window.radius;
  out.exact_rank = d.exact.rank();
  out.steps = std::move(d.steps);
  out.saturated = d.saturated;
  out.saturated_at = d.saturated_at;
  const SweepStep& last = out.steps.back();
  out.free_rank = last.free_rank;
  out.torsion = last.torsion;
  if (out.steps.size() >= 2) {
    const SweepStep& prev = out.steps[out.steps.size() - 2];
    out.stabilized = prev.free_rank == last.free_rank && prev.torsion == last.torsion;
  }
  out.semantics =
      "exact numerator / inner denominator; torsion shown is an upper quotient, "
      "free rank is evidence-level unless saturated";
  return out;
}

HurewiczClass hurewicz_class(const Word& g, const std::vector<SubgroupSpec>& specs,
                             const BasisWindow& window, const InnerProductOptions& opts) {
  for (const auto& s : specs)
    if (!s.contains(g))
      throw SymringError("witness " + format_word(g) + " is not in " + s.name);
  IntVec v = vectorize(re_word_minus_one(g), window);
  TruncatedLattice exact = exact_intersection_lattice(specs, window);
  InnerProductLattice inner = inner_product_lattice(
      specs, ProductExpr::symmetric(static_cast<int>(specs.size())), window, opts);
  if (!exact.contains_lattice(inner.lattice()))
    throw SymringError("inner product lattice escapes the exact intersection");
  QuotientClassifier cls = make_classifier(std::move(exact), inner.lattice());
  auto coords = cls.class_coords(v);
  if (!coords)
    throw SymringError("class of " + format_word(g) + " escapes the window lattice");
  HurewiczClass out;
  out.moduli = cls.moduli();
  out.coords = std::move(*coords);
  out.zero = std::all_of(out.coords.begin(), out.coords.end(),
                         [](const Int& c) { return c == 0; });
  return out;
}

namespace {

std::vector<Word> letter_prefixes(const Word& w) {
  std::vector<Word> out;
  std::vector<Syllable> acc;
  for (const Syllable& s : w.syllables) {
    if (w.ctx->oracle->is_finite()) {
      out.push_back(make_word(w.ctx, acc));
      acc.push_back(s);
    } else {
      long long step = s.elem > 0 ? 1 : -1;
      for (long long k = 0; k != s.elem; k += step) {
        std::vector<Syllable> part = acc;
        if (k != 0) part.push_back(Syllable{s.copy, k});
        out.push_back(make_word(w.ctx, part));
      }
      acc.push_back(s);
    }
  }
  return out;  // proper prefixes only
}

}  // namespace

std::vector<Word> schreier_transversal(const SubgroupSpec& spec, int max_index,
                                       int max_radius) {
  require_kernel(spec);
  const GeneratorMap& h = *spec.kernel_of;
  std::vector<Word> reps;
  std::set<Word, WordLess> images;
  for (const Word& w : enumerate_ball(spec.ctx, max_radius)) {
    if (!images.insert(h.apply(w)).second) continue;
    reps.push_back(w);
    if (static_cast<int>(reps.size()) > max_index)
      throw SymringError("transversal: index exceeds " + std::to_string(max_index));
  }
  std::set<Word, WordLess> rep_set(reps.begin(), reps.end());
  for (const Word& rep : reps)
    for (const Word& p : letter_prefixes(rep))
      if (!rep_set.count(p))
        throw SymringError("transversal not prefix-closed at " + format_word(rep));
  return reps;
}

std::pair<Word, Word> coset_decompose(const SubgroupSpec& spec,
                                      const std::vector<Word>& transversal,
                                      const Word& g) {
  require_kernel(spec);
  Word img = spec.kernel_of->apply(g);
  for (const Word& t : transversal) {
    if (spec.kernel_of->apply(t) == img) {
      Word s = multiply(inverse(t), g);  // g = t*s with s in the subgroup
      if (!spec.contains(s))
        throw SymringError("coset decomposition produced an outside remainder");
      return {t, s};
    }
  }
  throw SymringError("no transversal representative for " + format_word(g));
}

}  // namespace symring
