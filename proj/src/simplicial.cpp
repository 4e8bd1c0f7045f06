#include "symring/simplicial.hpp"

#include "symring/parallel.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace symring {

ContextPtr level_context(OraclePtr oracle, int k) {
  if (oracle->is_finite()) return make_product_context(std::move(oracle), k);
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) labels.push_back("x" + std::to_string(i));
  return make_free_context(std::move(labels));
}

GeneratorMap face_map(OraclePtr oracle, int k, int j) {
  if (k < 1 || j < 0 || j > k) throw SymringError("face index out of range");
  GeneratorMap m;
  m.src = level_context(oracle, k);
  m.dst = level_context(oracle, k - 1);
  for (int i = 0; i < k; ++i) {
    CopyRule r;
    int target = i < j ? i : i - 1;
    if (target < 0 || target > k - 2) {
      r.kind = CopyRule::Kind::Kill;
    } else {
      r.kind = CopyRule::Kind::Relabel;
      r.target_copy = target;
    }
    m.rules.push_back(r);
  }
  m.validate();
  return m;
}

GeneratorMap degeneracy_map(OraclePtr oracle, int k, int j) {
  if (j < 0 || j > k) throw SymringError("degeneracy index out of range");
  GeneratorMap m;
  m.src = level_context(oracle, k);
  m.dst = level_context(oracle, k + 1);
  for (int i = 0; i < k; ++i) {
    CopyRule r;
    r.kind = CopyRule::Kind::Relabel;
    r.target_copy = i >= j ? i + 1 : i;
    m.rules.push_back(r);
  }
  m.validate();
  return m;
}

namespace {

/* Generator words of the level: one per copy (free) or one per non-identity
   element per copy (finite). */
std::vector<Word> level_generators(const ContextPtr& ctx) {
  std::vector<Word> out;
  const GroupOracle& o = *ctx->oracle;
  for (int c = 0; c < ctx->copies; ++c) {
    if (o.is_finite()) {
      for (int g = 0; g < o.order(); ++g)
        if (g != o.identity) out.push_back(make_word(ctx, {{c, g}}));
    } else {
      out.push_back(make_word(ctx, {{c, 1}}));
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> verify_simplicial_identities(OraclePtr oracle, int max_level) {
  std::vector<std::string> failures;
  auto check = [&](const GeneratorMap& lhs_outer, const GeneratorMap& lhs_inner,
                   const GeneratorMap& rhs_outer, const GeneratorMap& rhs_inner,
                   const std::string& what) {
    for (const Word& g : level_generators(lhs_inner.src)) {
      Word l = lhs_outer.apply(lhs_inner.apply(g));
      Word r = rhs_outer.apply(rhs_inner.apply(g));
      if (!(l == r))
        failures.push_back(what + " fails on " + format_word(g) + ": " +
                           format_word(l) + " vs " + format_word(r));
    }
  };

  for (int k = 2; k <= max_level; ++k)
    for (int j = 1; j <= k; ++j)
      for (int i = 0; i < j; ++i)
        check(face_map(oracle, k - 1, i), face_map(oracle, k, j),
              face_map(oracle, k - 1, j - 1), face_map(oracle, k, i),
              "d" + std::to_string(i) + " d" + std::to_string(j) + " level " +
                  std::to_string(k));

  for (int k = 0; k + 2 <= max_level; ++k)
    for (int j = 0; j <= k; ++j)
      for (int i = 0; i <= j; ++i)
        check(degeneracy_map(oracle, k + 1, i), degeneracy_map(oracle, k, j),
              degeneracy_map(oracle, k + 1, j + 1), degeneracy_map(oracle, k, i),
              "s" + std::to_string(i) + " s" + std::to_string(j) + " level " +
                  std::to_string(k));

  for (int k = 1; k <= max_level; ++k)
    for (int j = 0; j <= k; ++j)
      for (int i = 0; i <= k + 1; ++i) {
        const std::string what = "d" + std::to_string(i) + " s" + std::to_string(j) +
                                 " level " + std::to_string(k);
        if (i == j || i == j + 1) {
          for (const Word& g : level_generators(level_context(oracle, k))) {
            Word l = face_map(oracle, k + 1, i).apply(degeneracy_map(oracle, k, j).apply(g));
            if (!(l == g))
              failures.push_back(what + " is not the identity on " + format_word(g));
          }
        } else if (i < j) {
          check(degeneracy_map(oracle, k - 1, j - 1), face_map(oracle, k, i),
                face_map(oracle, k + 1, i), degeneracy_map(oracle, k, j), what);
        } else {
          check(degeneracy_map(oracle, k - 1, j), face_map(oracle, k, i - 1),
                face_map(oracle, k + 1, i), degeneracy_map(oracle, k, j), what);
        }
      }
  return failures;
}

GeneratorMap to_y_coordinates(int k) {
  auto x_ctx = level_context(GroupOracle::integers(), k);
  std::vector<std::string> ylabels;
  for (int i = 0; i < k; ++i) ylabels.push_back("y" + std::to_string(i));
  auto y_ctx = make_free_context(std::move(ylabels));
  std::vector<Word> images;
  for (int i = 0; i < k; ++i) {
    std::vector<Syllable> syl;
    for (int j = i; j < k; ++j) syl.push_back({j, 1});
    images.push_back(make_word(y_ctx, std::move(syl)));
  }
  return map_from_images(x_ctx, y_ctx, std::move(images));
}

GeneratorMap from_y_coordinates(int k) {
  auto x_ctx = level_context(GroupOracle::integers(), k);
  std::vector<std::string> ylabels;
  for (int i = 0; i < k; ++i) ylabels.push_back("y" + std::to_string(i));
  auto y_ctx = make_free_context(std::move(ylabels));
  std::vector<Word> images;
  for (int i = 0; i < k; ++i) {
    std::vector<Syllable> syl;
    if (i == k - 1) {
      syl.push_back({k - 1, 1});
    } else {
      syl.push_back({i, 1});
      syl.push_back({i + 1, -1});
    }
    images.push_back(make_word(x_ctx, std::move(syl)));
  }
  return map_from_images(y_ctx, x_ctx, std::move(images));
}

SubgroupSpec face_kernel(OraclePtr oracle, int k, int j) {
  GeneratorMap f = face_map(oracle, k, j);
  ContextPtr ctx = f.src;
  std::vector<Word> gens;
  const GroupOracle& o = *oracle;
  auto each_elem = [&](auto&& fn) {
    if (o.is_finite()) {
      for (int g = 0; g < o.order(); ++g)
        if (g != o.identity) fn(static_cast<long long>(g));
    } else {
      fn(1ll);
    }
  };
  if (j == 0) {
    each_elem([&](long long e) { gens.push_back(make_word(ctx, {{0, e}})); });
  } else if (j == k) {
    each_elem([&](long long e) { gens.push_back(make_word(ctx, {{k - 1, e}})); });
  } else {
    /* Copies j-1 and j become equal; their pointwise differences generate. */
    each_elem([&](long long e) {
      long long einv = o.is_finite() ? o.inv(static_cast<int>(e)) : -e;
      gens.push_back(make_word(ctx, {{j - 1, e}, {j, einv}}));
    });
  }
  SubgroupSpec spec{"ker_d" + std::to_string(j) + "_level" + std::to_string(k),
                    ctx, std::move(gens), std::move(f)};
  spec.validate();
  return spec;
}

GeneratorMap level_surjection(int k, OraclePtr target, int element) {
  auto src = level_context(GroupOracle::integers(), k);
  auto dst = level_context(target, k);
  std::vector<Word> images;
  for (int i = 0; i < k; ++i)
    images.push_back(make_word(dst, {{i, static_cast<long long>(element)}}));
  return map_from_images(src, dst, std::move(images));
}

namespace {

std::vector<GeneratorMap> normalization_factors(const OraclePtr& oracle, int k) {
  std::vector<GeneratorMap> es;
  for (int j = 1; j <= k; ++j)
    es.push_back(compose(degeneracy_map(oracle, k - 1, j - 1), face_map(oracle, k, j)));
  return es;
}

RingElement project_with(const std::vector<GeneratorMap>& es, const Word& w) {
  RingElement x = re_word(w.ctx, w);
  for (auto it = es.rbegin(); it != es.rend(); ++it) {
    x = re_sub(x, re_apply(*it, x));
    if (x.is_zero()) break;
  }
  return x;
}

bool is_degenerate(const std::vector<GeneratorMap>& es, const Word& w) {
  for (const auto& e : es)
    if (e.apply(w) == w) return true;
  return false;
}

}  // namespace

RingElement moore_project(OraclePtr oracle, int k, const Word& w) {
  return project_with(normalization_factors(oracle, k), w);
}

TruncatedLattice moore_chain_lattice(OraclePtr oracle, int k, const BasisWindow& window) {
  auto es = normalization_factors(oracle, k);
  SparseEchelon ech;
  for (const Word& w : window.words) {
    if (is_degenerate(es, w)) continue;
    RingElement p = project_with(es, w);
    if (p.is_zero()) continue;
    ech.insert(sparse_from_dense(vectorize(p, window)));
  }
  return lattice_from_rows(ech.to_dense(window.dim()), window.dim());
}

TruncatedLattice moore_cycle_lattice(OraclePtr oracle, int k, const BasisWindow& window) {
  TruncatedLattice chains = moore_chain_lattice(oracle, k, window);
  GeneratorMap d0 = face_map(oracle, k, 0);
  std::map<Word, int, WordLess> cols;
  std::vector<int> col_of(static_cast<std::size_t>(window.dim()));
  for (int i = 0; i < window.dim(); ++i) {
    Word img = d0.apply(window.words[static_cast<std::size_t>(i)]);
    auto [it, fresh] = cols.emplace(img, static_cast<int>(cols.size()));
    col_of[static_cast<std::size_t>(i)] = it->second;
  }
  IntMat d = IntMat::Zero(window.dim(), static_cast<int>(cols.size()));
  for (int i = 0; i < window.dim(); ++i) d(i, col_of[static_cast<std::size_t>(i)]) = 1;
  return lattice_intersect_kernel(chains, d);
}

TruncatedLattice moore_boundary_lattice(OraclePtr oracle, int k,
                                        const BasisWindow& window, int probe_radius,
                                        std::size_t max_cells, int threads) {
  if (probe_radius < window.radius)
    throw SymringError("probe radius below the report window");
  auto up = level_context(oracle, k + 1);
  auto es = normalization_factors(oracle, k + 1);
  GeneratorMap d0 = face_map(oracle, k + 1, 0);
  std::vector<Word> probe = enumerate_ball(up, probe_radius, max_cells);

  /* Column order: target words outside the window first, window words last
     in window order; echelon rows with pivots in the trailing block then
     form an exact basis of (boundary span) cap (window span). */
  std::vector<Word> target = enumerate_ball(window.ctx, probe_radius, max_cells);
  std::unordered_map<Word, int, WordHash> col;
  col.reserve(target.size());
  int outside = 0;
  for (const Word& w : target)
    if (window.index_of(w) < 0) col.emplace(w, outside++);
  for (const Word& w : window.words) col.emplace(w, outside + window.index_of(w));
  const int total_cols = outside + window.dim();

  std::vector<SparseVec> rows(probe.size());
  parallel_for_indices(probe.size(), threads, [&](std::size_t i) {
    const Word& w = probe[i];
    if (is_degenerate(es, w)) return;
    RingElement p = project_with(es, w);
    if (p.is_zero()) return;
    RingElement b = re_apply(d0, p);
    if (b.is_zero()) return;
    SparseVec row;
    row.reserve(b.terms.size());
    for (const auto& [word, c] : b.terms) row.push_back({col.at(word), c});
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b_) { return a.first < b_.first; });
    rows[i] = std::move(row);
  });

  SparseEchelon ech;
  for (auto& r : rows)
    if (!r.empty()) ech.insert(std::move(r));
  return lattice_from_rows(ech.slice_dense(outside, total_cols), window.dim());
}

LoopSetup wu_setup(int n) {
  const int k = n + 1;
  GeneratorMap from_y = from_y_coordinates(k);
  ContextPtr y_ctx = from_y.src;
  LoopSetup out;
  out.ctx = y_ctx;
  for (int j = 0; j <= k; ++j) {
    GeneratorMap comp = compose(face_map(GroupOracle::integers(), k, j), from_y);
    std::vector<Word> gens;
    if (j == 0) {
      std::vector<Syllable> all;
      for (int i = 0; i < k; ++i) all.push_back({i, 1});
      gens.push_back(make_word(y_ctx, std::move(all)));
    } else {
      gens.push_back(make_word(y_ctx, {{j - 1, 1}}));
    }
    SubgroupSpec spec{"r" + std::to_string(j), y_ctx, std::move(gens), std::move(comp)};
    spec.validate();
    out.specs.push_back(std::move(spec));
  }
  return out;
}

std::vector<int> default_probe_schedule(int window_radius) {
  return {window_radius, window_radius + 1, window_radius + 2};
}

HomologyReport homology_report(OraclePtr oracle, int k, const BasisWindow& window,
                               std::vector<int> probe_schedule, std::size_t max_cells,
                               int threads) {
  if (probe_schedule.empty()) probe_schedule = default_probe_schedule(window.radius);
  for (int m : probe_schedule)
    if (m < window.radius) throw SymringError("probe radius below the report window");

  HomologyReport out;
  out.level = k;
  out.window_radius = window.radius;
  TruncatedLattice cycles = moore_cycle_lattice(oracle, k, window);
  out.cycle_rank = cycles.rank();

  TruncatedLattice last;
  for (int m : probe_schedule) {
    TruncatedLattice b = moore_boundary_lattice(oracle, k, window, m, max_cells, threads);
    if (!cycles.contains_lattice(b))
      throw SymringError("inner boundary escapes the cycle lattice");
    QuotientInvariants inv = quotient_invariants(cycles, b);
    out.steps.push_back({m, b.rank(), inv.free_rank, inv.torsion});
    last = std::move(b);
  }
  const HomologyStep& fin = out.steps.back();
  out.free_rank = fin.free_rank;
  out.torsion = fin.torsion;
  if (out.steps.size() >= 2) {
    const HomologyStep& prev = out.steps[out.steps.size() - 2];
    out.stabilized = prev.free_rank == fin.free_rank && prev.torsion == fin.torsion;
  }
  out.semantics =
      "cycles over inner boundaries; shown invariants are an upper quotient of "
      "the homology, stabilization is evidence, boundary memberships are "
      "certifiable";

  /* Deterministic witness: smallest-norm projected cycle outside the final
     boundary; enumeration order breaks norm ties. */
  out.witness = re_zero(window.ctx);
  QuotientClassifier cls = make_classifier(cycles, last);
  std::vector<int> order(window.words.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return window.words[a].norm() < window.words[b].norm();
  });
  for (int wi : order) {
    const Word& w = window.words[wi];
    RingElement p = moore_project(oracle, k, w);
    if (p.is_zero()) continue;
    IntVec v;
    try {
      v = vectorize(p, window);
    } catch (const SupportEscape&) {
      continue;
    }
    if (!cycles.contains(v) || last.contains(v)) continue;
    auto coords = cls.class_coords(v);
    if (!coords) continue;
    out.witness_found = true;
    out.witness = std::move(p);
    out.witness_coords = std::move(*coords);
    out.witness_moduli = cls.moduli();
    break;
  }
  return out;
}

std::optional<RingElement> boundary_preimage(OraclePtr oracle, int k,
                                             const BasisWindow& window,
                                             int probe_radius, const RingElement& x,
                                             std::size_t max_cells) {
  if (probe_radius < window.radius)
    throw SymringError("probe radius below the report window");
  auto up = level_context(oracle, k + 1);
  auto es = normalization_factors(oracle, k + 1);
  GeneratorMap d0 = face_map(oracle, k + 1, 0);
  std::vector<Word> probe = enumerate_ball(up, probe_radius, max_cells);

  std::vector<Word> target = enumerate_ball(window.ctx, probe_radius, max_cells);
  std::unordered_map<Word, int, WordHash> col;
  col.reserve(target.size());
  int outside = 0;
  for (const Word& w : target)
    if (window.index_of(w) < 0) col.emplace(w, outside++);
  for (const Word& w : window.words) col.emplace(w, outside + window.index_of(w));

  SparseEchelon ech(true);
  std::vector<RingElement> chains;  // by insertion index
  for (const Word& w : probe) {
    if (is_degenerate(es, w)) continue;
    RingElement p = project_with(es, w);
    if (p.is_zero()) continue;
    RingElement b = re_apply(d0, p);
    if (b.is_zero()) continue;
    SparseVec row;
    row.reserve(b.terms.size());
    for (const auto& [word, c] : b.terms) row.push_back({col.at(word), c});
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b_) { return a.first < b_.first; });
    chains.push_back(std::move(p));
    ech.insert(std::move(row));
  }

  SparseVec want;
  for (const auto& [word, c] : x.terms) {
    auto it = col.find(word);
    if (it == col.end()) return std::nullopt;
    want.push_back({it->second, c});
  }
  std::sort(want.begin(), want.end(),
            [](const auto& a, const auto& b_) { return a.first < b_.first; });
  auto combo = ech.membership_combo(std::move(want));
  if (!combo) return std::nullopt;

  RingElement chain = re_zero(up);
  for (const auto& [idx, q] : *combo)
    chain = re_add(chain, re_scale(q, chains[static_cast<std::size_t>(idx)]));
  if (!re_equal(re_apply(d0, chain), x))
    throw SymringError("boundary preimage failed to replay");
  return chain;
}

}  // namespace symring
