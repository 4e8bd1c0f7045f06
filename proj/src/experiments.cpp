#include "symring/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>

namespace symring {

namespace {

Json int_json(const Int& v) { return v.str(); }

Json ints_json(const std::vector<Int>& v) {
  Json a = Json::array();
  for (const Int& x : v) a.push_back(int_json(x));
  return a;
}

Json oracle_to_json(const OraclePtr& o) {
  if (!o->is_finite()) return Json{{"name", "Z"}};
  /* Builtins travel by name; anything else carries its table. */
  try {
    OraclePtr b = GroupOracle::by_name(o->name);
    if (b->is_finite() && b->elements == o->elements && b->identity == o->identity &&
        b->table == o->table)
      return Json{{"name", o->name}};
  } catch (const SymringError&) {
  }
  Json t;
  t["name"] = o->name;
  t["elements"] = o->elements;
  t["identity"] = o->elements[o->identity];
  Json rows = Json::array();
  for (const auto& row : o->table) {
    Json r = Json::array();
    for (int cell : row) r.push_back(o->elements[cell]);
    rows.push_back(std::move(r));
  }
  t["table"] = std::move(rows);
  return Json{{"table", std::move(t)}};
}

OraclePtr oracle_from_json(const Json& j) {
  if (j.contains("table")) return GroupOracle::from_json_text(j.at("table").dump());
  return GroupOracle::by_name(j.at("name").get<std::string>());
}

Json claim_json(const std::string& name, const std::string& verdict, bool ok) {
  return Json{{"name", name}, {"verdict", verdict}, {"ok", ok}};
}

int exit_from_claims(const Json& claims) {
  for (const auto& c : claims)
    if (!c.at("ok").get<bool>() || c.at("verdict").get<std::string>() == "unknown")
      return 2;
  return 0;
}

Json sweep_steps_json(const std::vector<SweepStep>& steps, bool invariants) {
  Json a = Json::array();
  for (const SweepStep& s : steps) {
    Json row;
    row["budget"] = s.budget;
    row["generators"] = s.generators;
    row["inner_rank"] = s.inner_rank;
    row["equals_exact"] = s.equals_exact;
    if (invariants) {
      row["free_rank"] = s.free_rank;
      row["torsion"] = ints_json(s.torsion);
    }
    a.push_back(std::move(row));
  }
  return a;
}

Json qreport_json(const QReport& q) {
  Json j;
  j["window_radius"] = q.window_radius;
  j["exact_rank"] = q.exact_rank;
  j["steps"] = sweep_steps_json(q.steps, true);
  j["saturated"] = q.saturated;
  j["saturated_at"] = q.saturated_at;
  j["stabilized"] = q.stabilized;
  j["free_rank"] = q.free_rank;
  j["torsion"] = ints_json(q.torsion);
  j["semantics"] = q.semantics;
  return j;
}

Json homology_json(const HomologyReport& h) {
  Json j;
  j["level"] = h.level;
  j["window_radius"] = h.window_radius;
  j["cycle_rank"] = h.cycle_rank;
  Json steps = Json::array();
  for (const HomologyStep& s : h.steps)
    steps.push_back(Json{{"probe", s.probe},
                         {"boundary_rank", s.boundary_rank},
                         {"free_rank", s.free_rank},
                         {"torsion", ints_json(s.torsion)}});
  j["steps"] = std::move(steps);
  j["stabilized"] = h.stabilized;
  j["free_rank"] = h.free_rank;
  j["torsion"] = ints_json(h.torsion);
  j["witness_found"] = h.witness_found;
  if (h.witness_found) {
    j["witness"] = format_ring(h.witness);
    j["witness_coords"] = ints_json(h.witness_coords);
    j["witness_moduli"] = ints_json(h.witness_moduli);
  }
  j["semantics"] = h.semantics;
  return j;
}

std::vector<int> ints_from(const Json& j) { return j.get<std::vector<int>>(); }

/* Finite quotient map with kernel exactly the given element set: classifies
   cosets, builds the quotient table, and relabels onto it. */
GeneratorMap quotient_by_subgroup(const ContextPtr& ctx, const std::set<int>& sub,
                                  const std::string& quotient_name) {
  const GroupOracle& o = *ctx->oracle;
  std::vector<int> coset(o.order(), -1);
  std::vector<int> reps;
  for (int g = 0; g < o.order(); ++g) {
    if (coset[g] >= 0) continue;
    int id = static_cast<int>(reps.size());
    for (int n : sub) coset[o.mul(g, n)] = id;
    if (coset[g] != id) throw SymringError("coset enumeration broke; subgroup not closed");
    reps.push_back(g);
  }
  std::vector<std::string> names;
  for (int r : reps) names.push_back(o.elements[r]);
  std::vector<std::vector<int>> table(reps.size(), std::vector<int>(reps.size()));
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t k = 0; k < reps.size(); ++k)
      table[i][k] = coset[o.mul(reps[i], reps[k])];
  OraclePtr q = GroupOracle::finite_from_table(quotient_name, std::move(names),
                                               coset[o.identity], std::move(table));
  GeneratorMap m;
  m.src = ctx;
  m.dst = make_finite_context(q);
  CopyRule rule;
  rule.kind = CopyRule::Kind::Relabel;
  rule.target_copy = 0;
  rule.elem_map = coset;
  m.rules = {rule};
  m.validate();
  return m;
}

long long now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

void apply_config_json(ExperimentConfig& cfg, const Json& j) {
  if (!j.is_object()) throw SymringError("config root must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "experiment") cfg.experiment = v.get<std::string>();
    else if (key == "L") cfg.L_sweep = {v.get<int>()};
    else if (key == "L_sweep") cfg.L_sweep = ints_from(v);
    else if (key == "M_schedule") cfg.M_schedule = ints_from(v);
    else if (key == "probe_schedule") cfg.probe_schedule = ints_from(v);
    else if (key == "group") cfg.group = v.get<std::string>();
    else if (key == "level") cfg.level = v.get<int>();
    else if (key == "n") cfg.n = v.get<int>();
    else if (key == "word") cfg.word = v.get<std::string>();
    else if (key == "cap") cfg.cap = v.get<int>();
    else if (key == "rank") cfg.rank = v.get<int>();
    else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
    else if (key == "max_cells") cfg.max_cells = v.get<std::size_t>();
    else if (key == "threads") cfg.threads = v.get<int>();
    else if (key == "out") cfg.out_dir = v.get<std::string>();
    else if (key == "pairs" || key == "runs") cfg.extra[key] = v;
    else throw SymringError("unknown config key '" + key + "'");
  }
}

Json context_to_json(const ContextPtr& ctx) {
  Json j;
  j["oracle"] = oracle_to_json(ctx->oracle);
  j["copies"] = ctx->copies;
  if (!ctx->oracle->is_finite()) j["labels"] = ctx->labels;
  return j;
}

ContextPtr context_from_json(const Json& j) {
  OraclePtr o = oracle_from_json(j.at("oracle"));
  if (!o->is_finite())
    return make_free_context(j.at("labels").get<std::vector<std::string>>());
  int copies = j.at("copies").get<int>();
  return copies == 1 ? make_finite_context(o) : make_product_context(o, copies);
}

Json generator_map_to_json(const GeneratorMap& m) {
  Json j;
  j["dst"] = context_to_json(m.dst);
  Json rules = Json::array();
  for (const CopyRule& r : m.rules) {
    Json rule;
    switch (r.kind) {
      case CopyRule::Kind::Kill: rule["kind"] = "kill"; break;
      case CopyRule::Kind::Relabel:
        rule["kind"] = "relabel";
        rule["target_copy"] = r.target_copy;
        if (!r.elem_map.empty()) rule["elem_map"] = r.elem_map;
        break;
      case CopyRule::Kind::Image:
        rule["kind"] = "image";
        rule["image"] = format_word(r.image);
        break;
    }
    rules.push_back(std::move(rule));
  }
  j["rules"] = std::move(rules);
  return j;
}

GeneratorMap generator_map_from_json(const ContextPtr& src, const Json& j) {
  GeneratorMap m;
  m.src = src;
  m.dst = context_from_json(j.at("dst"));
  for (const auto& rule : j.at("rules")) {
    CopyRule r;
    std::string kind = rule.at("kind").get<std::string>();
    if (kind == "kill") {
      r.kind = CopyRule::Kind::Kill;
    } else if (kind == "relabel") {
      r.kind = CopyRule::Kind::Relabel;
      r.target_copy = rule.at("target_copy").get<int>();
      if (rule.contains("elem_map")) r.elem_map = rule.at("elem_map").get<std::vector<int>>();
    } else if (kind == "image") {
      r.kind = CopyRule::Kind::Image;
      r.image = parse_word(m.dst, rule.at("image").get<std::string>());
    } else {
      throw SymringError("unknown copy rule kind '" + kind + "'");
    }
    m.rules.push_back(std::move(r));
  }
  m.validate();
  return m;
}

Json spec_to_json(const SubgroupSpec& s) {
  Json j;
  j["name"] = s.name;
  Json gens = Json::array();
  for (const Word& g : s.normal_gens) gens.push_back(format_word(g));
  j["normal_gens"] = std::move(gens);
  j["kernel_of"] = s.kernel_of ? generator_map_to_json(*s.kernel_of) : Json();
  return j;
}

SubgroupSpec spec_from_json(const ContextPtr& ctx, const Json& j) {
  SubgroupSpec s;
  s.name = j.at("name").get<std::string>();
  s.ctx = ctx;
  for (const auto& g : j.at("normal_gens"))
    s.normal_gens.push_back(parse_word(ctx, g.get<std::string>()));
  if (!j.at("kernel_of").is_null())
    s.kernel_of = generator_map_from_json(ctx, j.at("kernel_of"));
  s.validate();
  return s;
}

namespace {

Json specs_json(const std::vector<SubgroupSpec>& specs) {
  Json a = Json::array();
  for (const auto& s : specs) a.push_back(spec_to_json(s));
  return a;
}

std::vector<SubgroupSpec> specs_from_json(const ContextPtr& ctx, const Json& a) {
  std::vector<SubgroupSpec> out;
  for (const auto& j : a) out.push_back(spec_from_json(ctx, j));
  return out;
}

}  // namespace

Json product_membership_artifact(const Certificate& cert,
                                 const std::vector<SubgroupSpec>& specs) {
  Json a;
  a["schema"] = "symring/certificate/1";
  a["kind"] = "product-membership";
  a["context"] = context_to_json(cert.ctx);
  a["ideal_names"] = cert.ideal_names;
  a["specs"] = specs_json(specs);
  a["expression"] = cert.expression;
  a["target"] = format_ring(cert.target);
  Json rows = Json::array();
  for (const CertRow& r : cert.rows) {
    Json row;
    row["coeff"] = int_json(r.coeff);
    row["left"] = format_word(r.left);
    Json brackets = Json::array();
    for (const CertBracket& b : r.brackets)
      brackets.push_back(Json{{"member", format_word(b.member)}, {"ideal", b.ideal_index}});
    row["brackets"] = std::move(brackets);
    row["right"] = format_word(r.right);
    rows.push_back(std::move(row));
  }
  a["rows"] = std::move(rows);
  return a;
}

Json finite_nonmembership_artifact(const std::vector<SubgroupSpec>& specs,
                                   const ProductExpr& expr, const Word& g,
                                   const QuotientProbe& probe) {
  Json a;
  a["schema"] = "symring/certificate/1";
  a["kind"] = "finite-nonmembership";
  a["context"] = context_to_json(specs.front().ctx);
  a["specs"] = specs_json(specs);
  a["expression"] = expr.orders;
  a["element"] = format_word(g);
  a["quotient"] = Json{{"name", probe.name}, {"map", generator_map_to_json(probe.hom)}};
  return a;
}

Json boundary_membership_artifact(const OraclePtr& oracle, int level,
                                  const RingElement& target, const RingElement& chain,
                                  int probe_radius) {
  Json a;
  a["schema"] = "symring/certificate/1";
  a["kind"] = "boundary-membership";
  a["oracle"] = oracle_to_json(oracle);
  a["level"] = level;
  a["probe_radius"] = probe_radius;
  a["target"] = format_ring(target);
  a["chain"] = format_ring(chain);
  return a;
}

Json lattice_equality_artifact(const std::vector<SubgroupSpec>& specs,
                               const ProductExpr& expr, int window_radius, int budget) {
  Json a;
  a["schema"] = "symring/certificate/1";
  a["kind"] = "lattice-equality";
  a["context"] = context_to_json(specs.front().ctx);
  a["specs"] = specs_json(specs);
  a["expression"] = expr.orders;
  a["window_radius"] = window_radius;
  a["budget"] = budget;
  return a;
}

namespace {

void check_product_membership(const Json& a, std::vector<std::string>& errs) {
  ContextPtr ctx = context_from_json(a.at("context"));
  std::vector<SubgroupSpec> specs = specs_from_json(ctx, a.at("specs"));
  Certificate cert;
  cert.ctx = ctx;
  cert.ideal_names = a.at("ideal_names").get<std::vector<std::string>>();
  cert.expression = a.at("expression").get<std::vector<std::vector<int>>>();
  cert.target = parse_ring(ctx, a.at("target").get<std::string>());
  for (const auto& row : a.at("rows")) {
    CertRow r;
    r.coeff = Int(row.at("coeff").get<std::string>());
    r.left = parse_word(ctx, row.at("left").get<std::string>());
    for (const auto& b : row.at("brackets")) {
      CertBracket cb;
      cb.member = parse_word(ctx, b.at("member").get<std::string>());
      cb.ideal_index = b.at("ideal").get<int>();
      r.brackets.push_back(std::move(cb));
    }
    r.right = parse_word(ctx, row.at("right").get<std::string>());
    cert.rows.push_back(std::move(r));
  }
  CertificateCheck chk = verify_certificate(cert, &specs);
  if (!chk.valid)
    errs.insert(errs.end(), chk.errors.begin(), chk.errors.end());
}

void check_finite_nonmembership(const Json& a, std::vector<std::string>& errs) {
  ContextPtr ctx = context_from_json(a.at("context"));
  std::vector<SubgroupSpec> specs = specs_from_json(ctx, a.at("specs"));
  ProductExpr expr;
  expr.orders = a.at("expression").get<std::vector<std::vector<int>>>();
  Word g = parse_word(ctx, a.at("element").get<std::string>());
  GeneratorMap h = generator_map_from_json(ctx, a.at("quotient").at("map"));
  BasisWindow qw = make_window(h.dst, 1);
  RingElement xq = re_apply(h, re_word_minus_one(g));
  if (xq.is_zero()) {
    errs.push_back("element dies in the quotient; the probe separates nothing");
    return;
  }
  TruncatedLattice lat = finite_product_lattice(specs, expr, h, qw);
  if (lat.contains(vectorize(xq, qw)))
    errs.push_back("transported element lies inside the finite product lattice");
}

void check_boundary_membership(const Json& a, std::vector<std::string>& errs) {
  OraclePtr o = oracle_from_json(a.at("oracle"));
  int k = a.at("level").get<int>();
  ContextPtr lower = level_context(o, k);
  ContextPtr upper = level_context(o, k + 1);
  RingElement target = parse_ring(lower, a.at("target").get<std::string>());
  RingElement chain = parse_ring(upper, a.at("chain").get<std::string>());
  for (int j = 1; j <= k + 1; ++j)
    if (!re_apply(face_map(o, k + 1, j), chain).is_zero())
      errs.push_back("chain is not a Moore chain: face " + std::to_string(j) +
                     " does not vanish");
  if (!re_equal(re_apply(face_map(o, k + 1, 0), chain), target))
    errs.push_back("face 0 of the chain does not equal the target");
}

void check_lattice_equality(const Json& a, std::vector<std::string>& errs) {
  ContextPtr ctx = context_from_json(a.at("context"));
  std::vector<SubgroupSpec> specs = specs_from_json(ctx, a.at("specs"));
  ProductExpr expr;
  expr.orders = a.at("expression").get<std::vector<std::vector<int>>>();
  BasisWindow win = make_window(ctx, a.at("window_radius").get<int>());
  TruncatedLattice exact = exact_intersection_lattice(specs, win);
  InnerProductOptions io;
  io.budget = a.at("budget").get<int>();
  TruncatedLattice inner = inner_product_lattice(specs, expr, win, io).lattice();
  if (!inner.equals(exact))
    errs.push_back("inner product lattice does not match the exact intersection");
}

}  // namespace

std::vector<std::string> check_certificate_json(const Json& a) {
  std::vector<std::string> errs;
  try {
    if (a.at("schema").get<std::string>() != "symring/certificate/1") {
      errs.push_back("unsupported schema");
      return errs;
    }
    std::string kind = a.at("kind").get<std::string>();
    if (kind == "product-membership") check_product_membership(a, errs);
    else if (kind == "finite-nonmembership") check_finite_nonmembership(a, errs);
    else if (kind == "boundary-membership") check_boundary_membership(a, errs);
    else if (kind == "lattice-equality") check_lattice_equality(a, errs);
    else errs.push_back("unknown certificate kind '" + kind + "'");
  } catch (const std::exception& e) {
    errs.push_back(e.what());
  }
  return errs;
}

/* ---------------- lemma21 ---------------- */

namespace {

struct Lemma21Pair {
  std::string group;
  std::vector<std::string> sub_gens;
  std::string sub_name;
  std::vector<std::string> group_gens;
};

std::vector<std::string> builtin_generators(const std::string& name) {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"Z/2", {"t"}},           {"Z/3", {"t"}},
      {"Z/4", {"t"}},           {"S3", {"r", "s"}},
      {"Q8", {"i", "j"}},       {"D4", {"r", "s"}},
      {"(Z/2)^2", {"(t,e)", "(e,t)"}}, {"(Z/4)^2", {"(t,e)", "(e,t)"}}};
  auto it = table.find(name);
  if (it == table.end()) throw SymringError("no generator set on file for " + name);
  return it->second;
}

std::set<int> subgroup_closure(const GroupOracle& o, const std::vector<int>& gens) {
  std::vector<int> step = gens;
  for (int g : gens) step.push_back(o.inv(g));
  std::set<int> s = {o.identity};
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<int> cur(s.begin(), s.end());
    for (int x : cur)
      for (int g : step)
        if (s.insert(o.mul(x, g)).second) grew = true;
  }
  return s;
}

}  // namespace

RunReport run_lemma21(const ExperimentConfig& cfg) {
  std::vector<Lemma21Pair> pairs;
  if (cfg.extra.contains("pairs")) {
    for (const auto& p : cfg.extra.at("pairs")) {
      Lemma21Pair lp;
      lp.group = p.at("group").get<std::string>();
      lp.sub_gens = p.at("subgroup_gens").get<std::vector<std::string>>();
      lp.sub_name = p.at("subgroup_name").get<std::string>();
      lp.group_gens = p.contains("group_gens")
                          ? p.at("group_gens").get<std::vector<std::string>>()
                          : builtin_generators(lp.group);
      pairs.push_back(std::move(lp));
    }
  } else {
    pairs = {{"S3", {"r"}, "A3", builtin_generators("S3")},
             {"Q8", {"i", "j"}, "Q8", builtin_generators("Q8")},
             {"D4", {"r"}, "C4", builtin_generators("D4")},
             {"Z/4", {"t"}, "Z/4", builtin_generators("Z/4")}};
  }

  RunReport run;
  Json& r = run.report;
  r["schema"] = "symring/report/1";
  r["experiment"] = "lemma21";
  Json cfg_echo;
  Json pairs_echo = Json::array();
  for (const auto& p : pairs)
    pairs_echo.push_back(Json{{"group", p.group},
                              {"subgroup_gens", p.sub_gens},
                              {"subgroup_name", p.sub_name}});
  cfg_echo["pairs"] = std::move(pairs_echo);
  cfg_echo["max_cells"] = cfg.max_cells;
  r["config"] = std::move(cfg_echo);

  Json claims = Json::array();
  Json results = Json::array();
  for (const auto& p : pairs) {
    ContextPtr ctx = make_finite_context(GroupOracle::by_name(p.group));
    const GroupOracle& o = *ctx->oracle;
    BasisWindow win = make_window(ctx, 1, cfg.max_cells);

    std::vector<int> ngens;
    for (const auto& g : p.sub_gens) ngens.push_back(o.element_index(g));
    std::set<int> sub = subgroup_closure(o, ngens);
    for (int g = 0; g < o.order(); ++g)
      for (int n : sub)
        if (!sub.count(o.mul(o.mul(o.inv(g), n), g)))
          throw SymringError(p.sub_name + " is not normal in " + p.group);

    std::vector<int> comms;
    for (int x : sub)
      for (int y : sub)
        comms.push_back(o.mul(o.mul(o.inv(x), o.inv(y)), o.mul(x, y)));
    std::set<int> derived = subgroup_closure(o, comms);

    SubgroupSpec nspec;
    nspec.name = p.sub_name;
    nspec.ctx = ctx;
    for (const auto& g : p.sub_gens) nspec.normal_gens.push_back(parse_word(ctx, g));
    nspec.kernel_of = quotient_by_subgroup(ctx, sub, p.group + "/" + p.sub_name);
    nspec.validate();
    SubgroupSpec gspec;
    gspec.name = p.group;
    gspec.ctx = ctx;
    for (const auto& g : p.group_gens) gspec.normal_gens.push_back(parse_word(ctx, g));
    std::set<int> whole;
    for (int g = 0; g < o.order(); ++g) whole.insert(g);
    gspec.kernel_of = quotient_by_subgroup(ctx, whole, p.group + "/" + p.group);
    gspec.validate();

    std::vector<SubgroupSpec> specs = {nspec, gspec};
    ProductExpr expr = ProductExpr::ordered({0, 1});
    GeneratorMap id = identity_map(ctx);
    TruncatedLattice exact = finite_product_lattice(specs, expr, id, win);

    std::optional<InnerProductLattice> inner;
    int budget_used = -1;
    for (int budget : {5, 6, 7}) {
      InnerProductOptions io;
      io.budget = budget;
      io.track = true;
      io.max_cells = cfg.max_cells;
      io.threads = cfg.threads;
      InnerProductLattice cand = inner_product_lattice(specs, expr, win, io);
      if (cand.lattice().equals(exact)) {
        inner = std::move(cand);
        budget_used = budget;
        break;
      }
    }
    if (!inner)
      throw SymringError("inner span failed to reach the exact product lattice for " +
                         p.group);

    QuotientProbe self{"identity", id};
    bool all_match = true;
    Json rows = Json::array();
    for (int n : sub) {
      Word w = make_word(ctx, {{0, n}});
      RingElement x = re_word_minus_one(w);
      bool in_ideal = exact.contains(vectorize(x, win));
      bool in_derived = derived.count(n) > 0;
      all_match = all_match && (in_ideal == in_derived);
      int cert_index = static_cast<int>(run.artifacts.size());
      if (in_ideal) {
        auto cert = inner->certify(x);
        if (!cert) throw SymringError("tracked lattice refused a member it contains");
        run.artifacts.push_back(product_membership_artifact(*cert, specs));
      } else {
        run.artifacts.push_back(finite_nonmembership_artifact(specs, expr, w, self));
      }
      rows.push_back(Json{{"element", o.elements[n]},
                          {"in_product_ideal", in_ideal},
                          {"in_commutator_subgroup", in_derived},
                          {"certificate", cert_index}});
    }
    results.push_back(Json{{"group", p.group},
                           {"subgroup", p.sub_name},
                           {"subgroup_order", sub.size()},
                           {"commutator_subgroup_order", derived.size()},
                           {"budget_used", budget_used},
                           {"elements", std::move(rows)}});
    claims.push_back(claim_json("(" + p.group + ", " + p.sub_name +
                                    "): product-ideal members are exactly the "
                                    "commutator subgroup",
                                "certified", all_match));
  }
  r["pairs"] = std::move(results);
  r["claims"] = claims;
  run.exit_code = exit_from_claims(claims);
  return run;
}

/* ---------------- lemma23 ---------------- */

RunReport run_lemma23(const ExperimentConfig& cfg) {
  struct Setup {
    int n;
    int L;
  };
  std::vector<Setup> setups;
  if (cfg.extra.contains("runs")) {
    for (const auto& s : cfg.extra.at("runs"))
      setups.push_back({s.at("n").get<int>(), s.at("L").get<int>()});
  } else if (!cfg.L_sweep.empty()) {
    for (int L : cfg.L_sweep) setups.push_back({std::max(cfg.n, 2), L});
  } else {
    setups = {{2, 3}, {3, 2}};
  }

  RunReport run;
  Json& r = run.report;
  r["schema"] = "symring/report/1";
  r["experiment"] = "lemma23";
  Json runs_echo = Json::array();
  for (const auto& s : setups) runs_echo.push_back(Json{{"n", s.n}, {"L", s.L}});
  r["config"] = Json{{"runs", std::move(runs_echo)},
                     {"M_schedule", cfg.M_schedule},
                     {"max_cells", cfg.max_cells}};

  Json claims = Json::array();
  Json results = Json::array();
  for (const auto& s : setups) {
    std::vector<std::string> labels;
    for (int i = 0; i < s.n; ++i) labels.push_back("x" + std::to_string(i));
    ContextPtr ctx = make_free_context(labels);

    std::vector<SubgroupSpec> specs;
    for (int i = 0; i < s.n; ++i) {
      std::vector<std::string> rest;
      for (int k = 0; k < s.n; ++k)
        if (k != i) rest.push_back(labels[k]);
      ContextPtr dst = make_free_context(rest);
      std::vector<Word> images;
      for (int k = 0; k < s.n; ++k)
        images.push_back(k == i ? identity_word(dst) : parse_word(dst, labels[k]));
      SubgroupSpec sp;
      sp.name = "r" + std::to_string(i);
      sp.ctx = ctx;
      sp.normal_gens = {parse_word(ctx, labels[i])};
      sp.kernel_of = map_from_images(ctx, dst, std::move(images));
      sp.validate();
      specs.push_back(std::move(sp));
    }

    BasisWindow win = make_window(ctx, s.L, cfg.max_cells);
    SweepOptions opts;
    opts.budgets = cfg.M_schedule;
    opts.max_cells = cfg.max_cells;
    opts.threads = cfg.threads;
    opts.require_disjoint_blocks = true;
    ProductExpr expr = ProductExpr::symmetric(s.n);
    SaturationResult sat = saturation_verify(specs, expr, win, opts);

    Json entry;
    entry["n"] = s.n;
    entry["L"] = s.L;
    entry["exact_rank"] = sat.exact.rank();
    entry["steps"] = sweep_steps_json(sat.steps, false);
    entry["saturated"] = sat.saturated;
    entry["saturated_at"] = sat.saturated_at;
    if (sat.saturated) {
      entry["certificate"] = static_cast<int>(run.artifacts.size());
      run.artifacts.push_back(
          lattice_equality_artifact(specs, expr, s.L, sat.saturated_at));
    }
    results.push_back(std::move(entry));
    claims.push_back(
        claim_json("n=" + std::to_string(s.n) + " L=" + std::to_string(s.L) +
                       ": symmetric product saturates the exact intersection",
                   sat.saturated ? "certified" : "evidence", sat.saturated));
  }
  r["runs"] = std::move(results);
  r["claims"] = claims;
  run.exit_code = exit_from_claims(claims);
  return run;
}

/* ---------------- prop22 ---------------- */

RunReport run_prop22(const ExperimentConfig& cfg) {
  ContextPtr ctx = make_free_context({"a", "b"});
  ContextPtr z2 = make_finite_context(GroupOracle::by_name("Z/2"));
  Word t = parse_word(z2, "t");

  auto kernel_spec = [&](const std::string& name, const std::vector<std::string>& gens,
                         const Word& ia, const Word& ib) {
    SubgroupSpec s;
    s.name = name;
    s.ctx = ctx;
    for (const auto& g : gens) s.normal_gens.push_back(parse_word(ctx, g));
    s.kernel_of = map_from_images(ctx, z2, {ia, ib});
    s.validate();
    return s;
  };
  std::vector<SubgroupSpec> specs = {
      kernel_spec("R1", {"a", "b^2"}, identity_word(z2), t),
      kernel_spec("R2", {"b", "a^2"}, t, identity_word(z2))};
  ProductExpr expr = ProductExpr::symmetric(2);
  std::vector<std::string> names = {specs[0].name, specs[1].name};

  RunReport run;
  Json& r = run.report;
  r["schema"] = "symring/report/1";
  r["experiment"] = "prop22";
  r["config"] = Json{{"witnesses", 50}, {"depth", 2},   {"round_trips", 100},
                     {"seed", cfg.seed}, {"max_cells", cfg.max_cells}};
  Json claims = Json::array();

  /* Commutator witnesses: constructive membership in the symmetric product. */
  auto wits = symmetric_commutator_witnesses(specs, 2, 50);
  bool wit_ok = wits.size() == 50;
  Json wit_rows = Json::array();
  for (const auto& wit : wits) {
    std::vector<std::pair<int, Word>> entries;
    for (const auto& e : wit.entries)
      entries.push_back(
          {e.spec_index, conjugate(specs[e.spec_index].normal_gens[e.gen_index],
                                   e.conjugator)});
    Certificate cert = commutator_certificate(entries, names);
    bool valid = verify_certificate(cert, &specs).valid &&
                 re_equal(cert.target, re_word_minus_one(wit.value));
    wit_ok = wit_ok && valid;
    wit_rows.push_back(Json{{"value", format_word(wit.value)},
                            {"certificate", static_cast<int>(run.artifacts.size())},
                            {"valid", valid}});
    run.artifacts.push_back(product_membership_artifact(cert, specs));
  }
  r["witnesses"] = std::move(wit_rows);
  claims.push_back(claim_json(
      "50 symmetric commutator witnesses certified inside (R1 R2)_S", "certified",
      wit_ok));

  /* The basic commutator itself, decided by the membership engine. */
  DSubgroupOptions dopt;
  dopt.max_cells = cfg.max_cells;
  dopt.threads = cfg.threads;
  MembershipVerdict vin = d_subgroup_test(commutator(parse_word(ctx, "a"),
                                                     parse_word(ctx, "b")),
                                          specs, expr, dopt);
  bool vin_ok = vin.status == MembershipStatus::In && vin.certificate.has_value();
  if (vin_ok) {
    r["commutator_membership"] =
        Json{{"status", "in"},
             {"budget_used", vin.budget_used},
             {"certificate", static_cast<int>(run.artifacts.size())}};
    run.artifacts.push_back(product_membership_artifact(*vin.certificate, specs));
  }
  claims.push_back(claim_json("[a,b] certified inside (R1 R2)_S", "certified", vin_ok));

  /* a^2 lies in R1 and R2 but escapes the product in a finite quotient. */
  Word a2 = parse_word(ctx, "a^2");
  MembershipVerdict vout = d_subgroup_test(a2, specs, expr, dopt);
  bool vout_ok = vout.status == MembershipStatus::Out;
  if (vout_ok) {
    QuotientProbe used;
    bool found = false;
    for (auto& probe : default_quotient_schedule(ctx))
      if (probe.name == vout.quotient) {
        used = std::move(probe);
        found = true;
        break;
      }
    if (!found) throw SymringError("separating quotient vanished from the schedule");
    r["square_nonmembership"] =
        Json{{"status", "out"},
             {"quotient", vout.quotient},
             {"in_both_ideals", specs[0].contains(a2) && specs[1].contains(a2)},
             {"certificate", static_cast<int>(run.artifacts.size())}};
    run.artifacts.push_back(finite_nonmembership_artifact(specs, expr, a2, used));
  }
  claims.push_back(
      claim_json("a^2 certified outside (R1 R2)_S by a finite quotient", "certified",
                 vout_ok));

  /* Schreier decomposition round trips through the R2 transversal. */
  std::vector<Word> transversal = schreier_transversal(specs[1], 4, 3);
  bool schreier_ok = transversal.size() == 2;
  auto [t0, s0] = coset_decompose(specs[1], transversal, parse_word(ctx, "b a"));
  schreier_ok = schreier_ok && t0 == parse_word(ctx, "a") &&
                s0 == parse_word(ctx, "a^-1 b a");
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> len(1, 6), pick(0, 1), sgn(0, 1);
  int trips = 0;
  for (int i = 0; i < 100; ++i) {
    std::vector<Syllable> raw;
    int l = len(rng);
    for (int k = 0; k < l; ++k)
      raw.push_back({pick(rng), sgn(rng) ? 1 : -1});
    Word g = make_word(ctx, std::move(raw));
    auto [tt, ss] = coset_decompose(specs[1], transversal, g);
    bool ok = multiply(tt, ss) == g && specs[1].contains(ss) &&
              std::find(transversal.begin(), transversal.end(), tt) != transversal.end();
    schreier_ok = schreier_ok && ok;
    trips += ok;
  }
  Json tj = Json::array();
  for (const Word& w : transversal) tj.push_back(format_word(w));
  r["schreier"] = Json{{"transversal", std::move(tj)}, {"round_trips_passed", trips}};
  claims.push_back(claim_json("Schreier transversal round-trips 100 random words",
                              "certified", schreier_ok));

  r["claims"] = claims;
  run.exit_code = exit_from_claims(claims);
  return run;
}

/* ---------------- wu / theorem31 ---------------- */

namespace {

struct WuParams {
  std::string experiment;
  int n = 1;
  std::vector<int> L_sweep;
  int budget_cap = 0;  // 0 = stock default schedule
  int witness_depth = 2;
  int witness_count = 50;
  bool designated = false;
};

RunReport run_wu_like(const ExperimentConfig& cfg, const WuParams& wp) {
  LoopSetup ws = wu_setup(wp.n);
  const int ideals = wp.n + 2;
  ProductExpr expr = ProductExpr::symmetric(ideals);
  std::vector<int> sweep = cfg.L_sweep.empty() ? wp.L_sweep : cfg.L_sweep;

  RunReport run;
  Json& r = run.report;
  r["schema"] = "symring/report/1";
  r["experiment"] = wp.experiment;
  Json budgets_echo = Json::array();
  auto budgets_for = [&](int L) {
    if (!cfg.M_schedule.empty()) return cfg.M_schedule;
    std::vector<int> b = default_budget_schedule(L);
    if (wp.budget_cap > 0)
      b.erase(std::remove_if(b.begin(), b.end(),
                             [&](int m) { return m > wp.budget_cap; }),
              b.end());
    return b;
  };
  for (int L : sweep) budgets_echo.push_back(budgets_for(L));
  r["config"] = Json{{"n", wp.n},
                     {"ideals", ideals},
                     {"L_sweep", sweep},
                     {"M_schedule_per_L", std::move(budgets_echo)},
                     {"witness_depth", wp.witness_depth},
                     {"witness_count", wp.witness_count},
                     {"max_cells", cfg.max_cells}};
  Json claims = Json::array();

  /* Witness battery: every generated symmetric commutator is certified inside
     the full symmetric product, hence has zero class in any window quotient. */
  auto wits = symmetric_commutator_witnesses(ws.specs, wp.witness_depth,
                                             wp.witness_count);
  std::vector<std::string> names;
  for (const auto& s : ws.specs) names.push_back(s.name);
  bool wit_ok = static_cast<int>(wits.size()) == wp.witness_count;
  Json wit_rows = Json::array();
  for (const auto& wit : wits) {
    std::vector<std::pair<int, Word>> entries;
    for (const auto& e : wit.entries)
      entries.push_back(
          {e.spec_index, conjugate(ws.specs[e.spec_index].normal_gens[e.gen_index],
                                   e.conjugator)});
    Certificate cert = commutator_certificate(entries, names);
    bool valid = verify_certificate(cert, &ws.specs).valid &&
                 re_equal(cert.target, re_word_minus_one(wit.value));
    wit_ok = wit_ok && valid;
    wit_rows.push_back(Json{{"value", format_word(wit.value)},
                            {"certificate", static_cast<int>(run.artifacts.size())},
                            {"valid", valid}});
    run.artifacts.push_back(product_membership_artifact(cert, ws.specs));
  }
  r["witnesses"] = std::move(wit_rows);
  claims.push_back(claim_json(
      std::to_string(wits.size()) +
          " symmetric commutator witnesses certified in the full product "
          "(zero class at every window)",
      "certified", wit_ok));

  /* Quotient invariants across the window sweep. */
  Json qreports = Json::array();
  bool all_rank_one = true;
  bool any_stabilized = false;
  std::vector<std::pair<long long, std::vector<Int>>> finals;
  for (int L : sweep) {
    BasisWindow win = make_window(ws.ctx, L, cfg.max_cells);
    SweepOptions opts;
    opts.budgets = budgets_for(L);
    opts.max_cells = cfg.max_cells;
    opts.threads = cfg.threads;
    QReport qr = q_invariants_report(ws.specs, expr, win, opts);
    qreports.push_back(qreport_json(qr));
    bool rank_one = qr.free_rank == 1 && qr.torsion.empty();
    all_rank_one = all_rank_one && rank_one;
    any_stabilized = any_stabilized || qr.stabilized;
    finals.push_back({qr.free_rank, qr.torsion});
    claims.push_back(claim_json(
        "L=" + std::to_string(L) + ": truncated quotient shows free rank 1, no torsion",
        "evidence", rank_one));
  }
  r["qreports"] = std::move(qreports);
  bool cross_agree = true;
  for (const auto& f : finals) cross_agree = cross_agree && f == finals.front();
  claims.push_back(claim_json(
      "final invariants agree across the window sweep and at least one window "
      "stabilized over its budget schedule",
      "evidence", cross_agree && any_stabilized && all_rank_one));

  if (wp.designated) {
    ContextPtr ctx = ws.ctx;
    Word y0 = parse_word(ctx, "y0");
    Word w = commutator(y0, multiply(y0, parse_word(ctx, "y1")));
    r["designated_witness"] = Json::object();
    Json& dw = r["designated_witness"];
    dw["word"] = format_word(w);

    /* Truncated class at the largest window, final budget. */
    int L = std::max<int>(sweep.back(), static_cast<int>(w.norm()));
    BasisWindow win = make_window(ctx, L, cfg.max_cells);
    InnerProductOptions io;
    io.budget = budgets_for(L).back();
    io.max_cells = cfg.max_cells;
    io.threads = cfg.threads;
    HurewiczClass hc = hurewicz_class(w, ws.specs, win, io);
    dw["class_window"] = L;
    dw["class_budget"] = io.budget;
    dw["class_coords"] = ints_json(hc.coords);
    dw["class_moduli"] = ints_json(hc.moduli);
    dw["class_zero"] = hc.zero;
    claims.push_back(claim_json(
        "designated witness has nonzero truncated class", "evidence", !hc.zero));

    /* Pairwise product membership is constructive. */
    std::vector<SubgroupSpec> pair = {ws.specs[1], ws.specs[2]};
    DSubgroupOptions dopt;
    dopt.max_cells = cfg.max_cells;
    dopt.threads = cfg.threads;
    MembershipVerdict pv = d_subgroup_test(w, pair, ProductExpr::symmetric(2), dopt);
    bool pin = pv.status == MembershipStatus::In && pv.certificate.has_value();
    if (pin) {
      dw["pairwise_membership"] =
          Json{{"status", "in"},
               {"budget_used", pv.budget_used},
               {"certificate", static_cast<int>(run.artifacts.size())}};
      run.artifacts.push_back(product_membership_artifact(*pv.certificate, pair));
    }
    claims.push_back(claim_json(
        "designated witness certified inside the pairwise product (r1 r2)_S",
        "certified", pin));

    /* Separation against the full product: the witness generates the free
       rank-1 quotient, so it must escape, and a finite quotient proves it. */
    MembershipVerdict tv = d_subgroup_test(w, ws.specs, expr, dopt);
    const char* st = tv.status == MembershipStatus::In
                         ? "in"
                         : tv.status == MembershipStatus::Out ? "out" : "unknown";
    Json fj = Json{{"status", st}, {"quotient", tv.quotient}};
    bool out_ok = tv.status == MembershipStatus::Out;
    if (out_ok) {
      QuotientProbe used;
      bool found = false;
      for (auto& probe : default_quotient_schedule(ctx))
        if (probe.name == tv.quotient) {
          used = std::move(probe);
          found = true;
          break;
        }
      if (!found) throw SymringError("separating quotient vanished from the schedule");
      fj["certificate"] = static_cast<int>(run.artifacts.size());
      run.artifacts.push_back(finite_nonmembership_artifact(ws.specs, expr, w, used));
    }
    dw["full_product_membership"] = std::move(fj);
    claims.push_back(claim_json(
        "designated witness certified outside the full symmetric product by a "
        "finite quotient",
        out_ok ? "certified" : "unknown", out_ok));
  }

  r["claims"] = claims;
  run.exit_code = exit_from_claims(claims);
  return run;
}

}  // namespace

RunReport run_wu(const ExperimentConfig& cfg) {
  WuParams wp;
  wp.experiment = "wu";
  wp.n = cfg.n;
  wp.L_sweep = cfg.n == 1 ? std::vector<int>{3, 4} : std::vector<int>{2, 3};
  wp.budget_cap = 8;  // budget 9 at L=4 runs minutes and 10 exhausts memory
  wp.witness_depth = 2;
  wp.witness_count = 50;
  wp.designated = cfg.n == 1;
  return run_wu_like(cfg, wp);
}

RunReport run_theorem31(const ExperimentConfig& cfg) {
  WuParams wp;
  wp.experiment = "theorem31";
  wp.n = 2;  // four ideals in the rank-3 free group
  wp.L_sweep = {2, 3};
  wp.budget_cap = 0;
  wp.witness_depth = 1;
  wp.witness_count = 24;
  wp.designated = false;
  return run_wu_like(cfg, wp);
}

/* ---------------- carlsson ---------------- */

RunReport run_carlsson(const ExperimentConfig& cfg) {
  std::string group = cfg.group.empty() ? "Z/2" : cfg.group;
  OraclePtr oracle = GroupOracle::by_name(group);
  int k = cfg.level;
  std::vector<int> sweep = cfg.L_sweep.empty() ? std::vector<int>{3, 4, 5} : cfg.L_sweep;

  RunReport run;
  Json& r = run.report;
  r["schema"] = "symring/report/1";
  r["experiment"] = "carlsson";
  r["config"] = Json{{"group", group},
                     {"level", k},
                     {"L_sweep", sweep},
                     {"probe_schedule", cfg.probe_schedule},
                     {"max_cells", cfg.max_cells}};
  Json claims = Json::array();

  Json reports = Json::array();
  std::optional<HomologyReport> last;
  std::optional<BasisWindow> last_win;
  std::vector<int> last_probes;
  bool cross_agree = true;
  std::pair<long long, std::vector<Int>> first_final;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    int L = sweep[i];
    BasisWindow win = make_window(level_context(oracle, k), L, cfg.max_cells);
    std::vector<int> probes =
        cfg.probe_schedule.empty() ? default_probe_schedule(L) : cfg.probe_schedule;
    HomologyReport hr =
        homology_report(oracle, k, win, probes, cfg.max_cells, cfg.threads);
    reports.push_back(homology_json(hr));
    if (i == 0) first_final = {hr.free_rank, hr.torsion};
    cross_agree = cross_agree &&
                  std::pair<long long, std::vector<Int>>{hr.free_rank, hr.torsion} ==
                      first_final;
    claims.push_back(claim_json(
        "L=" + std::to_string(L) + ": invariants stabilized across the probe schedule",
        "evidence", hr.stabilized));
    last = std::move(hr);
    last_win = std::move(win);
    last_probes = std::move(probes);
  }
  r["homology"] = std::move(reports);
  claims.push_back(
      claim_json("final invariants agree across the window sweep", "evidence",
                 cross_agree));

  if (last && last->witness_found) {
    Json wj;
    wj["window_radius"] = last->window_radius;
    wj["value"] = format_ring(last->witness);
    wj["coords"] = ints_json(last->witness_coords);
    wj["moduli"] = ints_json(last->witness_moduli);
    if (!last->torsion.empty()) {
      Int order = last->witness_moduli.empty() ? Int(0) : last->witness_moduli.front();
      RingElement scaled = re_scale(order, last->witness);
      auto chain = boundary_preimage(oracle, k, *last_win, last_probes.back(), scaled,
                                     cfg.max_cells);
      bool bounded = chain.has_value();
      if (bounded) {
        wj["order_certificate"] = static_cast<int>(run.artifacts.size());
        wj["order"] = int_json(order);
        run.artifacts.push_back(boundary_membership_artifact(
            oracle, k, scaled, *chain, last_probes.back()));
      }
      claims.push_back(claim_json(
          "witness order divides " + order.str() +
              ": scaled witness certified inside the inner boundary",
          "certified", bounded));
      bool outside = !boundary_preimage(oracle, k, *last_win, last_probes.back(),
                                        last->witness, cfg.max_cells)
                          .has_value();
      wj["witness_outside_final_boundary"] = outside;
      claims.push_back(claim_json(
          "witness itself stays outside the inner boundary through the schedule",
          "evidence", outside));
    } else {
      claims.push_back(claim_json("witness class survives as a free generator",
                                  "evidence",
                                  !last->witness_moduli.empty() &&
                                      std::all_of(last->witness_moduli.begin(),
                                                  last->witness_moduli.end(),
                                                  [](const Int& m) { return m == 0; })));
    }
    r["witness"] = std::move(wj);
  } else {
    claims.push_back(claim_json("witness cycle found", "evidence", false));
  }

  r["claims"] = claims;
  run.exit_code = exit_from_claims(claims);
  return run;
}

/* ---------------- magnus ---------------- */

RunReport run_magnus_cmd(const ExperimentConfig& cfg) {
  std::vector<std::string> labels;
  for (int i = 0; i < cfg.rank; ++i) labels.push_back("x" + std::to_string(i));
  ContextPtr ctx = make_free_context(labels);
  std::string text = cfg.word.empty()
                         ? (cfg.rank >= 2 ? "x0^-1 x1^-1 x0 x1" : "x0")
                         : cfg.word;
  Word w = parse_word(ctx, text);
  TruncSeries series = magnus_image(w, cfg.cap);
  int degree = gamma_degree(w, cfg.cap);

  RunReport run;
  Json& r = run.report;
  r["schema"] = "symring/report/1";
  r["experiment"] = "magnus";
  r["config"] = Json{{"word", text}, {"cap", cfg.cap}, {"rank", cfg.rank}};
  r["word"] = format_word(w);
  r["series"] = format_series(series);
  r["gamma_degree"] = degree;
  r["gamma_capped"] = degree == cfg.cap + 1;

  TruncSeries dev = ts_sub(series, TruncSeries::unit(series.vars(), series.cap()));
  Json claims = Json::array();
  claims.push_back(claim_json(
      "filtration degree equals the lowest surviving series degree", "certified",
      degree == dev.min_degree()));
  r["claims"] = claims;
  run.exit_code = exit_from_claims(claims);
  return run;
}

/* ---------------- dispatch / io ---------------- */

RunReport run_experiment(const ExperimentConfig& cfg) {
  long long t0 = now_ms();
  RunReport run;
  if (cfg.experiment == "lemma21") run = run_lemma21(cfg);
  else if (cfg.experiment == "lemma23") run = run_lemma23(cfg);
  else if (cfg.experiment == "prop22") run = run_prop22(cfg);
  else if (cfg.experiment == "wu") run = run_wu(cfg);
  else if (cfg.experiment == "theorem31") run = run_theorem31(cfg);
  else if (cfg.experiment == "carlsson") run = run_carlsson(cfg);
  else if (cfg.experiment == "magnus") run = run_magnus_cmd(cfg);
  else throw SymringError("unknown experiment '" + cfg.experiment + "'");
  const char* timing = std::getenv("SYMRING_TIMING");
  if (timing && std::string(timing) == "1") run.wall_ms = now_ms() - t0;
  return run;
}

std::string write_run(const ExperimentConfig& cfg, RunReport& run) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  Json names = Json::array();
  char buf[16];
  for (std::size_t i = 0; i < run.artifacts.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%03zu", i);
    std::string name = cfg.experiment + "-cert-" + buf + ".json";
    fs::path path = fs::path(cfg.out_dir) / name;
    std::ofstream out(path);
    if (!out) throw SymringError("cannot write " + path.string());
    out << run.artifacts[i].dump(2) << '\n';
    run.certificate_paths.push_back(path.string());
    names.push_back(name);
  }
  run.report["certificates"] = std::move(names);
  run.report["wall_ms"] = run.wall_ms;
  fs::path rp = fs::path(cfg.out_dir) / (cfg.experiment + "-report.json");
  std::ofstream out(rp);
  if (!out) throw SymringError("cannot write " + rp.string());
  out << run.report.dump(2) << '\n';
  return rp.string();
}

}  // namespace symring
