#include "cli_support.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#include "qtj/errors.hpp"
#include "qtj/general_quadratic.hpp"
#include "qtj/lattice.hpp"
#include "qtj/limit_values.hpp"
#include "qtj/quadratic_unit.hpp"
#include "qtj/zeta_approx.hpp"

namespace qtj::cli {

namespace {

// Runs fn(0..n-1) on up to `threads` threads; the first failure by index is
// rethrown.
void parallel_cells(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const int k = std::max(1, std::min<int>(threads, int(n)));
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&](std::size_t first) {
    for (std::size_t i = first; i < n; i += std::size_t(k)) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (k == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < k; ++t) pool.emplace_back(worker, std::size_t(t));
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

const std::set<std::string> kTopKeys = {"field",   "unit",    "rational",  "general",          "precision",
                                        "m_cutoff", "n_max",  "l_list",    "lattice",          "eps_logs",
                                        "comparison_floor",   "output",    "parallel"};

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

long long get_int(const Json& j, const std::string& key) {
  if (!j.is_number_integer()) throw ConfigError(key + " must be an integer");
  return j.get<long long>();
}

Fq parse_element(const Field& F, const Json& j, const std::string& what) {
  if (j.is_number_integer()) return F.from_int(j.get<long long>());
  if (j.is_array()) {
    std::vector<int> digits;
    for (const auto& d : j) {
      if (!d.is_number_integer()) throw ConfigError(what + ": F_p digits must be integers");
      const long long v = d.get<long long>() % F.p();
      digits.push_back(int(v < 0 ? v + F.p() : v));
    }
    if ((int)digits.size() > F.r()) throw ConfigError(what + ": more than r digits");
    return F.from_digits(digits);
  }
  throw ConfigError(what + ": an F_q element is an integer or a list of F_p digits");
}

Poly parse_poly(const FieldPtr& field, const Json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + " must be a coefficient list");
  std::vector<Fq> c;
  for (const auto& e : j) c.push_back(parse_element(*field, e, what));
  return Poly(field, std::move(c));
}

std::vector<int> parse_int_list(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + " must be a list of integers");
  std::vector<int> out;
  for (const auto& e : j) out.push_back(int(get_int(e, what)));
  return out;
}

const QuadraticUnit make_unit(const RunConfig& cfg, long long prec) {
  if (!cfg.a || !cfg.b) throw ConfigError("this verb needs unit.a and unit.b");
  return solve(*cfg.a, *cfg.b, prec);
}

std::vector<int> l_values(const RunConfig& cfg, int d) {
  std::vector<int> ls = cfg.l_list;
  if (ls.empty()) {
    for (int l = 0; l < d; ++l) ls.push_back(l);
  }
  for (int l : ls) {
    if (l < 0 || l >= d) throw ConfigError("l must lie in [0, d-1]");
  }
  return ls;
}

PrecisionPlan plan_of(const RunConfig& cfg) {
  PrecisionPlan plan;
  plan.target = cfg.precision;
  plan.threads = 1;
  return plan;
}

Json j_json(const std::optional<Laurent>& j) { return j ? to_json(*j) : Json("inf"); }

Json approximant_json(const ApproximantValue& v) {
  Json o;
  o["eps_log"] = v.eps_log;
  o["cutoff"] = v.cutoff;
  o["j"] = j_json(v.j);
  o["J"] = to_json(v.J);
  o["J_tilde"] = to_json(v.J_tilde);
  o["J_tilde_unit"] = v.J_tilde_is_unit();
  o["tail_bound"] = to_json(v.tail_bound);
  if (v.is_infinite()) o["infinity_floor"] = v.infinity_floor;
  return o;
}

// ---- verbs ----

Json cmd_solve(const RunConfig& cfg) {
  const int d = cfg.a ? cfg.a->degree() : 0;
  const long long prec = std::max<long long>(cfg.precision, 2LL * (cfg.n_max + 2) * std::max(d, 1) + 4);
  const QuadraticUnit u = make_unit(cfg, prec);
  Json o;
  o["q"] = u.F().q();
  o["a"] = to_json(u.a());
  o["b"] = to_json(u.F(), u.b());
  o["d"] = u.d();
  o["precision"] = prec;
  o["f"] = to_json(u.f());
  o["f_conj"] = to_json(u.f_conj());
  o["D"] = to_json(u.D());
  o["sqrtD"] = to_json(u.sqrtD());
  o["c"] = to_json(u.F(), u.c());
  const BinetSequence seq = binet_terms(u, cfg.n_max);
  Json table = Json::array();
  for (int n = 0; n <= cfg.n_max; ++n) {
    Json row;
    row["n"] = n;
    row["Q"] = to_json(seq.Q[n]);
    row["Q_bar"] = to_json(seq.Q_bar[n]);
    Json norms = Json::array();
    for (int l = 0; l < u.d(); ++l) norms.push_back(to_json(error_norm(u, n, l)));
    row["error_norms"] = norms;
    table.push_back(row);
  }
  o["binet"] = table;
  return o;
}

Json cmd_lattice(const RunConfig& cfg, Json* partial) {
  if (!cfg.a || !cfg.b) throw ConfigError("lattice needs unit.a and unit.b");
  const int d = cfg.a->degree();
  if (d <= 0) throw ConfigError("deg a must be positive");
  if (cfg.N < 0 || cfg.l < 0 || cfg.l >= d) throw ConfigError("need N >= 0 and 0 <= l <= d-1");
  const EpsilonIndex idx{cfg.N, cfg.l, d};
  const int deg_bound = cfg.deg_bound.value_or((cfg.N + 3) * d);
  if (deg_bound > 20) throw ConfigError("deg_bound above 20 is out of reach for the exhaustive search");
  const QuadraticUnit u = make_unit(cfg, deg_bound + idx.m() + 8);
  const BasisDescription desc = basis_lambda(u, idx);

  Json o;
  o["N"] = idx.N;
  o["l"] = idx.l;
  o["d"] = d;
  o["eps_log"] = idx.eps_log();
  o["deg_bound"] = deg_bound;
  Json gens = Json::array();
  for (const Generator& g : desc.generators(deg_bound)) {
    Json e;
    e["name"] = to_string(g);
    e["degree"] = g.degree(d);
    e["poly"] = to_json(desc.generator_poly(g));
    gens.push_back(e);
  }
  o["generators"] = gens;
  const std::vector<Poly> basis = desc.materialize(deg_bound);
  const std::vector<Poly> span = span_elements(u.field(), basis);
  const std::vector<Poly> brute = brute_force_lambda(u.f(), idx.eps_log(), deg_bound);
  Json elems = Json::array();
  for (const Poly& p : brute) elems.push_back(to_json(p));
  o["brute_force"] = elems;
  o["span_size"] = span.size();
  o["brute_force_size"] = brute.size();
  const bool equal = span == brute;
  o["equal"] = equal;
  if (!equal) {
    if (partial) *partial = o;
    throw InvariantViolation("basis span and exhaustive search disagree");
  }
  return o;
}

Json cmd_approx(const RunConfig& cfg) {
  const PrecisionPlan plan = plan_of(cfg);
  Json o;
  Json trace = Json::array();
  if (cfg.rational) {
    const auto& [num, den] = *cfg.rational;
    const SeriesSource src = rational_series(num, den);
    o["input"] = "rational";
    o["num"] = to_json(num);
    o["den"] = to_json(den);
    o["threshold_m"] = rational_threshold(num, den);
    std::vector<std::optional<ApproximantValue>> vals(cfg.n_max);
    parallel_cells(vals.size(), cfg.parallel, [&](std::size_t i) { vals[i] = j_eps(src, -int(i + 1), plan); });
    for (std::size_t i = 0; i < vals.size(); ++i) {
      Json row = approximant_json(*vals[i]);
      row["N"] = int(i + 1);
      row["l"] = 0;
      trace.push_back(row);
    }
  } else {
    const QuadraticUnit u = make_unit(cfg, 64);
    o["input"] = "unit";
    o["a"] = to_json(u.a());
    o["b"] = to_json(u.F(), u.b());
    std::vector<EpsilonIndex> cells;
    for (int N = 0; N <= cfg.n_max; ++N) {
      for (int l : l_values(cfg, u.d())) {
        if (N * u.d() + l > 0) cells.push_back({N, l, u.d()});
      }
    }
    std::vector<std::optional<ApproximantValue>> vals(cells.size());
    parallel_cells(cells.size(), cfg.parallel, [&](std::size_t i) { vals[i] = j_eps(u, cells[i], plan); });
    for (std::size_t i = 0; i < cells.size(); ++i) {
      Json row = approximant_json(*vals[i]);
      row["N"] = cells[i].N;
      row["l"] = cells[i].l;
      trace.push_back(row);
    }
  }
  o["precision"] = cfg.precision;
  o["trace"] = trace;
  return o;
}

Json cmd_limits(const RunConfig& cfg) {
  const QuadraticUnit u = make_unit(cfg, 64);
  const PrecisionPlan plan = plan_of(cfg);
  const ValueSet vs = value_set(u, plan, cfg.comparison_floor);
  const std::vector<int> ls = l_values(cfg, u.d());
  std::vector<std::vector<ConvergencePoint>> traces(ls.size());
  parallel_cells(ls.size(), cfg.parallel, [&](std::size_t i) {
    traces[i] = convergence_trace(u, vs.values[ls[i]], 0, cfg.n_max, plan);
  });

  Json o;
  o["a"] = to_json(u.a());
  o["b"] = to_json(u.F(), u.b());
  o["d"] = u.d();
  o["precision"] = cfg.precision;
  o["comparison_floor"] = vs.comparison_floor;
  o["distinct"] = vs.distinct;
  o["retries"] = vs.retries;
  Json values = Json::array();
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const LimitValue& v = vs.values[ls[i]];
    Json e;
    e["l"] = v.l;
    e["j_l"] = j_json(v.j_l);
    e["J_l"] = to_json(v.J_l);
    e["J_tilde_l"] = to_json(v.J_tilde_l);
    e["J_tilde_unit"] = v.J_tilde_is_unit();
    e["m_cutoff"] = v.m_cutoff;
    e["tail_bound"] = to_json(v.tail_bound);
    if (cfg.m_cutoff) {
      const LimitValue t = limit_value(u, v.l, *cfg.m_cutoff);
      Json tc;
      tc["m_cutoff"] = *cfg.m_cutoff;
      tc["J_tilde_l"] = to_json(t.J_tilde_l);
      tc["tail_bound"] = to_json(t.tail_bound);
      tc["agrees"] = t.J_tilde_l.agrees_on_common(v.J_tilde_l);
      e["tuple_route"] = tc;
    }
    Json tr = Json::array();
    for (const ConvergencePoint& pt : traces[i]) {
      Json p;
      p["N"] = pt.N;
      p["j"] = j_json(pt.j);
      if (pt.infinite) {
        p["gap"] = "inf";
      } else {
        p["gap"] = to_json(pt.gap);
      }
      tr.push_back(p);
    }
    e["convergence_trace"] = tr;
    values.push_back(e);
  }
  o["values"] = values;
  return o;
}

Json cmd_general(const RunConfig& cfg) {
  if (!cfg.general) throw ConfigError("general needs general.x, general.y and general.z");
  const QuadraticUnit u = make_unit(cfg, 64);
  const auto& [x, y, z] = *cfg.general;
  const GeneralQuadratic g(u, x, y, z);
  Json o;
  o["a"] = to_json(u.a());
  o["b"] = to_json(u.F(), u.b());
  o["x"] = to_json(x);
  o["y"] = to_json(y);
  o["z"] = to_json(z);
  o["index_bound"] = index_bound(y, z);
  o["quotient_dim_yz"] = quotient_dimension(y * z, (y * z).degree() + 8);

  std::vector<int> eps = cfg.eps_logs;
  if (eps.empty()) {
    for (int m = z.degree() + 1; m <= z.degree() + 4; ++m) eps.push_back(-m);
  }
  Json sw = Json::array();
  Json cos = Json::array();
  for (int e : eps) {
    const int D = cfg.deg_bound.value_or(-e + y.degree() + z.degree() + 4);
    if (D > 18) throw ConfigError("deg_bound above 18 is out of reach for the exhaustive search");
    const SandwichReport r = sandwich_check(g, e, D);
    Json s;
    s["eps_log"] = r.eps_log;
    s["deg_bound"] = r.deg_bound;
    s["lower_ok"] = r.lower_ok;
    s["upper_ok"] = r.upper_ok;
    s["lower_dim"] = r.lower_dim;
    s["middle_dim"] = r.middle_dim;
    s["index_dim"] = r.index_dim;
    s["index_stable"] = r.stable;
    sw.push_back(s);

    const CosetDecomposition c = coset_reps(g, e, D);
    Json cj;
    cj["eps_log"] = c.eps_log;
    cj["r"] = c.r();
    cj["exact_cover"] = c.exact_cover;
    cj["reps_outside_sublattice"] = c.reps_outside_sublattice;
    cj["coefficients_low"] = c.coefficients_low;
    cj["window_width"] = c.window_width;
    Json reps = Json::array();
    for (const CosetRep& rep : c.reps) {
      Json rj;
      rj["lambda"] = to_json(rep.lam);
      Json ex = Json::array();
      for (const auto& [n, cn] : rep.expansion) ex.push_back(Json{{"n", n}, {"c", to_json(cn)}});
      rj["expansion"] = ex;
      if (!rep.expansion.empty()) rj["window"] = Json::array({rep.window_low, rep.window_high});
      reps.push_back(rj);
    }
    cj["reps"] = reps;
    cos.push_back(cj);
  }
  o["sandwich"] = sw;
  o["cosets"] = cos;

  PrecisionPlan plan = plan_of(cfg);
  plan.threads = cfg.parallel;
  const ClusterScan scan = cluster_values(g, l_values(cfg, u.d()), 0, cfg.n_max, plan, cfg.comparison_floor);
  Json pts = Json::array();
  for (const ScanPoint& p : scan.points) pts.push_back(Json{{"N", p.N}, {"l", p.l}, {"j", j_json(p.j)}});
  o["scan"] = pts;
  Json cl = Json::array();
  for (const Cluster& c : scan.clusters) {
    Json support = Json::array();
    for (const auto& [N, l] : c.support) support.push_back(Json::array({N, l}));
    cl.push_back(Json{{"value", j_json(c.value)}, {"support", support}});
  }
  o["comparison_floor"] = scan.comparison_floor;
  o["clusters"] = cl;
  return o;
}

Json cmd_selftest(Json* partial) {
  Json checks = Json::array();
  bool all = true;
  auto record = [&](const std::string& name, const std::function<bool()>& fn) {
    bool ok = false;
    std::string note;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      note = e.what();
    }
    Json c{{"name", name}, {"ok", ok}};
    if (!note.empty()) c["error"] = note;
    checks.push_back(c);
    all = all && ok;
  };

  for (int p : {2, 3}) {
    const FieldPtr F = Field::make(p, 1);
    for (int d = 1; d <= 2; ++d) {
      const Poly a = Poly::t_power(F, d) + Poly::constant(F, Field::one());
      const QuadraticUnit u = solve(a, Field::one(), 64);
      const std::string tag = "q=" + std::to_string(p) + " a=" + to_string(a);
      record("lattice oracle " + tag, [&] {
        for (int N = 0; N <= 2; ++N) {
          for (int l = 0; l < d; ++l) {
            const int bound = (N + 3) * d;
            const auto span = span_elements(F, basis_lambda(u, {N, l, d}).materialize(bound));
            if (span != brute_force_lambda(u.f(), -(N * d + l), bound)) return false;
          }
        }
        return true;
      });
      record("error law and Binet " + tag, [&] {
        binet_terms(u, 8);
        for (int n = 0; n <= 8; ++n) {
          for (int l = 0; l < d; ++l) error_norm(u, n, l);
        }
        return true;
      });
      record("zeta engines agree " + tag, [&] {
        const EpsilonIndex idx{1, 0, d};
        const long long R = 16;
        const BasisDescription desc = basis_lambda(u, idx);
        const long long top = desc.lowest_degree() + R / (p - 1) + 1;
        const auto gens = generators_from_polys(desc.materialize(int(top)), top, R);
        const PowerSumPair x = zeta_pair(gens, R);
        const PowerSumPair y = zeta_pair_enumerated(gens, R);
        return x.z1.value.agrees_on_common(y.z1.value) && x.z2.value.agrees_on_common(y.z2.value);
      });
      record("hat identity " + tag, [&] {
        const EpsilonIndex idx{2, 0, d};
        const long long R = 24;
        const PowerSumPair z = zeta_pair(u, idx, R);
        const Laurent direct = assemble_approximant(z.z1.value, z.z2.value, idx.eps_log(), 0, z.z1.tail_bound).J_tilde;
        return direct.agrees_on_common(hat_J_tilde(u, idx, R));
      });
    }
  }
  Json o{{"checks", checks}, {"ok", all}};
  if (!all) {
    if (partial) *partial = o;
    throw InvariantViolation("selftest failed");
  }
  return o;
}

std::string csv_field(const Json& v) {
  std::string s;
  if (v.is_string()) {
    s = v.get<std::string>();
  } else if (v.is_object() && v.contains("text")) {
    s = v["text"].get<std::string>();
  } else {
    s = v.dump();
  }
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }
  return s;
}

std::string csv_rows(const std::vector<std::string>& header, const std::vector<std::vector<Json>>& rows) {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(r[i]);
    os << "\n";
  }
  return os.str();
}

Json log_q_of(const Json& abs) {
  if (abs.is_object() && abs.contains("log_q")) return abs["log_q"];
  return Json("");
}

}  // namespace

Json to_json(const Field& F, Fq x) {
  if (F.r() == 1) return F.digits(x).empty() ? 0 : F.digits(x).front();
  return Json(F.digits(x));
}

Json to_json(const Poly& p) {
  Json c = Json::array();
  for (Fq x : p.coeffs()) c.push_back(to_json(p.F(), x));
  return Json{{"coeffs", c}, {"text", to_string(p)}};
}

Json to_json(const Laurent& x) {
  Json terms = Json::array();
  const auto& raw = x.raw();
  for (std::size_t i = raw.size(); i-- > 0;) {
    if (raw[i].is_zero()) continue;
    terms.push_back(Json::array({x.floor() + (long long)i, to_json(x.F(), raw[i])}));
  }
  return Json{{"text", to_string(x)}, {"floor", x.floor()}, {"abs", to_json(x.abs())}, {"terms", terms}};
}

Json to_json(const AbsValue& v) {
  Json o{{"text", v.to_string()}};
  switch (v.kind()) {
    case AbsValue::Kind::Power:
      o["kind"] = "power";
      o["log_q"] = v.log_q();
      break;
    case AbsValue::Kind::Zero:
      o["kind"] = "zero";
      break;
    case AbsValue::Kind::Below:
      o["kind"] = "below";
      o["log_q"] = v.log_q();
      break;
  }
  return o;
}

RunConfig parse_config(const Json& j) {
  check_keys(j, kTopKeys, "config");
  RunConfig cfg;
  FieldSpec spec;
  if (j.contains("field")) {
    const Json& f = j["field"];
    check_keys(f, {"p", "r", "modulus"}, "field");
    if (!f.contains("p")) throw ConfigError("field.p is required");
    spec.p = int(get_int(f["p"], "field.p"));
    if (f.contains("r")) spec.r = int(get_int(f["r"], "field.r"));
    if (f.contains("modulus")) spec.modulus = parse_int_list(f["modulus"], "field.modulus");
  } else {
    throw ConfigError("field is required");
  }
  cfg.field = Field::make(spec);

  if (j.contains("unit")) {
    const Json& u = j["unit"];
    check_keys(u, {"a", "b"}, "unit");
    if (!u.contains("a") || !u.contains("b")) throw ConfigError("unit needs a and b");
    cfg.a = parse_poly(cfg.field, u["a"], "unit.a");
    if (cfg.a->degree() <= 0) throw ConfigError("deg a must be positive");
    cfg.b = parse_element(*cfg.field, u["b"], "unit.b");
    if (cfg.b->is_zero()) throw ConfigError("b must be nonzero");
  }
  if (j.contains("rational")) {
    const Json& r = j["rational"];
    check_keys(r, {"num", "den"}, "rational");
    if (!r.contains("num") || !r.contains("den")) throw ConfigError("rational needs num and den");
    Poly num = parse_poly(cfg.field, r["num"], "rational.num");
    Poly den = parse_poly(cfg.field, r["den"], "rational.den");
    if (den.is_zero()) throw ConfigError("rational.den must be nonzero");
    cfg.rational = std::make_pair(std::move(num), std::move(den));
  }
  if (j.contains("general")) {
    const Json& g = j["general"];
    check_keys(g, {"x", "y", "z"}, "general");
    if (!g.contains("x") || !g.contains("y") || !g.contains("z")) throw ConfigError("general needs x, y and z");
    std::array<Poly, 3> xyz{parse_poly(cfg.field, g["x"], "general.x"), parse_poly(cfg.field, g["y"], "general.y"),
                            parse_poly(cfg.field, g["z"], "general.z")};
    if (xyz[1].is_zero() || xyz[2].is_zero()) throw ConfigError("general.y and general.z must be nonzero");
    cfg.general = std::move(xyz);
  }
  if (j.contains("precision")) cfg.precision = get_int(j["precision"], "precision");
  if (j.contains("m_cutoff")) cfg.m_cutoff = int(get_int(j["m_cutoff"], "m_cutoff"));
  if (j.contains("n_max")) cfg.n_max = int(get_int(j["n_max"], "n_max"));
  if (j.contains("l_list")) cfg.l_list = parse_int_list(j["l_list"], "l_list");
  if (j.contains("lattice")) {
    const Json& l = j["lattice"];
    check_keys(l, {"N", "l", "deg_bound"}, "lattice");
    if (l.contains("N")) cfg.N = int(get_int(l["N"], "lattice.N"));
    if (l.contains("l")) cfg.l = int(get_int(l["l"], "lattice.l"));
    if (l.contains("deg_bound")) cfg.deg_bound = int(get_int(l["deg_bound"], "lattice.deg_bound"));
  }
  if (j.contains("eps_logs")) cfg.eps_logs = parse_int_list(j["eps_logs"], "eps_logs");
  if (j.contains("comparison_floor")) cfg.comparison_floor = get_int(j["comparison_floor"], "comparison_floor");
  if (j.contains("output")) {
    const Json& o = j["output"];
    check_keys(o, {"format", "path"}, "output");
    if (o.contains("format")) cfg.format = o["format"].get<std::string>();
    if (o.contains("path")) cfg.out = o["path"].get<std::string>();
  }
  if (j.contains("parallel")) cfg.parallel = int(get_int(j["parallel"], "parallel"));
  apply(cfg, {});
  return cfg;
}

void apply(RunConfig& cfg, const Overrides& o) {
  if (o.precision) cfg.precision = *o.precision;
  if (o.m_cutoff) cfg.m_cutoff = *o.m_cutoff;
  if (o.n_max) cfg.n_max = *o.n_max;
  if (o.N) cfg.N = *o.N;
  if (o.l) cfg.l = *o.l;
  if (o.deg_bound) cfg.deg_bound = *o.deg_bound;
  if (o.comparison_floor) cfg.comparison_floor = *o.comparison_floor;
  if (o.format) cfg.format = *o.format;
  if (o.out) cfg.out = *o.out;
  if (o.parallel) cfg.parallel = *o.parallel;

  if (cfg.precision < 1 || cfg.precision > 256) throw ConfigError("precision must lie in [1, 256]");
  if (cfg.m_cutoff && *cfg.m_cutoff < 0) throw ConfigError("m_cutoff must be nonnegative");
  if (cfg.n_max < 0 || cfg.n_max > 64) throw ConfigError("n_max must lie in [0, 64]");
  if (cfg.comparison_floor < 0) throw ConfigError("comparison_floor must be nonnegative");
  if (cfg.format != "json" && cfg.format != "csv") throw ConfigError("format must be json or csv");
  if (cfg.parallel < 1) throw ConfigError("parallel must be at least 1");
}

Json run_verb(const std::string& verb, const RunConfig& cfg, Json* partial) {
  Json body;
  if (verb == "solve") {
    body = cmd_solve(cfg);
  } else if (verb == "lattice") {
    body = cmd_lattice(cfg, partial);
  } else if (verb == "approx") {
    body = cmd_approx(cfg);
  } else if (verb == "limits") {
    body = cmd_limits(cfg);
  } else if (verb == "general") {
    body = cmd_general(cfg);
  } else if (verb == "selftest") {
    body = cmd_selftest(partial);
  } else {
    throw ConfigError("unknown verb '" + verb + "'");
  }
  Json out{{"verb", verb}};
  for (auto it = body.begin(); it != body.end(); ++it) out[it.key()] = it.value();
  return out;
}

std::string to_csv(const std::string& verb, const Json& r) {
  std::vector<std::vector<Json>> rows;
  if (verb == "solve") {
    for (const auto& row : r["binet"]) {
      for (std::size_t l = 0; l < row["error_norms"].size(); ++l) {
        rows.push_back({row["n"], Json(l), row["Q_bar"], log_q_of(row["error_norms"][l])});
      }
    }
    return csv_rows({"n", "l", "Q_bar", "error_norm_log_q"}, rows);
  }
  if (verb == "lattice") {
    for (const auto& g : r["generators"]) rows.push_back({Json("generator"), g["degree"], g["poly"]});
    for (const auto& p : r["brute_force"]) rows.push_back({Json("element"), Json(""), p});
    return csv_rows({"kind", "degree", "poly"}, rows);
  }
  if (verb == "approx") {
    for (const auto& t : r["trace"]) {
      rows.push_back({t["N"], t["l"], t["eps_log"], t["j"], t["J_tilde"], log_q_of(t["tail_bound"])});
    }
    return csv_rows({"N", "l", "eps_log", "j", "J_tilde", "tail_bound_log_q"}, rows);
  }
  if (verb == "limits") {
    for (const auto& v : r["values"]) {
      for (const auto& p : v["convergence_trace"]) {
        const Json gap = p["gap"];
        rows.push_back({v["l"], p["N"], gap.is_string() ? gap : gap["kind"], gap.is_string() ? Json("") : log_q_of(gap),
                        v["j_l"]});
      }
    }
    return csv_rows({"l", "N", "gap_kind", "gap_log_q", "j_l"}, rows);
  }
  if (verb == "general") {
    const auto& clusters = r["clusters"];
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      for (const auto& s : clusters[c]["support"]) rows.push_back({s[0], s[1], Json(c), clusters[c]["value"]});
    }
    std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
      return std::make_pair(x[0].template get<int>(), x[1].template get<int>()) <
             std::make_pair(y[0].template get<int>(), y[1].template get<int>());
    });
    return csv_rows({"N", "l", "cluster", "j"}, rows);
  }
  if (verb == "selftest") {
    for (const auto& c : r["checks"]) rows.push_back({c["name"], c["ok"]});
    return csv_rows({"check", "ok"}, rows);
  }
  throw ConfigError("no csv layout for '" + verb + "'");
}

Json error_object(const std::string& kind, const std::string& message) {
  return Json{{"error", Json{{"kind", kind}, {"message", message}}}};
}

}  // namespace qtj::cli
