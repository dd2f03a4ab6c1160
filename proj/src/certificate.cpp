#include "maxtsp/certificate.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "maxtsp/oracle.hpp"

namespace maxtsp {

std::string Ratio::exact() const { return std::to_string(p) + "/" + std::to_string(q); }

std::string Ratio::decimal() const {
  // Integer arithmetic so the text never depends on floating-point formatting.
  const Weight scaled = (p * 2000000 + q) / (2 * q);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%lld.%06lld", static_cast<long long>(scaled / 1000000),
                static_cast<long long>(scaled % 1000000));
  return buf;
}

Ratio make_ratio(Weight num, Weight den) {
  if (den == 0) return {1, 1};
  const Weight d = std::gcd(num, den);
  return {num / d, den / d};
}

bool VerifyReport::ok() const {
  return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == CheckStatus::fail; });
}

const CheckResult* VerifyReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
  }
  return "?";
}

Json report_to_json(const VerifyReport& r) {
  Json out = Json::array();
  for (const auto& c : r.checks) {
    Json j;
    j["name"] = c.name;
    j["status"] = status_name(c.status);
    if (!c.detail.empty()) j["detail"] = c.detail;
    out.push_back(std::move(j));
  }
  return out;
}

namespace {

Json edges_json(const std::vector<EdgeId>& edges) {
  Json a = Json::array();
  for (const auto& e : edges) a.push_back({e.u, e.v});
  return a;
}

Json coloring_json(const PathColoring& c) {
  Json a = Json::array();
  for (const auto& s : c.slots) a.push_back({s.edge.u, s.edge.v, s.mask});
  return a;
}

Json ledger_json(const StageLedger& L, std::optional<Weight> opt) {
  Json j;
  j["w_cmax"] = L.cmax;
  j["w_m"] = L.m;
  j["w_c2_doubled"] = L.c2_doubled;
  j["w_i"] = L.i;
  j["w_z1"] = L.z1;
  j["w_z2"] = L.z2;
  j["w_z"] = L.z;
  j["w_f1"] = L.f1;
  j["w_f2"] = L.f2;
  j["w_g1prime"] = L.g1_total;
  j["w_g2prime"] = L.g2_total;
  j["class_weights"] = L.class_weights;
  j["best_class"] = L.best_class;
  j["kites3"] = L.kites3;
  j["kites4"] = L.kites4;
  j["repairs"] = L.repairs;
  j["widening"] = L.widening;
  j["opt"] = opt ? Json(*opt) : Json(nullptr);
  return j;
}

class Checker {
 public:
  void add(const std::string& name, bool ok, const std::string& detail = "") {
    report.checks.push_back({name, ok ? CheckStatus::pass : CheckStatus::fail, ok ? "" : detail});
  }
  void skip(const std::string& name, const std::string& detail) {
    report.checks.push_back({name, CheckStatus::skipped, detail});
  }
  VerifyReport report;
};

std::string str(EdgeId e) { return "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")"; }

EdgeId parse_edge(const Json& j, int n) {
  const int u = j.at(0).get<int>();
  const int v = j.at(1).get<int>();
  if (u < 0 || v < 0 || u >= n || v >= n || u == v) throw InstanceError("edge out of range");
  return EdgeId(u, v);
}

std::vector<EdgeId> parse_edges(const Json& j, int n) {
  std::vector<EdgeId> out;
  for (const auto& e : j) out.push_back(parse_edge(e, n));
  return out;
}

PathColoring parse_coloring(const Json& j, int n, ColorMask palette) {
  PathColoring c;
  c.palette = palette;
  for (const auto& s : j) {
    const auto mask = s.at(2).get<ColorMask>();
    if ((mask & ~palette) != 0 || mask == 0) throw InstanceError("colour outside the palette");
    c.slots.push_back({parse_edge(s, n), color_count(mask), mask});
  }
  return c;
}

std::map<EdgeId, int> slot_multiplicity(const PathColoring& c) {
  std::map<EdgeId, int> m;
  for (const auto& s : c.slots) m[s.edge] += color_count(s.mask);
  return m;
}

constexpr const char* kF12Names[kF12Checks] = {"f12_property_1", "f12_property_2", "f12_property_3",
                                               "f12_property_4", "f12_property_5", "f12_property_6",
                                               "f12_property_7", "f12_foot",       "f12_vertical"};

const char* const kPipelineChecks[] = {"cycle_cover",         "perfect_matching",    "kites",
                                       "relaxed_cover",       "f12_property_1",      "f12_property_2",
                                       "f12_property_3",      "f12_property_4",      "f12_property_5",
                                       "f12_property_6",      "f12_property_7",      "f12_foot",
                                       "f12_vertical",        "z_heavier_half",      "g1_coloring_covers",
                                       "g1_classes_are_paths", "g2_coloring_covers", "g2_classes_are_paths",
                                       "ledger_consistent",   "best_class",          "class_in_tour",
                                       "ledger_cmax_ge_opt",  "ledger_matching_ge_half_opt",
                                       "ledger_c2_ge_opt",    "ledger_g2_ge_three_halves_opt"};

// Every check on the even instance the pipeline ran on. `tour_has` tells whether an
// edge of that instance is realised by the final tour.
void check_pipeline(Checker& ck, const CompleteGraph& h, const Json& p, const Json& ledger,
                    const std::function<bool(EdgeId)>& tour_has, std::optional<Weight> tour_weight_value, bool with_oracle) {
  const int n = h.size();
  if (p.at("n").get<int>() != n) throw InstanceError("pipeline vertex count mismatch");
  CycleCover cmax;
  for (const auto& c : p.at("cmax")) cmax.cycles.push_back(c.get<std::vector<Vertex>>());
  const bool cover_ok = is_cycle_cover(cmax, n);
  ck.add("cycle_cover", cover_ok && cmax.weight(h) == ledger.at("w_cmax").get<Weight>(),
         cover_ok ? "weight differs from the ledger" : "not a cycle cover");
  if (!cover_ok) throw InstanceError("C_max is not a cycle cover");

  Matching m;
  m.pairs = parse_edges(p.at("matching"), n);
  m.weight = edge_set_weight(h, m.pairs);
  {
    std::vector<int> deg(n, 0);
    for (const auto& e : m.pairs) ++deg[e.u], ++deg[e.v];
    const bool perfect = std::all_of(deg.begin(), deg.end(), [](int d) { return d == 1; });
    ck.add("perfect_matching", perfect && m.weight == ledger.at("w_m").get<Weight>(),
           perfect ? "weight differs from the ledger" : "not a perfect matching");
    if (!perfect) throw InstanceError("M is not a perfect matching");
  }
  std::sort(m.pairs.begin(), m.pairs.end());

  const auto kites = find_kites(cmax, m);
  int k3 = 0;
  int k4 = 0;
  for (const auto& k : kites) (k.kind == KiteKind::three ? k3 : k4) += 1;
  ck.add("kites", k3 == ledger.at("kites3").get<int>() && k4 == ledger.at("kites4").get<int>(),
         "found " + std::to_string(k3) + " 3-kites and " + std::to_string(k4) + " 4-kites");

  RelaxedCycleCover c2;
  c2.whole_edges = parse_edges(p.at("c2").at("whole"), n);
  for (const auto& hj : p.at("c2").at("half")) {
    const EdgeId e = parse_edge(hj, n);
    const Vertex at = hj.at(2).get<Vertex>();
    if (!e.contains(at)) throw InstanceError("half-edge endpoint is not on its edge");
    c2.half_edges.push_back({e, at});
  }
  Weight h_weight = 0;
  for (const auto& hh : c2.half_edges) h_weight += h.weight(hh.edge);
  c2.weight = 2 * edge_set_weight(h, c2.whole_edges) + h_weight;
  const auto def1 = check_relaxed_cover(c2, kites, n);
  ck.add("relaxed_cover", def1.ok() && c2.weight == ledger.at("w_c2_doubled").get<Weight>(),
         def1.ok() ? "weight differs from the ledger" : def1.failures.empty() ? "" : def1.failures.front());

  Orientation o = build_orientations(c2, kites);
  for (const auto& w : p.at("flipped_walks")) {
    const int i = w.get<int>();
    if (i < 0 || i >= o.walk_count()) throw InstanceError("walk index out of range");
    o.flipped[i] = 1;
  }
  ExchangePair fp;
  fp.f1 = parse_edges(p.at("f1"), n);
  fp.f2 = parse_edges(p.at("f2"), n);
  std::set<int> z;
  for (const auto& i : p.at("z")) {
    const int x = i.get<int>();
    if (x < 0 || x >= static_cast<int>(c2.half_edges.size())) throw InstanceError("half-edge index out of range");
    z.insert(x);
  }
  for (int i = 0; i < static_cast<int>(c2.half_edges.size()); ++i) (z.count(i) ? fp.split.z1 : fp.split.z2).push_back(i);
  fp.split.use_z1 = true;
  fp.orientation = o;
  ExchangeContext ctx{&h, &cmax, &m, &kites, &c2, &fp.orientation};
  F12Report f12;
  try {
    f12 = verify_f12(ctx, fp);
  } catch (const std::exception& e) {
    f12.pass.fill(false);
    f12.witnesses.push_back(e.what());
  }
  for (int i = 0; i < kF12Checks; ++i) {
    std::string why;
    const std::string tag = i < 7 ? "property " + std::to_string(i + 1) : i == 7 ? "property 8" : "property 9";
    for (const auto& w : f12.witnesses)
      if (w.rfind(tag, 0) == 0 && why.empty()) why = w;
    if (why.empty() && !f12.witnesses.empty()) why = f12.witnesses.front();
    ck.add(kF12Names[i], f12.pass[i], why);
  }
  const Weight zw = split_weight(c2, fp.split.z1, h);
  ck.add("z_heavier_half", 2 * zw >= h_weight, "w(Z) is below half of w(H)");

  const auto k3c = parse_coloring(p.at("g1_coloring"), n, kPaletteK3);
  const auto k2c = parse_coloring(p.at("g2_coloring"), n, kPaletteK2);
  std::map<EdgeId, int> g1m;
  try {
    g1m = g1prime_multiplicity(cmax, m, fp.f1, fp.f2);
  } catch (const std::exception&) {
  }
  ck.add("g1_coloring_covers", slot_multiplicity(k3c) == g1m, "colour counts differ from the multiplicities of G'1");
  const auto a3 = audit_path_coloring(k3c, n);
  ck.add("g1_classes_are_paths", a3.bad_classes.empty(), a3.failures.empty() ? "" : a3.failures.front());
  std::map<EdgeId, int> g2m;
  try {
    g2m = build_g2prime(n, c2, fp.split.z_edges(c2), fp.f1, fp.f2, m).multiplicity;
  } catch (const std::exception&) {
  }
  ck.add("g2_coloring_covers", slot_multiplicity(k2c) == g2m, "colour counts differ from the multiplicities of G'2");
  const auto a2 = audit_path_coloring(k2c, n);
  ck.add("g2_classes_are_paths", a2.bad_classes.empty(), a2.failures.empty() ? "" : a2.failures.front());

  const Weight wi = edge_set_weight(h, c2.whole_edges);
  const Weight wz1 = zw;
  const Weight wz2 = split_weight(c2, fp.split.z2, h);
  const Weight wf1 = edge_set_weight(h, fp.f1);
  const Weight wf2 = edge_set_weight(h, fp.f2);
  const Weight wc = cmax.weight(h);
  std::array<Weight, 5> cw{};
  for (int c = 1; c <= 5; ++c) cw[c - 1] = (c <= 3 ? k3c : k2c).class_weight(h, c);
  std::vector<std::string> diffs;
  const auto same = [&](const char* key, Weight v) {
    if (ledger.at(key).get<Weight>() != v) diffs.push_back(key);
  };
  same("w_i", wi);
  same("w_z1", wz1);
  same("w_z2", wz2);
  same("w_z", wz1);
  same("w_f1", wf1);
  same("w_f2", wf2);
  same("w_g1prime", 2 * wc + m.weight - wf1 + wf2);
  same("w_g2prime", wi + wz1 + m.weight + wf1 - wf2);
  if (ledger.at("class_weights").get<std::array<Weight, 5>>() != cw) diffs.push_back("class_weights");
  ck.add("ledger_consistent", diffs.empty(), diffs.empty() ? "" : "mismatch in " + diffs.front());

  int best = 1;
  for (int c = 2; c <= 5; ++c)
    if (cw[c - 1] > cw[best - 1]) best = c;
  const int claimed = p.at("best_class").get<int>();
  ck.add("best_class", claimed == best && ledger.at("best_class").get<int>() == best,
         "class " + std::to_string(best) + " is the heaviest");
  const auto cls = (claimed <= 3 ? k3c : k2c).color_class(std::clamp(claimed, 1, 5));
  std::string missing;
  for (const auto& e : cls)
    if (!tour_has(e) && missing.empty()) missing = str(e);
  ck.add("class_in_tour", missing.empty() && (!tour_weight_value || *tour_weight_value >= cw[best - 1]),
         missing.empty() ? "tour is lighter than the class" : "tour misses " + missing);

  const char* bounds[] = {"ledger_cmax_ge_opt", "ledger_matching_ge_half_opt", "ledger_c2_ge_opt",
                          "ledger_g2_ge_three_halves_opt"};
  if (!with_oracle || n > kOracleTspLimit) {
    for (const char* b : bounds) ck.skip(b, "no exact optimum at this size");
    return;
  }
  const Weight opt = oracle_max_tsp(h);
  const auto& lopt = ledger.at("opt");
  if (!lopt.is_null() && lopt.get<Weight>() != opt) ck.add("ledger_opt", false, "ledger optimum is not exact");
  ck.add(bounds[0], wc >= opt, std::to_string(wc) + " < " + std::to_string(opt));
  ck.add(bounds[1], 2 * m.weight >= opt, "2 w(M) = " + std::to_string(2 * m.weight));
  ck.add(bounds[2], c2.weight >= 2 * opt, "doubled w(C2) = " + std::to_string(c2.weight));
  ck.add(bounds[3], 2 * (wi + wz1 + m.weight) >= 3 * opt, "2 (w(I) + w(Z) + w(M)) below 3 OPT");
}

}  // namespace

Json make_certificate(const CompleteGraph& g, const SolveResult& result, const SolveOptions& solve_options,
                      const CertificateOptions& options) {
  const int n = g.size();
  Json doc;
  doc["format"] = "maxtsp-certificate";
  doc["version"] = kCertificateVersion;
  doc["n"] = n;
  doc["mode"] = {{"fast_odd", solve_options.fast_odd}, {"oracle", options.with_oracle}};
  doc["tour"] = result.tour.order;
  doc["tour_weight"] = result.tour.weight;
  std::optional<Weight> opt;
  if (options.with_oracle && n <= kOracleTspLimit) opt = oracle_max_tsp(g);
  doc["opt"] = opt ? Json(*opt) : Json(nullptr);
  if (opt) {
    const auto r = make_ratio(result.tour.weight, *opt);
    doc["ratio"] = {{"exact", r.exact()}, {"decimal", r.decimal()}};
  } else {
    doc["ratio"] = nullptr;
  }
  doc["bound_guaranteed"] = result.bound_guaranteed;
  if (result.shrunk) {
    doc["odd"] = {{"shrunk_edge", {result.shrunk->u, result.shrunk->v}}, {"candidates", result.odd_candidates}};
  } else {
    doc["odd"] = nullptr;
  }
  if (result.run) {
    const auto& r = *result.run;
    const int hn = r.graph.size();
    Json p;
    p["n"] = hn;
    p["cmax"] = r.cmax.cycles;
    p["matching"] = edges_json(r.m.pairs);
    Json half = Json::array();
    for (const auto& h : r.c2.half_edges) half.push_back({h.edge.u, h.edge.v, h.endpoint});
    p["c2"] = {{"whole", edges_json(r.c2.whole_edges)}, {"half", half}};
    std::vector<int> flips;
    for (int w = 0; w < r.orientation.walk_count(); ++w)
      if (r.orientation.flipped[w]) flips.push_back(w);
    p["flipped_walks"] = flips;
    p["z"] = r.exchange.split.z();
    p["f1"] = edges_json(r.exchange.f1);
    p["f2"] = edges_json(r.exchange.f2);
    Json cases = Json::array();
    for (const auto& k : r.exchange.kites) cases.push_back(k.case_id);
    p["kite_cases"] = cases;
    p["g1_coloring"] = coloring_json(r.k3);
    p["g2_coloring"] = coloring_json(r.k2);
    p["best_class"] = r.ledger.best_class;
    doc["pipeline"] = p;
    std::optional<Weight> lopt;
    if (options.with_oracle && hn <= kOracleTspLimit) lopt = result.shrunk ? oracle_max_tsp(r.graph) : opt;
    doc["ledger"] = ledger_json(r.ledger, lopt);
  } else {
    doc["pipeline"] = nullptr;
    doc["ledger"] = nullptr;
  }
  doc["checks"] = Json::array();
  doc["checks"] = report_to_json(verify_certificate(g, doc));
  if (options.include_trace && result.run) doc["trace"] = result.run->trace;
  return doc;
}

VerifyReport verify_certificate(const CompleteGraph& g, const Json& cert) {
  Checker ck;
  const int n = g.size();
  try {
    const bool header = cert.at("format") == "maxtsp-certificate" && cert.at("version") == kCertificateVersion &&
                        cert.at("n").get<int>() == n;
    ck.add("format", header, "format, version or vertex count does not match");
    if (!header) return ck.report;
  } catch (const std::exception& e) {
    ck.add("format", false, e.what());
    return ck.report;
  }

  std::vector<Vertex> tour;
  Weight claimed = 0;
  try {
    tour = cert.at("tour").get<std::vector<Vertex>>();
    claimed = cert.at("tour_weight").get<Weight>();
  } catch (const std::exception& e) {
    ck.add("tour_valid", false, e.what());
    return ck.report;
  }
  const bool valid = is_tour(tour, n);
  ck.add("tour_valid", valid, "not a permutation of the vertices");
  if (!valid) return ck.report;
  const Weight tw = tour_weight(g, tour);
  ck.add("tour_weight", tw == claimed, "recomputed " + std::to_string(tw));

  const bool with_oracle = cert.value("mode", Json::object()).value("oracle", true);
  std::optional<Weight> opt;
  if (with_oracle && n <= kOracleTspLimit) {
    opt = oracle_max_tsp(g);
    const auto& c = cert.at("opt");
    ck.add("opt_exact", !c.is_null() && c.get<Weight>() == *opt, "exact optimum is " + std::to_string(*opt));
    const auto r = make_ratio(tw, *opt);
    const auto& cr = cert.at("ratio");
    ck.add("ratio_exact", !cr.is_null() && cr.value("exact", "") == r.exact() && cr.value("decimal", "") == r.decimal(),
           "ratio is " + r.exact());
    const bool bound = 5 * tw >= 4 * *opt;
    if (bound || cert.value("bound_guaranteed", true)) {
      ck.add("ratio_bound", bound, "5 ALG < 4 OPT at ratio " + r.exact());
    } else {
      ck.skip("ratio_bound", "below 4/5 in the heuristic odd mode: " + r.exact());
    }
  } else {
    ck.skip("opt_exact", "no exact optimum at this size");
    ck.skip("ratio_exact", "no exact optimum at this size");
    ck.skip("ratio_bound", "no exact optimum at this size");
  }

  const auto& p = cert.contains("pipeline") ? cert.at("pipeline") : Json(nullptr);
  if (p.is_null()) {
    const bool small = n <= 5;
    ck.add("small_exact", small && opt && tw == *opt, "no pipeline section for n > 5");
    for (const char* name : kPipelineChecks) ck.skip(name, "solved by enumeration");
    return ck.report;
  }
  try {
    CompleteGraph h = g;
    std::function<bool(EdgeId)> tour_has;
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[tour[i]] = i;
    const auto adjacent = [&](Vertex a, Vertex b) {
      const int d = std::abs(pos[a] - pos[b]);
      return d == 1 || d == n - 1;
    };
    const auto& odd = cert.at("odd");
    if (n % 2 == 1) {
      if (odd.is_null()) throw InstanceError("odd instance without a shrunk edge");
      const EdgeId e = parse_edge(odd.at("shrunk_edge"), n);
      ck.add("shrunk_edge_in_tour", adjacent(e.u, e.v), "tour does not use " + str(e));
      h = shrink_edge(g, e);
      const auto lift = [e](Vertex x) { return x >= e.v ? x + 1 : x; };
      tour_has = [=](EdgeId f) {
        const Vertex a = lift(f.u);
        const Vertex b = lift(f.v);
        if (a == e.u) return adjacent(b, e.u) || adjacent(b, e.v);
        if (b == e.u) return adjacent(a, e.u) || adjacent(a, e.v);
        return adjacent(a, b);
      };
    } else {
      tour_has = [&](EdgeId f) { return adjacent(f.u, f.v); };
    }
    check_pipeline(ck, h, p, cert.at("ledger"), tour_has, n % 2 == 0 ? std::optional<Weight>(tw) : std::nullopt, with_oracle);
  } catch (const std::exception& e) {
    ck.add("pipeline_format", false, e.what());
  }
  return ck.report;
}

}  // namespace maxtsp
