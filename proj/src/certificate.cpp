#include "tropcert/certificate.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "tropcert/log.hpp"
#include "tropcert/parallel.hpp"

namespace tropcert {

namespace {

using json = nlohmann::ordered_json;

json int_vector_json(const IntVector& v) {
  json a = json::array();
  for (const auto& x : v) {
    if (x.fits_slong_p())
      a.push_back(x.get_si());
    else
      a.push_back(x.get_str());
  }
  return a;
}

IntVector int_vector_from(const json& a) {
  IntVector v;
  for (const auto& x : a) {
    if (x.is_number_integer())
      v.emplace_back(static_cast<long>(x.get<int64_t>()));
    else if (x.is_string())
      v.emplace_back(x.get<std::string>());
    else
      throw Error(ErrorCode::SchemaMismatch, "integer expected");
  }
  return v;
}

json rational_vector_json(const RationalVector& v) {
  json a = json::array();
  for (const auto& q : v) a.push_back(to_string(q));
  return a;
}

RationalVector rational_vector_from(const json& a) {
  RationalVector v;
  for (const auto& x : a) v.push_back(parse_rational(x.get<std::string>()));
  return v;
}

json pointedness_json(const PointednessCertificate& c) {
  json j;
  j["verdict"] = c.pointed() ? "Pointed" : "NotPointed";
  json rays = json::array();
  for (const auto& r : c.rays.rays) rays.push_back(int_vector_json(r));
  j["rays"] = std::move(rays);
  if (c.pointed())
    j["witness"] = rational_vector_json(c.witness);
  else
    j["lineality"] = rational_vector_json(c.lineality);
  return j;
}

std::string join_labels(const FamilySelection& f) {
  std::string out;
  for (auto x : f) out += std::string(out.empty() ? "" : ",") + family_name(x);
  return out;
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double lap() {
    auto now = std::chrono::steady_clock::now();
    double s = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

void RunConfig::validate() const {
  if (n < 3) throw Error(ErrorCode::UnsupportedBodyCount, "at least 3 bodies are required");
  if (equations.empty()) throw Error(ErrorCode::InvalidArgument, "empty equation selection");
  if (jobs == 0) throw Error(ErrorCode::InvalidArgument, "worker count must be positive");
  valuations.validate(static_cast<size_t>(n), unsafe_valuations);
}

std::vector<TropicalPolynomial> tropical_system(int n, const FamilySelection& families, const MassValuation& v) {
  std::vector<TropicalPolynomial> out;
  for (const auto& p : build_system(n, families)) out.push_back(tropicalize(p, v));
  return out;
}

RunResult run_certify(const RunConfig& cfg) {
  cfg.validate();
  auto log = logger();
  if (!cfg.valuations.distinct())
    log->warn("repeated mass valuations: the prevariety may not be the generic one");

  RunResult res;
  Stopwatch clock;
  auto system = build_system(cfg.n, cfg.equations);
  if (system.empty()) throw Error(ErrorCode::InvalidArgument, "the selected families give no equations for this n");
  const std::string digest = system_digest(system);
  std::vector<TropicalPolynomial> tropical;
  for (const auto& p : system) tropical.push_back(tropicalize(p, cfg.valuations));
  res.timings.push_back({"equations", clock.lap()});
  log->info("{} polynomials in {} variables, digest {}", system.size(), tropical[0].num_vars(), digest);

  std::vector<Hypersurface> hs(tropical.size());
  parallel_for(tropical.size(), cfg.jobs, [&](size_t i) { hs[i] = build_hypersurface(tropical[i], cfg.mode); });
  res.timings.push_back({"hypersurfaces", clock.lap()});

  EngineOptions eopt;
  eopt.mode = cfg.mode;
  eopt.jobs = cfg.jobs;
  eopt.progress = [&](size_t step, const std::string& label, size_t cells) {
    log->info("step {}/{}: {} -> {} cells", step + 1, hs.size(), label, cells);
  };
  EngineStats stats;
  const auto order = schedule_order(hs, Schedule::by_cell_count);
  res.complex = compute_prevariety(hs, order, eopt, &stats);
  res.escalations = stats.escalations;
  res.timings.push_back({"prevariety", clock.lap()});

  res.f_vector = f_vector(res.complex);
  res.timings.push_back({"f_vector", clock.lap()});

  AnalysisOptions aopt;
  aopt.mode = cfg.mode;
  aopt.jobs = cfg.jobs;
  aopt.force_components = cfg.force_components;
  res.analysis = certify_complex(res.complex, aopt);
  res.verdict = res.analysis.verdict;
  res.timings.push_back({"recession", clock.lap()});
  log->info("{} maximal cells, verdict {}", res.complex.cells.size(), verdict_name(res.verdict));

  res.complex_json = complex_json(res.complex);

  json cert;
  cert["schema_version"] = kCertificateSchema;
  cert["config"] = {{"n", cfg.n},
                    {"valuations", rational_vector_json(cfg.valuations.v)},
                    {"equations", join_labels(cfg.equations)},
                    {"unsafe_valuations", cfg.unsafe_valuations},
                    {"force_components", cfg.force_components}};
  json labels = json::array(), counts = json::array();
  for (size_t i = 0; i < hs.size(); ++i) {
    labels.push_back(tropical[i].label);
    counts.push_back(hs[i].cells.size());
  }
  json schedule = json::array();
  for (size_t i : order) schedule.push_back(tropical[i].label);
  cert["system"] = {{"digest", digest},
                    {"polynomials", system.size()},
                    {"labels", std::move(labels)},
                    {"hypersurface_cells", std::move(counts)},
                    {"schedule", std::move(schedule)}};
  int max_dim = -1;
  for (const auto& c : res.complex.cells) max_dim = std::max(max_dim, c.dim);
  json fv = json::array();
  for (auto k : res.f_vector.counts) fv.push_back(k);
  cert["complex"] = {{"digest", sha256_digest(res.complex_json)},
                     {"ambient_dim", res.complex.ambient_dim},
                     {"lineality_dim", res.complex.lineality.size()},
                     {"maximal_cell_count", res.complex.cells.size()},
                     {"max_dim", max_dim},
                     {"f_vector_min_dim", res.f_vector.min_dim},
                     {"f_vector", std::move(fv)},
                     {"f_vector_convention", "nonempty faces of the maximal cells of the common refinement, by dimension"}};
  json rec;
  rec["stage"] = res.analysis.decided_globally ? "global" : "components";
  rec["global"] = pointedness_json(res.analysis.global);
  cert["recession"] = std::move(rec);
  if (!res.analysis.decided_globally) {
    json comps = json::array();
    for (const auto& r : res.analysis.components) {
      json c = pointedness_json(r.certificate);
      c["id"] = r.component.id;
      c["cells"] = r.component.cell_ids;
      comps.push_back(std::move(c));
    }
    cert["component_count"] = res.analysis.components.size();
    cert["components"] = std::move(comps);
    cert["offending_components"] = res.analysis.offending;
  }
  cert["verdict"] = verdict_name(res.verdict);
  res.certificate_json = cert.dump(1);

  json info;
  info["mode"] = mode_name(cfg.mode);
  info["jobs"] = cfg.jobs;
  json timings = json::object();
  double total = 0;
  for (const auto& t : res.timings) {
    timings[t.phase] = t.seconds;
    total += t.seconds;
  }
  timings["total"] = total;
  info["timings_seconds"] = std::move(timings);
  info["escalations"] = res.escalations;
  info["stage_cells"] = stats.stage_cells;
  res.run_info_json = info.dump(1);

  if (!cfg.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create '" + cfg.out_dir + "': " + ec.message());
    const std::filesystem::path dir(cfg.out_dir);
    write_file((dir / "certificate.json").string(), res.certificate_json);
    write_file((dir / "complex.json").string(), res.complex_json);
    write_file((dir / "run_info.json").string(), res.run_info_json);
    write_file((dir / "equations.json").string(), equations_json(system));
    log->info("wrote certificate, complex, run info and equations to {}", cfg.out_dir);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Verification

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.passed; });
}

std::string VerifyReport::to_json() const {
  json j;
  j["passed"] = passed();
  json a = json::array();
  for (const auto& c : checks) a.push_back({{"check", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["checks"] = std::move(a);
  return j.dump(1);
}

namespace {

// Substitution checks of one recorded pointedness verdict against `rays`.
std::string check_witness(const json& rec, const RaySet& rays) {
  RaySet listed;
  for (const auto& r : rec.at("rays")) listed.rays.push_back(int_vector_from(r));
  if (listed.rays != rays.rays) return "ray list differs from the rays of the dumped cells";
  const std::string verdict = rec.at("verdict").get<std::string>();
  if (verdict == "Pointed") {
    RationalVector c = rational_vector_from(rec.at("witness"));
    for (const auto& v : rays.rays) {
      if (c.size() != v.size()) return "witness has the wrong length";
      if (dot(v, c) < 1) return "witness . ray < 1 for some ray";
    }
    return {};
  }
  if (verdict == "NotPointed") {
    RationalVector lambda = rational_vector_from(rec.at("lineality"));
    if (lambda.size() != rays.size()) return "multiplier count differs from ray count";
    bool nonzero = false;
    for (const auto& l : lambda) {
      if (sgn(l) < 0) return "negative multiplier";
      if (sgn(l) > 0) nonzero = true;
    }
    if (!nonzero) return "all multipliers are zero";
    if (rays.empty()) return "empty ray set cannot be non-pointed";
    for (size_t k = 0; k < rays.rays[0].size(); ++k) {
      Rational s = 0;
      for (size_t i = 0; i < rays.size(); ++i) s += lambda[i] * rays.rays[i][k];
      if (sgn(s) != 0) return "multipliers do not combine the rays to zero";
    }
    return {};
  }
  return "unknown verdict '" + verdict + "'";
}

}  // namespace

VerifyReport verify_certificate_text(const std::string& certificate, const std::string& complex_text) {
  json cert;
  try {
    cert = json::parse(certificate);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaMismatch, std::string("certificate is not valid JSON: ") + e.what());
  }
  if (cert.value("schema_version", "") != kCertificateSchema)
    throw Error(ErrorCode::SchemaMismatch, "unsupported certificate schema");
  const Complex cx = complex_from_json(complex_text);

  VerifyReport rep;
  auto add = [&](std::string name, std::string failure) {
    rep.checks.push_back({std::move(name), failure.empty(), std::move(failure)});
  };

  try {
    const auto& cfg = cert.at("config");
    const int n = cfg.at("n").get<int>();
    MassValuation mv{rational_vector_from(cfg.at("valuations"))};
    const FamilySelection fam = parse_families(cfg.at("equations").get<std::string>());
    mv.validate(static_cast<size_t>(n), cfg.at("unsafe_valuations").get<bool>());
    const auto system = build_system(n, fam);
    if (system_digest(system) != cert.at("system").at("digest").get<std::string>())
      throw Error(ErrorCode::DigestMismatch, "regenerated equations do not match the certificate digest");
    std::vector<TropicalPolynomial> tropical;
    for (const auto& p : system) tropical.push_back(tropicalize(p, mv));

    const auto& cj = cert.at("complex");
    add("complex digest", sha256_digest(complex_text) == cj.at("digest").get<std::string>()
                              ? ""
                              : "complex dump does not match the recorded digest");
    {
      std::string why;
      if (cx.ambient_dim != tropical[0].num_vars()) why = "ambient dimension differs from the equations";
      if (cx.cells.size() != cj.at("maximal_cell_count").get<size_t>()) why = "maximal cell count differs";
      int max_dim = -1;
      for (const auto& c : cx.cells) max_dim = std::max(max_dim, c.dim);
      if (max_dim != cj.at("max_dim").get<int>()) why = "maximal dimension differs";
      add("cell count", why);
    }

    // Every sample is a relative-interior point of its cell, agrees with
    // the generators, and lies on every tropical hypersurface.
    {
      std::string why;
      const size_t n_amb = cx.ambient_dim;
      for (size_t i = 0; i < cx.cells.size() && why.empty(); ++i) {
        const auto& cell = cx.cells[i];
        const std::string at = "cell " + std::to_string(i) + ": ";
        if (!cell.poly.contains_strictly(cell.sample)) why = at + "sample is not a relative-interior point";
        IntVector sum(n_amb + 1, 0);
        for (const auto& g : cell.generators) {
          if (g.size() != n_amb + 1) {
            why = at + "generator has the wrong length";
            break;
          }
          for (size_t k = 0; k <= n_amb; ++k) sum[k] += g[k];
          if (sgn(g[n_amb]) > 0) {
            RationalVector p(n_amb);
            for (size_t k = 0; k < n_amb; ++k) p[k] = Rational(g[k], g[n_amb]);
            for (auto& q : p) q.canonicalize();
            if (!cell.poly.contains(p)) why = at + "vertex violates the cell's constraints";
          } else {
            IntVector r(g.begin(), g.begin() + static_cast<long>(n_amb));
            for (const auto& e : cell.poly.equalities())
              if (sgn(dot(e.normal, r)) != 0) why = at + "ray leaves the affine hull";
            for (const auto& c : cell.poly.inequalities())
              if (sgn(dot(c.normal, r)) > 0) why = at + "ray violates the recession cone";
          }
        }
        if (!why.empty()) break;
        if (sgn(sum[n_amb]) <= 0) {
          why = at + "no vertex";
          break;
        }
        for (size_t k = 0; k < n_amb; ++k) {
          Rational q(sum[k], sum[n_amb]);
          q.canonicalize();
          if (k >= cell.sample.size() || q != cell.sample[k]) {
            why = at + "sample is not the generator barycenter";
            break;
          }
        }
        if (!why.empty()) break;
        for (const auto& tp : tropical) {
          if (min_evaluate(tp, cell.sample).argmin.size() < 2) {
            why = at + "sample is off the hypersurface of " + tp.label;
            break;
          }
        }
      }
      add("cell samples", why);
    }

    {
      FVector fv = f_vector(cx);
      std::vector<size_t> recorded = cj.at("f_vector").get<std::vector<size_t>>();
      bool same = fv.counts == recorded && fv.min_dim == cj.at("f_vector_min_dim").get<int>();
      add("f-vector", same ? "" : "recounted f-vector differs from the recorded one");
    }

    const auto& rec = cert.at("recession");
    {
      std::vector<IntVector> all;
      for (const auto& cell : cx.cells) {
        auto r = cell_recession_rays(cx, cell);
        all.insert(all.end(), r.begin(), r.end());
      }
      add("global recession witness", check_witness(rec.at("global"), RaySet::from(std::move(all))));
    }

    const bool global_pointed = rec.at("global").at("verdict") == "Pointed";
    const std::string stage = rec.at("stage").get<std::string>();
    bool all_pointed = global_pointed;
    if (stage == "components") {
      const auto& comps = cert.at("components");
      std::string why;
      std::vector<int> owner(cx.cells.size(), -1);
      std::vector<Component> parsed;
      for (size_t k = 0; k < comps.size(); ++k) {
        Component comp;
        comp.id = comps[k].at("id").get<size_t>();
        comp.cell_ids = comps[k].at("cells").get<std::vector<size_t>>();
        if (comp.id != k) why = "component ids are not consecutive";
        for (size_t i : comp.cell_ids) {
          if (i >= cx.cells.size() || owner[i] != -1) {
            why = "cell " + std::to_string(i) + " is out of range or listed twice";
            break;
          }
          owner[i] = static_cast<int>(k);
        }
        parsed.push_back(std::move(comp));
      }
      for (size_t i = 0; i < owner.size() && why.empty(); ++i)
        if (owner[i] < 0) why = "cell " + std::to_string(i) + " belongs to no component";
      if (why.empty()) {
        std::unordered_map<IntVector, int, VectorHash> vertex_owner;
        for (size_t i = 0; i < cx.cells.size() && why.empty(); ++i)
          for (const auto& g : cx.cells[i].generators) {
            if (sgn(g[cx.ambient_dim]) <= 0) continue;
            auto [it, fresh] = vertex_owner.try_emplace(g, owner[i]);
            if (!fresh && it->second != owner[i]) {
              why = "cells sharing a vertex lie in different components";
              break;
            }
          }
      }
      if (why.empty() && comps.size() != cert.at("component_count").get<size_t>())
        why = "component count differs from the list";
      add("component partition", why);

      std::string wit;
      std::vector<size_t> offending;
      all_pointed = true;
      for (size_t k = 0; k < parsed.size() && why.empty(); ++k) {
        std::string w = check_witness(comps[k], component_recession_rays(cx, parsed[k]));
        if (!w.empty() && wit.empty()) wit = "component " + std::to_string(k) + ": " + w;
        if (comps[k].at("verdict") != "Pointed") {
          all_pointed = false;
          offending.push_back(k);
        }
      }
      if (!why.empty()) wit = "skipped: invalid partition";
      if (wit.empty() && offending != cert.at("offending_components").get<std::vector<size_t>>())
        wit = "offending component list differs";
      add("component witnesses", wit);
    } else if (stage != "global" || !global_pointed || cfg.value("force_components", false)) {
      add("recession stage", "a global decision needs a pointed global cone and no forced decomposition");
      all_pointed = false;
    }

    const std::string verdict = cert.at("verdict").get<std::string>();
    const std::string expected = all_pointed ? "Certified" : "Inconclusive";
    add("verdict", verdict == expected ? "" : "verdict '" + verdict + "' does not follow from the witnesses");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaMismatch, std::string("malformed certificate: ") + e.what());
  }
  return rep;
}

VerifyReport run_verify(const std::string& cert_path, const std::string& complex_path) {
  return verify_certificate_text(read_file(cert_path), read_file(complex_path));
}

// ---------------------------------------------------------------------------
// Oracle

bool OracleSupport::contains(const RationalVector& w) const {
  return std::any_of(cells.begin(), cells.end(), [&](const Cell& c) { return c.poly.contains(w); });
}

OracleSupport run_oracle(const std::vector<TropicalPolynomial>& system, ArithmeticMode mode) {
  if (system.empty() || system.size() > 3)
    throw Error(ErrorCode::OracleTooLarge, "the oracle takes 1 to 3 polynomials");
  for (const auto& tp : system) {
    if (tp.terms.size() > 6) throw Error(ErrorCode::OracleTooLarge, "the oracle takes at most 6 terms per polynomial");
    if (tp.terms.size() < 2) throw Error(ErrorCode::EmptyHypersurface, "'" + tp.label + "' has fewer than two terms");
    if (tp.num_vars() != system[0].num_vars())
      throw Error(ErrorCode::AmbientMismatch, "polynomials live in different ambient dimensions");
  }
  OracleSupport out;
  std::set<std::string> seen;
  const size_t n = system[0].num_vars();
  std::function<void(size_t, const HPolyhedron&)> walk = [&](size_t i, const HPolyhedron& acc) {
    if (i == system.size()) {
      if (!lp_feasible(acc, mode).feasible()) return;
      Cell c = make_cell(acc, mode);
      if (seen.insert(c.poly.key()).second) out.cells.push_back(std::move(c));
      return;
    }
    const auto& tp = system[i];
    for (size_t a = 0; a < tp.terms.size(); ++a)
      for (size_t b = a + 1; b < tp.terms.size(); ++b)
        walk(i + 1, acc.intersect(argmin_region(tp, {a, b})));
  };
  walk(0, HPolyhedron(n));
  std::sort(out.cells.begin(), out.cells.end(),
            [](const Cell& x, const Cell& y) { return x.poly.key() < y.poly.key(); });
  return out;
}

bool same_support(const Complex& engine, const OracleSupport& oracle) {
  auto in_engine = [&](const RationalVector& w) {
    return std::any_of(engine.cells.begin(), engine.cells.end(), [&](const Cell& c) { return c.poly.contains(w); });
  };
  for (const auto& c : engine.cells)
    if (!oracle.contains(c.sample)) return false;
  for (const auto& c : oracle.cells)
    if (!in_engine(c.sample)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Projections and files

std::string projection_json(const Complex& c, const std::vector<size_t>& axes) {
  if (axes.size() < 2 || axes.size() > 3) throw Error(ErrorCode::InvalidArgument, "projection needs 2 or 3 axes");
  for (size_t a : axes)
    if (a >= c.ambient_dim) throw Error(ErrorCode::InvalidArgument, "projection axis out of range");
  const size_t n = c.ambient_dim;
  json j;
  j["axes"] = axes;
  json lin = json::array();
  for (const auto& l : c.lineality) {
    IntVector p;
    for (size_t a : axes) p.push_back(l[a]);
    lin.push_back(int_vector_json(p));
  }
  j["lineality"] = std::move(lin);
  json cells = json::array();
  for (size_t i = 0; i < c.cells.size(); ++i) {
    const auto& cell = c.cells[i];
    json verts = json::array(), rays = json::array();
    for (const auto& g : cell.generators) {
      if (sgn(g[n]) > 0) {
        RationalVector p;
        for (size_t a : axes) {
          Rational q(g[a], g[n]);
          q.canonicalize();
          p.push_back(q);
        }
        verts.push_back(rational_vector_json(p));
      } else {
        IntVector p;
        for (size_t a : axes) p.push_back(g[a]);
        rays.push_back(int_vector_json(p));
      }
    }
    cells.push_back({{"cell", i}, {"dim", cell.dim}, {"vertices", std::move(verts)}, {"rays", std::move(rays)}});
  }
  j["cells"] = std::move(cells);
  return j.dump(1);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  out << content;
  if (!out) throw Error(ErrorCode::Io, "write to '" + path + "' failed");
}

}  // namespace tropcert
