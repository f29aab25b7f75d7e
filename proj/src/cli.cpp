#include "detfun/cli.hpp"

#include "detfun/errors.hpp"
#include "detfun/tstructure.hpp"
#include "detfun/universal.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace detfun {

bool FragmentFile::operator==(const FragmentFile& o) const {
  if (!(fragment == o.fragment) || det_data.size() != o.det_data.size()) return false;
  for (const auto& [spec, d] : det_data) {
    auto it = o.det_data.find(spec);
    if (it == o.det_data.end()) return false;
    const DetData& e = it->second;
    if (d.model->spec() != e.model->spec() || d.f1_obj != e.f1_obj || d.f1_iso != e.f1_iso || d.f2 != e.f2) return false;
  }
  return true;
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& msg) { throw InputError(where + ": " + msg); }

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

long long integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<long long>();
}

std::string text(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

const Json& array(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  return j;
}

std::string at(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }
std::string dot(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

Json big_json(const BigInt& v) {
  if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
    return static_cast<long long>(v);
  return v.str();
}

Json vec_json(const std::vector<long long>& v) { return Json(v); }

Json matrix_json(const MatFp& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

MatFp matrix_from(const Json& j, std::uint32_t p, std::size_t rows, std::size_t cols, const std::string& where) {
  array(j, where);
  if (j.size() != rows) fail(where, "expected " + std::to_string(rows) + " rows");
  MatFp m(p, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const Json& row = array(j[i], at(where, i));
    if (row.size() != cols) fail(at(where, i), "expected " + std::to_string(cols) + " entries");
    for (std::size_t k = 0; k < cols; ++k) {
      long long v = integer(row[k], at(at(where, i), k));
      if (v < 0 || v >= static_cast<long long>(p)) fail(at(at(where, i), k), "entry not reduced mod " + std::to_string(p));
      m.set(i, k, v);
    }
  }
  return m;
}

std::vector<std::size_t> dims_from(const Json& j, const std::string& where) {
  std::vector<std::size_t> dims;
  array(j, where);
  for (std::size_t i = 0; i < j.size(); ++i) {
    long long d = integer(j[i], at(where, i));
    if (d < 0) fail(at(where, i), "negative dimension");
    dims.push_back(static_cast<std::size_t>(d));
  }
  return dims;
}

Json complex_json(const Complex& c) {
  Json j{{"lo", c.lo()}, {"dims", c.terms().dims()}, {"diffs", Json::array()}};
  for (int i = c.lo(); i < c.hi(); ++i) j["diffs"].push_back(matrix_json(c.diff(i)));
  return j;
}

Complex complex_from(const Json& j, std::uint32_t p, const std::string& where) {
  int lo = static_cast<int>(integer(field(j, "lo", where), dot(where, "lo")));
  auto dims = dims_from(field(j, "dims", where), dot(where, "dims"));
  const Json& dj = array(field(j, "diffs", where), dot(where, "diffs"));
  if (dj.size() + 1 > std::max<std::size_t>(dims.size(), 1)) fail(dot(where, "diffs"), "too many differentials");
  std::vector<MatFp> diffs;
  for (std::size_t k = 0; k < dj.size(); ++k) diffs.push_back(matrix_from(dj[k], p, dims[k + 1], dims[k], at(dot(where, "diffs"), k)));
  try {
    return Complex(p, lo, dims, diffs);
  } catch (const InputError& e) {
    fail(where, e.what());
  }
}

Json graded_json(const GradedObject& a) { return Json{{"lo", a.lo()}, {"dims", a.dims()}}; }

GradedObject graded_from(const Json& j, std::uint32_t p, const std::string& where) {
  int lo = static_cast<int>(integer(field(j, "lo", where), dot(where, "lo")));
  return GradedObject(p, lo, dims_from(field(j, "dims", where), dot(where, "dims")));
}

template <class T>
Json endpoint_json(const T& x, const std::map<std::string, T>& named) {
  for (const auto& [n, y] : named)
    if (y == x) return n;
  if constexpr (std::is_same_v<T, Complex>) return complex_json(x);
  else return graded_json(x);
}

template <class T, class Parse>
T endpoint_from(const Json& j, const std::map<std::string, T>& named, Parse parse, const std::string& where) {
  if (j.is_string()) {
    auto it = named.find(j.get<std::string>());
    if (it == named.end()) fail(where, "unknown object '" + j.get<std::string>() + "'");
    return it->second;
  }
  return parse(j, where);
}

template <class Map>
Json map_json(const Map& f, int lo, int hi) {
  Json comps = Json::object();
  for (int i = lo; i <= hi; ++i) {
    MatFp m = f.comp(i);
    if (m.rows() > 0 && m.cols() > 0 && !m.is_zero()) comps[std::to_string(i)] = matrix_json(m);
  }
  return comps;
}

std::map<int, MatFp> comps_from(const Json& j, std::uint32_t p, const auto& src, const auto& tgt, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object keyed by degree");
  std::map<int, MatFp> comps;
  for (const auto& [key, m] : j.items()) {
    int i = 0;
    try {
      std::size_t used = 0;
      i = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      fail(dot(where, key), "degree is not an integer");
    }
    comps.emplace(i, matrix_from(m, p, tgt.dim(i), src.dim(i), dot(where, key)));
  }
  return comps;
}

const char* kind_name(FragmentKind k) { return k == FragmentKind::exact ? "exact" : "triangulated"; }

Json det_json(const DetData& d) {
  Json j{{"objects", Json::object()}, {"isos", Json::object()}, {"triangles", Json::object()}};
  for (const auto& [n, x] : d.f1_obj) j["objects"][n] = vec_json(x);
  for (const auto& [n, x] : d.f1_iso) j["isos"][n] = vec_json(x);
  for (const auto& [n, x] : d.f2) j["triangles"][n] = vec_json(x);
  return j;
}

std::vector<long long> ints_from(const Json& j, const std::string& where) {
  std::vector<long long> v;
  array(j, where);
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(integer(j[i], at(where, i)));
  return v;
}

DetData det_from(const Json& j, const std::string& spec, const Fragment& frag, const std::string& where) {
  DetData d;
  try {
    d.model = parse_model(spec);
  } catch (const InputError& e) {
    fail(where, e.what());
  }
  auto section = [&](const char* key, std::map<std::string, std::vector<long long>>& out, bool objects, auto known) {
    std::string w = dot(where, key);
    if (!j.contains(key)) return;
    if (!j[key].is_object()) fail(w, "expected an object");
    for (const auto& [n, v] : j[key].items()) {
      if (!known(n)) fail(dot(w, n), "unknown record");
      auto x = ints_from(v, dot(w, n));
      if (objects ? !d.model->valid_obj(x) : !d.model->valid_elt(x)) fail(dot(w, n), "not a value of " + spec);
      out[n] = x;
    }
  };
  section("objects", d.f1_obj, true, [&](const std::string& n) { return frag.has_object(n); });
  section("isos", d.f1_iso, false, [&](const std::string& n) {
    return std::any_of(frag.isos.begin(), frag.isos.end(), [&](const IsoRecord& r) { return r.name == n; });
  });
  section("triangles", d.f2, false, [&](const std::string& n) {
    return std::any_of(frag.triangles.begin(), frag.triangles.end(), [&](const TriangleRecord& r) { return r.name == n; });
  });
  return d;
}

}  // namespace

Json to_json(const FragmentFile& file) {
  const Fragment& f = file.fragment;
  Json j;
  j["kind"] = kind_name(f.kind);
  j["prime"] = f.prime;
  j["objects"] = f.objects;
  j["translation"] = Json::object();
  for (const auto& [a, b] : f.translation) j["translation"][a] = b;
  j["isos"] = Json::array();
  for (const auto& r : f.isos) {
    Json x{{"name", r.name}, {"src", r.src}, {"dst", r.dst}};
    if (r.inverse) x["inverse"] = *r.inverse;
    j["isos"].push_back(x);
  }
  j["triangles"] = Json::array();
  for (const auto& t : f.triangles)
    j["triangles"].push_back({{"name", t.name}, {"A", t.A}, {"B", t.B}, {"C", t.C}, {"a", t.a}, {"b", t.b}, {"c", t.c}});
  j["octahedra"] = Json::array();
  for (const auto& o : f.octahedra)
    j["octahedra"].push_back({{"name", o.name}, {"h1", o.h1}, {"h2", o.h2}, {"v1", o.v1}, {"v2", o.v2}});
  j["sums"] = Json::array();
  for (const auto& s : f.sums)
    j["sums"].push_back({{"name", s.name}, {"A", s.A}, {"B", s.B}, {"S", s.S}, {"d1", s.d1}, {"d2", s.d2}});
  j["triangle_isos"] = Json::array();
  for (const auto& r : f.triangle_isos)
    j["triangle_isos"].push_back({{"name", r.name}, {"from", r.from}, {"to", r.to}, {"a", r.a}, {"b", r.b}, {"c", r.c}});
  j["complexes"] = Json::object();
  for (const auto& [n, c] : f.complexes) j["complexes"][n] = complex_json(c);
  j["maps"] = Json::object();
  for (const auto& [n, m] : f.maps)
    j["maps"][n] = {{"src", endpoint_json(m.src(), f.complexes)},
                    {"tgt", endpoint_json(m.tgt(), f.complexes)},
                    {"comps", map_json(m, m.src().lo(), m.src().hi())}};
  j["graded_objects"] = Json::object();
  for (const auto& [n, a] : f.graded_objects) j["graded_objects"][n] = graded_json(a);
  j["graded_maps"] = Json::object();
  for (const auto& [n, m] : f.graded_maps)
    j["graded_maps"][n] = {{"src", endpoint_json(m.src(), f.graded_objects)},
                           {"tgt", endpoint_json(m.tgt(), f.graded_objects)},
                           {"comps", map_json(m, m.src().lo(), m.src().hi())}};
  j["det_data"] = Json::object();
  for (const auto& [spec, d] : file.det_data) j["det_data"][spec] = det_json(d);
  return j;
}

FragmentFile fragment_from_json(const Json& j) {
  static const std::set<std::string> known = {"kind",      "prime",    "objects",  "translation",    "isos",
                                              "triangles", "octahedra", "sums",    "triangle_isos",  "complexes",
                                              "maps",      "det_data", "graded_objects", "graded_maps", "generated"};
  if (!j.is_object()) fail("fragment", "expected an object");
  for (const auto& [k, v] : j.items())
    if (!known.contains(k)) fail(k, "unknown field");
  FragmentFile file;
  Fragment& f = file.fragment;
  if (j.contains("kind")) {
    std::string k = text(j["kind"], "kind");
    if (k == "exact") f.kind = FragmentKind::exact;
    else if (k != "triangulated") fail("kind", "expected 'triangulated' or 'exact'");
  }
  long long p = integer(field(j, "prime", ""), "prime");
  if (p < 2 || p >= 65536 || !is_prime(static_cast<std::uint64_t>(p))) fail("prime", "expected a prime below 65536");
  f.prime = static_cast<std::uint32_t>(p);
  const Json& objs = array(field(j, "objects", ""), "objects");
  for (std::size_t i = 0; i < objs.size(); ++i) f.objects.push_back(text(objs[i], at("objects", i)));

  auto obj_name = [&](const Json& x, const std::string& where) {
    std::string n = text(x, where);
    if (!f.has_object(n)) fail(where, "unknown object '" + n + "'");
    return n;
  };
  auto str = [&](const Json& rec, const char* key, const std::string& where) {
    return text(field(rec, key, where), dot(where, key));
  };
  auto list = [&](const char* key) -> const Json& {
    static const Json empty = Json::array();
    return j.contains(key) ? array(j[key], key) : empty;
  };

  if (j.contains("translation")) {
    if (!j["translation"].is_object()) fail("translation", "expected an object");
    for (const auto& [a, b] : j["translation"].items()) {
      if (!f.has_object(a)) fail(dot("translation", a), "unknown object '" + a + "'");
      f.translation[a] = obj_name(b, dot("translation", a));
    }
  }
  const Json& isos = list("isos");
  for (std::size_t i = 0; i < isos.size(); ++i) {
    std::string w = at("isos", i);
    IsoRecord r{str(isos[i], "name", w), obj_name(field(isos[i], "src", w), dot(w, "src")),
                obj_name(field(isos[i], "dst", w), dot(w, "dst")), std::nullopt};
    if (isos[i].contains("inverse")) r.inverse = str(isos[i], "inverse", w);
    f.isos.push_back(r);
  }
  const Json& tris = list("triangles");
  for (std::size_t i = 0; i < tris.size(); ++i) {
    std::string w = at("triangles", i);
    const Json& t = tris[i];
    f.triangles.push_back({str(t, "name", w), obj_name(field(t, "A", w), dot(w, "A")), obj_name(field(t, "B", w), dot(w, "B")),
                           obj_name(field(t, "C", w), dot(w, "C")), t.contains("a") ? str(t, "a", w) : "",
                           t.contains("b") ? str(t, "b", w) : "", t.contains("c") ? str(t, "c", w) : ""});
  }
  const Json& octs = list("octahedra");
  for (std::size_t i = 0; i < octs.size(); ++i) {
    std::string w = at("octahedra", i);
    f.octahedra.push_back({str(octs[i], "name", w), str(octs[i], "h1", w), str(octs[i], "h2", w), str(octs[i], "v1", w),
                           str(octs[i], "v2", w)});
  }
  const Json& sums = list("sums");
  for (std::size_t i = 0; i < sums.size(); ++i) {
    std::string w = at("sums", i);
    const Json& s = sums[i];
    f.sums.push_back({str(s, "name", w), obj_name(field(s, "A", w), dot(w, "A")), obj_name(field(s, "B", w), dot(w, "B")),
                      obj_name(field(s, "S", w), dot(w, "S")), str(s, "d1", w), str(s, "d2", w)});
  }
  const Json& tisos = list("triangle_isos");
  for (std::size_t i = 0; i < tisos.size(); ++i) {
    std::string w = at("triangle_isos", i);
    const Json& r = tisos[i];
    f.triangle_isos.push_back({str(r, "name", w), str(r, "from", w), str(r, "to", w), str(r, "a", w), str(r, "b", w), str(r, "c", w)});
  }

  auto named = [&](const char* key) {
    if (j.contains(key) && !j[key].is_object()) fail(key, "expected an object");
    return j.contains(key) ? j[key] : Json::object();
  };
  const Json complexes = named("complexes"), graded_objects = named("graded_objects"), maps = named("maps"),
             graded_maps = named("graded_maps"), det_data = named("det_data");
  for (const auto& [n, c] : complexes.items()) {
    if (!f.has_object(n)) fail(dot("complexes", n), "unknown object");
    f.complexes.emplace(n, complex_from(c, f.prime, dot("complexes", n)));
  }
  for (const auto& [n, g] : graded_objects.items()) {
    if (!f.has_object(n)) fail(dot("graded_objects", n), "unknown object");
    f.graded_objects.emplace(n, graded_from(g, f.prime, dot("graded_objects", n)));
  }
  auto parse_complex = [&](const Json& x, const std::string& w) { return complex_from(x, f.prime, w); };
  auto parse_graded = [&](const Json& x, const std::string& w) { return graded_from(x, f.prime, w); };
  for (const auto& [n, m] : maps.items()) {
    std::string w = dot("maps", n);
    Complex src = endpoint_from(field(m, "src", w), f.complexes, parse_complex, dot(w, "src"));
    Complex tgt = endpoint_from(field(m, "tgt", w), f.complexes, parse_complex, dot(w, "tgt"));
    try {
      f.maps.emplace(n, ChainMap(src, tgt, comps_from(field(m, "comps", w), f.prime, src, tgt, dot(w, "comps"))));
    } catch (const InputError& e) {
      if (std::string(e.what()).starts_with("maps.")) throw;
      fail(w, e.what());
    }
  }
  for (const auto& [n, m] : graded_maps.items()) {
    std::string w = dot("graded_maps", n);
    GradedObject src = endpoint_from(field(m, "src", w), f.graded_objects, parse_graded, dot(w, "src"));
    GradedObject tgt = endpoint_from(field(m, "tgt", w), f.graded_objects, parse_graded, dot(w, "tgt"));
    try {
      f.graded_maps.emplace(n, GradedMap(src, tgt, comps_from(field(m, "comps", w), f.prime, src, tgt, dot(w, "comps"))));
    } catch (const InputError& e) {
      if (std::string(e.what()).starts_with("graded_maps.")) throw;
      fail(w, e.what());
    }
  }
  try {
    f.validate();
  } catch (const InputError& e) {
    fail("fragment", e.what());
  }
  for (const auto& [spec, d] : det_data.items()) file.det_data.emplace(spec, det_from(d, spec, f, dot("det_data", spec)));
  return file;
}

FragmentFile read_fragment_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
  try {
    return fragment_from_json(j);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------- commands

namespace {

bool covers(const Fragment& f) {
  if (f.kind == FragmentKind::exact)
    return std::all_of(f.objects.begin(), f.objects.end(), [&](const std::string& n) { return f.graded_objects.contains(n); });
  return std::all_of(f.objects.begin(), f.objects.end(), [&](const std::string& n) { return f.complexes.contains(n); });
}

// Stored data for spec, or the graded-line determinant computed from the payload.
DetData data_for(const FragmentFile& file, const std::string& spec) {
  if (auto it = file.det_data.find(spec); it != file.det_data.end()) return it->second;
  const Fragment& f = file.fragment;
  ModelPtr m = parse_model(spec);
  auto* gl = dynamic_cast<const GradedLine*>(m.get());
  if (gl && gl->prime() == f.prime && covers(f)) {
    if (f.kind == FragmentKind::exact) {
      ExactDet v = vect_det(f.prime);
      return evaluate(f, functor_R(v, default_chooser(v.model)));
    }
    return evaluate(f, det_graded_functor(f.prime));
  }
  throw IncompleteData("no determinant data for model " + spec);
}

std::vector<DetData> all_models(const FragmentFile& file) {
  std::vector<DetData> out;
  for (const auto& [spec, d] : file.det_data) out.push_back(d);
  std::string own = "gradedline:" + std::to_string(file.fragment.prime);
  if (!file.det_data.contains(own) && covers(file.fragment)) out.push_back(data_for(file, own));
  return out;
}

std::string default_model(const FragmentFile& file) { return "gradedline:" + std::to_string(file.fragment.prime); }

Json report_json(const Report& r, std::size_t limit = 20) {
  Json failures = Json::array();
  for (std::size_t i = 0; i < std::min(limit, r.failures.size()); ++i) failures.push_back(r.failures[i]);
  return {{"ok", r.ok}, {"failures", failures}, {"failure_count", r.failures.size()}};
}

Json records_json(const Fragment& f) {
  return {{"objects", f.objects.size()}, {"isos", f.isos.size()},   {"triangles", f.triangles.size()},
          {"octahedra", f.octahedra.size()}, {"sums", f.sums.size()}, {"triangle_isos", f.triangle_isos.size()}};
}

void render_text(const Json& j, std::ostream& out, const std::string& indent = "") {
  for (const auto& [k, v] : j.items()) {
    if (v.is_object()) {
      out << indent << k << ":\n";
      render_text(v, out, indent + "  ");
    } else if (v.is_array() && !v.empty() && v[0].is_object()) {
      out << indent << k << ":\n";
      for (const auto& x : v) {
        out << indent << "  -\n";
        render_text(x, out, indent + "    ");
      }
    } else if (v.is_array() && !v.empty() && v[0].is_string() && v.size() > 1) {
      out << indent << k << ":\n";
      for (const auto& x : v) out << indent << "  " << x.get<std::string>() << "\n";
    } else {
      out << indent << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
  }
}

std::size_t budget_from_env() {
  const char* s = std::getenv("DF_BUDGET");
  if (!s || !*s) return default_budget;
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(s, &used);
    if (used != std::string(s).size()) throw std::invalid_argument(s);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw InputError(std::string("DF_BUDGET: not a number: ") + s);
  }
}

Json cmd_check(const FragmentFile& file, const std::string& spec, int& code) {
  DetData d = data_for(file, spec);
  const Fragment& f = file.fragment;
  Report r = f.kind == FragmentKind::exact ? check_exact_det_axioms(f, d) : check_det_axioms(f, d);
  code = r.ok ? exit_ok : exit_fail;
  Json j = report_json(r);
  j["command"] = "check";
  j["model"] = d.model->spec();
  j["kind"] = kind_name(f.kind);
  j["records"] = records_json(f);
  return j;
}

Json cmd_k0(const FragmentFile& file) {
  K0Result k = k0(file.fragment);
  Json torsion = Json::array(), moduli = Json::array(), basis = Json::array(), classes = Json::object();
  for (const auto& t : k.group.torsion) torsion.push_back(big_json(t));
  for (const auto& m : k.group.moduli) moduli.push_back(big_json(m));
  for (std::size_t i = 0; i < k.group.basis.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t c = 0; c < k.group.basis.cols(); ++c) row.push_back(big_json(k.group.basis(i, c)));
    basis.push_back(row);
  }
  for (const auto& [n, x] : k.classes) {
    Json v = Json::array();
    for (const auto& c : x) v.push_back(big_json(c));
    classes[n] = v;
  }
  return {{"command", "k0"},           {"group", k.group.describe()}, {"free_rank", k.group.free_rank},
          {"torsion", torsion},        {"generators", k.generators},  {"relations", k.relations},
          {"classes", classes},        {"smith", {{"moduli", moduli}, {"basis", basis}}}};
}

Json cmd_prove(const FragmentFile& file, const std::string& lhs, const std::string& rhs, std::size_t budget, int& code) {
  const Fragment& f = file.fragment;
  WordStore w(Signature::of(f));
  RuleSet rs = RuleSet::of(f, w);
  MorId a = w.parse_mor(lhs), b = w.parse_mor(rhs);
  Json j{{"command", "prove"}, {"lhs", w.show_mor(a)}, {"rhs", w.show_mor(b)}, {"budget", budget}};
  ProveResult r = prove_equal(w, rs, a, b, budget);
  j["nodes"] = r.nodes;
  if (r.status == ProveStatus::equal) {
    Json trace = Json::array();
    MorId t = a;
    for (const auto& st : r.proof.steps) {
      t = *apply_step(w, rs, t, st);
      trace.push_back({{"step", show_step(rs, st)}, {"word", w.show_mor(t)}});
    }
    j["status"] = "equal";
    j["trace"] = trace;
    code = exit_ok;
    return j;
  }
  auto models = all_models(file);
  RefuteResult ref = refute_equal(models, w, a, b);
  if (ref.refuted) {
    const DetData& d = models[ref.model];
    j["status"] = "different";
    j["model"] = d.model->spec();
    j["values"] = {d.model->show_elt(eval_word(d, w, a).val), d.model->show_elt(eval_word(d, w, b).val)};
    code = exit_fail;
    return j;
  }
  Json specs = Json::array();
  for (const auto& d : models) specs.push_back(d.model->spec());
  j["status"] = "unknown";
  j["models_tried"] = specs;
  code = exit_unknown;
  return j;
}

Json cmd_eval(const FragmentFile& file, const std::string& word, const std::string& spec) {
  WordStore w(Signature::of(file.fragment));
  MorId a = w.parse_mor(word);
  DetData d = data_for(file, spec);
  Mor v = eval_word(d, w, a);
  return {{"command", "eval"},  {"word", w.show_mor(a)},         {"model", d.model->spec()},
          {"domain", w.show(w.dom(a))}, {"object", d.model->show_obj(v.obj)}, {"value", d.model->show_elt(v.val)}};
}

Json cmd_tcompare(const FragmentFile& file, int rounds, std::uint64_t seed, int& code) {
  const Fragment& f = file.fragment;
  const std::uint32_t p = f.prime;
  ExactDet v = vect_det(p);
  RightInverseChooser ch = default_chooser(v.model);
  DetWithTranslation g = functor_R(v, ch);
  TriangleDet tri = det_graded_functor(p);
  Rng rng(seed);
  Fragment deg0 = random_graded_fragment(rng, p, rounds, true);
  Fragment graded = random_graded_fragment(rng, p, rounds, false);
  Fragment tris = random_triangle_fragment(rng, p, rounds, 3, 2).fragment();

  Json checks = Json::array();
  bool ok = true;
  auto add = [&](const char* name, const char* source, const Fragment& frag, const Report& r) {
    Json x = report_json(r);
    x["name"] = name;
    x["fragment"] = source;
    x["records"] = records_json(frag);
    ok = ok && r.ok;
    checks.push_back(x);
  };
  add("W(R(f)) = f", "random", deg0, check_composite_WR(deg0, v, ch));
  add("R(W(g)) = g", "random", graded, check_composite_RW(graded, g, ch));
  add("V(H*(g)) = g", "random", graded, check_composite_VHstar(graded, g));
  add("H*(V(f)) = f", "random", tris, check_composite_HstarV(tris, tri));
  if (covers(f) && !f.objects.empty()) {
    if (f.kind == FragmentKind::exact) {
      add("R(W(g)) = g", "file", f, check_composite_RW(f, g, ch));
      add("V(H*(g)) = g", "file", f, check_composite_VHstar(f, g));
    } else {
      add("H*(V(f)) = f", "file", f, check_composite_HstarV(f, tri));
    }
  }
  code = ok ? exit_ok : exit_fail;
  return {{"command", "tcompare"}, {"seed", seed}, {"rounds", rounds}, {"prime", p}, {"ok", ok}, {"checks", checks}};
}

Json cmd_gen(std::uint32_t p, int max_window, std::size_t max_dim, int count, std::uint64_t seed) {
  if (p < 2 || p >= 65536 || !is_prime(p)) throw InputError("--prime: expected a prime below 65536");
  if (max_window < 1) throw InputError("--max-window: must be positive");
  if (max_dim < 1) throw InputError("--max-dim: must be positive");
  Rng rng(seed);
  FragmentBuilder fb = random_triangle_fragment(rng, p, count, max_window, max_dim);
  Json j = to_json({fb.fragment(), {}});
  j["generated"] = {{"seed", seed}, {"prime", p}, {"max_window", max_window}, {"max_dim", max_dim}, {"count", count}};
  return j;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Determinant functors on finite fragments of triangulated and exact categories", "detfun");
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "json";
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));

  std::string path, spec, lhs, rhs, word;
  std::size_t budget = 0;
  int rounds = 20, max_window = 3, count = 5;
  std::uint64_t seed = 1;
  std::uint32_t prime = 5;
  std::size_t max_dim = 2;

  auto* check = app.add_subcommand("check", "Check the determinant axioms on every record");
  check->add_option("path", path)->required();
  check->add_option("--model", spec, "gradedline:P or discrete:a0=..;a1=..;eps=..");
  auto* k0c = app.add_subcommand("k0", "Grothendieck group of the fragment");
  k0c->add_option("path", path)->required();
  auto* prove = app.add_subcommand("prove", "Decide whether two morphism words are identified");
  prove->add_option("path", path)->required();
  prove->add_option("lhs", lhs)->required();
  prove->add_option("rhs", rhs)->required();
  auto* budget_opt = prove->add_option("--budget", budget, "Node budget (default DF_BUDGET or 100000)");
  auto* eval = app.add_subcommand("eval", "Value of a morphism word");
  eval->add_option("path", path)->required();
  eval->add_option("word", word)->required();
  eval->add_option("--model", spec);
  auto* tcompare = app.add_subcommand("tcompare", "Comparison isomorphisms between heart and complexes");
  tcompare->add_option("path", path)->required();
  tcompare->add_option("--rounds", rounds)->check(CLI::PositiveNumber);
  tcompare->add_option("--seed", seed);
  auto* gen = app.add_subcommand("gen", "Random fragment of complexes");
  gen->add_option("--prime", prime);
  gen->add_option("--max-window", max_window);
  gen->add_option("--max-dim", max_dim);
  gen->add_option("--count", count)->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", seed);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int c = app.exit(e, out, err);
    return c == 0 ? exit_ok : exit_fail;
  }

  int code = exit_ok;
  try {
    Json report;
    if (*gen) {
      out << cmd_gen(prime, max_window, max_dim, count, seed).dump(2) << "\n";
      return exit_ok;
    }
    FragmentFile file = read_fragment_file(path);
    if (spec.empty()) spec = default_model(file);
    if (*check) report = cmd_check(file, spec, code);
    else if (*k0c) report = cmd_k0(file);
    else if (*prove) report = cmd_prove(file, lhs, rhs, budget_opt->count() ? budget : budget_from_env(), code);
    else if (*eval) report = cmd_eval(file, word, spec);
    else if (*tcompare) report = cmd_tcompare(file, rounds, seed, code);
    if (format == "text") render_text(report, out);
    else out << report.dump(2) << "\n";
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return exit_fail;
  } catch (const IncompleteData& e) {
    err << "error: " << e.what() << "\n";
    return exit_fail;
  }
  return code;
}

}  // namespace detfun
