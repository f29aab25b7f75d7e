#include <doctest.h>

#include "detfun/cli.hpp"
#include "detfun/errors.hpp"
#include "detfun/tstructure.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace detfun;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_file(const std::string& stem) {
  return fs::temp_directory_path() / ("detfun_" + stem + "_" + std::to_string(::getpid()) + ".json");
}

std::string write(const std::string& stem, const Json& j) {
  fs::path p = temp_file(stem);
  std::ofstream(p) << j.dump(2);
  return p.string();
}

std::string write(const std::string& stem, const Fragment& f) { return write(stem, to_json(FragmentFile{f, {}})); }

// 0, A and TA with A one-dimensional in degree 0.
Fragment shift_pair() {
  FragmentBuilder fb(5);
  fb.zero_triangle();
  fb.mu_triangle(Complex(5, 0, {1}, {}));
  return fb.fragment();
}

std::string error_of(const Json& j) {
  try {
    fragment_from_json(j);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("round trip of generated fragments") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    Rng rng(seed);
    Fragment tri = random_triangle_fragment(rng, 5, 3, 3, 2).fragment();
    FragmentFile a{tri, {{"gradedline:5", evaluate(tri, det_graded_functor(5))}}};
    Json j = to_json(a);
    FragmentFile b = fragment_from_json(Json::parse(j.dump()));
    CHECK(b == a);
    CHECK(to_json(b) == j);

    Fragment ex = random_graded_fragment(rng, 3, 3, seed % 2 == 0);
    FragmentFile c{ex, {}};
    FragmentFile d = fragment_from_json(to_json(c));
    CHECK(d == c);
    CHECK(d.fragment.kind == FragmentKind::exact);
  }
}

TEST_CASE("parse errors carry the location") {
  Rng rng(7);
  Json good = to_json(FragmentFile{random_triangle_fragment(rng, 5, 2, 3, 2).fragment(), {}});
  REQUIRE(good["triangles"].size() > 2);
  REQUIRE(error_of(good).empty());

  Json j = good;
  j["triangles"][2]["B"] = "nowhere";
  CHECK(error_of(j).find("triangles[2].B") == 0);

  j = good;
  j["prime"] = 6;
  CHECK(error_of(j).find("prime") == 0);

  j = good;
  j["isos"][0].erase("dst");
  CHECK(error_of(j).find("isos[0]: missing field 'dst'") == 0);

  j = good;
  j["surprise"] = 1;
  CHECK(error_of(j).find("surprise") == 0);

  j = good;
  std::string target;
  for (auto& [n, c] : j["complexes"].items())
    if (!c["diffs"].empty() && !c["diffs"][0].empty() && !c["diffs"][0][0].empty()) {
      c["diffs"][0][0][0] = 9;
      target = n;
      break;
    }
  REQUIRE(!target.empty());
  CHECK(error_of(j).find("complexes." + target + ".diffs[0][0][0]") == 0);

  j = good;
  j["det_data"] = {{"gradedline:5", {{"objects", {{j["objects"][0].get<std::string>(), {1, 2}}}}}}};
  CHECK(error_of(j).find("det_data.gradedline:5.objects.") == 0);
}

TEST_CASE("k0 of zero, A and TA") {
  std::string path = write("shift", shift_pair());
  Run r = run({"k0", path});
  CHECK(r.code == exit_ok);
  Json j = Json::parse(r.out);
  CHECK(j["group"] == "Z, rank 1");
  CHECK(j["free_rank"] == 1);
  Run t = run({"--format", "text", "k0", path});
  CHECK(t.out.find("group: Z, rank 1") != std::string::npos);
  fs::remove(path);
}

TEST_CASE("prove, refute and unknown exit codes") {
  Fragment f = shift_pair();
  std::string path = write("prove", f);
  const std::string x = f.objects.back();
  const std::string w = "(psi " + x + " " + x + ")";

  Run eq = run({"prove", path, "(comp (iota (tensor " + x + " " + x + ")) " + w + ")", w});
  CHECK(eq.code == exit_ok);
  Json j = Json::parse(eq.out);
  CHECK(j["status"] == "equal");
  REQUIRE(j["trace"].size() == 1);
  CHECK(j["trace"][0]["word"] == w);

  Run diff = run({"prove", path, w, "(iota (tensor " + x + " " + x + "))"});
  CHECK(diff.code == exit_fail);
  CHECK(Json::parse(diff.out)["status"] == "different");

  const std::string deep = "(comp (iota " + x + ") (comp (iota " + x + ") (iota " + x + ")))";
  Run unk = run({"prove", path, deep, "(iota " + x + ")", "--budget", "0"});
  CHECK(unk.code == exit_unknown);
  CHECK(Json::parse(unk.out)["status"] == "unknown");
  CHECK(run({"prove", path, deep, "(iota " + x + ")"}).code == exit_ok);

  ::setenv("DF_BUDGET", "0", 1);
  CHECK(run({"prove", path, deep, "(iota " + x + ")"}).code == exit_unknown);
  CHECK(run({"prove", path, deep, "(iota " + x + ")", "--budget", "50"}).code == exit_ok);
  ::setenv("DF_BUDGET", "lots", 1);
  CHECK(run({"prove", path, deep, "(iota " + x + ")"}).code == exit_fail);
  ::unsetenv("DF_BUDGET");

  Run bad = run({"prove", path, "(iota " + x + ")", "(iota nowhere)"});
  CHECK(bad.code == exit_fail);
  CHECK(!bad.err.empty());
  fs::remove(path);
}

TEST_CASE("eval, check and tcompare on a generated file") {
  Run g = run({"gen", "--seed", "11", "--count", "2"});
  REQUIRE(g.code == exit_ok);
  Json gj = Json::parse(g.out);
  CHECK(gj["generated"]["seed"] == 11);
  std::string path = write("gen", gj);

  Run c = run({"check", path});
  CHECK(c.code == exit_ok);
  CHECK(Json::parse(c.out)["ok"] == true);

  const std::string x = gj["objects"][1];
  Run e = run({"eval", path, "(psi " + x + " " + x + ")"});
  CHECK(e.code == exit_ok);
  Json ej = Json::parse(e.out);
  CHECK(ej["model"] == "gradedline:5");
  CHECK(run({"eval", path, "(iota " + x + ")", "--model", "gradedline:7"}).code == exit_fail);

  Run t = run({"tcompare", path, "--rounds", "3", "--seed", "9"});
  CHECK(t.code == exit_ok);
  Json tj = Json::parse(t.out);
  CHECK(tj["seed"] == 9);
  CHECK(tj["ok"] == true);
  CHECK(run({"tcompare", path, "--rounds", "3", "--seed", "9"}).out == t.out);
  fs::remove(path);
}

TEST_CASE("gen is deterministic") {
  Run a = run({"gen", "--seed", "5", "--prime", "3"});
  Run b = run({"gen", "--seed", "5", "--prime", "3"});
  Run c = run({"gen", "--seed", "6", "--prime", "3"});
  CHECK(a.code == exit_ok);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
  CHECK(run({"gen", "--prime", "8"}).code == exit_fail);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == exit_fail);
  CHECK(run({"k0"}).code == exit_fail);
  CHECK(run({"k0", "/nonexistent/file.json"}).code == exit_fail);
  CHECK(run({"frobnicate"}).code == exit_fail);
  CHECK(run({"--help"}).code == exit_ok);
}

TEST_CASE("installed binary") {
  const char* bin = std::getenv("DETFUN_CLI");
  if (!bin) {
    MESSAGE("DETFUN_CLI not set");
    return;
  }
  fs::path out = temp_file("bin");
  std::string cmd = std::string("\"") + bin + "\" gen --seed 21 --count 2 > \"" + out.string() + "\"";
  REQUIRE(std::system(cmd.c_str()) == 0);
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == run({"gen", "--seed", "21", "--count", "2"}).out);
  std::string k0 = std::string("\"") + bin + "\" k0 \"" + out.string() + "\" > /dev/null";
  CHECK(std::system(k0.c_str()) == 0);
  fs::remove(out);
}
