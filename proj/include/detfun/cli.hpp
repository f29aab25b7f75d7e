#pragma once

#include "detfun/fragments.hpp"

#include <json.hpp>

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace detfun {

using Json = nlohmann::json;

// A fragment together with the determinant data stored next to it, keyed by model spec.
struct FragmentFile {
  Fragment fragment;
  std::map<std::string, DetData> det_data;
  bool operator==(const FragmentFile& o) const;
};

// Canonical JSON: sorted keys, matrices as row lists, map endpoints by object name when the
// complex is a recorded object and inline otherwise.
Json to_json(const FragmentFile& f);
// Throws InputError prefixed with the location of the offending field, e.g. "triangles[2].B".
FragmentFile fragment_from_json(const Json& j);
FragmentFile read_fragment_file(const std::string& path);

// Exit codes of run_cli.
inline constexpr int exit_ok = 0;
inline constexpr int exit_fail = 1;
inline constexpr int exit_unknown = 2;

inline constexpr std::size_t default_budget = 100000;

// The detfun command line: check, k0, prove, eval, tcompare, gen. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace detfun
