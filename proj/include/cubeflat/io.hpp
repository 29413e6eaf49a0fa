#pragma once

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

#include "cubeflat/cube_complex.hpp"
#include "cubeflat/flat.hpp"
#include "cubeflat/lattice.hpp"
#include "cubeflat/wallspace.hpp"

namespace cubeflat {

using json = nlohmann::json;

// Malformed input document (wrong shape or types).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// {"vertices": N, "edges": [[u, v, hyperplane], ...]}, edges sorted.
json complex_to_json(const CubeComplex& c);
CubeComplex complex_from_json(const json& j, ValidationOptions options = {});

// {"points": N, "walls": [[left-side point ids], ...]}
json wallspace_to_json(const Wallspace& w);
Wallspace wallspace_from_json(const json& j);

// {"rank": p, "classes": [{"direction": [...], "period": "a/b", "reps": [...],
//   "crossing": {"(j,j')": {"kind": ..., "lo": ..., "hi": ...}}}]}
// Missing table entries are filled from the opposite entry, else empty.
json periodic_to_json(const PeriodicWallspace& pw);
PeriodicWallspace periodic_from_json(const json& j);

json interval_to_json(const CrossingInterval& c);
CrossingInterval interval_from_json(const json& j);

// {"rank": p, "k": k, "lattices": [[[generator], ...], ...]}
struct IntersectionData {
  std::size_t p = 0;
  std::size_t k = 0;
  std::vector<Sublattice> lattices;
};
IntersectionData intersections_from_json(const json& j);

json to_json(const WallRef& w);
json to_json(const OrbitPairClass& c);
json to_json(const ObstructionReport& r);
json to_json(const DichotomyReport& r);
json to_json(const PushoffResult& r);
json to_json(const QuasilineCertificate& c);
json to_json(const ValidationError& e);

json vertex_list(const VertexSet& s);

}  // namespace cubeflat
